"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line that the terminal summary prints.
"""

import math
import random
import time
from fractions import Fraction

from symdiag import critical, oracle, smoothasm, verify
from symdiag import symmlin as sl
from symdiag.polyroots import find_roots, minimal_modulus_roots
from symdiag.smoothasm import Regime
from symdiag.symmlin import SymPoly


def test_01_kernel_identity(criterion):
    rng = random.Random(2024)
    t0 = time.perf_counter()
    bad = []
    for _ in range(20):
        d = rng.choice((2, 3, 4))
        cs = [Fraction(rng.randint(-50, 50), 10) for _ in range(d)]
        q = SymPoly(d, [1, *cs])
        N = {2: 12, 3: 7, 4: 4}[d]
        if not oracle.is_delta(oracle.kernel_product(q, oracle.expand(q, N))):
            bad.append(q.to_text())
    dt = time.perf_counter() - t0
    ok = not bad and dt < 30
    assert criterion(1, "kernel identity Q * expand(Q) = delta", ok, f"20 polynomials, {dt:.1f}s")


def test_02_all_ones(criterion):
    arr = oracle.expand(SymPoly(3, [1, -1, 1, -1]), 10)
    ok = all(v == 1 for v in arr.values.flat)
    assert criterion(2, "all-ones family on the 11^3 box", ok)


def test_03_central_multinomials(criterion):
    worst = 0.0
    const_err = []
    for d, want in ((2, 1 / math.sqrt(math.pi)), (3, math.sqrt(3) / (2 * math.pi))):
        est = smoothasm.asm_grz(0, d)
        const_err.append(abs(est.terms[0].constant - want) / want)
        for n in range(10, 41):
            exact = math.factorial(d * n) // math.factorial(n) ** d
            worst = max(worst, n * est.relative_error(n, exact) / 2)
    ok = worst <= 1 and max(const_err) < 1e-6
    assert criterion(3, "Stirling cross-check for C(2n,n) and (3n)!/n!^3", ok,
                     f"max n*err/2 = {worst:.3f}, constant error {max(const_err):.1e}")


def test_04_m3_asymptotics(criterion):
    t0 = time.perf_counter()
    lines, ok = [], True
    for a, b in ((0, 1), (-1, 2), (2, -9), (0, 8)):
        est = smoothasm.asm_m3(a, b)
        seq = oracle.diagonal(oracle.expand(SymPoly.m3(a, b), 30))
        errs = {n: est.relative_error(n, seq[n]) for n in range(15, 31)}
        # oscillating estimates: compare the error envelope of the two halves
        falling = max(errs[n] for n in range(23, 31)) < max(errs[n] for n in range(15, 23))
        good = errs[30] <= 0.10 and falling
        ok &= good
        lines.append(f"({a},{b}) err30={errs[30]:.3f}{'' if good else ' FAIL'}")
    dt = time.perf_counter() - t0
    ok &= dt < 60
    assert criterion(4, "M3 estimate within 10% at n=30, error falling", ok, "; ".join(lines))


# a-values per branch; red-branch values make 1-a a square so the bound is rational
BRANCHES = {
    "blue": [Fraction(-5), Fraction(-4), Fraction(-7, 2)],
    "red": [Fraction(-5, 4), Fraction(0), Fraction(3, 4)],
    "green": [Fraction(3, 2), Fraction(2), Fraction(3)],
}


def _bound(branch, a):
    if branch == "blue":
        return -9 * a
    if branch == "green":
        return -a**3
    s = Fraction(math.isqrt((1 - a).numerator), math.isqrt((1 - a).denominator))
    assert s * s == 1 - a
    return 2 - 3 * a + 2 * s**3


def test_05_regimes_vs_signs(criterion):
    bad = []
    for branch, avals in BRANCHES.items():
        for a in avals:
            bd = _bound(branch, a)
            assert smoothasm.classify_m3(a, bd).kind is Regime.BOUNDARY
            for off in (Fraction(-1, 2), Fraction(1, 2)):
                b = bd + off
                kind = smoothasm.classify_m3(a, b).kind
                seq = oracle.diagonal(oracle.expand(SymPoly.m3(a, b), 30))
                if kind is Regime.EVENTUALLY_POSITIVE:
                    good = off < 0 and all(v > 0 for v in seq[15:])
                else:
                    good = off > 0 and kind is Regime.SIGN_CHANGES and oracle.sign_changes(seq) >= 1
                if not good:
                    bad.append(f"{branch} ({a},{b}) {kind.value}")
    ok = not bad
    assert criterion(5, "regime labels vs oracle signs, 3x3 grid per branch", ok,
                     "failing: " + ", ".join(bad) if bad else "18 off-curve points")


def test_06_grz_threshold(criterion):
    eps = Fraction(1, 10**12)
    ok = True
    for d in range(3, 9):
        cs = critical.critical_parameter(d)
        kinds = [smoothasm.classify_grz(cs + e, d).kind for e in (-eps, 0, eps)]
        ok &= kinds == [Regime.EVENTUALLY_POSITIVE, Regime.BOUNDARY, Regime.SIGN_CHANGES]
    assert criterion(6, "GRZ transition exactly at (d-1)^(d-1), d=3..8", ok)


def test_07_operator_self_check(criterion):
    quo = oracle.remove_factor(oracle.grz_d4_operator(27), (-1, 81), 4)
    ok = quo is not None and quo.coeffs == oracle.l27_operator().coeffs
    assert criterion(7, "c=27 operator divisible by (81z-1)^4 with quotient L_27", ok)


def test_08_recurrence_vs_convolution(criterion):
    t0 = time.perf_counter()
    bad = []
    for c in (0, 1, 26, 27, 28, 100):
        rec = oracle.ode_to_recurrence(oracle.grz_d4_operator(c))
        init = oracle.diagonal(oracle.expand(SymPoly.grz(c, 4), max(rec.initial_needed, 1) - 1))
        if oracle.run_recurrence(rec, init, 8) != oracle.diagonal(oracle.expand(SymPoly.grz(c, 4), 8)):
            bad.append(c)
    dt = time.perf_counter() - t0
    ok = not bad and dt < 120
    assert criterion(8, "recurrence matches convolution for n <= 8", ok, f"{dt:.1f}s")


def test_09_growth_drop(criterion):
    t0 = time.perf_counter()
    s27 = smoothasm.growth_drop_scan(27, 4, 200)
    ok = 8.5 <= s27.per_step <= 9.5 and s27.drop_detected
    parts = [f"c=27: {s27.per_step:.3f} (raw {s27.raw_growth**4:.3f})"]
    for c in (26, 28):
        s = smoothasm.growth_drop_scan(c, 4, 200)
        pred = smoothasm.growth_rate(c, 4, per_step=True)
        good = abs(s.per_step / pred - 1) <= 0.05 and s.per_step > 70 and not s.drop_detected
        ok &= good
        parts.append(f"c={c}: {s.per_step:.2f} vs {pred:.2f}")
    dt = time.perf_counter() - t0
    ok &= dt < 60
    assert criterion(9, "growth drop 81 -> 9 at c=27, none at c=26, 28", ok, "; ".join(parts))


def test_10_critical_roots(criterion):
    ok = True
    for d in range(3, 9):
        cs = critical.critical_parameter(d)
        q = SymPoly.grz(cs, d)
        exact = sl.codiagonal_exact(q)
        x = Fraction(1, d - 1)
        # exact double root: p(x) = p'(x) = 0, p''(x) != 0
        p = lambda t: sum(c * t**k for k, c in enumerate(exact))  # noqa: E731
        dp = lambda t: sum(k * c * t ** (k - 1) for k, c in enumerate(exact) if k)  # noqa: E731
        d2p = sum(k * (k - 1) * c * x ** (k - 2) for k, c in enumerate(exact) if k > 1)
        ok &= p(x) == 0 and dp(x) == 0 and d2p != 0
        mins = minimal_modulus_roots(find_roots(sl.codiagonal(q)))
        ok &= len(mins) == 1 and mins[0][1] == 2 and abs(mins[0][0] - x) < 1e-8
        above = minimal_modulus_roots(find_roots(sl.codiagonal(SymPoly.grz(cs + 1, d))))
        ok &= len(above) == 2 and abs(above[0][0] - above[1][0].conjugate()) < 1e-8
        ok &= all(abs(r.imag) > 1e-8 for r, _ in above)
    assert criterion(10, "double root 1/(d-1) at c_*, conjugate pair at c_*+1", ok)


def test_11_delta1(criterion):
    vals = {c: oracle.diagonal(oracle.expand(SymPoly.grz(c, 4), 1))[1] for c in (23, 24, 25)}
    ok = all(v == 24 - c for c, v in vals.items()) and vals[23] > 0 and vals[24] == 0 and vals[25] < 0
    assert criterion(11, "delta_1 = 24 - c, sign change at c = 24", ok, str(vals))


def test_12_determinism(criterion):
    reports = []
    for _ in range(2):
        res = verify.run_checks(seed=5)
        reports.append(verify.format_report(res) + verify.json_report(res, 5, None))
    ok = reports[0] == reports[1]
    assert criterion(12, "verify reports byte-identical for equal seeds", ok)
