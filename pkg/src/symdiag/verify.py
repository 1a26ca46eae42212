"""Self-check suite behind ``symdiag verify``.

Each check returns ``(ok, detail)``.  The suite is deterministic for a
given seed; the seed only moves sampling points, never the verdicts.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import critical, oracle, smoothasm
from . import symmlin as sl
from .polyroots import find_roots, minimal_modulus_roots
from .symmlin import SymPoly

FAULTS = ("operator",)


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str


def _rel(a, b) -> float:
    return abs(a - b) / abs(b)


def _random_sympoly(rng: random.Random) -> SymPoly:
    d = rng.choice((2, 3))
    cs = [1] + [Fraction(rng.randint(-10, 10), rng.randint(1, 4)) for _ in range(d)]
    return SymPoly(d, cs)


def check_kernel_identity(rng, fault):
    polys = [_random_sympoly(rng) for _ in range(4)]
    bad = [q.to_text() for q in polys
           if not oracle.is_delta(oracle.kernel_product(q, oracle.expand(q, 5)))]
    return not bad, f"{len(polys)} random polynomials" + (f"; failed: {bad}" if bad else "")


def check_all_ones(rng, fault):
    arr = oracle.expand(SymPoly.m3(1, -1), 6)
    ok = all(v == 1 for v in arr.values.flat)
    return ok, "1 - e1 + e2 - e3 gives a_r = 1 on the 7^3 box"


def _operator_terms(fault):
    terms = list(oracle.GRZ_D4_TERMS)
    if fault == "operator":
        # flip one printed coefficient: 4cz -> 5cz on the third-order term
        k, text = terms[0]
        terms[0] = (k, text.replace("+4cz-", "+5cz-"))
    return tuple(terms)


def check_operator_divisibility(rng, fault):
    op = oracle.grz_d4_operator(27, _operator_terms(fault))
    quo = oracle.remove_factor(op, (Fraction(-1), Fraction(81)), 4)
    if quo is None:
        return False, "c=27 operator is not divisible by (81z-1)^4"
    ok = quo.coeffs == oracle.l27_operator().coeffs
    return ok, "quotient by (81z-1)^4 " + ("equals" if ok else "differs from") + " L_27"


def check_recurrence_agreement(rng, fault):
    terms = _operator_terms(fault)
    bad = []
    for c in (0, 1, 27, 28):
        try:
            rec = oracle.recurrence_diagonal(c, 6, terms)
        except Exception as exc:  # a corrupted operator may break the run
            bad.append(f"c={c}: {exc}")
            continue
        if rec != oracle.diagonal(oracle.expand(SymPoly.grz(c, 4), 6)):
            bad.append(f"c={c}")
    return not bad, "d=4 recurrence vs convolution, n <= 6" + (f"; mismatch {bad}" if bad else "")


def check_stirling_d2(rng, fault):
    t = smoothasm.asm_grz(0, 2).terms[0]
    err = _rel(t.constant, 1 / math.sqrt(math.pi))
    return err < 1e-6 and abs(t.base - 4) < 1e-9, f"C(2n,n): constant rel. error {err:.1e}"


def check_stirling_d3(rng, fault):
    t = smoothasm.asm_grz(0, 3).terms[0]
    err = _rel(t.constant, math.sqrt(3) / (2 * math.pi))
    return err < 1e-6 and abs(t.base - 27) < 1e-9, f"(3n)!/n!^3: constant rel. error {err:.1e}"


def check_specialization(rng, fault):
    c = Fraction(rng.randint(1, 30), 10)
    m, g = smoothasm.asm_m3(0, c), smoothasm.asm_grz(c, 3)
    errs = [_rel(a.constant, b.constant) for a, b in zip(m.terms, g.terms)]
    ok = len(m.terms) == len(g.terms) and max(errs) < 1e-9
    return ok, f"M3(a=0, b={c}) against GRZ(c={c}, d=3): max rel. diff {max(errs):.1e}"


def check_m3_closed_form(rng, fault):
    worst = 0.0
    for a, b in ((0, 1), (-1, 2), (0, 8), (Fraction(1, 2), 3)):
        for t in smoothasm.asm_m3(a, b).terms:
            x = t.source_point[0]
            worst = max(worst, _rel(t.constant, smoothasm.m3_closed_form(a, b, x)))
    return worst < 1e-9, f"reduced M3 constant vs general engine: {worst:.1e}"


def check_grz_closed_form(rng, fault):
    worst = 0.0
    for c, d in ((1, 3), (2, 3), (10, 4), (100, 5)):
        t = smoothasm.asm_grz(c, d).terms[0]
        worst = max(worst, _rel(t.constant, smoothasm.grz_closed_form(c, d, t.source_point[0].real)))
    return worst < 1e-9, f"reduced GRZ constant vs general engine: {worst:.1e}"


def check_critical_roots(rng, fault):
    bad = []
    for d in range(3, 9):
        cs = critical.critical_parameter(d)
        mins = minimal_modulus_roots(find_roots(sl.codiagonal(SymPoly.grz(cs, d))))
        if len(mins) != 1 or mins[0][1] != 2 or abs(mins[0][0] - 1 / (d - 1)) > 1e-8:
            bad.append(d)
        above = minimal_modulus_roots(find_roots(sl.codiagonal(SymPoly.grz(cs + 1, d))))
        if len(above) != 2 or any(abs(x.imag) < 1e-8 for x, _ in above):
            bad.append(d)
    return not bad, "double root 1/(d-1) at c_*, conjugate pair at c_*+1, d=3..8" + (
        f"; failed d={sorted(set(bad))}" if bad else "")


def check_delta1(rng, fault):
    vals = {c: oracle.diagonal(oracle.expand(SymPoly.grz(c, 4), 1))[1] for c in (23, 24, 25)}
    ok = all(v == 24 - c for c, v in vals.items())
    return ok, "delta_1 = 24 - c for c in {23, 24, 25}"


def check_threshold(rng, fault):
    bad = []
    for d in range(3, 9):
        cs = critical.critical_parameter(d)
        kinds = [smoothasm.classify_grz(cs + e, d).kind for e in (-1, 0, 1)]
        if kinds != [smoothasm.Regime.EVENTUALLY_POSITIVE, smoothasm.Regime.BOUNDARY,
                     smoothasm.Regime.SIGN_CHANGES]:
            bad.append(d)
        if critical.detect_singularity(cs, d).tangent_cone_label is not critical.ConeLabel.E2_CONE:
            bad.append(d)
    return not bad, "GRZ regime switches exactly at (d-1)^(d-1), d=3..8"


def check_offdiagonal(rng, fault):
    seed = rng.randint(0, 2**31)
    ok = all(critical.grz_offdiagonal_check(c, d, starts=25, seed=seed)
             for c, d in ((3, 3), (27, 4), (100, 5)))
    return ok, "Newton from random torus starts finds only diagonal critical points"


def check_minimality(rng, fault):
    seed = rng.randint(0, 2**31)
    q = SymPoly.grz(3, 3)
    rho = minimal_modulus_roots(find_roots(sl.codiagonal(q)))[0][0]
    inner = critical.verify_minimality(q, (rho,) * 3, samples=100, seed=seed)
    q2 = SymPoly.m3(0, 4)
    outer = critical.verify_minimality(q2, (-1, -1, -1), samples=20, seed=seed)
    return inner and not outer, "sampled polydisks: minimal point passes, outer root fails"


def check_log_gradient_sign(rng, fault):
    c, d = Fraction(7), 4
    z = [Fraction(rng.randint(1, 9), rng.randint(2, 9)) for _ in range(d)]
    g = sl.grad_log(SymPoly.grz(c, d), z)
    ed = math.prod(z)
    ok = all(g[j] == -z[j] + c * ed for j in range(d))
    return ok, "GRZ log-gradient equals -z_j + c e_d exactly"


def check_m3_signs(rng, fault):
    bad = []
    for a, b in ((0, 1), (-1, 2), (-4, 30)):
        s = oracle.diagonal(oracle.expand(SymPoly.m3(a, b), 24))
        if oracle.sign_profile(s, 15) is not oracle.SignProfile.ALL_POSITIVE:
            bad.append((a, b))
    s = oracle.diagonal(oracle.expand(SymPoly.m3(0, 8), 24))
    if oracle.sign_changes(s) == 0:
        bad.append((0, 8))
    return not bad, "regime labels agree with oracle signs at four M3 points"


CHECKS: tuple[tuple[str, Callable], ...] = (
    ("kernel_identity", check_kernel_identity),
    ("all_ones_family", check_all_ones),
    ("operator_divisibility_c27", check_operator_divisibility),
    ("recurrence_vs_convolution", check_recurrence_agreement),
    ("stirling_d2", check_stirling_d2),
    ("stirling_d3", check_stirling_d3),
    ("m3_grz_specialization", check_specialization),
    ("m3_reduced_constant", check_m3_closed_form),
    ("grz_reduced_constant", check_grz_closed_form),
    ("critical_root_structure", check_critical_roots),
    ("delta1_threshold", check_delta1),
    ("grz_threshold", check_threshold),
    ("grz_offdiagonal", check_offdiagonal),
    ("minimality_sampling", check_minimality),
    ("log_gradient_sign", check_log_gradient_sign),
    ("m3_oracle_signs", check_m3_signs),
)


def run_checks(seed: int = 0, fault: str | None = None) -> list[CheckResult]:
    if fault is not None and fault not in FAULTS:
        raise ValueError(f"unknown fault {fault!r}; choose from {FAULTS}")
    rng = random.Random(seed)
    out = []
    for name, fn in CHECKS:
        try:
            ok, detail = fn(rng, fault)
        except Exception as exc:
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(CheckResult(name, bool(ok), detail))
    return out


def format_report(results) -> str:
    lines = [f"{'PASS' if r.ok else 'FAIL'}  {r.name}: {r.detail}" for r in results]
    passed = sum(r.ok for r in results)
    lines.append(f"{passed}/{len(results)} checks passed")
    return "\n".join(lines) + "\n"


def json_report(results, seed: int, fault: str | None) -> str:
    data = {
        "seed": seed,
        "fault": fault,
        "passed": sum(r.ok for r in results),
        "failed": sum(not r.ok for r in results),
        "checks": [{"name": r.name, "status": "pass" if r.ok else "fail", "detail": r.detail}
                   for r in results],
    }
    return json.dumps(data, indent=2, sort_keys=True) + "\n"
