"""Exact ground-truth coefficients.

Everything here is exact: ``int``/``Fraction`` only.  Coefficients of
``1/Q`` come from the kernel recurrence ``Q * F = 1``; for the four-variable
GRZ family the diagonal is also available from a P-recurrence obtained by
translating its annihilating differential operator.
"""

from __future__ import annotations

import enum
import json
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from pathlib import Path
from typing import Sequence

import numpy as np

from . import qpoly
from .errors import (
    BudgetExceeded,
    DegenerateOperator,
    LeadingZero,
    OracleUnavailable,
    ParseError,
    ZeroConstantTerm,
)
from .symmlin import SymPoly

MAX_DIM = 6
DEFAULT_MAX_ENTRIES = 10**8
BUDGET_ENV = "SYMDIAG_MAX_ENTRIES"


def max_entries() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_MAX_ENTRIES
    try:
        return int(float(raw))
    except ValueError as exc:
        raise ParseError(f"{BUDGET_ENV}={raw!r} is not a number") from exc


def _exact(v):
    if isinstance(v, Fraction) and v.denominator == 1:
        return int(v)
    return v


# -- multivariate expansion ------------------------------------------------

@dataclass(frozen=True)
class CoeffArray:
    d: int
    box: int
    values: np.ndarray  # object dtype, shape (box + 1,) * d

    def __getitem__(self, r):
        return self.values[tuple(r)]


def _subset_terms(q: SymPoly, strides: Sequence[int], integral: bool):
    d = q.d
    cs = [int(c) if integral else c for c in q.e_coeffs]
    terms = []
    for mask in range(1 << d):
        entries = []
        sub = mask
        while sub:
            k = bin(sub).count("1")
            if cs[k]:
                off = sum(strides[j] for j in range(d) if sub >> j & 1)
                entries.append((off, cs[k]))
            sub = (sub - 1) & mask
        terms.append(tuple(entries))
    return terms


def expand(q: SymPoly, N: int) -> CoeffArray:
    """Coefficients ``a_r`` of ``1/Q`` for every ``r`` in ``[0, N]^d``.

    Uses ``a_r = [r = 0] - sum_{0 != s <= r} q_s a_{r - s}`` (``Q(0) = 1``),
    where ``s`` runs over 0/1 vectors and ``q_s`` is the ``e_{|s|}``
    coefficient.
    """
    if q.e_coeffs[0] == 0:
        raise ZeroConstantTerm("Q(0) must be nonzero")
    if N < 0:
        raise ValueError("N must be nonnegative")
    d = q.d
    size = (N + 1) ** d
    if d > MAX_DIM or size > max_entries():
        raise BudgetExceeded(f"box of {size} entries in d={d} exceeds the budget")

    integral = q.is_integral
    strides = [(N + 1) ** (d - 1 - j) for j in range(d)]
    terms = _subset_terms(q, strides, integral)
    vals: list = [0] * size
    bits = [1 << j for j in range(d)]
    for flat, r in enumerate(product(range(N + 1), repeat=d)):
        mask = 0
        for j in range(d):
            if r[j]:
                mask |= bits[j]
        acc = 1 if flat == 0 else 0
        for off, cf in terms[mask]:
            acc -= cf * vals[flat - off]
        vals[flat] = acc
    if not integral:
        vals = [_exact(v) for v in vals]
    arr = np.empty(size, dtype=object)
    arr[:] = vals
    return CoeffArray(d, N, arr.reshape((N + 1,) * d))


def kernel_product(q: SymPoly, arr: CoeffArray) -> np.ndarray:
    """``Q * F`` truncated to the box; equals the delta array for ``F = 1/Q``."""
    d, N = arr.d, arr.box
    out = np.empty_like(arr.values)
    for r in product(range(N + 1), repeat=d):
        acc = 0
        for s in product((0, 1), repeat=d):
            if all(sj <= rj for sj, rj in zip(s, r)):
                c = q.e_coeffs[sum(s)]
                if c:
                    acc += c * arr.values[tuple(rj - sj for rj, sj in zip(r, s))]
        out[r] = _exact(Fraction(acc)) if not isinstance(acc, int) else acc
    return out


def is_delta(values: np.ndarray) -> bool:
    flat = values.reshape(-1)
    return flat[0] == 1 and all(v == 0 for v in flat[1:])


def diagonal(arr: CoeffArray) -> list:
    """``(a_{0,...,0}, a_{1,...,1}, ..., a_{N,...,N})``."""
    return [arr.values[(n,) * arr.d] for n in range(arr.box + 1)]


# -- sign patterns ---------------------------------------------------------

class SignProfile(enum.Enum):
    ALL_POSITIVE = "AllPositive"
    ALL_NEGATIVE = "AllNegative"
    MIXED_SIGNS = "MixedSigns"
    HAS_ZEROS = "HasZeros"


def sign_profile(seq: Sequence, n_from: int = 0) -> SignProfile:
    if len(seq) <= n_from:
        raise ValueError("sequence too short for n_from")
    tail = seq[n_from:]
    if any(v == 0 for v in tail):
        return SignProfile.HAS_ZEROS
    if all(v > 0 for v in tail):
        return SignProfile.ALL_POSITIVE
    if all(v < 0 for v in tail):
        return SignProfile.ALL_NEGATIVE
    return SignProfile.MIXED_SIGNS


def sign_changes(seq: Sequence) -> int:
    signs = [v > 0 for v in seq if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


# -- differential operators and recurrences ---------------------------------

@dataclass(frozen=True)
class DiffOp:
    """``sum_i coeffs[i](z) (d/dz)^i``; each coefficient is an exact ``QPoly``."""

    coeffs: tuple

    def __init__(self, coeffs: Sequence[Sequence]):
        cs = [qpoly.norm(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        if not cs:
            raise DegenerateOperator("operator has no nonzero coefficient")
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def apply_to_series(self, f: Sequence, n_terms: int) -> list:
        """Coefficients ``z^0..z^{n_terms-1}`` of ``L f`` for a truncated series ``f``."""
        out = [Fraction(0)] * n_terms
        for i, q in enumerate(self.coeffs):
            for a, coef in enumerate(q):
                if not coef:
                    continue
                for m in range(i, len(f)):
                    n = m - i + a
                    if n < n_terms:
                        out[n] += coef * qpoly.evaluate(qpoly.falling(0, i), m) * f[m]
        return [_exact(v) for v in out]

    @classmethod
    def from_strings(cls, terms: Sequence[tuple[int, str]], var: str = "z") -> "DiffOp":
        """Build from ``(derivative order, polynomial text)`` pairs."""
        order = max(k for k, _ in terms)
        coeffs: list = [()] * (order + 1)
        for k, text in terms:
            coeffs[k] = qpoly.add(coeffs[k], parse_poly(text, var))
        return cls(coeffs)

    def to_json(self, var: str = "z") -> str:
        return json.dumps([[i, qpoly.to_str(c, var)] for i, c in enumerate(self.coeffs)])


def load_diffop(path: str | Path, var: str = "z") -> DiffOp:
    """Read a JSON list of ``[order, "polynomial"]`` pairs."""
    data = json.loads(Path(path).read_text())
    try:
        return DiffOp.from_strings([(int(k), str(s)) for k, s in data], var)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad operator file {path}: {exc}") from exc


def parse_poly(text: str, var: str = "z", **values) -> tuple:
    """Exact coefficients of a polynomial written in the usual notation.

    Implicit multiplication and ``^`` are accepted (``"3z(162z^2+21z+1)"``);
    extra symbols are substituted from ``values``.
    """
    import sympy
    from sympy.parsing.sympy_parser import (
        convert_xor,
        implicit_multiplication_application,
        parse_expr,
        standard_transformations,
    )

    syms = {name: sympy.Symbol(name) for name in [var, *values]}
    try:
        expr = parse_expr(
            text,
            local_dict=syms,
            transformations=standard_transformations + (implicit_multiplication_application, convert_xor),
        )
    except Exception as exc:  # sympy raises a zoo of types here
        raise ParseError(f"cannot parse polynomial {text!r}") from exc
    expr = expr.subs({syms[k]: sympy.Rational(str(v)) for k, v in values.items()})
    poly = sympy.Poly(sympy.expand(expr), syms[var])
    if poly.free_symbols - {syms[var]}:
        raise ParseError(f"unexpected symbols in {text!r}")
    coeffs = poly.all_coeffs()[::-1]
    return qpoly.norm(Fraction(int(c.p), int(c.q)) for c in map(sympy.Rational, coeffs))


@dataclass(frozen=True)
class Recurrence:
    """``sum_j polys[j](n) f(n + j) = 0`` for every ``n >= start``, ``f(<0) = 0``.

    ``valid_from`` is the least ``n0 >= start`` with ``polys[span](n) != 0``
    for all ``n >= n0``.
    """

    span: int
    polys: tuple
    valid_from: int
    start: int = 0

    @property
    def initial_needed(self) -> int:
        return max(0, self.valid_from + self.span)

    def residual(self, f: Sequence, n: int):
        """Left-hand side at ``n`` for a given sequence."""
        get = lambda i: f[i] if i >= 0 else 0  # noqa: E731
        return sum(qpoly.evaluate(p, n) * get(n + j) for j, p in enumerate(self.polys))


def make_recurrence(polys: Sequence[Sequence], start: int = 0) -> Recurrence:
    ps = [qpoly.norm(p) for p in polys]
    while ps and not ps[-1]:
        ps.pop()
    while ps and not ps[0]:
        # sum_{j>=1} p_j(n) f(n+j) = 0 is sum_j p_{j+1}(n-1) f(n+j) = 0 from start+1
        ps = [qpoly.shift(p, -1) for p in ps[1:]]
        start += 1
    if not ps:
        raise DegenerateOperator("all recurrence polynomials vanish")
    lead = ps[-1]
    roots = qpoly.integer_roots(lead, start)
    valid_from = max(roots) + 1 if roots else start
    return Recurrence(len(ps) - 1, tuple(ps), valid_from, start)


def ode_to_recurrence(op: DiffOp) -> Recurrence:
    """Coefficient recurrence of ``op f = 0`` for ``f = sum f(n) z^n``.

    ``z^a (d/dz)^b`` contributes ``(n+b-a)(n+b-a-1)...(n-a+1) f(n+b-a)`` to
    the coefficient of ``z^n``.  The relation is re-indexed so the lowest
    shift becomes ``f(m)``.
    """
    shifts = [i - a for i, q in enumerate(op.coeffs) for a, c in enumerate(q) if c]
    if not shifts:
        raise DegenerateOperator("operator has no nonzero coefficient")
    s_min, s_max = min(shifts), max(shifts)
    polys: list = [()] * (s_max - s_min + 1)
    for i, q in enumerate(op.coeffs):
        for a, coef in enumerate(q):
            if coef:
                j = i - a - s_min
                # falling factorial of (m + j) with m = n + s_min
                polys[j] = qpoly.add(polys[j], qpoly.scale(qpoly.falling(j, i), coef))
    if all(not p for p in polys):
        raise DegenerateOperator("translated recurrence is identically zero")
    return make_recurrence(polys, start=s_min)


def run_recurrence(rec: Recurrence, initial: Sequence, n_max: int) -> list:
    """Exact forward evaluation of ``f(0..n_max)`` from ``initial``."""
    need = rec.initial_needed
    if len(initial) < need:
        raise ValueError(f"recurrence needs {need} initial values, got {len(initial)}")
    f = [_exact(Fraction(v)) for v in initial[: n_max + 1]]
    k = rec.span
    for idx in range(len(f), n_max + 1):
        m = idx - k
        if m < rec.start:
            raise ValueError(f"relation does not determine f({idx}); supply more initial values")
        lead = qpoly.evaluate(rec.polys[k], m)
        if lead == 0:
            raise LeadingZero(m)
        acc = 0
        for j in range(k):
            i = m + j
            if i >= 0 and f[i]:
                acc += qpoly.evaluate(rec.polys[j], m) * f[i]
        f.append(_exact(Fraction(-acc) / lead))
    return f


# -- the four-variable GRZ operator ----------------------------------------

# annihilator of the diagonal of 1/(1 - e1 + c e4), transcribed as printed
GRZ_D4_TERMS = (
    (3, "z^2(c^4z^4+4c^3z^3+6c^2z^2+4cz-256z+1)(3cz-1)^2"),
    (2, "3z(3cz-1)(6c^5z^5+15c^4z^4+8c^3z^3-6c^2z^2-384cz^2-6cz+384z-1)"),
    (1, "(cz+1)(63c^5z^5-3c^4z^4-66c^3z^3+18c^2z^2+720cz^2+19cz-816z+1)"),
    (0, "9c^6z^5-3c^5z^4-6c^4z^3+18c^3z^2-360c^2z^2+13c^2z-384cz+c-24"),
)

# the c = 27 operator after removing (81 z - 1)^4
L27_TERMS = (
    (3, "z^2 (81 z^2 + 14 z + 1)"),
    (2, "3 z (162 z^2 + 21 z + 1)"),
    (1, "(21 z + 1) (27 z + 1)"),
    (0, "3 (27 z + 1)"),
)


@lru_cache(maxsize=64)
def _grz_d4_operator(c: Fraction, terms: tuple) -> DiffOp:
    order = max(k for k, _ in terms)
    coeffs: list = [()] * (order + 1)
    for k, text in terms:
        coeffs[k] = qpoly.add(coeffs[k], parse_poly(text, "z", c=c))
    return DiffOp(coeffs)


def grz_d4_operator(c, terms: Sequence[tuple[int, str]] = GRZ_D4_TERMS) -> DiffOp:
    """Annihilating operator of the diagonal of ``1/(1 - e1 + c e4)``."""
    return _grz_d4_operator(Fraction(c), tuple(terms))


def l27_operator() -> DiffOp:
    return DiffOp.from_strings(L27_TERMS)


def remove_factor(op: DiffOp, factor: Sequence, power: int) -> DiffOp | None:
    """``op / factor**power`` if every coefficient is exactly divisible, else ``None``."""
    div = qpoly.power(factor, power)
    out = []
    for c in op.coeffs:
        quo, rem = qpoly.divmod_(c, div)
        if rem:
            return None
        out.append(quo)
    return DiffOp(out)


# -- convenience -----------------------------------------------------------

def grz_parameter(q: SymPoly) -> Fraction | None:
    """``c`` if ``q`` is ``1 - e1 + c e_d``, else ``None``."""
    cs = q.e_coeffs
    if cs[0] == 1 and cs[1] == -1 and all(v == 0 for v in cs[2:-1]):
        return cs[-1]
    return None


def recurrence_diagonal(c, n_max: int, terms=GRZ_D4_TERMS) -> list:
    """Diagonal of ``1/(1 - e1 + c e4)`` up to ``n_max`` via the P-recurrence.

    Initial values always come from ``expand``.
    """
    rec = ode_to_recurrence(grz_d4_operator(c, terms))
    n0 = max(rec.initial_needed, 1)
    init = diagonal(expand(SymPoly.grz(c, 4), n0 - 1))
    return run_recurrence(rec, init, n_max)


def diagonal_sequence(q: SymPoly, n_max: int, method: str = "auto") -> list:
    """``delta_0..delta_{n_max}`` by the cheapest exact route available."""
    c = grz_parameter(q)
    if method not in ("auto", "recurrence", "convolution"):
        raise ValueError(f"unknown method {method!r}")
    if method == "recurrence" or (method == "auto" and q.d == 4 and c is not None):
        if q.d != 4 or c is None:
            raise OracleUnavailable("recurrence path exists only for 1 - e1 + c e4")
        return recurrence_diagonal(c, n_max)
    if q.d > MAX_DIM or (n_max + 1) ** q.d > max_entries():
        raise OracleUnavailable(f"convolution box (n_max={n_max}, d={q.d}) exceeds the budget")
    return diagonal(expand(q, n_max))


def format_sequence(seq: Sequence) -> str:
    """One exact value per line."""
    return "".join(f"{_exact(Fraction(v))}\n" for v in seq)


def parse_sequence(text: str) -> list:
    try:
        return [_exact(Fraction(line.strip())) for line in text.splitlines() if line.strip()]
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
