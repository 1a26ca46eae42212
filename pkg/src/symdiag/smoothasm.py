"""Diagonal asymptotics from smooth minimal critical points.

The general engine is :func:`smooth_point_term`; the M3 and GRZ routines
locate the minimal points through the codiagonal, feed them to the engine,
and cross-check the closed forms.  Regime classification and the
growth-rate analysis around ``c_* = (d-1)^(d-1)`` live here too.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

import mpmath
import numpy as np

from . import critical, oracle
from . import symmlin as sl
from .errors import CriticalParameter, DegenerateHessian, NonSmoothPoint
from .polyroots import find_roots, minimal_modulus_roots
from .symmlin import SymPoly

BOUNDARY_TOL = 1e-12


def _mpf(v):
    v = Fraction(v)
    return mpmath.mpf(v.numerator) / v.denominator


# -- result types ------------------------------------------------------------

@dataclass(frozen=True)
class AsymptoticTerm:
    """``constant * base**n * n**power`` contributed by one critical point."""

    base: complex
    power: Fraction
    constant: complex
    source_point: tuple

    def value(self, n):
        n = mpmath.mpf(n)
        return mpmath.mpc(self.constant) * mpmath.power(mpmath.mpc(self.base), n) * n ** _mpf(self.power)

    def magnitude(self, n):
        n = mpmath.mpf(n)
        return abs(self.constant) * mpmath.power(abs(self.base), n) * n ** _mpf(self.power)


@dataclass(frozen=True)
class AsymptoticEstimate:
    terms: tuple[AsymptoticTerm, ...]
    valid: bool = True
    degenerate_reason: str | None = None
    warnings: tuple[str, ...] = ()

    def evaluate(self, n):
        """Sum of the leading terms at ``n`` (an ``mpmath.mpc``)."""
        return mpmath.fsum(t.value(n) for t in self.terms)

    def envelope(self, n):
        """Sum of term magnitudes: the scale of the estimate at ``n``."""
        return mpmath.fsum(t.magnitude(n) for t in self.terms)

    def relative_error(self, n, exact) -> float:
        """``|exact - estimate| / envelope``.

        For a single term this is the ordinary relative error; for
        oscillating conjugate pairs it avoids blow-ups at near-zeros of the
        cosine factor.
        """
        exact = _mpf(exact)
        return float(abs(exact - self.evaluate(n)) / self.envelope(n))


class Regime(enum.Enum):
    EVENTUALLY_POSITIVE = "EventuallyPositive"
    SIGN_CHANGES = "InfinitelyManySignChanges"
    BOUNDARY = "BoundaryDegenerate"


@dataclass(frozen=True)
class RegimeLabel:
    kind: Regime
    detail: str | None = None

    def __str__(self):
        if self.detail:
            return f"{self.kind.value}({self.detail})"
        return self.kind.value


# -- the general smooth point term --------------------------------------------

def _sqrt_det(M: np.ndarray) -> complex:
    # product of principal roots of the eigenvalues: the branch that is
    # continuous in the quadratic form, and conjugation-equivariant
    eig = np.linalg.eigvals(M)
    return complex(np.prod(np.sqrt(eig.astype(complex))))


def smooth_point_term(q: SymPoly, numerator_value: complex, z) -> AsymptoticTerm:
    """Leading diagonal term of ``P/Q`` at a smooth critical point ``z``.

    ``C = -P(z) / (z_k dQ/dz_k) * det(M)^(-1/2) * (2 pi)^((1-d)/2)``, with
    ``M`` the phase Hessian after eliminating coordinate ``k``, and the term
    is ``C * (prod z_j)^(-n) * n^((1-d)/2)``.
    """
    z = tuple(complex(v) for v in z)
    d = q.d
    if all(abs(sl.partial(q, z, j)) == 0 for j in range(d)):
        raise NonSmoothPoint(f"gradient of Q vanishes at {z}")
    M, lam, _ = sl.phase_hessian(q, z)
    if critical.hessian_is_degenerate(M):
        raise DegenerateHessian(f"phase Hessian is singular at {z}")
    const = -complex(numerator_value) / lam / _sqrt_det(M) * (2 * math.pi) ** ((1 - d) / 2)
    base = 1 / complex(np.prod(z))
    return AsymptoticTerm(base, Fraction(1 - d, 2), const, z)


def _is_critical_value(c, d: int) -> bool:
    if isinstance(c, (int, Rational)):
        return Fraction(c) == critical.critical_parameter(d)
    return abs(c - critical.critical_parameter(d)) <= BOUNDARY_TOL * critical.critical_parameter(d)


def diagonal_estimate(q: SymPoly) -> AsymptoticEstimate:
    """Asymptotics from all minimal diagonal points of a general ``Q``.

    Diagonal minimal points always exist for symmetric multilinear ``Q``;
    non-diagonal critical points on the same torus are not excluded here,
    which the warnings record.
    """
    pts = critical.minimal_diagonal_points(q)
    bad = [cp for cp in pts if not cp.is_smooth or cp.degenerate]
    if bad:
        cp = bad[0]
        reason = (f"repeated minimal codiagonal root (multiplicity {cp.multiplicity})"
                  if cp.multiplicity > 1 else "degenerate phase Hessian")
        return AsymptoticEstimate((), False, reason)
    terms = tuple(smooth_point_term(q, 1, cp.point) for cp in pts)
    return AsymptoticEstimate(terms, warnings=("non-diagonal critical points on the minimal torus not excluded",))


# -- M3: Q = 1 - e1 + a e2 + b e3 ----------------------------------------

def _exact_pair(a, b) -> bool:
    return all(isinstance(v, (int, Rational)) for v in (a, b))


def m3_bound(a) -> float:
    """Piecewise positivity bound on ``b`` as a float."""
    a = float(a)
    if a <= -3:
        return -9 * a
    if a <= 1:
        return 2 - 3 * a + 2 * (1 - a) ** 1.5
    return -a ** 3


def _m3_compare(a, b) -> int:
    """Sign of ``b - bound(a)``; exact for rational input."""
    if not _exact_pair(a, b):
        diff = float(b) - m3_bound(a)
        scale = max(1.0, abs(m3_bound(a)))
        return 0 if abs(diff) <= BOUNDARY_TOL * scale else (1 if diff > 0 else -1)
    a, b = Fraction(a), Fraction(b)
    if a <= -3:
        diff = b + 9 * a
    elif a >= 1:
        diff = b + a ** 3
    else:
        # b vs 2 - 3a + 2 (1-a)^(3/2): compare s = (b - 2 + 3a)/2 with (1-a)^(3/2) >= 0
        s = (b - 2 + 3 * a) / 2
        diff = -1 if s < 0 else s * s - (1 - a) ** 3
    return (diff > 0) - (diff < 0)


def classify_m3(a, b) -> RegimeLabel:
    sign = _m3_compare(a, b)
    if sign < 0:
        return RegimeLabel(Regime.EVENTUALLY_POSITIVE)
    if sign > 0:
        return RegimeLabel(Regime.SIGN_CHANGES)
    if a < -3:
        detail = "two diagonal minimal points"
    elif a == -3:
        detail = "alternation"
    elif a < 1:
        detail = "cone point"
    elif a == 1:
        detail = "all-ones"
    else:
        detail = "conjectural"
    return RegimeLabel(Regime.BOUNDARY, detail)


def m3_boundary_distance(a, b) -> float:
    """Signed ``b - bound(a)``."""
    return float(b) - m3_bound(a)


def m3_closed_form(a, b, x: complex) -> complex:
    """Constant of the M3 term re-derived from the general engine.

    With ``Q(x,x,x) = 0`` the phase Hessian factors and the constant reduces
    to ``1 / (2 pi sqrt(3) x (1 - a x))``.
    """
    a = float(a)
    return 1 / (2 * math.pi * math.sqrt(3) * x * (1 - a * x))


def m3_printed_constant(a, b, x: complex) -> complex:
    """``|(1 - 2ax - bx^2)/(1 - ax)| / (2 sqrt(3) (1 - 2x + a x^2))`` as printed.

    The bars are applied only for real ``x``; for complex ``x`` the bare
    ratio is used.
    """
    a, b = float(a), float(b)
    ratio = (1 - 2 * a * x - b * x * x) / (1 - a * x)
    if abs(complex(x).imag) == 0:
        ratio = abs(ratio)
    return ratio / (2 * math.sqrt(3) * (1 - 2 * x + a * x * x))


def asm_m3(a, b) -> AsymptoticEstimate:
    """Diagonal asymptotics of ``1/(1 - e1 + a e2 + b e3)``."""
    label = classify_m3(a, b)
    if label.kind is Regime.BOUNDARY:
        return AsymptoticEstimate((), False, f"BoundaryDegenerate({label.detail})")
    q = SymPoly.m3(a, b)
    est = diagonal_estimate(q)
    if not est.valid:
        return AsymptoticEstimate((), False, f"BoundaryDegenerate({est.degenerate_reason})")
    warnings = []
    for t in est.terms:
        x = t.source_point[0]
        printed = m3_printed_constant(a, b, x)
        ratio = t.constant / printed if printed else float("inf")
        if abs(ratio - 1) > 1e-6:
            warnings.append(f"printed M3 constant differs at x={x:.12g}: general/printed = {ratio:.12g}")
    return AsymptoticEstimate(est.terms, True, None, tuple(warnings))


# -- GRZ: Q = 1 - e1 + c e_d -----------------------------------------------

def grz_closed_form(c, d: int, x: complex) -> complex:
    """Constant of the GRZ term re-derived from the general engine (real ``x``).

    ``((1 - (d-1) x) / (2 pi x))^((d-1)/2) / (sqrt(d) (1 - (d-1) x))``.
    """
    u = 1 - (d - 1) * x
    return (u / (2 * math.pi * x)) ** ((d - 1) / 2) / (math.sqrt(d) * u)


def grz_printed_constant(c, d: int, x: complex) -> complex:
    """The GRZ constant as printed, reading the undefined ``r`` as ``x``."""
    r = x
    u = 1 - (d - 1) * r
    return (2 * math.pi * u / r ** ((d - 1) / 2)) ** ((d - 1) / 2) / (math.sqrt(d) * u)


def asm_grz(c, d: int) -> AsymptoticEstimate:
    """Diagonal asymptotics of ``1/(1 - e1 + c e_d)`` for ``c != c_*``."""
    if _is_critical_value(c, d):
        raise CriticalParameter(f"c = {critical.critical_parameter(d)} is critical for d={d}")
    q = SymPoly.grz(c, d)
    est = diagonal_estimate(q)
    if not est.valid:
        return est
    warnings = []
    for t in est.terms:
        x = t.source_point[0]
        if x.imag == 0:
            printed = grz_printed_constant(c, d, x.real)
            ratio = t.constant / printed
            if abs(ratio - 1) > 1e-6:
                warnings.append(f"printed GRZ constant differs at x={x:.12g}: general/printed = {ratio:.12g}")
    return AsymptoticEstimate(est.terms, True, None, tuple(warnings))


def classify_grz(c, d: int) -> RegimeLabel:
    cs = critical.critical_parameter(d)
    if isinstance(c, (int, Rational)):
        diff = Fraction(c) - cs
        sign = (diff > 0) - (diff < 0)
    else:
        diff = c - cs
        sign = 0 if abs(diff) <= BOUNDARY_TOL * cs else (1 if diff > 0 else -1)
    if sign < 0:
        return RegimeLabel(Regime.EVENTUALLY_POSITIVE)
    if sign > 0:
        return RegimeLabel(Regime.SIGN_CHANGES)
    return RegimeLabel(Regime.BOUNDARY, "lacuna candidate; growth drop for even d >= 4")


# -- growth rates ------------------------------------------------------------

def growth_rate(c, d: int, per_step: bool = False) -> float:
    """``1/|rho|`` for the minimal root ``rho`` of ``1 - d x + c x^d``.

    This is the per-coordinate rate ``limsup |delta_n|^(1/(d n))``; with
    ``per_step`` the per-diagonal-step rate ``|rho|^(-d)`` is returned.
    """
    if _is_critical_value(c, d):
        raise CriticalParameter(f"c = {critical.critical_parameter(d)} is critical for d={d}")
    rs = find_roots(sl.codiagonal(SymPoly.grz(c, d)))
    rho = abs(minimal_modulus_roots(rs)[0][0])
    return rho ** -d if per_step else 1 / rho


@dataclass(frozen=True)
class GrowthScan:
    empirical_growth: float  # per coordinate, |delta_n|^(1/(d n))
    drop_detected: bool
    d: int
    n_max: int
    method: str
    raw_growth: float = field(default=float("nan"))

    @property
    def per_step(self) -> float:
        return self.empirical_growth ** self.d

    def __iter__(self):
        yield self.empirical_growth
        yield self.drop_detected


def extrapolated_log_growth(seq, window: int = 10) -> float:
    """Estimate ``lim log|delta_n| / n`` from the tail of ``seq``.

    The peak of ``|delta_j|`` (detrended by the crude rate) is taken in the
    last ``window`` indices and in windows ending at ``n/2`` and ``3n/4``.
    Fitting ``log|delta_j| = j L + beta log j + C`` through the three peaks
    removes both the constant and the polynomial factor; taking peaks
    tracks the limsup through oscillation.  Short sequences fall back to
    the crude ``max log|delta_j| / j`` over the last window.
    """
    n = len(seq) - 1
    logs = {j: float(mpmath.log(abs(_mpf(v))))
            for j, v in enumerate(seq) if j > 0 and v != 0}
    tail = [j for j in range(max(1, n - window + 1), n + 1) if j in logs]
    if not tail:
        return float("-inf")
    crude = max(logs[j] / j for j in tail)
    if n < 4 * window:
        return crude

    def pick(end):
        js = [j for j in range(end - window + 1, end + 1) if j in logs]
        return max(js, key=lambda j: logs[j] - crude * j) if js else None

    js = [pick(n // 2), pick((3 * n) // 4), pick(n)]
    if None in js or len(set(js)) < 3:
        return crude
    A = np.array([[j, math.log(j), 1.0] for j in js])
    y = np.array([logs[j] for j in js])
    return float(np.linalg.solve(A, y)[0])


def growth_drop_scan(c, d: int, n_max: int, method: str = "auto") -> GrowthScan:
    """Empirical ``limsup |delta_n|^(1/(d n))`` from exact diagonal values.

    A drop is flagged when the empirical rate falls below
    ``(d - 1) * 0.95``.
    """
    q = SymPoly.grz(c, d)
    if method == "auto":
        method = "recurrence" if d == 4 else "convolution"
    seq = oracle.diagonal_sequence(q, n_max, method)
    last = seq[-1]
    raw = float(mpmath.power(abs(_mpf(last)), mpmath.mpf(1) / (d * n_max))) if last else 0.0
    g = math.exp(extrapolated_log_growth(seq) / d)
    margin = 0.05 * (d - 1)
    return GrowthScan(g, g < (d - 1) - margin, d, n_max, method, raw)
