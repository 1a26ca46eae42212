"""Critical and minimal points of ``V = {Q = 0}`` for the diagonal direction.

For ``Q`` symmetric multilinear, minimal-modulus roots ``x`` of the
codiagonal give minimal points ``(x, ..., x)`` (Grace-Walsh-Szego).  The
helpers here produce those points, falsification harnesses for the
"only diagonal critical points" statements, a sampling check of
minimality, and detection of the GRZ singular point.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

import numpy as np

from . import symmlin as sl
from .errors import NotOnVariety, VerificationFailure
from .polyroots import DEFAULT_TOL, UniPoly, find_roots
from .symmlin import SymPoly

DEGENERACY_THRESHOLD = 1e-8


@dataclass(frozen=True)
class CriticalPoint:
    point: tuple[complex, ...]
    is_diagonal: bool
    is_minimal: bool
    multiplicity: int
    is_smooth: bool
    degenerate: bool


class ConeLabel(enum.Enum):
    NONE = "None"
    E2_CONE = "E2Cone"
    OTHER = "Other"


@dataclass(frozen=True)
class SingularityReport:
    singular_points: tuple[tuple[Fraction, ...], ...] = ()
    tangent_cone_label: ConeLabel = ConeLabel.NONE

    @property
    def smooth(self) -> bool:
        return not self.singular_points


def hessian_is_degenerate(M: np.ndarray, threshold: float = DEGENERACY_THRESHOLD) -> bool:
    """``|det M|`` small relative to the product of row norms."""
    if M.size == 0:
        return False
    norms = np.prod(np.linalg.norm(M, axis=1))
    if norms == 0:
        return True
    return abs(np.linalg.det(M)) < threshold * norms


def diagonal_critical_points(q: SymPoly, tol: float = DEFAULT_TOL) -> list[CriticalPoint]:
    """Diagonal points ``(x, ..., x)`` for every root ``x`` of the codiagonal.

    Points over minimal-modulus roots are flagged minimal; the diagonal
    gradient vanishes exactly when ``x`` is a repeated root, so those are
    reported as non-smooth.
    """
    rs = find_roots(sl.codiagonal(q), tol)
    minimal = set(rs.min_modulus_indices)
    out = []
    for i, (x, mult) in enumerate(rs.roots):
        pt = (x,) * q.d
        smooth = mult == 1 and x != 0
        degenerate = True
        if smooth:
            M, _, _ = sl.phase_hessian(q, pt)
            degenerate = hessian_is_degenerate(M)
        out.append(CriticalPoint(pt, True, i in minimal, mult, smooth, degenerate))
    out.sort(key=lambda cp: not cp.is_minimal)
    return out


def minimal_diagonal_points(q: SymPoly, tol: float = DEFAULT_TOL) -> list[CriticalPoint]:
    return [cp for cp in diagonal_critical_points(q, tol) if cp.is_minimal]


# -- GRZ: every critical point for the diagonal direction is diagonal -------

def _critical_system(q: SymPoly, z: np.ndarray):
    """Residual and Jacobian of ``Q = 0, (grad_log Q)_j = (grad_log Q)_d``."""
    d = q.d
    zl = list(z)
    grads = np.array([sl.partial(q, zl, j) for j in range(d)])
    H = np.zeros((d, d), dtype=complex)
    for i in range(d):
        for j in range(i + 1, d):
            H[i, j] = H[j, i] = sl.second_partial(q, zl, i, j)
    glog = z * grads
    F = np.empty(d, dtype=complex)
    F[0] = sl.eval(q, zl)
    F[1:] = glog[:-1] - glog[-1]
    # d/dz_k (z_j Q_j) = [j == k] Q_j + z_j Q_jk
    J_glog = np.diag(grads) + z[:, None] * H
    J = np.empty((d, d), dtype=complex)
    J[0] = grads
    J[1:] = J_glog[:-1] - J_glog[-1]
    return F, J


def _newton(q: SymPoly, z0: np.ndarray, iters: int = 80):
    z = z0.copy()
    for _ in range(iters):
        F, J = _critical_system(q, z)
        try:
            step = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError:
            return None
        z = z + step
        if not np.all(np.isfinite(z)) or np.max(np.abs(z)) > 1e6:
            return None
        if np.max(np.abs(step)) <= 1e-13 * max(1.0, np.max(np.abs(z))):
            F, _ = _critical_system(q, z)
            return z if np.max(np.abs(F)) <= 1e-9 else None
    return None


def grz_offdiagonal_check(c, d: int, torus_radius: float | None = None,
                          starts: int = 200, seed: int = 0) -> bool:
    """Search for non-diagonal critical points of ``1 - e1 + c e_d``.

    Newton is started from ``starts`` random points on the torus of
    ``torus_radius`` (default: the minimal codiagonal root modulus).  Every
    converged solution must be diagonal; otherwise ``VerificationFailure``.
    """
    q = SymPoly.grz(c, d)
    if torus_radius is None:
        torus_radius = find_roots(sl.codiagonal(q)).min_modulus
    rng = np.random.default_rng(seed)
    for _ in range(starts):
        z0 = torus_radius * np.exp(2j * np.pi * rng.random(d))
        z = _newton(q, z0)
        if z is None or np.any(z == 0):
            continue
        spread = np.max(np.abs(z - z[0]))
        if spread > 1e-6 * max(1.0, np.max(np.abs(z))):
            raise VerificationFailure(f"non-diagonal critical point {z} for c={c}, d={d}")
    return True


# -- M3: non-diagonal critical points occur only on b = a^2 (a - 2) ---------

def m3_offdiagonal_check(a, b, tol: float = 1e-12) -> list[tuple]:
    """Non-diagonal critical points of ``1 - e1 + a e2 + b e3``.

    Returns the permutations of ``(1/a, 1/a, a(1-a)/(a^2+b))`` when
    ``b = a^2 (a-2)`` within ``tol``; the point collapses to ``(1, 1, 1)``
    at ``(a, b) = (1, -1)``.
    """
    if abs(b - a * a * (a - 2)) > tol:
        return []
    if abs(a - 1) <= tol and abs(b + 1) <= tol:
        return [(1, 1, 1)]
    if a == 0:
        raise ValueError("closed form needs a != 0")
    exact = all(isinstance(v, (int, Fraction)) for v in (a, b))
    one = Fraction(1) if exact else 1.0
    base = (one / a, one / a, a * (1 - a) / (a * a + b))
    return sorted(set(permutations(base)))


def points_on_minimal_torus(a, b, points, rel_tol: float = 1e-9) -> list[tuple]:
    """Subset of ``points`` lying on ``T(p, p, p)``, ``p`` a minimal codiagonal root."""
    p = find_roots(sl.codiagonal(SymPoly.m3(a, b))).min_modulus
    return [pt for pt in points
            if all(abs(abs(complex(v)) - p) <= rel_tol * p for v in pt)]


# -- minimality sampling -----------------------------------------------------

def verify_minimality(q: SymPoly, z, samples: int = 200, seed: int = 0,
                      margin: float = 1e-7) -> bool:
    """Evidence that the open polydisk ``D(z)`` avoids ``V``.

    Each sample ``w`` in ``D(z)`` defines the complex line ``t -> t w``;
    ``Q(t w)`` is the univariate polynomial ``sum_k c_k e_k(w) t^k`` and its
    roots are tested against the range of ``|t|`` keeping ``t w`` inside the
    polydisk.  The diagonal line is always included.  ``True`` is evidence,
    not proof.
    """
    zc = [complex(v) for v in z]
    if abs(sl.eval(q, zc)) > 1e-8:
        raise NotOnVariety(f"|Q(z)| = {abs(sl.eval(q, zc)):.3g} > 1e-8")
    radii = np.abs(np.array(zc))
    rng = np.random.default_rng(seed)

    directions = [np.full(q.d, radii.min(), dtype=complex)]
    for _ in range(samples):
        shrink = rng.random(q.d) ** (1.0 / 2)
        shrink /= shrink.max()
        directions.append(radii * shrink * np.exp(2j * np.pi * rng.random(q.d)))

    cs = q.float_coeffs
    for w in directions:
        e = sl.elementary_symmetric(list(w))
        line = UniPoly([c * ek for c, ek in zip(cs, e)])
        if line.degree < 1:
            continue
        t_max = float(np.min(radii / np.abs(w)))
        rs = find_roots(line)
        if any(abs(t) < t_max * (1 - margin) for t, _ in rs.roots):
            return False
    return True


# -- GRZ singular point --------------------------------------------------

def critical_parameter(d: int) -> int:
    """``c_* = (d - 1)**(d - 1)``."""
    return (d - 1) ** (d - 1)


def detect_singularity(c, d: int) -> SingularityReport:
    """Singular points of ``V(1 - e1 + c e_d)``: only ``z_*`` at ``c = c_*``.

    At ``c_*`` the quadratic part of ``Q(z_* + y)`` is checked exactly to be
    a multiple of ``e_2(y)``.
    """
    if d < 2:
        raise ValueError("d must be at least 2")
    if Fraction(c) != critical_parameter(d):
        return SingularityReport()
    q = SymPoly.grz(c, d)
    zs = tuple(Fraction(1, d - 1) for _ in range(d))
    value = sl.eval(q, zs)
    grad = [sl.partial(q, zs, j) for j in range(d)]
    second = {sl.second_partial(q, zs, i, j) for i in range(d) for j in range(d) if i != j}
    if value == 0 and all(g == 0 for g in grad) and len(second) == 1 and 0 not in second:
        label = ConeLabel.E2_CONE
    else:
        label = ConeLabel.OTHER
    return SingularityReport((zs,), label)


def tangent_cone_factor(d: int) -> Fraction:
    """Coefficient ``k`` in ``Q(z_* + y) = k e_2(y) + ...`` at ``c = c_*``."""
    q = SymPoly.grz(critical_parameter(d), d)
    zs = [Fraction(1, d - 1)] * d
    return sl.second_partial(q, zs, 0, 1)


__all__ = [
    "CriticalPoint", "ConeLabel", "SingularityReport", "diagonal_critical_points",
    "minimal_diagonal_points", "grz_offdiagonal_check", "m3_offdiagonal_check",
    "points_on_minimal_torus", "verify_minimality", "detect_singularity",
    "critical_parameter", "tangent_cone_factor", "hessian_is_degenerate",
]
