"""Univariate complex polynomials and their roots.

Roots are found by Aberth-Ehrlich simultaneous iteration in double
precision, then numerically split multiple roots are merged back into a
single root with a multiplicity.  The minimal-modulus subset is what the
asymptotic routines consume.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DegreeZero, NoConvergence

DEFAULT_TOL = 1e-10
MAX_ITER = 500
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class UniPoly:
    """Polynomial with complex coefficients, ``coeffs[k]`` multiplies ``x**k``.

    Trailing zero coefficients are stripped on construction so that the
    leading coefficient is nonzero (the zero polynomial keeps one entry).
    """

    coeffs: tuple[complex, ...]

    def __init__(self, coeffs: Sequence[complex]):
        cs = [complex(c) for c in coeffs]
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        if not cs:
            cs = [0j]
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return self.degree == 0 and self.coeffs[0] == 0

    @property
    def is_real(self) -> bool:
        return all(c.imag == 0 for c in self.coeffs)

    def __call__(self, x):
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self, order: int = 1) -> "UniPoly":
        cs = list(self.coeffs)
        for _ in range(order):
            cs = [k * cs[k] for k in range(1, len(cs))] or [0j]
        return UniPoly(cs)

    def abs_scale(self, x, order: int = 0) -> float:
        """Sum of |coefficient * x**k| for the ``order``-th derivative.

        This is the natural scale against which a residual at ``x`` is small.
        """
        r = abs(x)
        total = 0.0
        for k in range(order, len(self.coeffs)):
            total += abs(self.coeffs[k]) * math.perm(k, order) * r ** (k - order)
        return total

    @classmethod
    def from_roots(cls, roots: Sequence[tuple[complex, int]], leading: complex = 1.0):
        cs = np.array([complex(leading)])
        for value, mult in roots:
            for _ in range(mult):
                # multiply by (x - value); coefficients ascending
                cs = np.concatenate([[0j], cs]) - value * np.concatenate([cs, [0j]])
        return cls(cs.tolist())


@dataclass(frozen=True)
class RootSet:
    roots: tuple[tuple[complex, int], ...]
    min_modulus_indices: tuple[int, ...]
    tolerance: float
    leading: complex = field(default=1.0)

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.roots)

    @property
    def min_modulus(self) -> float:
        return min(abs(v) for v, _ in self.roots)

    def expand(self) -> UniPoly:
        return UniPoly.from_roots(self.roots, self.leading)


def _aberth(coeffs: np.ndarray) -> np.ndarray:
    """Simultaneous iteration on a polynomial with nonzero constant term."""
    n = len(coeffs) - 1
    if n == 1:
        return np.array([-coeffs[0] / coeffs[1]])
    dcoeffs = coeffs[1:] * np.arange(1, n + 1)
    abs_coeffs = np.abs(coeffs)
    radius = (abs(coeffs[0]) / abs(coeffs[-1])) ** (1.0 / n)
    z = radius * np.exp(1j * (2 * np.pi * np.arange(n) / n + 0.4))
    done = np.zeros(n, dtype=bool)

    for _ in range(MAX_ITER):
        pz = np.polynomial.polynomial.polyval(z, coeffs)
        scale = np.polynomial.polynomial.polyval(np.abs(z), abs_coeffs)
        done |= np.abs(pz) <= 16 * _EPS * scale
        if done.all():
            return z
        dpz = np.polynomial.polynomial.polyval(z, dcoeffs)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = pz / dpz
            w = ratio / (1.0 - ratio * inv.sum(axis=1))
        w = np.where(np.isfinite(w) & ~done, w, 0.0)
        z = z - w
        tiny = np.abs(w) <= 4 * _EPS * np.abs(z)
        done |= tiny & (np.abs(pz) <= 1e3 * _EPS * scale)

    pz = np.polynomial.polynomial.polyval(z, coeffs)
    scale = np.polynomial.polynomial.polyval(np.abs(z), abs_coeffs)
    if np.all(np.abs(pz) <= 1e3 * _EPS * scale):
        return z
    raise NoConvergence(f"root iteration did not converge within {MAX_ITER} steps")


def _cluster_ok(p: UniPoly, members: list[complex], tol: float) -> bool:
    m = len(members)
    diam = max(abs(a - b) for a in members for b in members)
    if diam >= tol ** (1.0 / m):
        return False
    centre = sum(members) / m
    for k in range(m):
        val = abs(p.derivative(k)(centre))
        if val > 10 * tol ** ((m - k) / m) * max(p.abs_scale(centre, k), _EPS):
            return False
    return True


def _merge_clusters(p: UniPoly, values: list[complex], tol: float) -> list[list[complex]]:
    clusters = [[v] for v in values]
    while True:
        pairs = sorted(
            (abs(sum(a) / len(a) - sum(b) / len(b)), i, j)
            for i, a in enumerate(clusters)
            for j, b in enumerate(clusters)
            if i < j
        )
        for _, i, j in pairs:
            cand = clusters[i] + clusters[j]
            if _cluster_ok(p, cand, tol):
                clusters = [c for k, c in enumerate(clusters) if k not in (i, j)] + [cand]
                break
        else:
            return clusters


def _polish(p: UniPoly, x: complex, mult: int) -> complex:
    # a root of multiplicity m is a simple root of the (m-1)-th derivative
    q = p.derivative(mult - 1)
    dq = q.derivative()
    best, best_res = x, abs(q(x))
    for _ in range(6):
        d = dq(x)
        if d == 0:
            break
        x = x - q(x) / d
        res = abs(q(x))
        if res < best_res:
            best, best_res = x, res
        else:
            break
    return best


def _conjugate_tidy(roots: list[tuple[complex, int]]) -> list[tuple[complex, int]]:
    out = []
    for v, m in roots:
        if abs(v.imag) <= 1e-12 * max(1.0, abs(v)):
            v = complex(v.real, 0.0)
        out.append((v, m))
    upper = [(i, v, m) for i, (v, m) in enumerate(out) if v.imag > 0]
    lower = {i for i, (v, _) in enumerate(out) if v.imag < 0}
    for i, v, m in upper:
        partner = min(
            (j for j in lower if out[j][1] == m),
            key=lambda j: abs(out[j][0] - v.conjugate()),
            default=None,
        )
        if partner is None:
            continue
        lower.discard(partner)
        avg = (v + out[partner][0].conjugate()) / 2
        out[i] = (avg, m)
        out[partner] = (avg.conjugate(), m)
    return out


def _arg_key(v: complex) -> float:
    a = cmath.phase(v)
    return a + 2 * math.pi if a < 0 else a


def find_roots(p: UniPoly, tol: float = DEFAULT_TOL) -> RootSet:
    """All roots of ``p`` with multiplicities.

    ``tol`` governs both multiplicity detection (numerical roots closer than
    ``tol**(1/m)`` whose centroid nearly annihilates the first ``m-1``
    derivatives become one root of multiplicity ``m``) and the modulus
    window used to select the minimal-modulus subset.
    """
    if not (0 < tol <= 1e-4):
        raise ValueError("tol must lie in (0, 1e-4]")
    if p.degree < 1:
        raise DegreeZero("cannot find roots of a constant polynomial")

    coeffs = np.array(p.coeffs, dtype=complex)
    n_zero = 0
    while coeffs[0] == 0:
        coeffs = coeffs[1:]
        n_zero += 1

    roots: list[tuple[complex, int]] = []
    if len(coeffs) > 1:
        approx = [complex(z) for z in _aberth(coeffs)]
        for members in _merge_clusters(p, approx, tol):
            m = len(members)
            roots.append((_polish(p, sum(members) / m, m), m))
    if n_zero:
        roots.append((0j, n_zero))
    if p.is_real:
        roots = _conjugate_tidy(roots)

    roots.sort(key=lambda r: (round(abs(r[0]), 12), _arg_key(r[0]), r[1]))
    min_mod = min(abs(v) for v, _ in roots)
    window = tol * max(1.0, min_mod)
    idx = [i for i, (v, _) in enumerate(roots) if abs(v) - min_mod <= window]
    idx.sort(key=lambda i: (_arg_key(roots[i][0]), roots[i][1]))
    return RootSet(tuple(roots), tuple(idx), tol, p.coeffs[-1])


def minimal_modulus_roots(rs: RootSet) -> list[tuple[complex, int]]:
    """Minimal-modulus roots ordered by argument in [0, 2pi), then multiplicity."""
    return [rs.roots[i] for i in rs.min_modulus_indices]
