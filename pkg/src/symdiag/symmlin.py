"""Symmetric multilinear polynomials on the elementary-symmetric basis.

A polynomial ``Q = sum_k c_k e_k(z)`` is stored only through the ``d + 1``
numbers ``c_k``; the expanded ``2**d`` monomials are never formed.  Partial
derivatives use multilinearity: ``Q = A + z_j B`` with ``A`` and ``B``
symmetric in the other coordinates, so ``dQ/dz_j = sum_k c_k e_{k-1}(z
without z_j)``.

All arithmetic is generic, so ``Fraction`` points give exact values and
complex points give floating-point values.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from numbers import Rational
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, ParseError, ZeroCoordinate, ZeroConstantTerm
from .polyroots import UniPoly


def _to_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, Rational)):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"not a numeric literal: {v!r}") from exc
    if isinstance(v, float):
        return Fraction(v)
    raise TypeError(f"unsupported coefficient type {type(v).__name__}")


def elementary_symmetric(values: Sequence, upto: int | None = None) -> list:
    """``[e_0, ..., e_upto]`` of ``values`` via the coefficients of prod(1 + v t)."""
    n = len(values)
    upto = n if upto is None else min(upto, n)
    e = [1] + [0] * upto
    for v in values:
        for k in range(upto, 0, -1):
            e[k] = e[k] + v * e[k - 1]
    return e


@dataclass(frozen=True)
class SymPoly:
    """``Q = sum_k e_coeffs[k] * e_{k,d}`` normalised to ``e_coeffs[0] == 1``."""

    d: int
    e_coeffs: tuple[Fraction, ...]

    def __init__(self, d: int, e_coeffs: Sequence):
        if d < 2:
            raise ValueError("a SymPoly needs at least two variables")
        cs = [_to_fraction(c) for c in e_coeffs]
        if len(cs) > d + 1:
            raise DimensionMismatch(f"{len(cs)} coefficients given for d={d}")
        cs += [Fraction(0)] * (d + 1 - len(cs))
        if cs[0] == 0:
            raise ZeroConstantTerm("Q(0) must be nonzero")
        c0 = cs[0]
        object.__setattr__(self, "d", int(d))
        object.__setattr__(self, "e_coeffs", tuple(c / c0 for c in cs))

    # -- constructors -------------------------------------------------
    @classmethod
    def m3(cls, a, b) -> "SymPoly":
        """``1 - e1 + a e2 + b e3`` in three variables."""
        return cls(3, [1, -1, a, b])

    @classmethod
    def grz(cls, c, d: int) -> "SymPoly":
        """``1 - e1 + c e_d`` in ``d`` variables."""
        cs = [Fraction(0)] * (d + 1)
        cs[0], cs[1] = Fraction(1), Fraction(-1)
        cs[d] += _to_fraction(c)
        return cls(d, cs)

    @classmethod
    def parse(cls, text: str) -> "SymPoly":
        """Parse ``"d=3; e0=1, e1=-1, e2=1/2, e3=4"``; missing ``ek`` are zero."""
        head, sep, body = text.partition(";")
        mh = re.fullmatch(r"\s*d\s*=\s*(\d+)\s*", head)
        if not sep or mh is None:
            raise ParseError(f"expected 'd=<int>; e0=..., ...', got {text!r}")
        d = int(mh.group(1))
        if d < 2:
            raise ParseError("d must be at least 2")
        cs = [Fraction(0)] * (d + 1)
        seen = set()
        for item in filter(None, (s.strip() for s in body.split(","))):
            m = re.fullmatch(r"e(\d+)\s*=\s*(\S+)", item)
            if m is None:
                raise ParseError(f"bad term {item!r}")
            k = int(m.group(1))
            if k > d or k in seen:
                raise ParseError(f"e{k} out of range or repeated")
            seen.add(k)
            cs[k] = _to_fraction(m.group(2))
        try:
            return cls(d, cs)
        except ZeroConstantTerm as exc:
            raise ParseError(str(exc)) from exc

    def to_text(self) -> str:
        terms = ", ".join(f"e{k}={c}" for k, c in enumerate(self.e_coeffs))
        return f"d={self.d}; {terms}"

    # -- rescaling ----------------------------------------------------
    def rescale(self, lam) -> "SymPoly":
        """``Q(lam * x)``; diagonal coefficients pick up a factor ``lam**(d n)``."""
        lam = _to_fraction(lam)
        return SymPoly(self.d, [c * lam**k for k, c in enumerate(self.e_coeffs)])

    def normalize_e1(self) -> tuple["SymPoly", Fraction]:
        """Rescale so the ``e1`` coefficient is ``-1``; returns ``(Q(lam x), lam)``."""
        c1 = self.e_coeffs[1]
        if c1 == 0:
            raise ValueError("e1 coefficient is zero; cannot normalise")
        lam = Fraction(-1) / c1
        return self.rescale(lam), lam

    @cached_property
    def float_coeffs(self) -> tuple[float, ...]:
        return tuple(float(c) for c in self.e_coeffs)

    @property
    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.e_coeffs)

    # -- evaluation ---------------------------------------------------
    def _coeffs_for(self, z):
        exact = all(isinstance(v, (int, Rational)) for v in z)
        return self.e_coeffs if exact else self.float_coeffs

    def _check_dim(self, z):
        if len(z) != self.d:
            raise DimensionMismatch(f"point has {len(z)} coordinates, expected {self.d}")


def _as_point(z) -> list:
    return [v if isinstance(v, (int, Rational)) else complex(v) for v in z]


def eval(q: SymPoly, z) -> complex:  # noqa: A001 - mirrors the public name
    z = _as_point(z)
    q._check_dim(z)
    cs = q._coeffs_for(z)
    e = elementary_symmetric(z)
    return sum(c * ek for c, ek in zip(cs, e))


def codiagonal(q: SymPoly) -> UniPoly:
    """``Q(x, ..., x) = sum_k c_k binom(d, k) x**k`` as a float polynomial."""
    return UniPoly([float(c) for c in codiagonal_exact(q)])


def codiagonal_exact(q: SymPoly) -> list[Fraction]:
    return [c * math.comb(q.d, k) for k, c in enumerate(q.e_coeffs)]


def partial(q: SymPoly, z, j: int):
    """``dQ/dz_j`` at ``z``."""
    z = _as_point(z)
    q._check_dim(z)
    cs = q._coeffs_for(z)
    e = elementary_symmetric(z[:j] + z[j + 1:])
    return sum(cs[k] * e[k - 1] for k in range(1, q.d + 1))


def second_partial(q: SymPoly, z, i: int, j: int):
    """``d^2Q/dz_i dz_j``; zero on the diagonal ``i == j`` by multilinearity."""
    z = _as_point(z)
    q._check_dim(z)
    if i == j:
        return 0
    cs = q._coeffs_for(z)
    rest = [v for k, v in enumerate(z) if k not in (i, j)]
    e = elementary_symmetric(rest)
    return sum(cs[k] * e[k - 2] for k in range(2, q.d + 1))


def _nonzero(z):
    if any(v == 0 for v in z):
        raise ZeroCoordinate("log-gradient needs all coordinates nonzero")


def grad_log(q: SymPoly, z) -> list:
    """``(z_j dQ/dz_j)_j``."""
    z = _as_point(z)
    q._check_dim(z)
    _nonzero(z)
    return [z[j] * partial(q, z, j) for j in range(q.d)]


def hessian_entries(q: SymPoly, z) -> np.ndarray:
    """``U[i, j] = z_i z_j d^2Q/dz_i dz_j`` (zero diagonal)."""
    z = _as_point(z)
    q._check_dim(z)
    _nonzero(z)
    exact = all(isinstance(v, (int, Rational)) for v in z)
    U = np.zeros((q.d, q.d), dtype=object if exact else complex)
    for i in range(q.d):
        for j in range(i + 1, q.d):
            U[i, j] = U[j, i] = z[i] * z[j] * second_partial(q, z, i, j)
    return U


def phase_hessian(q: SymPoly, z, k: int | None = None) -> tuple[np.ndarray, complex, int]:
    """Hessian of the torus phase for the diagonal direction.

    Eliminates coordinate ``k`` (default: the coordinate with the largest
    ``|z_k dQ/dz_k|``, ties to the last index) and returns the
    ``(d-1) x (d-1)`` matrix, the value ``lam = z_k dQ/dz_k`` and ``k``.
    """
    z = [complex(v) for v in z]
    g = grad_log(q, z)
    if k is None:
        mags = [abs(v) for v in g]
        top = max(mags)
        k = max(j for j, m in enumerate(mags) if m >= top * (1 - 1e-12))
    lam = g[k]
    U = hessian_entries(q, z)
    others = [j for j in range(q.d) if j != k]
    M = np.empty((q.d - 1, q.d - 1), dtype=complex)
    for a, i in enumerate(others):
        for b, j in enumerate(others):
            if i != j:
                M[a, b] = 1 + (U[i, j] - U[i, k] - U[j, k] + U[k, k]) / lam
            else:
                M[a, b] = 2 + (U[i, i] - 2 * U[i, k] + U[k, k]) / lam
    return M, lam, k
