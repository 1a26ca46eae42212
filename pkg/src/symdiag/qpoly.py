"""Dense exact polynomials as tuples of ``Fraction`` (ascending powers)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

QPoly = tuple  # tuple[Fraction, ...]


def norm(p: Sequence) -> QPoly:
    cs = [Fraction(c) for c in p]
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def add(p: Sequence, q: Sequence) -> QPoly:
    n = max(len(p), len(q))
    return norm([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def scale(p: Sequence, c) -> QPoly:
    return norm([c * v for v in p])


def mul(p: Sequence, q: Sequence) -> QPoly:
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return norm(out)


def power(p: Sequence, k: int) -> QPoly:
    out: QPoly = (Fraction(1),)
    for _ in range(k):
        out = mul(out, p)
    return out


def divmod_(p: Sequence, q: Sequence) -> tuple[QPoly, QPoly]:
    p, q = list(norm(p)), norm(q)
    if not q:
        raise ZeroDivisionError("division by the zero polynomial")
    if len(p) < len(q):
        return (), tuple(p)
    quo = [Fraction(0)] * (len(p) - len(q) + 1)
    lead = q[-1]
    for k in range(len(quo) - 1, -1, -1):
        coef = p[k + len(q) - 1] / lead
        quo[k] = coef
        if coef:
            for j, b in enumerate(q):
                p[k + j] -= coef * b
    return norm(quo), norm(p[: len(q) - 1])


def evaluate(p: Sequence, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def falling(shift: int, k: int) -> QPoly:
    """``(n + shift)(n + shift - 1)...(n + shift - k + 1)`` as a polynomial in ``n``."""
    out: QPoly = (Fraction(1),)
    for t in range(k):
        out = mul(out, (Fraction(shift - t), Fraction(1)))
    return out


def integer_roots(p: Sequence, lower: int) -> list[int]:
    """Integer roots ``>= lower`` of a nonzero polynomial."""
    p = norm(p)
    if not p:
        raise ValueError("zero polynomial has every integer as a root")
    if len(p) == 1:
        return []
    bound = 1 + max(abs(c / p[-1]) for c in p[:-1])
    hi = int(bound) + 1
    return [m for m in range(max(lower, -hi), hi + 1) if evaluate(p, m) == 0]


def to_str(p: Sequence, var: str = "z") -> str:
    terms = []
    for k, c in enumerate(p):
        if c == 0:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        coef = str(c)
        if mono and c == 1:
            coef = ""
        elif mono and c == -1:
            coef = "-"
        terms.append(coef + ("*" if coef not in ("", "-") and mono else "") + mono)
    return " + ".join(terms).replace("+ -", "- ") or "0"


def shift(p: Sequence, t) -> QPoly:
    """``p(n + t)``."""
    out: QPoly = ()
    for c in reversed(p):
        out = add(mul(out, (Fraction(t), Fraction(1))), (c,))
    return out
