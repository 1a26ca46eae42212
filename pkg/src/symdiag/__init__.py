"""Diagonal asymptotics of ``1/Q`` for symmetric multilinear ``Q``.

Typical use::

    >>> from symdiag import SymPoly, asm_m3, classify_m3
    >>> str(classify_m3(0, 4))
    'BoundaryDegenerate(cone point)'
    >>> est = asm_m3(0, 1)
    >>> round(abs(est.terms[0].base), 6)
    23.872578
"""

from .critical import (
    ConeLabel,
    CriticalPoint,
    SingularityReport,
    detect_singularity,
    diagonal_critical_points,
    grz_offdiagonal_check,
    m3_offdiagonal_check,
    minimal_diagonal_points,
    verify_minimality,
)
from .errors import SymDiagError
from .oracle import (
    CoeffArray,
    DiffOp,
    Recurrence,
    SignProfile,
    diagonal,
    expand,
    grz_d4_operator,
    ode_to_recurrence,
    run_recurrence,
    sign_profile,
)
from .polyroots import RootSet, UniPoly, find_roots, minimal_modulus_roots
from .smoothasm import (
    AsymptoticEstimate,
    AsymptoticTerm,
    Regime,
    RegimeLabel,
    asm_grz,
    asm_m3,
    classify_grz,
    classify_m3,
    growth_drop_scan,
    growth_rate,
    smooth_point_term,
)
from .symmlin import SymPoly, codiagonal, grad_log, hessian_entries

__version__ = "0.1.0"

__all__ = [
    "AsymptoticEstimate",
    "AsymptoticTerm",
    "CoeffArray",
    "ConeLabel",
    "CriticalPoint",
    "DiffOp",
    "Recurrence",
    "Regime",
    "RegimeLabel",
    "RootSet",
    "SignProfile",
    "SingularityReport",
    "SymDiagError",
    "SymPoly",
    "UniPoly",
    "asm_grz",
    "asm_m3",
    "classify_grz",
    "classify_m3",
    "codiagonal",
    "detect_singularity",
    "diagonal",
    "diagonal_critical_points",
    "expand",
    "find_roots",
    "grad_log",
    "growth_drop_scan",
    "growth_rate",
    "grz_d4_operator",
    "grz_offdiagonal_check",
    "hessian_entries",
    "m3_offdiagonal_check",
    "minimal_diagonal_points",
    "minimal_modulus_roots",
    "ode_to_recurrence",
    "run_recurrence",
    "sign_profile",
    "smooth_point_term",
    "verify_minimality",
]
