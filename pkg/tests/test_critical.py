import cmath
from fractions import Fraction

import numpy as np
import pytest

from symdiag import critical
from symdiag import symmlin as sl
from symdiag.errors import NotOnVariety
from symdiag.polyroots import find_roots, minimal_modulus_roots
from symdiag.symmlin import SymPoly


def test_grz_c0_single_point():
    pts = critical.diagonal_critical_points(SymPoly.grz(0, 4))
    assert len(pts) == 1
    cp = pts[0]
    assert cp.is_minimal and cp.multiplicity == 1 and cp.is_smooth and cp.is_diagonal
    assert np.allclose(cp.point, [0.25] * 4)


def test_grz_critical_double_point():
    mins = critical.minimal_diagonal_points(SymPoly.grz(27, 4))
    assert len(mins) == 1
    assert mins[0].multiplicity == 2 and not mins[0].is_smooth
    assert np.allclose(mins[0].point, [1 / 3] * 4)


def test_m3_askey_gasper_point():
    pts = critical.diagonal_critical_points(SymPoly.m3(0, 4))
    minimal = [cp for cp in pts if cp.is_minimal]
    other = [cp for cp in pts if not cp.is_minimal]
    assert len(minimal) == 1 and minimal[0].multiplicity == 2
    assert np.allclose(minimal[0].point, [0.5] * 3)
    assert len(other) == 1 and np.allclose(other[0].point, [-1] * 3)


@pytest.mark.parametrize("q", [SymPoly.grz(3, 3), SymPoly.m3(-1, 2), SymPoly.m3(0, 8),
                               SymPoly(5, [1, -1, 0.5, 0, 0, 3])])
def test_critical_points_lie_on_variety(q):
    for cp in critical.diagonal_critical_points(q):
        if cp.multiplicity > 1:
            continue
        assert abs(sl.eval(q, cp.point)) <= 1e-8
        g = sl.grad_log(q, cp.point)
        assert max(abs(v - g[0]) for v in g) <= 1e-8


@pytest.mark.parametrize("d", [3, 4, 5])
def test_grz_below_critical_unique_real_point(d):
    cs = critical.critical_parameter(d)
    for c in (Fraction(cs, 3), Fraction(cs * 9, 10)):
        mins = critical.minimal_diagonal_points(SymPoly.grz(c, d))
        assert len(mins) == 1
        x = mins[0].point[0]
        assert abs(x.imag) < 1e-12 and 1 / d <= x.real <= 1 / (d - 1)


def test_grz_just_above_critical_pair_converges():
    d = 4
    dists = []
    for eps in (1, Fraction(1, 10), Fraction(1, 100)):
        mins = critical.minimal_diagonal_points(SymPoly.grz(27 + eps, d))
        assert len(mins) == 2
        x, y = mins[0].point[0], mins[1].point[0]
        assert abs(x - y.conjugate()) < 1e-10
        dists.append(abs(x - 1 / 3))
    assert dists == sorted(dists, reverse=True) and dists[-1] < 0.01


@pytest.mark.parametrize("c,d", [(3, 3), (27, 4), (100, 5)])
def test_grz_offdiagonal(c, d):
    assert critical.grz_offdiagonal_check(c, d, starts=40, seed=1) is True


def test_m3_offdiagonal_examples():
    pts = critical.m3_offdiagonal_check(2, 0)
    assert sorted(pts) == sorted({(Fraction(1, 2), Fraction(1, 2), Fraction(-1, 2)),
                                  (Fraction(1, 2), Fraction(-1, 2), Fraction(1, 2)),
                                  (Fraction(-1, 2), Fraction(1, 2), Fraction(1, 2))})
    assert critical.m3_offdiagonal_check(1, -1) == [(1, 1, 1)]
    assert critical.m3_offdiagonal_check(-1, 5) == []


def test_m3_offdiagonal_points_are_critical_and_off_the_torus():
    for a in (Fraction(2), Fraction(3), Fraction(-1), Fraction(1, 2)):
        b = a * a * (a - 2)
        q = SymPoly.m3(a, b)
        pts = critical.m3_offdiagonal_check(a, b)
        assert pts
        for pt in pts:
            assert sl.eval(q, pt) == 0
            g = sl.grad_log(q, pt)
            assert g[0] == g[1] == g[2]
        assert critical.points_on_minimal_torus(a, b, pts) == []


def test_verify_minimality_examples():
    q = SymPoly.grz(3, 3)
    rho = minimal_modulus_roots(find_roots(sl.codiagonal(q)))[0][0]
    assert critical.verify_minimality(q, (rho,) * 3, seed=4)
    assert critical.verify_minimality(SymPoly(2, [1, -1]), (0.3, 0.7))
    assert not critical.verify_minimality(SymPoly.m3(0, 4), (-1, -1, -1))


def test_verify_minimality_requires_point_on_variety():
    with pytest.raises(NotOnVariety):
        critical.verify_minimality(SymPoly(2, [1, -1]), (0.3, 0.7 * cmath.exp(0.4j)))


def test_detect_singularity():
    assert critical.detect_singularity(26, 4).smooth
    rep = critical.detect_singularity(27, 4)
    assert rep.singular_points == ((Fraction(1, 3),) * 4,)
    assert rep.tangent_cone_label is critical.ConeLabel.E2_CONE
    rep = critical.detect_singularity(4, 3)
    assert rep.singular_points == ((Fraction(1, 2),) * 3,)
    assert critical.detect_singularity(Fraction(27000001, 1000000), 4).smooth


@pytest.mark.parametrize("d", range(3, 8))
def test_tangent_cone_factor(d):
    # quadratic part of Q(z_* + y) is (d-1) e2(y)
    assert critical.tangent_cone_factor(d) == d - 1


def test_hessian_degeneracy_flag():
    assert critical.hessian_is_degenerate(np.array([[1.0, 1.0], [1.0, 1.0]]))
    assert not critical.hessian_is_degenerate(np.array([[2.0, 1.0], [1.0, 2.0]]))
