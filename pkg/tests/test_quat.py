import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qsphere.quat import (
    ONE,
    QI,
    QJ,
    QK,
    HPoint,
    Quaternion,
    SpherePoint,
    base_point,
    hermitian_inner,
    quasi_dist,
    quat_mul,
    sample_sphere,
    sample_sphere_array,
    weight_w,
    weight_w_sq,
)
from qsphere.rational import Q

rationals = st.builds(Q, st.integers(-20, 20), st.integers(1, 12))
quats = st.builds(Quaternion, rationals, rationals, rationals, rationals)


def hpoint(*qs):
    return HPoint(tuple(qs))


def test_unit_products():
    assert quat_mul(QI, QJ) == QK
    assert QJ * QK == QI
    assert QK * QI == QJ
    assert QJ * QI == -QK
    for u in (QI, QJ, QK):
        assert u * u == -ONE
    assert QI * QJ * QK == -ONE


def test_one_is_unit():
    x = Quaternion(Q(1, 2), Q(-3), Q(2, 7), Q(5))
    assert x * ONE == x
    assert ONE * x == x


def test_i_plus_j_times_i_minus_j():
    assert (QI + QJ) * (QI - QJ) == Quaternion(0, 0, 0, -2)


@given(quats, quats, quats)
def test_associative_and_norm_multiplicative(p, q, r):
    assert (p * q) * r == p * (q * r)
    assert (p * q).norm2() == p.norm2() * q.norm2()
    assert p.conj().conj() == p
    pc = p * p.conj()
    assert (pc.b, pc.c, pc.d) == (0, 0, 0) and pc.a == p.norm2()


def test_float_norm_multiplicative():
    rng = np.random.default_rng(1)
    for _ in range(100):
        p = Quaternion(*rng.standard_normal(4))
        q = Quaternion(*rng.standard_normal(4))
        assert math.isclose(math.sqrt((p * q).norm2()), math.sqrt(p.norm2() * q.norm2()), rel_tol=1e-12)


def test_hermitian_inner_examples():
    e = base_point(2)
    assert hermitian_inner(e, e) == ONE
    x = hpoint(QI, Quaternion())
    y = hpoint(QJ, Quaternion())
    assert hermitian_inner(x, y) == -QK


def test_hermitian_inner_dimension_mismatch():
    with pytest.raises(ValueError):
        hermitian_inner(base_point(2), base_point(3))


@given(quats, quats, quats, quats, quats, quats, quats)
def test_hermitian_inner_properties(x1, x2, y1, y2, z1, z2, q):
    x, y, z = hpoint(x1, x2), hpoint(y1, y2), hpoint(z1, z2)
    assert hermitian_inner(x, y) == hermitian_inner(y, x).conj()
    xz = hpoint(x1 + z1, x2 + z2)
    assert hermitian_inner(xz, y) == hermitian_inner(x, y) + hermitian_inner(z, y)
    qx = hpoint(q * x1, q * x2)
    assert hermitian_inner(qx, y) == q * hermitian_inner(x, y)
    real = sum(a * b for a, b in zip(x.real(), y.real()))
    assert hermitian_inner(x, y).a == real


def test_weight_examples():
    e = base_point(2)
    assert weight_w(e, e) == 0
    f = SpherePoint.from_real([0, 0, 0, 0, 1, 0, 0, 0])
    assert weight_w(e, f) == 1
    s = 1 / math.sqrt(2)
    y = SpherePoint.from_real([s, 0, 0, 0, s, 0, 0, 0], exact=False)
    assert math.isclose(weight_w(base_point(2, exact=False), y), s, rel_tol=1e-12)


def test_weight_symmetric_exact():
    x = SpherePoint.from_real([Q(1, 2), Q(1, 2), 0, 0, Q(1, 2), 0, Q(1, 2), 0])
    y = SpherePoint.from_real([Q(3, 5), 0, Q(4, 5), 0, 0, 0, 0, 0])
    assert weight_w_sq(x, y) == weight_w_sq(y, x)


def test_quasi_dist_examples():
    e = base_point(2)
    assert quasi_dist(e, e) == 0
    minus_e = SpherePoint.from_real([-1, 0, 0, 0, 0, 0, 0, 0])
    assert math.isclose(quasi_dist(e, minus_e), math.sqrt(2))
    # <x, e> = k  when x = (k, 0)
    xk = SpherePoint.from_real([0, 0, 0, 1, 0, 0, 0, 0])
    assert math.isclose(quasi_dist(xk, e), 2 ** 0.25)
    assert math.isclose(quasi_dist(e, xk), 2 ** 0.25)


def test_sphere_point_validation():
    with pytest.raises(ValueError):
        SpherePoint.from_real([1, 1, 0, 0, 0, 0, 0, 0])
    with pytest.raises(ValueError):
        SpherePoint.from_real([1.1, 0, 0, 0, 0, 0, 0, 0], exact=False)


@pytest.mark.parametrize("seed", [0, 1, 123])
def test_sample_sphere_unit(seed):
    x = sample_sphere(seed, 3)
    assert abs(math.sqrt(sum(v * v for v in x.real())) - 1) <= 1e-12


def test_sample_sphere_moments():
    rng = np.random.default_rng(5)
    x = sample_sphere_array(rng, 10**5, 2)
    s = x[:, 0]
    assert abs(s.mean()) < 5 * s.std() / math.sqrt(len(s))
    block = (x[:, :4] ** 2).sum(axis=1)
    assert abs(block.mean() - 0.5) < 5 * block.std() / math.sqrt(len(block))
