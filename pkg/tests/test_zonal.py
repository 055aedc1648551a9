import json
import random

import numpy as np
import pytest

from qsphere.acceptance import random_kernel_poly
from qsphere.harmonic import dim_H_hm, index_set, projection_kernel_bruteforce
from qsphere.io import load_schema
from qsphere.poly import Poly, gamma_op, laplace_nonneg, sphere_pairing
from qsphere.quat import SpherePoint, base_point, sample_sphere_array
from qsphere.rational import ComplexRational, Q
from qsphere.zonal import (
    KernelPoly,
    M_alpha,
    gamma_coeffs,
    gamma_mid,
    gamma_mid_closed,
    generators,
    interpol_inequality_check,
    interpol_inequality_mc,
    kernel_L2_norm_sq,
    mc_weighted_L2,
    recurrence_coeffs,
    recurrence_residual,
    recurrence_table,
    weight2_step,
    weighted_L2_even,
    zonal_eval,
    zonal_Z,
)

E2 = (1, 0, 0, 0, 0, 0, 0, 0)


def test_zonal_examples():
    for n in (2, 3, 4):
        assert zonal_Z(n, 0, 0) == Poly.const(n)
    assert zonal_Z(2, 1, 0) == Poly.var(2, 0) * 8


def test_off_range_is_zero():
    assert zonal_Z(2, 1, 1) == Poly.zero(2)
    assert zonal_Z(2, -2, -1) == Poly.zero(2)


@pytest.mark.parametrize("n,h_max", [(2, 6), (3, 4)])
def test_zonal_value_at_base_point(n, h_max):
    e = base_point(n)
    for idx in index_set(h_max):
        z = zonal_Z(n, idx.h, idx.m)
        assert z.homogeneous_degree() == idx.h
        assert z.eval_exact(e.real()) == ComplexRational(dim_H_hm(n, idx.h, idx.m))


@pytest.mark.parametrize("n,h_max", [(2, 5), (3, 3)])
def test_zonal_harmonic_and_gamma_eigen(n, h_max):
    for idx in index_set(h_max):
        z = zonal_Z(n, idx.h, idx.m)
        assert laplace_nonneg(z) == Poly.zero(n)
        assert gamma_op(z) == z * ((idx.h - 2 * idx.m) * (idx.h - 2 * idx.m + 2))


def test_zonal_matches_projection_kernel_n3():
    for idx in index_set(2):
        assert zonal_Z(3, idx.h, idx.m) == projection_kernel_bruteforce(3, idx.h, idx.m)


def test_zonal_other_base_point():
    e = SpherePoint.from_real([0, Q(3, 5), 0, 0, 0, 0, Q(4, 5), 0])
    for h, m in ((1, 0), (2, 0), (2, 1)):
        assert zonal_Z(2, h, m, e) == projection_kernel_bruteforce(2, h, m, e=e)


def test_zonal_float_evaluation():
    rng = np.random.default_rng(3)
    x = sample_sphere_array(rng, 20, 2)
    s, t = x[:, 0], (x[:, :4] ** 2).sum(axis=1)
    for h, m in ((2, 0), (3, 1), (4, 2)):
        from qsphere.poly import eval_float

        direct = eval_float(zonal_Z(2, h, m), x)
        assert np.allclose(zonal_eval(2, h, m, s, t), direct.real, atol=1e-9)


def test_recurrence_examples():
    assert recurrence_coeffs(2, 0, 0).c_up == Q(1, 10)
    assert recurrence_coeffs(2, 2, 1).c_down == Q(1, 2)
    assert recurrence_coeffs(2, 1, 0).c_down == 0


def test_recurrence_coeffs_nonnegative():
    for n in (2, 3, 5):
        for idx in index_set(30):
            c = recurrence_coeffs(n, idx.h, idx.m)
            assert c.c_up >= 0 and c.c_down >= 0 and 0 <= c.c_mid <= 1


@pytest.mark.parametrize("n,h_max", [(2, 4), (3, 3)])
def test_recurrence_identity(n, h_max):
    for idx in index_set(h_max):
        assert recurrence_residual(n, idx.h, idx.m) == Poly.zero(n)


def test_weight2_step_examples():
    c = recurrence_coeffs(2, 0, 0)
    got = weight2_step(KernelPoly.delta(2, 0, 0))
    assert got == KernelPoly(2, {(0, 0): 1 - c.c_mid, (2, 1): -c.c_up})
    assert weight2_step(KernelPoly(2)) == KernelPoly(2)


def test_weight2_step_matches_polynomials():
    # (r - t) K expanded equals the expansion of weight2_step(K), up to homogenization
    _, t, r = generators(2)
    kp = KernelPoly(2, {(1, 0): Q(2), (2, 1): ComplexRational(1, -3), (3, 1): Q(-1, 4)})
    lhs = (Poly.const(2) - t) * kp.expand()
    rhs = weight2_step(kp).expand()
    diff = lhs - rhs
    # the difference vanishes on the sphere: check via exact integration against itself
    assert sphere_pairing(diff, diff) == ComplexRational(0)


def test_gamma_coeffs_composition():
    for n in (2, 3):
        for idx in index_set(20):
            assert gamma_coeffs(n, idx.h, idx.m).mid == gamma_mid_closed(n, idx.h, idx.m)
    c00 = recurrence_coeffs(2, 0, 0)
    assert gamma_mid(2, 0, 0) == (1 - c00.c_mid) ** 2 + c00.c_up * recurrence_coeffs(2, 2, 1).c_down


def test_gamma_coeffs_off_range_terms_vanish():
    g = gamma_coeffs(2, 1, 0)
    assert g.down == 0 and g.downdown == 0


def test_kernel_norm_examples():
    for h, m in ((0, 0), (2, 1), (3, 1)):
        assert kernel_L2_norm_sq(KernelPoly.delta(2, h, m)) == dim_H_hm(2, h, m)
    assert kernel_L2_norm_sq(KernelPoly(2)) == 0
    kp = KernelPoly(2, {(0, 0): Q(1, 2), (1, 0): ComplexRational(2, 1), (2, 1): Q(-3)})
    k = kp.expand()
    assert ComplexRational(kernel_L2_norm_sq(kp)) == sphere_pairing(k, k)


def test_M_alpha_examples():
    kp = random_kernel_poly(random.Random(0), 2)
    assert M_alpha(kp, 0) == kp
    d = KernelPoly.delta(2, 3, 1)
    assert M_alpha(d, 4) == KernelPoly.delta(2, 3, 1, 5 * gamma_mid(2, 3, 1))
    for h, m in ((0, 0), (2, 1), (6, 0)):
        g5 = float(5 * gamma_mid(2, h, m))
        vals = [abs(M_alpha(KernelPoly.delta(2, h, m), a).coeffs[(h, m)]) for a in (0.5, 1.0, 1.5, 2.0)]
        if g5 >= 1:
            assert vals == sorted(vals)
        else:
            assert vals == sorted(vals, reverse=True)


def test_weighted_norm_examples():
    kp = random_kernel_poly(random.Random(1), 2)
    assert weighted_L2_even(kp, 0) == kernel_L2_norm_sq(kp)
    c = recurrence_coeffs(2, 0, 0)
    assert weighted_L2_even(KernelPoly.delta(2, 0, 0), 2) == 1 - c.c_mid
    with pytest.raises(ValueError):
        weighted_L2_even(kp, 1)


@pytest.mark.parametrize("alpha", [2, 4])
def test_weighted_norm_against_exact_integration(alpha):
    _, t, _ = generators(2)
    w2 = Poly.const(2) - t
    for seed in range(3):
        kp = random_kernel_poly(random.Random(seed), 2, h_max=4, max_terms=3)
        k = kp.expand()
        assert ComplexRational(weighted_L2_even(kp, alpha)) == sphere_pairing(k * w2 ** (alpha // 2), k)


def test_weighted_norm_against_monte_carlo():
    kp = KernelPoly(2, {(1, 0): Q(1), (2, 1): Q(1, 2)})
    exact = float(weighted_L2_even(kp, 2))
    est, err = mc_weighted_L2(kp, 2.0, 10**7, seed=3)
    assert abs(est - exact) <= 5 * err
    assert abs(est - exact) / exact < 1e-3


def test_interpolation_inequality():
    rng = random.Random(5)
    for _ in range(10):
        kp = random_kernel_poly(rng, 2)
        rep0 = interpol_inequality_check(kp, 0)
        assert rep0.holds and rep0.lhs == rep0.rhs
        assert interpol_inequality_check(kp, 2).holds
    kp = random_kernel_poly(rng, 2)
    assert interpol_inequality_check(kp, 1).holds
    assert interpol_inequality_mc(kp, 1, samples=200_000).holds
    assert interpol_inequality_check(kp, 1.5, samples=200_000).holds


def test_kernel_json_roundtrip_and_schema():
    jsonschema = pytest.importorskip("jsonschema")
    schema = load_schema("kernel_poly")
    exact = KernelPoly(2, {(0, 0): Q(1, 3), (2, 1): ComplexRational(Q(-1, 2), 2)})
    floaty = KernelPoly(2, {(1, 0): 0.25, (3, 1): complex(1.5, -2.0)})
    for kp in (exact, floaty):
        obj = json.loads(kp.dumps())
        jsonschema.validate(obj, schema)
        assert KernelPoly.from_json(obj) == kp
        assert KernelPoly.from_json(kp.dumps()).dumps() == kp.dumps()


def test_recurrence_table_shape():
    rows = recurrence_table(2, 4)
    assert len(rows) == len(index_set(4))
    h, m, c_up, c_mid, c_down, g, dim = rows[0]
    assert (h, m, c_up, dim) == (0, 0, Q(1, 10), 1)
