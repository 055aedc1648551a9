import math
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qsphere.harmonic import complex_coordinates
from qsphere.poly import (
    BudgetExceeded,
    Poly,
    check_budget,
    euler_theta,
    eval_float,
    fischer_inner,
    gamma_op,
    ladder,
    laplace_nonneg,
    monomials,
    mult_norm2,
    poly_add,
    poly_mul,
    poly_scale,
    set_budget_terms,
    budget_terms,
    sphere_integral_exact,
    sphere_laplacian,
    sphere_pairing,
    vector_field_T,
)
from qsphere.quat import base_point, sample_sphere_array
from qsphere.rational import I_UNIT, ComplexRational, Q, format_rational, parse_rational

N = 2


def xi(i, n=N):
    return Poly.var(n, i)


def norm2(n=N):
    return mult_norm2(Poly.const(n))


def random_poly(rng, n=N, deg=3, terms=5, homogeneous=True, complex_coeffs=True):
    out = {}
    for _ in range(terms):
        d = deg if homogeneous else rng.randint(0, deg)
        exp = [0] * (4 * n)
        for _ in range(d):
            exp[rng.randrange(4 * n)] += 1
        im = Q(rng.randint(-4, 4), rng.randint(1, 3)) if complex_coeffs else 0
        out[tuple(exp)] = ComplexRational(Q(rng.randint(-6, 6), rng.randint(1, 5)), im)
    return Poly(n, out)


polys = st.builds(
    lambda seed, deg: random_poly(random.Random(seed), deg=deg, homogeneous=False),
    st.integers(0, 10**6), st.integers(0, 4),
)


# -- scalars -----------------------------------------------------------------

def test_complex_rational_field_ops():
    z = ComplexRational(Q(1, 2), Q(-3, 4))
    w = ComplexRational(2, 1)
    assert z.conj().conj() == z
    assert (z * w) / w == z
    assert z * z.conj() == ComplexRational(z.abs2())
    assert I_UNIT * I_UNIT == ComplexRational(-1)


@pytest.mark.parametrize("text", ["3/4", "-7/2", "0/1", "5/1"])
def test_rational_text_roundtrip(text):
    assert format_rational(parse_rational(text)) == text


# -- ring operations ----------------------------------------------------------

def test_ring_examples():
    p = xi(0) + xi(1) * 3
    assert p + Poly.zero(N) == p
    assert poly_mul(xi(0), xi(1)) == Poly.monomial(N, (1, 1, 0, 0, 0, 0, 0, 0))
    s = xi(0) + xi(1)
    assert s ** 2 == xi(0) ** 2 + xi(0) * xi(1) * 2 + xi(1) ** 2
    assert poly_add(p, -p) == Poly.zero(N)
    assert poly_scale(p, 0) == Poly.zero(N)


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        Poly.var(2, 0) + Poly.var(3, 0)


def test_no_zero_terms_stored():
    p = Poly(N, {(1, 0, 0, 0, 0, 0, 0, 0): 0, (0, 1, 0, 0, 0, 0, 0, 0): 2})
    assert len(p) == 1
    assert (p - p).terms == {}


def test_homogeneous_degree():
    assert (xi(0) * xi(1) + xi(2) ** 2).homogeneous_degree() == 2
    assert (xi(0) + Poly.const(N)).homogeneous_degree() is None


# -- operators ----------------------------------------------------------------

def test_euler_examples():
    assert euler_theta(Poly.const(N, 5)) == Poly.zero(N)
    m = xi(0) ** 2 * xi(1)
    assert euler_theta(m) == m * 3


@given(polys, polys)
def test_euler_is_derivation(p, q):
    assert euler_theta(p * q) == euler_theta(p) * q + p * euler_theta(q)


def test_laplace_examples():
    assert laplace_nonneg(xi(0) ** 2) == Poly.const(N, -2)
    assert laplace_nonneg(xi(0) ** 2 - xi(1) ** 2) == Poly.zero(N)
    for n in (2, 3):
        assert laplace_nonneg(norm2(n)) == Poly.const(n, -8 * n)


def test_field_tables():
    # x -> -u x on one block, read off as images of the coordinates
    a, b, c, d = (xi(k) for k in range(4))
    assert [vector_field_T("i", v) for v in (a, b, c, d)] == [b, -a, d, -c]
    assert [vector_field_T("j", v) for v in (a, b, c, d)] == [c, -d, -a, b]
    assert [vector_field_T("k", v) for v in (a, b, c, d)] == [d, c, -b, -a]


def test_fields_kill_norm_and_constants():
    for u in "ijk":
        assert vector_field_T(u, norm2()) == Poly.zero(N)
        assert vector_field_T(u, Poly.const(N, 7)) == Poly.zero(N)


def _all_monomials(n, max_deg):
    return [Poly.monomial(n, e) for h in range(max_deg + 1) for e in monomials(n, h)]


@pytest.mark.parametrize("u,v,w", [("i", "j", "k"), ("j", "k", "i"), ("k", "i", "j")])
def test_commutators_on_monomials(u, v, w):
    for p in _all_monomials(N, 4):
        lhs = vector_field_T(u, vector_field_T(v, p)) - vector_field_T(v, vector_field_T(u, p))
        assert lhs == vector_field_T(w, p) * 2


@given(st.integers(0, 10**6))
def test_commutators_degree_six(seed):
    p = random_poly(random.Random(seed), deg=6)
    lhs = vector_field_T("i", vector_field_T("j", p)) - vector_field_T("j", vector_field_T("i", p))
    assert lhs == vector_field_T("k", p) * 2


def test_gamma_examples():
    assert gamma_op(Poly.const(N, 3)) == Poly.zero(N)
    s = xi(0)
    t = sum((xi(k) ** 2 for k in range(1, 4)), xi(0) ** 2)
    for j in range(0, 7):
        want = s ** j * (j * (j + 2))
        if j >= 2:
            want = want - s ** (j - 2) * t * (j * (j - 1))
        assert gamma_op(s ** j) == want
    for k in range(4):
        assert gamma_op(t ** k) == Poly.zero(N)


def test_mult_norm2():
    one = Poly.const(N)
    assert mult_norm2(one) == norm2()
    assert mult_norm2(mult_norm2(one)) == norm2() ** 2
    p = random_poly(random.Random(3), deg=3)
    assert mult_norm2(p).homogeneous_degree() == 5


@given(polys)
def test_gamma_commutes_with_norm_multiplication(p):
    assert gamma_op(mult_norm2(p)) == mult_norm2(gamma_op(p))


def test_sphere_laplacian_examples():
    for n in (2, 3):
        assert sphere_laplacian(Poly.const(n, 4)) == Poly.zero(n)
        assert sphere_laplacian(xi(0, n)) == xi(0, n) * (4 * n - 1)
        q = xi(0, n) * xi(1, n)
        assert sphere_laplacian(q) == q * (8 * n)


def test_ladder_d0_on_bidegrees():
    zs = complex_coordinates(N)
    zb = [z.conj() for z in zs]
    rng = random.Random(0)
    for _ in range(10):
        alpha = [rng.randint(0, 2) for _ in zs]
        beta = [rng.randint(0, 2) for _ in zs]
        m = Poly.const(N)
        for z, k in zip(zs + zb, alpha + beta):
            m = m * z ** k
        assert ladder("0", m) == m * (sum(alpha) - sum(beta))


def test_ladder_constants_and_commutator():
    assert ladder("+", Poly.const(N, 2)) == Poly.zero(N)
    assert ladder("-", Poly.const(N, 2)) == Poly.zero(N)
    rng = random.Random(11)
    for _ in range(10):
        p = random_poly(rng, deg=rng.randint(1, 4))
        lhs = ladder("0", ladder("+", p)) - ladder("+", ladder("0", p))
        assert lhs == ladder("+", p) * 2
        lhs = ladder("0", ladder("-", p)) - ladder("-", ladder("0", p))
        assert lhs == ladder("-", p) * -2


# -- Fischer inner product ----------------------------------------------------

def test_fischer_examples():
    e = (2, 1, 0, 3, 0, 0, 1, 0)
    m = Poly.monomial(N, e)
    assert fischer_inner(m, m) == ComplexRational(math.prod(math.factorial(k) for k in e))
    assert fischer_inner(xi(0), xi(1)) == ComplexRational(0)


@given(st.integers(0, 10**6), st.integers(0, 4))
def test_fischer_adjoint_of_norm(seed, deg):
    rng = random.Random(seed)
    p = random_poly(rng, deg=deg)
    q = random_poly(rng, deg=deg + 2)
    assert fischer_inner(mult_norm2(p), q) == fischer_inner(p, -laplace_nonneg(q))


@given(st.integers(0, 10**6), st.integers(0, 6))
def test_fischer_skew_and_self_adjoint(seed, deg):
    rng = random.Random(seed)
    p, q = random_poly(rng, deg=deg), random_poly(rng, deg=deg)
    for u in "ijk":
        assert fischer_inner(vector_field_T(u, p), q) == -fischer_inner(p, vector_field_T(u, q))
    assert fischer_inner(gamma_op(p), q) == fischer_inner(p, gamma_op(q))
    assert fischer_inner(euler_theta(p), q) == fischer_inner(p, euler_theta(q))


@given(st.integers(0, 10**6), st.integers(0, 5))
def test_operators_commute_with_euler(seed, deg):
    p = random_poly(random.Random(seed), deg=deg)
    ops = [lambda f, u=u: vector_field_T(u, f) for u in "ijk"]
    ops += [gamma_op, lambda f: mult_norm2(laplace_nonneg(f))]
    for op in ops:
        assert op(euler_theta(p)) == euler_theta(op(p))


# -- integration --------------------------------------------------------------

@pytest.mark.parametrize("n", [2, 3])
def test_sphere_integral_examples(n):
    assert sphere_integral_exact(Poly.const(n)) == ComplexRational(1)
    assert sphere_integral_exact(xi(0, n) ** 2) == ComplexRational(Q(1, 4 * n))
    assert sphere_integral_exact(xi(0, n) ** 4) == ComplexRational(Q(3, 4 * n * (4 * n + 2)))
    assert sphere_integral_exact(norm2(n) ** 3) == ComplexRational(1)
    assert sphere_integral_exact(xi(0, n) * xi(1, n)) == ComplexRational(0)


def test_quartic_moment_against_monte_carlo():
    rng = np.random.default_rng(2)
    x = sample_sphere_array(rng, 10**7, N)
    mc = float(np.mean(x[:, 0] ** 4))
    exact = 3 / (4 * N * (4 * N + 2))
    assert abs(mc - exact) / exact < 5e-3


def test_integral_positive():
    rng = random.Random(4)
    for _ in range(10):
        p = random_poly(rng, deg=rng.randint(1, 4), homogeneous=False)
        val = sphere_integral_exact(p * p.conj())
        assert val.is_real() and val.re > 0
        assert sphere_pairing(p, p) == val


def test_eval_float():
    e = base_point(N, exact=False)
    assert eval_float(Poly.const(N, 3), e) == 3
    assert eval_float(xi(0), e) == 1
    x = sample_sphere_array(np.random.default_rng(0), 50, N)
    assert np.allclose(eval_float(norm2(), x), 1.0, atol=1e-12)


def test_eval_exact_matches_float():
    p = random_poly(random.Random(9), deg=3)
    pt = [Q(1, 2), Q(1, 2), 0, 0, Q(1, 2), 0, Q(1, 2), 0]
    assert complex(p.eval_exact(pt)) == pytest.approx(complex(eval_float(p, [float(v) for v in pt])))


# -- serialization and budget -------------------------------------------------

@given(polys)
def test_json_roundtrip(p):
    text = p.dumps()
    q = Poly.from_json(text)
    assert q == p
    assert q.dumps() == text
    exps = [t["exp"] for t in p.to_json()["terms"]]
    assert exps == sorted(exps)


def test_budget_guard():
    old = budget_terms()
    try:
        set_budget_terms(10)
        with pytest.raises(BudgetExceeded):
            check_budget(11, "test")
        check_budget(10, "test")
    finally:
        set_budget_terms(old)
