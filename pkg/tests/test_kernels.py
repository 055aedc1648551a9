import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from qsphere import kernels

P = 2_147_483_629

needs_compiled = pytest.mark.skipif(kernels.compiled_impl is None, reason="extension not built")


def _rref_reference(a, p):
    """Textbook Gauss-Jordan with Python ints."""
    m = [[int(x) % p for x in row] for row in a]
    piv, r = [], 0
    for c in range(len(m[0]) if m else 0):
        k = next((i for i in range(r, len(m)) if m[i][c]), None)
        if k is None:
            continue
        m[r], m[k] = m[k], m[r]
        inv = pow(m[r][c], p - 2, p)
        m[r] = [x * inv % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        piv.append(c)
        r += 1
    return m[:r], piv


int_matrices = hnp.arrays(np.int64, hnp.array_shapes(min_dims=2, max_dims=2, min_side=1, max_side=8),
                          elements=st.integers(-50, 50))


@given(int_matrices, st.sampled_from([7, 101, P]))
def test_python_rref_matches_reference(a, p):
    r, piv = kernels.python_impl.rref_mod_p(a, p)
    ref, ref_piv = _rref_reference(a.tolist(), p)
    assert r.tolist() == ref and piv.tolist() == ref_piv


@needs_compiled
@given(int_matrices, st.sampled_from([7, 101, P]))
def test_backends_agree_on_rref(a, p):
    r1, p1 = kernels.python_impl.rref_mod_p(a, p)
    r2, p2 = kernels.compiled_impl.rref_mod_p(a, p)
    assert np.array_equal(r1, r2) and np.array_equal(p1, p2)


@needs_compiled
@pytest.mark.parametrize("power", [0.0, 1.0, 1.25])
def test_backends_agree_on_ball_sums(power):
    rng = np.random.default_rng(0)
    y1 = rng.uniform(-1, 1, size=(20000, 4))
    a = kernels.python_impl.weighted_ball_sums(y1, 0.3, power)
    b = kernels.compiled_impl.weighted_ball_sums(y1, 0.3, power)
    assert a[0] == b[0]
    assert a[1] == pytest.approx(b[1], rel=1e-12) and a[2] == pytest.approx(b[2], rel=1e-12)


def test_ball_sums_small_case():
    y1 = np.array([[1.0, 0, 0, 0], [0.9, 0, 0, 0], [0.5, 0.5, 0, 0], [0.0, 0, 0, 0]])
    hits, s1, s2 = kernels.weighted_ball_sums(y1, 0.3, 1.0)
    # |1-y|^2 = 0, 0.01, 0.5, 1; the first lies on the boundary |y| = 1
    assert hits == 1
    assert s1 == pytest.approx(0.19) and s2 == pytest.approx(0.19 ** 2)


def test_pure_python_fallback_selected_by_env():
    env = dict(os.environ, QS_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from qsphere.kernels import BACKEND; print(BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
