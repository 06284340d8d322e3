import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from recurb.ambient import (AmbientModel, euclidean, hyperbolic, inner, on_model_residual,
                            radial_normal, signed_inner, sphere)
from recurb.errors import InputError, PreconditionError


def test_model_dimensions_and_signature():
    assert euclidean(3).model_dim == 3
    s = sphere(3)
    assert s.model_dim == 4 and np.all(s.signature == 1)
    h = hyperbolic(3)
    assert h.model_dim == 4
    assert list(h.signature) == [-1, 1, 1, 1]


def test_rejects_small_dimension():
    with pytest.raises(InputError):
        AmbientModel(0.0, 2)


def test_inner_examples():
    assert signed_inner([1, 0], [0, 1], [1, 1]) == 0
    assert signed_inner([1, 0, 0], [1, 0, 0], [-1, 1, 1]) == -1
    assert signed_inner([3, 4, 0], [3, 4, 0], [-1, 1, 1]) == 7
    assert inner([0, 1, 0, 0], [0, 1, 0, 0], hyperbolic(3)) == 1


def test_inner_dimension_mismatch():
    with pytest.raises(InputError):
        inner([1, 0], [1, 0, 0], euclidean(3))


def test_on_model_residual_examples():
    assert on_model_residual([1, 0, 0, 0], sphere(3)) == 0
    assert on_model_residual([1, 0, 0, 0], hyperbolic(3)) == 0
    assert on_model_residual([2, 0, 0, 0], sphere(3)) == 3
    assert on_model_residual([5, 7, 1], euclidean(3)) == 0


def test_radial_normal_examples():
    np.testing.assert_array_equal(radial_normal([0, 1, 0, 0], sphere(3)), [0, -1, 0, 0])
    np.testing.assert_array_equal(radial_normal([1, 0, 0, 0], hyperbolic(3)), [1, 0, 0, 0])
    np.testing.assert_allclose(radial_normal([0.5, 0, 0, 0], sphere(3, 4.0)), [-1, 0, 0, 0])


def test_radial_normal_errors():
    with pytest.raises(PreconditionError):
        radial_normal([1, 0, 0], euclidean(3))
    with pytest.raises(PreconditionError):
        radial_normal([2, 0, 0, 0], sphere(3))


vec4 = arrays(np.float64, 4, elements=st.floats(-10, 10))


@settings(max_examples=60, deadline=None)
@given(vec4, vec4, vec4, st.floats(-3, 3), st.sampled_from([-1.0, 1.0, 0.0]))
def test_inner_symmetric_bilinear(u, v, w, t, c):
    a = AmbientModel(c, 4 if c == 0 else 3)
    assert inner(u, v, a) == pytest.approx(inner(v, u, a), abs=1e-12)
    lhs = inner(u + t * w, v, a)
    rhs = inner(u, v, a) + t * inner(w, v, a)
    assert lhs == pytest.approx(rhs, abs=1e-9 * (1 + abs(lhs)))


def _model_point(c, z):
    z = np.asarray(z)
    if c > 0:
        x = np.concatenate([[1.0], z])
        return x / np.linalg.norm(x) / np.sqrt(c)
    return np.concatenate([[np.sqrt(1 / -c + z @ z)], z])


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, 3, elements=st.floats(-2, 2)),
       arrays(np.float64, 4, elements=st.floats(-2, 2)),
       st.sampled_from([1.0, 4.0, -1.0, -0.25]))
def test_radial_normal_norm_and_orthogonality(z, t, c):
    a = AmbientModel(c, 3)
    x = _model_point(c, z)
    nrm = radial_normal(x, a)
    assert inner(nrm, nrm, a) == pytest.approx(np.sign(c), abs=1e-12)
    # remove the x component of t under the model inner product
    tang = t - inner(t, x, a) / inner(x, x, a) * x
    assert inner(tang, x, a) == pytest.approx(0, abs=1e-9)
    assert inner(nrm, tang, a) == pytest.approx(0, abs=1e-9)
