import numpy as np
import pytest

from oracles import nabla_b_from_third_jet, parabola_curvature, sphere_latlong_christoffel
from recurb import catalog
from recurb.analysis import commutator_pairing, grid_points
from recurb.ambient import euclidean
from recurb.jets import eval_jet3
from recurb.tensors import (
    christoffel, evaluate_point, intrinsic_curvature, nabla_bar_b, normal_curvature,
    second_fundamental_form,
)
from recurb.frames import normal_frame


def _local(e, u):
    jet = eval_jet3(e.chart, u)
    return jet, normal_frame(jet, e.ambient)


def test_christoffel_examples(entry):
    e = entry("plane")
    jet, fr = _local(e, [0.3, -0.2])
    assert np.all(christoffel(jet, fr, e.ambient) == 0)

    e = entry("cylinder-parabola")
    jet, fr = _local(e, [1.0, 0.5])
    gam = christoffel(jet, fr, e.ambient)
    expected = np.zeros((2, 2, 2))
    expected[0, 0, 0] = 0.5
    np.testing.assert_allclose(gam, expected, atol=1e-14)

    e = entry("sphere-round")
    for lat in (0.0, 0.2):
        jet, fr = _local(e, [lat, 0.25])
        np.testing.assert_allclose(christoffel(jet, fr, e.ambient),
                                   sphere_latlong_christoffel(lat), atol=1e-13)


def test_second_form_plane_and_sphere(entry):
    e = entry("plane")
    b, A, H = second_fundamental_form(*_local(e, [0.1, 0.1]), e.ambient)
    assert not b.any() and not A.any() and not H.any()

    e = entry("sphere-round")
    jet, fr = _local(e, [0.0, 0.0])
    # sign rule picks the outward normal (1, 0, 0) here
    assert fr.normals[0, 0] > 0
    b, A, H = second_fundamental_form(jet, fr, e.ambient)
    np.testing.assert_allclose(A[0], -np.eye(2), atol=1e-14)
    assert np.linalg.norm(H) == pytest.approx(1.0, abs=1e-14)

    e = entry("sphere-round", radius=2.5)
    b, A, H = second_fundamental_form(*_local(e, [0.1, 0.3]), e.ambient)
    np.testing.assert_allclose(np.abs(A[0]), np.eye(2) / 2.5, atol=1e-13)


@pytest.mark.parametrize("u", [0.0, 0.4, 1.0, -1.3])
def test_parabola_principal_curvatures(entry, u):
    e = entry("cylinder-parabola")
    _, A, _ = second_fundamental_form(*_local(e, [u, 0.5]), e.ambient)
    k = np.sort(np.abs(np.linalg.eigvals(A[0]).real))
    np.testing.assert_allclose(k, [0.0, parabola_curvature(u)], atol=1e-13)


def test_eq1_consistency(rng):
    for eid in catalog.entry_ids():
        e = catalog.instantiate(eid)
        jet, fr = _local(e, e.chart.domain.mean(axis=1))
        b, A, _ = second_fundamental_form(jet, fr, e.ambient)
        X, Y = rng.normal(size=(2, 2))
        bXY = np.einsum("i,j,ija->a", X, Y, jet.d2)
        lhs = np.array([np.sum(e.ambient.signature * bXY * n) for n in fr.normals])
        rhs = np.einsum("sij,i,j->s", np.einsum("kl,slj->skj", fr.g, A), X, Y)
        assert np.abs(lhs - rhs).max() <= 1e-9


def test_nabla_b_parabola(entry):
    e = entry("cylinder-parabola")
    pg = evaluate_point(e.chart, e.ambient, [1.0, 0.5])
    sign = np.sign(pg.b[0, 0, 0])
    nb = pg.derived.nabla_bar_b[0]
    assert sign * nb[0, 0, 0] == pytest.approx(-2 ** -1.5 - 2 ** -0.5, abs=1e-4)
    mask = np.ones_like(nb, dtype=bool)
    mask[0, 0, 0] = False
    assert np.abs(nb[mask]).max() <= 1e-6
    assert np.abs(nabla_bar_b(e.chart, [0.0, 0.5], e.ambient)).max() <= 1e-8


def test_nabla_b_zero_for_parallel_and_flat(entry):
    e = entry("sphere-round", radius=1.7)
    assert np.abs(nabla_bar_b(e.chart, [0.1, 0.2], e.ambient)).max() <= 1e-4
    e = entry("plane")
    assert not nabla_bar_b(e.chart, [0.1, 0.2], e.ambient).any()
    e = entry("hyperbolic-geodesic-plane")
    pg = evaluate_point(e.chart, e.ambient, [0.1, 0.05])
    assert np.abs(pg.b).max() <= 1e-12
    assert np.abs(pg.derived.nabla_bar_b).max() <= 1e-8


@pytest.mark.parametrize("entry_id", catalog.entry_ids())
def test_nabla_b_matches_third_jet_route(entry, entry_id):
    """Gauge-differenced nabla b against the frame-free third-jet contraction."""
    e = entry(entry_id)
    for u in grid_points(e.chart, (3,)):
        pg = evaluate_point(e.chart, e.ambient, u)
        ref = nabla_b_from_third_jet(pg.jet, e.ambient, pg.frame.normals)
        assert np.abs(pg.derived.nabla_bar_b - ref).max() <= 1e-4 * (1 + np.abs(ref).max())


@pytest.mark.parametrize("entry_id", catalog.entry_ids())
def test_tensor_symmetries(entry, entry_id):
    e = entry(entry_id)
    pg = evaluate_point(e.chart, e.ambient, e.chart.domain.mean(axis=1))
    f, d = pg.fundamental, pg.derived
    assert np.array_equal(f.b, np.swapaxes(f.b, 1, 2))
    assert np.array_equal(d.nabla_bar_b, np.swapaxes(d.nabla_bar_b, 2, 3))
    assert np.abs(f.omega + np.swapaxes(f.omega, 1, 2)).max() <= 1e-8
    R = d.riemann
    scale = 1e-6 * (1 + np.abs(R).max())
    assert np.abs(R + np.swapaxes(R, 0, 1)).max() <= scale
    assert np.abs(R + np.swapaxes(R, 2, 3)).max() <= scale
    assert np.abs(R - R.transpose(2, 3, 0, 1)).max() <= scale
    assert np.array_equal(d.ricci, d.ricci.T)


def test_sphere_sectional_curvature(entry):
    e = entry("sphere-round")
    for u in ([0.0, 0.1], [0.2, 0.4]):
        pg = evaluate_point(e.chart, e.ambient, u)
        g = pg.g
        # index order is g(R(d_i, d_j) d_k, d_l), so K |X^Y|^2 sits at (0, 1, 1, 0)
        assert pg.derived.riemann[0, 1, 1, 0] == pytest.approx(
            g[0, 0] * g[1, 1] - g[0, 1] ** 2, abs=1e-5)
        np.testing.assert_allclose(pg.derived.ricci, g, atol=1e-5)


@pytest.mark.parametrize("entry_id", ["plane", "cylinder-circular", "cylinder-parabola"])
def test_flat_intrinsic_curvature(entry, entry_id):
    e = entry(entry_id)
    R, S = intrinsic_curvature(e.chart, e.chart.domain.mean(axis=1), e.ambient)
    assert np.abs(R).max() <= 1e-6
    assert np.abs(S).max() <= 1e-5


def test_normal_curvature_examples(entry):
    e = entry("sphere-round")
    assert not normal_curvature(e.chart, [0.1, 0.1], e.ambient).any()
    e = entry("cylinder-parabola-e4")
    assert np.abs(normal_curvature(e.chart, [0.7, 0.5], e.ambient)).max() <= 1e-6
    e = entry("perturbed-torus-E4")
    pg = evaluate_point(e.chart, e.ambient, [0.2, 0.3])
    rperp = pg.derived.normal_curv
    assert np.abs(rperp).max() > 1e-2  # genuinely curved normal bundle
    assert np.abs(rperp - commutator_pairing(pg)).max() <= 1e-4


def test_gauge_covariance(entry):
    e = entry("perturbed-torus-E4")
    u = [0.25, 0.2]
    pg1 = evaluate_point(e.chart, e.ambient, u)
    pg2 = evaluate_point(e.chart, e.ambient, u, seed_basis=np.eye(4)[::-1])
    # the two frames really differ, yet the quadratic invariant is unchanged
    assert np.abs(pg1.frame.normals - pg2.frame.normals).max() > 1e-2
    q1 = np.einsum("sij,skl->ijkl", pg1.b, pg1.b)
    q2 = np.einsum("sij,skl->ijkl", pg2.b, pg2.b)
    assert np.abs(q1 - q2).max() <= 1e-8
    n1 = np.einsum("skij,slmn->kijlmn", pg1.derived.nabla_bar_b, pg1.derived.nabla_bar_b)
    n2 = np.einsum("skij,slmn->kijlmn", pg2.derived.nabla_bar_b, pg2.derived.nabla_bar_b)
    assert np.abs(n1 - n2).max() <= 1e-6


def test_fd_and_exact_paths_agree(entry):
    e = entry("ellipsoid")
    u = [0.7, 0.2]
    a = evaluate_point(e.chart, e.ambient, u).derived.nabla_bar_b
    b = evaluate_point(e.chart, e.ambient, u, use_exact=False).derived.nabla_bar_b
    assert np.abs(a - b).max() <= 1e-4


def test_flat_ambient_alias():
    assert euclidean(3).model_dim == 3
