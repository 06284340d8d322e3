import numpy as np
import pytest

from recurb import analysis as A
from recurb import catalog
from recurb.ambient import on_model_residual
from recurb.errors import InputError

REQUIRED = [
    "cylinder-parabola", "cylinder-parabola-e4", "cylinder-parabola-e5", "cylinder-circular",
    "plane", "sphere-round", "ellipsoid", "clifford-torus", "sphere-small-in-S3",
    "hyperbolic-geodesic-plane", "hyperbolic-equidistant", "perturbed-torus-E4",
    "perturbed-graph-S4", "perturbed-graph-H4",
]


def test_required_entries_in_stable_order():
    assert catalog.entry_ids() == REQUIRED
    listing = catalog.list_entries()
    assert [row[0] for row in listing] == REQUIRED
    assert listing == catalog.list_entries()


def test_listing_carries_ambient_sign():
    signs = {eid: c for eid, _, c, _ in catalog.list_entries()}
    assert signs["clifford-torus"] == 1.0
    assert signs["hyperbolic-geodesic-plane"] == -1.0
    assert signs["cylinder-parabola"] == 0.0
    assert {np.sign(c) for c in signs.values()} == {-1.0, 0.0, 1.0}


def test_instantiate_examples():
    assert catalog.instantiate("cylinder-parabola").expected.status == "recurrent_nonparallel"
    assert catalog.instantiate("sphere-round").expected.status == "parallel"
    assert catalog.instantiate("ellipsoid").expected.status == "not_recurrent"
    assert catalog.instantiate("ellipsoid").params == {"a": 1.0, "b": 1.0, "c": 1.5}


def test_instantiate_is_cached_and_deterministic():
    a = catalog.instantiate("perturbed-torus-E4", {"seed": 4})
    assert a is catalog.instantiate("perturbed-torus-E4", {"seed": 4})
    b = catalog.instantiate("perturbed-torus-E4", {"seed": 5})
    u = [0.2, 0.2]
    assert not np.array_equal(a.chart.eval(u), b.chart.eval(u))


@pytest.mark.parametrize("eid,params", [
    ("nope", {}),
    ("plane", {"radius": 2.0}),
    ("sphere-round", {"radius": -1.0}),
    ("sphere-round", {"radius": "big"}),
    ("perturbed-torus-E4", {"seed": 1.5}),
    ("perturbed-graph-S4", {"amplitude": 0.9}),
    ("hyperbolic-equidistant", {"distance": 0.0}),
])
def test_bad_ids_and_params(eid, params):
    with pytest.raises(InputError):
        catalog.instantiate(eid, params)


@pytest.mark.parametrize("eid", REQUIRED)
def test_charts_land_on_model(eid):
    e = catalog.instantiate(eid)
    assert e.chart.exact_jet is not None
    for u in A.grid_points(e.chart, (5,), margin_steps=0.0):
        assert on_model_residual(e.chart.eval(u), e.ambient) <= 1e-9


@pytest.mark.parametrize("eid", REQUIRED)
def test_expected_status_reproduced(eid):
    e = catalog.instantiate(eid)
    rep = A.classify(e.chart, e.ambient, (5,), product_adapted=e.expected.product_adapted)
    assert rep.summary["grid_status"] == e.expected.status
    if e.expected.dim_N1 is not None:
        assert rep.summary["dim_N1_mode"] == e.expected.dim_N1
    assert (e.ambient.ambient_dim == 3) == e.expected.hypersurface


def test_rotations_are_orthogonal():
    for Q in (catalog.ROT_E4, catalog.ROT_E5):
        np.testing.assert_allclose(Q @ Q.T, np.eye(len(Q)), atol=1e-15)
