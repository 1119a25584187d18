import json

import pytest

import filippov as fp


@pytest.fixture
def a1():
    return fp.ModelParams.preset("A1")


def test_presets_and_round_trip(a1):
    assert set(fp.preset_names()) == {"A1", "A2"}
    again = fp.ModelParams.from_json(a1.to_json())
    assert again.to_dict() == a1.to_dict()
    assert fp.ModelParams(a1.to_dict()).to_dict() == a1.to_dict()
    assert json.loads(a1.to_json())["S"] == a1.get("S")


def test_invalid_parameters_raise(a1):
    with pytest.raises(fp.ParamError):
        a1.with_("m", 1.5)
    with pytest.raises(fp.ParamError):
        fp.ModelParams({"r1": 1.0})
    assert issubclass(fp.DomainError, fp.FilippovError)


def test_field_at_origin_and_domain(a1):
    assert fp.eval_field(0.0, 0.0, a1, "NonHarvest") == (0.0, 0.0)
    with pytest.raises(fp.DomainError):
        fp.eval_field(-1.0, 0.0, a1, "Harvest")
    with pytest.raises(fp.ParamError):
        fp.eval_field(1.0, 1.0, a1, "sometimes")


def test_interior_equilibria(a1):
    (nh,) = fp.interior_equilibria(a1, "NonHarvest")
    (h,) = fp.interior_equilibria(a1, "Harvest")
    assert nh["x"] == pytest.approx(0.4005, abs=1e-3)
    assert nh["y"] == pytest.approx(1.6917, abs=1e-3)
    assert h["x"] == pytest.approx(0.1416, abs=1e-3)
    assert h["y"] == pytest.approx(1.3856, abs=1e-3)
    assert nh["stability"] == "Stable"


def test_sliding_and_pseudo_equilibrium(a1):
    p = a1.with_("S", 0.25)
    lo, hi = fp.sliding_bounds(p)
    assert fp.filippov_lambda(lo, p) == 0.0
    assert fp.filippov_lambda(hi, p) == 1.0
    pe = fp.pseudo_equilibrium(p)
    assert pe is not None and pe["x"] == 0.25 and lo < pe["y"] < hi
    assert abs(fp.sliding_flow(pe["y"], p)) < 1e-10
    verdict, slope = fp.pseudo_stability(p)
    assert verdict == "Stable" and slope < 0


def test_simulate_reaches_pseudo_equilibrium(a1):
    run = fp.simulate(1.0, 1.0, a1.with_("S", 0.25))
    assert len(run["t"]) == len(run["x"]) == len(run["y"]) == len(run["regime"])
    assert run["attractor"]["kind"] == "Pseudo"
    assert run["x"][-1] == pytest.approx(0.25, abs=1e-6)
    assert "Sliding" in run["regime"]


def test_scans(a1):
    assert fp.existence_boundary_p(a1, "NonHarvest") == pytest.approx(0.75, abs=1e-6)
    bif = fp.boundary_bifurcations(a1, 0.05, 0.8)
    assert [round(b["S"], 4) for b in bif] == [0.1416, 0.4005]
    grid = fp.scan_sp_plane(a1, (0.01, 2.0), (0.05, 2.0), 20, 10)
    assert len(grid["labels"]) == 200
    assert 0.0 < grid["both_exist_fraction"] < 1.0


def test_basins_show_bistability():
    a2 = fp.ModelParams.preset("A2").with_("S", 4.0)
    labels = fp.compute_basins(a2, (0.0, 9.0), (0.0, 8.4), 8, 8)
    assert len(labels) == 64
    assert {"ER1", "ER2"} <= set(labels)
