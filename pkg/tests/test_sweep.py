import json
import math

import numpy as np
import pytest

from conftest import figure
from parrondo_lab import sweep
from parrondo_lab.classical import ClassicalConfig
from parrondo_lab.errors import ParameterError
from parrondo_lab.quantum import CoinParams, GameAConfig, ParrondoConfig


def test_axis_values_inclusive():
    a = sweep.Axis("qW", 0.0, 1.0, 5)
    np.testing.assert_array_equal(a.values(), [0, 0.25, 0.5, 0.75, 1.0])
    assert sweep.Axis("phiW", 0.0, 2 * math.pi, 65).values()[-1] == 2 * math.pi


@pytest.mark.parametrize(
    "args",
    [("nope", 0, 1, 3), ("qW", 1, 0, 3), ("qW", 0, 1, 1), ("qW", 0, float("nan"), 3), ("qW", 0, 1, 2.5)],
)
def test_axis_validation(args):
    with pytest.raises(ParameterError):
        sweep.Axis(*args)


def test_spec_rejects_foreign_parameter():
    with pytest.raises(ParameterError):
        sweep.SweepSpec(GameAConfig(), (sweep.Axis("qW", 0, 1, 3),))
    with pytest.raises(ParameterError):
        sweep.SweepSpec(GameAConfig(), (sweep.Axis("phiA", 0, 1, 3),), method="cesaro")


def test_with_parameter_nested():
    cfg = sweep.with_parameter(ParrondoConfig(), "thetaB", 1.25)
    assert cfg.game_b.theta == 1.25
    assert cfg.game_a == ParrondoConfig().game_a
    assert sweep.with_parameter(ClassicalConfig(), "pA", 0.3).pA == 0.3


@pytest.mark.parametrize("name", sweep.FIGURES)
def test_presets_build(name):
    spec = sweep.figure_preset(name)
    assert spec.name == name
    assert spec.shape in ((101,), (65, 65))


def test_unknown_preset():
    with pytest.raises(ParameterError):
        sweep.figure_preset("fig9")


def test_sweep_is_deterministic():
    spec = sweep.figure_preset("fig4", steps_2d=9)
    a = sweep.run_sweep(spec)
    b = sweep.run_sweep(spec)
    assert sweep.to_csv(a) == sweep.to_csv(b)


def test_threads_match_serial(monkeypatch):
    spec = sweep.figure_preset("fig5", steps_2d=9)
    serial = sweep.run_sweep(spec, threads=1)
    monkeypatch.setenv(sweep.THREADS_ENV, "3")
    assert sweep.thread_count() == 3
    threaded = sweep.run_sweep(spec)
    np.testing.assert_array_equal(serial.values, threaded.values)


def test_bad_thread_env(monkeypatch):
    monkeypatch.setenv(sweep.THREADS_ENV, "many")
    with pytest.raises(ParameterError):
        sweep.thread_count()


def test_values_read_only():
    res = sweep.run_sweep(sweep.figure_preset("fig3", steps_1d=5))
    with pytest.raises(ValueError):
        res.values[0] = 1.0


def test_cesaro_sweep_close_to_spectral():
    base = ParrondoConfig()
    axes = (sweep.Axis("qW", 0.1, 0.9, 5),)
    s = sweep.run_sweep(sweep.SweepSpec(base, axes))
    c = sweep.run_sweep(sweep.SweepSpec(base, axes, method="cesaro", T=10**5))
    np.testing.assert_allclose(s.values, c.values, atol=1e-3)
    assert c.provenance["T"] == 10**5


def test_csv_layout_1d():
    res = sweep.run_sweep(sweep.figure_preset("fig1", steps_1d=3))
    lines = sweep.to_csv(res).splitlines()
    assert lines[0] == "# parrondo-cycle-lab v0.1.0 preset=fig1 tol=1e-08"
    assert lines[1] == "pA,j"
    assert lines[2].startswith("0,")
    assert len(lines) == 5


def test_csv_layout_2d_and_roundtrip():
    res = sweep.run_sweep(sweep.figure_preset("fig2", steps_2d=4))
    text = sweep.to_csv(res)
    head = text.splitlines()[1].split(",")
    assert head[0] == "thetaA\\phiA"
    assert len(head) == 5
    names, axes, grid = sweep.parse_csv(text)
    assert names == ["thetaA", "phiA"]
    np.testing.assert_array_equal(grid, res.values)
    np.testing.assert_array_equal(axes[1], res.axis_values()[1])


def test_json_output():
    res = sweep.run_sweep(sweep.figure_preset("fig3", steps_1d=4))
    doc = json.loads(sweep.to_json(res))
    assert doc["shape"] == [4]
    assert doc["values"] == list(res.values)
    assert doc["spec"]["base_type"] == "ParrondoConfig"
    assert doc["provenance"]["tool"] == "parrondo-cycle-lab"


def test_write_result(tmp_path):
    res = sweep.run_sweep(sweep.figure_preset("fig1", steps_1d=3))
    path = tmp_path / "out.csv"
    sweep.write_result(res, str(path))
    assert path.read_bytes() == sweep.to_csv(res).encode()


def test_sweep_error_carries_coordinates():
    # eps1 = 0.9 is outside the valid range, so the second grid point fails
    spec = sweep.SweepSpec(ParrondoConfig(coin_w=CoinParams(0.2, 0, 0)), (sweep.Axis("eps1", 0.4, 0.9, 2),))
    with pytest.raises(sweep.SweepError) as info:
        sweep.run_sweep(spec)
    assert info.value.coordinates == {"eps1": 0.9}


@pytest.mark.parametrize("name", sweep.FIGURES)
def test_golden_regression(name, golden_dir):
    produced = sweep.to_csv(figure(name)).encode()
    assert produced == (golden_dir / f"{name}.csv").read_bytes()


def test_golden_spot_checks_recorded(golden_dir):
    spots = json.loads((golden_dir / "spotcheck.json").read_text())
    for name in ("fig2", "fig2b", "fig3", "fig4", "fig5"):
        rows = spots[name]["points"]
        assert len(rows) == 10
        assert spots[name]["T"] == 10**6
        assert max(r["diff"] for r in rows) <= 1e-4
