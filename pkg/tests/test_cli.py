"""End-to-end runs of the command line through `__main__` and the config loader."""
import json
import sys

import numpy as np
import pandas as pd
import pytest

from lamb_toa.cli import main
from lamb_toa.cli.config import DEFAULT, ConfigError, load_config
from lamb_toa.signal import DEFAULT_DT, Waveform, write_waveforms_csv


def run(monkeypatch, *argv) -> int:
    monkeypatch.setattr(sys, "argv", ["lamb-toa", *argv])
    return main.__main__()


def write_config(directory, **blocks) -> str:
    doc = {
        "schema": 1,
        "sampling": {"duration": 1e-3},
        "outputs": {"formats": ["csv"]},
        **blocks,
    }
    path = directory / "run.json"
    path.write_text(json.dumps(doc))
    return str(path)


# ---------------------------------------------------------------------------
# Config
# ---------------------------------------------------------------------------
def test_defaults_load_without_a_file():
    cfg = load_config()
    assert cfg.samples == 15000
    assert cfg.fd_grid[0] == 1.0 and cfg.fd_grid[-1] == 5000.0 and cfg.fd_grid.size == 5000
    assert set(cfg.methods) == set(DEFAULT["methods"])
    assert cfg.layout.impact_names == ["I1", "I2"]


def test_format_override_keeps_svg(tmp_path):
    cfg = load_config(write_config(tmp_path, outputs={"formats": ["csv", "svg"]}), fmt="json")
    assert cfg.outputs.formats == ["json", "svg"]
    assert cfg.table_formats() == ["json"]


def test_paths_resolve_against_the_config_directory(tmp_path):
    cfg = load_config(write_config(tmp_path, input={"waveforms": "data/w.csv"}))
    assert cfg.input.waveforms == str(tmp_path / "data" / "w.csv")
    assert cfg.outputs.directory == str(tmp_path / "out")


@pytest.mark.parametrize(
    "blocks, path",
    [
        ({"schema": 2}, "schema"),
        ({"dispersion": {"modes": ["S0", "B7"]}}, "dispersion.modes[1]"),
        ({"material": {"colour": "grey"}}, "material.colour"),
        ({"material": {"poisson_ratio": 0.7}}, "material"),
        ({"methods": {"tc": {"q": 1}}}, "methods.tc.q"),
        ({"methods": {"svm": {}}}, "methods.svm"),
        ({"methods": {"sla": {"alpha": 0.1}}}, "methods.sla"),
        ({"generation": {"impact": "I7"}}, "generation.impact"),
        ({"generation": {"profile_params": {"mass": 1}}}, "generation.profile_params.mass"),
        ({"noise": {"seed": -1}}, "noise.seed"),
        ({"sweep": {"cutoffs": [2e4, 1e4]}}, "sweep.cutoffs"),
        ({"sweep": {"kind": "svm"}}, "sweep.kind"),
        ({"outputs": {"formats": ["png"]}}, "outputs.formats"),
    ],
)
def test_config_errors_name_the_field(tmp_path, blocks, path):
    with pytest.raises(ConfigError) as info:
        load_config(write_config(tmp_path, **blocks))
    assert info.value.path == path


def test_missing_and_malformed_config_files(tmp_path):
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "absent.json"))
    broken = tmp_path / "broken.json"
    broken.write_text("{schema: 1")
    with pytest.raises(ConfigError):
        load_config(str(broken))


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------
def test_no_arguments_prints_help(monkeypatch):
    assert run(monkeypatch) == 2


def test_markers_table(monkeypatch, tmp_path):
    assert run(monkeypatch, "markers", "--out", str(tmp_path), "--format", "csv") == 0
    table = pd.read_csv(tmp_path / "markers.csv").set_index(["impact", "sensor"])
    assert len(table) == 8
    assert table.loc[("I1", "S1"), "t_s0_s"] == pytest.approx(92.2e-6, abs=0.3e-6)
    assert table.loc[("I2", "S4"), "t_a0_s"] == pytest.approx(272.8e-6, abs=0.3e-6)


def test_unsupported_schema_exits_with_an_error(monkeypatch, tmp_path):
    assert run(monkeypatch, "markers", "--config", write_config(tmp_path, schema=2)) == 2


def test_unknown_mode_exits_with_an_error(monkeypatch, tmp_path):
    config = write_config(tmp_path, dispersion={"modes": ["S0", "B7"]})
    assert run(monkeypatch, "dispersion", "--config", config) == 2


def test_empty_mode_list_is_a_no_op(monkeypatch, tmp_path):
    assert run(monkeypatch, "dispersion", "--config", write_config(tmp_path, dispersion={"modes": []})) == 0
    assert not (tmp_path / "out" / "dispersion.csv").exists()


def test_dispersion_outputs(monkeypatch, tmp_path):
    config = write_config(tmp_path, dispersion={"fd_max": 100.0}, outputs={"formats": ["csv", "svg"]})
    assert run(monkeypatch, "dispersion", "--config", config) == 0
    out = tmp_path / "out"
    table = pd.read_csv(out / "dispersion.csv")
    assert sorted(set(table["mode"])) == ["A0", "S0"]
    assert len(table) == 200
    summary = json.loads((out / "dispersion_summary.json").read_text())
    assert summary["modes"]["S0"]["c_phase_first"] == pytest.approx(5392.0, rel=5e-3)
    assert (out / "dispersion.svg").exists()


def test_dispersion_plot_is_reproducible(monkeypatch, tmp_path):
    config = write_config(tmp_path, dispersion={"fd_max": 50.0}, outputs={"formats": ["svg"]})
    for name in ("a", "b"):
        assert run(monkeypatch, "dispersion", "--config", config, "--out", str(tmp_path / name)) == 0
    assert (tmp_path / "a" / "dispersion.svg").read_bytes() == (tmp_path / "b" / "dispersion.svg").read_bytes()


@pytest.fixture(scope="module")
def generated(tmp_path_factory):
    """Two generate runs with the same seed and one with another"""
    root = tmp_path_factory.mktemp("generate")
    config = write_config(root, noise={"snr_db": 30.0, "seed": 5}, input={"waveforms": "a/waveforms.csv"})
    with pytest.MonkeyPatch.context() as mp:
        codes = [run(mp, "generate", "--config", config, "--out", str(root / name)) for name in ("a", "b")]
        codes.append(run(mp, "generate", "--config", config, "--out", str(root / "c"), "--seed", "6"))
    return root, config, codes


def test_generate_is_reproducible(generated):
    root, _, codes = generated
    assert codes == [0, 0, 0]
    a = (root / "a" / "waveforms.csv").read_bytes()
    assert a == (root / "b" / "waveforms.csv").read_bytes()
    assert a != (root / "c" / "waveforms.csv").read_bytes()


def test_generate_summary(generated):
    root, _, _ = generated
    summary = json.loads((root / "a" / "generate_summary.json").read_text())
    assert summary["impact"] == "I1" and summary["samples"] == 5000
    assert list(summary["channels"]) == ["S1", "S2", "S3", "S4"]
    assert summary["channels"]["S2"]["t_s0_s"] == pytest.approx(60.8e-6, abs=0.3e-6)
    frame = pd.read_csv(root / "a" / "waveforms.csv")
    assert list(frame.columns) == ["time_s", "S1", "S2", "S3", "S4"]
    assert len(frame) == 5000


def test_pick_after_generate(monkeypatch, generated):
    root, config, _ = generated
    out = root / "picks"
    assert run(monkeypatch, "pick", "--config", config, "--method", "tc", "--out", str(out)) == 0
    picks = pd.read_csv(out / "picks.csv")
    assert picks["channel"].tolist() == ["S1", "S2", "S3", "S4"]
    assert picks["found"].all() and set(picks["method"]) == {"TC"}
    summary = json.loads((out / "picks_summary.json").read_text())
    assert summary["methods"]["tc"]["found"] == 4


def test_tc_sweep_after_generate(monkeypatch, generated):
    root, config, _ = generated
    out = root / "sweep"
    assert run(monkeypatch, "sweep", "--config", config, "--method", "tc", "--out", str(out)) == 0
    table = pd.read_csv(out / "sweep.csv")
    assert len(table) == 4 * len(DEFAULT["sweep"]["p_values"])
    summary = json.loads((out / "sweep_summary.json").read_text())
    assert summary["kind"] == "tc" and len(summary["markers"]) == 4


def test_pick_with_a_missing_input(monkeypatch, tmp_path):
    config = write_config(tmp_path, input={"waveforms": "nowhere.csv"})
    assert run(monkeypatch, "pick", "--config", config) == 2


def test_pick_with_an_unknown_method(monkeypatch, generated):
    _, config, _ = generated
    assert run(monkeypatch, "pick", "--config", config, "--method", "svm") == 2


def test_pick_on_silence_finds_nothing(monkeypatch, tmp_path):
    silent = [Waveform(np.zeros(100), DEFAULT_DT, 0.0, name) for name in ("S1", "S2")]
    write_waveforms_csv(silent, str(tmp_path / "silent.csv"))
    config = write_config(tmp_path, input={"waveforms": "silent.csv"})
    assert run(monkeypatch, "pick", "--config", config, "--method", "tc") == 1
