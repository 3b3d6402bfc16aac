"""Batch runner tests: config diagnostics, grid construction, CLI behavior.

End-to-end runs go through ``runner.main`` with JSON configs written into
tmp_path, so the exit codes, stderr diagnostics, and output files are
exercised exactly as a shell user would see them.
"""
import hashlib
import json
import math
import os

import numpy as np
import pytest

from heavykp import __version__, runner
from heavykp.potentials import Model
from heavykp.runner import (
    ConfigError,
    build_tasks,
    config_from_dict,
    load_config,
    run_experiment,
)
from heavykp.transfer import SaturationError


def _base_config(**over):
    cfg = {
        "experiment": "ids",
        "model": {"model": "III", "energy": 1.0, "alpha2": 0.6},
        "n_grid": [50],
        "n_seeds": 5,
        "master_seed": 2024,
    }
    cfg.update(over)
    return cfg


def _write_config(tmp_path, name="config.json", **over):
    path = tmp_path / name
    path.write_text(json.dumps(_base_config(**over)))
    return str(path)


def _read_rows(output_dir):
    with open(os.path.join(output_dir, "results.csv")) as fh:
        lines = fh.read().splitlines()
    assert lines[0] == runner.CSV_HEADER
    return [line.split(",") for line in lines[1:]]


def _read_summary(output_dir):
    with open(os.path.join(output_dir, "summary.json")) as fh:
        return json.load(fh)


def _sha256(path):
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


# ── Config validation ────────────────────────────────────────────────────────


def test_unknown_experiment_rejected():
    with pytest.raises(ConfigError, match="experiment must be one of"):
        config_from_dict(_base_config(experiment="frobnicate"))


def test_unknown_top_level_key_rejected():
    with pytest.raises(ConfigError, match=r"unknown configuration keys: \['extra'\]"):
        config_from_dict(_base_config(extra=1))


def test_unknown_model_name_diagnostic():
    cfg = _base_config(model={"model": "V", "energy": 1.0})
    with pytest.raises(ConfigError, match="model must be one of I, II, III, IV, got 'V'"):
        config_from_dict(cfg)


def test_model_alpha_range_diagnostic_passes_through():
    cfg = _base_config(model={"model": "III", "energy": 1.0, "alpha2": 1.2})
    with pytest.raises(ConfigError, match=r"alpha2 must lie in \(0, 1\)"):
        config_from_dict(cfg)


def test_model_energy_sign_diagnostic_passes_through():
    cfg = _base_config(model={"model": "I", "energy": -1.0, "alpha1": 0.5})
    with pytest.raises(ConfigError, match="Model I requires energy > 0"):
        config_from_dict(cfg)


def test_unknown_model_key_rejected():
    cfg = _base_config(model={"model": "III", "energy": 1.0, "alpha2": 0.6, "beta": 1})
    with pytest.raises(ConfigError, match=r"unknown model keys: \['beta'\]"):
        config_from_dict(cfg)


def test_empty_energy_grid_rejected():
    with pytest.raises(ConfigError, match="energy_grid must be a nonempty list"):
        config_from_dict(_base_config(energy_grid=[]))


def test_missing_n_grid_rejected():
    cfg = _base_config()
    del cfg["n_grid"]
    with pytest.raises(ConfigError, match="missing required key 'n_grid'"):
        config_from_dict(cfg)


def test_n_grid_entries_must_be_positive_integers():
    with pytest.raises(ConfigError, match="n_grid entries must be positive integers"):
        config_from_dict(_base_config(n_grid=[0]))
    with pytest.raises(ConfigError, match="n_grid entries must be positive integers"):
        config_from_dict(_base_config(n_grid=[10.5]))


def test_bool_is_not_an_integer_seed_count():
    with pytest.raises(ConfigError, match="n_seeds must be int"):
        config_from_dict(_base_config(n_seeds=True))


def test_negative_master_seed_rejected():
    with pytest.raises(ConfigError, match="master_seed must be a nonnegative integer"):
        config_from_dict(_base_config(master_seed=-3))


def test_workers_must_be_positive():
    with pytest.raises(ConfigError, match="workers must be a positive integer"):
        config_from_dict(_base_config(workers=0))


def test_grid_cell_alpha_failure_names_the_cell():
    # the model block is valid; the swept alpha is not, and the diagnostic
    # has to say which cell broke
    with pytest.raises(ConfigError, match=r"grid cell \(alpha=1.5"):
        config_from_dict(_base_config(alpha_grid=[1.5]))


def test_spectrum_options_validated():
    cfg = _base_config(experiment="spectrum", spectrum={"max_eigenvalues": 0})
    with pytest.raises(ConfigError, match="max_eigenvalues must be a positive integer"):
        config_from_dict(cfg)
    cfg = _base_config(experiment="spectrum", spectrum={"window": [0, 1]})
    with pytest.raises(ConfigError, match=r"unknown spectrum keys: \['window'\]"):
        config_from_dict(cfg)


def test_mixing_points_need_at_least_two_entries():
    cfg = _base_config(
        experiment="mixing",
        model={"model": "I", "energy": 2.0, "alpha1": 0.5},
        mixing={"initial_points": [0.0]},
    )
    with pytest.raises(ConfigError, match="at least two numbers"):
        config_from_dict(cfg)


def test_grids_default_to_the_model_block():
    cfg = config_from_dict(_base_config())
    assert cfg.alpha_grid == (0.6,)
    assert cfg.energy_grid == (1.0,)
    assert cfg.output_dir == "out"
    assert cfg.workers == 1


# ── Task grid construction ───────────────────────────────────────────────────


def test_task_grid_order_alpha_outer_then_energy_then_n():
    cfg = config_from_dict(
        _base_config(alpha_grid=[0.5, 0.7], energy_grid=[1.0, 2.0], n_grid=[10, 20])
    )
    tasks = build_tasks(cfg)
    assert [t.index for t in tasks] == list(range(8))
    assert [(t.alpha, t.energy, t.n) for t in tasks] == [
        (0.5, 1.0, 10), (0.5, 1.0, 20),
        (0.5, 2.0, 10), (0.5, 2.0, 20),
        (0.7, 1.0, 10), (0.7, 1.0, 20),
        (0.7, 2.0, 10), (0.7, 2.0, 20),
    ]


def test_swept_alpha_fills_gap_tail_for_model_three():
    cfg = config_from_dict(_base_config(alpha_grid=[0.3], energy_grid=[4.0]))
    cell = build_tasks(cfg)[0].cell_config
    assert cell.model is Model.III
    assert cell.alpha2 == 0.3
    assert cell.energy == 4.0


def test_swept_alpha_fills_bump_tail_and_keeps_gap_tail_for_model_four():
    cfg = config_from_dict(
        _base_config(
            model={"model": "IV", "energy": 2.0, "alpha1": 0.5, "alpha2": 0.6},
            alpha_grid=[0.3],
        )
    )
    cell = build_tasks(cfg)[0].cell_config
    assert cell.alpha1 == 0.3
    assert cell.alpha2 == 0.6


# ── CLI: end-to-end runs ─────────────────────────────────────────────────────


def test_ids_run_writes_schema_clean_outputs(tmp_path, capsys):
    out = str(tmp_path / "out")
    path = _write_config(tmp_path, output_dir=out)
    assert runner.main(["run", path]) == 0
    assert "results.csv" in capsys.readouterr().out

    rows = _read_rows(out)
    assert len(rows) == 5  # one observable per seed
    for fields in rows:
        experiment, model, alpha, energy, n, seed, obs, value = fields
        assert experiment == "ids"
        assert model == "III"
        assert alpha == "0.6" and energy == "1.0" and n == "50"
        assert obs == "rotation_per_unit_length"
        # repr round trip: the text is the shortest exact encoding
        assert repr(float(value)) == value
    assert [int(r[5]) for r in rows] == [0, 1, 2, 3, 4]

    summary = _read_summary(out)
    assert summary["experiment"] == "ids"
    assert summary["model"] == "III"
    assert summary["failed_tasks"] == []
    assert len(summary["cells"]) == 1
    cell = summary["cells"][0]
    assert cell["alpha"] == 0.6 and cell["energy"] == 1.0 and cell["n"] == 50
    assert "median_rotation_per_unit_length" in cell
    assert summary["median_rotation_per_unit_length"] == cell["median_rotation_per_unit_length"]

    with open(os.path.join(out, "manifest.json")) as fh:
        manifest = json.load(fh)
    assert sorted(manifest) == ["code_version", "config", "master_seed"]
    assert manifest["code_version"] == __version__
    assert manifest["master_seed"] == 2024
    assert manifest["config"]["model"] == {"model": "III", "energy": 1.0,
                                           "alpha2": 0.6, "theta0": 0.0}


def test_rerun_is_byte_identical(tmp_path):
    out_a = str(tmp_path / "a")
    out_b = str(tmp_path / "b")
    path = _write_config(tmp_path)
    assert runner.main(["run", path, "--output-dir", out_a]) == 0
    assert runner.main(["run", path, "--output-dir", out_b]) == 0
    for name in ("results.csv", "summary.json"):
        assert _sha256(os.path.join(out_a, name)) == _sha256(os.path.join(out_b, name))


def test_worker_count_does_not_change_results(tmp_path):
    # two tasks so the pool branch actually engages
    out_a = str(tmp_path / "serial")
    out_b = str(tmp_path / "pooled")
    path = _write_config(tmp_path, n_grid=[40, 80])
    assert runner.main(["run", path, "--output-dir", out_a, "--workers", "1"]) == 0
    assert runner.main(["run", path, "--output-dir", out_b, "--workers", "2"]) == 0
    for name in ("results.csv", "summary.json"):
        assert _sha256(os.path.join(out_a, name)) == _sha256(os.path.join(out_b, name))


def test_validate_reports_grid_and_touches_nothing(tmp_path, capsys):
    out = str(tmp_path / "never_created")
    path = _write_config(tmp_path, output_dir=out, n_grid=[10, 20, 30])
    assert runner.main(["validate", path]) == 0
    assert capsys.readouterr().out == "ok: experiment=ids model=III tasks=3 seeds=5\n"
    assert not os.path.exists(out)


def test_validate_rejects_bad_alpha(tmp_path, capsys):
    path = _write_config(tmp_path, model={"model": "III", "energy": 1.0, "alpha2": 1.2})
    assert runner.main(["validate", path]) == 2
    err = capsys.readouterr().err
    assert err.startswith("invalid configuration:")
    assert "alpha2 must lie in (0, 1)" in err


def test_missing_config_file_is_io_failure(tmp_path, capsys):
    assert runner.main(["run", str(tmp_path / "nope.json")]) == 3
    assert capsys.readouterr().err.startswith("cannot read configuration:")


def test_malformed_json_is_config_failure(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text('{"experiment": "ids",')
    assert runner.main(["run", str(path)]) == 2
    err = capsys.readouterr().err
    assert err.startswith("invalid configuration:")
    assert "malformed JSON" in err


def test_output_path_collision_is_io_failure(tmp_path, capsys):
    blocker = tmp_path / "occupied"
    blocker.write_text("")
    path = _write_config(tmp_path)
    assert runner.main(["run", path, "--output-dir", str(blocker)]) == 3
    assert capsys.readouterr().err.startswith("output failure:")


def test_crashed_task_is_isolated_and_reported(tmp_path, monkeypatch):
    def _boom(spec, rows, summary):
        raise RuntimeError("boom")

    monkeypatch.setitem(runner._BODIES, "ids", _boom)
    out = str(tmp_path / "out")
    cfg = load_config(_write_config(tmp_path, output_dir=out))
    code, diagnostic = run_experiment(cfg)
    assert code == 0 and diagnostic == ""
    summary = _read_summary(out)
    assert summary["cells"] == []
    assert summary["failed_tasks"] == [
        {"task_index": 0, "alpha": 0.6, "energy": 1.0, "n": 50,
         "error": "RuntimeError: boom"}
    ]
    assert _read_rows(out) == []


def test_saturated_task_stops_the_run_with_its_identity(tmp_path, monkeypatch, capsys):
    def _overflow(spec, rows, summary):
        raise SaturationError("log scale exceeded the ceiling")

    monkeypatch.setitem(runner._BODIES, "ids", _overflow)
    out = str(tmp_path / "out")
    path = _write_config(tmp_path, output_dir=out)
    assert runner.main(["run", path]) == 4
    err = capsys.readouterr().err
    assert "saturation in task 0 (alpha=0.6, energy=1.0, n=50)" in err
    assert "log scale exceeded the ceiling" in err
    # outputs still land so the partial grid is inspectable
    assert os.path.exists(os.path.join(out, "summary.json"))


# ── Experiment bodies through the CLI ────────────────────────────────────────


def test_ids_median_tracks_free_rotation(tmp_path):
    out = str(tmp_path / "out")
    path = _write_config(tmp_path, output_dir=out, n_grid=[400], n_seeds=40)
    assert runner.main(["run", path]) == 0
    med = _read_summary(out)["median_rotation_per_unit_length"]
    assert med == pytest.approx(1.0 / math.pi, rel=0.05)


def test_lyapunov_rows_and_cell_statistics(tmp_path):
    out = str(tmp_path / "out")
    path = _write_config(
        tmp_path,
        experiment="lyapunov",
        model={"model": "I", "energy": 2.0, "alpha1": 0.5},
        n_grid=[80],
        n_seeds=6,
        output_dir=out,
    )
    assert runner.main(["run", path]) == 0
    rows = _read_rows(out)
    names = {r[6] for r in rows}
    assert names == {"log_norm", "log_norm_over_x"}
    assert len(rows) == 12
    cell = _read_summary(out)["cells"][0]
    assert cell["median_log_norm_over_x"] > 0.0
    assert cell["mean_log_norm_over_x"] > 0.0
    assert cell["ci_half_width"] > 0.0


def test_nonlinear_summary_pairs_sample_sizes(tmp_path):
    out = str(tmp_path / "out")
    path = _write_config(
        tmp_path,
        experiment="nonlinear",
        model={"model": "I", "energy": 2.0, "alpha1": 0.5},
        n_grid=[32, 128],
        n_seeds=60,
        master_seed=77,
        output_dir=out,
    )
    assert runner.main(["run", path]) == 0
    rows = _read_rows(out)
    assert {r[6] for r in rows} == {"lyapunov_scaled", "ids_scaled"}
    assert len(rows) == 2 * 60 * 2
    summary = _read_summary(out)
    assert len(summary["ks_doubling"]) == 1
    entry = summary["ks_doubling"][0]
    assert entry["n"] == 32
    assert 0.0 <= entry["ks_lyapunov"] <= 1.0
    assert 0.0 <= entry["ks_ids"] <= 1.0


def test_darling_rows_stay_in_unit_interval(tmp_path):
    out = str(tmp_path / "out")
    path = _write_config(
        tmp_path,
        experiment="darling",
        model={"model": "I", "energy": 2.0, "alpha1": 0.5},
        n_grid=[256],
        n_seeds=50,
        output_dir=out,
    )
    assert runner.main(["run", path]) == 0
    rows = _read_rows(out)
    assert len(rows) == 50
    vals = np.array([float(r[7]) for r in rows])
    assert np.all(vals > 0.0) and np.all(vals <= 1.0)
    cell = _read_summary(out)["cells"][0]
    assert cell["mean_max_over_sum"] == pytest.approx(vals.mean())
    assert cell["ci_half_width"] > 0.0


def test_mixing_rows_use_step_pair_names(tmp_path):
    out = str(tmp_path / "out")
    path = _write_config(
        tmp_path,
        experiment="mixing",
        model={"model": "I", "energy": 2.0, "alpha1": 0.5},
        n_grid=[10],
        n_seeds=200,
        output_dir=out,
    )
    assert runner.main(["run", path]) == 0
    rows = _read_rows(out)
    assert len(rows) == 10 * 3  # steps times unordered point pairs
    assert all(r[5] == "-1" for r in rows)  # KS rows aggregate across seeds
    assert rows[0][6] == "ks_step001_pair0_1"
    assert rows[-1][6] == "ks_step010_pair1_2"
    cell = _read_summary(out)["cells"][0]
    # strong disorder collapses the chains within ten steps
    assert cell["ks_final_max"] < 0.05


def test_spectrum_rows_report_localized_ground_states(tmp_path):
    out = str(tmp_path / "out")
    path = _write_config(
        tmp_path,
        experiment="spectrum",
        model={"model": "II", "energy": 1.0, "alpha1": 0.5},
        n_grid=[60],
        n_seeds=3,
        output_dir=out,
        spectrum={"max_eigenvalues": 1},
    )
    assert runner.main(["run", path]) == 0
    rows = _read_rows(out)
    names = [r[6] for r in rows]
    assert names.count("eigenvalue_0") == 3
    assert names.count("decay_slope_0") == 3
    assert names.count("decay_r_squared_0") == 3
    cell = _read_summary(out)["cells"][0]
    assert cell["fraction_negative_slope"] == 1.0
    assert cell["median_r_squared"] > 0.9
