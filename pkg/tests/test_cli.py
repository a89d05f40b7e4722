"""Config schema, artifact reproducibility, and exit codes."""

import json
import os

import pytest

from ringsh import cli

SW_DICT = {"variant": "small_world", "p": 0.9, "q": 0.01, "alpha": 0.2}


def _write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def _read_all(out_dir):
    data = {}
    for name in sorted(os.listdir(out_dir)):
        with open(os.path.join(out_dir, name), "rb") as fh:
            data[name] = fh.read()
    return data


def test_parse_rejects_unknown_keys():
    text = json.dumps({"graphon": SW_DICT, "N_sweep": [10], "bogus": 1})
    with pytest.raises(cli.ConfigError):
        cli.parse_config(text, "spectrum")


def test_parse_rejects_unknown_nested_keys():
    text = json.dumps(
        {"graphon": SW_DICT, "N": 10, "continuation": {"ds0": 1e-3, "warp": 9}}
    )
    with pytest.raises(cli.ConfigError):
        cli.parse_config(text, "bifurcate")


def test_parse_rejects_missing_required_key():
    with pytest.raises(cli.ConfigError):
        cli.parse_config(json.dumps({"graphon": SW_DICT}), "spectrum")


def test_parse_rejects_bad_graphon():
    text = json.dumps({"graphon": {"variant": "torus"}, "N_sweep": [10]})
    with pytest.raises(cli.ConfigError):
        cli.parse_config(text, "spectrum")


def test_parse_rejects_bad_values():
    base = {"graphon": SW_DICT, "N_sweep": [10]}
    for patch in (
        {"N_sweep": [1]},
        {"N_sweep": []},
        {"seeds": [-1]},
        {"seeds": "zero"},
    ):
        with pytest.raises(cli.ConfigError):
            cli.parse_config(json.dumps({**base, **patch}), "spectrum")


def test_parse_rejects_bad_kappa_rule():
    base = {"graphon": SW_DICT, "N": 10}
    for kappa in ({"index": 1}, {"index": 2, "value": 0.0}, {"mode": 2}, [2]):
        with pytest.raises(cli.ConfigError):
            cli.parse_config(json.dumps({**base, "kappa": kappa}), "bifurcate")


def test_config_round_trip_is_idempotent():
    text = json.dumps({"graphon": SW_DICT, "N_sweep": [20, 10], "seeds": [3]})
    cfg = cli.parse_config(text, "spectrum")
    once = cli.serialize_config(cfg)
    twice = cli.serialize_config(cli.parse_config(once, "spectrum"))
    assert once == twice


def test_invalid_json_is_config_error():
    with pytest.raises(cli.ConfigError):
        cli.parse_config("{not json", "spectrum")


def test_main_returns_config_error_code(tmp_path):
    path = _write(tmp_path, "bad.json", {"graphon": SW_DICT, "junk": 1, "N_sweep": [8]})
    assert cli.main(["spectrum", "--config", path]) == cli.EXIT_CONFIG
    assert cli.main(["spectrum", "--config", str(tmp_path / "missing.json")]) == cli.EXIT_CONFIG


def test_spectrum_outputs_are_byte_identical_across_reruns(tmp_path):
    path = _write(
        tmp_path, "cfg.json", {"graphon": SW_DICT, "N_sweep": [8, 12], "seeds": [0, 1]}
    )
    out1, out2 = str(tmp_path / "run1"), str(tmp_path / "run2")
    assert cli.main(["spectrum", "--config", path, "--out", out1]) == cli.EXIT_OK
    assert cli.main(["spectrum", "--config", path, "--out", out2]) == cli.EXIT_OK
    assert _read_all(out1) == _read_all(out2)
    first = _read_all(out1)
    assert set(first) == {
        "eigenvalues.csv", "eigenvalues_seed0.csv", "eigenvalues_seed1.csv",
        "metadata.json", "prediction.json",
    }
    header = first["eigenvalues.csv"].decode().splitlines()[0]
    assert header == "N,index,eigenvalue,normalized"


def test_spectrum_jobs_flag_gives_identical_bytes(tmp_path):
    path = _write(
        tmp_path, "cfg.json", {"graphon": SW_DICT, "N_sweep": [8, 12], "seeds": [0, 1]}
    )
    out1, out2 = str(tmp_path / "serial"), str(tmp_path / "parallel")
    assert cli.main(["spectrum", "--config", path, "--out", out1]) == cli.EXIT_OK
    assert cli.main(["spectrum", "--config", path, "--out", out2, "--jobs", "2"]) == cli.EXIT_OK
    assert _read_all(out1) == _read_all(out2)


def test_seed_flag_overrides_config(tmp_path):
    path = _write(tmp_path, "cfg.json", {"graphon": SW_DICT, "N_sweep": [8], "seeds": [0, 1]})
    out = str(tmp_path / "run")
    assert cli.main(["spectrum", "--config", path, "--out", out, "--seed", "7"]) == cli.EXIT_OK
    files = _read_all(out)
    assert "eigenvalues_seed7.csv" in files
    assert "eigenvalues_seed0.csv" not in files
    meta = json.loads(files["metadata.json"])
    assert meta["seeds"] == [7]


def test_out_env_var_supplies_default_root(tmp_path, monkeypatch):
    path = _write(tmp_path, "cfg.json", {"graphon": SW_DICT, "N_sweep": [8]})
    monkeypatch.setenv("RINGSH_OUT", str(tmp_path / "root"))
    assert cli.main(["spectrum", "--config", path]) == cli.EXIT_OK
    assert os.path.exists(tmp_path / "root" / "spectrum" / "eigenvalues.csv")


def test_metadata_captures_resolved_config_and_version(tmp_path):
    path = _write(tmp_path, "cfg.json", {"graphon": SW_DICT, "N_sweep": [8]})
    out = str(tmp_path / "run")
    assert cli.main(["spectrum", "--config", path, "--out", out]) == cli.EXIT_OK
    meta = json.loads((tmp_path / "run" / "metadata.json").read_text())
    assert meta["config"]["command"] == "spectrum"
    assert meta["config"]["graphon"] == SW_DICT
    assert meta["config"]["seeds"] == [0]  # default filled in
    assert "version" in meta
    # the resolved config in metadata re-parses to the same experiment
    cfg = cli.ExperimentConfig(command="spectrum", raw={
        k: v for k, v in meta["config"].items() if k != "command"
    })
    assert cli.serialize_config(cfg) == cli.serialize_config(
        cli.parse_config(path and (tmp_path / "cfg.json").read_text(), "spectrum")
    )


def test_bipartite_command_runs(tmp_path):
    path = _write(
        tmp_path, "cfg.json",
        {"graphon": {"variant": "bipartite", "p": 0.5, "alpha": 0.75}, "N": 40},
    )
    out = str(tmp_path / "run")
    assert cli.main(["bipartite", "--config", path, "--out", out]) == cli.EXIT_OK
    pred = json.loads((tmp_path / "run" / "prediction.json").read_text())
    assert pred["eigenvalues"] == [0.0, -0.375, -0.125, -0.5]
    prof = (tmp_path / "run" / "profile.csv").read_text().splitlines()
    assert prof[0] == "j,x,u"
    assert len(prof) == 41


def test_bipartite_rejects_ring_graphon(tmp_path):
    path = _write(tmp_path, "cfg.json", {"graphon": SW_DICT, "N": 20})
    assert cli.main(["bipartite", "--config", path, "--out", str(tmp_path / "o")]) == cli.EXIT_CONFIG


def test_bipartite_degenerate_alpha_runs(tmp_path):
    path = _write(
        tmp_path, "cfg.json",
        {"graphon": {"variant": "bipartite", "p": 0.5, "alpha": 0.5}, "N": 40},
    )
    assert cli.main(["bipartite", "--config", path, "--out", str(tmp_path / "o")]) == cli.EXIT_OK


def test_concentration_command_runs(tmp_path):
    path = _write(
        tmp_path, "cfg.json",
        {"graphon": SW_DICT, "N_sweep": [16, 24], "trials": 2, "gamma": 0.25},
    )
    out = str(tmp_path / "run")
    assert cli.main(["concentration", "--config", path, "--out", out]) == cli.EXIT_OK
    rows = (tmp_path / "run" / "concentration.csv").read_text().splitlines()
    assert rows[0] == "N,trial,ratio"
    assert len(rows) == 1 + 2 * 2


def test_bifurcate_command_small_case(tmp_path):
    path = _write(
        tmp_path, "cfg.json",
        {
            "graphon": SW_DICT, "N": 40, "seeds": [3], "kappa": {"index": 2},
            "r": 0.2, "b": 1.0, "deterministic": True,
            "continuation": {
                "ds0": 0.001, "ds_max": 0.005, "max_steps": 60,
                "eps_range": [-0.02, 0.02], "amplitude_cap": 1.0,
            },
        },
    )
    out = str(tmp_path / "run")
    assert cli.main(["bifurcate", "--config", path, "--out", out]) == cli.EXIT_OK
    files = _read_all(out)
    assert files["branch.csv"].decode().splitlines()[0] == "step,epsilon,amplitude,supnorm,stable"
    pred = json.loads(files["prediction.json"])
    assert pred["N"] == 40
    events = json.loads(files["events.json"])
    assert "branch_point" in events
