"""Canned experiment outputs for the rendering tests.

The fixtures shell out to the installed ``ringsh`` CLI so that the plots
package is exercised strictly against the published file contracts.
"""

import json
import subprocess

import pytest

SW = {"variant": "small_world", "p": 0.9, "q": 0.01, "alpha": 0.2}

CONTROLS = {
    "ds0": 0.001,
    "ds_max": 0.005,
    "max_steps": 60,
    "eps_range": [-0.02, 0.02],
    "amplitude_cap": 1.0,
}


def _run(command: str, config: dict, out_dir) -> str:
    cfg = out_dir / "config.json"
    cfg.write_text(json.dumps(config))
    proc = subprocess.run(
        ["ringsh", command, "--config", str(cfg), "--out", str(out_dir)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, f"ringsh {command} failed: {proc.stderr}"
    return str(out_dir)


@pytest.fixture(scope="session")
def spectrum_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("spectrum")
    return _run("spectrum", {"graphon": SW, "N_sweep": [16, 24, 32], "seeds": [0]}, out)


@pytest.fixture(scope="session")
def bifurcate_det_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("bif_det")
    config = {
        "graphon": SW,
        "N": 40,
        "kappa": {"index": 2},
        "r": 0.2,
        "b": 1.0,
        "deterministic": True,
        "continuation": CONTROLS,
    }
    return _run("bifurcate", config, out)


@pytest.fixture(scope="session")
def bifurcate_rand_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("bif_rand")
    config = {
        "graphon": SW,
        "N": 40,
        "seeds": [3],
        "kappa": {"index": 2},
        "r": 0.2,
        "b": 1.0,
        "continuation": CONTROLS,
    }
    return _run("bifurcate", config, out)


@pytest.fixture(scope="session")
def resonance_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("resonance")
    config = {"N": 80, "seeds": [0], "r": 0.2, "b": 1.0, "continuation": CONTROLS}
    return _run("resonance", config, out)


@pytest.fixture(scope="session")
def bipartite_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("bipartite")
    config = {
        "graphon": {"variant": "bipartite", "p": 0.5, "alpha": 0.75},
        "N": 40,
    }
    return _run("bipartite", config, out)
