"""Experiment runner: seeded, reproducible CSV/JSON artifacts.

Five canned experiments are exposed as subcommands::

    ringsh spectrum      --config cfg.json   # eigenvalue convergence sweep
    ringsh bifurcate     --config cfg.json   # branch + prediction + fit bundle
    ringsh resonance     --config cfg.json   # 2:1 resonance branch bundle
    ringsh bipartite     --config cfg.json   # bipartite spectrum + eigenvector
    ringsh concentration --config cfg.json   # operator-norm concentration sweep

Common flags: ``--config <path>``, ``--seed <u64>`` (overrides config seeds),
``--out <dir>``, ``--jobs <n>``.  The environment variable ``RINGSH_OUT``
supplies the default output root.  Exit codes: 0 success, 2 config error,
3 numerical failure (diagnostics land in ``metadata.json``).

Reruns with identical config and seeds produce byte-identical outputs: floats
are written with ``repr`` (shortest round-trip form) and JSON keys are sorted.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ringsh import continuation, dynamics, graphon, sampler, spectral, theory

__all__ = ["ConfigError", "ExperimentConfig", "main", "parse_config", "serialize_config"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

_OUT_ENV = "RINGSH_OUT"


class ConfigError(ValueError):
    """Raised for malformed, incomplete, or unknown configuration keys."""


class NumericalError(RuntimeError):
    """Raised when an experiment fails numerically (solver divergence etc.)."""


# --------------------------------------------------------------------------
# Configuration schema
# --------------------------------------------------------------------------

_REQUIRED = object()

# key -> (allowed commands, default). _REQUIRED means the command must set it.
_SCHEMA = {
    "graphon": ({"spectrum", "bifurcate", "bipartite", "concentration"}, _REQUIRED),
    "N": ({"bifurcate", "resonance", "bipartite"}, _REQUIRED),
    "N_sweep": ({"spectrum", "concentration"}, _REQUIRED),
    "seeds": ({"spectrum", "bifurcate", "resonance", "bipartite", "concentration"}, [0]),
    "out": ({"spectrum", "bifurcate", "resonance", "bipartite", "concentration"}, None),
    "r": ({"bifurcate", "resonance"}, 1.0),
    "b": ({"bifurcate", "resonance"}, 1.0),
    "kappa": ({"bifurcate", "resonance"}, None),
    "deterministic": ({"bifurcate", "spectrum"}, False),
    "h0": ({"bifurcate", "resonance"}, 1e-3),
    "match": ({"bifurcate"}, None),
    "continuation": ({"bifurcate", "resonance"}, None),
    "gamma": ({"concentration"}, 0.25),
    "trials": ({"concentration"}, 20),
}

_KAPPA_KEYS = {"index", "value"}
_MATCH_KEYS = {"delta", "gamma"}
_CONTROL_KEYS = set(continuation.ContinuationControls().as_dict())


@dataclass
class ExperimentConfig:
    """Schema-validated experiment description for one subcommand."""

    command: str
    raw: dict = field(default_factory=dict)

    def __post_init__(self):
        allowed = {k for k, (cmds, _) in _SCHEMA.items() if self.command in cmds}
        unknown = set(self.raw) - allowed
        if unknown:
            raise ConfigError(
                f"unknown config keys for {self.command!r}: {sorted(unknown)}"
            )
        resolved = {}
        for key in sorted(allowed):
            _, default = _SCHEMA[key]
            if key in self.raw:
                resolved[key] = self.raw[key]
            elif default is _REQUIRED:
                raise ConfigError(f"{self.command!r} config requires key {key!r}")
            else:
                resolved[key] = default
        self.raw = resolved
        self._validate()

    def _validate(self):
        c = self.raw
        if "graphon" in c:
            if not isinstance(c["graphon"], dict):
                raise ConfigError("'graphon' must be an object")
            try:
                graphon.model_from_dict(c["graphon"])
            except (ValueError, graphon.NotARingGraphonError) as exc:
                raise ConfigError(f"bad graphon spec: {exc}") from None
        if "N" in c and (not isinstance(c["N"], int) or c["N"] < 2):
            raise ConfigError("'N' must be an integer >= 2")
        if "N_sweep" in c:
            sweep = c["N_sweep"]
            if not isinstance(sweep, list) or not sweep or any(
                not isinstance(n, int) or n < 2 for n in sweep
            ):
                raise ConfigError("'N_sweep' must be a non-empty list of integers >= 2")
        seeds = c["seeds"]
        if not isinstance(seeds, list) or not seeds or any(
            not isinstance(s, int) or s < 0 for s in seeds
        ):
            raise ConfigError("'seeds' must be a non-empty list of non-negative integers")
        kappa = c.get("kappa")
        if kappa is not None:
            if not isinstance(kappa, dict) or len(kappa) != 1 or not set(kappa) <= _KAPPA_KEYS:
                raise ConfigError("'kappa' must be {'index': k} or {'value': x}")
            if "index" in kappa and (not isinstance(kappa["index"], int) or kappa["index"] < 2):
                raise ConfigError("'kappa.index' is 1-based over the sorted spectrum; must be >= 2")
        match = c.get("match")
        if match is not None:
            if not isinstance(match, dict) or not set(match) <= _MATCH_KEYS:
                raise ConfigError(f"'match' keys must be among {sorted(_MATCH_KEYS)}")
        controls = c.get("continuation")
        if controls is not None:
            if not isinstance(controls, dict) or not set(controls) <= _CONTROL_KEYS:
                raise ConfigError(f"'continuation' keys must be among {sorted(_CONTROL_KEYS)}")
        for key in ("r", "b", "h0", "gamma"):
            if key in c and not isinstance(c[key], (int, float)):
                raise ConfigError(f"{key!r} must be a number")
        if "trials" in c and (not isinstance(c["trials"], int) or c["trials"] < 1):
            raise ConfigError("'trials' must be a positive integer")

    # -- accessors ---------------------------------------------------------

    @property
    def model(self):
        return graphon.model_from_dict(self.raw["graphon"])

    @property
    def seeds(self) -> list:
        return list(self.raw["seeds"])

    def controls(self) -> continuation.ContinuationControls:
        kw = dict(self.raw.get("continuation") or {})
        if "eps_range" in kw:
            kw["eps_range"] = tuple(kw["eps_range"])
        return continuation.ContinuationControls(**kw)

    def as_dict(self) -> dict:
        out = dict(self.raw)
        out["command"] = self.command
        return out


def parse_config(text: str, command: str) -> ExperimentConfig:
    """Parse a JSON config document; unknown keys are rejected."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    data.pop("command", None)
    return ExperimentConfig(command=command, raw=data)


def serialize_config(config: ExperimentConfig) -> str:
    """Canonical text form; serialize(parse(text)) is idempotent."""
    return json.dumps(config.as_dict(), sort_keys=True, indent=2) + "\n"


# --------------------------------------------------------------------------
# Artifact writers
# --------------------------------------------------------------------------


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def _write_csv(path, header, rows):
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(x) for x in row) + "\n")


def _write_json(path, payload):
    with open(path, "w", newline="\n") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _jsonable(x):
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, (np.integer, int)):
        return int(x)
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    return x


def _write_metadata(out_dir, config, seeds, extra=None, error=None):
    from ringsh import __version__

    payload = {
        "config": config.as_dict(),
        "seeds": list(seeds),
        "version": __version__,
    }
    if extra:
        payload.update(_jsonable(extra))
    if error is not None:
        payload["error"] = str(error)
    _write_json(os.path.join(out_dir, "metadata.json"), payload)


# --------------------------------------------------------------------------
# Experiment bodies
# --------------------------------------------------------------------------


def _eig_rows(N, eigenvalues):
    return [(N, i, lam, lam / N) for i, lam in enumerate(eigenvalues)]


def _spectrum_task(args):
    graphon_dict, N, seed, deterministic = args
    model = graphon.model_from_dict(graphon_dict)
    if deterministic:
        g = sampler.deterministic_graph(model, N)
    else:
        g = sampler.random_graph(model, N, seed)
    return N, seed, spectral.eig_sym(g.laplacian).eigenvalues


def cmd_spectrum(config: ExperimentConfig, out_dir: str, jobs: int) -> dict:
    """Eigenvalue convergence sweep: deterministic + per-seed random spectra."""
    model = config.model
    sweep = sorted(config.raw["N_sweep"])
    seeds = config.seeds
    gdict = config.raw["graphon"]

    det_tasks = [(gdict, N, 0, True) for N in sweep]
    rnd_tasks = [(gdict, N, s, False) for N in sweep for s in seeds]
    results = _fan_out(_spectrum_task, det_tasks + rnd_tasks, jobs)
    det = {N: lams for (N, _, lams), t in zip(results, det_tasks + rnd_tasks) if t[3]}
    rnd = {(N, s): lams for (N, s, lams), t in zip(results, det_tasks + rnd_tasks) if not t[3]}

    rows = [row for N in sweep for row in _eig_rows(N, det[N])]
    _write_csv(os.path.join(out_dir, "eigenvalues.csv"), ("N", "index", "eigenvalue", "normalized"), rows)
    for s in seeds:
        rows = [row for N in sweep for row in _eig_rows(N, rnd[(N, s)])]
        _write_csv(
            os.path.join(out_dir, f"eigenvalues_seed{s}.csv"),
            ("N", "index", "eigenvalue", "normalized"),
            rows,
        )

    reference = {}
    if isinstance(model, graphon.Bipartite):
        bs = graphon.bipartite_spectrum(model.p, model.alpha)
        reference["eigenvalues"] = list(bs.eigenvalues)
    else:
        gs = graphon.graphon_spectrum(model)
        reference["eigenvalues"] = [[k, lam, mult] for k, lam, mult in gs.entries]
        reference["accumulation_point"] = gs.accumulation_point
    _write_json(os.path.join(out_dir, "prediction.json"), _jsonable(reference))
    return {"files": ["eigenvalues.csv"] + [f"eigenvalues_seed{s}.csv" for s in seeds]}


def _select_kappa(spec: spectral.SpectralData, rule: dict | None):
    """Resolve the kappa rule to (eigenvalue index, value) on a sorted spectrum."""
    if rule is None:
        rule = {"index": 2}
    if "index" in rule:
        idx = rule["index"] - 1  # 1-based: index 1 is the zero mode
        if idx >= spec.N:
            raise ConfigError(f"kappa index {rule['index']} exceeds matrix size {spec.N}")
    else:
        idx = int(np.argmin(np.abs(spec.eigenvalues - rule["value"])))
    return idx, float(spec.eigenvalues[idx])


def _critical_basis(spec, idx, tol=1e-8):
    """Orthonormal basis of the eigenspace containing mode idx, or None.

    A multi-dimensional critical eigenspace means the branch phase is free
    to drift during continuation; recording amplitudes against the full
    eigenspace keeps them phase invariant.
    """
    lam = spec.eigenvalues
    scale = max(1.0, abs(lam[idx]))
    members = np.nonzero(np.abs(lam - lam[idx]) <= tol * scale)[0]
    if len(members) < 2:
        return None
    return spec.eigenvectors[:, members]


def _run_two_sided(p, L, v_crit, eps_bp, h0, ctrl, basis=None):
    """Switch onto the bifurcating branch at both signs of h0 and continue.

    Returns the merged branch (negative side reversed, then positive side)
    or raises NumericalError when no branch can be entered.
    """
    points = []
    folds = []
    terms = []
    entered = False
    for s in (+h0, -h0):
        res = continuation.switch_branch(eps_bp, v_crit, s, p, L, ctrl)
        if res is None:
            continue
        entered = True
        u0, eps0 = res
        # Both continuation directions from the entry point; one of them may
        # carry a fold excursion into epsilon < eps_bp before turning back.
        fwd = continuation.continue_branch(u0, eps0, +1.0, p, L, v_crit, ctrl, amplitude_basis=basis)
        bwd = continuation.continue_branch(u0, eps0, -1.0, p, L, v_crit, ctrl, amplitude_basis=basis)
        side = list(reversed(bwd.points)) + fwd.points[1:]
        if s > 0:
            points.extend(side)
        else:
            points = list(reversed(side)) + points
        folds.extend(bwd.folds)
        folds.extend(fwd.folds)
        terms.extend(t for t in (bwd.terminated, fwd.terminated) if t)
    if not entered:
        raise NumericalError("branch switching failed at both signs")
    merged = continuation.Branch(points=points, folds=folds)
    merged.terminated = "; ".join(terms)
    return merged


def _branch_rows(branch):
    return [
        (i, pt.epsilon, pt.amplitude, pt.supnorm, pt.stable)
        for i, pt in enumerate(branch.points)
    ]


def _profile_rows(N, u):
    return [(j, j / N, u[j - 1]) for j in range(1, N + 1)]


def cmd_bifurcate(config: ExperimentConfig, out_dir: str, jobs: int) -> dict:
    """Continuation off the trivial state at a kappa selected by rule."""
    model = config.model
    N = config.raw["N"]
    seed = config.seeds[0]
    r, b = float(config.raw["r"]), float(config.raw["b"])
    deterministic = bool(config.raw["deterministic"])

    g = (
        sampler.deterministic_graph(model, N)
        if deterministic
        else sampler.random_graph(model, N, seed)
    )
    spec = spectral.eig_sym(g.laplacian)
    idx, kappa = _select_kappa(spec, config.raw["kappa"])
    v_crit = spec.eigenvectors[:, idx]
    p = dynamics.SHParams(kappa=kappa, epsilon=0.0, r=r, b=b)

    ctrl = config.controls()
    cands = continuation.trivial_branch_scan(p, g.laplacian, *ctrl.eps_range)
    if not cands:
        raise NumericalError("no branch point of the trivial state in epsilon range")
    eps_bp = min(cands, key=lambda c: abs(c.epsilon)).epsilon
    basis = _critical_basis(spec, idx)
    branch = _run_two_sided(p, g.laplacian, v_crit, eps_bp, float(config.raw["h0"]), ctrl, basis)
    fit = None
    fit_error = None
    try:
        fit = continuation.fit_normal_form(branch, eps_bp)
    except ValueError as exc:
        fit_error = str(exc)

    _write_csv(
        os.path.join(out_dir, "eigenvalues.csv"),
        ("N", "index", "eigenvalue", "normalized"),
        _eig_rows(N, spec.eigenvalues),
    )
    _write_csv(
        os.path.join(out_dir, "branch.csv"),
        ("step", "epsilon", "amplitude", "supnorm", "stable"),
        _branch_rows(branch),
    )
    far = max(branch.points, key=lambda pt: abs(pt.amplitude))
    _write_csv(
        os.path.join(out_dir, "profile.csv"), ("j", "x", "u"), _profile_rows(N, far.u)
    )
    _write_json(
        os.path.join(out_dir, "events.json"),
        _jsonable(
            {
                "branch_point": eps_bp,
                "folds": [
                    {"epsilon": f.epsilon, "amplitude": f.amplitude, "index": f.index}
                    for f in branch.folds
                ],
                "terminated": branch.terminated,
            }
        ),
    )

    prediction = {"kappa": kappa, "kappa_index": idx, "r": r, "b": b, "N": N}
    alignment = None
    if not isinstance(model, graphon.Bipartite):
        gs = graphon.graphon_spectrum(model)
        k_star = min(
            (k for k, _, _ in gs.entries if k > 0),
            key=lambda k: abs(N * gs.eigenvalue(k) - kappa),
        )
        budget = spectral.budget_for_mode(gs, k_star)
        matched = spectral.match_eigenvalues(spec, budget, N)
        if matched:
            alignment = spectral.align_to_fourier(spec, matched, k_star, budget)
            try:
                rp = theory.random_prediction(spec, alignment, k_star, r, b, gs)
                prediction["random"] = {
                    "k_star": rp.k_star,
                    "kappa": rp.kappa,
                    "beta": rp.beta,
                    "l_N": rp.l_N,
                    "l3": rp.l3,
                    "Gamma_r": rp.Gamma_r,
                    "epsilon_SN": rp.epsilon_SN,
                    "Omega": rp.Omega,
                }
            except ValueError as exc:
                prediction["random_error"] = str(exc)
        prediction["graphon"] = {
            "k_star": k_star,
            "mu": gs.eigenvalue(k_star),
            "accumulation_point": gs.accumulation_point,
        }
    if fit is not None:
        prediction["fit"] = {
            "a2": fit.a2,
            "a3": fit.a3,
            "residual": fit.residual,
            "exponent": fit.exponent,
            "n_points": fit.n_points,
        }
    else:
        prediction["fit_error"] = fit_error
    _write_json(os.path.join(out_dir, "prediction.json"), _jsonable(prediction))
    if alignment is not None:
        _write_json(
            os.path.join(out_dir, "alignment.json"),
            _jsonable(
                {
                    "matched": list(alignment.matched),
                    "a": list(alignment.a),
                    "residual": alignment.residual,
                    "procrustes": alignment.procrustes,
                    "davis_kahan_bound": alignment.davis_kahan_bound,
                    "beta": alignment.beta,
                    "omega": alignment.omega,
                }
            ),
        )
    return {"branch_points": len(branch.points), "folds": len(branch.folds)}


def cmd_resonance(config: ExperimentConfig, out_dir: str, jobs: int) -> dict:
    """2:1 resonance experiment on the dedicated two-harmonic kernel."""
    model = graphon.resonance_model()
    N = config.raw["N"]
    seed = config.seeds[0]
    r, b = float(config.raw["r"]), float(config.raw["b"])

    g = sampler.random_graph(model, N, seed)
    spec = spectral.eig_sym(g.laplacian)
    target = -3.0 * N / 8.0
    cluster = np.flatnonzero(np.abs(spec.eigenvalues - target) < 0.05 * N)
    if cluster.size == 0:
        raise NumericalError("no eigenvalue cluster near -3N/8")
    rule = config.raw["kappa"]
    if rule is None:
        idx = int(cluster[np.argmax(spec.eigenvalues[cluster])])
        kappa = float(spec.eigenvalues[idx])
    else:
        idx, kappa = _select_kappa(spec, rule)
    v_crit = spec.eigenvectors[:, idx]
    p = dynamics.SHParams(kappa=kappa, epsilon=0.0, r=r, b=b)

    ctrl = config.controls()
    cands = continuation.trivial_branch_scan(p, g.laplacian, *ctrl.eps_range)
    if not cands:
        raise NumericalError("no branch point of the trivial state in epsilon range")
    eps_bp = min(cands, key=lambda c: abs(c.epsilon)).epsilon
    basis = _critical_basis(spec, idx)
    branch = _run_two_sided(p, g.laplacian, v_crit, eps_bp, float(config.raw["h0"]), ctrl, basis)
    fit = None
    fit_error = None
    try:
        fit = continuation.fit_normal_form(branch, eps_bp)
    except ValueError as exc:
        fit_error = str(exc)

    _write_csv(
        os.path.join(out_dir, "eigenvalues.csv"),
        ("N", "index", "eigenvalue", "normalized"),
        _eig_rows(N, spec.eigenvalues),
    )
    _write_csv(
        os.path.join(out_dir, "branch.csv"),
        ("step", "epsilon", "amplitude", "supnorm", "stable"),
        _branch_rows(branch),
    )
    far = max(branch.points, key=lambda pt: abs(pt.amplitude))
    _write_csv(
        os.path.join(out_dir, "profile.csv"), ("j", "x", "u"), _profile_rows(N, far.u)
    )
    rp = theory.resonance(1, r, epsilon=max(abs(far.epsilon - eps_bp), 1e-6))
    prediction = {
        "kappa": kappa,
        "cluster": [int(i) for i in cluster],
        "cluster_eigenvalues": [float(spec.eigenvalues[i]) for i in cluster],
        "target": target,
        "resonance": {
            "k1": rp.k1,
            "k2": rp.k2,
            "amplitudes": list(rp.amplitudes),
        },
    }
    if fit is not None:
        prediction["fit"] = {
            "a2": fit.a2,
            "a3": fit.a3,
            "residual": fit.residual,
            "exponent": fit.exponent,
            "n_points": fit.n_points,
        }
    else:
        prediction["fit_error"] = fit_error
    _write_json(os.path.join(out_dir, "prediction.json"), _jsonable(prediction))
    _write_json(
        os.path.join(out_dir, "events.json"),
        _jsonable(
            {
                "branch_point": eps_bp,
                "folds": [
                    {"epsilon": f.epsilon, "amplitude": f.amplitude, "index": f.index}
                    for f in branch.folds
                ],
                "terminated": branch.terminated,
            }
        ),
    )
    return {"cluster_size": int(cluster.size)}


def cmd_bipartite(config: ExperimentConfig, out_dir: str, jobs: int) -> dict:
    """Bipartite spectrum clustering plus the step-profile eigenvector."""
    model = config.model
    if not isinstance(model, graphon.Bipartite):
        raise ConfigError("'bipartite' requires a bipartite graphon variant")
    N = config.raw["N"]
    seed = config.seeds[0]
    g = sampler.random_graph(model, N, seed)
    spec = spectral.eig_sym(g.laplacian)
    bs = graphon.bipartite_spectrum(model.p, model.alpha)

    _write_csv(
        os.path.join(out_dir, "eigenvalues.csv"),
        ("N", "index", "eigenvalue", "normalized"),
        _eig_rows(N, spec.eigenvalues),
    )
    idx = int(np.argmin(np.abs(spec.eigenvalues - (-model.p * N))))
    v = spec.eigenvectors[:, idx]
    _write_csv(os.path.join(out_dir, "profile.csv"), ("j", "x", "u"), _profile_rows(N, v))

    split = int(round(model.alpha * N))
    lo, hi = v[:split], v[split:]
    gap = abs(float(lo.mean()) - float(hi.mean()))
    prediction = {
        "eigenvalues": list(bs.eigenvalues),
        "isolated": list(bs.isolated),
        "step_levels": list(bs.step_levels),
        "profile_eigenvalue": float(spec.eigenvalues[idx]),
        "profile_index": idx,
        "group_means": [float(lo.mean()), float(hi.mean())],
        "group_stds": [float(lo.std()), float(hi.std())],
        "group_gap": gap,
    }
    _write_json(os.path.join(out_dir, "prediction.json"), _jsonable(prediction))
    return {"profile_index": idx}


def _concentration_task(args):
    graphon_dict, N, gamma, trials, seed = args
    model = graphon.model_from_dict(graphon_dict)
    rep = spectral.concentration_report(model, N, gamma, trials, seed)
    return N, rep


def cmd_concentration(config: ExperimentConfig, out_dir: str, jobs: int) -> dict:
    """Operator-norm concentration ratios across an N sweep."""
    sweep = sorted(config.raw["N_sweep"])
    gamma = float(config.raw["gamma"])
    trials = config.raw["trials"]
    seed = config.seeds[0]
    gdict = config.raw["graphon"]
    tasks = [(gdict, N, gamma, trials, seed) for N in sweep]
    results = _fan_out(_concentration_task, tasks, jobs)
    reports = dict(results)

    rows = [
        (N, t, reports[N].ratios[t])
        for N in sweep
        for t in range(trials)
    ]
    _write_csv(os.path.join(out_dir, "concentration.csv"), ("N", "trial", "ratio"), rows)
    summary = {
        str(N): {
            "gamma": gamma,
            "bound": reports[N].bound,
            "median_ratio": float(np.median(reports[N].ratios)),
            "max_ratio": float(np.max(reports[N].ratios)),
        }
        for N in sweep
    }
    _write_json(os.path.join(out_dir, "prediction.json"), _jsonable(summary))
    return {"N_sweep": sweep}


def _fan_out(fn, tasks, jobs):
    """Run tasks in order, optionally through a process pool.

    Results come back in task order either way, so output files are
    byte-identical regardless of the job count.
    """
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks))


# --------------------------------------------------------------------------
# Entry point
# --------------------------------------------------------------------------

_COMMANDS = {
    "spectrum": cmd_spectrum,
    "bifurcate": cmd_bifurcate,
    "resonance": cmd_resonance,
    "bipartite": cmd_bipartite,
    "concentration": cmd_concentration,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ringsh", description="Ring-graphon Swift-Hohenberg experiment runner"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in _COMMANDS.items():
        sp = sub.add_parser(name, help=fn.__doc__.splitlines()[0])
        sp.add_argument("--config", required=True, help="path to a JSON config file")
        sp.add_argument("--seed", type=int, default=None, help="override config seeds")
        sp.add_argument("--out", default=None, help="output directory")
        sp.add_argument("--jobs", type=int, default=1, help="worker processes")
    return parser


def _resolve_out(config: ExperimentConfig, flag_out: str | None) -> str:
    if flag_out:
        return flag_out
    if config.raw.get("out"):
        return config.raw["out"]
    root = os.environ.get(_OUT_ENV, os.getcwd())
    return os.path.join(root, config.command)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        with open(args.config) as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        config = parse_config(text, args.command)
        if args.seed is not None:
            if args.seed < 0:
                raise ConfigError("--seed must be non-negative")
            config.raw["seeds"] = [args.seed]
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    out_dir = _resolve_out(config, args.out)
    os.makedirs(out_dir, exist_ok=True)
    try:
        extra = _COMMANDS[args.command](config, out_dir, args.jobs)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalError, dynamics.StiffnessError, np.linalg.LinAlgError, ValueError) as exc:
        _write_metadata(out_dir, config, config.seeds, error=exc)
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    _write_metadata(out_dir, config, config.seeds, extra={"result": extra})
    print(f"wrote {out_dir}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
