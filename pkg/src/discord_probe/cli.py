"""Config-driven experiment runner: `discord-probe run` / `discord-probe
sweep` with JSON summaries and CSV time series."""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile

import numpy as np
import yaml

from . import __version__, model_emission, model_ion, model_photon, model_spinchain
from .measures import BasisGrid, hs_distance_sq
from .protocol import (
    EvolutionSpec,
    TimeGrid,
    WitnessBoundError,
    classical_correlation_witness,
    haar_average_estimate,
    run_local_detection,
    run_minimized_detection,
)
from .states import BipartiteState, computational_basis, haar_unitary, zero_discord_state
from .tensor import BipartitionDims, kron

MODELS = ("ion", "photon-cv", "photon-dv", "spinchain", "emission", "haar", "generic")


class ConfigError(ValueError):
    pass


def _known(section: dict, allowed: set, where: str) -> dict:
    unknown = set(section) - allowed
    if unknown:
        raise ConfigError(f"unknown fields {sorted(unknown)} in {where}")
    return section


def load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            cfg = yaml.safe_load(fh)
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a mapping")
    _known(cfg, {"model", "seed", "out_dir", "params", "time_grid", "basis_grid"},
           "top level")
    if cfg.get("model") not in MODELS:
        raise ConfigError(f"model must be one of {MODELS}")
    cfg.setdefault("seed", 0)
    cfg.setdefault("params", {})
    return cfg


def _time_grid(cfg: dict, default_t_max: float, default_n: int = 200) -> TimeGrid:
    tg = _known(cfg.get("time_grid") or {}, {"t_max", "points"}, "time_grid")
    return TimeGrid.linear(
        float(tg.get("t_max", default_t_max)), int(tg.get("points", default_n))
    )


def _basis_grid(cfg: dict) -> BasisGrid:
    bg = _known(cfg.get("basis_grid") or {},
                {"n_theta", "n_phi", "refine_rounds"}, "basis_grid")
    return BasisGrid(
        n_theta=int(bg.get("n_theta", 60)),
        n_phi=int(bg.get("n_phi", 120)),
        refine_rounds=int(bg.get("refine_rounds", 6)),
    )


def _atomic_write(path: str, text: str):
    d = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _write_csv(path: str, columns: dict):
    keys = list(columns)
    rows = [",".join(keys)]
    for vals in zip(*columns.values()):
        rows.append(",".join("%.17g" % v for v in vals))
    _atomic_write(path, "\n".join(rows) + "\n")


def _series_csv(path: str, series, extra: dict | None = None):
    cols = {"time": series.times, "d_t": series.d_t}
    if extra:
        cols.update(extra)
    if series.bound_ref is not None:
        cols["bound"] = np.full(len(series.times), series.bound_ref)
    _write_csv(path, cols)


def _run_ion(cfg: dict, out_dir: str) -> dict:
    pr = _known(cfg["params"], {"omega", "eta", "nbar", "t0", "lamb_dicke_limit"},
                "ion params")
    p = model_ion.IonParams(
        omega=float(pr.get("omega", 1.0)),
        eta=float(pr.get("eta", 0.05)),
        nbar=float(pr.get("nbar", 0.0)),
        lamb_dicke_limit=bool(pr.get("lamb_dicke_limit", True)),
    )
    t0 = float(pr.get("t0", np.pi / (2 * p.omega0)))
    grid = _time_grid(cfg, 4 * np.pi / p.omega0)
    series = model_ion.simulated_local_distance(p, t0, grid)
    analytic = [model_ion.analytic_local_distance(p, t0, t) for t in grid.samples]
    _series_csv(os.path.join(out_dir, "series.csv"), series,
                {"d_analytic": np.asarray(analytic)})
    return {
        "d_max": series.d_max,
        "argmax_time": series.argmax_time,
        "D": model_ion.analytic_disturbance(p, t0),
        "bound": series.bound_ref,
        "t0": t0,
    }


def _run_photon_cv(cfg: dict, out_dir: str) -> dict:
    pr = _known(cfg["params"],
                {"beta", "delta_omega", "omega0", "t", "grid_span", "grid_points"},
                "photon-cv params")
    p = model_photon.PhotonParams(
        beta=float(pr.get("beta", 0.4)),
        delta_omega=float(pr.get("delta_omega", 1.0)),
        omega0=float(pr.get("omega0", 0.0)),
        t_prep=float(pr.get("t", 1.0)),
        grid_span=float(pr.get("grid_span", 640.0)),
        grid_points=int(pr.get("grid_points", 3201)),
    )
    grid = _time_grid(cfg, 6.0 / p.delta_omega, 400)
    d = model_photon.simulated_local_distance_photon(p, grid.samples)
    closed = np.array(
        [model_photon.analytic_local_distance_photon(p, t) for t in grid.samples]
    )
    disturbance = model_photon.analytic_disturbance_photon(p)
    if np.max(d) > disturbance + 1e-9:
        raise WitnessBoundError("photon witness exceeds its disturbance bound")
    _write_csv(os.path.join(out_dir, "series.csv"),
               {"time": grid.samples, "d_t": d, "d_closed_form": closed,
                "bound": np.full(len(d), disturbance)})
    return {
        "max_tau_d": float(np.max(d)),
        "closed_form_max": 0.5 * p.beta * (1 - np.exp(-2 * p.delta_omega * p.t_prep)),
        "D": disturbance,
    }


def _run_photon_dv(cfg: dict, out_dir: str) -> dict:
    pr = _known(cfg["params"], {"lam", "theta", "phase_rate"}, "photon-dv params")
    p = model_photon.DiscreteAncillaParams(
        lam=float(pr.get("lam", 0.5)), theta=float(pr.get("theta", np.pi / 4))
    )
    state = model_photon.build_discrete_state(p)
    evo = model_photon.channel_phase_evolution(float(pr.get("phase_rate", 1.0)))
    grid = _time_grid(cfg, 2 * np.pi, 100)
    series = run_minimized_detection(state, evo, grid, _basis_grid(cfg))
    hadamard = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
    cc_series, cc_fired = classical_correlation_witness(state, hadamard, evo, grid)
    _series_csv(os.path.join(out_dir, "series.csv"), series)
    _series_csv(os.path.join(out_dir, "classical_series.csv"), cc_series)
    return {
        "d_min": series.d_max,
        "D_min": series.bound_ref,
        "discord_witnessed": bool(series.d_max > 1e-6),
        "classical_correlation_detected": cc_fired,
    }


def _run_spinchain(cfg: dict, out_dir: str) -> dict:
    pr = _known(cfg["params"], {"n_spins", "alpha", "j0", "b_field", "kT"},
                "spinchain params")
    p = model_spinchain.ChainParams(
        n_spins=int(pr.get("n_spins", 8)),
        alpha=float(pr.get("alpha", 1.0)),
        j0=float(pr.get("j0", 1.0)),
        b_field=float(pr.get("b_field", 1.0)),
        kT=float(pr.get("kT", 0.0)),
    )
    grid = _time_grid(cfg, 20.0 / p.j0, 400)
    spec = model_spinchain.spectral(p)
    if p.kT > 0:
        series, d_min_bound = model_spinchain.thermal_detection(
            p, grid, _basis_grid(cfg), spec
        )
        _series_csv(os.path.join(out_dir, "series.csv"), series)
        return {"d_min": series.d_max, "D_min": d_min_bound,
                "gap": float(spec.energies[1] - spec.energies[0])}
    res = model_spinchain.ground_state_detection(p, grid, spec)
    _series_csv(os.path.join(out_dir, "series.csv"), res.series,
                {"d_magnetization": res.d_mag})
    return {
        "d_max": res.series.d_max,
        "argmax_time": res.series.argmax_time,
        "negativity": res.negativity,
        "gap": res.gap,
    }


def _run_emission(cfg: dict, out_dir: str) -> dict:
    pr = _known(cfg["params"], {"n_modes", "half_bandwidth", "structured"},
                "emission params")
    p = model_emission.EmissionParams(
        n_modes=int(pr.get("n_modes", 401)),
        half_bandwidth=float(pr.get("half_bandwidth", 20.0)),
    )
    if bool(pr.get("structured", False)):
        p = model_emission.structured_params(p)
    grid = _time_grid(cfg, 3.0 / 1.0, 31)
    t0s = grid.samples[1:]
    neg = np.array([model_emission.transient_negativity(p, t) for t in t0s])
    sig = np.array(
        [model_emission.emission_local_signal(p, t, 2 * t) for t in t0s]
    )
    _write_csv(os.path.join(out_dir, "series.csv"),
               {"time": t0s, "negativity": neg, "local_signal": sig})
    return {
        "max_negativity": float(np.max(neg)),
        "max_local_signal": float(np.max(sig)),
        "rate": p.rate,
    }


def _random_discordant_state(d_a: int, d_b: int, seed: int) -> BipartiteState:
    rng = np.random.default_rng(seed)
    dim = d_a * d_b
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = z @ z.conj().T
    rho = rho / np.trace(rho).real
    return BipartiteState(rho, BipartitionDims(d_a, d_b))


def _run_haar(cfg: dict, out_dir: str) -> dict:
    pr = _known(cfg["params"], {"d_a", "d_b", "n_samples"}, "haar params")
    d_a, d_b = int(pr.get("d_a", 2)), int(pr.get("d_b", 2))
    state = _random_discordant_state(d_a, d_b, int(cfg["seed"]))
    mean, std_error, predicted = haar_average_estimate(
        state, int(pr.get("n_samples", 10000)), int(cfg["seed"]) + 1
    )
    return {"mean": mean, "std_error": std_error, "predicted": predicted}


def _run_generic(cfg: dict, out_dir: str) -> dict:
    pr = _known(cfg["params"], {"d_a", "d_b", "state", "generator"},
                "generic params")
    d_a, d_b = int(pr.get("d_a", 2)), int(pr.get("d_b", 2))
    seed = int(cfg["seed"])
    kind = pr.get("state", "random")
    rng = np.random.default_rng(seed)
    if kind == "product":
        rho_b = np.diag(rng.dirichlet(np.ones(d_b))).astype(complex)
        state = zero_discord_state(
            [1.0] + [0.0] * (d_a - 1), computational_basis(d_a), [rho_b] * d_a
        )
    elif kind == "random":
        state = _random_discordant_state(d_a, d_b, seed)
    else:
        raise ConfigError(f"unknown generic state kind {kind!r}")
    gen_kind = pr.get("generator", "random")
    if gen_kind == "random":
        z = rng.standard_normal((d_a * d_b,) * 2) + 1j * rng.standard_normal(
            (d_a * d_b,) * 2
        )
        h = (z + z.conj().T) / 2
    elif gen_kind == "noninteracting":
        za = rng.standard_normal((d_a, d_a)) + 1j * rng.standard_normal((d_a, d_a))
        zb = rng.standard_normal((d_b, d_b)) + 1j * rng.standard_normal((d_b, d_b))
        h = kron((za + za.conj().T) / 2, np.eye(d_b)) + kron(
            np.eye(d_a), (zb + zb.conj().T) / 2
        )
    else:
        raise ConfigError(f"unknown generator kind {gen_kind!r}")
    grid = _time_grid(cfg, 10.0, 200)
    series = run_local_detection(state, EvolutionSpec(hamiltonian=h), grid)
    _series_csv(os.path.join(out_dir, "series.csv"), series)
    return {"d_max": series.d_max, "D": series.bound_ref,
            "argmax_time": series.argmax_time}


_RUNNERS = {
    "ion": _run_ion,
    "photon-cv": _run_photon_cv,
    "photon-dv": _run_photon_dv,
    "spinchain": _run_spinchain,
    "emission": _run_emission,
    "haar": _run_haar,
    "generic": _run_generic,
}


def _config_hash(cfg: dict) -> str:
    canon = json.dumps(cfg, sort_keys=True, default=str)
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


def execute(cfg: dict, out_dir: str) -> dict:
    os.makedirs(out_dir, exist_ok=True)
    results = _RUNNERS[cfg["model"]](cfg, out_dir)
    summary = {
        "config_hash": _config_hash(cfg),
        "model": cfg["model"],
        "seed": cfg["seed"],
        "version": __version__,
        "results": results,
    }
    _atomic_write(
        os.path.join(out_dir, "summary.json"),
        json.dumps(summary, sort_keys=True, indent=2) + "\n",
    )
    return summary


def _verdict(results: dict) -> str:
    if "d_max" in results and results.get("D") is not None:
        if results["d_max"] > 1e-9:
            return (
                f"discord witnessed: d_max = {results['d_max']:.6g} <= "
                f"D = {results['D']:.6g}"
            )
        return "no discord witnessed"
    if "d_min" in results:
        if results["d_min"] > 1e-6:
            return (
                f"discord witnessed: d_min = {results['d_min']:.6g} <= "
                f"D_min = {results['D_min']:.6g}"
            )
        return "no discord witnessed"
    return "run complete"


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="discord-probe")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("run", "sweep"):
        sp = sub.add_parser(name)
        sp.add_argument("config")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--out-dir", default="results")
        sp.add_argument("--threads", type=int, default=None,
                        help="advisory; numerical kernels manage threading")
    sub.choices["sweep"].add_argument("--axis", required=True)
    sub.choices["sweep"].add_argument("--values", required=True,
                                      help="comma-separated numbers")
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg["seed"] = args.seed
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    try:
        if args.command == "run":
            summary = execute(cfg, args.out_dir)
            print(_verdict(summary["results"]))
            return 0
        values = [float(v) for v in args.values.split(",")]
        rows = []
        for i, val in enumerate(values):
            sub_cfg = json.loads(json.dumps(cfg))
            sub_cfg["params"][args.axis] = val
            summary = execute(sub_cfg, os.path.join(args.out_dir, f"point-{i:03d}"))
            rows.append((val, summary["results"]))
        keys = sorted({k for _, r in rows for k, v in r.items()
                       if isinstance(v, (int, float)) and not isinstance(v, bool)})
        cols = {args.axis: [v for v, _ in rows]}
        for k in keys:
            cols[k] = [float(r.get(k, float("nan"))) for _, r in rows]
        _write_csv(os.path.join(args.out_dir, "sweep.csv"), cols)
        print(f"sweep complete: {len(values)} points over {args.axis}")
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except WitnessBoundError as exc:
        print(f"numerical contract violation: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
