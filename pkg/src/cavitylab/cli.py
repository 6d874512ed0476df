"""Config-driven experiment runner.

Each experiment writes CSV/JSON artifacts plus a manifest (resolved config,
config hash, versions, artifact checksums) into the output directory.
Exit codes: 0 success, 1 invalid config, 2 numerical failure,
3 self-check failure.  Plotting is deliberately left to external tools.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import tempfile

import numpy as np
import jsonschema
import scipy

from . import __version__, direct, dynamics, fock, protocol, tomo, wigner
from .errors import CavityLabError, ConfigError

# ---------------------------------------------------------------------------
# config schemas

_ALPHA = {"oneOf": [{"type": "number"},
                    {"type": "array", "items": {"type": "number"},
                     "minItems": 2, "maxItems": 2}]}

_STATE = {
    "type": "object",
    "properties": {
        "kind": {"enum": ["vacuum", "fock", "coherent", "cat", "mixture", "damped-cat"]},
        "n": {"type": "integer", "minimum": 0},
        "alpha": _ALPHA,
        "psi1": {"type": "number"},
        "t": {"type": "number", "minimum": 0},
        "kappa": {"type": "number", "exclusiveMinimum": 0},
    },
    "required": ["kind"],
    "additionalProperties": False,
}

_GRID = {
    "type": "object",
    "properties": {
        "span": {"type": "number", "exclusiveMinimum": 0},
        "step": {"type": "number", "exclusiveMinimum": 0},
        "q1_min": {"type": "number"}, "q1_max": {"type": "number"},
        "q2_min": {"type": "number"}, "q2_max": {"type": "number"},
        "n1": {"type": "integer", "minimum": 2}, "n2": {"type": "integer", "minimum": 2},
    },
    "additionalProperties": False,
}

_TIMES = {"oneOf": [
    {"type": "array", "items": {"type": "number", "minimum": 0}, "minItems": 1},
    {"type": "object",
     "properties": {"t_start": {"type": "number", "minimum": 0},
                    "t_end": {"type": "number", "exclusiveMinimum": 0},
                    "steps": {"type": "integer", "minimum": 1}},
     "required": ["t_start", "t_end", "steps"],
     "additionalProperties": False},
]}

_COMMON = {
    "seed": {"type": "integer", "minimum": 0},
    "dim": {"type": ["integer", "null"], "minimum": 2},
}

SCHEMAS = {
    "prepare-cat": {
        "type": "object",
        "properties": {**_COMMON, "alpha": _ALPHA, "phi": {"type": "number"},
                       "eta": {"type": "number"}},
        "required": ["alpha"],
        "additionalProperties": False,
    },
    "decoherence-scan": {
        "type": "object",
        "properties": {**_COMMON, "alpha": _ALPHA,
                       "kappa": {"type": "number", "exclusiveMinimum": 0},
                       "n_thermal": {"type": "number", "minimum": 0},
                       "delays": _TIMES},
        "required": ["alpha"],
        "additionalProperties": False,
    },
    "wigner-map": {
        "type": "object",
        "properties": {**_COMMON, "state": _STATE, "grid": _GRID},
        "required": ["state"],
        "additionalProperties": False,
    },
    "tomography": {
        "type": "object",
        "properties": {**_COMMON, "state": _STATE, "grid": _GRID,
                       "angles": {"type": "integer", "minimum": 8},
                       "samples": {"type": "integer", "minimum": 1},
                       "bin_width": {"type": "number", "exclusiveMinimum": 0},
                       "q_range": {"type": "number", "exclusiveMinimum": 0}},
        "required": ["state"],
        "additionalProperties": False,
    },
    "direct-map": {
        "type": "object",
        "properties": {**_COMMON, "state": _STATE, "grid": _GRID,
                       "variant": {"enum": ["dispersive", "opposite-shift"]}},
        "required": ["state"],
        "additionalProperties": False,
    },
    "direct-monitor": {
        "type": "object",
        "properties": {**_COMMON, "state": _STATE,
                       "kappa": {"type": "number", "exclusiveMinimum": 0},
                       "n_thermal": {"type": "number", "minimum": 0},
                       "times": _TIMES,
                       "n_shots": {"type": "integer", "minimum": 0},
                       "efficiency": {"type": "number", "minimum": 0, "maximum": 1}},
        "required": ["state"],
        "additionalProperties": False,
    },
    "pauli-demo": {
        "type": "object",
        "properties": {**_COMMON, "grid": _GRID},
        "additionalProperties": False,
    },
    "selfcheck": {
        "type": "object",
        "properties": {**_COMMON},
        "additionalProperties": False,
    },
}

DEFAULTS = {
    "prepare-cat": {"phi": float(np.pi), "eta": 0.0, "seed": 0, "dim": None},
    "decoherence-scan": {"kappa": 1.0, "n_thermal": 0.0, "seed": 0, "dim": None,
                         "delays": {"t_start": 0.0, "t_end": 8.0, "steps": 81}},
    "wigner-map": {"grid": None, "seed": 0, "dim": None},
    "tomography": {"grid": None, "angles": 36, "samples": 100000, "seed": 12345,
                   "bin_width": 0.05, "q_range": None, "dim": None},
    "direct-map": {"grid": None, "variant": "dispersive", "seed": 0, "dim": None},
    "direct-monitor": {"kappa": 1.0, "n_thermal": 0.0, "n_shots": 0,
                       "efficiency": 1.0, "seed": 0, "dim": None,
                       "times": {"t_start": 0.0, "t_end": 2.0, "steps": 41}},
    "pauli-demo": {"grid": None, "seed": 0, "dim": None},
    "selfcheck": {"seed": 0, "dim": None},
}


def _parse_alpha(value) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    return complex(value[0], value[1])


def resolve_config(experiment: str, raw: dict) -> dict:
    if experiment not in SCHEMAS:
        raise ConfigError(f"unknown experiment {experiment!r}; "
                          f"choose from {sorted(SCHEMAS)}")
    try:
        jsonschema.validate(raw, SCHEMAS[experiment])
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"invalid config: {exc.message}") from exc
    cfg = dict(DEFAULTS[experiment])
    cfg.update(raw)
    return cfg


def _build_state(state_cfg: dict, dim_override) -> tuple[fock.DensityOperator, float]:
    """Returns (density operator, phase-space amplitude scale for grid defaults)."""
    kind = state_cfg["kind"]
    alpha = _parse_alpha(state_cfg.get("alpha", 0.0))
    if kind == "vacuum":
        scale = 0.0
    elif kind == "fock":
        scale = float(np.sqrt(state_cfg.get("n", 1)))
    else:
        scale = abs(alpha)
    dim = dim_override or fock.default_dim(max(scale, 1.0))
    spec = fock.HilbertSpec(dim)
    if kind == "vacuum":
        rho = fock.pure_to_density(fock.vacuum(spec))
    elif kind == "fock":
        rho = fock.pure_to_density(fock.fock_state(spec, state_cfg.get("n", 1)))
    elif kind == "coherent":
        rho = fock.pure_to_density(fock.coherent_state(spec, alpha))
    elif kind == "cat":
        rho = fock.pure_to_density(fock.cat_state(spec, alpha, state_cfg.get("psi1", 0.0)))
    elif kind == "mixture":
        rho = fock.mix([fock.coherent_state(spec, alpha),
                        fock.coherent_state(spec, -alpha)], [0.5, 0.5])
    elif kind == "damped-cat":
        pure = fock.cat_state(spec, alpha, state_cfg.get("psi1", 0.0))
        model = dynamics.DampingModel(kappa=state_cfg.get("kappa", 1.0))
        rho = dynamics.evolve(fock.pure_to_density(pure), model, state_cfg.get("t", 0.1))
    else:  # pragma: no cover - schema forbids
        raise ConfigError(f"unknown state kind {kind!r}")
    return rho, scale


def _build_grid(grid_cfg, scale: float) -> wigner.PhaseSpaceGrid:
    if grid_cfg is None:
        return wigner.default_grid(max(scale, 1.0))
    if "span" in grid_cfg or "step" in grid_cfg:
        span = grid_cfg.get("span", float(np.sqrt(2.0) * max(scale, 1.0) + 4.0))
        step = grid_cfg.get("step", 0.075)
        n = int(np.ceil(2.0 * span / step)) + 1
        return wigner.PhaseSpaceGrid(-span, span, -span, span, n, n)
    return wigner.PhaseSpaceGrid(grid_cfg["q1_min"], grid_cfg["q1_max"],
                                 grid_cfg["q2_min"], grid_cfg["q2_max"],
                                 grid_cfg["n1"], grid_cfg["n2"])


def _times_array(times_cfg) -> np.ndarray:
    if isinstance(times_cfg, dict):
        grid = dynamics.TimeGrid(times_cfg["t_start"], times_cfg["t_end"],
                                 times_cfg["steps"])
        return grid.times
    return np.asarray(times_cfg, dtype=float)


# ---------------------------------------------------------------------------
# artifact plumbing


def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    return str(x)


class ArtifactWriter:
    """Atomic CSV/JSON artifact writer with a closing manifest."""

    def __init__(self, out_dir: str, experiment: str, config: dict):
        self.out_dir = out_dir
        self.experiment = experiment
        self.config = config
        self.checksums: dict[str, str] = {}
        os.makedirs(out_dir, exist_ok=True)

    def _store(self, name: str, payload: bytes) -> None:
        fd, tmp = tempfile.mkstemp(dir=self.out_dir, prefix=f".{name}.")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(payload)
            os.replace(tmp, os.path.join(self.out_dir, name))
        finally:
            if os.path.exists(tmp):
                os.unlink(tmp)
        self.checksums[name] = hashlib.sha256(payload).hexdigest()

    def csv(self, name: str, header: list[str], rows) -> None:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(x) for x in row])
        self._store(name, buf.getvalue().encode())

    def json(self, name: str, payload: dict) -> None:
        self._store(name, (json.dumps(payload, indent=2, sort_keys=True) + "\n").encode())

    def finish(self) -> None:
        canonical = json.dumps(self.config, sort_keys=True, separators=(",", ":"))
        manifest = {
            "experiment": self.experiment,
            "config": self.config,
            "config_hash": hashlib.sha256(canonical.encode()).hexdigest(),
            "versions": {
                "cavitylab": __version__,
                "python": sys.version.split()[0],
                "numpy": np.__version__,
                "scipy": scipy.__version__,
            },
            "artifacts": dict(sorted(self.checksums.items())),
        }
        payload = (json.dumps(manifest, indent=2, sort_keys=True) + "\n").encode()
        fd, tmp = tempfile.mkstemp(dir=self.out_dir, prefix=".manifest.")
        with os.fdopen(fd, "wb") as fh:
            fh.write(payload)
        os.replace(tmp, os.path.join(self.out_dir, "manifest.json"))


def _write_map(writer: ArtifactWriter, name: str, wmap: wigner.WignerMap) -> None:
    q1, q2 = wmap.grid.q1_axis, wmap.grid.q2_axis
    rows = ((q1[i], q2[j], wmap.values[i, j])
            for i in range(q1.size) for j in range(q2.size))
    writer.csv(f"{name}.csv", ["q1", "q2", "W"], rows)
    writer.json(f"{name}.json", {
        "grid": {"q1_min": wmap.grid.q1_min, "q1_max": wmap.grid.q1_max,
                 "q2_min": wmap.grid.q2_min, "q2_max": wmap.grid.q2_max,
                 "n1": wmap.grid.n1, "n2": wmap.grid.n2},
        "convention": wmap.convention,
        "provenance": wmap.provenance,
        "diagnostics": wmap.diagnostics,
        "values_sha256": hashlib.sha256(
            np.ascontiguousarray(wmap.values).tobytes()).hexdigest(),
    })


# ---------------------------------------------------------------------------
# experiments


def _run_prepare_cat(cfg: dict, writer: ArtifactWriter) -> None:
    alpha = _parse_alpha(cfg["alpha"])
    spec = fock.HilbertSpec(cfg["dim"] or fock.default_dim(max(abs(alpha), 1.0)))
    config = protocol.ProtocolConfig(phi=cfg["phi"], eta=cfg["eta"])
    branches = protocol.prepare_cat(alpha, config, spec)
    rows = []
    for outcome, psi1 in (("g", 0.0), ("e", float(np.pi))):
        br = branches[outcome]
        if br.field_after is None:
            rows.append([outcome, br.probability, float("nan")])
            continue
        ideal = fock.cat_state(spec, alpha, psi1)
        rows.append([outcome, br.probability, br.field_after.fidelity_pure(ideal)])
    writer.csv("prepare_cat.csv", ["outcome", "probability", "fidelity_to_ideal_cat"], rows)


def _run_decoherence_scan(cfg: dict, writer: ArtifactWriter) -> None:
    alpha = _parse_alpha(cfg["alpha"])
    model = dynamics.DampingModel(kappa=cfg["kappa"], n_thermal=cfg["n_thermal"])
    delays = _times_array(cfg["delays"])
    spec = fock.HilbertSpec(cfg["dim"] or fock.default_dim(max(abs(alpha), 1.0)))
    rows = protocol.two_atom_scan(alpha, delays, model, spec=spec)
    writer.csv("decoherence_scan.csv",
               ["delay", "P_e2_given_e1", "P_g2_given_g1"],
               ((r.delay, r.p_e2_given_e1, r.p_g2_given_g1) for r in rows))
    # damping trajectory of the post-e1 conditional field
    first = protocol.prepare_cat(alpha, protocol.ProtocolConfig(), spec)
    rho0 = first["e"].field()
    traj = dynamics.evolve_trajectory(rho0, model, delays)
    traj_rows = []
    for t, rho_t in zip(delays, traj):
        traj_rows.append([t, dynamics.cat_coherence(rho_t, alpha),
                          rho_t.mean_photon(), abs(rho_t.trace() - 1.0)])
    writer.csv("trajectory.csv", ["t", "coherence", "mean_n", "trace_error"], traj_rows)


def _run_wigner_map(cfg: dict, writer: ArtifactWriter) -> None:
    rho, scale = _build_state(cfg["state"], cfg["dim"])
    grid = _build_grid(cfg["grid"], scale)
    _write_map(writer, "wigner_map", wigner.wigner_map(rho, grid))


def _run_tomography(cfg: dict, writer: ArtifactWriter) -> None:
    rho, scale = _build_state(cfg["state"], cfg["dim"])
    grid = _build_grid(cfg["grid"], scale)
    angles = tomo.uniform_angles(cfg["angles"])
    result = tomo.reconstruct_from_samples(rho, angles, cfg["samples"], cfg["seed"],
                                           grid, bin_width=cfg["bin_width"],
                                           q_range=cfg["q_range"])
    seeds = np.random.SeedSequence(cfg["seed"]).spawn(angles.size)
    sino_rows = []
    for k, theta in enumerate(angles):
        hist = tomo.sample_homodyne(rho, float(theta), cfg["samples"], seeds[k],
                                    bin_width=cfg["bin_width"],
                                    q_range=cfg["q_range"] or tomo._default_q_range(rho))
        dens = hist.density_estimate()
        centers = hist.centers
        sino_rows.extend([theta, centers[i], dens[i]] for i in range(centers.size))
    writer.csv("sinogram.csv", ["theta", "q", "density"], sino_rows)
    writer.json("sinogram_meta.json", {
        "n_samples": cfg["samples"], "seed": cfg["seed"],
        "bin_width": cfg["bin_width"],
        "q_range": cfg["q_range"] or tomo._default_q_range(rho),
        "angles": cfg["angles"],
    })
    _write_map(writer, "reconstruction", result.map)
    writer.json("reconstruction_report.json", {
        "rmse": result.error_report["rmse"],
        "fringe_contrast": result.error_report["fringe_contrast_recon"],
        "fringe_contrast_true": result.error_report["fringe_contrast_true"],
        "angles": result.error_report["angles"],
        "n": result.error_report["n_per_angle"],
        "max_abs_error": result.error_report["max_abs_error"],
        "marginal_consistency_residuals":
            {str(k): v for k, v in
             result.error_report["marginal_consistency_residuals"].items()},
    })


def _run_direct_map(cfg: dict, writer: ArtifactWriter) -> None:
    rho, scale = _build_state(cfg["state"], cfg["dim"])
    grid = _build_grid(cfg["grid"], scale)
    if cfg["variant"] == "opposite-shift":
        config = protocol.ProtocolConfig(phi=np.pi / 2, eta=np.pi / 2)
        wmap = direct.scan_map(rho, grid, config, variant="opposite")
    else:
        wmap = direct.scan_map(rho, grid)
    _write_map(writer, "direct_map", wmap)


def _run_direct_monitor(cfg: dict, writer: ArtifactWriter) -> None:
    rho, _ = _build_state(cfg["state"], cfg["dim"])
    model = dynamics.DampingModel(kappa=cfg["kappa"], n_thermal=cfg["n_thermal"])
    times = _times_array(cfg["times"])
    points = direct.monitor_origin(rho, model, times, n_shots=cfg["n_shots"],
                                   efficiency=cfg["efficiency"], seed=cfg["seed"])
    rows = []
    for pt in points:
        sampled = pt.sampled.estimate if pt.sampled else float("nan")
        err = pt.sampled.stderr if pt.sampled else float("nan")
        rows.append([pt.t, pt.exact.estimate, sampled, err])
    writer.csv("direct_monitor.csv", ["t", "W0_exact", "W0_sampled", "stderr"], rows)


def _run_pauli_demo(cfg: dict, writer: ArtifactWriter) -> None:
    grid = _build_grid(cfg["grid"], 2.0)
    report = tomo.pauli_incompleteness_demo(grid)
    writer.json("pauli_demo.json", report)


def _run_selfcheck(cfg: dict, writer: ArtifactWriter) -> int:
    checks = run_selfcheck()
    writer.json("selfcheck.json", {
        "passed": all(ok for _, ok, _ in checks),
        "checks": [{"name": n, "ok": ok, "detail": d} for n, ok, d in checks],
    })
    for name, ok, detail in checks:
        print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    return 0 if all(ok for _, ok, _ in checks) else 3


def run_selfcheck() -> list[tuple[str, bool, str]]:
    """Fast invariant battery over every module; returns (name, ok, detail)."""
    checks: list[tuple[str, bool, str]] = []
    spec = fock.HilbertSpec(26)
    cat = fock.pure_to_density(fock.cat_state(spec, 1.5, 0.0))
    one = fock.pure_to_density(fock.fock_state(spec, 1))

    # cross-construction equivalence
    dev = 0.0
    for q, p in ((0.0, 0.0), (0.7, -0.4), (-1.1, 0.9), (1.8, 1.2)):
        dev = max(dev, abs(wigner.wigner_point(cat, (q + 1j * p) / np.sqrt(2))
                           - wigner.wigner_position(cat, q, p)))
    checks.append(("cross-construction-equivalence", dev < 1e-6, f"max dev {dev:.2e}"))

    # direct-readout identity
    dev = 0.0
    for rho in (cat, one):
        for al in (0.0, 0.35 - 0.2j, -0.6 + 0.4j):
            rec = direct.direct_point_exact(rho, al)
            dev = max(dev, abs(rec.estimate - wigner.wigner_point(rho, -al)))
    checks.append(("direct-readout-identity", dev < 1e-8, f"max dev {dev:.2e}"))

    # one-photon values
    w_pt = wigner.wigner_point(one, 0.0)
    w_pos = wigner.wigner_position(one, 0.0, 0.0)
    w_res = direct.variant_check(one, "resonant-2pi").estimate
    mixed = fock.DensityOperator(np.diag([0.2, 0.8] + [0.0] * (spec.dim - 2)))
    w_mix = direct.variant_check(mixed, "resonant-2pi").estimate
    ok = (abs(w_pt + 2) < 1e-9 and abs(w_pos + 2) < 1e-9
          and abs(w_res + 2) < 1e-9 and abs(w_mix + 1.2) < 1e-9)
    checks.append(("one-photon-origin", ok,
                   f"point {w_pt:.12f}, integral {w_pos:.12f}, resonant {w_res:.12f}, "
                   f"mixed {w_mix:.12f}"))

    # bound and normalization
    grid = wigner.default_grid(1.5, step=0.1)
    wmap = wigner.wigner_map(cat, grid)
    norm = wmap.normalization_sum()
    checks.append(("bound-and-normalization",
                   wmap.max_abs() <= 2.0 + 1e-8 and abs(norm - 1.0) < 1e-3,
                   f"max|W| {wmap.max_abs():.6f}, sum {norm:.6f}"))

    # decoherence law at |alpha|^2 = 5
    model = dynamics.DampingModel(kappa=1.0)
    al = np.sqrt(5.0)
    odd = fock.pure_to_density(fock.cat_state(fock.HilbertSpec(30), al, np.pi))
    t_dec = dynamics.decoherence_time(model, 5.0)
    tau = dynamics.fit_coherence_decay(odd, model, al, 0.5 * t_dec)
    rel = abs(tau - t_dec) / t_dec
    checks.append(("decoherence-law", rel < 0.05, f"tau {tau:.5f} vs {t_dec:.5f} ({rel:.2%})"))

    # two-atom correlation endpoints
    tab0 = protocol.two_atom_conditional(al, 0.0, model)
    tab8 = protocol.two_atom_conditional(al, 8.0, model)
    checks.append(("two-atom-correlations",
                   tab0.p_e2_given_e1 > 1 - 1e-4 and tab8.p_e2_given_e1 < 0.02,
                   f"P(0) {tab0.p_e2_given_e1:.6f}, P(8/k) {tab8.p_e2_given_e1:.6f}"))

    # marginal vs map line integral
    small = wigner.wigner_map(cat, wigner.default_grid(1.5, step=0.06))
    dev = 0.0
    for theta in (0.0, np.pi / 4, np.pi / 2, 2.2):
        qs, pm = wigner.radon_of_map(small, theta)
        dev = max(dev, float(np.max(np.abs(
            pm - wigner.marginal_distribution(cat, theta, qs)))))
    checks.append(("radon-consistency", dev < 5e-3, f"max dev {dev:.2e}"))

    # marginals-only incompleteness
    rep = tomo.pauli_incompleteness_demo(wigner.default_grid(1.5, step=0.15))
    checks.append(("marginals-incomplete",
                   rep["marginals_only_incomplete"]
                   and rep["theta_45_marginal_dev"] > 0.01,
                   f"two-angle dev {rep['two_angle_sinogram_sup_dev']:.2e}, "
                   f"full dev {rep['full_reconstruction_sup_dev']:.3f}"))

    # symmetric-ordering consistency
    coh = fock.pure_to_density(fock.coherent_state(spec, 0.9))
    res = wigner.moyal_average(coh, (2, 1))
    checks.append(("moyal-consistency", res.discrepancy < 1e-6,
                   f"discrepancy {res.discrepancy:.2e}"))

    # separation measure magnitude
    sep = dynamics.separation_measure(1e-2, 1e-3, 300.0)
    checks.append(("separation-measure", 1e39 <= sep <= 1e41, f"{sep:.3e}"))

    # seeded sampling determinism
    h1 = tomo.sample_homodyne(cat, 0.3, 2000, 42)
    h2 = tomo.sample_homodyne(cat, 0.3, 2000, 42)
    checks.append(("seed-determinism", bool(np.array_equal(h1.counts, h2.counts)),
                   "identical histograms"))
    return checks


RUNNERS = {
    "prepare-cat": _run_prepare_cat,
    "decoherence-scan": _run_decoherence_scan,
    "wigner-map": _run_wigner_map,
    "tomography": _run_tomography,
    "direct-map": _run_direct_map,
    "direct-monitor": _run_direct_monitor,
    "pauli-demo": _run_pauli_demo,
}


def run(experiment: str, config: dict, out_dir: str) -> int:
    cfg = resolve_config(experiment, config)
    writer = ArtifactWriter(out_dir, experiment, cfg)
    if experiment == "selfcheck":
        code = _run_selfcheck(cfg, writer)
        writer.finish()
        return code
    RUNNERS[experiment](cfg, writer)
    writer.finish()
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="cavitylab",
        description="Cavity-QED field-state experiments (CSV/JSON artifacts).",
    )
    parser.add_argument("experiment", metavar="experiment",
                        help=f"one of {', '.join(sorted(SCHEMAS))}")
    parser.add_argument("--config", help="JSON config file")
    parser.add_argument("--out", default="artifacts", help="output directory")
    parser.add_argument("--seed", type=int, help="override config seed")
    parser.add_argument("--dim", type=int, help="override truncation dimension")
    args = parser.parse_args(argv)

    try:
        config = {}
        if args.config:
            with open(args.config) as fh:
                config = json.load(fh)
        if not isinstance(config, dict):
            raise ConfigError("config root must be a JSON object")
        if args.seed is not None:
            config["seed"] = args.seed
        if args.dim is not None:
            config["dim"] = args.dim
        return run(args.experiment, config, args.out)
    except (ConfigError, json.JSONDecodeError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except CavityLabError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
