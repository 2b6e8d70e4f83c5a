"""Command-line front end.

    majda-znd <command> [--config FILE] [--out DIR] [--tol REL] [--threads N] [--seed INT] [--plot-script]

Commands: params, profile, det, psi, oracle, verify, sweep, simulate, reproduce.
Environment variables MAJDA_ZND_CONFIG, MAJDA_ZND_OUT, MAJDA_ZND_TOL,
MAJDA_ZND_THREADS and MAJDA_ZND_SEED supply defaults; flags take precedence.

Exit codes: 0 success (and every verdict stable), 1 a verdict or check
failed or output could not be written, 2 usage or configuration error,
3 numerically inconclusive.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import jsonschema
import numpy as np

from . import evans, lopatinski, profile, simulate, stability
from .errors import AdmissibilityError, MajdaZNDError
from .numerics import DEFAULT_RTOL, SWEEP_TOL
from .params import P0, P1, DetonationParams
from .reports import atomic_write, emit_report, gnuplot_script, sha256_file, write_csv, write_json

COMMANDS = ("params", "profile", "det", "psi", "oracle", "verify", "sweep", "simulate", "reproduce")

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3

_NUM = {"type": "number"}
_PAIR = {"type": "array", "items": _NUM, "minItems": 2, "maxItems": 2}
_POS_INT = {"type": "integer", "minimum": 1}

PARAMS_SCHEMA = {
    "type": "object",
    "properties": {n: _NUM for n in ("u_plus", "u_star", "q", "k", "u_i", "s", "u_minus")},
    "required": ["u_plus", "u_star", "q", "k", "u_i"],
    "additionalProperties": False,
}
LAMBDA_GRID_SCHEMA = {
    "oneOf": [
        {
            "type": "object",
            "properties": {
                "kind": {"const": "rectangle"},
                "re": _PAIR,
                "im": _PAIR,
                "n_re": _POS_INT,
                "n_im": _POS_INT,
            },
            "required": ["kind", "re", "im", "n_re", "n_im"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {
                "kind": {"const": "ray"},
                "angle": _NUM,
                "r_min": _NUM,
                "r_max": _NUM,
                "n": _POS_INT,
            },
            "required": ["kind", "angle", "r_max", "n"],
            "additionalProperties": False,
        },
    ]
}


def _obj(props: dict, required=()) -> dict:
    return {"type": "object", "properties": props, "required": list(required), "additionalProperties": False}


SCHEMAS: dict[str, dict] = {
    "params": _obj({"params": PARAMS_SCHEMA}),
    "profile": _obj({"params": PARAMS_SCHEMA, "xi_min": _NUM, "xi_max": _NUM, "n": {"type": "integer", "minimum": 2}}),
    "det": _obj({"params": PARAMS_SCHEMA, "grid": LAMBDA_GRID_SCHEMA}),
    "psi": _obj({"params": PARAMS_SCHEMA, "grid": LAMBDA_GRID_SCHEMA}),
    "oracle": _obj({"params": PARAMS_SCHEMA, "grid": LAMBDA_GRID_SCHEMA, "L": {"type": "number", "exclusiveMinimum": 0}}),
    "verify": _obj(
        {
            "params": PARAMS_SCHEMA,
            "trace": {"type": "boolean"},
            "n0": {"type": "integer", "minimum": 16},
            "max_depth": _POS_INT,
            "indent_r": {"type": "number", "exclusiveMinimum": 0},
        }
    ),
    "sweep": _obj(
        {
            "u_plus": {"type": "array", "items": _NUM},
            "u_star": {"type": "array", "items": _NUM},
            "q_fraction": {"type": "array", "items": _NUM},
            "k": {"type": "array", "items": _NUM},
            "u_i_fraction": _NUM,
        },
        ("u_plus", "u_star", "q_fraction", "k"),
    ),
    "simulate": _obj(
        {
            "params": PARAMS_SCHEMA,
            "grid": _obj({"n_cells": _POS_INT, "x_left": _NUM, "x_right": _NUM}),
            "cfl": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
            "perturbation": {
                "oneOf": [
                    {"type": "null"},
                    _obj({"amplitude": _NUM, "width": {"type": "number", "exclusiveMinimum": 0}, "center": _NUM}),
                ]
            },
            "horizon": {"type": "number", "exclusiveMinimum": 0},
            "record_every": _POS_INT,
            "snapshot_every": {"type": "integer", "minimum": 0},
        }
    ),
    "reproduce": _obj({"bound_chain_draws": {"type": "integer", "minimum": 0}}),
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    body: dict[str, Any]
    out_dir: Path
    tol: float | None = None  # None: each command picks its own default
    threads: int = 1
    seed: int = 0
    plot_script: bool = False
    written: list[Path] = field(default_factory=list)

    @classmethod
    def build(cls, command: str, body: dict | None, out_dir, tol=None, threads=None, seed=None, plot_script=False):
        """Validate ``body`` against the command schema; raises :class:`UsageError`."""
        if command not in COMMANDS:
            raise UsageError(f"unknown command {command!r}")
        body = {} if body is None else body
        if command in ("verify", "params") and isinstance(body, dict) and "u_plus" in body:
            body = {"params": body}  # bare params object
        try:
            jsonschema.validate(body, SCHEMAS[command])
        except jsonschema.ValidationError as exc:
            raise UsageError(f"invalid {command} config: {exc.message}") from None
        if tol is not None and not (0 < tol < 1):
            raise UsageError(f"--tol must lie in (0, 1), got {tol}")
        if threads is not None and threads < 1:
            raise UsageError("--threads must be positive")
        return cls(
            command,
            body,
            Path(out_dir),
            tol,
            1 if threads is None else threads,
            0 if seed is None else seed,
            plot_script,
        )

    def tolerance(self, default: float = DEFAULT_RTOL) -> float:
        return default if self.tol is None else self.tol

    def params(self) -> DetonationParams:
        if "params" not in self.body:
            return P0
        return DetonationParams.from_dict(self.body["params"])


def lambda_grid(spec: dict | None) -> list[complex]:
    if spec is None:
        return evans.rectangle_grid((0.0, 5.0), (-5.0, 5.0), 9, 9)
    if spec["kind"] == "rectangle":
        return evans.rectangle_grid(tuple(spec["re"]), tuple(spec["im"]), spec["n_re"], spec["n_im"])
    radii = np.linspace(spec.get("r_min", 0.0), spec["r_max"], spec["n"])
    return [complex(r * np.exp(1j * spec["angle"])) for r in radii]


# --------------------------------------------------------------------------- commands


def _write_csv(cfg: RunConfig, name: str, header, rows, plot=None) -> Path:
    path = write_csv(cfg.out_dir / name, header, rows)
    cfg.written.append(path)
    if cfg.plot_script and plot is not None:
        x_col, y_cols, title = plot
        script = gnuplot_script(name, x_col, y_cols, [header[c - 1] for c in y_cols], title)
        cfg.written.append(atomic_write(cfg.out_dir / (Path(name).stem + ".gp"), script))
    return path


def _write_json(cfg: RunConfig, name: str, obj) -> Path:
    path = write_json(cfg.out_dir / name, obj)
    cfg.written.append(path)
    return path


def cmd_params(cfg: RunConfig) -> int:
    p = cfg.params()
    _write_json(cfg, "params.json", {**p.to_dict(), "q_max": p.q_max})
    return EXIT_OK


def cmd_profile(cfg: RunConfig) -> int:
    p = cfg.params()
    xs = np.linspace(cfg.body.get("xi_min", -10.0 * p.reaction_length), cfg.body.get("xi_max", 2.0 * p.reaction_length), cfg.body.get("n", 201))
    rows = []
    for x in xs:
        pt = profile.profile_at(p, float(x))
        rows.append((pt.xi, pt.u_bar, pt.z_bar))
    _write_csv(cfg, "profile.csv", ("xi", "u_bar", "z_bar"), rows, (1, (2, 3), "ZND profile"))
    return EXIT_OK


def cmd_det(cfg: RunConfig) -> int:
    p = cfg.params()
    rows = []
    for lam in lambda_grid(cfg.body.get("grid")):
        d = lopatinski.det_closed_form(p, lam, cfg.tolerance())
        rows.append((lam.real, lam.imag, d.real, d.imag, abs(d)))
    _write_csv(cfg, "det.csv", ("lambda_re", "lambda_im", "D_re", "D_im", "abs_D"), rows)
    return EXIT_OK


def cmd_psi(cfg: RunConfig) -> int:
    p = cfg.params()
    rows = []
    for lam in lambda_grid(cfg.body.get("grid")):
        v, err = lopatinski.psi(p, lam, cfg.tolerance())
        rows.append((lam.real, lam.imag, v.real, v.imag, abs(v), err))
    _write_csv(cfg, "psi.csv", ("lambda_re", "lambda_im", "psi_re", "psi_im", "abs_psi", "error_estimate"), rows)
    return EXIT_OK


def cmd_oracle(cfg: RunConfig) -> int:
    p = cfg.params()
    table = evans.compare_methods(p, lambda_grid(cfg.body.get("grid")), cfg.body.get("L"), cfg.tolerance())
    rows = []
    for r in table.rows:
        dc = r.d_closed if r.d_closed is not None else complex(math.nan, math.nan)
        do = r.d_ode if r.d_ode is not None else complex(math.nan, math.nan)
        rows.append((r.lam.real, r.lam.imag, dc.real, dc.imag, do.real, do.imag, r.error))
    _write_csv(cfg, "oracle.csv", ("lambda_re", "lambda_im", "D_closed_re", "D_closed_im", "D_ode_re", "D_ode_im", "rel_err"), rows)
    return EXIT_INCONCLUSIVE if table.failures else EXIT_OK


def _verdict_exit(verdicts) -> int:
    verdicts = list(verdicts)
    if all(v is stability.Verdict.STABLE for v in verdicts):
        return EXIT_OK
    if any(v is stability.Verdict.VIOLATED for v in verdicts):
        return EXIT_FAILED
    return EXIT_INCONCLUSIVE


def cmd_verify(cfg: RunConfig) -> int:
    p = cfg.params()
    defaults = stability.Tolerances()
    tol = stability.Tolerances(
        quad_rel_tol=cfg.tolerance(),
        n0=cfg.body.get("n0", defaults.n0),
        max_depth=cfg.body.get("max_depth", defaults.max_depth),
    )
    trace = cfg.body.get("trace", False)
    report = stability.verify_condition_D(p, tol, cfg.body.get("indent_r"), keep_trace=trace)
    path = emit_report(report, cfg.out_dir / "report.json")
    cfg.written.append(path)
    if trace:
        rows = [(lam.real, lam.imag, d.real, d.imag, cum) for _, lam, d, cum in report.trace]
        _write_csv(cfg, "contour_trace.csv", ("lambda_re", "lambda_im", "D_re", "D_im", "cum_arg"), rows)
    return _verdict_exit([report.verdict])


SWEEP_HEADER = (
    "u_plus", "u_star", "q_fraction", "k", "q", "u_i", "verdict", "winding_open_half_plane",
    "winding_small_circle", "radius_R", "indent_r", "psi_max", "coeff_floor", "min_abs_D", "error",
)


def _sweep_rows(rows):
    out = []
    for r in rows:
        rep = r.report
        if rep is None:
            out.append((r.u_plus, r.u_star, r.q_fraction, r.k, None, None, "Error", None, None, None, None, None, None, None, r.error))
        else:
            out.append(
                (
                    r.u_plus, r.u_star, r.q_fraction, r.k, rep.params.q, rep.params.u_i, rep.verdict.value,
                    rep.winding_open_half_plane, rep.winding_small_circle, rep.radius_R, rep.indent_r,
                    rep.psi_max, rep.coeff_floor, rep.min_abs_D, "; ".join(rep.diagnostics) or None,
                )
            )
    return out


def cmd_sweep(cfg: RunConfig) -> int:
    spec = stability.SweepSpec.from_dict(cfg.body)
    tol = stability.Tolerances(quad_rel_tol=cfg.tolerance(SWEEP_TOL))
    rows = stability.parameter_sweep(spec, tol, cfg.threads)
    _write_csv(cfg, "sweep.csv", SWEEP_HEADER, [tuple("" if v is None else v for v in row) for row in _sweep_rows(rows)])
    if any(r.report is None for r in rows):
        return EXIT_FAILED
    return _verdict_exit(r.report.verdict for r in rows)


def _sim_setup(cfg: RunConfig):
    body = cfg.body
    g = body.get("grid", {})
    grid = simulate.GridSpec(g.get("n_cells", 2000), g.get("x_left", -20.0), g.get("x_right", 5.0))
    pert = body.get("perturbation", {})
    perturbation = None if pert is None else simulate.Perturbation(**pert)
    return grid, perturbation


def cmd_simulate(cfg: RunConfig) -> int:
    p = cfg.params()
    grid, perturbation = _sim_setup(cfg)
    samples, snaps, max_res = simulate.run_experiment(
        p,
        grid,
        perturbation,
        cfg.body.get("horizon", 30.0 / p.s),
        cfg.body.get("cfl", 0.4),
        cfg.body.get("record_every", 100),
        cfg.body.get("snapshot_every", 1000),
    )
    _write_csv(
        cfg,
        "metrics.csv",
        ("t", "distance_to_orbit", "shift", "mass_balance_residual"),
        [(s.t, s.distance, s.shift, s.mass_residual) for s in samples],
        (1, (2,), "distance to the profile orbit"),
    )
    snap_rows = []
    for t, xi, u, z in snaps:
        snap_rows.extend((t, float(a), float(b), float(c)) for a, b, c in zip(xi, u, z))
    _write_csv(cfg, "snapshots.csv", ("t", "xi", "u", "z"), snap_rows)
    return EXIT_OK


# --------------------------------------------------------------------------- reproduce


REPRODUCE_SWEEP = {"u_plus": [0.0, 0.2, 0.5], "u_star": [2.0], "q_fraction": [0.1, 0.5, 0.9], "k": [0.1, 1.0, 10.0]}


def cmd_reproduce(cfg: RunConfig) -> int:
    """Profile check, oracle grid, verification of P0/P1, 27-point sweep, decay run."""
    checks: dict[str, dict] = {}
    exit_code = EXIT_OK

    def record(name: str, passed: bool, **values):
        nonlocal exit_code
        checks[name] = {"passed": bool(passed), **values}
        if not passed:
            exit_code = max(exit_code, EXIT_FAILED)

    for label, p in (("P0", P0), ("P1", P1)):
        pts = profile.integrate_profile_oracle(p, 30.0, 1e-10)
        err = max(abs(pt.u_bar - profile.profile_at(p, pt.xi).u_bar) if pt.xi < 0 else abs(pt.u_bar - p.u_star) for pt in pts)
        zerr = max(abs(pt.z_bar - (profile.profile_at(p, pt.xi).z_bar if pt.xi < 0 else 1.0)) for pt in pts)
        record(f"profile_{label}", max(err, zerr) <= 1e-8 and profile.rh_residual(p) <= 1e-12,
               max_abs_error_u=err, max_abs_error_z=zerr, rh_residual=profile.rh_residual(p))
        rows = [(pt.xi, pt.u_bar, pt.z_bar) for pt in pts]
        _write_csv(cfg, f"profile_oracle_{label}.csv", ("xi", "u_bar", "z_bar"), rows)

        table = evans.compare_methods(p, evans.rectangle_grid((0.0, 5.0), (-5.0, 5.0), 9, 9), 40.0, cfg.tolerance())
        record(f"oracle_{label}", not table.failures and table.max_relative <= 1e-4 and table.max_absolute <= 1e-8,
               max_relative=table.max_relative, median_relative=table.median_relative, max_absolute_at_zero=table.max_absolute)
        _write_csv(
            cfg, f"oracle_{label}.csv",
            ("lambda_re", "lambda_im", "D_closed_re", "D_closed_im", "D_ode_re", "D_ode_im", "rel_err"),
            [(r.lam.real, r.lam.imag, r.d_closed.real, r.d_closed.imag, r.d_ode.real, r.d_ode.imag, r.error)
             for r in table.rows if r.failure is None],
        )

        report = stability.verify_condition_D(p, stability.Tolerances(quad_rel_tol=cfg.tolerance()))
        path = emit_report(report, cfg.out_dir / f"report_{label}.json")
        cfg.written.append(path)
        record(f"verify_{label}", report.verdict is stability.Verdict.STABLE,
               winding=[report.winding_open_half_plane, report.winding_small_circle], verdict=report.verdict.value)

    rows = stability.parameter_sweep(stability.SweepSpec.from_dict(REPRODUCE_SWEEP), stability.Tolerances(quad_rel_tol=cfg.tolerance(SWEEP_TOL)), cfg.threads)
    _write_csv(cfg, "sweep.csv", SWEEP_HEADER, [tuple("" if v is None else v for v in row) for row in _sweep_rows(rows)])
    n_stable = sum(1 for r in rows if r.report is not None and r.report.verdict is stability.Verdict.STABLE)
    record("sweep_27", n_stable == len(rows), stable=n_stable, total=len(rows))

    draws = cfg.body.get("bound_chain_draws", 100)
    if draws:
        bc = stability.bound_chain_check(np.random.default_rng(cfg.seed), draws=draws, rel_tol=cfg.tolerance())
        record("bound_chain", bc.passed, draws=bc.draws, evaluations=bc.evaluations,
               max_psi_excess=bc.max_psi_excess, min_re_coefficient=bc.min_re_coefficient, seed=cfg.seed)

    grid = simulate.GridSpec(2000, -20.0, 5.0)
    pert, _, res_pert = simulate.run_experiment(P0, grid, simulate.Perturbation(0.05, 1.0, -3.0), 30.0, record_every=250)
    ctrl, _, res_ctrl = simulate.run_experiment(P0, grid, None, 30.0, record_every=250)
    d0, dT, drift = pert[0].distance, pert[-1].distance, max(s.distance for s in ctrl)
    record("simulate_decay", dT <= 0.5 * d0 and drift < 0.2 * d0,
           initial_distance=d0, final_distance=dT, control_drift=drift, max_step_mass_residual=max(res_pert, res_ctrl))
    _write_csv(cfg, "simulate_metrics.csv", ("t", "distance_perturbed", "distance_control"),
               [(a.t, a.distance, b.distance) for a, b in zip(pert, ctrl)])

    manifest = {
        "checks": checks,
        "files": {p.name: sha256_file(p) for p in sorted(cfg.written, key=lambda x: x.name)},
        "tol": cfg.tolerance(),
        "seed": cfg.seed,
        "all_passed": exit_code == EXIT_OK,
    }
    _write_json(cfg, "manifest.json", manifest)
    return exit_code


HANDLERS = {
    "params": cmd_params,
    "profile": cmd_profile,
    "det": cmd_det,
    "psi": cmd_psi,
    "oracle": cmd_oracle,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "simulate": cmd_simulate,
    "reproduce": cmd_reproduce,
}


def run(config: RunConfig) -> int:
    """Execute one command; errors become exit codes with a message on stderr."""
    try:
        config.out_dir.mkdir(parents=True, exist_ok=True)
        return HANDLERS[config.command](config)
    except AdmissibilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (MajdaZNDError, ArithmeticError) as exc:
        print(f"inconclusive: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_FAILED


def _env(name: str, conv):
    raw = os.environ.get(f"MAJDA_ZND_{name}")
    if raw is None or raw == "":
        return None
    try:
        return conv(raw)
    except ValueError:
        raise UsageError(f"bad value for MAJDA_ZND_{name}: {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="majda-znd", description="ZND stability of Majda's model: profiles, Lopatinski determinant, condition (D).")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", help="JSON config file for the command")
    ap.add_argument("--out", help="output directory (default: current directory)")
    ap.add_argument("--tol", type=float, help="relative tolerance for quadrature and ODE solves")
    ap.add_argument("--threads", type=int, help="worker processes for sweeps")
    ap.add_argument("--seed", type=int, help="seed for randomised checks")
    ap.add_argument("--plot-script", action="store_true", help="also write gnuplot scripts next to CSV files")
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        config_path = args.config or _env("CONFIG", str)
        body = None
        if config_path:
            try:
                body = json.loads(Path(config_path).read_text())
            except (OSError, json.JSONDecodeError) as exc:
                raise UsageError(f"cannot read config {config_path}: {exc}") from None
        tol = args.tol if args.tol is not None else _env("TOL", float)
        threads = args.threads if args.threads is not None else _env("THREADS", int)
        seed = args.seed if args.seed is not None else _env("SEED", int)
        out = args.out or _env("OUT", str) or "."
        cfg = RunConfig.build(args.command, body, out, tol, threads, seed, args.plot_script)
        if cfg.command != "sweep" and cfg.command != "reproduce":
            cfg.params()  # admissibility is part of validation
    except (UsageError, AdmissibilityError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
