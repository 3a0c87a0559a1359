"""Command-line interface: config ingestion, scenario execution, and
analysis-ready CSV/manifest emission.

Subcommands: `twin` (one scenario), `sweep` (parameter grid), `qfi`
(initial-state Fisher information), `bogo` (dump the trajectory's Bogoliubov
map), `check` (invariant self-tests).  Configuration is a single JSON
document (schema 1, SI units at this boundary); see README for the full
schema and the fixed CSV column order.

Exit codes: 0 success, 2 config parse error, 3 validation error,
4 numerical gate failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import logging
import math
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .clock import (ScenarioConfig, ScenarioResult, run_twin, sweep)
from .constants import C
from .errors import (CavityClockError, QuadratureError, TruncationError,
                     UnboundedVarianceError, ValidationError)
from .gauss import extract_params
from .metrology import cramer_rao, phase_qfi
from .modes import (BogoliubovMap, dump_map, free_phase_map, junction_map,
                    symplectic_residual, trajectory_map, ModeBasis, BasisKind)
from .trajectory import build_twin_trajectory

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_NUMERICAL = 4

CSV_COLUMNS = [
    "h", "L_m", "a_mps2", "t_a_s", "t_i_s", "reps",
    "tau_alice_s", "tau_rob_point_s", "tau_rob_classical_s",
    "theta_full_rad", "theta_mm_rad", "phase_diff_rad", "pc_fraction_pct",
    "qfi_before", "qfi_after", "qfi_after_mm", "qfi_change_pct",
    "config_digest",
]


class ConfigError(ValidationError):
    """Config document is well-formed JSON but fails schema validation."""


@dataclass(frozen=True)
class LoadedConfig:
    scenario: ScenarioConfig
    digest: str
    document: dict
    sweep_spec: dict | None
    prefix: str


def config_digest(document: dict) -> str:
    """sha256 of the canonical (key-sorted, compact) JSON encoding; stable
    under key reordering of the source document."""
    canonical = json.dumps(document, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def _require(mapping: dict, key: str, kinds, where: str):
    if key not in mapping:
        raise ConfigError(f"missing {where}.{key}")
    value = mapping[key]
    if not isinstance(value, kinds) or isinstance(value, bool):
        raise ConfigError(f"{where}.{key} has wrong type: {value!r}")
    return value


def load_config(path: str | Path) -> LoadedConfig:
    with open(path, encoding="utf-8") as fh:
        document = json.load(fh)
    if not isinstance(document, dict):
        raise ConfigError("config document must be a JSON object")
    if document.get("schema") != 1:
        raise ConfigError(f"unsupported schema {document.get('schema')!r}")
    if document.get("units", "SI") != "SI":
        raise ConfigError("only SI units are supported at the config boundary")

    sc = _require(document, "scenario", dict, "config")
    state = sc.get("state", {})
    if not isinstance(state, dict):
        raise ConfigError("scenario.state must be an object")
    numerics = document.get("numerics", {})
    if not isinstance(numerics, dict):
        raise ConfigError("numerics must be an object")

    t_i = float(_require(sc, "t_i_s", (int, float), "scenario"))
    L = float(_require(sc, "L_m", (int, float), "scenario"))
    a = float(_require(sc, "a_mps2", (int, float), "scenario"))
    reps = _require(sc, "repetitions", int, "scenario")
    clock_mode = sc.get("clock_mode", 1)
    n_max = numerics.get("n_max", 24)
    if not isinstance(clock_mode, int) or not isinstance(n_max, int):
        raise ConfigError("clock_mode and n_max must be integers")

    if ("t_a_s" in sc) == ("theta_a_rad" in sc):
        raise ConfigError("scenario needs exactly one of t_a_s or theta_a_rad")
    if "t_a_s" in sc:
        t_a = float(_require(sc, "t_a_s", (int, float), "scenario"))
    else:
        # theta_a = Omega_k * eta(t_a)  =>  t_a = theta_a u_max c / (k pi |a|)
        theta_a = float(_require(sc, "theta_a_rad", (int, float), "scenario"))
        if a == 0:
            raise ConfigError("theta_a_rad needs a nonzero acceleration")
        h = abs(a) * L / C**2
        if h >= 2:
            raise ConfigError(f"h = {h:.6g} >= 2")
        u_max = 2.0 * math.atanh(h / 2.0)
        t_a = theta_a * u_max * C / (clock_mode * math.pi * abs(a))

    kind = state.get("kind", "coherent")
    mean_n = float(state.get("mean_n", 1.0))
    theta0 = float(state.get("theta0_rad", 0.0))

    gate = numerics.get("residual_gate", 1e-4)
    tol = numerics.get("quadrature_tol", 1e-12)

    try:
        scenario = ScenarioConfig(
            t_a=t_a, t_i=t_i, L=L, a=a, repetitions=reps,
            clock_mode=clock_mode, n_max=n_max, state_kind=kind,
            mean_n=mean_n, theta0=theta0,
            residual_gate=None if gate is None else float(gate),
            quadrature_tol=float(tol))
    except ValidationError as exc:
        raise ConfigError(str(exc)) from exc

    sweep_spec = document.get("sweep")
    if sweep_spec is not None:
        if not isinstance(sweep_spec, dict):
            raise ConfigError("sweep must be an object")
        _require(sweep_spec, "vary", str, "sweep")
        grid = _require(sweep_spec, "grid", list, "sweep")
        if not all(isinstance(v, (int, float)) and not isinstance(v, bool)
                   for v in grid):
            raise ConfigError("sweep.grid must be a list of numbers")

    output = document.get("output", {})
    prefix = output.get("prefix", "run") if isinstance(output, dict) else "run"
    return LoadedConfig(scenario, config_digest(document), document,
                        sweep_spec, str(prefix))


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _result_row(res: ScenarioResult, digest: str) -> list[str]:
    c = res.config
    values = [res.h, c.L, c.a, c.t_a, c.t_i, c.repetitions,
              res.tau_alice, res.tau_rob_pointlike,
              res.tau_rob_classical_extended,
              res.theta_full, res.theta_mm_only,
              res.phase_difference_vs_alice, res.pc_fraction,
              res.qfi_before, res.qfi_after, res.qfi_after_mm_only,
              res.qfi_change_pct_full, digest]
    return [_fmt(v) for v in values]


def write_results_csv(path: Path, results: list[ScenarioResult],
                      digest: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for res in results:
            writer.writerow(_result_row(res, digest))


def write_manifest(path: Path, command: str, loaded: LoadedConfig,
                   results: list[ScenarioResult], warnings: list[str],
                   errors: list[str]) -> None:
    eps1 = max((r.residual[0] for r in results), default=0.0)
    eps2 = max((r.residual[1] for r in results), default=0.0)
    manifest = {
        "schema": 1,
        "command": command,
        "config_digest": loaded.digest,
        "tool_version": __version__,
        "generated_at": datetime.now(timezone.utc).isoformat(),
        "n_max": loaded.scenario.n_max,
        "residual_eps1": eps1,
        "residual_eps2": eps2,
        "rows": len(results),
        "warnings": warnings,
        "errors": errors,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


class _WarningCollector(logging.Handler):
    def __init__(self):
        super().__init__(level=logging.WARNING)
        self.messages: list[str] = []

    def emit(self, record):
        self.messages.append(record.getMessage())


def _cmd_twin(args, loaded: LoadedConfig) -> int:
    collector = _WarningCollector()
    logging.getLogger("cavityclock").addHandler(collector)
    try:
        result = run_twin(loaded.scenario)
    finally:
        logging.getLogger("cavityclock").removeHandler(collector)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_results_csv(out / f"{loaded.prefix}_results.csv", [result],
                      loaded.digest)
    write_manifest(out / f"{loaded.prefix}_manifest.json", "twin", loaded,
                   [result], collector.messages, [])
    print(f"twin: wrote 1 row to {out / (loaded.prefix + '_results.csv')} "
          f"(phase_diff={result.phase_difference_vs_alice!r} rad, "
          f"qfi_change={result.qfi_change_pct_full!r} %)")
    return EXIT_OK


def _cmd_sweep(args, loaded: LoadedConfig) -> int:
    if loaded.sweep_spec is None:
        raise ConfigError("sweep subcommand needs a sweep section in the config")
    collector = _WarningCollector()
    logging.getLogger("cavityclock").addHandler(collector)
    try:
        points = sweep(loaded.scenario, loaded.sweep_spec["vary"],
                       loaded.sweep_spec["grid"], threads=args.threads)
    finally:
        logging.getLogger("cavityclock").removeHandler(collector)
    results = [p.result for p in points if p.result is not None]
    errors = [f"{loaded.sweep_spec['vary']}={p.value!r}: {p.error}"
              for p in points if p.error is not None]
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_results_csv(out / f"{loaded.prefix}_results.csv", results,
                      loaded.digest)
    write_manifest(out / f"{loaded.prefix}_manifest.json", "sweep", loaded,
                   results, collector.messages, errors)
    for line in errors:
        print(f"sweep point failed: {line}", file=sys.stderr)
    print(f"sweep: wrote {len(results)} rows to "
          f"{out / (loaded.prefix + '_results.csv')}")
    return EXIT_OK


def _cmd_qfi(args, loaded: LoadedConfig) -> int:
    params = extract_params(loaded.scenario.initial_state())
    value = phase_qfi(params)
    print(f"qfi={value!r}")
    if args.measurements is not None:
        print(f"bound={cramer_rao(value, args.measurements)!r}")
    return EXIT_OK


def _cmd_bogo(args, loaded: LoadedConfig) -> int:
    c = loaded.scenario
    traj = build_twin_trajectory(c.t_a, c.t_i, c.repetitions, c.a)
    bmap = trajectory_map(traj, c.L, c.n_max, tol=c.quadrature_tol)
    interior = min(c.clock_mode + 4, c.n_max)
    eps1, eps2 = symplectic_residual(bmap, interior)
    if c.residual_gate is not None and eps1 > c.residual_gate:
        raise TruncationError(
            f"symplectic residual {eps1:.3e} exceeds gate {c.residual_gate:.3e}")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{loaded.prefix}_bogomap.txt"
    with open(path, "w", encoding="utf-8") as fh:
        dump_map(bmap, fh, meta={
            "h": c.h, "config_digest": loaded.digest,
            "eps1": eps1, "eps2": eps2,
        })
    print(f"bogo: wrote {path} (eps1={eps1!r}, eps2={eps2!r})")
    return EXIT_OK


def _cmd_check(args, loaded: LoadedConfig | None) -> int:
    if loaded is not None:
        h = loaded.scenario.h or 0.01
        n_max = loaded.scenario.n_max
        gate = loaded.scenario.residual_gate or 1e-4
    else:
        h, n_max, gate = 0.01, 20, 1e-4
    interior = min(5, n_max)
    failures = 0

    def report(name: str, eps1: float, eps2: float, limit: float):
        nonlocal failures
        ok = eps1 <= limit and eps2 <= limit
        failures += 0 if ok else 1
        print(f"{'PASS' if ok else 'FAIL'} {name}: eps1={eps1:.3e} "
              f"eps2={eps2:.3e} (limit {limit:.1e})")

    ident = BogoliubovMap.identity(n_max)
    report("identity map", *symplectic_residual(ident, interior), 0.0)

    basis = ModeBasis(BasisKind.MINKOWSKI, 0.0, 1.0, n_max)
    free = free_phase_map(basis, 0.37)
    report("free phase map", *symplectic_residual(free, interior), 1e-15)

    junction = junction_map(h, n_max)
    report(f"junction map (h={h:g})",
           *symplectic_residual(junction, interior), gate)

    roundtrip = junction.inverse().compose(junction)
    block = np.s_[:interior, :interior]
    dev = float(np.max(np.abs(roundtrip.alpha[block] - np.eye(interior)))
                + np.max(np.abs(roundtrip.beta[block])))
    ok = dev <= max(10 * gate, 1e-8)
    failures += 0 if ok else 1
    print(f"{'PASS' if ok else 'FAIL'} junction inverse roundtrip "
          f"({interior}x{interior} interior): deviation={dev:.3e}")

    return EXIT_OK if failures == 0 else EXIT_NUMERICAL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cavityclock",
        description="Relativistic cavity-clock simulations")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config_required=True):
        p.add_argument("--config", required=config_required,
                       help="path to the JSON config document")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--threads", type=int, default=0,
                       help="worker threads for sweeps (0 = auto)")
        p.add_argument("--seed", type=int, default=None,
                       help="reserved; the pipeline is deterministic")

    common(sub.add_parser("twin", help="run one twin-paradox scenario"))
    common(sub.add_parser("sweep", help="run a parameter sweep"))
    qfi = sub.add_parser("qfi", help="QFI of the configured initial state")
    common(qfi)
    qfi.add_argument("--measurements", type=int, default=None,
                     help="also print the Cramér-Rao bound for M measurements")
    common(sub.add_parser("bogo", help="dump the trajectory Bogoliubov map"))
    common(sub.add_parser("check", help="run invariant self-tests"),
           config_required=False)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        loaded = load_config(args.config) if args.config else None
    except json.JSONDecodeError as exc:
        print(f"config parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"config read error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValidationError as exc:
        print(f"config validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION

    try:
        if args.command == "check":
            return _cmd_check(args, loaded)
        if loaded is None:
            print("this subcommand needs --config", file=sys.stderr)
            return EXIT_VALIDATION
        if args.command == "twin":
            return _cmd_twin(args, loaded)
        if args.command == "sweep":
            return _cmd_sweep(args, loaded)
        if args.command == "qfi":
            return _cmd_qfi(args, loaded)
        if args.command == "bogo":
            return _cmd_bogo(args, loaded)
        raise AssertionError(f"unhandled command {args.command}")
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (TruncationError, QuadratureError, UnboundedVarianceError) as exc:
        print(f"numerical gate failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except CavityClockError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def run(config_path: str | Path, out: str | Path = ".",
        threads: int = 0) -> int:
    """Programmatic equivalent of `cavityclock twin --config ...`
    (or `sweep` when the config carries a sweep section)."""
    try:
        loaded = load_config(config_path)
    except (json.JSONDecodeError, OSError):
        return EXIT_PARSE
    except ValidationError:
        return EXIT_VALIDATION
    command = "sweep" if loaded.sweep_spec is not None else "twin"
    return main([command, "--config", str(config_path), "--out", str(out),
                 "--threads", str(threads)])


if __name__ == "__main__":
    sys.exit(main())
