"""Command-line interface: the full pipeline behind eight subcommands.

``count``      parameter-count triple for a fragment layout
``las``        fragment-product reference state and energy
``casci``      exact diagonalization in the full active space
``screen``     gradient screening of the generator pool (CSV)
``run``        one selected-subset variational optimization (report)
``sweep``      threshold ladder, one optimization per rung (CSV)
``resources``  gate-count table for the ladder selections
``jcoupling``  magnetic coupling constant from two run reports

Exit codes: 0 success, 1 validation/input error, 2 numerical
non-convergence (a partial report is still written).  ``--out`` chooses the
machine report; paths ending in ``.csv`` get the CSV form where a
subcommand defines one, everything else gets JSON.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, vqe
from .ansatz import (
    count_parameters,
    enumerate_pool,
    gradient_histogram,
    screen_gradients,
    select,
)
from .constants import HARTREE_TO_KCAL_MOL
from .fcidump import JobConfig, JobValidationError, read_job
from .fock import s_squared_expectation, Sector, CIVector
from .las import LasConvergenceError, assemble_statevector, las_qubit_space, lasci
from .qubit import MappedHamiltonian, QubitSpace
from .resources import estimate, percent_cnot
from .workflow import SystemData, casci_reference, prepare_system


class _UsageError(Exception):
    """Raised by the parser instead of exiting, so main controls the code."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: A003 - argparse API
        raise _UsageError(f"{message}\n{self.format_usage()}")


class _StageError(Exception):
    """A named pipeline stage failed on a named input."""

    def __init__(self, stage: str, path, message: str, exit_code: int = 1, report=None):
        super().__init__(f"[{stage}] {path}: {message}")
        self.stage = stage
        self.exit_code = exit_code
        self.report = report


def _build_parser() -> _Parser:
    parser = _Parser(prog="lasuscc", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"lasuscc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, *, job=True, out=True):
        p = sub.add_parser(name, help=help_text)
        if job:
            p.add_argument("--job", required=True, help="JSON job file")
        if out:
            p.add_argument("--out", help="machine report path (.csv where defined, else JSON)")
        p.add_argument("--threads", type=int, default=None,
                       help="worker threads (default: LAS_USCC_THREADS or 1)")
        p.add_argument("--seed", type=int, default=None,
                       help="reserved; no stochastic components yet")
        return p

    add("count", "print the (singles, doubles, total) parameter triple")
    add("las", "solve the fragment product reference state")
    add("casci", "exact diagonalization in the full active space")
    p = add("screen", "screen the generator pool; CSV of |gradient| per generator")
    p.add_argument("--epsilon", type=float, default=None,
                   help="threshold for the selected flag (default: smallest nonzero ladder rung)")
    p = add("run", "optimize one selected subset")
    p.add_argument("--epsilon", type=float, default=None, help="selection threshold")
    p.add_argument("--top-n", type=int, default=None, help="select the N largest gradients instead")
    p = add("sweep", "optimize every rung of the threshold ladder")
    p.add_argument("--cold", action="store_true", help="disable warm starts between rungs")
    p = add("resources", "gate-count table for the ladder selections")
    p.add_argument("--counts-only", action="store_true",
                   help="full-pool row only; skips integrals and screening")
    p = add("jcoupling", "coupling constant from two run reports", job=False)
    p.add_argument("reports", nargs=2, help="two run report JSON files")
    p.add_argument("--s2-high", type=float, default=None,
                   help="override <S^2> of the high-spin state (pure-spin value)")
    p.add_argument("--s2-low", type=float, default=None,
                   help="override <S^2> of the low-spin state (pure-spin value)")
    return parser


def _resolve_threads(args) -> int:
    if getattr(args, "threads", None) is not None:
        value = args.threads
    else:
        raw = os.environ.get("LAS_USCC_THREADS", "1")
        try:
            value = int(raw)
        except ValueError as exc:
            raise _StageError("validation", "LAS_USCC_THREADS", f"not an integer: {raw!r}") from exc
    if value < 1:
        raise _StageError("validation", "--threads", f"must be >= 1, got {value}")
    return value


def _read_job(path: str) -> JobConfig:
    try:
        return read_job(path)
    except FileNotFoundError as exc:
        raise _StageError("validation", path, "job file not found") from exc
    except JobValidationError as exc:
        raise _StageError("validation", path, str(exc)) from exc


def _prepare(config: JobConfig, job_path: str) -> SystemData:
    try:
        return prepare_system(config)
    except FileNotFoundError as exc:
        raise _StageError("integrals", job_path, str(exc)) from exc
    except (ValueError, RuntimeError) as exc:
        raise _StageError("integrals", job_path, str(exc)) from exc


def _json_default(obj):
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"not serializable: {type(obj)!r}")


def _new_report(command: str, job_path: str | None) -> dict:
    report = {
        "schema_version": 1,
        "tool": {"name": "lasuscc", "version": __version__},
        "command": command,
        "stages": {},
        "timing": {},
    }
    if job_path is not None:
        report["job"] = {"path": str(job_path)}
        try:
            report["job"]["config"] = json.loads(Path(job_path).read_text())
        except (OSError, json.JSONDecodeError):  # pragma: no cover - validated earlier
            pass
    return report


def _write_report(report: dict, out, default_from_job: str | None = None) -> None:
    target = out or default_from_job
    if target is None:
        return
    Path(target).write_text(
        json.dumps(report, indent=2, sort_keys=True, default=_json_default) + "\n"
    )


def _timed(report: dict, stage: str, fn):
    t0 = time.perf_counter()
    value = fn()
    report["timing"][f"{stage}_s"] = round(time.perf_counter() - t0, 6)
    return value


def _las_stage(report: dict, system: SystemData, job_path: str):
    try:
        las = _timed(report, "las", lambda: lasci(system.ints, system.layout))
    except LasConvergenceError as exc:
        report["stages"]["las"] = {
            "converged": False,
            "iterations": len(exc.trace),
            "trace": [float(x) for x in exc.trace],
        }
        raise _StageError("las", job_path, str(exc), exit_code=2, report=report) from exc
    report["stages"]["las"] = {
        "converged": las.converged,
        "energy": las.energy,
        "iterations": las.iterations,
        "fragment_energies": [float(x) for x in las.fragment_energies],
        "trace": [float(x) for x in las.trace],
    }
    return las

def _reference_stage(report: dict, system: SystemData, config: JobConfig):
    if config.reference.method != "casci":
        return None
    ref = _timed(
        report,
        "reference",
        lambda: casci_reference(system, dense_threshold=config.reference.dense_threshold),
    )
    report["stages"]["reference"] = {
        "method": "casci",
        "energy": ref.energy,
        "s_squared": s_squared_expectation(ref.ci),
    }
    return ref


def _screen_stage(report: dict, system: SystemData, las, threads: int):
    pool = enumerate_pool(system.layout)
    psi0 = assemble_statevector(las)
    _timed(report, "screen", lambda: screen_gradients(pool, psi0, system.ints, threads=threads))
    magnitudes = sorted((abs(g.gradient_at_zero) for g in pool.generators), reverse=True)
    histogram = gradient_histogram(pool)
    report["stages"]["screen"] = {
        "n_pool": len(pool.generators),
        "max_abs_gradient": magnitudes[0] if magnitudes else 0.0,
        "histogram": {label: count for label, count in histogram},
    }
    return pool, psi0


def _s_squared_of_state(data: np.ndarray, space: QubitSpace, layout) -> float:
    sector = Sector(layout.n_orb, layout.n_alpha, layout.n_beta)
    coeffs = space.gather(data, sector)
    weight = float(np.real(np.vdot(coeffs, coeffs)))
    if weight < 1e-12:
        raise ValueError("state has no weight in the nominal particle-number sector")
    return s_squared_expectation(CIVector(sector, coeffs / np.sqrt(weight)))


def _vqe_summary(result: vqe.VqeResult, include_amplitudes: bool = True) -> dict:
    summary = {
        "energy": result.energy,
        "iterations": result.iterations,
        "converged": result.converged,
        "gradient_norm": result.gradient_norm,
        "trace": [float(x) for x in result.trace],
    }
    if include_amplitudes:
        summary["amplitudes"] = [float(x) for x in result.amplitudes]
    return summary


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_count(args) -> int:
    config = _read_job(args.job)
    singles, doubles, total = count_parameters(config.layout)
    print(f"singles {singles}, doubles {doubles}, total {total}")
    report = _new_report("count", args.job)
    report["stages"]["count"] = {"singles": singles, "doubles": doubles, "total": total}
    _write_report(report, args.out)
    return 0


def _cmd_las(args) -> int:
    config = _read_job(args.job)
    system = _prepare(config, args.job)
    report = _new_report("las", args.job)
    las = _las_stage(report, system, args.job)
    print(f"LAS energy {las.energy:.10f}  ({las.iterations} iterations)")
    for k, e in enumerate(las.fragment_energies):
        print(f"  fragment {k}: {e:.10f}")
    _write_report(report, args.out, config.report_path)
    return 0


def _cmd_casci(args) -> int:
    config = _read_job(args.job)
    system = _prepare(config, args.job)
    report = _new_report("casci", args.job)
    try:
        ref = _timed(report, "reference", lambda: casci_reference(
            system, dense_threshold=config.reference.dense_threshold))
    except (ValueError, RuntimeError) as exc:
        raise _StageError("reference", args.job, str(exc)) from exc
    s2 = s_squared_expectation(ref.ci)
    report["stages"]["reference"] = {"method": "casci", "energy": ref.energy, "s_squared": s2}
    print(f"CASCI energy {ref.energy:.10f}  <S^2> {s2:.6f}")
    _write_report(report, args.out, config.report_path)
    return 0


def _screen_csv(pool, epsilon: float) -> str:
    selected = {id(g) for g in select(pool, epsilon)}
    rows = sorted(pool.generators, key=lambda g: (-abs(g.gradient_at_zero), g.indices))
    lines = ["label,kind,abs_gradient,selected"]
    for g in rows:
        lines.append(
            f"\"{g.label}\",{g.kind},{abs(g.gradient_at_zero):.12e},"
            f"{int(id(g) in selected)}"
        )
    return "\n".join(lines) + "\n"


def _default_epsilon(config: JobConfig) -> float:
    positive = [e for e in config.epsilon_ladder if e > 0]
    return min(positive) if positive else 0.0


def _cmd_screen(args) -> int:
    config = _read_job(args.job)
    system = _prepare(config, args.job)
    report = _new_report("screen", args.job)
    las = _las_stage(report, system, args.job)
    threads = _resolve_threads(args)
    pool, _ = _screen_stage(report, system, las, threads)
    epsilon = args.epsilon if args.epsilon is not None else _default_epsilon(config)
    if epsilon < 0:
        raise _StageError("validation", args.job, f"--epsilon must be >= 0, got {epsilon}")
    n_sel = len(select(pool, epsilon))
    stage = report["stages"]["screen"]
    stage["epsilon"] = epsilon
    stage["n_selected"] = n_sel
    print(f"pool {stage['n_pool']} generators; max |gradient| {stage['max_abs_gradient']:.6e}")
    print(f"selected {n_sel} at epsilon {epsilon:g}")
    for label, count in stage["histogram"].items():
        print(f"  {label:>14} {count}")
    if args.out and args.out.endswith(".csv"):
        Path(args.out).write_text(_screen_csv(pool, epsilon))
    else:
        report["stages"]["screen"]["rows"] = [
            {
                "label": g.label,
                "kind": g.kind,
                "abs_gradient": abs(g.gradient_at_zero),
                "selected": abs(g.gradient_at_zero) >= epsilon,
            }
            for g in sorted(
                pool.generators, key=lambda g: (-abs(g.gradient_at_zero), g.indices)
            )
        ]
        _write_report(report, args.out, config.report_path)
    return 0


_SWEEP_COLUMNS = (
    "epsilon,n_params,energy,delta_e_vs_reference_kcal_mol,"
    "iterations,n_cnot_est,n_sqg_est"
)


def _sweep_csv(records, reference_energy: float | None) -> str:
    lines = [_SWEEP_COLUMNS]
    fallback = records[-1].result.energy if records else 0.0
    ref = reference_energy if reference_energy is not None else fallback
    for rec in records:
        delta = (rec.result.energy - ref) * HARTREE_TO_KCAL_MOL
        lines.append(
            f"{rec.epsilon:.6e},{rec.n_params},{rec.result.energy:.12f},"
            f"{delta:.6f},{rec.result.iterations},{rec.gates.n_cnot},{rec.gates.n_sqg}"
        )
    return "\n".join(lines) + "\n"


def _cmd_run(args) -> int:
    config = _read_job(args.job)
    if args.epsilon is not None and args.top_n is not None:
        raise _StageError("validation", args.job, "--epsilon and --top-n are mutually exclusive")
    system = _prepare(config, args.job)
    report = _new_report("run", args.job)
    las = _las_stage(report, system, args.job)
    ref = _reference_stage(report, system, config)
    threads = _resolve_threads(args)
    pool, psi0 = _screen_stage(report, system, las, threads)

    if args.top_n is not None:
        if args.top_n < 0:
            raise _StageError("validation", args.job, f"--top-n must be >= 0, got {args.top_n}")
        ranked = select(pool, 0.0)
        selection = ranked[: args.top_n]
        epsilon = abs(selection[-1].gradient_at_zero) if selection else float("inf")
    else:
        epsilon = args.epsilon if args.epsilon is not None else 0.0
        if epsilon < 0:
            raise _StageError("validation", args.job, f"--epsilon must be >= 0, got {epsilon}")
        selection = select(pool, epsilon)

    space = las_qubit_space(las)
    mh = MappedHamiltonian(system.ints, space)
    ansatz = vqe.TrotterAnsatz(selection, space, kernel=config.trotter.kernel)
    result = _timed(report, "vqe", lambda: vqe.minimize(
        ansatz, psi0, system.ints, settings=config.optimizer, _hamiltonian=mh))

    gates = estimate(selection)
    final_state = ansatz.prepare(psi0, result.amplitudes)
    s2 = _s_squared_of_state(final_state, space, system.layout)
    stage = {
        "epsilon": epsilon,
        "n_params": len(selection),
        "gates": gates.breakdown,
        "s_squared": s2,
        **_vqe_summary(result),
    }
    if ref is not None:
        stage["delta_e_vs_reference_kcal_mol"] = (
            (result.energy - ref.energy) * HARTREE_TO_KCAL_MOL
        )
    report["stages"]["vqe"] = stage

    print(f"selected {len(selection)}/{len(pool.generators)} generators at epsilon {epsilon:g}")
    print(f"energy {result.energy:.10f}  iterations {result.iterations}  "
          f"converged {result.converged}  <S^2> {s2:.6f}")
    if ref is not None:
        print(f"reference {ref.energy:.10f}  "
              f"delta {stage['delta_e_vs_reference_kcal_mol']:.4f} kcal/mol")

    if args.out and args.out.endswith(".csv"):
        record = vqe.SweepRecord(epsilon, len(selection), result, gates, list(selection))
        Path(args.out).write_text(
            _sweep_csv([record], None if ref is None else ref.energy)
        )
    else:
        _write_report(report, args.out, config.report_path)
    if not result.converged:
        print("warning: optimizer hit the iteration cap", file=sys.stderr)
        return 2
    return 0


def _cmd_sweep(args) -> int:
    config = _read_job(args.job)
    system = _prepare(config, args.job)
    report = _new_report("sweep", args.job)
    las = _las_stage(report, system, args.job)
    ref = _reference_stage(report, system, config)
    threads = _resolve_threads(args)
    pool, psi0 = _screen_stage(report, system, las, threads)

    warm = config.optimizer.warm_start and not args.cold
    records = _timed(report, "sweep", lambda: vqe.sweep(
        pool, psi0, system.ints, config.epsilon_ladder,
        warm_start=warm, settings=config.optimizer, kernel=config.trotter.kernel))

    ref_energy = None if ref is None else ref.energy
    csv_text = _sweep_csv(records, ref_energy)
    report["stages"]["sweep"] = {
        "warm_start": warm,
        "rungs": [
            {
                "epsilon": rec.epsilon,
                "n_params": rec.n_params,
                "gates": rec.gates.breakdown,
                **_vqe_summary(rec.result, include_amplitudes=False),
            }
            for rec in records
        ],
    }

    print(csv_text, end="")
    if args.out and args.out.endswith(".csv"):
        Path(args.out).write_text(csv_text)
    else:
        _write_report(report, args.out, config.report_path)
    if config.csv_path and not (args.out and args.out.endswith(".csv")):
        Path(config.job_dir / config.csv_path).write_text(csv_text)
    if any(not rec.result.converged for rec in records):
        print("warning: at least one rung hit the iteration cap", file=sys.stderr)
        return 2
    return 0


def _cmd_resources(args) -> int:
    config = _read_job(args.job)
    report = _new_report("resources", args.job)
    singles, doubles, total = count_parameters(config.layout)
    full = estimate((singles, doubles))
    rows = [("full", "", total, singles, doubles, full.n_sqg, full.n_cnot, 100.0)]

    if not args.counts_only:
        system = _prepare(config, args.job)
        las = _las_stage(report, system, args.job)
        threads = _resolve_threads(args)
        pool, _ = _screen_stage(report, system, las, threads)
        for eps in config.epsilon_ladder:
            if eps <= 0:
                continue
            sel = select(pool, eps)
            gates = estimate(sel)
            n_singles = sum(1 for g in sel if g.kind == "single")
            rows.append((
                "selected", f"{eps:g}", len(sel), n_singles, len(sel) - n_singles,
                gates.n_sqg, gates.n_cnot, percent_cnot(gates, full),
            ))

    header = f"{'row':<9}{'epsilon':>10}{'params':>8}{'singles':>9}{'doubles':>9}{'sqg':>9}{'cnot':>9}{'%cnot':>8}"
    print(header)
    for row in rows:
        print(f"{row[0]:<9}{row[1]:>10}{row[2]:>8}{row[3]:>9}{row[4]:>9}{row[5]:>9}{row[6]:>9}{row[7]:>8.2f}")

    if args.out and args.out.endswith(".csv"):
        lines = ["row,epsilon,n_params,n_singles,n_doubles,n_sqg,n_cnot,percent_cnot"]
        for row in rows:
            lines.append(",".join(str(x) for x in row))
        Path(args.out).write_text("\n".join(lines) + "\n")
    else:
        report["stages"]["resources"] = {
            "rows": [
                dict(zip(
                    ("row", "epsilon", "n_params", "n_singles", "n_doubles",
                     "n_sqg", "n_cnot", "percent_cnot"), row))
                for row in rows
            ]
        }
        _write_report(report, args.out, config.report_path)
    return 0


def _cmd_jcoupling(args) -> int:
    states = []
    for path in args.reports:
        try:
            data = json.loads(Path(path).read_text())
        except FileNotFoundError as exc:
            raise _StageError("jcoupling", path, "report not found") from exc
        except json.JSONDecodeError as exc:
            raise _StageError("jcoupling", path, f"invalid JSON: {exc}") from exc
        try:
            stage = data["stages"]["vqe"]
            states.append({"path": path, "energy": float(stage["energy"]),
                           "s_squared": float(stage["s_squared"])})
        except KeyError as exc:
            raise _StageError("jcoupling", path, f"missing field {exc} (need a run report)") from exc

    states.sort(key=lambda s: s["s_squared"])
    low, high = states
    if args.s2_high is not None:
        high = {**high, "s_squared": args.s2_high}
    if args.s2_low is not None:
        low = {**low, "s_squared": args.s2_low}
    try:
        j_value = vqe.yamaguchi_j(high["energy"], low["energy"],
                                  high["s_squared"], low["s_squared"])
    except ValueError as exc:
        raise _StageError("jcoupling", args.reports[0], str(exc)) from exc

    report = _new_report("jcoupling", None)
    report["stages"]["jcoupling"] = {
        "high_spin": high, "low_spin": low, "j_cm1": j_value,
    }
    print(f"J = {j_value:.4f} cm^-1  "
          f"(high spin <S^2> {high['s_squared']:g}, low spin <S^2> {low['s_squared']:g})")
    _write_report(report, args.out)
    return 0


_COMMANDS = {
    "count": _cmd_count,
    "las": _cmd_las,
    "casci": _cmd_casci,
    "screen": _cmd_screen,
    "run": _cmd_run,
    "sweep": _cmd_sweep,
    "resources": _cmd_resources,
    "jcoupling": _cmd_jcoupling,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    try:
        return _COMMANDS[args.command](args)
    except _StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.report is not None:
            _write_report(exc.report, getattr(args, "out", None))
        return exc.exit_code
    except OSError as exc:
        print(f"error: [io] {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
