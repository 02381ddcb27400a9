"""Command-line entry point.

Subcommands:
    qmc           solve the relaxation and round to an entangled state
    epr           deterministic pipeline for the EPR Hamiltonian
    curves        emit the guarantee curves as CSV files
    oracle-check  run the exact-diagonalization cross-checks on one instance

Reports are plain key = value text with a schema version line, followed by an
edge table; identical (input, seed, tol) produce byte-identical output.
Exit codes: 0 success, 2 input error, 3 solver error, 4 invariant violation.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import circuits, oracle, rounding, sdp
from .graphs import GraphFormatError, WeightedGraph, normalize_weights, parse_graph

SCHEMA = "qmcut-report/1"

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_SOLVER = 3
EXIT_INVARIANT = 4

ORACLE_CAP = 14


@dataclass
class RunConfig:
    command: str
    input: str | None
    output: str | None
    seed: int
    trials: int
    tol: float
    oracle: bool


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _load_graph(cfg: RunConfig) -> WeightedGraph:
    if not cfg.input:
        raise GraphFormatError("missing --input graph file")
    text = Path(cfg.input).read_text(encoding="utf-8")
    return normalize_weights(parse_graph(text))


def _emit(cfg: RunConfig, lines: list[str]) -> None:
    body = "\n".join(lines) + "\n"
    if cfg.output:
        Path(cfg.output).write_text(body, encoding="utf-8")
    else:
        sys.stdout.write(body)


def _header(cfg: RunConfig, g: WeightedGraph) -> list[str]:
    return [
        f"schema = {SCHEMA}",
        f"command = {cfg.command}",
        f"input = {cfg.input}",
        f"n = {g.n}",
        f"edges = {len(g.edges)}",
        f"seed = {cfg.seed}",
        f"trials = {cfg.trials}",
        f"tol = {_fmt(cfg.tol)}",
    ]


def _oracle_section(g: WeightedGraph, kind: str, plan) -> list[str]:
    if g.n > ORACLE_CAP:
        raise GraphFormatError(f"--oracle requires n <= {ORACLE_CAP}, got n = {g.n}")
    ham = oracle.build_hamiltonian(g, kind)
    norm = oracle.max_eigenvalue(ham)
    if kind == "epr":
        state = oracle.zero_state(g.n)
    else:
        state = oracle.product_state(plan.bloch)
    state = oracle.apply_circuit(state, plan)
    energy = oracle.energy(state, ham)
    return [
        "",
        "[oracle]",
        f"hamiltonian_norm = {_fmt(norm)}",
        f"simulated_energy = {_fmt(energy)}",
        f"simulated_ratio_vs_norm = {_fmt(energy / norm)}",
    ]


def cmd_qmc(cfg: RunConfig) -> int:
    g = _load_graph(cfg)
    problem = sdp.build_sdp(g, "qmc")
    solution = sdp.solve_sdp(problem, tol=cfg.tol)
    report, plan = circuits.run_qmc(g, solution, seed=cfg.seed, trials=cfg.trials)
    lines = _header(cfg, g)
    lines += [
        "kind = qmc",
        f"sdp_upper_bound = {_fmt(solution.objective_value)}",
        f"solver_gap = {_fmt(solution.solver_gap)}",
        f"beta = {_fmt(report.beta_used)}",
        f"branch = {report.branch}",
        f"total_expected_energy = {_fmt(report.total_energy)}",
        f"trials_mean_energy = {_fmt(report.trials_mean)}",
        f"trials_below_guarantee = {report.trials_below_guarantee}",
        f"ratio = {_fmt(report.ratio)}",
        f"guaranteed_ratio = {_fmt(circuits.GUARANTEED_RATIO)}",
        "",
        "[edges]",
        "# i j weight x sin2theta expected_energy",
    ]
    for (i, j, w) in g.edges:
        x = solution.edge_values[(i, j)]
        s2t = float(np.sin(2.0 * plan.theta[(i, j)]))
        e = report.per_edge_energy[(i, j)]
        lines.append(f"{i} {j} {_fmt(w)} {_fmt(x)} {_fmt(s2t)} {_fmt(e)}")
    if cfg.oracle:
        lines += _oracle_section(g, "qmc", plan)
    _emit(cfg, lines)
    return EXIT_OK


def cmd_epr(cfg: RunConfig) -> int:
    g = _load_graph(cfg)
    problem = sdp.build_sdp(g, "epr")
    solution = sdp.solve_sdp(problem, tol=cfg.tol)
    report, plan = circuits.run_epr(g, solution)
    lines = _header(cfg, g)
    lines += [
        "kind = epr",
        f"sdp_upper_bound = {_fmt(solution.objective_value)}",
        f"solver_gap = {_fmt(solution.solver_gap)}",
        f"eta = {_fmt(report.eta)}",
        f"branch = {report.branch}",
        f"total_energy = {_fmt(report.total_energy)}",
        f"ratio = {_fmt(report.ratio)}",
        f"guaranteed_ratio = {_fmt(float(circuits.EPR_RATIO))}",
        "",
        "[edges]",
        "# i j weight y sin2theta energy",
    ]
    for (i, j, w) in g.edges:
        y = solution.edge_values[(i, j)]
        s2t = float(np.sin(2.0 * plan.theta[(i, j)]))
        e = report.per_edge_energy[(i, j)]
        lines.append(f"{i} {j} {_fmt(w)} {_fmt(y)} {_fmt(s2t)} {_fmt(e)}")
    if cfg.oracle:
        lines += _oracle_section(g, "epr", plan)
    _emit(cfg, lines)
    return EXIT_OK


CURVE_STEP = 1e-3


def cmd_curves(cfg: RunConfig) -> int:
    """Write the three guarantee curves sampled at step 1e-3."""
    outdir = Path(cfg.output) if cfg.output else Path("curves")
    outdir.mkdir(parents=True, exist_ok=True)

    xs = np.linspace(-1.0, 1.0, round(2.0 / CURVE_STEP) + 1)
    f = rounding.product_energy_bound(xs)
    with open(outdir / "product_bound.csv", "w", encoding="utf-8") as fh:
        fh.write("x,f,f_over_1px\n")
        for x, fx in zip(xs, f):
            with np.errstate(divide="ignore"):
                ratio = fx / (1.0 + x) if x > -1.0 else float("inf")
            fh.write(f"{_fmt(float(x))},{_fmt(float(fx))},{_fmt(float(ratio))}\n")

    etas = np.linspace(0.0, 1.0, round(1.0 / CURVE_STEP) + 1)
    with open(outdir / "epr_guarantee.csv", "w", encoding="utf-8") as fh:
        fh.write("eta,product_ratio,rotated_ratio\n")
        for eta in etas:
            prod = 1.0 / (1.0 + eta)
            rot = (0.5 + eta + 0.5 * eta * eta) / (1.0 + eta)
            fh.write(f"{_fmt(float(eta))},{_fmt(float(prod))},{_fmt(float(rot))}\n")

    big_f = circuits.rotated_energy_bound(circuits.BETA_STAR, xs)
    with open(outdir / "qmc_guarantee.csv", "w", encoding="utf-8") as fh:
        fh.write("x,F,F_over_1px\n")
        for x, fx in zip(xs, big_f):
            ratio = fx / (1.0 + x) if x > -1.0 else float("inf")
            fh.write(f"{_fmt(float(x))},{_fmt(float(fx))},{_fmt(float(ratio))}\n")
    return EXIT_OK


def _check(lines: list[str], failures: list[str], name: str, ok: bool, detail: str) -> None:
    status = "PASS" if ok else "FAIL"
    lines.append(f"{name} = {status} ({detail})")
    if not ok:
        failures.append(name)


MC_SAMPLES = 10_000


def cmd_oracle_check(cfg: RunConfig) -> int:
    """Cross-validate one instance against exact diagonalization."""
    g = _load_graph(cfg)
    if g.n > ORACLE_CAP:
        raise GraphFormatError(f"oracle-check requires n <= {ORACLE_CAP}, got n = {g.n}")
    lines = _header(cfg, g)
    failures: list[str] = []

    solutions = {}
    for kind in ("qmc", "epr"):
        problem = sdp.build_sdp(g, kind)
        solutions[kind] = sdp.solve_sdp(problem, tol=cfg.tol)
        ham = oracle.build_hamiltonian(g, kind)
        norm = oracle.max_eigenvalue(ham)
        obj = solutions[kind].objective_value
        _check(lines, failures, f"upper_bound_{kind}", obj >= norm - 1e-5,
               f"relaxation {obj!r} vs exact {norm!r}")
        mono = sdp.check_monogamy(solutions[kind].edge_values, g, tol=1e-6)
        _check(lines, failures, f"monogamy_{kind}", mono.ok,
               f"worst vertex {mono.worst_vertex} sum {mono.worst_sum!r}")

    # EPR closed form is exact; compare against the simulator
    report, plan = circuits.run_epr(g, solutions["epr"])
    state = oracle.apply_circuit(oracle.zero_state(g.n), plan)
    worst = 0.0
    for (i, j, _) in g.edges:
        sim = oracle.edge_energy(state, i, j, g.n, "epr")
        worst = max(worst, abs(sim - report.per_edge_energy[(i, j)]))
    _check(lines, failures, "epr_closed_form", worst <= 1e-10,
           f"max per-edge |analytic - simulated| = {worst!r}")

    # QMC expectation law, Monte Carlo over axes/signs; exact only for edges
    # whose endpoints share no neighbour, so others are skipped
    qreport, qplan = circuits.run_qmc(g, solutions["qmc"], seed=cfg.seed, trials=cfg.trials)
    checked = 0
    worst_z = 0.0
    rng = np.random.default_rng(np.random.SeedSequence((cfg.seed, 0xC0FFEE)))
    states = circuits.resample_rotated_states(
        qplan.bloch, qplan.theta, qplan.edge_order, g.n, rng, MC_SAMPLES)
    for (i, j, _) in g.edges:
        if circuits.has_common_neighbor(g, i, j):
            continue
        vals = oracle.edge_energies_batch(states, i, j, g.n, "qmc")
        se = float(vals.std(ddof=1) / np.sqrt(MC_SAMPLES))
        diff = abs(float(vals.mean()) - qreport.per_edge_energy[(i, j)])
        z = diff / se if se > 0 else 0.0
        worst_z = max(worst_z, z)
        checked += 1
    _check(lines, failures, "qmc_expectation_mc",
           worst_z <= 3.0 or checked == 0,
           f"{checked} edges checked, worst z-score {worst_z!r}")

    lines.append(f"checks_failed = {len(failures)}")
    _emit(cfg, lines)
    return EXIT_OK if not failures else EXIT_INVARIANT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qmcut", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("qmc", "epr", "curves", "oracle-check"):
        p = sub.add_parser(name)
        p.add_argument("--input", default=None, help="edge-list graph file")
        p.add_argument("--output", default=None, help="report file (or directory for curves)")
        p.add_argument("--seed", type=int, default=0, help="64-bit master seed")
        p.add_argument("--trials", type=int, default=64, help="rounding trials")
        p.add_argument("--tol", type=float, default=sdp.DEFAULT_TOL, help="solver duality-gap tolerance")
        p.add_argument("--oracle", action="store_true", help="add exact cross-check section")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        command=args.command,
        input=args.input,
        output=args.output,
        seed=args.seed,
        trials=args.trials,
        tol=args.tol,
        oracle=args.oracle,
    )
    if cfg.trials < 1:
        print("error: --trials must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    if not (0 < cfg.tol <= 1e-4):
        print("error: --tol must lie in (0, 1e-4]", file=sys.stderr)
        return EXIT_INPUT
    handlers = {
        "qmc": cmd_qmc,
        "epr": cmd_epr,
        "curves": cmd_curves,
        "oracle-check": cmd_oracle_check,
    }
    try:
        return handlers[cfg.command](cfg)
    except (GraphFormatError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except sdp.SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
