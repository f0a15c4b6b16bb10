"""Command-line entry point: ``quantumness <command> [options]``.

Every command writes its outputs plus a ``manifest.json`` (parameters,
seed, package version, timestamp) into the output directory. Outputs other
than the manifest are byte-identical across reruns with the same manifest.

Exit codes: 0 ok, 2 usage, 3 data, 4 numerical.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import correction_scatter, fit_correction_exponent, l1_distance
from .ensembles import fit_poisson_quantumness
from .errors import DisconnectedGraphError, GraphFormatError, NumericalError
from .graph import (
    Graph,
    generate_ba,
    generate_er,
    generate_rg,
    generate_ring,
    generate_star,
    generate_ws,
    giant_component,
    is_connected,
    read_edge_list,
    rg_radius_for_degree,
    write_edge_list,
)
from .optimizer import POLICIES, McConfig, optimize_quantumness
from .spectral import eigendecompose, group_eigenspaces, quantum_hamiltonian, write_partition_json, write_spectrum_csv
from .sweep import MODELS, SWEEP_COLUMNS, run_sweep, write_sweep_csv
from .walk import (
    DensityState,
    finite_time_average,
    ground_density_state,
    node_state,
    quantum_long_time_average,
    uniform_state,
)

OUT_ENV = "QUANTUMNESS_OUT"
EXIT_USAGE, EXIT_DATA, EXIT_NUMERICAL = 2, 3, 4

NODE_COLUMNS = ("node", "degree", "p_classical", "p_quantum", "p_correction", "correction_ratio")


class UsageError(Exception):
    pass


def _notice(msg: str) -> None:
    print(f"quantumness: notice: {msg}", file=sys.stderr)


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def _write_table(path: Path, columns, rows, fmt: str) -> Path:
    """Write dict rows as CSV or JSON; returns the path actually written."""
    if fmt == "json":
        path = path.with_suffix(".json")
        path.write_text(json.dumps([{c: r[c] for c in columns} for r in rows], indent=2) + "\n")
        return path
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_fmt(r[c]) for c in columns])
    return path


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, default=_json_default) + "\n")


def _json_default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, (np.ndarray,)):
        return o.tolist()
    if isinstance(o, Path):
        return str(o)
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def _write_manifest(out: Path, args: argparse.Namespace, outputs: list[Path]) -> None:
    params = {k: v for k, v in vars(args).items() if k not in ("func",)}
    _write_json(out / "manifest.json", {
        "command": args.command,
        "params": params,
        "seed": getattr(args, "seed", None),
        "version": __version__,
        "outputs": sorted(p.name for p in outputs),
        "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    })


def _load_graph(path: str, strict: bool) -> Graph:
    g = read_edge_list(path)
    if not is_connected(g):
        if strict:
            raise DisconnectedGraphError(f"{path} is disconnected (--strict)")
        gc = giant_component(g)
        _notice(f"{path} is disconnected; using giant component with {gc.n} of {g.n} nodes")
        g = gc
    if g.n < 2:
        raise DisconnectedGraphError(f"{path}: giant component has fewer than 2 nodes")
    return g


def _parse_state(spec: str, g: Graph) -> DensityState:
    if spec == "uniform":
        return uniform_state(g.n)
    if spec == "ground":
        return ground_density_state(g)
    if spec.startswith("node:"):
        label = spec[len("node:"):]
        try:
            return node_state(g.n, g.index(label))
        except KeyError:
            raise GraphFormatError(f"state {spec!r}: no node labelled {label!r} in the graph") from None
    if spec.startswith("file:"):
        path = spec[len("file:"):]
        try:
            data = np.loadtxt(path, ndmin=1)
        except ValueError as exc:
            raise GraphFormatError(f"cannot parse state file {path}: {exc}") from None
        if data.ndim == 1:
            if len(data) != g.n:
                raise GraphFormatError(f"state vector has {len(data)} entries, graph has {g.n} nodes")
            norm = np.linalg.norm(data)
            if norm == 0:
                raise GraphFormatError("state vector is zero")
            if abs(norm - 1) > 1e-12:
                _notice(f"normalizing state vector (norm {norm:.6g})")
            return DensityState.pure(data / norm)
        if data.shape != (g.n, g.n):
            raise GraphFormatError(f"density matrix has shape {data.shape}, graph has {g.n} nodes")
        tr = np.trace(data)
        if tr <= 0:
            raise GraphFormatError("density matrix has non-positive trace")
        try:
            return DensityState.mixed(data / tr)
        except ValueError as exc:
            raise GraphFormatError(f"invalid density matrix: {exc}") from None
    raise UsageError(f"unknown state spec {spec!r}; use uniform, ground, node:<label> or file:<path>")


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_generate(args) -> int:
    if args.n is None:
        raise UsageError("--n is required")
    seed = args.seed
    model = args.model
    if model == "ba":
        g = generate_ba(args.n, args.m, seed)
    elif model == "er":
        p = args.p if args.p is not None else args.mean_degree / (args.n - 1)
        g = generate_er(args.n, p, seed)
    elif model == "ws":
        g = generate_ws(args.n, args.k, args.beta, seed)
    elif model == "rg":
        r = args.radius if args.radius is not None else rg_radius_for_degree(args.n, args.mean_degree)
        g = generate_rg(args.n, r, seed)
    elif model == "star":
        g = generate_star(args.n)
    else:
        g = generate_ring(args.n, args.k)
    if args.giant:
        g = giant_component(g)
    out = _out_dir(args)
    path = out / "graph.edges"
    write_edge_list(g, path, header=f"{model} n={g.n} edges={g.n_edges}")
    _write_manifest(out, args, [path])
    print(f"wrote {path} ({g.n} nodes, {g.n_edges} edges)")
    return 0


def cmd_analyze(args) -> int:
    g = _load_graph(args.graph, args.strict)
    state = _parse_state(args.state, g)
    s = quantum_long_time_average(g, state, args.tol)
    out = _out_dir(args)
    written = []

    summary = {"state": args.state, **s.to_dict()}
    try:
        summary["kappa3_fit"] = fit_correction_exponent(s).to_dict()
    except ValueError as exc:
        summary["kappa3_fit"] = None
        summary["kappa3_fit_skipped"] = str(exc)
    _write_json(out / "summary.json", summary)
    written.append(out / "summary.json")

    written.append(_write_table(out / "nodes.csv", NODE_COLUMNS, s.node_rows(), args.format))
    if s.p_correction is not None:
        d, ratio = correction_scatter(s)
        rows = [{"degree": float(a), "correction_ratio": float(b)} for a, b in zip(d, ratio)]
        written.append(_write_table(out / "scatter.csv", ("degree", "correction_ratio"), rows, args.format))
    if args.spectrum:
        spectrum = eigendecompose(quantum_hamiltonian(g))
        write_spectrum_csv(spectrum, out / "spectrum.csv")
        write_partition_json(group_eigenspaces(spectrum, args.tol), out / "partition.json")
        written += [out / "spectrum.csv", out / "partition.json"]
    _write_manifest(out, args, written)

    print(json.dumps({k: summary[k] for k in ("quantumness", "energy", "gap", "energy_over_gap", "entropy_bound")}))
    return 0


def cmd_evolve(args) -> int:
    if args.samples < 2:
        raise UsageError(f"--samples must be >= 2, got {args.samples}")
    g = _load_graph(args.graph, args.strict)
    state = _parse_state(args.state, g)
    p_q = quantum_long_time_average(g, state, args.tol).p_quantum
    rows = []
    for T in args.T:
        p_t = finite_time_average(g, state, T, args.samples)
        rows.append({"T": float(T), "samples": args.samples, "l1_distance": l1_distance(p_t, p_q)})
    out = _out_dir(args)
    path = _write_table(out / "convergence.csv", ("T", "samples", "l1_distance"), rows, args.format)
    _write_manifest(out, args, [path])
    for r in rows:
        print(f"T={r['T']:g} l1={r['l1_distance']:.3e}")
    return 0


def cmd_optimize(args) -> int:
    g = _load_graph(args.graph, args.strict)
    cfg = McConfig(target_epsilon=args.target, max_steps=args.max_steps, policy=args.policy,
                   seed=args.seed, record_stride=args.record_stride)
    traj = optimize_quantumness(g, cfg)
    out = _out_dir(args)
    rows = [{"step": s, "epsilon": e, "shannon_entropy": h} for s, e, h in traj.rows()]
    path = _write_table(out / "trajectory.csv", ("step", "epsilon", "shannon_entropy"), rows, args.format)
    write_edge_list(traj.graph, out / "optimized.edges")
    result = {"terminated_by": traj.terminated_by, "final_epsilon": traj.final_epsilon,
              "steps": int(traj.steps[-1]), "accepted": traj.accepted}
    _write_json(out / "result.json", result)
    _write_manifest(out, args, [path, out / "optimized.edges", out / "result.json"])
    print(json.dumps(result))
    return 0


def _parse_grid(args) -> list[float]:
    if args.means:
        return args.means
    if args.grid:
        try:
            lo, hi, step = (float(x) for x in args.grid.split(":"))
        except ValueError:
            raise UsageError(f"--grid must be lo:hi:step, got {args.grid!r}") from None
        if step <= 0 or hi < lo:
            raise UsageError("--grid needs step > 0 and hi >= lo")
        return [float(x) for x in np.round(np.arange(lo, hi + step / 2, step), 12)]
    raise UsageError("empty parameter grid: give --means or --grid")


def cmd_sweep(args) -> int:
    means = _parse_grid(args)
    rows = run_sweep(args.model, means, args.seeds_per_point, n=args.n, seed=args.seed,
                     beta=args.beta, jobs=args.jobs)
    out = _out_dir(args)
    if args.format == "json":
        path = out / "sweep.json"
        _write_json(path, [{c: getattr(r, c) for c in SWEEP_COLUMNS} for r in rows])
    else:
        path = out / "sweep.csv"
        write_sweep_csv(rows, path)
    written = [path]
    if args.model in ("er", "rg") and len(rows) >= 4 and min(means) > 1:
        fit_a = fit_poisson_quantumness(means)
        fit = {"analytic": {"kappa1": fit_a.kappa1, "kappa2": fit_a.kappa2, "residual": fit_a.residual,
                            "mean_range": fit_a.mean_range}}
        emp = np.array([r.epsilon_empirical_mean for r in rows])
        if np.all(emp > 0):
            fit_e = fit_poisson_quantumness(means, emp)
            fit["empirical"] = {"kappa1": fit_e.kappa1, "kappa2": fit_e.kappa2,
                                "residual": fit_e.residual, "mean_range": fit_e.mean_range}
        _write_json(out / "fit.json", fit)
        written.append(out / "fit.json")
        print(json.dumps(fit))
    _write_manifest(out, args, written)
    print(f"wrote {path} ({len(rows)} rows)")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    common.add_argument("--tol", type=float, default=None,
                        help="eigenvalue grouping tolerance (default 1e-8 * max(1, lambda_max))")
    common.add_argument("--out", default=os.environ.get(OUT_ENV, "."),
                        help=f"output directory (default ${OUT_ENV} or .)")
    common.add_argument("--format", choices=("csv", "json"), default="csv", help="table output format")
    common.add_argument("--strict", action="store_true", help="error on disconnected input")

    p = argparse.ArgumentParser(prog="quantumness", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", parents=[common], help="write a random or structured network")
    g.add_argument("model", choices=("ba", "er", "ws", "rg", "star", "ring"))
    g.add_argument("--n", type=int, help="number of nodes")
    g.add_argument("--m", type=int, default=3, help="BA edges per new node")
    g.add_argument("--p", type=float, help="ER edge probability")
    g.add_argument("--mean-degree", type=float, default=6.0, help="ER/RG target mean degree")
    g.add_argument("--k", type=int, default=6, help="WS/ring degree (even)")
    g.add_argument("--beta", type=float, default=0.1, help="WS rewiring probability")
    g.add_argument("--radius", type=float, help="RG connection radius")
    g.add_argument("--giant", action="store_true", help="keep only the giant component")
    g.set_defaults(func=cmd_generate)

    state_help = "initial state: uniform | ground | node:<label> | file:<path>"

    a = sub.add_parser("analyze", parents=[common], help="long-time-average decomposition")
    a.add_argument("graph", help="edge-list file")
    a.add_argument("--state", default="uniform", help=state_help)
    a.add_argument("--spectrum", action="store_true", help="also write spectrum.csv and partition.json")
    a.set_defaults(func=cmd_analyze)

    e = sub.add_parser("evolve", parents=[common], help="finite-time averages vs the projector result")
    e.add_argument("graph", help="edge-list file")
    e.add_argument("--state", default="uniform", help=state_help)
    e.add_argument("--T", type=float, nargs="+", default=[10.0, 100.0, 1000.0], help="averaging windows")
    e.add_argument("--samples", type=int, default=10_000, help="time samples per window")
    e.set_defaults(func=cmd_evolve)

    o = sub.add_parser("optimize", parents=[common], help="Monte Carlo weight optimization")
    o.add_argument("graph", help="edge-list file")
    o.add_argument("--target", type=float, default=0.6, help="stop once quantumness reaches this")
    o.add_argument("--max-steps", type=int, default=200_000, help="step budget")
    o.add_argument("--policy", choices=POLICIES, default="greedy")
    o.add_argument("--record-stride", type=int, default=100, help="record every k-th step")
    o.set_defaults(func=cmd_optimize)

    s = sub.add_parser("sweep", parents=[common], help="ensemble quantumness over mean degree")
    s.add_argument("model", choices=MODELS)
    s.add_argument("--means", type=float, nargs="+", help="mean degrees to sample")
    s.add_argument("--grid", help="lo:hi:step")
    s.add_argument("--seeds-per-point", type=int, default=20, help="realizations per mean degree")
    s.add_argument("--n", type=int, default=500, help="nodes per realization")
    s.add_argument("--beta", type=float, default=0.1, help="WS rewiring probability")
    s.add_argument("--jobs", type=int, default=1, help="worker processes")
    s.set_defaults(func=cmd_sweep)
    return p


def _fail(code: int, kind: str, msg: str) -> int:
    print(f"quantumness: error code={code} kind={kind}: {msg}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        return _fail(EXIT_USAGE, "usage", str(exc))
    except (GraphFormatError, DisconnectedGraphError, OSError) as exc:
        return _fail(EXIT_DATA, "data", str(exc))
    except NumericalError as exc:
        return _fail(EXIT_NUMERICAL, "numerical", str(exc))
    except ValueError as exc:
        return _fail(EXIT_USAGE, "usage", str(exc))


if __name__ == "__main__":
    sys.exit(main())
