"""Command-line front end.

Commands: build | evolve | sweep | spectrum | scatter | tree | selftest.
Angles are radians; `--theta-pi X` means X*pi and avoids decimal truncation in
golden files.  A JSON config file can preset any flag (explicit flags win).
Exit codes: 0 success, 2 invalid arguments, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import tables
from .errors import ChiralWalkError, NumericalError
from .evolution import (
    Propagator,
    WavePacketSpec,
    chain_densities,
    graph_eigensystem,
    make_packet,
)
from .graphs import (
    build_binary_tree,
    build_khalique_chain,
    build_open_chain,
    build_y_junction,
    build_y_ring_composite,
)
from .scattering import greens_numeric_trace
from .selftest import run_checks
from .transport import ring_route_demo, sweep_theta, tree_route_demo
from .util import fmt_float
from .yjunction import spectrum_records

TOPOLOGIES = ("chain", "khalique", "y", "ring", "tree")


def _default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("CHIRALWALK_JOBS", "1")))
    except ValueError:
        return 1


def _build_graph(args):
    n = args.n
    theta = args.theta
    if args.topology == "chain":
        return build_open_chain(n)
    if args.topology == "khalique":
        return build_khalique_chain(n)
    if args.topology == "y":
        return build_y_junction(n, theta)
    if args.topology == "ring":
        return build_y_ring_composite(n, theta)
    if args.topology == "tree":
        return build_binary_tree(args.depth, n, theta)
    raise ValueError(f"unknown topology {args.topology!r}")


def _packet_spec(args, chain=None) -> WavePacketSpec:
    n0 = args.n0 if args.n0 is not None else args.n / 2.0
    sigma = args.sigma if args.sigma is not None else args.n / math.sqrt(32.0)
    support = None
    if args.kind == "square":
        lo, hi = (
            (int(x) for x in args.support.split(":"))
            if args.support
            else (int(round(n0 - sigma)), int(round(n0 + sigma)))
        )
        support = (lo, hi)
    return WavePacketSpec(
        kind=args.kind,
        chain=chain if chain is not None else args.chain,
        n0=n0,
        sigma=sigma,
        k0=args.k0,
        support=support,
    )


def _cmd_build(args) -> int:
    graph = _build_graph(args)
    with open(args.out, "w", newline="\n") as fh:
        fh.write(graph.to_json())
        fh.write("\n")
    print(f"{graph.topology}: {graph.num_sites} sites, {len(graph.edges)} edges -> {args.out}")
    return 0


def _cmd_evolve(args) -> int:
    graph = _build_graph(args)
    default_chain = 0 if args.topology == "tree" else 1
    spec = _packet_spec(args, chain=args.chain if args.chain is not None else default_chain)
    psi0 = make_packet(graph, spec)
    prop = Propagator(graph_eigensystem(graph), psi0)
    times = np.arange(0.0, args.t_max + 0.5 * args.dt, args.dt)
    states = [prop.state_at(t) for t in times]
    tables.write_trajectory_csv(args.out, times, states, fmt=args.format)
    written = [args.out]
    if args.snapshots:
        snap_times = [float(s) for s in args.snapshots.split(",")]
        snap_path = args.snapshot_out or (
            os.path.splitext(args.out)[0] + "_snapshots.csv"
        )
        tables.write_snapshot_csv(
            snap_path, [(t, prop.state_at(t)) for t in snap_times], fmt=args.format
        )
        written.append(snap_path)
    final = chain_densities(states[-1])
    summary = " ".join(f"n_{l}={fmt_float(v)}" for l, v in sorted(final.items()))
    print(f"evolved to t={fmt_float(times[-1])}: {summary} -> {', '.join(written)}")
    return 0


def _cmd_sweep(args) -> int:
    thetas = np.linspace(-math.pi, math.pi, args.grid)
    spec = _packet_spec(args, chain=1)
    records = sweep_theta(args.n, spec, thetas, mode=args.mode, jobs=args.jobs)
    tables.write_sweep_csv(args.out, records, fmt=args.format)
    print(f"swept {len(records)} phases on [-pi, pi] -> {args.out}")
    return 0


def _cmd_spectrum(args) -> int:
    thetas = np.linspace(-math.pi, math.pi, args.theta_grid)
    tables.write_spectrum_csv(args.out, spectrum_records(args.n, thetas), fmt=args.format)
    print(f"spectrum on {args.theta_grid} phases, n={args.n} -> {args.out}")
    return 0


def _cmd_scatter(args) -> int:
    spec = _packet_spec(args, chain=1)
    times = np.arange(0.0, args.t_max + 0.5 * args.dt, args.dt)
    trace = greens_numeric_trace(args.n, args.omega, spec, times)
    tables.write_greens_csv(args.out, trace, fmt=args.format)
    y_end = trace.values[-1]
    print(
        f"greens trace omega={fmt_float(args.omega)}: final |Y|={fmt_float(abs(y_end))}, "
        f"arg Y={fmt_float(float(np.angle(y_end)))} -> {args.out}"
    )
    return 0


def _cmd_tree(args) -> int:
    if args.ring:
        report = ring_route_demo(args.n, args.theta, args.k0)
    else:
        report = tree_route_demo(args.depth, args.n, args.theta, args.k0, args.path)
    tables.write_routing_json(args.out, report)
    frac = report.passages[-1].routed_fraction
    print(
        f"{report.kind} routing path={report.path}: final routed fraction "
        f"{fmt_float(frac)} (target chain {report.target_chain}) -> {args.out}"
    )
    return 0


def _cmd_selftest(args) -> int:
    results = run_checks(quick=args.quick, inject_fault=args.inject_fault, seed=args.seed)
    for r in results:
        status = "PASS" if r.ok else "FAIL"
        print(f"{status}  {r.name}: residual {r.residual:.3e} (bound {r.bound:.1e})")
    return 0 if all(r.ok for r in results) else 1


def _add_angle_args(p):
    p.add_argument("--theta", type=float, default=None, help="phase in radians")
    p.add_argument(
        "--theta-pi",
        type=float,
        default=None,
        help="phase as a multiple of pi (exact for paper values)",
    )


def _add_format_arg(p):
    p.add_argument("--format", choices=("csv", "json"), default="csv",
                   help="table output format")


def _add_packet_args(p, with_chain=True):
    p.add_argument("--kind", choices=("gaussian", "square"), default="gaussian")
    p.add_argument("--n0", type=float, default=None, help="packet centre (default n/2)")
    p.add_argument("--sigma", type=float, default=None, help="width (default n/sqrt(32))")
    p.add_argument("--k0", type=float, default=math.pi / 2, help="momentum label")
    p.add_argument("--support", default=None, help="square support lo:hi")
    if with_chain:
        p.add_argument("--chain", type=int, default=None, help="launch chain")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chiralwalk",
        description="Chiral continuous-time quantum walks on phased graphs",
    )
    parser.add_argument("--config", default=None, help="JSON file presetting flags")
    sub = parser.add_subparsers(dest="command", required=True)

    pb = sub.add_parser("build", help="emit a graph as JSON")
    pb.add_argument("--topology", choices=TOPOLOGIES, default="y")
    pb.add_argument("--n", type=int, default=200)
    pb.add_argument("--depth", type=int, default=1)
    _add_angle_args(pb)
    pb.add_argument("--out", default="graph.json")
    pb.set_defaults(func=_cmd_build)

    pe = sub.add_parser("evolve", help="trajectory (and snapshot) CSV")
    pe.add_argument("--topology", choices=TOPOLOGIES, default="y")
    pe.add_argument("--n", type=int, default=200)
    pe.add_argument("--depth", type=int, default=1)
    _add_angle_args(pe)
    _add_packet_args(pe)
    pe.add_argument("--t-max", type=float, default=400.0)
    pe.add_argument("--dt", type=float, default=0.5)
    pe.add_argument("--snapshots", default=None, help="comma-separated times")
    pe.add_argument("--snapshot-out", default=None)
    _add_format_arg(pe)
    pe.add_argument("--out", default="run.csv")
    pe.set_defaults(func=_cmd_evolve)

    ps = sub.add_parser("sweep", help="chain densities over a theta grid")
    ps.add_argument("--n", type=int, default=200)
    ps.add_argument("--grid", type=int, default=49, help="points on [-pi, pi]")
    ps.add_argument("--mode", choices=("numeric", "analytic", "both"), default="both")
    ps.add_argument("--jobs", type=int, default=None)
    _add_packet_args(ps, with_chain=False)
    _add_format_arg(ps)
    ps.add_argument("--out", default="sweep.csv")
    ps.set_defaults(func=_cmd_sweep)

    pp = sub.add_parser("spectrum", help="junction spectrum vs theta")
    pp.add_argument("--n", type=int, default=50)
    pp.add_argument("--theta-grid", type=int, default=97)
    _add_format_arg(pp)
    pp.add_argument("--out", default="spec.csv")
    pp.set_defaults(func=_cmd_spectrum)

    pc = sub.add_parser("scatter", help="boundary Greens-function trace")
    pc.add_argument("--n", type=int, default=200)
    pc.add_argument("--omega", type=float, default=math.sqrt(3.0))
    _add_packet_args(pc, with_chain=False)
    pc.add_argument("--t-max", type=float, default=200.0)
    pc.add_argument("--dt", type=float, default=0.5)
    _add_format_arg(pc)
    pc.add_argument("--out", default="greens.csv")
    pc.set_defaults(func=_cmd_scatter)

    pt = sub.add_parser("tree", help="routing demo on tree or ring composite")
    pt.add_argument("--n", type=int, default=100)
    pt.add_argument("--depth", type=int, default=2)
    _add_angle_args(pt)
    pt.add_argument("--k0", type=float, default=math.pi / 2)
    pt.add_argument("--path", default="LL", help="L/R choice per junction")
    pt.add_argument("--ring", action="store_true", help="Y+ring composite instead")
    pt.add_argument("--out", default="routing.json")
    pt.set_defaults(func=_cmd_tree)

    pq = sub.add_parser("selftest", help="fast invariant suite")
    pq.add_argument("--quick", action="store_true")
    pq.add_argument("--seed", type=int, default=7, help="seed for the randomized checks")
    pq.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    pq.set_defaults(func=_cmd_selftest)
    return parser


def _apply_config(parser, args, argv):
    """Fill flags from the JSON config unless given explicitly on the line."""
    with open(args.config) as fh:
        conf = json.load(fh)
    explicit = set()
    for tok in argv:
        if tok.startswith("--"):
            explicit.add(tok.split("=", 1)[0].lstrip("-").replace("-", "_"))
    for key, value in conf.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            raise ValueError(f"config key {key!r} matches no flag of this command")
        if attr not in explicit:
            setattr(args, attr, value)


def _resolve_theta(args) -> None:
    if getattr(args, "theta_pi", None) is not None:
        if args.theta is not None:
            raise ValueError("give --theta or --theta-pi, not both")
        args.theta = args.theta_pi * math.pi
    if getattr(args, "theta", None) is None and hasattr(args, "theta"):
        args.theta = math.pi / 6.0


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.config:
            _apply_config(parser, args, argv)
        _resolve_theta(args)
        if getattr(args, "jobs", None) is None and hasattr(args, "jobs"):
            args.jobs = _default_jobs()
        return args.func(args)
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (ChiralWalkError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
