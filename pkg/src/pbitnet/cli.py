"""Command-line front end.

Subcommands::

    run           simulate a network file and write trace + histogram CSVs
    sweep         Design-1 ratio sweep (tau_t / tau_n0) with TV per ratio
    characterize  single-device sigmoid, autocorrelation, and step response
    oracle        exact distribution table of a network file
    compare       total variation distance between two table CSVs

The seed comes from ``--seed``, falling back to the ``PPSL_SEED``
environment variable, then 0.  Every command prints the seed and a digest
of its resolved parameters; equal invocations write byte-identical CSVs.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys

import numpy as np

from . import analysis, netio
from .clocked import ClockedConfig, UpdatePolicy, run_clocked
from .core import NetworkKind, PBitNetwork
from .d1 import D1Params, MtjMode, run_autonomous_d1
from .d2 import D2Params, run_autonomous_d2
from .errors import PBitError, UnknownNodeError
from .oracle import ENUMERATION_CAP, bn_joint, boltzmann_joint, marginalize


def _resolve_seed(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get("PPSL_SEED")
    if env:
        try:
            return int(env)
        except ValueError:
            raise PBitError(f"PPSL_SEED must be an integer, got {env!r}") from None
    return 0


def _digest(params: dict) -> str:
    blob = json.dumps(params, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


def _parse_nodes(spec: str | None, net: PBitNetwork) -> list[int]:
    if spec:
        out = []
        for tok in spec.split(","):
            tok = tok.strip()
            if tok in net.labels:
                out.append(net.labels[tok])
            else:
                try:
                    idx = int(tok)
                except ValueError:
                    raise UnknownNodeError(
                        f"{tok!r} is neither a label of the network nor an index"
                    ) from None
                if not 0 <= idx < net.n_nodes:
                    raise UnknownNodeError(f"node index {idx} out of range")
                out.append(idx)
        return out
    if net.labels:
        return [net.labels[name] for name in sorted(net.labels)]
    if net.n_nodes <= 12:
        return list(range(net.n_nodes))
    raise PBitError("network has no labels; pass --nodes to choose the observed subset")


def _parse_policy(spec: str) -> UpdatePolicy:
    if spec == "topological":
        return UpdatePolicy.topological()
    if spec == "random":
        return UpdatePolicy.random_per_sweep()
    if spec.startswith("fixed:"):
        return UpdatePolicy.fixed(int(tok) for tok in spec[len("fixed:"):].split(","))
    raise PBitError(
        f"unknown policy {spec!r}; use topological, random, or fixed:<comma-separated order>"
    )


def _auto_stride(n_steps: int, cap: int = 1_000_000) -> int:
    return max(1, n_steps // cap)


def _exact_table(net: PBitNetwork, nodes: list[int]):
    if net.n_nodes > ENUMERATION_CAP:
        return None
    joint = bn_joint(net) if net.kind is NetworkKind.DIRECTED else boltzmann_joint(net)
    return marginalize(joint, nodes)


def _d1_params(args, duration: float) -> D1Params:
    return D1Params(
        tau_t=args.tau_t, tau_n0=args.tau_n, tau_s=args.tau_s, dt=args.dt,
        i_mtj=args.imtj, mtj_mode=MtjMode(args.mtj_mode),
        duration=duration, record_stride=args.stride or 1,
    )


def cmd_run(args) -> int:
    seed = _resolve_seed(args.seed)
    net = netio.load_network(args.net)
    nodes = _parse_nodes(args.nodes, net)

    if args.engine == "oracle":
        table = _exact_table(net, nodes)
        if table is None:
            raise PBitError(f"network too large for exact enumeration (> {ENUMERATION_CAP})")
        out = f"{args.out}.hist.csv"
        netio.write_table_csv(table, out, net.labels)
        print(f"engine=oracle seed={seed} params={_digest({'net': args.net, 'nodes': nodes})}")
        print(f"wrote {out}")
        return 0

    if args.engine == "clocked":
        cfg = ClockedConfig(sweeps=args.sweeps, policy=_parse_policy(args.policy), seed=seed)
        trace = run_clocked(net, cfg)
        resolved = {"engine": "clocked", "sweeps": args.sweeps, "policy": args.policy,
                    "seed": seed, "net": args.net}
    elif args.engine in ("d1", "d2"):
        if args.engine == "d1":
            params = _d1_params(args, args.duration)
            if args.stride is None:
                params.record_stride = _auto_stride(int(round(args.duration / params.resolved_dt())))
            trace = run_autonomous_d1(net, params, seed)
        else:
            params = D2Params(tau_n=args.tau_n, tau_s=args.tau_s, dt=args.dt,
                              duration=args.duration, record_stride=args.stride or 1)
            if args.stride is None:
                params.record_stride = _auto_stride(int(round(args.duration / params.resolved_dt())))
            trace = run_autonomous_d2(net, params, seed)
        resolved = dict(trace.meta, net=args.net)
    else:
        raise PBitError(f"unknown engine {args.engine!r}")

    print(f"engine={args.engine} seed={seed} params={_digest(resolved)}")
    trace_path = f"{args.out}.trace.csv"
    hist_path = f"{args.out}.hist.csv"
    netio.write_trace_csv(trace, trace_path, net.labels)
    table = analysis.histogram(trace, nodes)
    netio.write_table_csv(table, hist_path, net.labels)
    print(f"wrote {trace_path}")
    print(f"wrote {hist_path}")

    exact = _exact_table(net, nodes)
    if exact is not None:
        print(f"tv_vs_oracle={analysis.tv_distance(table, exact):.6f}")
    return 0


def cmd_sweep(args) -> int:
    seed = _resolve_seed(args.seed)
    ratios = [float(tok) for tok in args.ratios.split(",") if tok.strip()] if args.ratios else []
    if not ratios:
        print("warning: empty ratio list; nothing to do", file=sys.stderr)
        return 0
    net = netio.load_network(args.net)
    nodes = _parse_nodes(args.nodes, net)
    exact = _exact_table(net, nodes)
    if exact is None:
        raise PBitError("ratio sweep needs an enumerable network to compare against")

    print(f"seed={seed} params={_digest({'ratios': ratios, 'net': args.net, 'seed': seed, 'duration': args.duration})}")
    rows = []
    for k, ratio in enumerate(ratios):
        params = D1Params(
            tau_t=ratio * args.tau_n, tau_n0=args.tau_n, tau_s=args.tau_s,
            dt=args.dt, mtj_mode=MtjMode(args.mtj_mode), duration=args.duration,
        )
        n_steps = int(round(args.duration / params.resolved_dt()))
        params.record_stride = args.stride or _auto_stride(n_steps)
        trace = run_autonomous_d1(net, params, seed + k)
        tv = analysis.tv_distance(analysis.histogram(trace, nodes), exact)
        rows.append((ratio, tv))
        print(f"ratio={ratio:g} tv={tv:.6f}")
    netio.write_xy_csv(args.out, ["ratio", "tv"], rows)
    print(f"wrote {args.out}")
    return 0


def cmd_characterize(args) -> int:
    seed = _resolve_seed(args.seed)
    inputs = [float(tok) for tok in args.inputs.split(",")]
    if args.engine == "d1":
        params = _d1_params(args, args.duration)
        fluct = args.tau_n
        expected_corr = 2.0 * math.log(2.0) * args.tau_n
    elif args.engine == "d2":
        params = D2Params(tau_n=args.tau_n, tau_s=args.tau_s, dt=args.dt,
                          duration=args.duration)
        fluct = args.tau_n
        expected_corr = math.log(2.0) * args.tau_n
    else:
        raise PBitError("characterize works on the autonomous engines: d1 or d2")
    print(f"engine={args.engine} seed={seed} params={_digest(dict(vars(args), seed=seed))}")

    sweep = analysis.sigmoid_sweep(args.engine, params, inputs, seed)
    netio.write_xy_csv(f"{args.out}.sigmoid.csv", ["input", "mean"], sweep)

    if args.engine == "d1":
        runner_params = D1Params(
            tau_t=args.tau_t, tau_n0=args.tau_n, tau_s=args.tau_s, dt=args.dt,
            mtj_mode=MtjMode(args.mtj_mode), duration=args.duration,
            record_stride=args.stride or 1,
        )
        from .analysis import _single_node_net

        trace = run_autonomous_d1(_single_node_net(0.0), runner_params, seed + 1000)
    else:
        runner_params = D2Params(tau_n=args.tau_n, tau_s=args.tau_s, dt=args.dt,
                                 duration=args.duration, record_stride=args.stride or 1)
        from .analysis import _single_node_net

        trace = run_autonomous_d2(_single_node_net(0.0), runner_params, seed + 1000)
    ac = analysis.autocorrelation(trace, 0, max_lag=5.0 * fluct)
    netio.write_xy_csv(f"{args.out}.autocorr.csv", ["lag", "acf"], zip(ac.lags, ac.acf))

    step = analysis.step_response(args.engine, params, args.members, -3.0, 0.0, seed + 2000)
    netio.write_xy_csv(f"{args.out}.step.csv", ["time", "mean"], zip(step.times, step.mean))

    print(f"tau_corr={ac.fwhm:.6g} (expected about {expected_corr:.6g})")
    print(f"tau_step={step.tau_step:.6g}")
    print(f"ratio_step_over_corr={step.tau_step / ac.fwhm:.6g}")
    for path in (".sigmoid.csv", ".autocorr.csv", ".step.csv"):
        print(f"wrote {args.out}{path}")
    return 0


def cmd_oracle(args) -> int:
    net = netio.load_network(args.net)
    nodes = _parse_nodes(args.nodes, net)
    table = _exact_table(net, nodes)
    if table is None:
        raise PBitError(f"network too large for exact enumeration (> {ENUMERATION_CAP})")
    netio.write_table_csv(table, args.out, net.labels)
    print(f"params={_digest({'net': args.net, 'nodes': nodes})}")
    print(f"sum={float(table.probs.sum())!r}")
    print(f"wrote {args.out}")
    return 0


def cmd_compare(args) -> int:
    tv = netio.table_tv_from_csvs(args.table_a, args.table_b)
    print(f"tv={tv:.9f}")
    return 0


def _add_engine_flags(p: argparse.ArgumentParser, with_engine: bool = True) -> None:
    if with_engine:
        p.add_argument("--engine", default="d1",
                       choices=["clocked", "d1", "d2", "oracle"])
    p.add_argument("--seed", type=int, default=None,
                   help="random seed (default: $PPSL_SEED, then 0)")
    p.add_argument("--dt", type=float, default=None, help="integration step")
    p.add_argument("--tau-t", dest="tau_t", type=float, default=0.01,
                   help="response time constant (d1)")
    p.add_argument("--tau-n", dest="tau_n", type=float, default=1.0,
                   help="retention time constant")
    p.add_argument("--tau-s", dest="tau_s", type=float, default=0.0,
                   help="synapse time constant (0 = instantaneous)")
    p.add_argument("--imtj", type=float, default=0.0,
                   help="retention-pinning current (d1)")
    p.add_argument("--mtj-mode", dest="mtj_mode", default="continuous",
                   choices=["continuous", "bipolar"])
    p.add_argument("--duration", type=float, default=2000.0,
                   help="simulated time for autonomous engines")
    p.add_argument("--sweeps", type=int, default=100_000,
                   help="sweep count for the clocked engine")
    p.add_argument("--policy", default="topological",
                   help="clocked update order: topological, random, or fixed:<order>")
    p.add_argument("--stride", type=int, default=None,
                   help="record every N-th step (default: auto)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="pbitnet",
        description="Simulate networks of probabilistic bits and check them "
                    "against exact enumeration.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="simulate a network file")
    p.add_argument("--net", required=True, help="network JSON file")
    _add_engine_flags(p)
    p.add_argument("--nodes", default=None, help="observed subset: labels or indices")
    p.add_argument("--out", default="run", help="output path prefix")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="Design-1 tau_t/tau_n0 ratio sweep")
    p.add_argument("--net", required=True)
    p.add_argument("--ratios", default="", help="comma-separated tau_t/tau_n0 ratios")
    _add_engine_flags(p, with_engine=False)
    p.add_argument("--nodes", default=None)
    p.add_argument("--out", default="sweep.csv")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("characterize", help="single-device time scales and sigmoid")
    _add_engine_flags(p)
    p.add_argument("--inputs", default="-3,-2,-1,0,1,2,3")
    p.add_argument("--members", type=int, default=10_000,
                   help="ensemble size for the step response")
    p.add_argument("--out", default="characterize")
    p.set_defaults(func=cmd_characterize)

    p = sub.add_parser("oracle", help="exact distribution of a network file")
    p.add_argument("--net", required=True)
    p.add_argument("--nodes", default=None)
    p.add_argument("--out", default="oracle.csv")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("compare", help="TV distance between two table CSVs")
    p.add_argument("table_a")
    p.add_argument("table_b")
    p.set_defaults(func=cmd_compare)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (PBitError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
