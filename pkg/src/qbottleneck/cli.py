"""Command-line entry point: ``qbottleneck <command> [options]``.

Exit codes: 0 when every check passes, 1 for bad input, 2 when a witness
or verification fails.  JSON output carries ``"schema": 1`` and is
byte-identical for identical arguments.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from .bounds import gate_based_free_bound, hamiltonian_free_bound, routing_threshold_report
from .free_particle import (
    beam_splitter_entropy,
    column_leak,
    dicke_occupancy_report,
    evolve_modes,
    phase_correct,
    protocol_sweep,
    star_fourier_protocol,
    verify_routing,
)
from .graphs import GraphSpecError, Tripartition, is_star, parse_graph, require_bottleneck
from .permutations import Permutation, PermutationError, format_cycles, full_pairing, parse_permutation
from .qubit_dynamics import capacity_experiment, ghz_fast_entangling
from .swap_router import apply_circuit_labels, route_star, routing_comparison
from .trotter import loglog_slope
from . import witnesses

SCHEMA = 1
EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        vals = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        f = float(x)
        return f if math.isfinite(f) else str(f)
    if isinstance(x, complex):
        return [x.real, x.imag]
    return x


def _emit(args, payload: dict, rows: list[dict]) -> None:
    if args.format == "csv":
        buf = io.StringIO()
        if rows:
            fields = list(rows[0])
            for r in rows[1:]:
                fields += [k for k in r if k not in fields]
            w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
            w.writeheader()
            for r in rows:
                w.writerow({k: _jsonable(v) for k, v in r.items()})
        text = buf.getvalue()
    else:
        doc = {"schema": SCHEMA, "command": args.command_name, **payload}
        text = json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n"
    if args.out and args.out != "-":
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _graph(args, default: str | None = None) -> Tripartition:
    spec = args.graph or default
    if spec is None:
        raise UsageError("--graph is required")
    args.graph = spec
    return parse_graph(spec)


def _pairing(text: str, t: Tripartition) -> Permutation:
    if text == "full":
        return Permutation.from_transpositions(t.n, full_pairing(t))
    return parse_permutation(text, t.n)


def _config(args, **extra) -> dict:
    cfg = {"graph": getattr(args, "graph", None), "seed": args.seed, "trials": args.trials}
    cfg.update(extra)
    return cfg


# --- commands ---------------------------------------------------------------


def cmd_route_free(args) -> int:
    if args.sweep:
        rows = protocol_sweep(args.sweep)
        slope = loglog_slope([r["N"] for r in rows], [r["protocol_time"] for r in rows])
        ok = all(r["routed"] for r in rows)
        _emit(args, {"config": _config(args, sweep=args.sweep), "rows": rows, "time_slope": slope, "passed": ok}, rows)
        return EXIT_OK if ok else EXIT_FAIL
    t = _graph(args)
    if not is_star(t) or t.n_l != t.n_r:
        raise UsageError("route-free needs a star graph with an even number of leaves")
    p = _pairing(args.pairing, t)
    s = star_fourier_protocol(t.n_l, p)
    u = evolve_modes(s)
    ok_raw, phases = verify_routing(u, p)
    corr = phase_correct(u, p) if ok_raw else None
    u_full = evolve_modes(corr, t.n) @ u if corr else u
    ok, phases_after = verify_routing(u_full, p)
    ok = ok and all(abs(ph - 1) <= 1e-8 for ph in phases_after)
    payload = {
        "config": _config(args, pairing=format_cycles(p)),
        "n_per_side": t.n_l,
        "protocol_time": s.total_time,
        "correction_time": corr.total_time if corr else None,
        "total_time": s.total_time + (corr.total_time if corr else 0.0),
        "max_column_leak": column_leak(u_full, p),
        "routed": ok,
        "phases_before_correction": phases,
        "schedule": (s + corr).to_json_obj() if (corr and args.schedule) else None,
    }
    rows = [{"site": i, "destination": p(i), "phase_re": ph.real, "phase_im": ph.imag} for i, ph in enumerate(phases)]
    _emit(args, payload, rows)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_route_swap(args) -> int:
    if args.sweep:
        rows = routing_comparison(args.sweep)
        slope = loglog_slope([r["N"] for r in rows], [r["swap_depth"] for r in rows])
        free = loglog_slope([r["N"] for r in rows], [r["free_time"] for r in rows])
        _emit(args, {"config": _config(args, sweep=args.sweep), "rows": rows, "depth_slope": slope, "free_time_slope": free}, rows)
        return EXIT_OK
    t = _graph(args)
    if not is_star(t):
        raise UsageError("route-swap needs a star graph")
    p = _pairing(args.pairing, t)
    circ = route_star(p, t.n - 1)
    ok = apply_circuit_labels(circ, list(range(t.n))) == list(p.images)
    payload = {
        "config": _config(args, pairing=format_cycles(p)),
        "depth": circ.depth,
        "layers": circ.to_json_obj(),
        "verified": ok,
    }
    rows = [{"layer": k, "i": a, "j": b} for k, layer in enumerate(circ.layers) for a, b in layer]
    _emit(args, payload, rows)
    return EXIT_OK if ok else EXIT_FAIL


def _summarize(records: list[dict]) -> dict:
    fails = [r["case"] for r in records if not r["passed"]]
    return {"cases": len(records), "violations": len(fails), "failed_cases": fails}


def cmd_verify(args) -> int:
    which = args.which
    extra: dict = {}
    if which == "fannes":
        records = witnesses.fannes_suite(args.trials, args.seed)
    elif which == "trotter":
        t = _graph(args, "star:4")
        records, slope = witnesses.trotter_suite(t, args.k, args.t, args.M, args.seed)
        target = -2 * args.k
        ok = abs(slope - target) <= 0.2
        extra = {"m_slope": slope, "target_slope": target, "passed": ok}
        _emit(args, {"config": _config(args, k=args.k, t=args.t, M=args.M), "rows": records, **extra}, records)
        return EXIT_OK if ok else EXIT_FAIL
    else:
        default = {"ste": "star:6", "sie": "star:6", "circuit-distance": "star:6", "commutator": "star:8"}[which]
        t = _graph(args, default)
        if which == "ste":
            records = witnesses.ste_suite(t, args.trials, args.seed)
        elif which == "sie":
            records = witnesses.sie_suite(t, args.trials, args.seed)
        elif which == "circuit-distance":
            records = witnesses.circuit_distance_suite(t, args.trials, args.seed)
        else:
            n = args.samples or args.trials
            records = witnesses.commutator_suite(t, n, args.seed, bound=args.bound)
            extra = {"bound": args.bound, "max_ratio": max(r["ratio"] for r in records)}
    summary = _summarize(records)
    _emit(args, {"config": _config(args, which=which), **summary, **extra, "records": records}, records)
    return EXIT_OK if summary["violations"] == 0 else EXIT_FAIL


def cmd_capacity(args) -> int:
    t = _graph(args, "star:6")
    res = capacity_experiment(t, trials=args.trials, time=args.time, seed=args.seed)
    tails = res.tail_fractions(args.gammas, args.time)
    monotone = all(a >= b for a, b in zip(tails, tails[1:]))
    payload = {
        "config": _config(args, time=args.time, gammas=args.gammas),
        "mean_delta_s_l": res.mean_delta_s_l,
        "reference": res.reference,
        "ratio": res.mean_delta_s_l / res.reference if res.reference else None,
        "tail": [{"gamma": g, "fraction": f} for g, f in zip(args.gammas, tails)],
        "tail_non_increasing": monotone,
    }
    rows = [{"trial": i, "delta_s_l": v} for i, v in enumerate(res.values)]
    _emit(args, payload, rows)
    return EXIT_OK if monotone else EXIT_FAIL


def cmd_ghz(args) -> int:
    rows = []
    for n in args.n:
        r = ghz_fast_entangling(n)
        rows.append(
            {
                "N": n,
                "time": r.time,
                "fidelity": r.fidelity,
                "entropy_gain": r.entropy_after - r.entropy_before,
                "average_rate": r.average_rate,
                "rate_n_over_pi": n / math.pi,
            }
        )
    ok = all(r["fidelity"] >= 1 - 1e-9 for r in rows)
    _emit(args, {"config": {"n": args.n}, "rows": rows, "passed": ok}, rows)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_bounds(args) -> int:
    t = _graph(args)
    require_bottleneck(t)
    reports = [
        gate_based_free_bound(t).as_dict(),
        hamiltonian_free_bound(t).as_dict(),
        routing_threshold_report(t, args.delta).as_dict(),
    ]
    rows = [
        {"name": r["name"], "value": r["value"], "units": r["units"], "constant_known": r["constant_known"]}
        for r in reports
    ]
    _emit(args, {"config": {"graph": args.graph, "delta": args.delta}, "reports": reports}, rows)
    return EXIT_OK


def cmd_dicke(args) -> int:
    rows = [dicke_occupancy_report(n) for n in args.n]
    bf = [r["brute_force"] for r in rows]
    monotone = all(b > a for a, b in zip(bf, bf[1:]))
    _emit(args, {"config": {"n": args.n}, "rows": rows, "monotone": monotone}, rows)
    return EXIT_OK if monotone else EXIT_FAIL


def cmd_beamsplitter(args) -> int:
    rows = []
    for n in args.n:
        s = beam_splitter_entropy(n)
        rows.append({"n": n, "entropy_bits": s, "ratio_to_log2_n": s / math.log2(n) if n > 1 else None})
    _emit(args, {"config": {"n": args.n}, "rows": rows}, rows)
    return EXIT_OK


# --- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", help="star:<k>, barbell:<n> or tri:<nl>,<nc>,<nr>:<i-j;...>")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=_positive, default=200)
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    parser = _Parser(prog="qbottleneck", description="Routing and entanglement bounds on bottlenecked graphs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("route-free", parents=[common], help="free-particle Fourier routing on a star")
    p.add_argument("--pairing", default="full", help="'full', p:<images> or c:(<cycle>)...")
    p.add_argument("--sweep", type=_int_list, help="sweep over N per side, e.g. 1,2,4,8")
    p.add_argument("--schedule", action="store_true", help="include the pulse schedule")
    p.set_defaults(func=cmd_route_free)

    p = sub.add_parser("route-swap", parents=[common], help="swap-circuit routing on a star")
    p.add_argument("--pairing", default="full", help="'full', p:<images> or c:(<cycle>)...")
    p.add_argument("--sweep", type=_int_list, help="compare swap depth with protocol time")
    p.set_defaults(func=cmd_route_swap)

    p = sub.add_parser("verify", parents=[common], help="run a seeded witness suite")
    p.add_argument("which", choices=("ste", "sie", "fannes", "circuit-distance", "commutator", "trotter"))
    p.add_argument("--samples", type=_positive, help="sample count (commutator; defaults to --trials)")
    p.add_argument("--bound", choices=("printed", "corrected"), default="printed")
    p.add_argument("--k", type=_positive, default=1)
    p.add_argument("--t", type=float, default=0.5)
    p.add_argument("--M", type=_int_list, default=[1, 2, 4, 8])
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("capacity", parents=[common], help="entangling-capacity experiment")
    p.add_argument("--time", type=float, default=1.0)
    p.add_argument("--gammas", type=_float_list, default=[0.05, 0.1, 0.2, 0.5, 1.0, 2.0])
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("ghz", parents=[common], help="fast GHZ entangling on a star")
    p.add_argument("--n", type=_int_list, default=list(range(2, 9)))
    p.set_defaults(func=cmd_ghz)

    p = sub.add_parser("bounds", parents=[common], help="routing lower-bound calculators")
    p.add_argument("--delta", type=float, default=1 / 3)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("dicke", parents=[common], help="Dicke-state Fourier occupancy")
    p.add_argument("--n", type=_int_list, default=list(range(2, 13, 2)))
    p.set_defaults(func=cmd_dicke)

    p = sub.add_parser("beamsplitter", parents=[common], help="beam-splitter mode entanglement")
    p.add_argument("--n", type=_int_list, default=[2**k for k in range(1, 13)])
    p.set_defaults(func=cmd_beamsplitter)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.command_name = args.command + (f" {args.which}" if args.command == "verify" else "")
    try:
        return args.func(args)
    except (UsageError, GraphSpecError, PermutationError, ValueError) as exc:
        print(f"qbottleneck: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
