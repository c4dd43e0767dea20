"""Command-line surface.

Subcommands: gen, solve, cost, approx, estimate, sample-lemma, experiment.
Exit codes: 0 success, 1 usage error, 2 infeasible instance, 3 oracle limit.
"""

from __future__ import annotations

import argparse
import sys

from .approx import merge_approx
from .estimator import estimate_opt, estimate_opt_unknown_cmax, multicover_estimate
from .harness import (StreamOrder, order_stream, parse_config, run_experiment,
                      verdict_token, write_report)
from .hard_instances import GENERATORS, ParameterError, nearest_valid_params
from .instances import CoveringInstance, SetSystem, set_system_to_ilp
from .io import ParseError, read_instance, write_instance, write_metadata
from .oracle import (DEFAULT_COLUMN_LIMIT, INF, InfeasibleError,
                     OracleLimitError, exact_opt, streaming_cost)
from .sampling import sampling_rate, sampling_trials
from .estimator import binarize
from .instances import VariableKind

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_ORACLE_LIMIT = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _load_ilp(path) -> CoveringInstance:
    obj = read_instance(path)
    inst = set_system_to_ilp(obj) if isinstance(obj, SetSystem) else obj
    if inst.variable_kind is VariableKind.INTEGER:
        inst = binarize(inst)
    return inst


def _stream(inst: CoveringInstance, order_mode: str, seed: int):
    order = (StreamOrder("arbitrary") if order_mode == "arbitrary"
             else StreamOrder("random", seed))
    return order_stream(inst.events(), order)


def _cmd_gen(args) -> int:
    gen = GENERATORS[args.dist]
    try:
        hard = gen(args.n, args.m, args.alpha, args.seed)
    except ParameterError as exc:
        n2, m2, a2 = nearest_valid_params(args.dist, args.n, args.m, args.alpha)
        print(f"error: {exc}", file=sys.stderr)
        print(f"hint: nearest valid parameters are --n {n2} --m {m2} --alpha {a2}",
              file=sys.stderr)
        return EXIT_USAGE
    write_instance(hard.system, args.out)
    if args.meta:
        write_metadata(hard.meta, args.meta)
    print(f"wrote {hard.system.m} sets over [{hard.system.n}] to {args.out}")
    return EXIT_OK


def _cmd_solve(args) -> int:
    obj = read_instance(args.input)
    inst = set_system_to_ilp(obj) if isinstance(obj, SetSystem) else obj
    value, x = exact_opt(inst, args.limit)
    if x is None:
        print("infeasible")
        return EXIT_INFEASIBLE
    chosen = [i for i, xi in enumerate(x) if xi]
    print(f"opt {value}")
    print("x " + " ".join(f"{i}:{x[i]}" for i in chosen))
    return EXIT_OK


def _cmd_cost(args) -> int:
    inst = _load_ilp(args.input)
    value = streaming_cost(inst.events(), inst.b, inst.variable_kind)
    if value == INF:
        print("infeasible")
        return EXIT_INFEASIBLE
    print(f"cost {value}")
    return EXIT_OK


def _cmd_approx(args) -> int:
    obj = read_instance(args.input)
    if isinstance(obj, SetSystem):
        if obj.weights is not None and any(w != 1 for w in obj.weights):
            print("error: approx expects an unweighted set system", file=sys.stderr)
            return EXIT_USAGE
        inst = set_system_to_ilp(SetSystem(obj.n, obj.sets))
    else:
        inst = obj
        if inst.b_max > 1:
            print("error: approx expects unit demands (set cover)", file=sys.stderr)
            return EXIT_USAGE
    events = _stream(inst, args.order, args.seed)
    cert = merge_approx(events, inst.n, args.alpha, limit=args.limit)
    print(f"size {len(cert.chosen)}")
    print("chosen " + " ".join(str(i) for i in cert.chosen))
    print("witness " + " ".join(f"{e}:{cert.witness[e]}"
                                for e in sorted(cert.witness)))
    return EXIT_OK


def _cmd_estimate(args) -> int:
    inst = _load_ilp(args.input)
    events = _stream(inst, args.order, args.seed)
    if args.multicover:
        rep = multicover_estimate(events, inst.n, inst.b, args.alpha, args.seed,
                                  limit=args.limit)
        print("estimate,alpha,seed,pruned,opt_tester,space_bits")
        print(f"{rep.estimate},{args.alpha},{args.seed},{rep.pruned_count},"
              f"{rep.opt_tester},{rep.space_bits}")
        return EXIT_OK
    if args.unknown_cmax:
        rep = estimate_opt_unknown_cmax(events, inst.n, inst.b, args.alpha,
                                        args.seed, limit=args.limit)
    else:
        c_max = args.cmax if args.cmax is not None else inst.c_max
        rep = estimate_opt(events, inst.n, inst.b, args.alpha, c_max, args.seed,
                           boost_copies=args.boost, limit=args.limit)
    print("estimate,k_star,cost,alpha,seed,mode,boost,space_bits")
    print(f"{rep.estimate},{rep.k_star},{rep.cost_value},{args.alpha},"
          f"{args.seed},{rep.mode},{rep.boost_copies},{rep.space_bits}")
    if args.emit_verdicts:
        print("verdicts " + verdict_token(rep))
    return EXIT_OK


def _cmd_sample_lemma(args) -> int:
    inst = _load_ilp(args.input)
    p = sampling_rate(inst.n, args.alpha)
    if p > 1.0:
        print(f"error: sampling rate {p:.3f} exceeds 1; increase alpha",
              file=sys.stderr)
        return EXIT_USAGE
    print("trial,kept_rows,opt_sampled,cost_full,opt_full,event_held")
    held = 0
    total = 0
    for t, out in enumerate(sampling_trials(inst, args.alpha, args.trials,
                                            args.seed, limit=args.limit)):
        held += out.event_held
        total += 1
        print(f"{t},{len(out.sampled_rows)},{out.opt_sampled},{out.cost_full},"
              f"{out.opt_full},{int(out.event_held)}")
    print(f"summary frequency={held / total if total else 1.0:.4f} "
          f"trials={total} p={p:.4f}")
    return EXIT_OK


def _cmd_experiment(args) -> int:
    cfg = parse_config(args.config)
    rows = run_experiment(cfg)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            write_report(rows, fh)
        print(f"wrote {len(rows)} rows to {args.out}")
    else:
        write_report(rows, sys.stdout)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="covstream",
                     description="Streaming set cover / covering-ILP toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate an adversarial instance")
    p.add_argument("--dist", required=True, choices=sorted(GENERATORS))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--alpha", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--meta", help="write hidden labels to this separate file")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("solve", help="exact offline optimum")
    p.add_argument("--input", required=True)
    p.add_argument("--limit", type=int, default=DEFAULT_COLUMN_LIMIT)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("cost", help="one-pass instance cost")
    p.add_argument("--input", required=True)
    p.set_defaults(func=_cmd_cost)

    p = sub.add_parser("approx", help="merge-based covering approximation")
    p.add_argument("--alpha", type=int, required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--order", choices=["arbitrary", "random"], default="arbitrary")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--limit", type=int, default=DEFAULT_COLUMN_LIMIT)
    p.set_defaults(func=_cmd_approx)

    p = sub.add_parser("estimate", help="one-pass optimum estimation")
    p.add_argument("--alpha", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--cmax", type=int,
                       help="declared maximum weight (default: scan the input)")
    group.add_argument("--unknown-cmax", action="store_true")
    p.add_argument("--boost", type=int)
    p.add_argument("--multicover", action="store_true")
    p.add_argument("--input", required=True)
    p.add_argument("--order", choices=["arbitrary", "random"], default="arbitrary")
    p.add_argument("--emit-verdicts", action="store_true")
    p.add_argument("--limit", type=int, default=DEFAULT_COLUMN_LIMIT)
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("sample-lemma", help="empirical constraint-sampling check")
    p.add_argument("--alpha", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--limit", type=int, default=DEFAULT_COLUMN_LIMIT)
    p.set_defaults(func=_cmd_sample_lemma)

    p = sub.add_parser("experiment", help="run a batch from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.set_defaults(func=_cmd_experiment)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except OracleLimitError as exc:
        print(f"oracle limit: {exc}", file=sys.stderr)
        return EXIT_ORACLE_LIMIT
    except (ParseError, ParameterError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
