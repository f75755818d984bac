"""Command line front end.

Subcommands wrap the library with JSON persistence so batch runs are
reproducible: identical invocations emit byte-identical JSON (keys are
always sorted).  Exit codes are part of the contract: 0 success, 1
malformed input, 2 indeterminate arithmetic, 3 no common tail.
"""

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import bratteli as bratteli_mod
from .cf import (
    Expansion,
    detect_period,
    expansion_from_json,
    expansion_to_json,
    jpa_expand,
)
from .errors import (
    BudgetExceeded,
    IndeterminateFloor,
    InvalidGenus,
    JperronError,
    MalformedInput,
    NoCommonTail,
)
from .lattices import genus_rank
from .representation import (
    build_representation,
    job_from_json,
    representation_to_json,
    verify,
)
from .scalars import vector_from_json

EXIT_OK = 0
EXIT_MALFORMED = 1
EXIT_INDETERMINATE = 2
EXIT_NO_COMMON_TAIL = 3


def _emit(obj, stream=None):
    stream = stream or sys.stdout
    stream.write(json.dumps(obj, sort_keys=True) + "\n")


def _error(kind, message, position=None):
    payload = {"error": kind, "message": message}
    if position is not None:
        payload["position"] = position
    sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")


def _load_json(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(str(exc), position=exc.pos) from exc


def _read_input(args):
    if getattr(args, "theta", None):
        return _load_json(args.theta)
    if getattr(args, "input", None):
        if args.input == "-":
            return _load_json(sys.stdin.read())
        with open(args.input, "r", encoding="utf-8") as fh:
            return _load_json(fh.read())
    raise MalformedInput("no input given: use --theta or --input")


def _coerce_entry(entry, mode):
    if isinstance(entry, bool):
        raise MalformedInput("booleans are not scalars")
    if isinstance(entry, (int, float, str)):
        try:
            value = Fraction(str(entry))
        except (ValueError, ZeroDivisionError) as exc:
            raise MalformedInput("cannot read %r as a number" % (entry,)) from exc
        pair = [value.numerator, value.denominator]
        if mode == "interval":
            return {"ivl": {"lo": pair, "hi": pair}}
        return {"rat": pair}
    return entry


def _theta_from_obj(obj, mode):
    if not isinstance(obj, list):
        raise MalformedInput("theta must be a JSON array")
    return vector_from_json([_coerce_entry(e, mode) for e in obj])


def _looks_like_scalar(obj):
    if isinstance(obj, dict):
        return True
    if isinstance(obj, (int, float, str)):
        return True
    if (
        isinstance(obj, list)
        and len(obj) == 2
        and isinstance(obj[0], str)
    ):
        return True
    return False


def _expand_one(theta_obj, mode, depth, pre_budget, per_budget):
    theta = _theta_from_obj(theta_obj, mode)
    if depth < 0:
        raise MalformedInput("depth must be non-negative")
    exact = all(e.is_exact() for e in theta.entries)
    if exact and pre_budget > 0 and per_budget > 0:
        verdict = detect_period(theta, pre_budget, per_budget)
        if verdict.is_periodic:
            certified = verdict.expansion
            return Expansion(
                rank=certified.rank,
                blocks=tuple(certified.realize(max(depth, certified.depth))),
                tail=certified.tail,
                theta=certified.theta,
            )
        if verdict.kind == "terminated" and verdict.expansion is not None:
            exp = verdict.expansion
            if exp.depth <= depth:
                return exp
    return jpa_expand(theta, depth)


def _expand_job(payload):
    theta_obj, mode, depth, pre_budget, per_budget = payload
    exp = _expand_one(theta_obj, mode, depth, pre_budget, per_budget)
    return expansion_to_json(exp)


def cmd_expand(args):
    obj = _read_input(args)
    if isinstance(obj, dict) and "theta" in obj:
        obj = obj["theta"]
    if isinstance(obj, list) and obj and all(isinstance(e, list) and not _looks_like_scalar(e) for e in obj):
        jobs = [
            (item, args.mode, args.depth, args.budget_preperiod, args.budget_period)
            for item in obj
        ]
        if args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                results = list(pool.map(_expand_job, jobs))
        else:
            results = [_expand_job(j) for j in jobs]
        _emit(results)
        return EXIT_OK
    exp = _expand_one(
        obj, args.mode, args.depth, args.budget_preperiod, args.budget_period
    )
    payload = expansion_to_json(exp)
    if args.format == "text":
        print("rank %d, depth %d, tail %s" % (exp.rank, exp.depth, exp.tail.kind))
        print("blocks: %s" % (payload["blocks"],))
    else:
        _emit(payload)
    return EXIT_OK


def cmd_bratteli(args):
    if args.compare:
        decisions = []
        exps = []
        for path in args.compare:
            with open(path, "r", encoding="utf-8") as fh:
                exps.append(expansion_from_json(_load_json(fh.read())))
        decision = bratteli_mod.tail_equivalent(
            exps[0], exps[1], depth_budget=args.budget_preperiod
        )
        payload = {
            "verdict": decision.verdict,
            "offsets": list(decision.offsets) if decision.offsets else None,
            "compared_depth": decision.compared_depth,
            "certified": decision.certified,
            "note": decision.note,
        }
        if args.format == "text":
            offs = (
                "offsets %s/%s" % tuple(decision.offsets)
                if decision.offsets
                else "no offsets"
            )
            print("%s, %s" % (decision.verdict.replace("_", " "), offs))
        else:
            _emit(payload)
        return EXIT_OK
    obj = _read_input(args)
    exp = expansion_from_json(obj)
    diag = bratteli_mod.build_diagram(exp)
    if args.format == "dot":
        sys.stdout.write(bratteli_mod.to_dot(diag, depth=args.depth))
    elif args.format == "text":
        st = bratteli_mod.is_stationary(exp)
        print(
            "rank %d, %d levels, tail %s, stationary: %s"
            % (diag.rank, diag.depth, exp.tail.kind, bool(st))
        )
    else:
        _emit(bratteli_mod.diagram_to_json(diag))
    return EXIT_OK


def cmd_represent(args):
    obj = _read_input(args)
    if isinstance(obj, dict) and "generators" in obj:
        theta, actions, relations = job_from_json(obj)
    elif isinstance(obj, dict) and "blocks" in obj:
        exp = expansion_from_json(obj)
        if exp.theta is None:
            raise MalformedInput("expansion input carries no theta vector")
        theta, actions, relations = exp.theta, [], []
    else:
        theta, actions, relations = job_from_json(obj)
    rep = build_representation(theta, actions, depth_budget=args.depth)
    report = verify(
        rep, relations=relations, aperiodicity_budget=args.budget_period
    )
    payload = representation_to_json(rep)
    payload["report"] = report.to_json()
    if args.format == "text":
        print(
            "rank %d, certification %s, faithfulness %s"
            % (rep.rank, rep.certification, report.faithfulness)
        )
        for name, m in sorted(rep.matrices.items()):
            print("%s: %s" % (name, m))
        for entry in report.entries:
            mark = "ok" if entry.ok else "FLAG"
            print(
                "[%s] %s%s: %s"
                % (
                    mark,
                    entry.kind,
                    " (%s)" % entry.generator if entry.generator else "",
                    entry.message,
                )
            )
    else:
        _emit(payload)
    return EXIT_OK


def cmd_genus(args):
    rank = genus_rank(args.g)
    if args.format == "text":
        print(rank)
    else:
        _emit({"genus": args.g, "rank": rank})
    return EXIT_OK


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="jperron",
        description="Exact Jacobi-Perron expansions, Bratteli diagrams and "
        "unimodular representations of groups acting on expansion vectors.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_theta=True):
        if with_theta:
            p.add_argument("--theta", help="inline JSON array for the input vector")
        p.add_argument("--input", help="input file path, or - for stdin")
        p.add_argument(
            "--mode",
            choices=["rational", "algebraic", "interval"],
            default="rational",
            help="how bare numbers in the input are read",
        )
        p.add_argument("--format", choices=["json", "dot", "text"], default="json")
        p.add_argument("--depth", type=int, default=24)
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--budget-preperiod", type=int, default=16)
        p.add_argument("--budget-period", type=int, default=16)

    p_expand = sub.add_parser("expand", help="Jacobi-Perron expansion of a vector")
    common(p_expand)
    p_expand.set_defaults(func=cmd_expand)

    p_brat = sub.add_parser("bratteli", help="diagram export and tail comparison")
    common(p_brat)
    p_brat.add_argument(
        "--compare", nargs=2, metavar=("A", "B"), help="two expansion JSON files"
    )
    p_brat.set_defaults(func=cmd_bratteli)

    p_rep = sub.add_parser("represent", help="build and audit a representation")
    common(p_rep)
    p_rep.set_defaults(func=cmd_represent)

    p_genus = sub.add_parser("genus", help="coordinate rank of a genus-g surface")
    p_genus.add_argument("g", type=int)
    p_genus.add_argument("--format", choices=["json", "text"], default="json")
    p_genus.set_defaults(func=cmd_genus)
    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MalformedInput as exc:
        _error("parse", str(exc), getattr(exc, "position", None))
        return EXIT_MALFORMED
    except (IndeterminateFloor, BudgetExceeded) as exc:
        _error("indeterminate", str(exc))
        return EXIT_INDETERMINATE
    except NoCommonTail as exc:
        _error("no_common_tail", str(exc))
        return EXIT_NO_COMMON_TAIL
    except InvalidGenus as exc:
        _error("invalid_genus", str(exc))
        return EXIT_MALFORMED
    except (JperronError, OSError) as exc:
        _error("error", str(exc))
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())
