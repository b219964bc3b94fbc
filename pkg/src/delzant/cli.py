"""Command-line front end: one JSON object per invocation on stdout.

Exit codes: 0 success, 1 domain error (error object on stdout), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from fractions import Fraction

from . import jsonio
from .constructions import CONSTRUCTION_NAMES, NonlocalInstance, construct, run_corpus
from .desingularize import desingularize
from .errors import DelzantError
from .exactmath.linalg import as_fraction
from .fan import (
    Fan,
    apply_blow_down,
    blow_up,
    config_cone,
    fan_properties,
    find_blow_downs,
    realize_polytopal,
    refines,
    secondary_cone,
    stratum_info,
)
from .metrics import hausdorff_distance, support_uniform_norm_estimate, symmetric_difference_distance
from .moduli import classify_delzant_polygon, corner_chop, is_delzant, minkowski_path, path_complexity
from .polytope import Polytope, minkowski_combine

log = logging.getLogger("delzant")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def default_seed() -> int:
    raw = os.environ.get("DELZANT_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"DELZANT_SEED must be an integer, got {raw!r}") from None


# input ---------------------------------------------------------------------


def _load(source: str):
    """A JSON document from a path, '-' for stdin, or an inline JSON string."""
    try:
        if source == "-":
            return json.load(sys.stdin)
        if source.lstrip().startswith(("{", "[")):
            return json.loads(source)
        with open(source) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {source}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON in {source}: {exc.msg}") from None


def _unwrap(obj, key):
    # accept the output of another subcommand, e.g. {"fan": {...}}
    if isinstance(obj, dict) and key in obj and isinstance(obj[key], dict):
        return obj[key]
    return obj


def _polytope(source, obj=None) -> Polytope:
    obj = _unwrap(_load(source) if obj is None else obj, "polytope")
    if not isinstance(obj, dict) or not ({"facets", "vertices"} & set(obj)):
        raise UsageError(f"{source} does not describe a polytope")
    return jsonio.polytope_from_json(obj)


def _fan(source, obj=None) -> Fan:
    obj = _unwrap(_load(source) if obj is None else obj, "fan")
    if not isinstance(obj, dict) or "rays" not in obj or "maximal_cones" not in obj:
        raise UsageError(f"{source} does not describe a fan")
    return jsonio.fan_from_json(obj)


def _vector(text: str):
    try:
        return tuple(as_fraction(x) for x in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad vector {text!r}") from None


def _int_list(text: str):
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"bad index list {text!r}") from None


def _rational(text: str) -> Fraction:
    try:
        return as_fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad rational {text!r}") from None


def _params(items):
    out = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"parameter {item!r} is not of the form key=value")
        q = _rational(value)
        out[key] = int(q) if q.denominator == 1 else q
    return out


# commands ------------------------------------------------------------------


def cmd_verify(args):
    obj = _load(args.input)
    if isinstance(obj, dict) and ("rays" in obj or "fan" in obj):
        report = fan_properties(_fan(args.input, obj))
        out = report.to_json()
        out["delzant"] = report.unimodular and report.complete
        return out
    return is_delzant(_polytope(args.input, obj)).to_json()


def cmd_chop(args):
    P = corner_chop(_polytope(args.input), _vector(args.vertex), _rational(args.eps))
    return {"polytope": jsonio.polytope_to_json(P)}


def cmd_blowup(args):
    F = _fan(args.input)
    C = [_vector(v) for v in args.vector] if args.vector else _int_list(args.cone)
    return {"fan": jsonio.fan_to_json(blow_up(F, C))}


def cmd_blowdown(args):
    F = _fan(args.input)
    cands = find_blow_downs(F)
    out = {"candidates": [c.to_json() for c in cands]}
    if args.apply is not None:
        if not 0 <= args.apply < len(cands):
            raise UsageError(f"--apply index out of range (have {len(cands)} candidates)")
        out["fan"] = jsonio.fan_to_json(apply_blow_down(F, cands[args.apply]))
    return out


def cmd_desingularize(args):
    G, trace = desingularize(_fan(args.input))
    return {"fan": jsonio.fan_to_json(G), "trace": trace.to_json()}


def cmd_refinecheck(args):
    return {"refines": refines(_fan(args.fine), _fan(args.coarse))}


def cmd_sum(args):
    P, Q = _polytope(args.first), _polytope(args.second)
    S = minkowski_combine(_rational(args.lam), P, _rational(args.mu), Q)
    return {"polytope": jsonio.polytope_to_json(S)}


def cmd_path(args):
    P1, P2 = _polytope(args.first), _polytope(args.second)
    path = minkowski_path(P1, P2, _rational(args.eps))
    samples_ok = all(is_delzant(Q).delzant for _, _, Q in path.sample(args.samples))
    return {
        "breakpoints": [jsonio.polytope_to_json(P) for P in path.breakpoints],
        "segment_fans": [jsonio.fan_to_json(F) for F in path.interior_fans],
        "segment_complexity": list(path.complexities),
        "complexity": path_complexity(path).to_json(),
        "samples_per_segment": args.samples,
        "samples_delzant": samples_ok,
    }


def cmd_distance(args):
    P, Q = _polytope(args.first), _polytope(args.second)
    if args.metric == "hausdorff":
        return hausdorff_distance(P, Q).to_json()
    if args.metric == "symdiff":
        return symmetric_difference_distance(P, Q).to_json()
    value = support_uniform_norm_estimate(P, Q, args.samples)
    return {"metric": "support", "value": value, "squared_exact": None}


def cmd_classify(args):
    return classify_delzant_polygon(_polytope(args.input)).to_json()


def cmd_secondary(args):
    F = _fan(args.input)
    cone = config_cone(F.rays) if args.config else secondary_cone(F)
    if args.irredundant:
        cone = cone.irredundant()
    out = cone.to_json()
    out["kind"] = "config" if args.config else "secondary"
    if not args.config:
        info = stratum_info(F)
        out["stratum"] = {"dimension": info.dimension, "lineality": info.lineality}
    return out


def cmd_realize(args):
    res = realize_polytopal(_fan(args.input))
    if isinstance(res, Polytope):
        return {"polytopal": True, "polytope": jsonio.polytope_to_json(res)}
    return {"polytopal": False, "certificate": [jsonio.encode_rational(x) for x in res.certificate]}


def cmd_construct(args):
    try:
        obj = construct(args.name, **_params(args.param))
    except KeyError:
        raise UsageError(f"unknown construction {args.name!r}") from None
    except TypeError as exc:
        raise UsageError(str(exc)) from None
    if isinstance(obj, Fan):
        return {"name": args.name, "fan": jsonio.fan_to_json(obj)}
    if isinstance(obj, Polytope):
        return {"name": args.name, "polytope": jsonio.polytope_to_json(obj)}
    if isinstance(obj, NonlocalInstance):
        return {
            "name": args.name,
            "P": jsonio.polytope_to_json(obj.P),
            "P_k": jsonio.polytope_to_json(obj.P_k),
            "C_k": [list(v) for v in obj.C_k.generators],
        }
    raise UsageError(f"construction {args.name!r} has no JSON form")


def cmd_corpus(args):
    rows = []
    for item in run_corpus():
        rows.append({
            "name": item.identifier,
            "params": {k: jsonio.encode_scalar(v) for k, v in item.parameters.items()},
            "checks": dict(item.checks),
            "passed": item.passed,
        })
    rows.sort(key=lambda r: (r["name"], json.dumps(r["params"], sort_keys=True)))
    return {"results": rows, "passed": all(r["passed"] for r in rows)}


# parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="delzant", description="Exact computations with Delzant polytopes and unimodular fans.")
    p.add_argument("-v", "--verbose", action="store_true", help="log to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("verify", help="Delzant check for a polytope, or property report for a fan")
    s.add_argument("input")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("chop", help="corner chop at a vertex")
    s.add_argument("input")
    s.add_argument("--vertex", required=True, help="comma separated coordinates")
    s.add_argument("--eps", required=True)
    s.set_defaults(func=cmd_chop)

    s = sub.add_parser("blowup", help="blow up a unimodular cone of a fan")
    s.add_argument("input")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--cone", help="comma separated ray indices")
    g.add_argument("--vector", action="append", help="cone generator, repeatable")
    s.set_defaults(func=cmd_blowup)

    s = sub.add_parser("blowdown", help="list blow-downs, optionally apply one")
    s.add_argument("input")
    s.add_argument("--apply", type=int, default=None, help="index of the candidate to apply")
    s.set_defaults(func=cmd_blowdown)

    s = sub.add_parser("desingularize", help="unimodular refinement with its trace")
    s.add_argument("input")
    s.set_defaults(func=cmd_desingularize)

    s = sub.add_parser("refinecheck", help="does FINE refine COARSE")
    s.add_argument("fine")
    s.add_argument("coarse")
    s.set_defaults(func=cmd_refinecheck)

    s = sub.add_parser("sum", help="Minkowski combination lam*P + mu*Q")
    s.add_argument("first")
    s.add_argument("second")
    s.add_argument("--lam", default="1")
    s.add_argument("--mu", default="1")
    s.set_defaults(func=cmd_sum)

    s = sub.add_parser("path", help="Minkowski path between Delzant polytopes")
    s.add_argument("first")
    s.add_argument("second")
    s.add_argument("--eps", default="1/2")
    s.add_argument("--samples", type=int, default=21)
    s.set_defaults(func=cmd_path)

    s = sub.add_parser("distance", help="distance between polytopes")
    s.add_argument("first")
    s.add_argument("second")
    s.add_argument("--metric", choices=("hausdorff", "symdiff", "support"), default="hausdorff")
    s.add_argument("--samples", type=int, default=10000)
    s.set_defaults(func=cmd_distance)

    s = sub.add_parser("classify", help="normal form of a Delzant polygon")
    s.add_argument("input")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("secondary", help="secondary cone of a fan")
    s.add_argument("input")
    s.add_argument("--config", action="store_true", help="configuration cone of the rays instead")
    s.add_argument("--irredundant", action="store_true")
    s.set_defaults(func=cmd_secondary)

    s = sub.add_parser("realize", help="polytope with the given normal fan, or a certificate")
    s.add_argument("input")
    s.set_defaults(func=cmd_realize)

    s = sub.add_parser("construct", help="named construction")
    s.add_argument("name", choices=CONSTRUCTION_NAMES)
    s.add_argument("--param", action="append", help="key=value, repeatable")
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("corpus", help="run every construction checklist")
    s.set_defaults(func=cmd_corpus)
    return p


def _emit(obj, stream=None):
    stream = stream or sys.stdout
    stream.write(json.dumps(obj, sort_keys=True) + "\n")


def main(argv=None) -> int:
    try:
        seed = default_seed()
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        _emit({"error": "usage", "message": str(exc)})
        return 2
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
    log.info("running %s with seed %d", args.command, seed)
    try:
        out = args.func(args)
    except UsageError as exc:
        _emit({"error": "usage", "message": str(exc), "seed": seed})
        return 2
    except DelzantError as exc:
        err = exc.to_json()
        err["seed"] = seed
        _emit(err)
        return 1
    out["seed"] = seed
    _emit(out)
    if args.command == "corpus" and not out["passed"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
