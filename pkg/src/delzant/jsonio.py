"""JSON encoding: rationals as "p/q" strings, small integers as numbers."""

from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources

from .errors import UnsupportedInput
from .exactmath.linalg import as_fraction

_INT_LIMIT = 2 ** 53


def encode_int(v: int):
    return v if abs(v) < _INT_LIMIT else str(v)


def encode_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def encode_scalar(x):
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, int):
        return encode_int(x)
    if isinstance(x, Fraction):
        return encode_rational(x)
    if isinstance(x, float):
        return x
    return x


def encode_vector(v):
    return [encode_rational(x) for x in v]


def decode_int(v) -> int:
    q = as_fraction(v)
    if q.denominator != 1:
        raise UnsupportedInput(f"expected an integer, got {v!r}")
    return int(q)


def polytope_to_json(P):
    return {
        "dim": P.dim,
        "facets": [{"normal": [encode_int(x) for x in a], "rhs": encode_rational(b)} for a, b in P.facets],
        "vertices": [encode_vector(v) for v in P.vertices],
    }


def polytope_from_json(obj):
    from .polytope import build_from_halfspaces, build_from_vertices
    if "facets" in obj and obj["facets"]:
        rows = [([decode_int(x) for x in f["normal"]], as_fraction(f["rhs"])) for f in obj["facets"]]
        P = build_from_halfspaces(rows)
    elif "vertices" in obj and obj["vertices"]:
        P = build_from_vertices([[as_fraction(x) for x in v] for v in obj["vertices"]])
    else:
        raise UnsupportedInput("polytope needs facets or vertices")
    if "dim" in obj and obj["dim"] != P.dim:
        raise UnsupportedInput("declared dimension does not match the data")
    return P


def fan_to_json(F):
    return {
        "dim": F.dim,
        "rays": [[encode_int(x) for x in r] for r in F.rays],
        "maximal_cones": [list(c) for c in F.maximal_cones],
    }


def fan_from_json(obj):
    from .fan import Fan
    rays = [[decode_int(x) for x in r] for r in obj["rays"]]
    dim = obj.get("dim", len(rays[0]) if rays else 0)
    return Fan.make(dim, rays, [list(c) for c in obj["maximal_cones"]])


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def load_schema(command: str) -> dict:
    """The JSON schema shipped for a CLI subcommand's output ("error" for failures)."""
    text = resources.files("delzant").joinpath("schemas", f"{command}.json").read_text()
    return json.loads(text)
