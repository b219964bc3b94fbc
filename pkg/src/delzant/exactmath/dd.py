"""Double description method over the integers.

Computes the extreme rays of a pointed cone ``{y : A y <= 0}``. Used for
polytope vertex enumeration (on the homogenized cone), facet enumeration from
points, cone facets and cone intersections.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd, lcm

from ..cancel import check
from ..errors import DimensionMismatch
from .linalg import as_fraction, inverse, nullspace, rank, rref


def _int_row(row):
    row = [as_fraction(x) for x in row]
    den = reduce(lcm, (x.denominator for x in row), 1)
    ints = [int(x * den) for x in row]
    g = reduce(gcd, ints, 0)
    return tuple(x // g for x in ints) if g else tuple(ints)


def _prim(v):
    g = reduce(gcd, v, 0)
    return tuple(x // g for x in v) if g else tuple(v)


def _idot(a, b):
    return sum(x * y for x, y in zip(a, b))


def extreme_rays(A, dim=None, token=None) -> list:
    """Primitive integer extreme rays of ``{y : A y <= 0}``, sorted.

    The cone must be pointed, i.e. ``A`` must have full column rank.
    """
    rows = [_int_row(r) for r in A]
    if dim is None:
        if not rows:
            raise DimensionMismatch("cannot infer dimension of an empty system")
        dim = len(rows[0])
    if any(len(r) != dim for r in rows):
        raise DimensionMismatch("ragged constraint matrix")
    rows = [r for r in rows if any(r)]
    # greedy choice of an initial basis of rows
    basis = []
    for i, r in enumerate(rows):
        if rank([rows[j] for j in basis] + [r]) > len(basis):
            basis.append(i)
            if len(basis) == dim:
                break
    if len(basis) < dim:
        raise DimensionMismatch("cone is not pointed (constraint matrix lacks full column rank)")
    Binv = inverse([rows[i] for i in basis])
    rays = []
    for j in range(dim):
        col = [-Binv[r][j] for r in range(dim)]
        den = reduce(lcm, (x.denominator for x in col), 1)
        v = _prim([int(x * den) for x in col])
        # zero set: basis rows other than j
        z = 0
        for k, i in enumerate(basis):
            if k != j:
                z |= 1 << i
        rays.append((v, z))
    done = set(basis)
    for i, a in enumerate(rows):
        if i in done:
            continue
        check(token)
        bit = 1 << i
        pos, neg, keep = [], [], []
        for v, z in rays:
            s = _idot(a, v)
            if s > 0:
                pos.append((v, z, s))
            elif s < 0:
                neg.append((v, z, s))
                keep.append((v, z))
            else:
                keep.append((v, z | bit))
        if pos:
            new = []
            all_z = [z for _, z in rays]
            for p, zp, sp in pos:
                for q, zq, sq in neg:
                    common = zp & zq
                    if bin(common).count("1") < dim - 2:
                        continue
                    adjacent = True
                    for z in all_z:
                        if z != zp and z != zq and (z & common) == common:
                            adjacent = False
                            break
                    if not adjacent:
                        continue
                    v = _prim(tuple(sp * y - sq * x for x, y in zip(p, q)))
                    new.append((v, common | bit))
            rays = keep + new
        else:
            rays = [(v, z | bit if _idot(a, v) == 0 else z) for v, z in rays]
        done.add(i)
    return sorted({v for v, _ in rays})


def integer_basis_of_span(vectors) -> list:
    """A rational basis (scaled to primitive integer vectors) of the linear span."""
    R, pivots = rref([list(v) for v in vectors])
    return [_int_row(row) for row in R]


def cone_hrep(generators):
    """Inward facet normals and equalities of ``Cone(generators)``.

    Returns ``(equalities, inequalities)`` with the cone equal to
    ``{x : e.x = 0 for e in equalities, n.x >= 0 for n in inequalities}``.
    Inequalities are primitive integer vectors lying in the span of the cone.
    """
    eqs, ineqs = _cone_hrep(tuple(tuple(int(x) for x in g) for g in generators))
    return list(eqs), list(ineqs)


@lru_cache(maxsize=1 << 16)
def _cone_hrep(gens):
    gens = list(gens)
    n = len(gens[0])
    eqs = [_int_row(v) for v in nullspace(gens, n)] if gens else []
    span = integer_basis_of_span(gens)
    r = len(span)
    if r == 0:
        return tuple(eqs), ()
    if r == 1:
        return tuple(eqs), (span[0] if _idot(span[0], gens[0]) > 0 else tuple(-x for x in span[0]),)
    # polar cone inside the span: y = sum c_j u_j with g.y <= 0
    M = [[_idot(g, u) for u in span] for g in gens]
    polar = extreme_rays(M, dim=r)
    ineqs = []
    for c in polar:
        y = tuple(sum(c[j] * span[j][t] for j in range(r)) for t in range(n))
        ineqs.append(_prim(tuple(-x for x in y)))
    return tuple(eqs), tuple(sorted(set(ineqs)))


def in_cone_hrep(hrep, x) -> bool:
    eqs, ineqs = hrep
    return all(_idot(e, x) == 0 for e in eqs) and all(_idot(a, x) >= 0 for a in ineqs)
