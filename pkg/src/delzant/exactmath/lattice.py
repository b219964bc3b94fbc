"""Smith normal form and lattice points of half-open parallelepipeds."""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import floor, prod

from ..errors import DependentGenerators, DimensionMismatch
from .linalg import as_int_vector, identity


def smith_normal_form(M):
    """Return ``(D, S, T)`` with ``S @ M @ T == D`` diagonal, S and T unimodular.

    Diagonal entries are nonnegative and each divides the next.
    """
    A = [list(row) for row in M]
    m = len(A)
    k = len(A[0]) if m else 0
    S = identity(m)
    T = identity(k)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        S[i], S[j] = S[j], S[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in T:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        A[dst] = [x + q * y for x, y in zip(A[dst], A[src])]
        S[dst] = [x + q * y for x, y in zip(S[dst], S[src])]

    def add_col(dst, src, q):
        for row in A:
            row[dst] += q * row[src]
        for row in T:
            row[dst] += q * row[src]

    for t in range(min(m, k)):
        while True:
            entries = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, k) if A[i][j]]
            if not entries:
                break
            _, i, j = min(entries)
            swap_rows(t, i)
            swap_cols(t, j)
            clean = True
            for i in range(t + 1, m):
                q = A[i][t] // A[t][t]
                if q:
                    add_row(i, t, -q)
                clean &= A[i][t] == 0
            for j in range(t + 1, k):
                q = A[t][j] // A[t][t]
                if q:
                    add_col(j, t, -q)
                clean &= A[t][j] == 0
            if not clean:
                continue
            bad = next((i for i in range(t + 1, m) for j in range(t + 1, k)
                        if A[i][j] % A[t][t]), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            S[t] = [-x for x in S[t]]
    return A, S, T


def _check_generators(generators):
    gens = [as_int_vector(g) for g in generators]
    if not gens:
        raise DependentGenerators("empty generator list")
    n = len(gens[0])
    if any(len(g) != n for g in gens):
        raise DimensionMismatch("generators of different dimensions")
    return gens, n


def multiplicity(generators) -> int:
    """Index of the sublattice spanned by ``generators`` in its saturation."""
    gens, n = _check_generators(generators)
    M = [[g[r] for g in gens] for r in range(n)]
    D, _, _ = smith_normal_form(M)
    diag = [D[i][i] for i in range(min(n, len(gens)))]
    if len(gens) > n or any(d == 0 for d in diag):
        raise DependentGenerators("generators are linearly dependent")
    return prod(diag)


def halfopen_parallelepiped_points(generators) -> list:
    """Lattice points of sum_i [0,1) * g_i inside the saturated lattice of the span.

    The count equals the multiplicity of the cone spanned by the generators;
    the origin is always included. Output is sorted lexicographically.
    """
    gens, n = _check_generators(generators)
    k = len(gens)
    M = [[g[r] for g in gens] for r in range(n)]
    D, _, T = smith_normal_form(M)
    if k > n:
        raise DependentGenerators("more generators than the ambient dimension")
    diag = [D[i][i] for i in range(k)]
    if any(d == 0 for d in diag):
        raise DependentGenerators("generators are linearly dependent")
    points = set()
    for z in product(*(range(d) for d in diag)):
        # coefficients of the coset representative with respect to the generators
        lam = [sum(Fraction(T[i][j] * z[j], diag[j]) for j in range(k)) for i in range(k)]
        frac = [x - floor(x) for x in lam]
        p = tuple(sum(frac[i] * gens[i][r] for i in range(k)) for r in range(n))
        assert all(x.denominator == 1 for x in p)
        points.add(tuple(int(x) for x in p))
    return sorted(points)


def parallelepiped_coefficients(generators, point) -> tuple:
    """Coefficients of ``point`` in the basis ``generators`` (must lie in their span)."""
    from .linalg import solve_linear_system
    gens = [as_int_vector(g) for g in generators]
    n = len(gens[0])
    A = [[g[r] for g in gens] for r in range(n)]
    sol = solve_linear_system(A, list(point))
    if sol is None:
        raise DependentGenerators("point not in the span of independent generators")
    return sol
