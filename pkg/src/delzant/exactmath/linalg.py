"""Exact rational and integer linear algebra on plain tuples/lists.

Vectors are tuples of ``int`` or ``Fraction``; matrices are sequences of rows.
Nothing here ever touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Optional, Sequence

from ..errors import DimensionMismatch, NoPrimitiveGenerator

Vector = tuple
Matrix = Sequence[Sequence]


def as_fraction(x) -> Fraction:
    """Parse ints, Fractions and "p/q" strings. Floats are rejected."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def as_rational_vector(v) -> tuple:
    return tuple(as_fraction(x) for x in v)


def as_int_vector(v) -> tuple:
    out = []
    for x in v:
        q = as_fraction(x)
        if q.denominator != 1:
            raise ValueError(f"{x!r} is not an integer")
        out.append(int(q))
    return tuple(out)


def dot(u, v):
    if len(u) != len(v):
        raise DimensionMismatch(f"dot of vectors of length {len(u)} and {len(v)}")
    return sum(a * b for a, b in zip(u, v))


def add(u, v):
    if len(u) != len(v):
        raise DimensionMismatch(f"sum of vectors of length {len(u)} and {len(v)}")
    return tuple(a + b for a, b in zip(u, v))


def sub(u, v):
    if len(u) != len(v):
        raise DimensionMismatch(f"difference of vectors of length {len(u)} and {len(v)}")
    return tuple(a - b for a, b in zip(u, v))


def scale(c, v):
    return tuple(c * a for a in v)


def norm2(v):
    return sum(a * a for a in v)


def primitive_vector(v) -> tuple:
    """The unique primitive lattice vector on the ray spanned by ``v``."""
    v = as_int_vector(v)
    g = reduce(gcd, v, 0)
    if g == 0:
        raise NoPrimitiveGenerator("the zero vector has no primitive generator")
    return tuple(a // g for a in v)


def is_primitive(v) -> bool:
    return reduce(gcd, v, 0) == 1


def integerize(v) -> tuple:
    """Primitive integer vector positively parallel to a nonzero rational vector."""
    v = as_rational_vector(v)
    den = reduce(lcm, (x.denominator for x in v), 1)
    return primitive_vector([int(x * den) for x in v])


def transpose(M):
    return [list(col) for col in zip(*M)]


def mat_vec(M, v):
    return tuple(dot(row, v) for row in M)


def mat_mul(A, B):
    Bt = transpose(B)
    return [[dot(row, col) for col in Bt] for row in A]


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def rref(M):
    """Reduced row echelon form over Q. Returns (rows, pivot_columns)."""
    A = [[as_fraction(x) for x in row] for row in M]
    if not A:
        return [], []
    ncols = len(A[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        piv = A[r][c]
        A[r] = [x / piv for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A[:r], pivots


def rank(M) -> int:
    M = [list(row) for row in M]
    if not M:
        return 0
    return len(rref(M)[1])


def nullspace(M, ncols: Optional[int] = None) -> list:
    """Basis of {x : M x = 0} as rational vectors, one per free column."""
    M = [list(row) for row in M]
    if ncols is None:
        ncols = len(M[0]) if M else 0
    if not M:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    R, pivots = rref(M)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, pc in zip(R, pivots):
            x[pc] = -row[f]
        basis.append(tuple(x))
    return basis


def determinant(M):
    """Exact determinant (Bareiss fraction-free elimination for integer input)."""
    n = len(M)
    if any(len(row) != n for row in M):
        raise DimensionMismatch("determinant of a non-square matrix")
    if n == 0:
        return 1
    if all(isinstance(x, int) for row in M for x in row):
        A = [list(row) for row in M]
        sign, prev = 1, 1
        for k in range(n - 1):
            if A[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
                if swap is None:
                    return 0
                A[k], A[swap] = A[swap], A[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
            prev = A[k][k]
        return sign * A[n - 1][n - 1]
    A = [[as_fraction(x) for x in row] for row in M]
    det = Fraction(1)
    for k in range(n):
        p = next((i for i in range(k, n) if A[i][k] != 0), None)
        if p is None:
            return Fraction(0)
        if p != k:
            A[k], A[p] = A[p], A[k]
            det = -det
        det *= A[k][k]
        for i in range(k + 1, n):
            f = A[i][k] / A[k][k]
            if f:
                A[i] = [x - f * y for x, y in zip(A[i], A[k])]
    return det


def lattice_determinant(vectors) -> int:
    """|det| of n integer vectors in Z^n."""
    vectors = [as_int_vector(v) for v in vectors]
    n = len(vectors)
    if any(len(v) != n for v in vectors):
        raise DimensionMismatch("lattice_determinant needs exactly n vectors of dimension n")
    return abs(determinant([list(v) for v in vectors]))


def inverse(M):
    n = len(M)
    aug = [[as_fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(M)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(R) < n:
        raise ValueError("singular matrix")
    return [row[n:] for row in R]


def solve_linear_system(A, b) -> Optional[tuple]:
    """Unique exact solution of ``A x = b`` or None.

    None is returned both for inconsistent systems and for consistent systems
    whose solution is not unique (rank-deficient columns).
    """
    A = [list(row) for row in A]
    if len(A) != len(b):
        raise DimensionMismatch("row count of A differs from length of b")
    if not A:
        return None
    ncols = len(A[0])
    aug = [row + [as_fraction(bi)] for row, bi in zip(A, b)]
    R, pivots = rref(aug)
    if ncols in pivots:
        return None
    if len(pivots) < ncols:
        return None
    x = [Fraction(0)] * ncols
    for row, pc in zip(R, pivots):
        x[pc] = row[ncols]
    return tuple(x)
