"""Exact rational LP feasibility with Farkas/Motzkin certificates.

A problem is a list of rows ``<a_i, x> <= b_i`` (or ``<`` when flagged strict)
over free real variables. The engine answers with either a witness that
satisfies every row exactly, or a nonnegative multiplier vector proving that
no witness exists.

Strict rows are handled by one extra variable ``t``: maximize ``t`` subject to
``<a_i, x> + t <= b_i`` on strict rows and ``t <= 1``. The system is feasible
iff the optimum is positive. Pivoting uses Bland's rule throughout, so runs
are deterministic and always terminate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from ..errors import DimensionMismatch, InternalInconsistency
from .linalg import as_fraction, dot

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class LPProblem:
    A: tuple
    b: tuple
    strict: tuple
    start: Optional[tuple] = None

    @classmethod
    def make(cls, A, b, strict=None, start=None):
        A = tuple(tuple(as_fraction(x) for x in row) for row in A)
        b = tuple(as_fraction(x) for x in b)
        if strict is None:
            strict = (False,) * len(A)
        strict = tuple(bool(s) for s in strict)
        if not (len(A) == len(b) == len(strict)):
            raise DimensionMismatch("A, b and strict flags must have the same length")
        if A and len({len(row) for row in A}) != 1:
            raise DimensionMismatch("ragged constraint matrix")
        if start is not None:
            start = tuple(as_fraction(x) for x in start)
        return cls(A, b, strict, start)

    @property
    def nvars(self) -> int:
        return len(self.A[0]) if self.A else (len(self.start) if self.start else 0)

    def satisfied_by(self, x) -> bool:
        for row, rhs, s in zip(self.A, self.b, self.strict):
            lhs = dot(row, x)
            if lhs > rhs or (s and lhs == rhs):
                return False
        return True

    def certifies_infeasible(self, lam) -> bool:
        """Check a Motzkin certificate: lam >= 0, lam^T A = 0, and either
        lam^T b < 0, or lam^T b == 0 with positive weight on some strict row."""
        if len(lam) != len(self.A) or any(x < 0 for x in lam):
            return False
        for j in range(self.nvars):
            if sum(l * row[j] for l, row in zip(lam, self.A)) != 0:
                return False
        val = dot(lam, self.b)
        if val < 0:
            return True
        return val == 0 and any(l > 0 and s for l, s in zip(lam, self.strict))


@dataclass(frozen=True)
class Feasible:
    witness: tuple
    feasible: bool = field(default=True, init=False)


@dataclass(frozen=True)
class Infeasible:
    certificate: tuple
    feasible: bool = field(default=False, init=False)


LPOutcome = Union[Feasible, Infeasible]


class _Tableau:
    """Dense standard-form tableau for ``A x = b, x >= 0`` with b >= 0."""

    def __init__(self, A, b):
        self.m = len(A)
        self.n = len(A[0]) if A else 0
        rows = []
        for row, rhs in zip(A, b):
            row = list(row)
            if rhs < 0:
                row = [-x for x in row]
                rhs = -rhs
            rows.append(row + [rhs])
        self.rows = rows
        self.basis = [None] * self.m

    def pivot(self, r, c):
        prow = self.rows[r]
        p = prow[c]
        if p != 1:
            prow = [x / p for x in prow]
            self.rows[r] = prow
        nz = [j for j, x in enumerate(prow) if x]
        for i, row in enumerate(self.rows):
            if i != r:
                f = row[c]
                if f:
                    for j in nz:
                        row[j] -= f * prow[j]
        f = self.cost[c]
        if f:
            for j in nz:
                self.cost[j] -= f * prow[j]
        self.basis[r] = c

    def set_cost(self, c):
        # cost[j] > 0 means increasing x_j improves the (maximized) objective
        cost = list(c) + [ZERO]
        for i, bv in enumerate(self.basis):
            cb = c[bv] if bv is not None and bv < len(c) else ZERO
            if cb:
                row = self.rows[i]
                cost = [x - cb * y for x, y in zip(cost, row)]
        self.cost = cost

    def optimize(self, allowed):
        """Bland's rule. Returns False when unbounded."""
        while True:
            enter = next((j for j in allowed if self.cost[j] > 0), None)
            if enter is None:
                return True
            best = None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    ratio = row[-1] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return False
            self.pivot(best[1], enter)

    def solution(self, nvars):
        x = [ZERO] * nvars
        for i, bv in enumerate(self.basis):
            if bv is not None and bv < nvars:
                x[bv] = self.rows[i][-1]
        return x


def _phase_one(A, b):
    """Find a basic feasible tableau for A x = b, x >= 0, or None."""
    m = len(A)
    n = len(A[0]) if A else 0
    tab = _Tableau([list(row) + [ONE if k == i else ZERO for k in range(m)]
                    for i, row in enumerate(A)], b)
    tab.basis = [n + i for i in range(m)]
    tab.set_cost([ZERO] * n + [-ONE] * m)
    tab.optimize(range(n + m))
    if any(tab.rows[i][-1] != 0 for i, bv in enumerate(tab.basis) if bv >= n):
        return None
    # drive artificial variables out of the basis; drop redundant rows
    keep = []
    for i in range(m):
        if tab.basis[i] >= n:
            col = next((j for j in range(n) if tab.rows[i][j] != 0), None)
            if col is None:
                continue
            tab.pivot(i, col)
        keep.append(i)
    tab.rows = [tab.rows[i][:n] + [tab.rows[i][-1]] for i in keep]
    tab.basis = [tab.basis[i] for i in keep]
    tab.m = len(keep)
    tab.n = n
    return tab


def simplex_maximize(A, b, c):
    """Maximize c.x over {A x = b, x >= 0}. Returns (status, x, value)."""
    tab = _phase_one(A, b)
    n = len(c)
    if tab is None:
        return "infeasible", None, None
    tab.set_cost(list(c))
    if not tab.optimize(range(n)):
        return "unbounded", None, None
    x = tab.solution(n)
    return "optimal", x, dot(c, x)


def _certificate(problem: LPProblem):
    """Solve for lam >= 0 with lam^T A = 0, lam^T b <= 0, (sigma - b)^T lam = 1."""
    m = len(problem.A)
    nv = problem.nvars
    rows, rhs = [], []
    for j in range(nv):
        rows.append([problem.A[i][j] for i in range(m)] + [ZERO])
        rhs.append(ZERO)
    rows.append(list(problem.b) + [ONE])  # b^T lam + mu = 0, mu >= 0
    rhs.append(ZERO)
    rows.append([(ONE if problem.strict[i] else ZERO) - problem.b[i] for i in range(m)] + [ZERO])
    rhs.append(ONE)
    tab = _phase_one(rows, rhs)
    if tab is None:
        raise InternalInconsistency("neither a witness nor a certificate was found")
    lam = tuple(tab.solution(m + 1)[:m])
    if not problem.certifies_infeasible(lam):
        raise InternalInconsistency("certificate failed verification")
    return lam


def solve_rational_lp(problem: LPProblem) -> LPOutcome:
    """Decide feasibility of a mixed strict/non-strict inequality system exactly."""
    if problem.start is not None and problem.satisfied_by(problem.start):
        return Feasible(problem.start)
    m = len(problem.A)
    nv = problem.nvars
    if m == 0:
        return Feasible(tuple([ZERO] * nv))
    any_strict = any(problem.strict)
    # columns: x+ (nv), x- (nv), t (1 if strict), slacks (m), slack for t <= 1
    ncols = 2 * nv + (1 if any_strict else 0) + m + (1 if any_strict else 0)
    rows, rhs = [], []
    for i, (row, bi, s) in enumerate(zip(problem.A, problem.b, problem.strict)):
        r = [ZERO] * ncols
        for j, a in enumerate(row):
            r[j] = a
            r[nv + j] = -a
        if any_strict and s:
            r[2 * nv] = ONE
        r[2 * nv + (1 if any_strict else 0) + i] = ONE
        rows.append(r)
        rhs.append(bi)
    cost = [ZERO] * ncols
    if any_strict:
        r = [ZERO] * ncols
        r[2 * nv] = ONE
        r[-1] = ONE
        rows.append(r)
        rhs.append(ONE)
        cost[2 * nv] = ONE
    status, x, value = simplex_maximize(rows, rhs, cost)
    if status == "optimal" and (not any_strict or value > 0):
        witness = tuple(x[j] - x[nv + j] for j in range(nv))
        if not problem.satisfied_by(witness):
            raise InternalInconsistency("LP witness failed verification")
        return Feasible(witness)
    return Infeasible(_certificate(problem))
