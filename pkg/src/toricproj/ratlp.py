"""Exact rational feasibility for systems ``A x >= b`` with free ``x``.

The solver is a dense phase-one simplex over :class:`fractions.Fraction`
with Bland's least-index rule.  Either a feasible point or a Farkas
multiplier vector is returned, and both are checked before returning.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .exact import to_fraction

try:  # GMP rationals are much faster than Fraction inside the tableau
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction


@dataclass(frozen=True)
class Row:
    """One constraint ``sum(coeffs[j] * x[j]) >= rhs``."""

    coeffs: Mapping[int, Fraction]
    rhs: Fraction = Fraction(0)


@dataclass
class LinearSystem:
    num_vars: int
    rows: list[Row] = field(default_factory=list)

    def add(self, coeffs: Mapping[int, object], rhs=0) -> int:
        """Append ``coeffs . x >= rhs``; returns the row index."""
        clean = {}
        for j, c in coeffs.items():
            if not 0 <= j < self.num_vars:
                raise IndexError(f"variable {j} out of range 0..{self.num_vars - 1}")
            c = to_fraction(c)
            if c != 0:
                clean[j] = clean.get(j, Fraction(0)) + c
        self.rows.append(Row({j: c for j, c in clean.items() if c != 0}, to_fraction(rhs)))
        return len(self.rows) - 1

    def add_equality(self, coeffs: Mapping[int, object], rhs=0) -> tuple[int, int]:
        neg = {j: -to_fraction(c) for j, c in coeffs.items()}
        return self.add(coeffs, rhs), self.add(neg, -to_fraction(rhs))

    def row_value(self, i: int, x: Sequence[Fraction]) -> Fraction:
        return sum((c * x[j] for j, c in self.rows[i].coeffs.items()), Fraction(0))


@dataclass(frozen=True)
class Feasible:
    x: tuple[Fraction, ...]

    feasible = True


@dataclass(frozen=True)
class Infeasible:
    """Farkas witness: ``lam >= 0``, ``lam^T A = 0`` and ``lam . b > 0``."""

    multipliers: tuple[Fraction, ...]

    feasible = False


LpOutcome = Feasible | Infeasible


def check_feasible(sys: LinearSystem, x: Sequence[Fraction]) -> bool:
    return len(x) == sys.num_vars and all(
        sys.row_value(i, x) >= row.rhs for i, row in enumerate(sys.rows))


def check_farkas(sys: LinearSystem, lam: Sequence[Fraction]) -> bool:
    if len(lam) != len(sys.rows) or any(l < 0 for l in lam):
        return False
    combo = [Fraction(0)] * sys.num_vars
    for l, row in zip(lam, sys.rows):
        if l:
            for j, c in row.coeffs.items():
                combo[j] += l * c
    if any(combo):
        return False
    return sum((l * row.rhs for l, row in zip(lam, sys.rows)), Fraction(0)) > 0


def _frac(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


class _Tableau:
    # Virtual columns: x+ (nv), x- (nv), surplus (m), artificial (m).  Only x+
    # and surplus are stored: x- is always the negated x+ column, and
    # artificial i is always -sign[i] times surplus i, so row operations keep
    # both identities.  The objective row holds reduced costs of "minimize
    # sum of artificials"; an artificial's is 1 - sign[i] * cost[surplus i].

    def __init__(self, sys: LinearSystem):
        nv, m = sys.num_vars, len(sys.rows)
        self.nv, self.m = nv, m
        self.sign = []
        self.rows = []
        self.rhs = []
        for i, row in enumerate(sys.rows):
            s = -1 if row.rhs < 0 else 1
            self.sign.append(s)
            r = [_Q(0)] * (nv + m)
            for j, c in row.coeffs.items():
                r[j] = _Q(s * c.numerator, c.denominator)
            r[nv + i] = _Q(-s)
            self.rows.append(r)
            self.rhs.append(_Q(s * row.rhs.numerator, row.rhs.denominator))
        self.basis = [2 * nv + m + i for i in range(m)]
        self.cost = [_Q(0)] * (nv + m)
        for r in self.rows:
            for j in range(nv + m):
                self.cost[j] -= r[j]
        self.value = sum(self.rhs, _Q(0))

    def _stored(self, j: int) -> tuple[int, int, int]:
        """Map a virtual column to (stored column, factor, cost offset)."""
        nv, m = self.nv, self.m
        if j < nv:
            return j, 1, 0
        if j < 2 * nv:
            return j - nv, -1, 0
        if j < 2 * nv + m:
            return j - nv, 1, 0
        i = j - 2 * nv - m
        return nv + i, -self.sign[i], 1

    def reduced_cost(self, j: int):
        c, f, off = self._stored(j)
        return off + f * self.cost[c]

    def pivot(self, i: int, j: int) -> None:
        c, sgn, _ = self._stored(j)
        row = self.rows[i]
        p = sgn * row[c]
        if p != 1:
            row = [x / p for x in row]
            self.rows[i] = row
            self.rhs[i] /= p
        nz = [k for k, x in enumerate(row) if x]
        for k in range(self.m):
            if k != i:
                rk = self.rows[k]
                f = sgn * rk[c]
                if f:
                    for col in nz:
                        rk[col] -= f * row[col]
                    self.rhs[k] -= f * self.rhs[i]
        f = self.reduced_cost(j)
        if f:
            for col in nz:
                self.cost[col] -= f * row[col]
            self.value += f * self.rhs[i]
        self.basis[i] = j

    def entering(self) -> int | None:
        # Bland: least virtual index with negative reduced cost
        nv, m = self.nv, self.m
        cost = self.cost
        for j in range(nv):
            if cost[j] < 0:
                return j
        for j in range(nv):
            if cost[j] > 0:
                return nv + j
        for i in range(m):
            if cost[nv + i] < 0:
                return 2 * nv + i
        for i in range(m):
            if 1 - self.sign[i] * cost[nv + i] < 0:
                return 2 * nv + m + i
        return None

    def run(self) -> None:
        while True:
            j = self.entering()
            if j is None:
                return
            c, sgn, _ = self._stored(j)
            best = None
            for i in range(self.m):
                a = sgn * self.rows[i][c]
                if a > 0:
                    key = (self.rhs[i] / a, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            # phase one is bounded below by zero, so a ratio always exists
            assert best is not None
            self.pivot(best[1], j)


def solve_feasibility(sys: LinearSystem) -> LpOutcome:
    """Decide ``A x >= b``; return a verified point or Farkas multipliers."""
    if not sys.rows:
        return Feasible(tuple(Fraction(0) for _ in range(sys.num_vars)))
    t = _Tableau(sys)
    t.run()
    nv, m = t.nv, t.m
    if t.value == 0:
        x = [Fraction(0)] * (2 * nv)
        for i, b in enumerate(t.basis):
            if b < 2 * nv:
                x[b] = _frac(t.rhs[i])
        point = tuple(x[j] - x[nv + j] for j in range(nv))
        if not check_feasible(sys, point):
            raise AssertionError("simplex produced an infeasible point")
        return Feasible(point)
    # dual values y_i = 1 - reduced cost of artificial i; lambda = sign * y
    lam = [t.sign[i] * _frac(1 - t.reduced_cost(2 * nv + m + i)) for i in range(m)]
    top = max(lam)
    lam = tuple(l / top for l in lam)
    if not check_farkas(sys, lam):
        raise AssertionError("simplex produced an invalid Farkas witness")
    return Infeasible(lam)
