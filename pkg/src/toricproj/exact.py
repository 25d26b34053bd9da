"""Exact integer/rational helpers for lattice vectors and covectors.

Vectors are plain tuples of Python ints (coordinates in the fixed ordered
basis); rationals are :class:`fractions.Fraction`, which is always kept in
lowest terms with a positive denominator.
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Sequence

try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction

Vector = tuple[int, ...]

LESS, EQUAL, GREATER = -1, 0, 1


class ExactArithmeticError(ValueError):
    pass


class ZeroVector(ExactArithmeticError):
    pass


class DimensionMismatch(ExactArithmeticError):
    pass


class DependentColumns(ExactArithmeticError):
    pass


def as_vector(v) -> Vector:
    out = []
    for c in v:
        if isinstance(c, bool) or int(c) != c:
            raise TypeError(f"non-integer coordinate {c!r}")
        out.append(int(c))
    return tuple(out)


def _check_same_length(a: Sequence, b: Sequence) -> None:
    if len(a) != len(b):
        raise DimensionMismatch(f"length {len(a)} != {len(b)}")


def primitive(v) -> tuple[Vector, int]:
    """Return ``(v / content, content)`` where content is the gcd of |v|."""
    v = as_vector(v)
    content = reduce(gcd, (abs(c) for c in v), 0)
    if content == 0:
        raise ZeroVector("zero vector has no primitive generator")
    return tuple(c // content for c in v), content


def is_primitive(v) -> bool:
    return reduce(gcd, (abs(c) for c in v), 0) == 1


def pairing(m, v) -> int:
    _check_same_length(m, v)
    return sum(a * b for a, b in zip(m, v))


def add(a, b) -> Vector:
    _check_same_length(a, b)
    return tuple(x + y for x, y in zip(a, b))


def lex_compare(a, b) -> int:
    """Lexicographic comparison, first coordinate most significant.

    Returns ``LESS`` (-1), ``EQUAL`` (0) or ``GREATER`` (1).
    """
    _check_same_length(a, b)
    for x, y in zip(a, b):
        if x != y:
            return LESS if x < y else GREATER
    return EQUAL


def determinant(vectors) -> int:
    """Exact determinant of the square matrix whose columns are ``vectors``.

    Uses fraction-free Bareiss elimination, so all intermediates stay integral.
    """
    cols = [as_vector(v) for v in vectors]
    n = len(cols)
    if any(len(c) != n for c in cols):
        raise DimensionMismatch("determinant needs n vectors of length n")
    if n == 0:
        return 1
    # rows of the matrix = transpose of columns; det is transpose invariant
    a = [list(c) for c in cols]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _row_reduce(rows: list[list[Fraction]], ncols: int) -> list[int]:
    """In-place reduced row echelon form over Q; returns pivot columns."""
    work = [[_Q(x.numerator, x.denominator) if isinstance(x, Fraction) else _Q(x)
             for x in row] for row in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(work)) if work[i][c] != 0), None)
        if p is None:
            continue
        work[r], work[p] = work[p], work[r]
        piv = work[r][c]
        work[r] = [x / piv for x in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c] != 0:
                f = work[i][c]
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    rows[:] = [[Fraction(int(x.numerator), int(x.denominator)) for x in row] for row in work]
    return pivots


def rank(vectors) -> int:
    rows = [[Fraction(x) for x in v] for v in vectors]
    if not rows:
        return 0
    return len(_row_reduce(rows, len(rows[0])))


def solve_exact(columns, target) -> tuple[Fraction, ...] | None:
    """Coefficients ``x`` with ``sum(x[i] * columns[i]) == target``.

    Returns ``None`` when ``target`` is outside the column span and raises
    :class:`DependentColumns` if the columns are linearly dependent.
    """
    cols = [as_vector(c) for c in columns]
    target = as_vector(target)
    k = len(cols)
    for c in cols:
        _check_same_length(c, target)
    n = len(target)
    # augmented system: n equations, k unknowns
    rows = [[Fraction(cols[j][i]) for j in range(k)] + [Fraction(target[i])]
            for i in range(n)]
    pivots = _row_reduce(rows, k + 1)
    if len([p for p in pivots if p < k]) < k:
        raise DependentColumns(f"{k} columns are linearly dependent")
    if k in pivots:
        return None
    x = tuple(rows[i][k] for i in range(k))
    assert all(sum(x[j] * cols[j][i] for j in range(k)) == target[i]
               for i in range(n))
    return x


def kernel_covector(vectors) -> Vector:
    """Primitive integer covector vanishing on ``n - 1`` independent vectors.

    The sign is not normalized here.
    """
    vecs = [as_vector(v) for v in vectors]
    if not vecs:
        raise DimensionMismatch("need at least one vector")
    n = len(vecs[0])
    if len(vecs) != n - 1 or any(len(v) != n for v in vecs):
        raise DimensionMismatch("need n-1 vectors of length n")
    # generalized cross product: cofactors of the (n-1) x n matrix
    m = []
    for j in range(n):
        minor = [tuple(v[i] for i in range(n) if i != j) for v in vecs]
        m.append((-1) ** j * determinant(minor) if n > 1 else 1)
    if all(c == 0 for c in m):
        raise DependentColumns("wall generators are linearly dependent")
    return primitive(m)[0]


def first_nonzero_positive(m) -> Vector:
    m = as_vector(m)
    for c in m:
        if c != 0:
            return m if c > 0 else tuple(-x for x in m)
    raise ZeroVector("zero covector")


def to_fraction(x) -> Fraction:
    """Parse an int, Fraction or ``"p/q"`` string into a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip().replace("−", "-"))
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def format_fraction(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
