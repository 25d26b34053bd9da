"""Unimodular change of the ordered lattice basis.

The matrix ``P`` has the new basis vectors as its columns, written in the
current coordinates, so ``x = P y`` for a lattice vector with new
coordinates ``y``.  Covectors transform by the transpose.
"""
from __future__ import annotations

from . import exact
from .adapt import BlowupLog, BlowupStep
from .fan import Fan, _inverse


class NotUnimodular(ValueError):
    pass


def check_basis(matrix) -> tuple[tuple[int, ...], ...]:
    rows = tuple(exact.as_vector(r) for r in matrix)
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise NotUnimodular("basis matrix must be square")
    cols = [tuple(r[j] for r in rows) for j in range(n)]
    if abs(exact.determinant(cols)) != 1:
        raise NotUnimodular("basis matrix must have determinant +1 or -1")
    return rows


def inverse(matrix) -> tuple[tuple[int, ...], ...]:
    rows = check_basis(matrix)
    n = len(rows)
    cols = [tuple(r[j] for r in rows) for j in range(n)]
    return tuple(tuple(int(x) for x in row) for row in _inverse(cols))


def apply(matrix, v) -> tuple[int, ...]:
    return tuple(sum(a * b for a, b in zip(row, v)) for row in matrix)


def apply_transpose(matrix, m) -> tuple[int, ...]:
    n = len(matrix)
    return tuple(sum(matrix[i][j] * m[i] for i in range(n)) for j in range(n))


def to_basis(fan: Fan, matrix) -> Fan:
    """Re-express ``fan`` in the coordinates of the basis given by ``matrix``."""
    inv = inverse(matrix)
    return Fan(tuple(apply(inv, r) for r in fan.rays), fan.cones, fan.dim)


def from_basis(fan: Fan, matrix) -> Fan:
    rows = check_basis(matrix)
    return Fan(tuple(apply(rows, r) for r in fan.rays), fan.cones, fan.dim)


def covector_from_basis(m, matrix) -> tuple[int, ...]:
    # m_new(y) = m_old(P y) => m_new = P^T m_old, so m_old = P^-T m_new
    return apply_transpose(inverse(matrix), m)


def log_from_basis(log: BlowupLog, matrix) -> BlowupLog:
    rows = check_basis(matrix)
    steps = [BlowupStep(st.step, covector_from_basis(st.normal, rows),
                        apply(rows, st.u), apply(rows, st.v), apply(rows, st.s),
                        st.u_idx, st.v_idx, st.s_idx) for st in log.steps]
    per = {covector_from_basis(m, rows): c for m, c in log.per_normal.items()}
    return BlowupLog(steps, per)
