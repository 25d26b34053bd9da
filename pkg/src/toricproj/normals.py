"""Wall normals: one primitive covector per wall hyperplane, sign-fixed."""
from __future__ import annotations

from functools import cmp_to_key

from . import exact
from .exact import Vector
from .fan import Fan, FanError, Wall, walls


class DegenerateWall(FanError):
    pass


def wall_normal(fan: Fan, wall: Wall) -> Vector:
    """Primitive covector vanishing on the wall, first nonzero entry positive."""
    try:
        m = exact.kernel_covector(fan.generators(wall.ray_indices))
    except exact.DependentColumns as e:
        raise DegenerateWall(str(e)) from None
    return exact.first_nonzero_positive(m)


def sort_lex(vectors) -> list[Vector]:
    return sorted(vectors, key=cmp_to_key(exact.lex_compare))


def ordered_normals(fan: Fan) -> tuple[Vector, ...]:
    """Distinct wall normals of ``fan`` in increasing lexicographic order."""
    normals = {wall_normal(fan, w) for w in walls(fan)}
    out = tuple(sort_lex(normals))
    if exact.rank(out) != fan.dim:
        raise DegenerateWall("wall normals do not span the dual space")
    return out
