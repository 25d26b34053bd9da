"""Simplicial fans stored as rays plus maximal cones.

A :class:`Fan` is immutable.  Lower-dimensional cones (two-cones, walls) are
derived on demand from the maximal cones, and ray indices are append-only so
that a sequence of star subdivisions can refer to them stably.
"""
from __future__ import annotations

import logging
import random
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import lcm

from . import exact
from .exact import Vector
from .ratlp import Infeasible, LinearSystem, solve_feasibility

logger = logging.getLogger(__name__)


class FanError(ValueError):
    pass


class InvariantViolation(FanError):
    pass


class IncompleteFan(FanError):
    pass


class NotATwoCone(FanError):
    pass


class NonIntegralRelation(FanError):
    pass


@dataclass(frozen=True, eq=False)
class Fan:
    """Complete simplicial fan: primitive rays and maximal cones of size ``dim``.

    ``cones`` is kept canonical (each cone sorted, cone list sorted) so that
    two fans with the same rays and the same cone set compare equal.
    """

    rays: tuple[Vector, ...]
    cones: tuple[tuple[int, ...], ...]
    dim: int = field(default=0)

    def __post_init__(self):
        rays = tuple(exact.as_vector(r) for r in self.rays)
        dim = self.dim or (len(rays[0]) if rays else 0)
        cones = tuple(sorted(tuple(sorted(int(i) for i in c)) for c in self.cones))
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "cones", cones)
        object.__setattr__(self, "dim", dim)
        check_structure(self)

    def __eq__(self, other):
        if not isinstance(other, Fan):
            return NotImplemented
        return (self.dim, self.rays, self.cones) == (other.dim, other.rays, other.cones)

    def __hash__(self):
        return hash((self.dim, self.rays, self.cones))

    def __repr__(self):
        return f"Fan(dim={self.dim}, rays={len(self.rays)}, cones={len(self.cones)})"

    @property
    def n_rays(self) -> int:
        return len(self.rays)

    @cached_property
    def ray_index(self) -> dict[Vector, int]:
        return {r: i for i, r in enumerate(self.rays)}

    @cached_property
    def cone_set(self) -> frozenset[tuple[int, ...]]:
        return frozenset(self.cones)

    @cached_property
    def _faces(self) -> dict[tuple[int, ...], list[int]]:
        # (n-1)-subset -> list of opposite ray indices in maximal cones
        out = defaultdict(list)
        for c in self.cones:
            for k in range(len(c)):
                out[c[:k] + c[k + 1:]].append(c[k])
        return out

    def generators(self, idx) -> list[Vector]:
        return [self.rays[i] for i in idx]


def check_structure(fan: Fan) -> None:
    """Raise :class:`InvariantViolation` if the raw data is not a valid record."""
    n = fan.dim
    if n < 2:
        raise InvariantViolation(f"dimension must be at least 2, got {n}")
    seen = set()
    for i, r in enumerate(fan.rays):
        if len(r) != n:
            raise InvariantViolation(f"ray {i} has length {len(r)}, expected {n}")
        if not any(r):
            raise InvariantViolation(f"ray {i} is zero")
        if not exact.is_primitive(r):
            raise InvariantViolation(f"ray {i} {list(r)} is not primitive")
        if r in seen:
            raise InvariantViolation(f"ray {i} {list(r)} is duplicated")
        seen.add(r)
    for k, c in enumerate(fan.cones):
        if len(c) != n or len(set(c)) != n:
            raise InvariantViolation(f"cone {k} {list(c)} must have {n} distinct indices")
        if any(not 0 <= i < len(fan.rays) for i in c):
            raise InvariantViolation(f"cone {k} {list(c)} references a missing ray")
    if len(set(fan.cones)) != len(fan.cones):
        raise InvariantViolation("duplicate maximal cones")


@dataclass(frozen=True)
class Wall:
    ray_indices: tuple[int, ...]
    side_a: int
    side_b: int

    @property
    def cone_a(self) -> tuple[int, ...]:
        return tuple(sorted(self.ray_indices + (self.side_a,)))

    @property
    def cone_b(self) -> tuple[int, ...]:
        return tuple(sorted(self.ray_indices + (self.side_b,)))


@dataclass(frozen=True)
class WallRelation:
    """``a + b == sum(coeffs[i] * r_i)`` over ``wall.ray_indices``."""

    wall: Wall
    coeffs: tuple[int, ...]


@dataclass
class ValidationReport:
    smooth: bool
    complete: bool
    is_fan: bool
    diagnostics: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.smooth and self.complete and self.is_fan


def two_cones(fan: Fan) -> list[tuple[int, int]]:
    out = set()
    for c in fan.cones:
        out.update(combinations(c, 2))
    return sorted(out)


def faces(fan: Fan, k: int) -> list[tuple[int, ...]]:
    out = set()
    for c in fan.cones:
        out.update(combinations(c, k))
    return sorted(out)


def f_vector(fan: Fan) -> tuple[int, ...]:
    """Number of k-dimensional cones for k = 1..dim."""
    counts = [len(faces(fan, k)) for k in range(1, fan.dim)]
    return tuple(counts) + (len(fan.cones),)


def walls(fan: Fan) -> list[Wall]:
    out = []
    for tau, opp in sorted(fan._faces.items()):
        if len(opp) != 2:
            raise IncompleteFan(
                f"face {list(tau)} lies in {len(opp)} maximal cones, expected 2")
        out.append(Wall(tau, opp[0], opp[1]))
    return out


def find_wall(fan: Fan, ray_indices) -> Wall:
    tau = tuple(sorted(ray_indices))
    opp = fan._faces.get(tau)
    if opp is None or len(opp) != 2:
        raise IncompleteFan(f"{list(tau)} is not a wall of this fan")
    return Wall(tau, opp[0], opp[1])


def wall_relation(fan: Fan, wall: Wall) -> WallRelation:
    gens = fan.generators(wall.ray_indices)
    a, b = fan.rays[wall.side_a], fan.rays[wall.side_b]
    # a + b = sum c_i r_i + c_a a  with c_a forced to 0 for a genuine wall
    sol = exact.solve_exact(gens + [a], exact.add(a, b))
    if sol is None or any(x.denominator != 1 for x in sol):
        raise NonIntegralRelation(f"no integral wall relation across {wall}")
    # b = -a + sum c_i r_i, i.e. coefficient of a in the expansion of a+b is 0
    if sol[-1] != 0:
        raise NonIntegralRelation(f"{wall}: sides do not lie on opposite sides")
    coeffs = tuple(int(x) for x in sol[:-1])
    lhs = exact.add(a, b)
    rhs = tuple(sum(c * g[i] for c, g in zip(coeffs, gens)) for i in range(fan.dim))
    if lhs != rhs:
        raise NonIntegralRelation(f"relation check failed across {wall}")
    return WallRelation(wall, coeffs)


def star_subdivide(fan: Fan, u: int, v: int) -> tuple[Fan, int]:
    """Star-subdivide the two-cone ``{u, v}`` at ``r_u + r_v``.

    The new ray is appended; every maximal cone containing both ``u`` and
    ``v`` is replaced by its two halves.
    """
    if u == v or not any(u in c and v in c for c in fan.cones):
        raise NotATwoCone(f"{{{u}, {v}}} is not a two-cone of the fan")
    s_vec, content = exact.primitive(exact.add(fan.rays[u], fan.rays[v]))
    if content != 1:
        logger.warning("r_%d + r_%d is not primitive; fan is not smooth there", u, v)
    if s_vec in fan.ray_index:
        raise InvariantViolation(f"ray {list(s_vec)} already present")
    s = fan.n_rays
    cones = []
    for c in fan.cones:
        if u in c and v in c:
            cones.append(tuple(s if i == u else i for i in c))
            cones.append(tuple(s if i == v else i for i in c))
        else:
            cones.append(c)
    return Fan(fan.rays + (s_vec,), tuple(cones), fan.dim), s


def cone_coordinates(fan: Fan, cone, vec) -> tuple[Fraction, ...]:
    """Coordinates of ``vec`` in the basis of ``cone``'s generators."""
    sol = exact.solve_exact(fan.generators(cone), vec)
    assert sol is not None  # full-rank square system always solves
    return sol


def contains(fan: Fan, cone, vec, strict: bool = False) -> bool:
    coords = cone_coordinates(fan, cone, vec)
    return all(x > 0 for x in coords) if strict else all(x >= 0 for x in coords)


def locate(fan: Fan, vec, strict: bool = False) -> tuple[int, ...] | None:
    """First maximal cone containing ``vec`` (in its interior if ``strict``)."""
    for c in fan.cones:
        if contains(fan, c, vec, strict):
            return c
    return None


def refines(fine: Fan, coarse: Fan) -> bool:
    if fine.dim != coarse.dim:
        return False
    inverse = {}
    for c in coarse.cones:
        inverse[c] = _inverse(coarse.generators(c))
    memo = {}

    def inside(ray_idx, c):
        key = (ray_idx, c)
        if key not in memo:
            r = fine.rays[ray_idx]
            memo[key] = all(
                sum(row[j] * r[j] for j in range(fine.dim)) >= 0 for row in inverse[c])
        return memo[key]

    for fc in fine.cones:
        if not any(all(inside(i, c) for i in fc) for c in coarse.cones):
            return False
    return True


def _inverse(columns) -> list[list[Fraction]]:
    """Rows of the inverse of the matrix with the given columns."""
    n = len(columns)
    rows = [[Fraction(columns[j][i]) for j in range(n)]
            + [Fraction(int(i == k)) for k in range(n)] for i in range(n)]
    pivots = exact._row_reduce(rows, n)
    if len(pivots) < n:
        raise exact.DependentColumns("cone generators are dependent")
    return [r[n:] for r in rows]


def _dual_rows(fan: Fan, cone) -> list[list[Fraction]]:
    cache = fan.__dict__.setdefault("_dual_cache", {})
    if cone not in cache:
        cache[cone] = _inverse(fan.generators(cone))
    return cache[cone]


def _sign_masks(fan: Fan) -> tuple[list[int], list[int], list[int]]:
    """Per ray, bitmasks over the fan's distinct facet normals marking a
    positive, negative or zero pairing."""
    masks = fan.__dict__.get("_sign_masks")
    if masks is None:
        normals = set()
        for tau in fan._faces:
            try:
                normals.add(exact.first_nonzero_positive(
                    exact.kernel_covector(fan.generators(tau))))
            except exact.DependentColumns:
                pass
        pos, neg, zero = [], [], []
        for r in fan.rays:
            bits = [0, 0, 0]
            for k, m in enumerate(sorted(normals)):
                v = exact.pairing(m, r)
                bits[0 if v > 0 else 1 if v < 0 else 2] |= 1 << k
            pos.append(bits[0])
            neg.append(bits[1])
            zero.append(bits[2])
        masks = (pos, neg, zero)
        fan.__dict__["_sign_masks"] = masks
    return masks


def _separated(fan: Fan, c1, c2) -> bool:
    """Whether a covector vanishes on the shared generators and strictly
    separates the remaining generators of the two cones."""
    shared = sorted(set(c1) & set(c2))
    only1 = [i for i in c1 if i not in shared]
    only2 = [i for i in c2 if i not in shared]
    n = fan.dim

    def works(m):
        p = lambda i: sum(a * b for a, b in zip(m, fan.rays[i]))  # noqa: E731
        return (all(p(i) == 0 for i in shared) and all(p(i) > 0 for i in only1)
                and all(p(i) < 0 for i in only2))

    # cheap candidates first: hyperplanes of the fan's own facets, then
    # combinations of the two cones' dual bases; the LP is the fallback
    pos, neg, zero = _sign_masks(fan)
    on = -1
    for i in shared:
        on &= zero[i]
    fwd, back = on, on
    for i in only1:
        fwd &= pos[i]
        back &= neg[i]
    for i in only2:
        fwd &= neg[i]
        back &= pos[i]
    if fwd or back:
        return True
    d1 = _dual_rows(fan, c1)
    d2 = _dual_rows(fan, c2)
    m1 = [sum(d1[c1.index(i)][j] for i in only1) for j in range(n)]
    m2 = [sum(d2[c2.index(i)][j] for i in only2) for j in range(n)]
    den = lcm(*(x.denominator for x in m1 + m2))
    m1 = [int(x * den) for x in m1]
    m2 = [int(x * den) for x in m2]
    for p, q in ((1, 1), (2, 1), (1, 2), (4, 1), (1, 4), (8, 1), (1, 8)):
        if works([p * a - q * b for a, b in zip(m1, m2)]):
            return True
    sys = LinearSystem(n)
    for i in shared:
        sys.add_equality(dict(enumerate(fan.rays[i])), 0)
    for i in only1:
        sys.add(dict(enumerate(fan.rays[i])), 1)
    for i in only2:
        sys.add({j: -x for j, x in enumerate(fan.rays[i])}, 1)
    return not isinstance(solve_feasibility(sys), Infeasible)


def validate_fan(fan: Fan, check_intersections: bool = True) -> ValidationReport:
    """Check smoothness, completeness and the pairwise-face fan axiom.

    With ``check_intersections=False`` the O(cones^2) intersection test is
    skipped; ``is_fan`` is then reported as True with a warning diagnostic.
    """
    diag = []
    smooth = True
    full_dim = True
    for c in fan.cones:
        d = exact.determinant(fan.generators(c))
        if d == 0:
            full_dim = False
            smooth = False
            diag.append(f"cone {list(c)} is not full-dimensional")
        elif abs(d) != 1:
            smooth = False
            diag.append(f"cone {list(c)} has determinant {d}")
    closed = True
    for tau, opp in sorted(fan._faces.items()):
        if len(opp) != 2:
            closed = False
            diag.append(f"face {list(tau)} lies in {len(opp)} maximal cones")
    is_fan = full_dim
    if check_intersections and full_dim:
        for c1, c2 in combinations(fan.cones, 2):
            if not _separated(fan, c1, c2):
                is_fan = False
                diag.append(f"cones {list(c1)} and {list(c2)} overlap improperly")
    elif not check_intersections:
        msg = "pairwise intersection check skipped"
        logger.info(msg)
        diag.append("warning: " + msg)
    complete = bool(fan.cones) and closed and is_fan
    return ValidationReport(smooth, complete, is_fan, diag)


def coverage_smoke_test(fan: Fan, samples: int = 200, seed: int = 0) -> int:
    """Count random lattice points not covered by any maximal cone.

    A diagnostic only; complete fans always return 0.
    """
    rng = random.Random(seed)
    misses = 0
    for _ in range(samples):
        p = tuple(rng.randint(-1000, 1000) for _ in range(fan.dim))
        if any(p) and locate(fan, p) is None:
            misses += 1
    return misses
