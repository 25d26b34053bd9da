"""Support functions, wall bends and projectivity certificates.

A support function is given by its exact value on every ray; it is linear on
each maximal cone.  The bend across a wall with relation
``a + b = sum(c_i r_i)`` is ``sum(c_i h(r_i)) - h(a) - h(b)``; a support
function is ample (strictly upper convex) iff every bend is positive.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from . import exact
from .adapt import BlowupLog
from .exact import Vector
from .fan import Fan, Wall, find_wall, locate, wall_relation, walls
from .ratlp import Infeasible, LinearSystem, solve_feasibility

logger = logging.getLogger(__name__)

INHERITED = "inherited"
INTERIOR = "interior"


class CertificateError(ValueError):
    pass


class MissingRayValue(CertificateError):
    pass


class HNotConvex(CertificateError):
    pass


class CertificateFailed(CertificateError):
    pass


@dataclass(frozen=True)
class SupportFunction:
    values: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "values",
                           tuple(exact.to_fraction(v) for v in self.values))

    def __getitem__(self, i: int) -> Fraction:
        return self.values[i]

    def __len__(self):
        return len(self.values)

    def __add__(self, other: SupportFunction) -> SupportFunction:
        return SupportFunction(tuple(a + b for a, b in zip(self.values, other.values)))

    def scale(self, c) -> SupportFunction:
        c = exact.to_fraction(c)
        return SupportFunction(tuple(c * a for a in self.values))

    @classmethod
    def from_covector(cls, fan: Fan, m) -> SupportFunction:
        return cls(tuple(Fraction(exact.pairing(m, r)) for r in fan.rays))


@dataclass
class BendReport:
    bends: list[tuple[Wall, Fraction]]
    min_bend: Fraction
    distinct_values: tuple[Fraction, ...]
    all_positive: bool

    def __len__(self):
        return len(self.bends)


@dataclass(frozen=True)
class FarkasCertificate:
    """Nonnegative wall multipliers whose bend combination vanishes identically."""

    multipliers: Mapping[tuple[int, ...], Fraction] = field(default_factory=dict)


def _check_values(fan: Fan, h: SupportFunction) -> None:
    if len(h) != fan.n_rays:
        raise MissingRayValue(f"support function has {len(h)} values for {fan.n_rays} rays")


def bend_functional(fan: Fan, wall: Wall) -> dict[int, int]:
    """Coefficients of the bend across ``wall`` as a linear form in ray values."""
    rel = wall_relation(fan, wall)
    out = {i: c for i, c in zip(wall.ray_indices, rel.coeffs) if c}
    out[wall.side_a] = out.get(wall.side_a, 0) - 1
    out[wall.side_b] = out.get(wall.side_b, 0) - 1
    return {i: c for i, c in out.items() if c}


def bend(fan: Fan, wall: Wall, h: SupportFunction, cross_check: bool = True) -> Fraction:
    _check_values(fan, h)
    rel = wall_relation(fan, wall)
    value = (sum((c * h[i] for i, c in zip(wall.ray_indices, rel.coeffs)), Fraction(0))
             - h[wall.side_a] - h[wall.side_b])
    if cross_check:
        other = bend_by_pieces(fan, wall, h)
        if other != value:
            raise AssertionError(f"bend formulas disagree on {wall}: {value} vs {other}")
    return value


def linear_piece(fan: Fan, cone, h: SupportFunction) -> tuple[Fraction, ...]:
    """Covector ``m`` with ``m(r) = h(r)`` on the generators of ``cone``."""
    gens = fan.generators(cone)
    n = fan.dim
    # m . r_k = h_k for each generator; solve the transposed system
    cols = [tuple(g[i] for g in gens) for i in range(n)]
    rows = [[Fraction(cols[j][k]) for j in range(n)] + [h[cone[k]]] for k in range(n)]
    pivots = exact._row_reduce(rows, n + 1)
    if len(pivots) != n or n in pivots:
        raise exact.DependentColumns(f"cone {list(cone)} is degenerate")
    return tuple(rows[i][n] for i in range(n))


def bend_by_pieces(fan: Fan, wall: Wall, h: SupportFunction) -> Fraction:
    """The bend as ``(m_a - m_b)(b)`` from the two linear pieces."""
    ma = linear_piece(fan, wall.cone_a, h)
    mb = linear_piece(fan, wall.cone_b, h)
    b = fan.rays[wall.side_b]
    return sum(((x - y) * c for x, y, c in zip(ma, mb, b)), Fraction(0))


def all_bends(fan: Fan, h: SupportFunction, cross_check: bool = True) -> BendReport:
    _check_values(fan, h)
    out = [(w, bend(fan, w, h, cross_check)) for w in walls(fan)]
    vals = [b for _, b in out]
    lo = min(vals)
    return BendReport(out, lo, tuple(sorted(set(vals))), lo > 0)


def verify_ample(fan: Fan, h: SupportFunction) -> tuple[bool, BendReport]:
    rep = all_bends(fan, h)
    return rep.all_positive, rep


def verify_farkas(fan: Fan, cert: FarkasCertificate) -> bool:
    lam = {tuple(sorted(k)): exact.to_fraction(v) for k, v in cert.multipliers.items()}
    if any(v < 0 for v in lam.values()) or not any(v > 0 for v in lam.values()):
        return False
    total = [Fraction(0)] * fan.n_rays
    for tau, l in lam.items():
        try:
            w = find_wall(fan, tau)
        except Exception:
            return False
        for i, c in bend_functional(fan, w).items():
            total[i] += l * c
    return not any(total)


def classify_walls(fan: Fan, normals) -> list[tuple[Wall, str]]:
    out = []
    for w in walls(fan):
        gens = fan.generators(w.ray_indices)
        inherited = any(all(exact.pairing(m, r) == 0 for r in gens) for m in normals)
        out.append((w, INHERITED if inherited else INTERIOR))
    return out


def arrangement_h(normals, fan: Fan) -> SupportFunction:
    """``h(r) = -sum(|m_i(r)|)``, the support function of the normal zonotope.

    Verified to bend positively on inherited walls and not at all on
    interior walls; :class:`HNotConvex` otherwise.
    """
    h = SupportFunction(tuple(
        Fraction(-sum(abs(exact.pairing(m, r)) for m in normals)) for r in fan.rays))
    for w, kind in classify_walls(fan, normals):
        d = bend(fan, w, h)
        if (kind == INHERITED and d <= 0) or (kind == INTERIOR and d != 0):
            raise HNotConvex(f"{kind} wall {list(w.ray_indices)} has bend {d}")
    return h


def relative_g(log: BlowupLog, final_fan: Fan, beta=Fraction(1, 2)) -> SupportFunction:
    """Sum of geometrically shrinking bumps at the inserted rays.

    Rays of the starting fan get 0; the ray inserted at step ``j`` from
    ``(u, v)`` gets ``g(u) + g(v) + beta**j``.
    """
    beta = exact.to_fraction(beta)
    if beta <= 0:
        raise ValueError("beta must be positive")
    inserted = {st.s_idx: st for st in log.steps}
    g = [Fraction(0)] * final_fan.n_rays
    for st in sorted(inserted.values(), key=lambda st: st.step):
        g[st.s_idx] = g[st.u_idx] + g[st.v_idx] + beta ** st.step
    return SupportFunction(tuple(g))


def walls_interior_to(fine: Fan, coarse: Fan) -> list[Wall]:
    """Walls of ``fine`` whose relative interior lies inside a coarse cone."""
    out = []
    for w in walls(fine):
        bary = tuple(sum(col) for col in zip(*fine.generators(w.ray_indices)))
        if locate(coarse, bary, strict=True) is not None:
            out.append(w)
    return out


def sandwich_epsilon(fan: Fan, h: SupportFunction, g: SupportFunction,
                     inherited) -> Fraction:
    """``min(bend(h) / (1 + |bend(g)|))`` over ``inherited`` walls, or 1 if none."""
    ratios = [bend(fan, w, h) / (1 + abs(bend(fan, w, g))) for w in inherited]
    return min(ratios) if ratios else Fraction(1)


def certify_sandwich(sigma: Fan, gamma: Fan, log: BlowupLog, normals,
                     beta=Fraction(1, 2), min_beta=Fraction(1, 2 ** 64)) -> SupportFunction:
    """Ample support function ``h + eps * g`` on ``gamma``.

    ``h`` comes from the hyperplane arrangement of ``normals``; ``g`` is made
    strictly convex on walls interior to cones of ``sigma`` by shrinking
    ``beta``; ``eps`` is half of ``min(bend(h) / (1 + |bend(g)|))`` over
    inherited walls.
    """
    h = arrangement_h(normals, gamma)
    inner = walls_interior_to(gamma, sigma)
    beta = exact.to_fraction(beta)
    while True:
        g = relative_g(log, gamma, beta)
        if all(bend(gamma, w, g, cross_check=False) > 0 for w in inner):
            break
        beta /= 2
        if beta < min_beta:
            raise CertificateFailed("no relatively convex bump function found")
    inherited = [w for w, kind in classify_walls(gamma, normals) if kind == INHERITED]
    eps0 = sandwich_epsilon(gamma, h, g, inherited)
    result = h + g.scale(eps0 / 2)
    ok, rep = verify_ample(gamma, result)
    if not ok:
        raise CertificateFailed(f"h + eps g has minimum bend {rep.min_bend}")
    return result


def bend_system(fan: Fan, lower=1) -> tuple[LinearSystem, list[Wall]]:
    ws = walls(fan)
    sys = LinearSystem(fan.n_rays)
    for w in ws:
        sys.add(bend_functional(fan, w), lower)
    return sys, ws


def certify_lp(fan: Fan) -> SupportFunction | FarkasCertificate:
    """Exact LP for ``bend >= 1`` on every wall, with a verified answer."""
    sys, ws = bend_system(fan)
    res = solve_feasibility(sys)
    if isinstance(res, Infeasible):
        cert = FarkasCertificate({w.ray_indices: l
                                  for w, l in zip(ws, res.multipliers) if l})
        if not verify_farkas(fan, cert):
            raise CertificateFailed("Farkas multipliers failed verification")
        return cert
    h = SupportFunction(res.x)
    ok, rep = verify_ample(fan, h)
    if not ok or rep.min_bend < 1:
        raise CertificateFailed("LP solution failed ampleness verification")
    return h
