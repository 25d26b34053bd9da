"""Sign adaptation of a smooth complete fan to a list of covectors.

For a covector ``m`` a two-cone ``<u, v>`` is *m-bad* when ``m(u)`` and
``m(v)`` have strictly opposite signs.  :func:`adapt` repeatedly
star-subdivides a bad two-cone of maximal weight ``|m(u)| + |m(v)|``
(ties broken by the lexicographically least ordered generator pair) until
none is left; :func:`adapt_all` does this for every wall normal of the
input fan in lexicographic order and records a :class:`BlowupLog`.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable

from . import exact
from .exact import Vector
from .fan import Fan, star_subdivide, two_cones
from .normals import ordered_normals

logger = logging.getLogger(__name__)


class EmptyCandidates(ValueError):
    pass


@dataclass(frozen=True)
class BadCone:
    u: int
    v: int
    weight: int


@dataclass(frozen=True)
class BlowupStep:
    step: int
    normal: Vector
    u: Vector
    v: Vector
    s: Vector
    u_idx: int
    v_idx: int
    s_idx: int


@dataclass
class BlowupLog:
    steps: list[BlowupStep] = field(default_factory=list)
    # insertion-ordered: normal -> number of subdivisions it caused
    per_normal: dict[Vector, int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return len(self.steps)

    @property
    def inserted_rays(self) -> list[Vector]:
        return [st.s for st in self.steps]

    def counts(self) -> tuple[int, ...]:
        return tuple(self.per_normal.values())


def _oriented(fan: Fan, i: int, j: int) -> tuple[int, int]:
    if exact.lex_compare(fan.rays[i], fan.rays[j]) <= 0:
        return i, j
    return j, i


def _bad(fan: Fan, m, i: int, j: int) -> BadCone | None:
    a = exact.pairing(m, fan.rays[i])
    b = exact.pairing(m, fan.rays[j])
    if a * b < 0:
        u, v = _oriented(fan, i, j)
        return BadCone(u, v, abs(a) + abs(b))
    return None


def find_bad(fan: Fan, m) -> list[BadCone]:
    """All m-bad two-cones, sorted by index pair."""
    out = []
    for i, j in two_cones(fan):
        bc = _bad(fan, m, i, j)
        if bc is not None:
            out.append(bc)
    return sorted(out, key=lambda bc: (min(bc.u, bc.v), max(bc.u, bc.v)))


def is_adapted(fan: Fan, m) -> bool:
    if not any(m):
        raise ValueError("adaptation is only defined for nonzero covectors")
    return not find_bad(fan, m)


def select_bad(candidates, fan: Fan) -> BadCone:
    """Maximal weight first, then the lexicographically least ``(r_u, r_v)``."""
    if not candidates:
        raise EmptyCandidates("no bad two-cone to choose from")
    top = max(bc.weight for bc in candidates)
    return min((bc for bc in candidates if bc.weight == top),
               key=lambda bc: (fan.rays[bc.u], fan.rays[bc.v]))


def mu(candidates) -> tuple[int, int]:
    """Termination measure: (max weight, number of bad cones at that weight)."""
    if not candidates:
        return (0, 0)
    top = max(bc.weight for bc in candidates)
    return (top, sum(1 for bc in candidates if bc.weight == top))


def adapt(fan: Fan, m, start_step: int = 1, full_rescan: bool = False,
          on_step: Callable[[Fan, BlowupStep], None] | None = None):
    """Adapt ``fan`` to the covector ``m``.

    Returns ``(fan, steps, trace)`` where ``trace`` lists the termination
    measure before every step followed by the final ``(0, 0)``.  The set of
    bad cones is maintained incrementally; ``full_rescan`` recomputes it from
    scratch after every step and asserts that both agree.
    """
    m = exact.as_vector(m)
    bad = {(bc.u, bc.v): bc for bc in find_bad(fan, m)}
    steps = []
    trace = []
    while bad:
        trace.append(mu(bad.values()))
        choice = select_bad(list(bad.values()), fan)
        u, v = choice.u, choice.v
        # log the positive side first
        if exact.pairing(m, fan.rays[u]) < 0:
            u, v = v, u
        hosts = [c for c in fan.cones if u in c and v in c]
        fan, s = star_subdivide(fan, u, v)
        del bad[(choice.u, choice.v)]
        for w in sorted({w for c in hosts for w in c}):
            bc = _bad(fan, m, s, w)
            if bc is not None:
                bad[(bc.u, bc.v)] = bc
        step = BlowupStep(start_step + len(steps), m, fan.rays[u], fan.rays[v],
                          fan.rays[s], u, v, s)
        steps.append(step)
        if full_rescan:
            fresh = {(bc.u, bc.v): bc for bc in find_bad(fan, m)}
            assert fresh == bad, "incremental bad-cone update diverged"
        if on_step is not None:
            on_step(fan, step)
    trace.append((0, 0))
    return fan, steps, trace


def adapt_all(fan: Fan, normals=None, early_stop: bool = False,
              full_rescan: bool = False,
              on_step: Callable[[Fan, BlowupStep], None] | None = None):
    """Adapt to every wall normal of the input fan, in lexicographic order.

    The normals are fixed from the input fan and never recomputed.  With
    ``early_stop`` the loop halts after the first normal whose result is
    already projective (checked by exact LP).
    """
    if normals is None:
        normals = ordered_normals(fan)
    log = BlowupLog(per_normal={tuple(m): 0 for m in normals})
    for m in normals:
        fan, steps, _ = adapt(fan, m, start_step=log.total + 1,
                              full_rescan=full_rescan, on_step=on_step)
        log.steps.extend(steps)
        log.per_normal[tuple(m)] = len(steps)
        logger.debug("normal %s: %d subdivisions", m, len(steps))
        if early_stop and steps:
            from .certificates import certify_lp, SupportFunction
            if isinstance(certify_lp(fan), SupportFunction):
                logger.info("stopping early: fan is projective after normal %s", m)
                break
    if not early_stop:
        for m in normals:
            if not is_adapted(fan, m):
                raise AssertionError(f"final fan is not adapted to {m}")
    return fan, log
