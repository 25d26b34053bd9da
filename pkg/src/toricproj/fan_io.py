"""JSON formats for fans, support functions, blow-up logs and certificates.

Every document carries a ``schema`` tag.  Ray order in a fan file defines the
ray indices used by every other artifact, so nothing here ever reorders rays.
Rationals are written as ``"p"`` or ``"p/q"`` strings.
"""
from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import exact
from .adapt import BlowupLog, BlowupStep
from .certificates import FarkasCertificate, SupportFunction
from .fan import Fan, InvariantViolation

FAN_SCHEMA = "fan/1"
SUPPORT_SCHEMA = "support/1"
LOG_SCHEMA = "blowuplog/1"
CERT_SCHEMA = "cert/1"


class ParseError(ValueError):
    pass


class UnknownName(KeyError):
    pass


def _load(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"line {e.lineno} column {e.colno}: {e.msg}") from None
    if not isinstance(doc, dict):
        raise ParseError("top-level value must be an object")
    return doc


def _expect_schema(doc: dict, schema: str) -> None:
    if doc.get("schema") != schema:
        raise ParseError(f"field 'schema': expected {schema!r}, got {doc.get('schema')!r}")


def _int_list(value, where: str) -> list[int]:
    if not isinstance(value, list) or not all(
            isinstance(x, int) and not isinstance(x, bool) for x in value):
        raise ParseError(f"{where}: expected a list of integers")
    return value


def _dump(doc: dict) -> str:
    # one array per line keeps fixtures diffable
    lines = ["{"]
    items = list(doc.items())
    for k, (key, val) in enumerate(items):
        comma = "," if k < len(items) - 1 else ""
        if isinstance(val, list) and val and isinstance(val[0], (list, dict)):
            lines.append(f"  {json.dumps(key)}: [")
            for j, item in enumerate(val):
                c = "," if j < len(val) - 1 else ""
                lines.append(f"    {json.dumps(item, separators=(', ', ': '))}{c}")
            lines.append(f"  ]{comma}")
        else:
            lines.append(f"  {json.dumps(key)}: {json.dumps(val, separators=(', ', ': '))}{comma}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def parse_fan(text: str) -> Fan:
    doc = _load(text)
    _expect_schema(doc, FAN_SCHEMA)
    dim = doc.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool):
        raise ParseError("field 'dim': expected an integer")
    rays = doc.get("rays")
    cones = doc.get("cones")
    if not isinstance(rays, list) or not isinstance(cones, list):
        raise ParseError("fields 'rays' and 'cones' must be arrays")
    rays = [tuple(_int_list(r, f"rays[{i}]")) for i, r in enumerate(rays)]
    cones = [tuple(_int_list(c, f"cones[{i}]")) for i, c in enumerate(cones)]
    for i, r in enumerate(rays):
        if len(r) != dim:
            raise InvariantViolation(f"rays[{i}]: length {len(r)} != dim {dim}")
    return Fan(tuple(rays), tuple(cones), dim)


def serialize_fan(fan: Fan) -> str:
    return _dump({
        "schema": FAN_SCHEMA,
        "dim": fan.dim,
        "rays": [list(r) for r in fan.rays],
        "cones": [list(c) for c in fan.cones],
    })


def parse_support(text: str) -> SupportFunction:
    doc = _load(text)
    _expect_schema(doc, SUPPORT_SCHEMA)
    vals = doc.get("values")
    if not isinstance(vals, list):
        raise ParseError("field 'values': expected an array")
    out = []
    for i, v in enumerate(vals):
        try:
            out.append(exact.to_fraction(v))
        except (ValueError, TypeError, ZeroDivisionError):
            raise ParseError(f"values[{i}]: {v!r} is not a rational") from None
    if "fan_rays" in doc and doc["fan_rays"] != len(out):
        raise ParseError(f"field 'fan_rays' is {doc['fan_rays']} but {len(out)} values given")
    return SupportFunction(tuple(out))


def serialize_support(h: SupportFunction) -> str:
    return _dump({
        "schema": SUPPORT_SCHEMA,
        "fan_rays": len(h),
        "values": [exact.format_fraction(v) for v in h.values],
    })


def _step_doc(st: BlowupStep) -> dict:
    return {"step": st.step, "normal": list(st.normal), "u": list(st.u), "v": list(st.v),
            "s": list(st.s), "u_idx": st.u_idx, "v_idx": st.v_idx, "s_idx": st.s_idx}


def serialize_log(log: BlowupLog) -> str:
    return _dump({
        "schema": LOG_SCHEMA,
        "steps": [_step_doc(st) for st in log.steps],
        "per_normal": [{"normal": list(m), "count": c} for m, c in log.per_normal.items()],
    })


def parse_log(text: str) -> BlowupLog:
    doc = _load(text)
    _expect_schema(doc, LOG_SCHEMA)
    steps = []
    for i, s in enumerate(doc.get("steps", [])):
        try:
            steps.append(BlowupStep(
                int(s["step"]), tuple(_int_list(s["normal"], f"steps[{i}].normal")),
                tuple(_int_list(s["u"], f"steps[{i}].u")),
                tuple(_int_list(s["v"], f"steps[{i}].v")),
                tuple(_int_list(s["s"], f"steps[{i}].s")),
                int(s["u_idx"]), int(s["v_idx"]), int(s["s_idx"])))
        except KeyError as e:
            raise ParseError(f"steps[{i}]: missing field {e}") from None
        if exact.add(steps[-1].u, steps[-1].v) != steps[-1].s:
            raise ParseError(f"steps[{i}]: s != u + v")
    per = {}
    for i, p in enumerate(doc.get("per_normal", [])):
        try:
            per[tuple(_int_list(p["normal"], f"per_normal[{i}].normal"))] = int(p["count"])
        except KeyError as e:
            raise ParseError(f"per_normal[{i}]: missing field {e}") from None
    if sum(per.values()) != len(steps):
        raise ParseError("per-normal counts do not sum to the number of steps")
    return BlowupLog(steps, per)


def serialize_certificate(cert) -> str:
    if isinstance(cert, SupportFunction):
        return _dump({
            "schema": CERT_SCHEMA, "kind": "ample", "fan_rays": len(cert),
            "values": [exact.format_fraction(v) for v in cert.values],
        })
    mult = [{"wall": list(w), "lambda": exact.format_fraction(l)}
            for w, l in sorted(cert.multipliers.items())]
    return _dump({"schema": CERT_SCHEMA, "kind": "farkas", "multipliers": mult})


def parse_certificate(text: str):
    doc = _load(text)
    _expect_schema(doc, CERT_SCHEMA)
    kind = doc.get("kind")
    if kind == "ample":
        return parse_support(json.dumps({**doc, "schema": SUPPORT_SCHEMA}))
    if kind == "farkas":
        mult = {}
        for i, item in enumerate(doc.get("multipliers", [])):
            try:
                w = tuple(sorted(_int_list(item["wall"], f"multipliers[{i}].wall")))
                mult[w] = exact.to_fraction(item["lambda"])
            except KeyError as e:
                raise ParseError(f"multipliers[{i}]: missing field {e}") from None
            except (ValueError, TypeError, ZeroDivisionError):
                raise ParseError(f"multipliers[{i}].lambda is not a rational") from None
        return FarkasCertificate(mult)
    raise ParseError(f"field 'kind': expected 'ample' or 'farkas', got {kind!r}")


def _simplex_fan(n: int) -> Fan:
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    rays.append(tuple(-1 for _ in range(n)))
    cones = [tuple(j for j in range(n + 1) if j != k) for k in range(n + 1)]
    return Fan(tuple(rays), tuple(cones), n)


def _cube_fan(n: int) -> Fan:
    rays = []
    for i in range(n):
        rays.append(tuple(int(i == j) for j in range(n)))
        rays.append(tuple(-int(i == j) for j in range(n)))
    cones = []
    for signs in range(2 ** n):
        cones.append(tuple(2 * i + ((signs >> i) & 1) for i in range(n)))
    return Fan(tuple(rays), tuple(cones), n)


def _oda75() -> Fan:
    rays = ((1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1),
            (-1, -1, 0), (0, -1, -1), (-1, 0, -1))
    cones = ((1, 2, 3), (1, 2, 7), (1, 3, 6), (1, 6, 7), (2, 3, 5),
             (2, 5, 7), (3, 5, 6), (4, 5, 6), (4, 5, 7), (4, 6, 7))
    return Fan(rays, tuple(tuple(i - 1 for i in c) for c in cones), 3)


def _hexagon() -> Fan:
    rays = ((1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1))
    return Fan(rays, tuple((i, (i + 1) % 6) for i in range(6)), 2)


BUILTINS = {
    "oda75": _oda75,
    "p2": lambda: _simplex_fan(2),
    "p3": lambda: _simplex_fan(3),
    "p1p1": lambda: _cube_fan(2),
    "p1p1p1": lambda: _cube_fan(3),
    "hexagon": _hexagon,
}


def builtin(name: str) -> Fan:
    try:
        return BUILTINS[name]()
    except KeyError:
        raise UnknownName(f"unknown builtin fan {name!r}; known: {', '.join(BUILTINS)}") from None


def oda75_h_table() -> SupportFunction:
    """The shipped ample support function on the adapted Oda fan (h = H/2)."""
    text = resources.files("toricproj").joinpath("data/oda75_H.json").read_text()
    return parse_support(text)


def read_fan(spec: str) -> Fan:
    """Load a fan from a path, or from the corpus via ``builtin:NAME``."""
    if spec.startswith("builtin:"):
        return builtin(spec.split(":", 1)[1])
    return parse_fan(Path(spec).read_text())
