"""Command-line interface: ``toricproj COMMAND ...``.

Exit codes: 0 success, 1 failed verdict, 2 malformed input, 3 non-projective
(``certify`` returned a Farkas certificate).
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import basis as _basis
from . import exact
from .adapt import adapt_all
from .certificates import (CertificateError, SupportFunction, all_bends, certify_lp,
                           certify_sandwich)
from .fan import FanError, f_vector, refines, validate_fan
from .fan_io import (BUILTINS, ParseError, UnknownName, builtin, parse_log, parse_support,
                     read_fan, serialize_certificate, serialize_fan, serialize_log)
from .normals import ordered_normals

logger = logging.getLogger("toricproj")

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_FARKAS = 0, 1, 2, 3


class InputError(Exception):
    pass


def _fmt(v) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _load_fan(spec: str):
    try:
        return read_fan(spec)
    except (OSError, ParseError, FanError, UnknownName, ValueError, TypeError) as e:
        raise InputError(f"{spec}: {e}") from None


def _load_basis(path: str):
    try:
        doc = json.loads(Path(path).read_text())
        rows = doc["matrix"] if isinstance(doc, dict) else doc
        return _basis.check_basis(rows)
    except (OSError, ValueError, KeyError, TypeError) as e:
        raise InputError(f"{path}: {e}") from None


def cmd_validate(args) -> int:
    fan = _load_fan(args.fan)
    rep = validate_fan(fan, check_intersections=not args.skip_intersections)
    print(f"smooth: {str(rep.smooth).lower()}")
    print(f"complete: {str(rep.complete).lower()}")
    print(f"is_fan: {str(rep.is_fan).lower()}")
    for d in rep.diagnostics:
        print(d, file=sys.stderr)
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_normals(args) -> int:
    fan = _load_fan(args.fan)
    for m in ordered_normals(fan):
        print(_fmt(m))
    return EXIT_OK


def cmd_fvector(args) -> int:
    print(_fmt(f_vector(_load_fan(args.fan))))
    return EXIT_OK


def cmd_builtin(args) -> int:
    try:
        fan = builtin(args.name)
    except UnknownName as e:
        raise InputError(str(e.args[0])) from None
    _write(args.out, serialize_fan(fan))
    return EXIT_OK


def summary_text(sigma, gamma, log) -> str:
    lines = ["wall normal\tsubdivisions"]
    for m, c in log.per_normal.items():
        lines.append(f"{_fmt(m)}\t{c}")
    lines.append(f"total {log.total}")
    fs, fg = f_vector(sigma), f_vector(gamma)
    lines.append(f"input f-vector {_fmt(fs)}")
    lines.append(f"final f-vector {_fmt(fg)}")
    lines.append(f"L = {fg[0] - fs[0]}")
    return "\n".join(lines) + "\n"


def cmd_projectivize(args) -> int:
    sigma = _load_fan(args.fan)
    rep = validate_fan(sigma)
    if not (rep.smooth and rep.complete):
        raise InputError("input fan must be smooth and complete: " + "; ".join(rep.diagnostics))
    work = sigma
    if args.basis:
        matrix = _load_basis(args.basis)
        if len(matrix) != sigma.dim:
            raise InputError("basis matrix size does not match the fan dimension")
        work = _basis.to_basis(sigma, matrix)
    gamma, log = adapt_all(work, early_stop=args.early_stop)
    if args.basis:
        gamma = _basis.from_basis(gamma, matrix)
        log = _basis.log_from_basis(log, matrix)
    text = summary_text(sigma, gamma, log)
    sys.stdout.write(text)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "fan.json").write_text(serialize_fan(gamma))
        (out / "log.json").write_text(serialize_log(log))
        (out / "summary.txt").write_text(text)
    if not refines(gamma, sigma):
        print("error: output does not refine the input", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_bends(args) -> int:
    fan = _load_fan(args.fan)
    try:
        h = parse_support(Path(args.support).read_text())
    except (OSError, ParseError) as e:
        raise InputError(f"{args.support}: {e}") from None
    if len(h) != fan.n_rays:
        raise InputError(f"support has {len(h)} values, fan has {fan.n_rays} rays")
    rep = all_bends(fan, h)
    doc = {
        "schema": "bends/1",
        "walls": [{"wall": list(w.ray_indices), "bend": exact.format_fraction(b)}
                  for w, b in rep.bends],
        "min_bend": exact.format_fraction(rep.min_bend),
        "distinct_values": [exact.format_fraction(v) for v in rep.distinct_values],
        "all_positive": rep.all_positive,
    }
    if args.out:
        Path(args.out).write_text(json.dumps(doc, indent=1) + "\n")
    print(f"walls {len(rep)}")
    print(f"min bend {exact.format_fraction(rep.min_bend)}")
    print("distinct " + " ".join(doc["distinct_values"]))
    print(f"all positive: {str(rep.all_positive).lower()}")
    return EXIT_OK if rep.all_positive else EXIT_FAIL


def cmd_certify(args) -> int:
    fan = _load_fan(args.fan)
    if args.method == "lp":
        cert = certify_lp(fan)
    else:
        if not (args.sigma and args.log):
            raise InputError("--method sandwich needs --sigma FAN and --log LOG")
        sigma = _load_fan(args.sigma)
        try:
            log = parse_log(Path(args.log).read_text())
        except (OSError, ParseError) as e:
            raise InputError(f"{args.log}: {e}") from None
        cert = certify_sandwich(sigma, fan, log, ordered_normals(sigma))
    _write(args.out, serialize_certificate(cert))
    if isinstance(cert, SupportFunction):
        print("ample", file=sys.stderr)
        return EXIT_OK
    print("farkas: fan is not projective", file=sys.stderr)
    return EXIT_FARKAS


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="toricproj",
                                description="Exact projectivization of smooth complete fans.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)
    fan_help = "fan file, or builtin:NAME"

    s = sub.add_parser("validate", help="check smoothness, completeness, fan axioms")
    s.add_argument("fan", help=fan_help)
    s.add_argument("--skip-intersections", action="store_true",
                   help="skip the pairwise cone-intersection test")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("normals", help="print ordered wall normals")
    s.add_argument("fan", help=fan_help)
    s.set_defaults(func=cmd_normals)

    s = sub.add_parser("projectivize", help="run the wall adaptation")
    s.add_argument("fan", help=fan_help)
    s.add_argument("--out", help="output directory for fan.json, log.json, summary.txt")
    s.add_argument("--basis", help="JSON n x n integer matrix; columns are the new basis")
    s.add_argument("--early-stop", action="store_true")
    s.set_defaults(func=cmd_projectivize)

    s = sub.add_parser("bends", help="wall bends of a support function")
    s.add_argument("fan", help=fan_help)
    s.add_argument("support")
    s.add_argument("--out")
    s.set_defaults(func=cmd_bends)

    s = sub.add_parser("certify", help="ample or Farkas certificate")
    s.add_argument("fan", help=fan_help)
    s.add_argument("--method", choices=("lp", "sandwich"), default="lp")
    s.add_argument("--sigma", help="original fan (sandwich method)")
    s.add_argument("--log", help="blow-up log (sandwich method)")
    s.add_argument("--out")
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("fvector", help="print the f-vector")
    s.add_argument("fan", help=fan_help)
    s.set_defaults(func=cmd_fvector)

    s = sub.add_parser("builtin", help=f"emit a corpus fan ({', '.join(BUILTINS)})")
    s.add_argument("name")
    s.add_argument("--out")
    s.set_defaults(func=cmd_builtin)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (FanError, CertificateError, _basis.NotUnimodular) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
