"""Command-line front end.

Usage::

    toricmot compute|strata|oracle|check-nicaise --input FILE [--series S]
        [--mode local|global] [--normal] [--expand N] [--guard G] [--json OUT]

Exit codes: 0 success, 2 invalid input, 3 certification failure, 4 flag misuse.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from . import __version__
from .motser import DEFAULT_GUARD, CertificationError, saturation_defect
from .report import (
    MODE_CHOICES,
    SERIES_CHOICES,
    InputSpec,
    build_compute,
    build_nicaise,
    build_oracle,
    build_strata,
    render_text,
)
from .toricsg import SemigroupError, build_semigroup

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

EXIT_OK, EXIT_INPUT, EXIT_CERT, EXIT_FLAGS = 0, 2, 3, 4


class InputError(ValueError):
    """Malformed or invalid input document."""


class FlagError(ValueError):
    """Inconsistent command-line flags."""


def _line_col(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def _element_offsets(text: str) -> list[int]:
    """Start offsets of the top-level elements of the generator array, best effort."""
    m = re.search(r'["\']?(?:generators|gens)["\']?\s*[:=]\s*\[', text)
    if not m:
        return []
    out, depth, i, in_str, start_next = [], 0, m.end(), None, True
    while i < len(text):
        ch = text[i]
        if in_str:
            if ch == "\\":
                i += 1
            elif ch == in_str:
                in_str = None
        elif ch in "\"'":
            in_str = ch
            if depth == 0 and start_next:
                out.append(i)
                start_next = False
        elif ch == "[":
            if depth == 0 and start_next:
                out.append(i)
                start_next = False
            depth += 1
        elif ch == "]":
            if depth == 0:
                break
            depth -= 1
        elif ch == "," and depth == 0:
            start_next = True
        elif ch == "#":
            j = text.find("\n", i)
            i = len(text) if j < 0 else j
            continue
        elif not ch.isspace() and depth == 0 and start_next:
            out.append(i)
            start_next = False
        i += 1
    return out


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def parse_input(text: str, source: str = "<input>", toml: bool = False) -> dict:
    """Parse a JSON or TOML input document into a plain dict of fields.

    Raises:
        InputError: with ``source:line:col`` diagnostics where available.
    """
    try:
        doc = tomllib.loads(text) if toml else json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    except tomllib.TOMLDecodeError as exc:
        raise InputError(f"{source}: {exc}") from None
    if not isinstance(doc, dict):
        raise InputError(f"{source}:1:1: top level must be an object")
    known = {"lattice_rank", "d", "generators", "gens", "normal", "mode", "series", "expand", "smax_guard", "guard"}
    extra = sorted(set(doc) - known)
    if extra:
        raise InputError(f"{source}: unknown field(s) {extra}")
    d = doc.get("lattice_rank", doc.get("d"))
    gens = doc.get("generators", doc.get("gens"))
    if not _is_int(d) or d < 0:
        raise InputError(f"{source}: lattice_rank must be a nonnegative integer")
    if not isinstance(gens, list):
        raise InputError(f"{source}: generators must be an array")
    offsets = _element_offsets(text)
    vecs = []
    for k, g in enumerate(gens):
        where = f"{source}:{':'.join(map(str, _line_col(text, offsets[k])))}" if k < len(offsets) else source
        if _is_int(g) and d == 1:
            g = [g]
        if not isinstance(g, list) or not all(_is_int(x) for x in g):
            raise InputError(f"{where}: generator {k + 1} is not an array of integers: {g!r}")
        if len(g) != d:
            raise InputError(f"{where}: generator {k + 1} has length {len(g)}, expected {d}")
        vecs.append(tuple(g))
    out = {"lattice_rank": d, "generators": tuple(vecs)}
    for key in ("normal", "mode", "series", "expand"):
        if key in doc:
            out[key] = doc[key]
    if "smax_guard" in doc or "guard" in doc:
        out["smax_guard"] = doc.get("smax_guard", doc.get("guard"))
    return out


def make_spec(fields: dict, args: argparse.Namespace) -> InputSpec:
    """Merge file fields with command-line overrides and check the flags."""
    merged = dict(fields)
    for key, val in (("normal", args.normal or None), ("mode", args.mode), ("series", args.series), ("expand", args.expand), ("smax_guard", args.guard)):
        if val is not None:
            merged[key] = val
    spec = InputSpec(
        lattice_rank=merged["lattice_rank"],
        generators=merged["generators"],
        normal=merged.get("normal", False),
        mode=merged.get("mode", "local"),
        series=merged.get("series", "arithmetic"),
        expand=merged.get("expand"),
        smax_guard=merged.get("smax_guard", DEFAULT_GUARD),
    )
    if not isinstance(spec.normal, bool):
        raise FlagError("normal must be a boolean")
    if spec.mode not in MODE_CHOICES:
        raise FlagError(f"mode must be one of {MODE_CHOICES}")
    if spec.series not in SERIES_CHOICES:
        raise FlagError(f"series must be one of {SERIES_CHOICES}")
    if spec.expand is not None and (not _is_int(spec.expand) or spec.expand < 0):
        raise FlagError("expand must be a nonnegative integer")
    if not _is_int(spec.smax_guard) or spec.smax_guard < 1:
        raise FlagError("guard must be a positive integer")
    if spec.mode == "global" and not spec.normal:
        raise FlagError("--mode=global requires --normal")
    if args.command == "oracle":
        if spec.expand is None:
            raise FlagError("oracle requires --expand N")
        if spec.mode == "global":
            raise FlagError("oracle supports only --mode=local")
    return spec


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_FLAGS, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="toricmot", description="Motivic Poincare series of affine toric varieties.")
    p.add_argument("--version", action="version", version=f"toricmot {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in ("compute", "strata", "oracle", "check-nicaise"):
        s = sub.add_parser(name)
        s.add_argument("--input", required=True, help="JSON or TOML input document")
        s.add_argument("--series", choices=SERIES_CHOICES)
        s.add_argument("--mode", choices=MODE_CHOICES)
        s.add_argument("--normal", action="store_true", help="assert the semigroup is saturated")
        s.add_argument("--expand", type=int, metavar="N", help="expand through T^N")
        s.add_argument("--guard", type=int, metavar="G", help="reconstruction guard width")
        s.add_argument("--json", metavar="OUT", help="write the JSON report to OUT ('-' for stdout)")
    return p


BUILDERS = {"compute": build_compute, "strata": build_strata, "oracle": build_oracle, "check-nicaise": build_nicaise}


def run(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        path = Path(args.input)
        try:
            text = path.read_text()
        except OSError as exc:
            raise InputError(f"{args.input}: {exc.strerror}") from None
        fields = parse_input(text, args.input, toml=path.suffix.lower() == ".toml")
        spec = make_spec(fields, args)
        S = build_semigroup(spec.lattice_rank, [list(g) for g in spec.generators], saturated=spec.normal)
        if spec.normal:
            missing = saturation_defect(S)
            if missing:
                raise SemigroupError(f"--normal given but the semigroup is not saturated: {list(missing[0])} is missing")
        doc = BUILDERS[args.command](S, spec)
    except FlagError as exc:
        print(f"toricmot: flag error: {exc}", file=sys.stderr)
        return EXIT_FLAGS
    except (InputError, SemigroupError) as exc:
        print(f"toricmot: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CertificationError as exc:
        print(f"toricmot: certification failed: {exc}", file=sys.stderr)
        return EXIT_CERT
    except ValueError as exc:
        print(f"toricmot: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    payload = doc.to_json()
    if args.json == "-":
        sys.stdout.write(payload)
        return EXIT_OK
    if args.json:
        Path(args.json).write_text(payload)
    sys.stdout.write(render_text(doc.to_dict()))
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
