"""Command-line front end.

    mrint analyze -i "-1/q1 + q2^3/q1^4" --darboux "-1,0"
    mrint table --range 7 --blocks
    mrint residue 1 1 4
    mrint selfcheck --range 12

Exit codes: 0 pass, 1 input error, 2 fail (non-integrability certified),
3 inconclusive.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

from .potential.analysis import DegenerateMultiplier, NotDarbouxPoint, NotHomogeneous, parse_potential
from .potential.expr import ParseError, PoleError
from .potential.gaussian import parse_number
from .potential.pipeline import analyze_point
from .potential.report import EXIT_INPUT_ERROR, exit_code_for

EXIT_SELFCHECK_FAILED = 2


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors, which would read as "fail"
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT_ERROR, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    expression: str = ""
    points: list = field(default_factory=list)
    tolerance: float = 1e-9
    int_tolerance: float = 1e-6
    range: int = 7
    jobs: int = 1
    format: str = "text"
    blocks: bool = False
    triple: tuple = ()
    perturb: bool = False

    def __post_init__(self):
        if self.range < 0:
            raise InputError("--range must be nonnegative")
        if self.tolerance <= 0 or self.int_tolerance <= 0:
            raise InputError("tolerances must be positive")
        if self.jobs < 1:
            raise InputError("--jobs must be at least 1")


def parse_point(spec: str) -> list:
    """``"-1,0"``, ``"(1/2, 3+4*i)"``; any decimal switches the point to floating mode."""
    body = spec.strip()
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1]
    if not body.strip():
        raise InputError(f"empty Darboux point {spec!r}")
    parts = [p for p in body.split(",")]
    values, decimal = [], False
    for p in parts:
        try:
            v, dec = parse_number(p)
        except ValueError as exc:
            raise InputError(f"bad coordinate {p.strip()!r} in {spec!r}: {exc}") from None
        values.append(v)
        decimal = decimal or dec
    if decimal:
        values = [complex(v) for v in values]
    return values


def read_input_document(text: str) -> tuple[str, list[str], dict[str, float]]:
    """Either a bare expression or ``key: value`` lines.

    Keys: ``potential``, ``darboux`` (repeatable), ``tolerance``,
    ``int-tolerance``.  ``#`` starts a comment.
    """
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not any(":" in ln for ln in lines):
        return " ".join(lines), [], {}
    expr, points, tols = "", [], {}
    for ln in lines:
        if ":" not in ln:
            raise InputError(f"expected 'key: value', got {ln!r}")
        key, value = (s.strip() for s in ln.split(":", 1))
        key = key.lower()
        if key == "potential":
            expr = value
        elif key == "darboux":
            points.append(value)
        elif key in ("tolerance", "int-tolerance"):
            try:
                tols[key] = float(value)
            except ValueError:
                raise InputError(f"bad {key} {value!r}") from None
        else:
            raise InputError(f"unknown key {key!r}")
    if not expr:
        raise InputError("input document has no 'potential:' line")
    return expr, points, tols


def _resolve_input(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    if os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh:
            return fh.read()
    return arg


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mrint", description="Order-1/order-2 integrability checks for homogeneous potentials of degree -1.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--format", choices=("text", "structured"), default="text")
        sp.add_argument("--jobs", type=int, default=1, help="worker processes for bulk work")

    a = sub.add_parser("analyze", help="analyze a potential at Darboux points")
    a.add_argument("expression", nargs="?", help="inline potential (alternative to --input)")
    a.add_argument("--input", "-i", help="file with the input document, an inline expression, or - for stdin")
    a.add_argument("--darboux", action="append", default=[], help="candidate point, e.g. '-1,0' or '1/2+i,0'")
    a.add_argument("--tolerance", type=float, default=None)
    a.add_argument("--int-tolerance", type=float, default=None)
    common(a)

    t = sub.add_parser("table", help="export the table A")
    t.add_argument("--range", type=int, default=7)
    t.add_argument("--blocks", action="store_true", help="paper-style 8x8 block layout")
    common(t)

    r = sub.add_parser("residue", help="print S_{i,j,k}(alpha)")
    r.add_argument("indices", nargs=3, type=int, metavar="N")
    common(r)

    s = sub.add_parser("selfcheck", help="run the verification suites")
    s.add_argument("--range", type=int, default=12)
    s.add_argument("--perturb-family", action="store_true", help=argparse.SUPPRESS)
    common(s)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    if ns.command == "analyze":
        source = ns.input if ns.input is not None else ns.expression
        if source is None:
            raise InputError("no potential given (use --input or a positional expression)")
        if ns.input is not None and ns.expression is not None:
            raise InputError("give the potential either positionally or with --input, not both")
        expr, doc_points, tols = read_input_document(_resolve_input(source))
        specs = list(doc_points) + list(ns.darboux)
        if not specs:
            raise InputError("at least one --darboux point is required")
        tol = ns.tolerance if ns.tolerance is not None else tols.get("tolerance", 1e-9)
        itol = ns.int_tolerance if ns.int_tolerance is not None else tols.get("int-tolerance", 1e-6)
        return RunConfig(
            "analyze", expr, [parse_point(s) for s in specs], tol, itol, jobs=ns.jobs, format=ns.format
        )
    if ns.command == "table":
        return RunConfig("table", range=ns.range, jobs=ns.jobs, format=ns.format, blocks=ns.blocks)
    if ns.command == "residue":
        if min(ns.indices) < 0:
            raise InputError("indices must be nonnegative")
        return RunConfig("residue", triple=tuple(ns.indices), format=ns.format)
    return RunConfig("selfcheck", range=ns.range, jobs=ns.jobs, format=ns.format, perturb=ns.perturb_family)


# -- commands -----------------------------------------------------------------


def cmd_analyze(cfg: RunConfig, out) -> int:
    try:
        V = parse_potential(cfg.expression)
    except (ParseError, NotHomogeneous, PoleError) as exc:
        raise InputError(str(exc)) from None
    reports = []
    for point in cfg.points:
        try:
            reports.append(analyze_point(V, point, cfg.tolerance, cfg.int_tolerance))
        except (NotDarbouxPoint, DegenerateMultiplier, PoleError, ValueError) as exc:
            raise InputError(f"point ({', '.join(map(str, point))}): {exc}") from None
    if cfg.format == "structured":
        docs = [r.to_dict() for r in reports]
        json.dump(docs[0] if len(docs) == 1 else docs, out, indent=2, ensure_ascii=False)
        out.write("\n")
    else:
        out.write("\n".join(r.render_text() for r in reports))
    return exit_code_for(reports)


def cmd_table(cfg: RunConfig, out) -> int:
    from .table import a_table, export_rows, render_blocks

    if cfg.blocks:
        out.write(render_blocks(a_table(cfg.range, cfg.jobs)))
    elif cfg.format == "structured":
        rows = export_rows(cfg.range, cfg.jobs).split()
        it = iter(rows)
        doc = [{"i": int(i), "j": int(j), "k": int(k), "value": int(v)} for i, j, k, v in zip(it, it, it, it)]
        json.dump(doc, out)
        out.write("\n")
    else:
        out.write(export_rows(cfg.range, cfg.jobs))
    return 0


def cmd_residue(cfg: RunConfig, out) -> int:
    from .gamma import closed_form_f_limit
    from .potential.report import encode_number
    from .residues import s_poly
    from .table import a_entry

    i, j, k = cfg.triple
    r = s_poly(i, j, k)
    closed = None
    if min(i, j, k) >= 1:
        closed = {"alpha_power": 2 if (i + j + k) % 2 else 1, "value": closed_form_f_limit(i, j, k)}
    if cfg.format == "structured":
        doc = {
            "triple": [i, j, k],
            "variants": [{"weight": v.weight, "coefficients": [encode_number(c) for c in v.coeffs]} for v in r.variants()],
            "depends_on_alpha": r.depends_on_alpha,
            "A": a_entry(i, j, k),
        }
        if closed:
            a = closed["alpha_power"]
            doc["closed_form"] = {"alpha_power": a, "value": encode_number(closed["value"]), "matches": r[a] == closed["value"]}
        json.dump(doc, out, indent=2)
        out.write("\n")
        return 0
    out.write(f"S({i},{j},{k})\n")
    for v in r.variants():
        body = "  ".join(f"c{a} = {c}" for a, c in enumerate(v.coeffs))
        out.write(f"  weight {v.weight}: {body}\n")
    if closed:
        a = closed["alpha_power"]
        verdict = "matches" if r[a] == closed["value"] else "DIFFERS"
        out.write(f"  closed form for c{a}: {closed['value']} ({verdict})\n")
    out.write(f"  A = {a_entry(i, j, k)}\n")
    return 0


def cmd_selfcheck(cfg: RunConfig, out) -> int:
    from .selfcheck import run_all

    results = run_all(cfg.range, cfg.jobs, cfg.perturb)
    if cfg.format == "structured":
        doc = [
            {"suite": r.name, "passed": r.passed, "checked": r.checked, "failures": r.failures, "seconds": r.seconds}
            for r in results
        ]
        json.dump(doc, out, indent=2)
        out.write("\n")
    else:
        for r in results:
            status = "ok" if r.passed else "FAIL"
            out.write(f"{r.name:<14} {status:<4} {r.checked:>6} checks  {r.seconds:7.2f}s\n")
            for f in r.failures[:10]:
                out.write(f"    {f}\n")
            if len(r.failures) > 10:
                out.write(f"    ... {len(r.failures) - 10} more\n")
    return 0 if all(r.passed for r in results) else EXIT_SELFCHECK_FAILED


COMMANDS = {"analyze": cmd_analyze, "table": cmd_table, "residue": cmd_residue, "selfcheck": cmd_selfcheck}


_VALUE_FLAGS = {"--darboux": "--darboux", "--input": "--input", "-i": "--input"}


def _attach_values(argv: list[str]) -> list[str]:
    """Glue option values to their flags so that ``--darboux -1,0`` and
    expressions like ``-1/q1`` are not mistaken for options."""
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{_VALUE_FLAGS[tok]}={nxt}")
        elif tok.startswith("-") and not tok.startswith("--") and len(tok) > 2 and ("q" in tok or tok[1].isdigit()):
            out.append(f"--input={tok}")
        else:
            out.append(tok)
    return out


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    argv = sys.argv[1:] if argv is None else list(argv)
    ns = build_parser().parse_args(_attach_values(argv))
    try:
        cfg = config_from_args(ns)
        return COMMANDS[cfg.command](cfg, out)
    except InputError as exc:
        print(f"mrint: error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
