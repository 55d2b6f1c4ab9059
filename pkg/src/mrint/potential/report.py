"""Analysis report document: exact-preserving JSON encoding and text rendering."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any

from .gaussian import Gaussian

EXIT_PASS = 0
EXIT_INPUT_ERROR = 1
EXIT_FAIL = 2
EXIT_INCONCLUSIVE = 3


def encode_number(x) -> Any:
    """Rationals become ``"n/d"`` strings; complex values ``{"re", "im"}``."""
    if isinstance(x, bool):
        return x
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)
    if isinstance(x, Gaussian):
        if not x.im:
            return encode_number(x.re)
        return {"re": encode_number(x.re), "im": encode_number(x.im)}
    if isinstance(x, (float, complex)):
        z = complex(x)
        return {"re": z.real, "im": z.imag}
    # numpy scalars
    return encode_number(complex(x))


def decode_number(v):
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, dict):
        re, im = v["re"], v["im"]
        if isinstance(re, str):
            return Gaussian(Fraction(re), Fraction(im)).simplify()
        return complex(re, im)
    raise TypeError(f"not an encoded number: {v!r}")


def format_number(v) -> str:
    """Short human form of an encoded number."""
    x = decode_number(v) if not isinstance(v, (Fraction, complex, Gaussian)) else v
    if isinstance(x, complex):
        if abs(x.imag) <= 1e-12 * max(1.0, abs(x.real)):
            return f"{x.real:.12g}"
        return f"{x.real:.12g}{x.imag:+.12g}i"
    return str(x)


@dataclass
class AnalysisReport:
    input: str
    darboux: dict
    spectrum: dict
    order1: dict
    order2: dict
    galois: dict | None
    jordan: dict
    fastpath: dict
    euler: dict | None = None
    warnings: list[str] = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        if self.order1["verdict"] == "fail":
            return EXIT_FAIL
        if self.jordan["status"] == "fail":
            return EXIT_FAIL
        if self.order2["verdict"] == "fail":
            return EXIT_FAIL
        if self.order2["verdict"] != "pass":
            return EXIT_INCONCLUSIVE
        if self.euler is not None and not self.euler["passed"]:
            return EXIT_INCONCLUSIVE
        return EXIT_PASS

    @property
    def verdict(self) -> str:
        return {EXIT_PASS: "pass", EXIT_FAIL: "fail", EXIT_INCONCLUSIVE: "inconclusive"}[self.exit_code]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["verdict"] = self.verdict
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "AnalysisReport":
        d = dict(d)
        d.pop("verdict", None)
        return cls(**d)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)

    def render_text(self) -> str:
        lines = [f"potential: {self.input}"]
        dp = self.darboux
        pt = ", ".join(format_number(x) for x in dp["point"])
        lines.append(f"darboux point: ({pt})  multiplier {format_number(dp['multiplier'])}  [{dp['mode']}]")
        npt = ", ".join(format_number(x) for x in dp["normalized_point"])
        lines.append(f"normalized point: ({npt})")
        ev = ", ".join(format_number(x) for x in self.spectrum["eigenvalues"])
        ps = ", ".join("-" if p is None else str(p) for p in self.spectrum["p_indices"])
        lines.append(f"spectrum: [{ev}]  p = [{ps}]")
        lines.append(f"order 1: {self.order1['verdict']}")
        if self.order1.get("failing_eigenvalues"):
            bad = ", ".join(format_number(x) for x in self.order1["failing_eigenvalues"])
            lines.append(f"  eigenvalues without integer p: {bad}")
        if self.jordan["status"] != "diagonalizable":
            lines.append(f"jordan: {self.jordan['status']}  {self.jordan.get('note', '')}".rstrip())
        o2 = self.order2
        lines.append(f"order 2: {o2['verdict']}" + (f"  ({o2['note']})" if o2.get("note") else ""))
        for v in o2.get("violations", []):
            p = ",".join(map(str, v["p_triple"]))
            lines.append(f"  T[{v['i']},{v['j']},{v['k']}] = {format_number(v['value'])}  with A[{p}] = 0")
        fp = self.fastpath
        lines.append(f"fast path: {'applies' if fp['applies'] else 'does not apply'}" + (f"  ({fp['reason']})" if fp.get("reason") else ""))
        if self.galois:
            lines.append(f"galois group: {self.galois['class']}")
            lines.append(f"picard-vessiot field: {self.galois['pv_field']}")
        if self.euler is not None and not self.euler["passed"]:
            lines.append("euler consistency: FAILED")
        for w in self.warnings:
            lines.append(f"warning: {w}")
        lines.append(f"verdict: {self.verdict}")
        return "\n".join(lines) + "\n"


def exit_code_for(reports: list[AnalysisReport]) -> int:
    """Any failing point certifies non-integrability; otherwise the worst of the rest."""
    codes = [r.exit_code for r in reports]
    if EXIT_FAIL in codes:
        return EXIT_FAIL
    if EXIT_INCONCLUSIVE in codes:
        return EXIT_INCONCLUSIVE
    return EXIT_PASS
