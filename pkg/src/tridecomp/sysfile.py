"""System files and result JSON.

A system file::

    # comments run to the end of the line
    vars x1 x2
    x2*(x1+x2)*(x1^2-2)
    x2*(x1+x2)*(x2^2-2)
    equidim 0:
      (x1-2*x2)^2-2
      (x1+x2)^2-8
    equidim 1: x2*(x1+x2)
    override:
      lambda 1 0
      lambda 0 1
      alpha 1 1

System polynomials come before the first block.  A block header may carry
its first entry after the colon.  Indentation is not significant.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import List, Optional, Tuple

from .chains import chain_from_json
from .decompose import CoverEntry, DecompositionResult, EquidimPart, Overrides, SystemInput
from .poly import PolyParseError, VarOrder, parse_poly

FORMAT_VERSION = 1
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")
_EQUIDIM = re.compile(r"equidim\s+(\S+)\s*:(.*)$")
_OVERRIDE = re.compile(r"override\s*:(.*)$")
_OVERRIDE_KEYS = ("lambda", "alpha", "y1", "y2")


class SystemFileError(ValueError):
    def __init__(self, msg: str, line: int, col: int = 1):
        super().__init__(f"line {line}, col {col}: {msg}")
        self.line = line
        self.col = col


def _strip_comment(line: str) -> str:
    k = line.find("#")
    return line if k < 0 else line[:k]


def _rational(tok: str, line: int, col: int) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise SystemFileError(f"expected a rational number, got {tok!r}", line, col) from None


def _numbers(text: str, line: int, col: int) -> List[Fraction]:
    out = []
    for m in re.finditer(r"\S+", text):
        out.append(_rational(m.group(), line, col + m.start()))
    return out


def _poly(text: str, order: VarOrder, line: int, col: int):
    try:
        return parse_poly(text, order)
    except PolyParseError as e:
        raise SystemFileError(e.args[0] if e.args else "syntax error", line, col + e.pos) from None


def parse_system_file(text: str) -> Tuple[SystemInput, Overrides, bool]:
    """Parse a system file.

    Returns the input, the overrides, and whether an override block was
    present (deterministic mode requires one).
    """
    order: Optional[VarOrder] = None
    polys = []
    parts: List[EquidimPart] = []
    ov = Overrides()
    has_override = False
    block = None  # None: system polynomials, EquidimPart, or "override"
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = _strip_comment(raw)
        stripped = body.strip()
        if not stripped:
            continue
        col = len(body) - len(body.lstrip()) + 1
        if order is None:
            words = stripped.split()
            if words[0] != "vars":
                raise SystemFileError("the first line must declare variables with 'vars'", lineno, col)
            names = words[1:]
            if not names:
                raise SystemFileError("no variables declared", lineno, col)
            for nm in names:
                if not _NAME.match(nm):
                    raise SystemFileError(f"bad variable name {nm!r}", lineno, col + body.strip().find(nm))
            if len(set(names)) != len(names):
                raise SystemFileError("duplicate variable name", lineno, col)
            order = VarOrder(names)
            continue
        m = _EQUIDIM.match(stripped)
        if m:
            try:
                d = int(m.group(1))
            except ValueError:
                raise SystemFileError(f"bad dimension {m.group(1)!r}", lineno, col + 8) from None
            if any(p.d == d for p in parts):
                raise SystemFileError(f"second equidim block for dimension {d}", lineno, col)
            block = EquidimPart(d, [])
            parts.append(block)
            rest = m.group(2)
            if rest.strip():
                block.polys.append(_poly(rest, order, lineno, col + stripped.index(":") + 1))
            continue
        m = _OVERRIDE.match(stripped)
        if m:
            if has_override:
                raise SystemFileError("second override block", lineno, col)
            has_override = True
            block = "override"
            rest = m.group(1)
            if rest.strip():
                _override_line(rest, ov, order, lineno, col + stripped.index(":") + 1)
            continue
        if block is None:
            polys.append(_poly(stripped, order, lineno, col))
        elif block == "override":
            _override_line(stripped, ov, order, lineno, col)
        else:
            block.polys.append(_poly(stripped, order, lineno, col))
    if order is None:
        raise SystemFileError("empty system file", 1)
    if not polys:
        raise SystemFileError("no polynomials given", lineno if text else 1)
    for p in parts:
        if not p.polys:
            raise SystemFileError(f"equidim block {p.d} is empty", lineno)
    if all(f.is_zero() for f in polys):
        raise SystemFileError("all polynomials are zero", lineno)
    inp = SystemInput(polys, order, parts or None)
    return inp, ov, has_override


def _override_line(text: str, ov: Overrides, order: VarOrder, line: int, col: int):
    lead = len(text) - len(text.lstrip())
    text = text.strip()
    key, _, rest = text.partition(" ")
    kcol = col + lead
    if key not in _OVERRIDE_KEYS:
        raise SystemFileError(f"unknown override key {key!r}", line, kcol)
    vals = _numbers(rest, line, kcol + len(key) + 1)
    if key == "lambda":
        if not vals:
            raise SystemFileError("empty lambda row", line, kcol)
        if ov.lambdas is None:
            ov.lambdas = []
        ov.lambdas.append(vals)
        return
    if len(vals) != order.n:
        raise SystemFileError(f"{key} needs {order.n} coordinates, got {len(vals)}", line, kcol)
    if getattr(ov, key) is not None:
        raise SystemFileError(f"{key} given twice", line, kcol)
    setattr(ov, key, vals)


def _q(x: Fraction) -> str:
    return str(Fraction(x))


def print_system_file(inp: SystemInput, ov: Optional[Overrides] = None, with_override: Optional[bool] = None) -> str:
    """Canonical text; parsing it gives back the same input and overrides."""
    lines = ["vars " + " ".join(inp.order.names)]
    lines += [f.to_str() for f in inp.polys]
    for part in sorted(inp.equidim_parts or [], key=lambda p: p.d):
        lines.append(f"equidim {part.d}:")
        lines += ["  " + p.to_str() for p in part.polys]
    if with_override is None:
        with_override = ov is not None and not ov.empty()
    if with_override:
        lines.append("override:")
        if ov is not None:
            for row in ov.lambdas or []:
                lines.append("  lambda " + " ".join(_q(c) for c in row))
            for key in ("alpha", "y1", "y2"):
                vals = getattr(ov, key)
                if vals is not None:
                    lines.append(f"  {key} " + " ".join(_q(c) for c in vals))
    return "\n".join(lines) + "\n"


def load_system_file(path: str):
    with open(path, encoding="utf-8") as fh:
        return parse_system_file(fh.read())


# result JSON


class ResultFormatError(ValueError):
    pass


def dump_result(result: DecompositionResult) -> str:
    return json.dumps(result.to_json(), indent=2, sort_keys=False) + "\n"


def result_from_json(obj: dict) -> DecompositionResult:
    if obj.get("format") != FORMAT_VERSION:
        raise ResultFormatError(f"unsupported result format {obj.get('format')!r}")
    try:
        order = VarOrder(obj["variables"])
        chains = [chain_from_json(c, order) for c in obj["chains"]]
        cover = {}
        for key, text in obj.get("projections", {}).items():
            S = () if key == "-" else tuple(order.index(v) for v in key.split(","))
            cover[S] = parse_poly(text, order)
        rlog = obj.get("random_log", {})
        alpha = tuple(Fraction(a) for a in rlog.get("alpha", ()))
        entries = [
            CoverEntry(
                tuple(order.index(v) for v in e["subset"]),
                [parse_poly(t, order) for t in e["polys"]],
                alpha,
                bool(e.get("trivial", False)),
            )
            for e in obj.get("separated", [])
        ]
    except (KeyError, TypeError, PolyParseError) as e:
        raise ResultFormatError(f"malformed result: {e}") from None
    return DecompositionResult(chains, order, rlog, obj.get("probability_report", {}), cover, entries)


def load_result(path: str) -> DecompositionResult:
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as e:
            raise ResultFormatError(f"not JSON: {e}") from None
    return result_from_json(obj)


__all__ = [
    "SystemFileError",
    "ResultFormatError",
    "parse_system_file",
    "print_system_file",
    "load_system_file",
    "dump_result",
    "result_from_json",
    "load_result",
]
