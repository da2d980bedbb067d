"""CPLEX-style LP text output and ``name value`` solution input.

Only integers are written. Each row is multiplied by the least common
denominator of its coefficients and right-hand side; the objective is
multiplied by the common denominator of its coefficients and constant,
and that factor is recorded in a ``\\ objective scale`` comment so the
solver's objective value can be mapped back.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping, TextIO

from .ir import BINARY, CONTINUOUS, ModelError, ModelIR

INTEGER = "integer"
TERMS_PER_LINE = 8
BINARY_TOLERANCE = Fraction(1, 10**6)


def _denominator_lcm(values) -> int:
    out = 1
    for x in values:
        out = math.lcm(out, Fraction(x).denominator)
    return out


def _linear(terms, scale: int) -> list[str]:
    pieces = []
    for name, coef in terms:
        c = coef * scale
        assert c.denominator == 1
        c = int(c)
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = name if mag == 1 else f"{mag} {name}"
        pieces.append(f"{sign} {body}")
    if pieces and pieces[0].startswith("+ "):
        pieces[0] = pieces[0][2:]
    return pieces


def _emit(out: list[str], head: str, pieces: list[str], tail: str = "") -> None:
    chunks = [pieces[i:i + TERMS_PER_LINE] for i in range(0, len(pieces), TERMS_PER_LINE)] or [[]]
    for i, chunk in enumerate(chunks):
        prefix = f" {head} " if i == 0 else "   "
        line = prefix + " ".join(chunk)
        if i == len(chunks) - 1 and tail:
            line += " " + tail
        out.append(line.rstrip())


def objective_scale(model: ModelIR) -> int:
    return _denominator_lcm([c for _, c in model.objective] + [model.objective_constant])


def lp_text(model: ModelIR) -> str:
    model.validate()
    out = [f"\\ model {model.name}"]
    scale = objective_scale(model)
    out.append(f"\\ objective scale {scale}")
    out.append("Minimize")
    pieces = _linear(model.objective, scale)
    const = int(model.objective_constant * scale)
    if const:
        pieces.append(f"{'-' if const < 0 else '+'} {abs(const)}")
        if pieces[0].startswith("+ "):
            pieces[0] = pieces[0][2:]
    if not pieces:
        pieces = [f"0 {model.variables[0].name}"] if model.variables else ["0"]
    _emit(out, "obj:", pieces)

    out.append("Subject To")
    for c in model.constraints:
        row_scale = _denominator_lcm([coef for _, coef in c.terms] + [c.rhs])
        pieces = _linear(c.terms, row_scale)
        if not pieces:
            raise ModelError(f"row {c.name} has no terms")
        _emit(out, f"{c.name}:", pieces, f"{c.sense} {int(c.rhs * row_scale)}")

    out.append("Bounds")
    for v in model.variables:
        if v.name in model.fixings:
            out.append(f" {v.name} = {_number(model.fixings[v.name])}")
        elif v.kind == CONTINUOUS:
            if v.lower == 0 and v.upper is None:
                continue
            lo = _number(v.lower)
            hi = "+inf" if v.upper is None else _number(v.upper)
            out.append(f" {lo} <= {v.name} <= {hi}")
    for section, kind in (("Binaries", BINARY), ("Generals", INTEGER)):
        names = [v.name for v in model.variables if v.kind == kind]
        if names:
            out.append(section)
            for i in range(0, len(names), TERMS_PER_LINE):
                out.append(" " + " ".join(names[i:i + TERMS_PER_LINE]))
    out.append("End")
    return "\n".join(out) + "\n"


def _number(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    # bounds only ever hold 0/1 fixings here; keep a decimal fallback for generality
    return repr(float(x))


def write_lp(model: ModelIR, sink: TextIO) -> None:
    sink.write(lp_text(model))


def read_solution(text: str | TextIO, idx) -> dict[str, Fraction]:
    """Parse a solution file into a full assignment over ``idx.var_kinds``.

    Accepted lines: ``name value``; ``#`` comments (Gurobi ``.sol`` style);
    CBC rows ``index name value [reduced cost]``. Unlisted variables are 0;
    binaries within 1e-6 of 0 or 1 are rounded.
    """
    if not isinstance(text, str):
        text = text.read()
    kinds: Mapping[str, str] = idx.var_kinds
    point = {name: Fraction(0) for name in kinds}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) >= 3 and parts[0].isdigit():
            parts = parts[1:3]
        if len(parts) != 2:
            raise ModelError(f"line {lineno}: expected 'name value', got {raw!r}")
        name, raw_value = parts
        if name not in kinds:
            raise ModelError(f"line {lineno}: unknown variable {name!r}")
        try:
            value = Fraction(raw_value)
        except (ValueError, ZeroDivisionError):
            raise ModelError(f"line {lineno}: bad value {raw_value!r}") from None
        if kinds[name] in (BINARY, INTEGER):
            rounded = round(value)
            if abs(value - rounded) > BINARY_TOLERANCE or (kinds[name] == BINARY and rounded not in (0, 1)):
                raise ModelError(f"line {lineno}: {name} = {raw_value} is not integral")
            value = Fraction(rounded)
        point[name] = value
    return point


def objective_from_lp_value(value, model: ModelIR) -> Fraction:
    """Map an objective value reported for the written LP back to model units."""
    return Fraction(value) / objective_scale(model)


__all__ = ["INTEGER", "lp_text", "objective_from_lp_value", "objective_scale", "read_solution", "write_lp"]
