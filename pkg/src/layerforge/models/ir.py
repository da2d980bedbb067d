"""Solver-agnostic linear model: typed variables, linear rows, linear objective."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

BINARY = "binary"
CONTINUOUS = "continuous"

LE, EQ, GE = "<=", "=", ">="

Terms = tuple[tuple[str, Fraction], ...]


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class Var:
    name: str
    kind: str = BINARY
    lower: Fraction = Fraction(0)
    upper: Fraction | None = Fraction(1)


@dataclass(frozen=True)
class Constraint:
    name: str
    terms: Terms
    sense: str
    rhs: Fraction
    family: str = ""

    def activity(self, point: Mapping[str, Fraction]) -> Fraction:
        return sum((c * point[v] for v, c in self.terms), Fraction(0))

    def holds(self, point: Mapping[str, Fraction]) -> bool:
        lhs = self.activity(point)
        if self.sense == LE:
            return lhs <= self.rhs
        if self.sense == GE:
            return lhs >= self.rhs
        return lhs == self.rhs


@dataclass
class ModelIR:
    """A minimisation MIP.

    ``fixings`` pins declared variables to a value; they are kept apart
    from ``constraints`` so row counts match the textbook formulas.
    """

    name: str
    variables: list[Var] = field(default_factory=list)
    constraints: list[Constraint] = field(default_factory=list)
    objective: Terms = ()
    objective_constant: Fraction = Fraction(0)
    fixings: dict[str, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        self._index = {v.name: i for i, v in enumerate(self.variables)}

    # -- construction ---------------------------------------------------
    def add_var(self, name: str, kind: str = BINARY, lower=0, upper=1) -> str:
        if name in self._index:
            raise ModelError(f"duplicate variable {name}")
        self._index[name] = len(self.variables)
        self.variables.append(Var(name, kind, Fraction(lower), None if upper is None else Fraction(upper)))
        return name

    def add_constraint(self, name: str, terms: Iterable[tuple[str, object]], sense: str, rhs=0, family: str = "") -> None:
        self.constraints.append(Constraint(name, merge_terms(terms), sense, Fraction(rhs), family))

    def set_objective(self, terms: Iterable[tuple[str, object]], constant=0) -> None:
        self.objective = merge_terms(terms)
        self.objective_constant = Fraction(constant)

    def fix(self, name: str, value) -> None:
        if name not in self._index:
            raise ModelError(f"cannot fix undeclared variable {name}")
        self.fixings[name] = Fraction(value)

    # -- queries --------------------------------------------------------
    @property
    def var_kinds(self) -> dict[str, str]:
        return {v.name: v.kind for v in self.variables}

    def var(self, name: str) -> Var:
        return self.variables[self._index[name]]

    def has_var(self, name: str) -> bool:
        return name in self._index

    @property
    def num_vars(self) -> int:
        return len(self.variables)

    @property
    def num_constraints(self) -> int:
        return len(self.constraints)

    def family_counts(self) -> Counter:
        return Counter(c.family for c in self.constraints)

    def validate(self) -> None:
        """Every referenced name must be declared."""
        for c in self.constraints:
            for v, _ in c.terms:
                if v not in self._index:
                    raise ModelError(f"row {c.name} references undeclared {v}")
        for v, _ in self.objective:
            if v not in self._index:
                raise ModelError(f"objective references undeclared {v}")
        for v in self.fixings:
            if v not in self._index:
                raise ModelError(f"fixing of undeclared {v}")

    def violations(self, point: Mapping[str, Fraction]) -> list[str]:
        """Names of violated rows, bounds, integrality conditions and fixings."""
        bad = []
        for v in self.variables:
            if v.name not in point:
                bad.append(f"missing:{v.name}")
                continue
            x = point[v.name]
            if x < v.lower or (v.upper is not None and x > v.upper):
                bad.append(f"bound:{v.name}")
            if v.kind == BINARY and x not in (0, 1):
                bad.append(f"integrality:{v.name}")
        if bad:
            return bad
        bad.extend(f"fixing:{n}" for n, val in self.fixings.items() if point[n] != val)
        bad.extend(c.name for c in self.constraints if not c.holds(point))
        return bad


def merge_terms(terms: Iterable[tuple[str, object]]) -> Terms:
    """Combine repeated variables, drop zero coefficients, keep first-seen order."""
    acc: dict[str, Fraction] = {}
    for name, coef in terms:
        acc[name] = acc.get(name, Fraction(0)) + Fraction(coef)
    return tuple((n, c) for n, c in acc.items() if c != 0)


def model_objective_at(point: Mapping[str, Fraction], model: ModelIR) -> Fraction:
    """Exact objective value of ``model`` at ``point``."""
    total = model.objective_constant
    for name, coef in model.objective:
        if name not in point:
            raise ModelError(f"point assigns no value to {name}")
        total += coef * Fraction(point[name])
    return total
