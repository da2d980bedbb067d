"""Linear model IR, the QLA/CGL builders, layering codecs and LP-file I/O."""

from __future__ import annotations

from typing import Mapping

from fractions import Fraction

from ..metrics import Layering
from .cgl import CGL_VARIANTS, CglIndex, build_cgl, decode_cgl, encode_cgl
from .ir import BINARY, CONTINUOUS, Constraint, ModelError, ModelIR, Var, model_objective_at
from .lp import read_solution, write_lp
from .qla import QLA_VARIANTS, QlaIndex, build_qla, decode_qla, encode_qla


def encode_layering(l: Layering, idx: QlaIndex | CglIndex) -> dict[str, Fraction]:
    """Variable assignment representing ``l`` in the model behind ``idx``."""
    if isinstance(idx, QlaIndex):
        return encode_qla(l, idx)
    return encode_cgl(l, idx)


def decode_assignment(point: Mapping[str, Fraction], idx: QlaIndex | CglIndex) -> Layering:
    if isinstance(idx, QlaIndex):
        return decode_qla(point, idx)
    return decode_cgl(point, idx)


def build_model(family: str, g, Y: int, variant, scheme, first_layer_constraint: bool = False):
    family = family.lower()
    if family == "qla":
        return build_qla(g, Y, variant, scheme)
    if family == "cgl":
        return build_cgl(g, Y, variant, scheme, first_layer_constraint)
    raise ModelError(f"unknown model family {family!r}")


__all__ = [
    "BINARY", "CONTINUOUS", "CGL_VARIANTS", "QLA_VARIANTS", "CglIndex", "Constraint", "ModelError",
    "ModelIR", "QlaIndex", "Var", "build_cgl", "build_model", "build_qla", "decode_assignment",
    "encode_layering", "model_objective_at", "read_solution", "write_lp",
]
