"""Radial vector fields whose divergence is minus the singular weight."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError

__all__ = ["FieldKind", "RadialVectorField", "hardy_field", "ckn_field", "field_eval",
           "divergence_fd", "target_divergence"]


class FieldKind(str, enum.Enum):
    HARDY_V = "HardyV"
    CKN_W = "CknW"


@dataclass(frozen=True)
class RadialVectorField:
    """V(x) = x / ((p-n) |x|^p)  or  W(x) = x / ((2b-n) |x|^(2b))."""

    kind: FieldKind
    n: int
    exponent: float

    def __post_init__(self):
        object.__setattr__(self, "kind", FieldKind(self.kind))
        if self.n < 1:
            raise DomainError("n must be positive")
        if self.kind is FieldKind.HARDY_V and self.exponent == self.n:
            raise DomainError("HardyV needs p != n")
        if self.kind is FieldKind.CKN_W and 2 * self.exponent == self.n:
            raise DomainError("CknW needs 2b != n")

    @property
    def power(self) -> float:
        """Exponent s of |x|^-s in both the field and its divergence."""
        return self.exponent if self.kind is FieldKind.HARDY_V else 2.0 * self.exponent

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "n": self.n, "exponent": self.exponent}


def hardy_field(n: int, p: float) -> RadialVectorField:
    return RadialVectorField(FieldKind.HARDY_V, n, p)


def ckn_field(n: int, b: float) -> RadialVectorField:
    return RadialVectorField(FieldKind.CKN_W, n, b)


def field_eval(field: RadialVectorField, x):
    """Evaluate the field at ``x`` (shape ``(n,)`` or ``(m, n)``)."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != field.n:
        raise DomainError(f"expected points in R^{field.n}, got shape {x.shape}")
    r = np.linalg.norm(x, axis=-1, keepdims=True)
    if np.any(r == 0):
        raise DomainError("field is singular at x = 0")
    s = field.power
    return x / ((s - field.n) * r**s)


def target_divergence(field: RadialVectorField, x):
    """-|x|^-s, the divergence both fields are built to have."""
    r = np.linalg.norm(np.asarray(x, dtype=float), axis=-1)
    return -(r ** -field.power)


def divergence_fd(field: RadialVectorField, x, h: float | None = None):
    """Central-difference divergence sum_i (F_i(x + h e_i) - F_i(x - h e_i)) / 2h."""
    x = np.asarray(x, dtype=float)
    if h is None:
        h = 1e-5 * max(1.0, float(np.linalg.norm(x)))
    total = 0.0
    for i in range(field.n):
        e = np.zeros(field.n)
        e[i] = h
        xp, xm = x + e, x - e
        if not (np.any(xp) and np.any(xm)):
            raise DomainError("finite-difference stencil touches the origin")
        total += (field_eval(field, xp)[i] - field_eval(field, xm)[i]) / (2.0 * h)
    return float(total)
