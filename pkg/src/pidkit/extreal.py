"""Extended-real scalars for information values.

Information atoms of noise-free interactions can be exactly infinite
(synergy of a deterministic response) and differences of infinities are
meaningless.  ``ExtReal`` keeps those states symbolic instead of letting
them leak through ordinary float arithmetic as garbage:

    finite +/- finite      -> finite
    finite + (+/-)inf      -> (+/-)inf
    (+inf) - (+inf)        -> indeterminate
    indeterminate op *     -> indeterminate
"""

from __future__ import annotations

import math
from dataclasses import dataclass

_LN2 = math.log(2.0)


@dataclass(frozen=True, slots=True)
class ExtReal:
    """One extended-real value: a finite float, +inf, -inf, or indeterminate."""

    value: float = 0.0
    indeterminate: bool = False

    @classmethod
    def pos_inf(cls) -> "ExtReal":
        return cls(math.inf)

    @classmethod
    def neg_inf(cls) -> "ExtReal":
        return cls(-math.inf)

    @classmethod
    def nil(cls) -> "ExtReal":
        return cls(math.nan, indeterminate=True)

    @property
    def is_finite(self) -> bool:
        return not self.indeterminate and math.isfinite(self.value)

    @property
    def is_pos_inf(self) -> bool:
        return not self.indeterminate and self.value == math.inf

    @property
    def is_neg_inf(self) -> bool:
        return not self.indeterminate and self.value == -math.inf

    def __float__(self) -> float:
        return math.nan if self.indeterminate else self.value

    def __neg__(self) -> "ExtReal":
        if self.indeterminate:
            return self
        return ExtReal(-self.value)

    def __add__(self, other: "ExtReal | float") -> "ExtReal":
        other = _coerce(other)
        if self.indeterminate or other.indeterminate:
            return ExtReal.nil()
        if self.is_pos_inf and other.is_neg_inf:
            return ExtReal.nil()
        if self.is_neg_inf and other.is_pos_inf:
            return ExtReal.nil()
        return ExtReal(self.value + other.value)

    __radd__ = __add__

    def __sub__(self, other: "ExtReal | float") -> "ExtReal":
        return self + (-_coerce(other))

    def __rsub__(self, other: "ExtReal | float") -> "ExtReal":
        return _coerce(other) + (-self)

    def __mul__(self, scale: float) -> "ExtReal":
        # Scalar rescaling only (unit conversion); 0 * inf is indeterminate.
        if self.indeterminate:
            return self
        if not math.isfinite(self.value) and scale == 0.0:
            return ExtReal.nil()
        return ExtReal(self.value * scale)

    __rmul__ = __mul__

    def __truediv__(self, scale: float) -> "ExtReal":
        return self * (1.0 / scale)

    def in_bits(self) -> "ExtReal":
        return self / _LN2

    def isclose(self, other: "ExtReal | float", tol: float = 1e-12) -> bool:
        other = _coerce(other)
        if self.indeterminate or other.indeterminate:
            return self.indeterminate and other.indeterminate
        if not math.isfinite(self.value) or not math.isfinite(other.value):
            return self.value == other.value
        return abs(self.value - other.value) <= tol

    def __str__(self) -> str:
        if self.indeterminate:
            return "indeterminate"
        if self.value == math.inf:
            return "inf"
        if self.value == -math.inf:
            return "-inf"
        return repr(self.value)

    @classmethod
    def parse(cls, text: str) -> "ExtReal":
        text = text.strip()
        if text == "indeterminate":
            return cls.nil()
        if text in ("inf", "+inf"):
            return cls.pos_inf()
        if text == "-inf":
            return cls.neg_inf()
        return cls(float(text))


def _coerce(value: "ExtReal | float") -> ExtReal:
    if isinstance(value, ExtReal):
        return value
    return ExtReal(float(value))


def finite(value: float) -> ExtReal:
    """Wrap a float that is required to be finite."""
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"expected a finite value, got {value}")
    return ExtReal(value)


POS_INF = ExtReal.pos_inf()
NEG_INF = ExtReal.neg_inf()
INDETERMINATE = ExtReal.nil()
