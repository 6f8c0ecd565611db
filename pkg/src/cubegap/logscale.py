"""Positive reals carried by their natural logarithm.

The estimate chain lives at anchors like exp(exp(18)), far beyond float
range, while the final inequalities compare quantities whose logs are
ordinary doubles.  LogScaleReal keeps multiplication and powers exact in
log space and routes addition through log-sum-exp.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class LogScaleReal:
    """A strictly positive real x stored as ln_value = ln(x)."""

    ln_value: float

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_value(x: float) -> "LogScaleReal":
        if isinstance(x, LogScaleReal):
            return x
        if not x > 0.0:
            raise ValueError("LogScaleReal requires a positive value")
        return LogScaleReal(math.log(x))

    @staticmethod
    def from_ln(ln_value: float) -> "LogScaleReal":
        return LogScaleReal(float(ln_value))

    # -- conversions --------------------------------------------------

    def to_float(self) -> float:
        # Overflow degrades to inf, underflow to 0.0; log() stays exact.
        try:
            return math.exp(self.ln_value)
        except OverflowError:
            return math.inf

    def log(self) -> float:
        """ln(x) as a plain float."""
        return self.ln_value

    # -- arithmetic, exact in log space -------------------------------

    def __mul__(self, other) -> "LogScaleReal":
        o = LogScaleReal.from_value(other)
        return LogScaleReal(self.ln_value + o.ln_value)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "LogScaleReal":
        o = LogScaleReal.from_value(other)
        return LogScaleReal(self.ln_value - o.ln_value)

    def pow(self, p: float) -> "LogScaleReal":
        return LogScaleReal(self.ln_value * p)

    # -- addition via log-sum-exp -------------------------------------

    def __add__(self, other) -> "LogScaleReal":
        o = LogScaleReal.from_value(other)
        hi, lo = (self.ln_value, o.ln_value)
        if lo > hi:
            hi, lo = lo, hi
        return LogScaleReal(hi + math.log1p(math.exp(lo - hi)))

    __radd__ = __add__

    def sub(self, other) -> "LogScaleReal":
        """self - other, requires self > other so the result stays positive."""
        o = LogScaleReal.from_value(other)
        if not self.ln_value > o.ln_value:
            raise ValueError("difference would not be positive")
        return LogScaleReal(
            self.ln_value + math.log1p(-math.exp(o.ln_value - self.ln_value)))

    # -- comparisons --------------------------------------------------

    def _ln_of(self, other) -> float:
        return LogScaleReal.from_value(other).ln_value

    def __lt__(self, other):
        return self.ln_value < self._ln_of(other)

    def __le__(self, other):
        return self.ln_value <= self._ln_of(other)

    def __gt__(self, other):
        return self.ln_value > self._ln_of(other)

    def __ge__(self, other):
        return self.ln_value >= self._ln_of(other)
