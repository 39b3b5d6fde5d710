"""Signed log-domain scalars.

Success probabilities and heralded amplitudes in this package are products
of factorial ratios and high powers that overflow float64 long before the
final, perfectly ordinary result is assembled.  All such quantities are
therefore carried as (sign, log magnitude) pairs and exponentiated last.
"""

import math
from dataclasses import dataclass

__all__ = ["LogReal", "log_factorial", "log_binomial", "logreal_sum"]


@dataclass(frozen=True)
class LogReal:
    """A real number stored as a sign and the natural log of its magnitude.

    sign is -1, 0 or +1; log_mag is ignored (and normalised to 0.0) when
    sign == 0.
    """

    sign: int
    log_mag: float

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or +1, got {self.sign!r}")
        if self.sign == 0 and self.log_mag != 0.0:
            object.__setattr__(self, "log_mag", 0.0)

    @classmethod
    def from_float(cls, x: float) -> "LogReal":
        if x == 0.0:
            return cls(0, 0.0)
        if math.isnan(x) or math.isinf(x):
            raise ValueError(f"cannot represent {x!r} as LogReal")
        return cls(1 if x > 0 else -1, math.log(abs(x)))

    @classmethod
    def zero(cls) -> "LogReal":
        return cls(0, 0.0)

    @classmethod
    def one(cls) -> "LogReal":
        return cls(1, 0.0)

    def to_float(self) -> float:
        if self.sign == 0:
            return 0.0
        try:
            mag = math.exp(self.log_mag)
        except OverflowError:
            mag = math.inf
        return self.sign * mag

    def log10(self) -> float:
        """log10 of the magnitude; -inf for zero."""
        if self.sign == 0:
            return -math.inf
        return self.log_mag / math.log(10.0)

    def is_zero(self) -> bool:
        return self.sign == 0

    def __mul__(self, other) -> "LogReal":
        other = _coerce(other)
        if self.sign == 0 or other.sign == 0:
            return LogReal(0, 0.0)
        return LogReal(self.sign * other.sign, self.log_mag + other.log_mag)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "LogReal":
        other = _coerce(other)
        if other.sign == 0:
            raise ZeroDivisionError("LogReal division by zero")
        if self.sign == 0:
            return LogReal(0, 0.0)
        return LogReal(self.sign * other.sign, self.log_mag - other.log_mag)

    def __neg__(self) -> "LogReal":
        return LogReal(-self.sign, self.log_mag)

    def __abs__(self) -> "LogReal":
        return LogReal(abs(self.sign), self.log_mag)

    def __add__(self, other) -> "LogReal":
        other = _coerce(other)
        if self.sign == 0:
            return other
        if other.sign == 0:
            return self
        if self.sign == other.sign:
            big, small = (self, other) if self.log_mag >= other.log_mag else (other, self)
            return LogReal(self.sign, big.log_mag + math.log1p(math.exp(small.log_mag - big.log_mag)))
        # opposite signs: subtract magnitudes
        if self.log_mag == other.log_mag:
            return LogReal(0, 0.0)
        big, small = (self, other) if self.log_mag > other.log_mag else (other, self)
        return LogReal(big.sign, big.log_mag + math.log1p(-math.exp(small.log_mag - big.log_mag)))

    def __sub__(self, other: "LogReal") -> "LogReal":
        return self + (-other)

    def __pow__(self, p: float) -> "LogReal":
        if self.sign == 0:
            if p <= 0:
                raise ValueError("0 cannot be raised to a non-positive power")
            return LogReal(0, 0.0)
        if self.sign < 0:
            if float(p).is_integer():
                sign = -1 if int(p) % 2 else 1
            else:
                raise ValueError("negative LogReal raised to non-integer power")
        else:
            sign = 1
        return LogReal(sign, self.log_mag * p)

    def sqrt(self) -> "LogReal":
        if self.sign < 0:
            raise ValueError("sqrt of negative LogReal")
        if self.sign == 0:
            return LogReal(0, 0.0)
        return LogReal(1, 0.5 * self.log_mag)

    def __repr__(self):
        if self.sign == 0:
            return "LogReal(0)"
        return f"LogReal({'+' if self.sign > 0 else '-'}exp({self.log_mag:.6g}))"


def _coerce(x) -> LogReal:
    if isinstance(x, LogReal):
        return x
    if isinstance(x, (int, float)):
        return LogReal.from_float(float(x))
    raise TypeError(f"cannot mix LogReal with {type(x).__name__}")


def log_factorial(n: int) -> LogReal:
    """ln(n!) as a LogReal with positive sign.

    Uses lgamma, which is accurate to a few ulp of the log value itself.
    """
    if n < 0:
        raise ValueError(f"factorial of negative integer {n}")
    return LogReal(1, math.lgamma(n + 1))


def log_binomial(n: int, k: int) -> float:
    """ln C(n, k); -inf when k is outside [0, n]."""
    if k < 0 or k > n:
        return -math.inf
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def logreal_sum(terms) -> LogReal:
    """Sum an iterable of LogReal values without leaving the log domain.

    Magnitudes are rescaled by the largest exponent before accumulation, so
    the result is stable even when individual terms would overflow float64.
    """
    terms = [t for t in terms if t.sign != 0]
    if not terms:
        return LogReal(0, 0.0)
    top = max(t.log_mag for t in terms)
    acc = 0.0
    for t in terms:
        acc += t.sign * math.exp(t.log_mag - top)
    if acc == 0.0:
        return LogReal(0, 0.0)
    return LogReal(1 if acc > 0 else -1, top + math.log(abs(acc)))
