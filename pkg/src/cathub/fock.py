"""Parity-tagged truncated Fock vectors and the normalising series.

States that appear in this package occupy either the even or the odd photon
number sector, so a state is stored as a parity tag plus a dense array of
real amplitudes: index n maps to photon number 2n (even) or 2n+1 (odd).

The family of photon-subtracted squeezed states is normalised by derivatives
of the central-binomial generating function

    g(y) = sum_k C(2k, k) y^(2k) = 1 / sqrt(1 - 4 y^2),   0 <= y < 1/2.

genfunc_derivative evaluates d^m g / dy^m in the log domain.  Every
coefficient of the series is positive, so no cancellation can occur there;
close to the y = 1/2 singularity the series is slow and a product-rule
expansion around the two branch points is used instead.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .errors import DomainError, TruncationError
from .logreal import LogReal, logreal_sum

__all__ = [
    "FockVector",
    "inner_product",
    "genfunc_derivative",
    "parity_of",
    "photon_offset",
]

# Series truncation: stop once this many consecutive terms fall below
# _TERM_EPS times the running maximum term.
_TERM_EPS = 1e-18
_TERM_RUN = 50
_BLOCK = 256

# Above this y the direct series is slow and the branch-point expansion of
# g(y) = (1-2y)^(-1/2) (1+2y)^(-1/2) is both fast and cancellation-safe.
_LEIBNIZ_SWITCH = 0.3

_TAIL_RATIO = 1e-14


def parity_of(n: int) -> str:
    return "even" if n % 2 == 0 else "odd"


def photon_offset(parity: str) -> int:
    """0 for the even sector, 1 for the odd sector."""
    if parity == "even":
        return 0
    if parity == "odd":
        return 1
    raise DomainError(f"parity must be 'even' or 'odd', got {parity!r}")


@dataclass(frozen=True)
class FockVector:
    """Real amplitudes over a single photon-parity sector.

    amps[n] is the amplitude of Fock state |2n> (even parity) or |2n+1>
    (odd parity).  cutoff is the largest stored index.
    """

    parity: str
    amps: np.ndarray = field(repr=False)

    def __post_init__(self):
        photon_offset(self.parity)  # validates the tag
        arr = np.asarray(self.amps, dtype=np.float64)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("amps must be a non-empty 1-D array")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "amps", arr)

    @property
    def cutoff(self) -> int:
        return len(self.amps) - 1

    def photon_numbers(self) -> np.ndarray:
        off = photon_offset(self.parity)
        return 2 * np.arange(len(self.amps)) + off

    def norm(self) -> float:
        return float(np.sqrt(np.sum(self.amps**2)))

    def mean_photon_number(self) -> float:
        """Direct second-moment sum; assumes the vector is normalised."""
        return float(np.sum(self.photon_numbers() * self.amps**2))

    def check_tail(self) -> None:
        """Raise TruncationError when the stored tail is not negligible."""
        peak = float(np.max(self.amps**2))
        if peak == 0.0:
            return
        if float(self.amps[-1] ** 2) > _TAIL_RATIO * peak:
            raise TruncationError(
                f"amplitude at cutoff index {self.cutoff} is not negligible; "
                f"increase the cutoff (suggested >= {self.cutoff * 2 + 16})",
                suggested_cutoff=self.cutoff * 2 + 16,
            )

    def __repr__(self):
        return f"FockVector(parity={self.parity!r}, cutoff={self.cutoff})"


def inner_product(a: FockVector, b: FockVector) -> float:
    """<a|b> for real vectors; zero across parity sectors."""
    if a.parity != b.parity:
        return 0.0
    n = min(len(a.amps), len(b.amps))
    return float(np.dot(a.amps[:n], b.amps[:n]))


def _check_y(y: float) -> None:
    if not (0.0 <= y < 0.5):
        raise DomainError(f"y must lie in [0, 0.5), got {y}")


def _series_log_terms(order: int, y: float):
    """Log of the positive series terms of d^order g / dy^order.

    Term k (k >= ceil(order/2)):
        C(2k, k) * (2k)! / (2k - order)! * y^(2k - order)
    """
    log_y = math.log(y)
    logs: list[np.ndarray] = []
    k0 = (order + 1) // 2
    running_max = -math.inf
    below = 0
    k_lo = k0
    while True:
        k = np.arange(k_lo, k_lo + _BLOCK, dtype=np.float64)
        p = 2.0 * k - order
        block = 2.0 * gammaln(2.0 * k + 1.0) - 2.0 * gammaln(k + 1.0) - gammaln(p + 1.0) + p * log_y
        stop_at = None
        for i, v in enumerate(block):
            if v > running_max:
                running_max = v
                below = 0
            elif v < running_max + math.log(_TERM_EPS):
                below += 1
                if below >= _TERM_RUN:
                    stop_at = i + 1
                    break
            else:
                below = 0
        if stop_at is not None:
            logs.append(block[:stop_at])
            break
        logs.append(block)
        k_lo += _BLOCK
    return np.concatenate(logs)


def _genfunc_series(order: int, y: float) -> LogReal:
    if y == 0.0:
        if order % 2 == 1:
            return LogReal.zero()
        half = order // 2
        # single surviving term: C(order, order/2) * order!
        log_mag = 2.0 * math.lgamma(order + 1) - 2.0 * math.lgamma(half + 1)
        return LogReal(1, log_mag)
    logs = _series_log_terms(order, y)
    top = float(np.max(logs))
    total = float(np.sum(np.exp(logs - top)))
    return LogReal(1, top + math.log(total))


def _genfunc_branch_points(order: int, y: float) -> LogReal:
    """Product-rule expansion of d^order/dy^order of (1-2y)^(-1/2)(1+2y)^(-1/2).

    The j-th term carries sign (-1)^(order-j); for y above the switch point
    the magnitudes ascend monotonically towards j = order, so the signed sum
    involves no catastrophic cancellation.
    """
    u = 1.0 - 2.0 * y
    v = 1.0 + 2.0 * y
    log_u, log_v = math.log(u), math.log(v)
    j = np.arange(order + 1, dtype=np.float64)
    # ln C(order, j) + ln (2j-1)!! + ln (2(order-j)-1)!!
    log_choose = gammaln(order + 1.0) - gammaln(j + 1.0) - gammaln(order - j + 1.0)
    log_dfact_j = gammaln(2.0 * j + 1.0) - j * math.log(2.0) - gammaln(j + 1.0)
    jc = order - j
    log_dfact_jc = gammaln(2.0 * jc + 1.0) - jc * math.log(2.0) - gammaln(jc + 1.0)
    log_mag = log_choose + log_dfact_j + log_dfact_jc + (-0.5 - j) * log_u + (-0.5 - jc) * log_v
    signs = np.where(((order - np.arange(order + 1)) % 2) == 0, 1, -1)
    return logreal_sum(LogReal(int(s), float(m)) for s, m in zip(signs, log_mag))


def genfunc_derivative(order: int, y: float) -> LogReal:
    """m-th derivative of g(y) = 1/sqrt(1 - 4 y^2) at y, as a LogReal.

    Positive for every admissible y > 0; odd orders vanish at y = 0.
    Raises DomainError outside 0 <= y < 0.5.
    """
    if order < 0:
        raise DomainError(f"derivative order must be >= 0, got {order}")
    _check_y(y)
    if y > _LEIBNIZ_SWITCH:
        return _genfunc_branch_points(order, y)
    return _genfunc_series(order, y)
