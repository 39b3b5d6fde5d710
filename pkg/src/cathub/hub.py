"""Squeezed-vacuum source, beam-splitter chain bookkeeping, heralded states.

A single-mode squeezed vacuum with squeeze parameter s is parameterised by
y0 = tanh(s)/2 in (0, 1/2).  Passing it through a chain of beam splitters
with amplitude transmittances t_1..t_k rescales the parameter step by step,
y_i = t_i^2 * y_(i-1), while photon-number-resolving detectors on the
reflected ports subtract photons.  Registering counts (n_1, ..., n_k) with
total N heralds, up to an overall sign, a pure state that depends only on N
and the final parameter y_k:

    even N = 2m:    a_n ~ y^n (2(n+m))! / (sqrt((2n)!) (n+m)!)      on |2n>
    odd  N = 2m+1:  a_n ~ y^n (2(n+m+1))! / (sqrt((2n+1)!) (n+m+1)!) on |2n+1>

normalised by the N-th derivative of the generating function g(y).
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import DomainError, TruncationError
from .fock import FockVector, genfunc_derivative, parity_of, photon_offset
from .logreal import LogReal

__all__ = [
    "HubConfig",
    "Outcome",
    "default_cutoff",
    "squeezed_vacuum",
    "heralded_state",
    "heralded_amps",
    "herald_amplitude",
]


@dataclass(frozen=True)
class HubConfig:
    """Source squeezing plus the transmittance chain of the hub.

    squeezing is the squeeze parameter s > 0 (dimensionless); transmittances
    are the amplitude transmittances t_i in (0, 1], one per splitter.
    """

    squeezing: float
    transmittances: tuple[float, ...]

    def __post_init__(self):
        if not (self.squeezing > 0.0) or not math.isfinite(self.squeezing):
            raise DomainError(f"squeezing must be positive and finite, got {self.squeezing}")
        ts = tuple(float(t) for t in self.transmittances)
        if len(ts) == 0:
            raise DomainError("at least one beam splitter is required")
        for t in ts:
            if not (0.0 < t <= 1.0):
                raise DomainError(f"transmittance must lie in (0, 1], got {t}")
        object.__setattr__(self, "transmittances", ts)

    @property
    def k(self) -> int:
        return len(self.transmittances)

    @property
    def y0(self) -> float:
        return math.tanh(self.squeezing) / 2.0

    @property
    def y_chain(self) -> tuple[float, ...]:
        """y_i after each splitter: y_i = t_i^2 * y_(i-1)."""
        ys = []
        y = self.y0
        for t in self.transmittances:
            y *= t * t
            ys.append(y)
        return tuple(ys)

    @property
    def y_out(self) -> float:
        return self.y_chain[-1]

    @property
    def reflectances(self) -> tuple[float, ...]:
        return tuple(math.sqrt(1.0 - t * t) for t in self.transmittances)

    @property
    def squeezing_db(self) -> float:
        """Quadrature noise reduction in dB: -10 log10(exp(-2s))."""
        return 20.0 * self.squeezing / math.log(10.0)

    @property
    def mean_photons_source(self) -> float:
        return math.sinh(self.squeezing) ** 2

    @classmethod
    def from_target_y(cls, y_target: float, transmittances) -> "HubConfig":
        """Back-solve the squeezing so the chain ends at y_k = y_target."""
        ts = tuple(float(t) for t in transmittances)
        scale = 1.0
        for t in ts:
            scale *= t * t
        tanh_s = 2.0 * y_target / scale
        if not (0.0 < tanh_s < 1.0):
            raise DomainError(
                f"target y = {y_target} needs tanh(s) = {tanh_s:.6g}, outside (0, 1)"
            )
        return cls(math.atanh(tanh_s), ts)


@dataclass(frozen=True)
class Outcome:
    """Photon counts registered by the detectors, one per splitter."""

    counts: tuple[int, ...]

    def __post_init__(self):
        cs = tuple(int(n) for n in self.counts)
        if len(cs) == 0:
            raise DomainError("an outcome needs at least one count")
        for n in cs:
            if n < 0:
                raise DomainError(f"photon counts must be >= 0, got {n}")
        object.__setattr__(self, "counts", cs)

    @property
    def k(self) -> int:
        return len(self.counts)

    @property
    def total(self) -> int:
        return sum(self.counts)

    @property
    def parity(self) -> str:
        return parity_of(self.total)

    @property
    def pairs(self) -> int:
        """Subtracted pair count m: total = 2m (even) or 2m+1 (odd)."""
        return self.total // 2


def default_cutoff(m: int, y: float) -> int:
    """Storage cutoff large enough for a 1e-14 relative amplitude tail.

    Two regimes: the 40/(1-2y) term covers the broadening of the bare
    squeezed distribution as y -> 1/2, while the (2m+24)/(-ln 2y) term covers
    the slow n^m growth of the factorial ratio before geometric decay in
    (2y)^n takes over.
    """
    broad = math.ceil((8.0 * (m + 1) + 40.0 / (1.0 - 2.0 * y)) / 2.0)
    slow = math.ceil((2.0 * m + 24.0) / max(-math.log(2.0 * y), 1e-3) + 16.0)
    return max(broad, slow, 16)


def _log_heralded_unnorm(parity: str, m: int, y: float, n: np.ndarray) -> np.ndarray:
    """Log of the un-normalised heralded amplitudes on index array n."""
    log_y = math.log(y)
    if parity == "even":
        return (
            n * log_y
            + gammaln(2.0 * (n + m) + 1.0)
            - gammaln(n + m + 1.0)
            - 0.5 * gammaln(2.0 * n + 1.0)
        )
    return (
        n * log_y
        + gammaln(2.0 * (n + m + 1) + 1.0)
        - gammaln(n + m + 2.0)
        - 0.5 * gammaln(2.0 * n + 2.0)
    )


def heralded_amps(parity: str, m: int, y: float, n_max: int) -> np.ndarray:
    """Normalised heralded amplitudes for indices 0..n_max.

    The normalisation constant comes from genfunc_derivative rather than from
    the stored amplitudes, so a window shorter than the state's support still
    carries exact amplitudes.
    """
    if m < 0:
        raise DomainError(f"pair count m must be >= 0, got {m}")
    if not (0.0 < y < 0.5):
        raise DomainError(f"y must lie in (0, 0.5), got {y}")
    order = 2 * m if parity == "even" else 2 * m + 1
    log_z = genfunc_derivative(order, y).log_mag
    n = np.arange(n_max + 1, dtype=np.float64)
    logs = _log_heralded_unnorm(parity, m, y, n) - 0.5 * log_z
    if parity == "odd":
        logs += 0.5 * math.log(y)
    return np.exp(logs)


def heralded_state(parity: str, m: int, y: float, cutoff: int | None = None) -> FockVector:
    """The state heralded by subtracting 2m (even) or 2m+1 (odd) photons.

    y is the generating-function parameter at the herald point (the end of
    the chain).  The result is normalised analytically; its norm differing
    from one therefore cross-checks genfunc_derivative against a direct sum.
    """
    photon_offset(parity)
    if m < 0:
        raise DomainError(f"pair count m must be >= 0, got {m}")
    if not 0.0 <= y < 0.5:
        raise DomainError(f"herald parameter must lie in [0, 0.5), got {y}")
    if cutoff is None:
        cutoff = default_cutoff(m, y)
        # the default rule can undershoot in odd corners; grow until clean
        for _ in range(4):
            vec = FockVector(parity, heralded_amps(parity, m, y, cutoff))
            try:
                vec.check_tail()
                return vec
            except TruncationError as exc:
                cutoff = exc.suggested_cutoff
        vec.check_tail()
        return vec
    vec = FockVector(parity, heralded_amps(parity, m, y, cutoff))
    vec.check_tail()
    return vec


def squeezed_vacuum(s: float, cutoff: int | None = None) -> FockVector:
    """Single-mode squeezed vacuum over the even sector.

    Amplitudes c_n = y0^n sqrt((2n)!) / n! / sqrt(cosh s) with y0 = tanh(s)/2.
    """
    if not (s > 0.0) or not math.isfinite(s):
        raise DomainError(f"squeezing must be positive and finite, got {s}")
    y0 = math.tanh(s) / 2.0
    if cutoff is None:
        cutoff = default_cutoff(0, y0)
    n = np.arange(cutoff + 1, dtype=np.float64)
    logs = (
        n * math.log(y0)
        + 0.5 * gammaln(2.0 * n + 1.0)
        - gammaln(n + 1.0)
        - 0.5 * math.log(math.cosh(s))
    )
    vec = FockVector("even", np.exp(logs))
    vec.check_tail()
    return vec


def herald_amplitude(cfg: HubConfig, outcome: Outcome) -> LogReal:
    """Signed amplitude attached to one detection record.

    Magnitude: prod_l ((1-t_l^2)/t_l^2)^(n_l/2) y_l^(n_l/2) / sqrt(n_l!)
    times sqrt of the N-th generating-function derivative at y_k.  The sign
    (-1)^N tracks the phase picked up by reflecting N photons.

    The squared magnitude divided by cosh(s) is the probability of the
    detection record.
    """
    if outcome.k != cfg.k:
        raise DomainError(f"outcome has {outcome.k} counts for {cfg.k} splitters")
    ys = cfg.y_chain
    acc = LogReal.one()
    for t, y_l, n_l in zip(cfg.transmittances, ys, outcome.counts):
        if n_l == 0:
            continue
        r_sq = 1.0 - t * t
        if r_sq == 0.0:
            return LogReal.zero()  # nothing reflects off a transparent splitter
        log_mag = 0.5 * n_l * (math.log(r_sq) - 2.0 * math.log(t) + math.log(y_l)) - 0.5 * math.lgamma(n_l + 1)
        acc = acc * LogReal(1, log_mag)
    z = genfunc_derivative(outcome.total, cfg.y_out)
    amp = acc * z.sqrt()
    sign = -1 if outcome.total % 2 else 1
    return LogReal(sign * amp.sign, amp.log_mag) if amp.sign != 0 else amp
