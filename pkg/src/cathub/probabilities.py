"""Ideal-detector heralding probabilities for the splitter cascade.

Joint, single-splitter, and conditional outcome probabilities, plus the
closed-form gain of splitting one large count across several detectors.
Everything that can underflow is carried as LogReal; conditionals are O(1)
and returned as plain floats.
"""

import math

from scipy.special import gammaln

from .errors import DomainError
from .fock import genfunc_derivative, photon_offset
from .hub import HubConfig, Outcome
from .logreal import LogReal


def _log_tap_ratio(t: float) -> float:
    # ln((1 - t^2)/t^2): per-photon weight of diverting a photon at one splitter
    return math.log1p(-t * t) - 2.0 * math.log(t)


def success_prob_single(m: int, parity: str, t1: float, s: float) -> LogReal:
    """Probability that one splitter's detector reports 2m (even) or 2m+1 (odd).

    Written out directly rather than through joint_success_prob so the
    single-splitter law stays independently auditable.
    """
    if m < 0:
        raise DomainError(f"pair count m must be >= 0, got {m}")
    n = 2 * m + photon_offset(parity)
    cfg = HubConfig(s, (t1,))
    y1 = cfg.y_out
    if t1 == 1.0:
        return LogReal.one() if n == 0 else LogReal.zero()
    log_p = (
        -math.log(math.cosh(s))
        + n * (_log_tap_ratio(t1) + math.log(y1))
        - gammaln(n + 1)
    )
    return LogReal(1, log_p) * genfunc_derivative(n, y1)


def joint_success_prob(cfg: HubConfig, outcome: Outcome) -> LogReal:
    """Probability that the k detectors report exactly outcome.counts.

    Product over splitters of the per-splitter tap weight, times the series
    normalization of the heralded state at the end-of-chain parameter.
    """
    if outcome.k != cfg.k:
        raise DomainError(
            f"outcome has {outcome.k} counts but the hub has {cfg.k} splitters"
        )
    log_p = -math.log(math.cosh(cfg.squeezing))
    for t_l, y_l, n_l in zip(cfg.transmittances, cfg.y_chain, outcome.counts):
        if n_l == 0:
            continue
        if t_l == 1.0:
            return LogReal.zero()
        log_p += n_l * (_log_tap_ratio(t_l) + math.log(y_l)) - gammaln(n_l + 1)
    return LogReal(1, log_p) * genfunc_derivative(outcome.total, cfg.y_out)


def conditional_prob(
    cfg: HubConfig, index: int, count: int, prior: tuple = ()
) -> float:
    """Probability that splitter `index` (1-based) taps `count` photons.

    `prior` holds the counts already seen at splitters 1..index-1.  For
    index = 1 the ratio of series normalizations degenerates to the source
    normalization 1/cosh s, so chaining these conditionals over a full
    outcome reproduces joint_success_prob exactly.
    """
    if not 1 <= index <= cfg.k:
        raise DomainError(f"splitter index {index} outside 1..{cfg.k}")
    if len(prior) != index - 1:
        raise DomainError(
            f"prior must list {index - 1} counts for splitter {index}, "
            f"got {len(prior)}"
        )
    if count < 0 or any(n < 0 for n in prior):
        raise DomainError("photon counts must be nonnegative")
    seen = sum(prior)
    t_i = cfg.transmittances[index - 1]
    y_i = cfg.y_chain[index - 1]
    y_prev = cfg.y0 if index == 1 else cfg.y_chain[index - 2]
    if t_i == 1.0:
        return 1.0 if count == 0 else 0.0
    log_w = count * (_log_tap_ratio(t_i) + math.log(y_i)) - gammaln(count + 1)
    ratio = genfunc_derivative(seen + count, y_i) / genfunc_derivative(seen, y_prev)
    return (LogReal(1, log_w) * ratio).to_float()


def multinomial_factor(outcome: Outcome) -> int:
    """Exact number of ways to route the total count into the given taps."""
    acc = math.factorial(outcome.total)
    for n in outcome.counts:
        acc //= math.factorial(n)
    return acc


def demux_ratio(outcome: Outcome, t: float) -> LogReal:
    """Gain from splitting one total count across k identical splitters.

    Ratio of the k-splitter outcome probability to the single-splitter
    probability of the same total, with both hubs heralding at the same
    end-of-chain parameter and the source normalizations divided out.
    Always >= 1 for t <= 1: a multinomial factor times t^(-2w), where w
    weights each count by how many splitters it passed before its tap.
    """
    if not 0.0 < t <= 1.0:
        raise DomainError(f"transmittance must lie in (0, 1], got {t}")
    k = outcome.k
    w = sum((k - pos) * n for pos, n in enumerate(outcome.counts, start=1))
    log_r = (
        -2.0 * w * math.log(t)
        + gammaln(outcome.total + 1)
        - sum(gammaln(n + 1) for n in outcome.counts)
    )
    return LogReal(1, log_r)
