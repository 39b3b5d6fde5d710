"""Imperfect photon-number detection.

Binomial-loss POVM elements, the exact lossy fidelity and heralding
probability for the one-splitter setup, the first/second-order expansions
in detector inefficiency, and the fidelity-probability trade-off product.

A detector of efficiency eta that reports count n may have been hit by any
true count j >= n; the conditional state is then a mixture over the loss
branches.  Branches whose true count has the opposite parity overlap the
target cat with weight zero but still carry probability, which is exactly
what produces the first-order fidelity penalty.
"""

import math
from dataclasses import dataclass

import numpy as np

from .cats import cat_state, mean_photon
from .errors import DomainError
from .fock import FockVector, inner_product, parity_of
from .hub import HubConfig, Outcome, heralded_amps
from .logreal import LogReal, log_binomial, logreal_sum
from .probabilities import joint_success_prob

_BRANCH_EPS = 1e-16
_BRANCH_RUN = 3
_BRANCH_CAP = 2000


def _check_eta(eta: float) -> None:
    if not 0.0 < eta <= 1.0:
        raise DomainError(f"detector efficiency must lie in (0, 1], got {eta}")


@dataclass(frozen=True)
class PovmElement:
    """Diagonal POVM element of a lossy photon-number detector.

    weights[j] is the probability of reporting `reported_count` when the
    true photon number is j; zero for j < reported_count.
    """

    reported_count: int
    eta: float
    weights: np.ndarray

    def weight(self, true_count: int) -> float:
        if true_count < 0 or true_count >= len(self.weights):
            return 0.0
        return float(self.weights[true_count])


def povm_element(m: int, eta: float, cutoff: int) -> PovmElement:
    """Reported-count-m POVM element on true counts 0..cutoff."""
    if m < 0:
        raise DomainError(f"reported count must be >= 0, got {m}")
    if cutoff < m:
        raise DomainError(f"cutoff {cutoff} smaller than reported count {m}")
    _check_eta(eta)
    w = np.zeros(cutoff + 1)
    if eta == 1.0:
        w[m] = 1.0
    else:
        j = np.arange(m, cutoff + 1, dtype=np.float64)
        log_c = np.array([log_binomial(int(jj), m) for jj in j])
        w[m:] = np.exp(log_c + m * math.log(eta) + (j - m) * math.log1p(-eta))
    w.setflags(write=False)
    return PovmElement(m, eta, w)


def _branch_weight_log(reported: int, true_count: int, eta: float) -> float:
    # ln of C(j, n) eta^n (1-eta)^(j-n)
    if eta == 1.0:
        return 0.0 if true_count == reported else -math.inf
    return (
        log_binomial(true_count, reported)
        + reported * math.log(eta)
        + (true_count - reported) * math.log1p(-eta)
    )


def _require_single_splitter(cfg: HubConfig) -> None:
    if cfg.k != 1:
        raise DomainError(
            "exact lossy quantities are implemented for one splitter; "
            "use the brute-force simulator for deeper chains"
        )


def _loss_branches(cfg: HubConfig, reported: int, eta: float):
    """Yield (true_count, log branch mass) with mass = weight * ideal prob.

    Stops once the mass has fallen below _BRANCH_EPS of the largest mass
    seen, sustained over _BRANCH_RUN consecutive branches.
    """
    best = -math.inf
    low = 0
    for true_count in range(reported, reported + _BRANCH_CAP + 1):
        p = joint_success_prob(cfg, Outcome((true_count,)))
        if p.is_zero():
            continue
        log_mass = _branch_weight_log(reported, true_count, eta) + p.log_mag
        yield true_count, log_mass
        if eta == 1.0:
            return
        best = max(best, log_mass)
        low = low + 1 if log_mass < best + math.log(_BRANCH_EPS) else 0
        if low >= _BRANCH_RUN:
            return


def lossy_prob(cfg: HubConfig, m: int, parity: str, eta: float) -> LogReal:
    """Exact probability that a lossy detector reports 2m or 2m+1 photons.

    Sums the ideal probability of every true count j >= reported against
    the binomial retention weight; both parities of j contribute.
    """
    _require_single_splitter(cfg)
    if m < 0:
        raise DomainError(f"pair count m must be >= 0, got {m}")
    _check_eta(eta)
    reported = 2 * m + (0 if parity == "even" else 1)
    if parity not in ("even", "odd"):
        raise DomainError(f"parity must be 'even' or 'odd', got {parity!r}")
    terms = [LogReal(1, lm) for _, lm in _loss_branches(cfg, reported, eta)]
    return logreal_sum(terms)


def lossy_fidelity_exact(cfg: HubConfig, m: int, eta: float, beta: float) -> float:
    """Fidelity of the lossy-heralded mixture against the matching cat.

    m is the reported photon count; its parity picks the cat family.  The
    mixture runs over true counts j >= m weighted by branch mass; branches
    of opposite parity contribute probability but zero overlap.
    """
    _require_single_splitter(cfg)
    if m < 0:
        raise DomainError(f"reported count must be >= 0, got {m}")
    _check_eta(eta)
    parity = parity_of(m)
    target = cat_state(beta, parity)
    y = cfg.y_out

    num_terms = []
    den_terms = []
    for true_count, log_mass in _loss_branches(cfg, m, eta):
        mass = LogReal(1, log_mass)
        den_terms.append(mass)
        if true_count % 2 != m % 2:
            continue
        window = heralded_amps(parity, true_count // 2, y, target.cutoff)
        ov = float(np.dot(window, target.amps))
        num_terms.append(mass * LogReal.from_float(ov * ov))
    num = logreal_sum(num_terms)
    den = logreal_sum(den_terms)
    return min((num / den).to_float(), 1.0)


def reduction_factor(t_product_sq: float, mean_n: float) -> float:
    """Per-unit-inefficiency penalty (1-T)/T * mean photon number.

    T is the squared transmittance product of the whole chain.  This is the
    number multiplying (1-eta) in both the fidelity drop and the
    probability gain.
    """
    if not 0.0 < t_product_sq <= 1.0:
        raise DomainError(
            f"squared transmittance product must lie in (0, 1], got {t_product_sq}"
        )
    return (1.0 - t_product_sq) / t_product_sq * mean_n


def lossy_fidelity_firstorder(
    t_product_sq: float,
    N: int,
    parity: str,
    eta: float,
    y: float,
    second_order: bool = False,
    beta: float | None = None,
) -> float:
    """First-order fidelity multiplier 1 - (1-eta)(1-T)/T <n>.

    With second_order=True (single splitter only in spirit; T is then just
    t1^2) adds the (1-eta)^2 correction, which needs the cat amplitude beta
    to form the overlap ratio of the (N+2)- and N-photon heralded states.
    """
    _check_eta(eta)
    eps = 1.0 - eta
    mean_n = mean_photon(parity, N, y)
    value = 1.0 - eps * reduction_factor(t_product_sq, mean_n)
    if not second_order:
        return value
    if beta is None:
        raise DomainError("second-order term needs the target cat amplitude")
    ratio = (1.0 - t_product_sq) / t_product_sq
    other_parity = "odd" if parity == "even" else "even"
    mean_other = mean_photon(other_parity, N + 1, y)
    target = cat_state(beta, parity)
    base = heralded_amps(parity, N // 2, y, target.cutoff)
    bumped = heralded_amps(parity, N // 2 + 1, y, target.cutoff)
    f_base = float(np.dot(base, target.amps)) ** 2
    f_bumped = float(np.dot(bumped, target.amps)) ** 2
    overlap_ratio = f_bumped / f_base
    f2 = 0.5 * mean_n * ratio * ratio * (
        2.0 * mean_n - mean_other * (1.0 - overlap_ratio)
    )
    return value + eps * eps * f2


def lossy_prob_firstorder(cfg: HubConfig, m: int, parity: str, eta: float) -> LogReal:
    """First-order lossy heralding probability for one splitter.

    eta^N * ideal * (1 + (1-eta)(1-t^2)/t^2 <n>), the expansion whose gap
    from lossy_prob shrinks quadratically in (1-eta).
    """
    _require_single_splitter(cfg)
    _check_eta(eta)
    reported = 2 * m + (0 if parity == "even" else 1)
    ideal = joint_success_prob(cfg, Outcome((reported,)))
    t_sq = cfg.transmittances[0] ** 2
    mean_n = mean_photon(parity, reported, cfg.y_out)
    gain = 1.0 + (1.0 - eta) * reduction_factor(t_sq, mean_n)
    return ideal * LogReal.from_float(eta**reported) * LogReal.from_float(gain)


@dataclass(frozen=True)
class TradeoffProduct:
    """Both routes to the fidelity-probability trade-off invariant."""

    penalty: float
    closed_form: LogReal
    from_multipliers: LogReal
    delta_fidelity: float
    delta_prob: LogReal


def tradeoff_product(
    cfg: HubConfig, outcome: Outcome, eta: float, beta: float
) -> TradeoffProduct:
    """Trade-off between fidelity loss and probability gain at first order.

    penalty = (1-eta)^2 ((1-T)/T)^2 <n>^2 depends only on the chain's
    squared transmittance product; closed_form multiplies it by the ideal
    fidelity and outcome probability, and from_multipliers rebuilds the
    same quantity as deltaF * deltaP from the first-order multipliers.
    """
    _check_eta(eta)
    parity = outcome.parity
    y = cfg.y_out
    mean_n = mean_photon(parity, outcome.total, y)
    t_product_sq = 1.0
    for t in cfg.transmittances:
        t_product_sq *= t * t
    load = reduction_factor(t_product_sq, mean_n)
    eps = 1.0 - eta

    target = cat_state(beta, parity)
    window = heralded_amps(parity, outcome.pairs, y, target.cutoff)
    ov = float(np.dot(window, target.amps))
    fid_ideal = ov * ov
    prob_ideal = joint_success_prob(cfg, outcome)

    penalty = (eps * load) ** 2
    closed = prob_ideal * LogReal.from_float(penalty * fid_ideal)
    delta_f = fid_ideal * eps * load
    delta_p = prob_ideal * LogReal.from_float(eps * load)
    return TradeoffProduct(
        penalty=penalty,
        closed_form=closed,
        from_multipliers=delta_p * LogReal.from_float(delta_f),
        delta_fidelity=delta_f,
        delta_prob=delta_p,
    )


def lossy_fidelity_mixture(
    branches, target: FockVector
) -> float:
    """Fidelity of a (weight, FockVector) branch ensemble against a pure target.

    Weighted average of branch fidelities over the total weight; used with
    the brute-force simulator's lossy output for multi-splitter checks.
    """
    num = 0.0
    den = 0.0
    for weight, state in branches:
        den += weight
        ov = inner_product(state, target)
        num += weight * ov * ov
    if den <= 0.0:
        raise DomainError("branch ensemble carries no probability mass")
    return num / den
