import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import gammaln

from cathub.errors import DomainError
from cathub.fock import genfunc_derivative
from cathub.hub import HubConfig, Outcome
from cathub.probabilities import (
    conditional_prob,
    demux_ratio,
    joint_success_prob,
    multinomial_factor,
    success_prob_single,
)


def _single_tap_brute(n: int, t: float, s: float, span: int = 260) -> float:
    """Independent route: send each squeezed-vacuum Fock component through a
    binomial photon splitter and collect the intensity on the tap count n."""
    y0 = math.tanh(s) / 2.0
    r_sq = 1.0 - t * t
    total = 0.0
    for pairs in range(span // 2):
        q = 2 * pairs
        if q < n:
            continue
        log_amp_sq = (
            2.0 * pairs * math.log(y0)
            + gammaln(q + 1)
            - 2.0 * gammaln(pairs + 1)
            - math.log(math.cosh(s))
        )
        log_split = (
            gammaln(q + 1)
            - gammaln(n + 1)
            - gammaln(q - n + 1)
            + n * math.log(r_sq)
            + (q - n) * math.log(t * t)
        )
        total += math.exp(log_amp_sq + log_split)
    return total


@pytest.mark.parametrize("n", [0, 1, 2, 5, 8])
def test_single_tap_matches_brute_force(n):
    t, s = 0.9, 0.8
    parity = "even" if n % 2 == 0 else "odd"
    got = success_prob_single(n // 2, parity, t, s).to_float()
    assert got == pytest.approx(_single_tap_brute(n, t, s), rel=1e-10)


def test_single_tap_transparent_splitter():
    assert success_prob_single(0, "even", 1.0, 0.5).to_float() == pytest.approx(1.0)
    assert success_prob_single(1, "even", 1.0, 0.5).is_zero()
    assert success_prob_single(0, "odd", 1.0, 0.5).is_zero()


def test_single_tap_decays_in_count():
    t, s = 0.9, 0.6
    previous = success_prob_single(0, "even", t, s)
    for m in range(1, 6):
        current = success_prob_single(m, "even", t, s)
        assert (current / previous).to_float() < 1.0
        previous = current


def test_joint_matches_single_for_one_splitter():
    cfg = HubConfig(0.8, (0.9,))
    for n in range(5):
        parity = "even" if n % 2 == 0 else "odd"
        a = joint_success_prob(cfg, Outcome((n,))).to_float()
        b = success_prob_single(n // 2, parity, 0.9, 0.8).to_float()
        assert a == pytest.approx(b, rel=1e-13)


def test_joint_validates_shape():
    cfg = HubConfig(0.8, (0.9, 0.9))
    with pytest.raises(DomainError):
        joint_success_prob(cfg, Outcome((1,)))


def test_joint_transparent_tap_kills_nonzero_counts():
    cfg = HubConfig(0.8, (1.0, 0.9))
    assert joint_success_prob(cfg, Outcome((1, 2))).is_zero()
    assert joint_success_prob(cfg, Outcome((0, 2))).to_float() > 0.0


def test_two_tap_closed_form():
    # for two identical taps and even counts the joint probability collapses
    # to sqrt(1-4 y0^2) eps^N t^(-2 n1) y2^N / (n1! n2!) * Z_N(y2)
    t, s = 0.9, 0.9
    cfg = HubConfig(s, (t, t))
    y2 = cfg.y_out
    y0 = cfg.y0
    eps = (1.0 - t * t) / (t * t)
    for n1, n2 in ((2, 4), (0, 6), (4, 4), (10, 10)):
        big_n = n1 + n2
        closed = (
            math.sqrt(1.0 - 4.0 * y0 * y0)
            * eps**big_n
            * (t * t) ** (-n1)
            * math.exp(
                big_n * math.log(y2)
                - gammaln(n1 + 1)
                - gammaln(n2 + 1)
                + genfunc_derivative(big_n, y2).log_mag
            )
        )
        got = joint_success_prob(cfg, Outcome((n1, n2))).to_float()
        assert got == pytest.approx(closed, rel=1e-12)


def test_conditional_normalisation():
    cfg = HubConfig(1.0, (0.8, 0.9, 0.85))
    total = sum(conditional_prob(cfg, 1, n) for n in range(80))
    assert total >= 1.0 - 1e-8
    total = sum(conditional_prob(cfg, 3, n, prior=(2, 1)) for n in range(80))
    assert total >= 1.0 - 1e-8


def test_conditional_chain_reproduces_joint():
    cfg = HubConfig(0.9, (0.8, 0.95, 0.9))
    for counts in ((1, 0, 2), (3, 2, 1), (0, 0, 4)):
        chain = 1.0
        for i, n in enumerate(counts, start=1):
            chain *= conditional_prob(cfg, i, n, prior=counts[: i - 1])
        joint = joint_success_prob(cfg, Outcome(counts)).to_float()
        assert chain == pytest.approx(joint, rel=1e-12)


def test_conditional_validates_arguments():
    cfg = HubConfig(0.9, (0.8, 0.9))
    with pytest.raises(DomainError):
        conditional_prob(cfg, 0, 1)
    with pytest.raises(DomainError):
        conditional_prob(cfg, 3, 1, prior=(1, 1))
    with pytest.raises(DomainError):
        conditional_prob(cfg, 2, 1, prior=())


def test_conditional_transparent_first_tap():
    cfg = HubConfig(0.9, (1.0, 0.9))
    assert conditional_prob(cfg, 1, 0) == pytest.approx(1.0)
    assert conditional_prob(cfg, 1, 3) == 0.0


def test_demux_examples():
    assert demux_ratio(Outcome((4,)), 0.9).to_float() == pytest.approx(1.0)
    got = demux_ratio(Outcome((1, 1)), 0.9).to_float()
    assert got == pytest.approx(2.0 / 0.81, rel=1e-12)
    # multinomial factor alone at t = 1
    assert demux_ratio(Outcome((10, 10)), 1.0).to_float() == pytest.approx(
        184756.0, rel=1e-12
    )
    with_t = demux_ratio(Outcome((10, 10)), 0.8).to_float()
    assert with_t == pytest.approx(184756.0 * 0.8 ** (-20), rel=1e-12)


def test_multinomial_factor_exact_integers():
    assert multinomial_factor(Outcome((10, 10))) == 184756
    assert multinomial_factor(Outcome((0, 0, 7))) == 1
    assert multinomial_factor(Outcome((2, 3, 5))) == 2520
    assert multinomial_factor(Outcome((1, 1))) == 2
    # large case stays exact where floats would round
    big = multinomial_factor(Outcome((30, 30)))
    assert big == math.factorial(60) // (math.factorial(30) ** 2)


@settings(max_examples=60, deadline=None)
@given(
    counts=st.lists(st.integers(min_value=0, max_value=5), min_size=1, max_size=3),
    t=st.floats(min_value=0.55, max_value=0.99),
)
def test_demux_matches_joint_ratio_within_one_config(counts, t):
    # moving every detected photon to the last tap is the reference event;
    # the closed-form gain is exactly the joint-probability ratio
    counts = tuple(counts)
    total = sum(counts)
    cfg = HubConfig(0.7, (t,) * len(counts))
    reference = [0] * (len(counts) - 1) + [total]
    p_split = joint_success_prob(cfg, Outcome(counts))
    p_ref = joint_success_prob(cfg, Outcome(tuple(reference)))
    got = (p_split / p_ref).to_float()
    assert got == pytest.approx(demux_ratio(Outcome(counts), t).to_float(), rel=1e-10)


@settings(max_examples=60, deadline=None)
@given(
    counts=st.lists(st.integers(min_value=0, max_value=6), min_size=2, max_size=3),
    t=st.floats(min_value=0.5, max_value=1.0),
)
def test_demux_gain_at_least_one(counts, t):
    ratio = demux_ratio(Outcome(tuple(counts)), t).to_float()
    assert ratio >= 1.0 - 1e-12
    if sum(counts[:-1]) > 0 and t < 1.0:
        assert ratio > 1.0


def test_outcome_sum_reaches_unity():
    # all detection records up to a cap account for almost all probability
    cfg = HubConfig(0.8, (0.85, 0.9))
    cap = 40
    total = 0.0
    for n1 in range(cap + 1):
        for n2 in range(cap + 1 - n1):
            total += joint_success_prob(cfg, Outcome((n1, n2))).to_float()
    assert total >= 1.0 - 1e-8
    assert total <= 1.0 + 1e-12
