import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from betahole.bifurcation import (
    ABOVE_THRESHOLD,
    BRACKETED,
    EXACT_SFT,
    FOUND,
    MEMBER,
    NONMEMBER,
    NOT_COVERED,
    UNKNOWN,
    ZERO_TAIL,
    dimension,
    in_B,
    in_B_prime,
    in_E,
    in_E_prime,
    local_dimension_profile,
    locate_interval,
    staircase,
    sup_E,
    tail_dimension,
    word_dimension,
)
from betahole.errors import DomainError
from betahole.field import TWO, make_beta
from betahole.lyndon import enumerate_lyndon
from betahole.sft import sft_equal, survivor_sft_for_word
from betahole.symbolic import EPSequence

DIM_001 = 0.5843571576574


def test_membership_examples(golden):
    b = golden.gen
    assert in_B(golden.zero, golden).status == MEMBER
    quarter = in_B(golden(Fraction(1, 4)), golden)
    assert quarter.status == NONMEMBER and quarter.witness == 3
    assert in_B(golden(Fraction(2, 5)), golden).status == NONMEMBER
    assert in_E((b - 1) / 2, golden).status == MEMBER
    assert in_E_prime((b - 1) / 2, golden).status == NONMEMBER
    assert in_B_prime((b - 1) / 2, golden).status == NONMEMBER
    assert in_E_prime(golden.zero, golden).status == MEMBER
    assert in_B_prime(golden.zero, golden).status == MEMBER
    assert in_E_prime(golden(Fraction(1, 4)), golden).status == NONMEMBER
    assert in_B_prime(golden(Fraction(1, 4)), golden).status == NONMEMBER
    assert in_E(golden.threshold, golden).status == NONMEMBER


def test_unknown_verdict_carries_horizon(golden):
    v = in_E(golden(Fraction(1, 10)), golden, horizon=5)
    assert v.status == UNKNOWN and v.horizon == 5
    assert v.to_json() == {"status": "unknown", "horizon": 5, "reason": "no period within horizon"}
    # the interval route still decides it once the depth reaches the covering word
    assert in_B(golden(Fraction(1, 4)), golden, horizon=1).status == NONMEMBER


def test_locate_examples(golden):
    assert locate_interval(golden(Fraction(1, 4)), golden, 3).interval.word == "001"
    assert locate_interval(golden(Fraction(39, 100)), golden).kind == ABOVE_THRESHOLD
    assert locate_interval(golden.zero, golden, 16).kind == NOT_COVERED
    assert locate_interval((golden.gen - 1) / 2, golden, 3).kind == NOT_COVERED
    assert locate_interval((golden.gen - 1) / 2, golden, 3, closed=True).kind == FOUND
    with pytest.raises(DomainError):
        locate_interval(golden.one, golden)


def test_dimension_examples(golden):
    zero = dimension(golden.zero, golden)
    assert zero.lo == zero.hi == 1.0 and zero.method == EXACT_SFT
    q = dimension(golden(Fraction(1, 4)), golden)
    assert q.method == EXACT_SFT and q.word == "001"
    assert abs(q.value - math.log(1.3247179572447460) / math.log(float(golden))) < 1e-12
    top = dimension(golden(Fraction(383, 1000)), golden)
    assert top.hi == 0 and top.method == ZERO_TAIL
    with pytest.raises(DomainError):
        dimension(golden(Fraction(3, 2)), golden)


def test_dimension_two_full():
    two = make_beta(TWO)
    assert dimension(two.zero, two).value == 1.0
    assert dimension(two(Fraction(1, 2)), two).hi == 0


def test_witness_route_beyond_depth(golden):
    # 19/50 sits in an interval of length 11; at depth 8 the orbit witness finds it
    est = dimension(golden(Fraction(19, 50)), golden, depth=8)
    assert est.method == EXACT_SFT and est.word == "00101010101" and est.depth_used == 11


def test_bracketed_when_undecided(golden):
    est = dimension(golden(Fraction(1, 10)), golden, depth=12)
    assert est.method == BRACKETED
    assert 0 < est.lo < est.hi < 1
    finer = dimension(golden(Fraction(1, 10)), golden, depth=16)
    assert est.lo <= finer.lo <= finer.hi <= est.hi


def intervals_12():
    beta = make_beta(1)
    return list(enumerate_lyndon(beta, 12))


@pytest.mark.parametrize("iv", intervals_12()[::4], ids=lambda iv: iv.word)
def test_constancy_on_intervals(iv):
    beta = iv.beta
    mid = (iv.t_left + iv.t_right) / 2
    d_left, d_mid, d_right = (dimension(t, beta, 12) for t in (iv.t_left, mid, iv.t_right))
    assert d_left == d_mid
    assert d_right.method == EXACT_SFT and d_right.value == d_left.value
    low = survivor_sft_for_word(beta, iv.word)
    from betahole.sft import build_survivor_sft

    assert sft_equal(low, build_survivor_sft(EPSequence.periodic(iv.word), beta))


@pytest.mark.parametrize("order", [1, 2])
def test_strict_drop_between_consecutive_endpoints(order):
    beta = make_beta(order)
    ivs = enumerate_lyndon(beta, 10 if order == 1 else 8)
    est = [word_dimension(beta, iv.word) for iv in ivs]
    for a, b in zip(est, est[1:]):
        assert b.entropy_hi < a.entropy_lo


def test_staircase_examples(golden):
    rows = staircase(golden, [0], 8)
    assert rows[0].estimate.value == 1.0
    iv = enumerate_lyndon(golden, 8)[-4]
    inner = [iv.t_left + (iv.t_right - iv.t_left) * Fraction(k, 5) for k in range(1, 5)]
    rows = staircase(golden, inner + [Fraction(1, 2)], 8)
    assert len({(r.estimate.lo, r.estimate.hi) for r in rows[:4]}) == 1
    assert rows[-1].estimate.hi == 0


def test_staircase_monotone_with_raw_kept(golden):
    grid = [Fraction(k, 80) for k in range(80)]
    rows = staircase(golden, grid, 10)
    for a, b in zip(rows, rows[1:]):
        assert a.t < b.t
        assert a.estimate.lo >= b.estimate.lo and a.estimate.hi >= b.estimate.hi
        assert a.estimate.lo <= a.estimate.hi
        # raw values only break monotonicity inside their brackets
        assert a.raw.hi >= b.raw.lo
    for r in rows:
        assert r.raw.lo <= r.estimate.lo <= r.estimate.hi <= r.raw.hi


def test_threshold_rule(golden):
    for q in (Fraction(2, 5), Fraction(383, 1000), Fraction(99, 100)):
        assert dimension(golden(q), golden).hi == 0
    for q in (Fraction(0), Fraction(1, 7), Fraction(1, 4), Fraction(19, 50), Fraction(381, 1000)):
        assert dimension(golden(q), golden).lo > 0


@pytest.mark.parametrize(
    "depth,gap",
    [(8, ("86/29", "-53/29")), (12, ("607/199", "-375/199")), (16, ("2089/682", "-1291/682"))],
)
def test_sup_e_gaps(golden, depth, gap):
    rep = sup_E(golden, depth)
    assert rep.gap.coeff_strings() == list(gap)
    assert rep.value + rep.gap == golden.threshold
    assert rep.value < golden.threshold


def test_sup_e_two():
    two = make_beta(TWO)
    rep = sup_E(two, 8)
    assert rep.value + rep.gap == Fraction(1, 2) and rep.gap.sign() > 0


def test_local_dimension_profile(golden):
    prof = local_dimension_profile(golden.zero, golden, [Fraction(1, 10), Fraction(1, 100)], 12)
    vals = [p.estimate.lo for p in prof]
    assert all(0.99 < v < 1 for v in vals)
    prof = local_dimension_profile((golden.gen - 1) / 2, golden, ["0.1", 0.01, Fraction(1, 1000)], 16)
    assert all(abs(p.estimate.value - DIM_001) < 0.01 for p in prof)
    for a, b in zip(prof, prof[1:]):
        assert a.estimate.lo >= b.estimate.lo
    with pytest.raises(DomainError):
        local_dimension_profile(golden(Fraction(1, 2)), golden, [0.1])
    with pytest.raises(DomainError):
        local_dimension_profile(golden.zero, golden, [0])


def test_tail_dimension(golden):
    assert tail_dimension(golden(Fraction(2, 5)), golden).hi == 0
    assert tail_dimension(golden.zero, golden).value == 1.0
    q = tail_dimension(golden(Fraction(1, 4)), golden)
    assert q.word == "001" and abs(q.value - DIM_001) < 1e-12
    t = golden(Fraction(1, 10))
    tail, dim = tail_dimension(t, golden, 14), dimension(t, golden, 14)
    assert dim.lo <= tail.hi + 1e-12 and tail.lo <= dim.hi


@given(st.fractions(min_value=0, max_value=1, max_denominator=120).filter(lambda q: q < 1))
def test_routes_agree_and_threshold(q):
    beta = make_beta(1)
    t = beta(q)
    v = in_B(t, beta, 10)  # raises on any disagreement
    if v.status == NONMEMBER and v.witness is not None:
        assert in_E(t, beta).witness == v.witness
    if v.status == MEMBER:
        assert dimension(t, beta, 10).lo > 0


def test_local_profile_reaches_target_at_depth_20(golden):
    radii = [Fraction(1, 10**k) for k in range(1, 5)]
    for t in (golden.zero, (golden.gen - 1) / 2):
        target = dimension(t, golden, 20).value
        last = local_dimension_profile(t, golden, radii, 20)[-1].estimate
        assert last.method == EXACT_SFT
        assert target - 0.05 <= last.lo <= last.hi <= target + 1e-12


def test_strict_drop_fifty_pairs_at_depth_12(golden):
    ivs = enumerate_lyndon(golden, 12)
    est = [word_dimension(golden, iv.word) for iv in ivs[:51]]
    assert len(est) == 51
    assert all(b.entropy_hi < a.entropy_lo for a, b in zip(est, est[1:]))
