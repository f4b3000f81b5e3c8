import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from betahole.errors import DomainError
from betahole.expansion import eval_expansion, greedy_expand
from betahole.field import TWO, make_beta
from betahole.lyndon import enumerate_lyndon
from betahole.oracle import brute_count, brute_words, is_extendable, orbit_survives
from betahole.sft import blocks, count_blocks, survivor_sft_for_word
from betahole.symbolic import EPSequence, distinct_shifts, lex_cmp


def test_examples(golden):
    assert brute_count(EPSequence(), golden, 5) == 13
    assert brute_count(EPSequence.periodic("001"), golden, 10) == count_blocks(survivor_sft_for_word(golden, "001"), 10)
    assert brute_count(EPSequence.finite("001"), golden, 1) <= 2
    with pytest.raises(DomainError):
        brute_count(EPSequence(), golden, 25)


def test_extendability(golden):
    low = EPSequence.finite("001")
    assert is_extendable("0100", low, golden)
    assert not is_extendable("0001", low, golden)
    assert not is_extendable("0110", EPSequence(), golden)


def test_brute_words_match_block_sets(golden):
    for w in ("001", "00101", "0001"):
        sft = survivor_sft_for_word(golden, w)
        for n in range(1, 10):
            assert brute_words(EPSequence.finite(w), golden, n) == blocks(sft, n)


def _cases():
    rng = random.Random(7)
    out = []
    for order, L in ((1, 8), (2, 6), (3, 5), (TWO, 5)):
        beta = make_beta(order)
        ivs = enumerate_lyndon(beta, L)
        out += [(beta, iv.word) for iv in rng.sample(ivs, min(4, len(ivs)))]
    return out


@pytest.mark.parametrize("beta,word", _cases(), ids=lambda x: str(x) if isinstance(x, str) else repr(x))
def test_brute_equals_count(beta, word):
    sft = survivor_sft_for_word(beta, word)
    for low in (EPSequence.finite(word), EPSequence.periodic(word)):
        assert [brute_count(low, beta, n) for n in range(1, 15)] == [count_blocks(sft, n) for n in range(1, 15)]


def test_orbit_examples(golden):
    b = golden.gen
    assert orbit_survives(golden.zero, golden.zero, golden, 10)
    x = eval_expansion(golden, EPSequence.periodic("001"))
    # the orbit of (b-1)/2 is {0.309, 0.5, 0.809}, all above 1/4
    assert orbit_survives(x, golden(Fraction(1, 4)), golden, 20)
    assert not orbit_survives(2 * b - 3, golden(Fraction(1, 4)), golden, 20)
    assert not orbit_survives(golden(Fraction(1, 3)), (b - 1) / 2, golden, 20)
    with pytest.raises(DomainError):
        orbit_survives(golden.one, golden.zero, golden, 1)


@given(st.text(alphabet="01", min_size=1, max_size=8), st.sampled_from([w for w in ("001", "00101", "0001", "0010101")]))
def test_orbit_matches_symbolic(period, word):
    beta = make_beta(1)
    s = EPSequence.periodic(period)
    if any(lex_cmp(x, beta.delta) >= 0 for x in distinct_shifts(s)):
        return  # not a greedy expansion
    x = eval_expansion(beta, s)
    t_r = eval_expansion(beta, EPSequence.periodic(word))
    lower = greedy_expand(t_r)
    symbolic = all(lex_cmp(y, lower) >= 0 for y in distinct_shifts(s))
    assert orbit_survives(x, t_r, beta, 2 * len(s)) == symbolic
