import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from dfadecomp import taskgen
from dfadecomp.automata import Decomposition, Dfa
from dfadecomp.sizing import decomposition_dl, dfa_dl, non_stuttering, to_bits

LN2, LN3, LN4 = math.log(2), math.log(3), math.log(4)


def test_universal_two_symbols():
    assert dfa_dl(Dfa.universal(("a", "b"))) == pytest.approx(3 + 2 * LN2, rel=1e-12)
    assert 3 + 2 * LN2 == pytest.approx(4.386, abs=1e-3)


def test_wait_done_fail(wait_done_fail):
    assert non_stuttering(wait_done_fail) == 2
    value = 3 + 9 * LN3 + 4 * LN4
    assert dfa_dl(wait_done_fail) == pytest.approx(value, rel=1e-12)
    assert value == pytest.approx(18.43, abs=5e-3)


def test_subsequence_ordering_dfa(toy_truth):
    for dfa in toy_truth.dfas:
        assert non_stuttering(dfa) == 2 and len(dfa.accepting) == 1
        assert dfa_dl(dfa) == pytest.approx(3 + 8 * LN3 + 4 * LN4, rel=1e-12)


def test_all_stuttering_has_no_transition_term():
    dfa = Dfa(("a", "b", "c"), 4, 0, {1}, [[q] * 3 for q in range(4)])
    m, s = math.log(4), math.log(3)
    assert dfa_dl(dfa) == pytest.approx(3 + 2 * m + 2 * s + 2 * m, rel=1e-12)


def test_toy_pair(toy_truth):
    member = dfa_dl(toy_truth.dfas[0])
    assert decomposition_dl(toy_truth) == pytest.approx(2 * member - (2 * LN4 + 1) - 2 * LN3,
                                                        rel=1e-12)


@pytest.mark.parametrize("k", [1, 2, 3, 5])
def test_identical_members(toy_truth, k):
    dfa = toy_truth.dfas[0]
    expected = k * dfa_dl(dfa) - (k - 1) * (2 * LN4 + 1) - 2 * (k - 1) * LN3
    assert decomposition_dl(Decomposition((dfa,) * k)) == pytest.approx(expected, rel=1e-12)


def _random_dfa(rng, k, m):
    delta = [[rng.randrange(m) for _ in range(k)] for _ in range(m)]
    return Dfa(tuple("abcdef"[:k]), m, 0, {q for q in range(m) if rng.random() < .5}, delta)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_single_member_identity(seed):
    rng = random.Random(seed)
    dfa = _random_dfa(rng, rng.randint(1, 6), rng.randint(1, 9))
    assert decomposition_dl(Decomposition((dfa,))) == dfa_dl(dfa)
    assert dfa_dl(dfa) >= 0


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6))
def test_renumbering_invariance(seed):
    rng = random.Random(seed)
    dfa = _random_dfa(rng, 3, rng.randint(2, 6))
    perm = list(range(dfa.num_states))
    rng.shuffle(perm)
    delta = [None] * dfa.num_states
    for q, row in enumerate(dfa.delta):
        delta[perm[q]] = [perm[t] for t in row]
    renamed = Dfa(dfa.alphabet, dfa.num_states, perm[dfa.initial],
                  {perm[q] for q in dfa.accepting}, delta)
    assert dfa_dl(renamed) == pytest.approx(dfa_dl(dfa), rel=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6))
def test_shared_header_saves(seed):
    rng = random.Random(seed)
    members = sorted((_random_dfa(rng, 2, rng.randint(1, 5)) for _ in range(rng.randint(2, 4))),
                     key=lambda d: d.num_states)
    decomp = Decomposition(tuple(members))
    assert decomposition_dl(decomp) < sum(dfa_dl(d) for d in members)


def test_bits():
    assert to_bits(LN2 * 5) == pytest.approx(5)
