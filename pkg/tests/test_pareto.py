import random

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from dfadecomp import taskgen
from dfadecomp.automata import is_consistent
from dfadecomp.errors import ContradictionError, InputError, SizeCapExceeded
from dfadecomp.pareto import SearchOptions, dominates, search_frontier, successors
from dfadecomp.sample import LabeledSample

AB = ("a", "b")


def test_dominates():
    assert dominates((2, 3), (3, 3))
    assert not dominates((3, 3), (2, 4))
    assert not dominates((2, 4), (3, 3))
    assert not dominates((3, 3), (3, 3))
    with pytest.raises(InputError):
        dominates((1,), (1, 2))


@pytest.mark.parametrize("t, expected", [
    ((1, 1), [(1, 2)]),
    ((2, 2), [(2, 3)]),
    ((2, 3), [(2, 4), (3, 3)]),
    ((4,), [(5,)]),
    ((1, 1, 1), [(1, 1, 2)]),
])
def test_successors(t, expected):
    assert successors(t) == expected


def test_universal_member_pair():
    frontier = search_frontier(LabeledSample(("a",), {()}, {("a",)}), 2)
    assert frontier.tuples == [(1, 2)]
    assert frontier.complete


def test_no_negatives_gives_all_ones():
    sample = LabeledSample(AB, {("a",), ("a", "b")}, set())
    assert search_frontier(sample, 2).tuples == [(1, 1)]


def test_twos_start():
    frontier = search_frontier(LabeledSample(("a",), {()}, {("a",)}), 2, SearchOptions(start="twos"))
    assert frontier.tuples == [(2, 2)]


def test_toy_frontier_contains_three_three():
    sample = taskgen.generate_sample(taskgen.toy_task(), 50, 0)
    frontier = search_frontier(sample, 2)
    assert (3, 3) in frontier.tuples
    for e in frontier.entries:
        assert is_consistent(e.decomposition, sample)
        assert e.decomposition.sizes == e.sizes


def test_exhaustive_toy_sample(toy_exhaustive):
    assert search_frontier(toy_exhaustive, 1).tuples == [(9,)]
    assert (3, 3) in search_frontier(toy_exhaustive, 2).tuples


def test_size_cap_is_an_error():
    sample = LabeledSample(("a",), {(), ("a", "a")}, {("a",)})
    with pytest.raises(SizeCapExceeded):
        search_frontier(sample, 1, SearchOptions(size_cap=1))


def test_global_timeout_marks_incomplete():
    sample = taskgen.generate_sample(taskgen.toy_task(), 50, 0)
    frontier = search_frontier(sample, 2, SearchOptions(global_timeout=1e-6))
    assert not frontier.complete
    assert frontier.to_dict()["incomplete"] is True
    assert "timeout" in frontier.reason


def test_per_call_timeout_marks_incomplete():
    sample = taskgen.generate_sample(taskgen.toy_task(), 50, 0)
    frontier = search_frontier(sample, 2, SearchOptions(timeout=1e-6))
    assert not frontier.complete


def test_bad_arguments():
    sample = LabeledSample(("a",), {()}, set())
    with pytest.raises(InputError):
        search_frontier(sample, 0)
    with pytest.raises(InputError):
        search_frontier(sample, 1, SearchOptions(start="threes"))


def test_contradiction_propagates():
    with pytest.raises(ContradictionError):
        search_frontier(LabeledSample.create([("a",)], [("a",)]), 1)


def test_each_tuple_solved_once():
    sample = taskgen.generate_sample(taskgen.toy_task(), 30, 1)
    frontier = search_frontier(sample, 3)
    solved = [t for t, _ in frontier.solved]
    assert len(solved) == len(set(solved))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 100_000), st.integers(1, 3))
def test_frontier_is_antichain_and_consistent(seed, n):
    rng = random.Random(seed)
    pos, neg = oracles.random_sample(rng, AB, 4, 10)
    sample = LabeledSample.create(pos, neg, AB)
    frontier = search_frontier(sample, n)
    for a in frontier.tuples:
        assert not any(dominates(b, a) for b in frontier.tuples)
    for e in frontier.entries:
        assert is_consistent(e.decomposition, sample)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 100_000))
def test_parallel_matches_sequential(seed):
    rng = random.Random(seed)
    pos, neg = oracles.random_sample(rng, AB, 5, 12)
    sample = LabeledSample.create(pos, neg, AB)
    a = search_frontier(sample, 2)
    b = search_frontier(sample, 2, SearchOptions(parallel=3))
    assert a.to_dict() == b.to_dict()


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 100_000))
def test_monolithic_frontier_is_minimum(seed):
    rng = random.Random(seed)
    pos, neg = oracles.random_sample(rng, AB, 4, 10)
    assert search_frontier(LabeledSample.create(pos, neg, AB), 1).tuples == \
        [(oracles.min_dfa_size(AB, pos, neg),)]
