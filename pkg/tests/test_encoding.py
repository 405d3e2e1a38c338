import random

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from dfadecomp import taskgen
from dfadecomp.automata import Dfa
from dfadecomp.encoding import (FAMILIES, GROUP_TAGS, EncodeOptions, VarMap, decode, encode,
                                expected_clause_counts, validate_sizes)
from dfadecomp.errors import InputError
from dfadecomp.pareto import identify, solve_sizes
from dfadecomp.sample import LabeledSample, build_apta
from dfadecomp.satgate import solve

AB = ("a", "b")
EPS_VS_A = LabeledSample(("a",), {()}, {("a",)})


def sat(sample, sizes, sb=True):
    return solve_sizes(build_apta(sample), sizes, sb)[0].sat


def test_one_state_cannot_separate_empty_word_from_a():
    assert not sat(EPS_VS_A, (1,))


def test_two_states_separate_empty_word_from_a():
    result, decomp = identify(EPS_VS_A, (2,))
    dfa = decomp.dfas[0]
    assert result.sat
    assert dfa.accepts(()) and not dfa.accepts(("a",))
    assert dfa.initial in dfa.accepting


def test_empty_negatives_decode_universal():
    sample = LabeledSample(AB, {("a",), ("b", "a")}, set())
    _, decomp = identify(sample, (1,))
    assert decomp.dfas[0] == Dfa.universal(AB)


def test_toy_three_three_sat():
    sample = taskgen.generate_sample(taskgen.toy_task(), 50, 0)
    assert sat(sample, (3, 3))


def _two_state_threshold(sample):
    """Smallest k such that some 2-state member plus a k-state member is consistent."""
    alphabet = sample.alphabet
    pos, neg = sorted(sample.positives), sorted(sample.negatives)
    best = None
    for mask in oracles.member_signatures(alphabet, pos, neg, 2):
        rest = [w for i, w in enumerate(neg) if not mask >> i & 1]
        k = oracles.min_dfa_size(alphabet, pos, rest, max_states=8)
        best = k if best is None else min(best, k)
    return best


def test_toy_two_k_boundary_matches_brute_force():
    # (2, k) is UNSAT only below a sample-dependent threshold: (1, m*) is
    # always SAT, so (2, k) with k >= m* is as well
    sample = taskgen.generate_sample(taskgen.toy_task(), 50, 0)
    threshold = _two_state_threshold(sample)
    assert threshold is not None and threshold > 2
    for k in range(2, threshold):
        assert not sat(sample, (2, k)), k
    assert sat(sample, (2, threshold))


def test_sizes_validation():
    with pytest.raises(InputError):
        validate_sizes(())
    with pytest.raises(InputError):
        validate_sizes((0, 2))
    with pytest.raises(InputError):
        validate_sizes((3, 2))
    with pytest.raises(InputError):
        encode(build_apta(EPS_VS_A), (0,))


def test_varmap_counts_and_inverse():
    sample = taskgen.generate_sample(taskgen.toy_task(), 10, 1)
    apta = build_apta(sample)
    sizes = (2, 3)
    cnf, vm = encode(apta, sizes)
    V, L = apta.size, len(apta.alphabet)
    assert vm.count("x") == V * sum(sizes)
    assert vm.count("y") == L * sum(m * m for m in sizes)
    assert vm.count("z") == sum(sizes)
    assert vm.count("r") == len(sizes) * len(apta.rejecting)
    pairs = sum(m * (m - 1) // 2 for m in sizes)
    assert vm.count("p") == vm.count("t") == pairs
    assert vm.count("m") == L * pairs
    assert vm.num_vars == sum(vm.count(f) for f in FAMILIES) == cnf.num_vars
    seen = set()
    for key, var in vm.items():
        assert vm.lookup(var) == key and vm.lookup(-var) == key
        seen.add(var)
    assert seen == set(range(1, vm.num_vars + 1))
    with pytest.raises(KeyError):
        vm.lookup(vm.num_vars + 1)


def test_varmap_rejects_double_allocation():
    vm = VarMap()
    vm.new("x", 0, 0, 0)
    with pytest.raises(ValueError):
        vm.new("x", 0, 0, 0)


@pytest.mark.parametrize("sb", [True, False])
@pytest.mark.parametrize("sizes", [(1,), (3,), (2, 3), (1, 2, 4)])
def test_clause_counts_match_closed_form(sizes, sb):
    sample = taskgen.generate_sample(taskgen.toy_task(), 12, 2)
    apta = build_apta(sample)
    options = EncodeOptions(symmetry_breaking=sb)
    cnf, _ = encode(apta, sizes, options)
    expected = expected_clause_counts(apta, sizes, options)
    assert {t: cnf.count(t) for t in GROUP_TAGS} == expected
    assert sum(expected.values()) == len(cnf.clauses)
    assert all(cnf.tag_of(i) in GROUP_TAGS for i in range(len(cnf.clauses)))
    assert all(c for c in cnf.clauses)


def test_clause_count_regression():
    # golden values for a fixed instance; a change here means the encoding changed
    apta = build_apta(LabeledSample.create([("a", "b"), ("b",)], [("a",), ("a", "a")]))
    cnf, vm = encode(apta, (2, 3))
    # x 25 + y 26 + z 5 + r 4 + p 4 + t 4 + m 8
    assert (vm.num_vars, len(cnf.clauses)) == (76, 255)


def test_no_symmetry_groups_when_disabled():
    cnf, vm = encode(build_apta(EPS_VS_A), (3,), EncodeOptions(symmetry_breaking=False))
    assert not any(cnf.count(t) for t in GROUP_TAGS if t.startswith("sb_"))
    assert vm.count("p") == vm.count("t") == vm.count("m") == 0


def test_root_color_fixed():
    cnf, vm = encode(build_apta(EPS_VS_A), (2, 2))
    assert cnf.group("root") == [(vm.var("x", 0, 0, 0),), (vm.var("x", 1, 0, 0),)]
    cnf, _ = encode(build_apta(EPS_VS_A), (2,), EncodeOptions(fix_root_color=False))
    assert cnf.count("root") == 0


def test_dimacs_comment_format():
    cnf, vm = encode(build_apta(EPS_VS_A), (2,))
    lines = cnf.to_dimacs(vm).splitlines()
    comments = [ln for ln in lines if ln.startswith("c ")]
    assert comments[0] == f"c x 0 0 0 {vm.var('x', 0, 0, 0)}"
    assert f"c y 0 0 1 0 {vm.var('y', 0, 0, 1, 0)}" in comments
    assert f"c z 0 1 {vm.var('z', 0, 1)}" in comments
    assert len(comments) == vm.num_vars
    header = lines[len(comments)]
    assert header == f"p cnf {cnf.num_vars} {len(cnf.clauses)}"
    assert all(ln.endswith(" 0") for ln in lines[len(comments) + 1:])
    assert not cnf.to_dimacs().startswith("c")


def test_decode_reports_missing_transition():
    cnf, vm = encode(build_apta(EPS_VS_A), (2,))
    model = solve(cnf).model
    hole = vm.var("y", 0, 0, 1, 0), vm.var("y", 0, 0, 1, 1)
    broken = [-abs(lit) if abs(lit) in hole else lit for lit in model]
    with pytest.raises(AssertionError, match="completeness clause violated"):
        decode(broken, vm, (2,))


def test_decode_checks_against_apta():
    apta = build_apta(EPS_VS_A)
    cnf, vm = encode(apta, (2,))
    model = list(solve(cnf).model)
    flipped = [-lit if abs(lit) in (vm.var("z", 0, 0), vm.var("z", 0, 1)) else lit for lit in model]
    with pytest.raises(AssertionError):
        decode(flipped, vm, (2,), apta)


def _random_instance(seed):
    rng = random.Random(seed)
    alphabet = AB if seed % 3 else ("a", "b", "c")
    pos, neg = oracles.random_sample(rng, alphabet, 4, 10)
    n = rng.randint(1, 2)
    sizes = tuple(sorted(rng.randint(1, 3) for _ in range(n)))
    return LabeledSample.create(pos, neg, alphabet), sizes


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 100_000))
def test_symmetry_breaking_is_equisatisfiable(seed):
    sample, sizes = _random_instance(seed)
    assert sat(sample, sizes, True) == sat(sample, sizes, False)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 100_000))
def test_sat_iff_brute_force_feasible(seed):
    sample, sizes = _random_instance(seed)
    pos, neg = sorted(sample.positives), sorted(sample.negatives)
    feasible = set(oracles.feasible_tuples(sample.alphabet, pos, neg, len(sizes), 3))
    assert sat(sample, sizes) == (sizes in feasible)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 100_000))
def test_monolithic_boundary(seed):
    rng = random.Random(seed)
    pos, neg = oracles.random_sample(rng, AB, 4, 10)
    sample = LabeledSample.create(pos, neg, AB)
    m_star = oracles.min_dfa_size(AB, pos, neg)
    assert sat(sample, (m_star,))
    if m_star > 1:
        assert not sat(sample, (m_star - 1,))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 100_000))
def test_no_negative_accepted_by_every_member(seed):
    sample, sizes = _random_instance(seed)
    result, decomp = identify(sample, sizes)
    if decomp is not None:
        for w in sample.negatives:
            assert not all(d.accepts(w) for d in decomp.dfas)
        for w in sample.positives:
            assert all(d.accepts(w) for d in decomp.dfas)
