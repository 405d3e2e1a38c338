"""CNF encoding of "is there an (m_1, ..., m_n) decomposition consistent with the APTA?".

Each DFA ``k`` colors every APTA node with one of its ``m_k`` states.  Variable
families (all indices 0-based):

* ``x(k, v, i)``    node ``v`` has color ``i`` in DFA ``k``
* ``y(k, l, i, j)`` DFA ``k`` moves from ``i`` to ``j`` on symbol ``l``
* ``z(k, i)``       state ``i`` of DFA ``k`` is accepting
* ``r(k, v)``       DFA ``k`` is chosen to reject negative node ``v``
* ``p(k, j, i)``, ``t(k, i, j)``, ``m(k, l, i, j)`` (``i < j``): symmetry-breaking
  auxiliaries for the DFS state ordering.

Negative examples only need one rejecting DFA, so each negative node gets a
disjunction over the selectors ``r(k, v)`` and each selector forces its DFA to
reject.  States are numbered in DFS preorder when symmetry breaking is on: the
parent of state ``j`` is the largest smaller state with a transition into
``j``; no state strictly between the parent and ``j`` may reach beyond ``j``;
siblings are ordered by the smallest symbol leading to them.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .automata import Decomposition, Dfa
from .errors import InputError
from .sample import Apta

Clause = tuple[int, ...]

FAMILIES = ("x", "y", "z", "r", "p", "t", "m")

GROUP_TAGS = (
    "accept",             # positives accepted by every DFA
    "reject",             # negatives rejected by at least one DFA
    "alo_color",          # every node gets a color
    "parent_transition",  # colored parent and child force the transition
    "amo_transition",     # deterministic transitions
    "amo_color",          # at most one color per node
    "alo_transition",     # complete transitions
    "transition_color",   # parent color and transition force the child color
    "no_merge",           # accepting/rejecting nodes not merged in a rejecting state
    "root",               # the APTA root takes color 0
    "sb_parent",          # every state j > 0 has a smaller parent
    "sb_p_def",
    "sb_t_def",
    "sb_dfs",
    "sb_m_def",
    "sb_symbol_order",
)


@dataclass(frozen=True)
class EncodeOptions:
    symmetry_breaking: bool = True
    fix_root_color: bool = True


class VarMap:
    """Dense, injective allocation of encoding variables to positive integers."""

    def __init__(self, sizes: Sequence[int] = (), alphabet_size: int = 0):
        self.sizes = tuple(sizes)
        self.alphabet_size = alphabet_size
        self._ids: dict[tuple, int] = {}
        self._keys: list[tuple] = [()]

    def new(self, family: str, *index: int) -> int:
        key = (family,) + index
        if key in self._ids:
            raise ValueError(f"variable {key} allocated twice")
        self._ids[key] = len(self._keys)
        self._keys.append(key)
        return len(self._keys) - 1

    def var(self, family: str, *index: int) -> int:
        return self._ids[(family,) + index]

    def get(self, family: str, *index: int) -> int | None:
        return self._ids.get((family,) + index)

    def lookup(self, literal: int) -> tuple:
        """``(family, *indices)`` for a literal (sign ignored)."""
        var = abs(literal)
        if not 0 < var < len(self._keys):
            raise KeyError(f"literal {literal} is not allocated")
        return self._keys[var]

    @property
    def num_vars(self) -> int:
        return len(self._keys) - 1

    def count(self, family: str) -> int:
        return sum(1 for key in self._keys[1:] if key[0] == family)

    def items(self):
        for var, key in enumerate(self._keys[1:], start=1):
            yield key, var


@dataclass
class CnfInstance:
    num_vars: int
    clauses: list[Clause] = field(default_factory=list)
    groups: list[tuple[str, int, int]] = field(default_factory=list)

    def group(self, tag: str) -> list[Clause]:
        return [c for t, lo, hi in self.groups if t == tag for c in self.clauses[lo:hi]]

    def count(self, tag: str) -> int:
        return sum(hi - lo for t, lo, hi in self.groups if t == tag)

    def tag_of(self, index: int) -> str:
        for t, lo, hi in self.groups:
            if lo <= index < hi:
                return t
        raise IndexError(index)

    def is_satisfied_by(self, model: Iterable[int]) -> bool:
        true = {lit for lit in model if lit > 0}
        return all(any((lit > 0) == (abs(lit) in true) for lit in c) for c in self.clauses)

    def to_dimacs(self, varmap: VarMap | None = None) -> str:
        """DIMACS CNF; with a varmap, one ``c <family> <indices...> <var>`` comment per variable."""
        out = []
        if varmap is not None:
            for key, var in varmap.items():
                out.append("c " + " ".join(str(x) for x in key) + f" {var}")
        out.append(f"p cnf {self.num_vars} {len(self.clauses)}")
        out.extend(" ".join(map(str, c)) + " 0" for c in self.clauses)
        return "\n".join(out) + "\n"


class _Builder:
    def __init__(self):
        self.clauses: list[Clause] = []
        self.groups: list[tuple[str, int, int]] = []
        self._tag: str | None = None
        self._start = 0

    def begin(self, tag: str):
        self._close()
        self._tag, self._start = tag, len(self.clauses)

    def _close(self):
        if self._tag is not None and len(self.clauses) > self._start:
            self.groups.append((self._tag, self._start, len(self.clauses)))
        self._tag = None

    def add(self, *lits: int):
        assert lits, "empty clause"
        self.clauses.append(lits)

    def finish(self, num_vars: int) -> CnfInstance:
        self._close()
        return CnfInstance(num_vars, self.clauses, self.groups)


def validate_sizes(sizes: Sequence[int]) -> tuple[int, ...]:
    sizes = tuple(sizes)
    if not sizes:
        raise InputError("size tuple must be non-empty")
    if any(not isinstance(m, int) or m < 1 for m in sizes):
        raise InputError(f"every size must be a positive integer, got {sizes}")
    if any(a > b for a, b in zip(sizes, sizes[1:])):
        raise InputError(f"size tuple must be non-decreasing, got {sizes}")
    return sizes


def encode(apta: Apta, sizes: Sequence[int],
           options: EncodeOptions = EncodeOptions()) -> tuple[CnfInstance, VarMap]:
    sizes = validate_sizes(sizes)
    n, L, V = len(sizes), len(apta.alphabet), apta.size
    vm = VarMap(sizes, L)
    for k, mk in enumerate(sizes):
        for v in range(V):
            for i in range(mk):
                vm.new("x", k, v, i)
        for l in range(L):
            for i in range(mk):
                for j in range(mk):
                    vm.new("y", k, l, i, j)
        for i in range(mk):
            vm.new("z", k, i)
    negatives = sorted(apta.rejecting)
    positives = sorted(apta.accepting)
    for k in range(n):
        for v in negatives:
            vm.new("r", k, v)
    if options.symmetry_breaking:
        for k, mk in enumerate(sizes):
            for i, j in combinations(range(mk), 2):
                vm.new("p", k, j, i)
                vm.new("t", k, i, j)
                for l in range(L):
                    vm.new("m", k, l, i, j)

    x = lambda k, v, i: vm.var("x", k, v, i)
    y = lambda k, l, i, j: vm.var("y", k, l, i, j)
    z = lambda k, i: vm.var("z", k, i)
    b = _Builder()
    ks = list(enumerate(sizes))
    inner = range(1, V)

    b.begin("accept")
    for v in positives:
        for k, mk in ks:
            for i in range(mk):
                b.add(-x(k, v, i), z(k, i))

    b.begin("reject")
    for v in negatives:
        b.add(*(vm.var("r", k, v) for k in range(n)))
        for k, mk in ks:
            r = vm.var("r", k, v)
            for i in range(mk):
                b.add(-r, -x(k, v, i), -z(k, i))

    b.begin("alo_color")
    for v in range(V):
        for k, mk in ks:
            b.add(*(x(k, v, i) for i in range(mk)))

    b.begin("parent_transition")
    for v in inner:
        pv, lv = apta.parent[v], apta.label[v]
        for k, mk in ks:
            for i in range(mk):
                for j in range(mk):
                    b.add(-x(k, pv, i), -x(k, v, j), y(k, lv, i, j))

    b.begin("amo_transition")
    for l in range(L):
        for k, mk in ks:
            for i in range(mk):
                for j, t in combinations(range(mk), 2):
                    b.add(-y(k, l, i, j), -y(k, l, i, t))

    b.begin("amo_color")
    for v in range(V):
        for k, mk in ks:
            for i, j in combinations(range(mk), 2):
                b.add(-x(k, v, i), -x(k, v, j))

    b.begin("alo_transition")
    for l in range(L):
        for k, mk in ks:
            for i in range(mk):
                b.add(*(y(k, l, i, j) for j in range(mk)))

    b.begin("transition_color")
    for v in inner:
        pv, lv = apta.parent[v], apta.label[v]
        for k, mk in ks:
            for i in range(mk):
                for j in range(mk):
                    b.add(-x(k, pv, i), -y(k, lv, i, j), x(k, v, j))

    b.begin("no_merge")
    for vn in negatives:
        for vp in positives:
            for k, mk in ks:
                for i in range(mk):
                    b.add(-x(k, vn, i), z(k, i), -x(k, vp, i))

    if options.fix_root_color:
        b.begin("root")
        for k, _ in ks:
            b.add(x(k, 0, 0))

    if options.symmetry_breaking:
        _symmetry_breaking(b, vm, sizes, L)

    return b.finish(vm.num_vars), vm


def _symmetry_breaking(b: _Builder, vm: VarMap, sizes: tuple[int, ...], L: int):
    y = lambda k, l, i, j: vm.var("y", k, l, i, j)
    p = lambda k, j, i: vm.var("p", k, j, i)
    t = lambda k, i, j: vm.var("t", k, i, j)
    m = lambda k, l, i, j: vm.var("m", k, l, i, j)
    ks = list(enumerate(sizes))

    b.begin("sb_parent")
    for k, mk in ks:
        for j in range(1, mk):
            b.add(*(p(k, j, i) for i in range(j)))

    b.begin("sb_p_def")
    # p(j, i) <=> t(i, j) and no t(h, j) for i < h < j
    for k, mk in ks:
        for i, j in combinations(range(mk), 2):
            b.add(-p(k, j, i), t(k, i, j))
            for h in range(i + 1, j):
                b.add(-p(k, j, i), -t(k, h, j))
            b.add(p(k, j, i), -t(k, i, j), *(t(k, h, j) for h in range(i + 1, j)))

    b.begin("sb_t_def")
    for k, mk in ks:
        for i, j in combinations(range(mk), 2):
            b.add(-t(k, i, j), *(y(k, l, i, j) for l in range(L)))
            for l in range(L):
                b.add(t(k, i, j), -y(k, l, i, j))

    b.begin("sb_dfs")
    for k, mk in ks:
        for i, q_, j, q in combinations(range(mk), 4):
            b.add(-p(k, j, i), -t(k, q_, q))

    b.begin("sb_m_def")
    # m(l, i, j) <=> y(l, i, j) and no smaller symbol moves i to j
    for k, mk in ks:
        for i, j in combinations(range(mk), 2):
            for l in range(L):
                b.add(-m(k, l, i, j), y(k, l, i, j))
                for lo in range(l):
                    b.add(-m(k, l, i, j), -y(k, lo, i, j))
                b.add(m(k, l, i, j), -y(k, l, i, j), *(y(k, lo, i, j) for lo in range(l)))

    b.begin("sb_symbol_order")
    # siblings j < q of parent i: q's smallest symbol is not below j's
    for k, mk in ks:
        for i, j, q in combinations(range(mk), 3):
            for r, s in combinations(range(L), 2):
                b.add(-p(k, j, i), -p(k, q, i), -m(k, s, i, j), -m(k, r, i, q))


def decode(model: Iterable[int], varmap: VarMap, sizes: Sequence[int],
           apta: Apta | None = None) -> Decomposition:
    """Read the decomposition out of a satisfying assignment.

    With ``apta`` given, the result is checked against every labeled node.
    """
    sizes = validate_sizes(sizes)
    true = {lit for lit in model if lit > 0}
    L = varmap.alphabet_size
    dfas = []
    for k, mk in enumerate(sizes):
        delta = []
        for i in range(mk):
            row = []
            for l in range(L):
                targets = [j for j in range(mk) if varmap.var("y", k, l, i, j) in true]
                if not targets:
                    raise AssertionError(f"completeness clause violated: DFA {k} has no "
                                         f"transition from state {i} on symbol {l}")
                row.append(targets[0])
            delta.append(row)
        accepting = frozenset(i for i in range(mk) if varmap.var("z", k, i) in true)
        roots = [i for i in range(mk) if varmap.var("x", k, 0, i) in true]
        initial = roots[0] if roots else 0
        dfas.append((mk, initial, accepting, delta))
    alphabet = apta.alphabet if apta is not None else tuple(str(l) for l in range(L))
    decomp = Decomposition(tuple(Dfa(alphabet, mk, q0, acc, delta) for mk, q0, acc, delta in dfas))
    if apta is not None:
        assert_consistent_with_apta(decomp, apta)
    return decomp


def assert_consistent_with_apta(decomp: Decomposition, apta: Apta):
    for v in apta.accepting:
        if not all(d.run(apta.prefixes[v]) in d.accepting for d in decomp.dfas):
            raise AssertionError(f"decoded decomposition rejects positive node {v}")
    for v in apta.rejecting:
        if all(d.run(apta.prefixes[v]) in d.accepting for d in decomp.dfas):
            raise AssertionError(f"decoded decomposition accepts negative node {v}")


def expected_clause_counts(apta: Apta, sizes: Sequence[int],
                           options: EncodeOptions = EncodeOptions()) -> dict[str, int]:
    """Closed-form clause count per group tag."""
    from math import comb
    V, L = apta.size, len(apta.alphabet)
    E, P, N = V - 1, len(apta.accepting), len(apta.rejecting)
    counts = dict.fromkeys(GROUP_TAGS, 0)
    for m in sizes:
        counts["accept"] += P * m
        counts["reject"] += N * m
        counts["alo_color"] += V
        counts["parent_transition"] += E * m * m
        counts["amo_transition"] += L * m * comb(m, 2)
        counts["amo_color"] += V * comb(m, 2)
        counts["alo_transition"] += L * m
        counts["transition_color"] += E * m * m
        counts["no_merge"] += N * P * m
        counts["root"] += int(options.fix_root_color)
        if options.symmetry_breaking:
            pairs = comb(m, 2)
            counts["sb_parent"] += m - 1
            # 2 clauses per pair plus one per state strictly between
            counts["sb_p_def"] += 2 * pairs + comb(m, 3)
            counts["sb_t_def"] += pairs * (1 + L)
            counts["sb_dfs"] += comb(m, 4)
            counts["sb_m_def"] += pairs * (2 * L + comb(L, 2))
            counts["sb_symbol_order"] += comb(m, 3) * comb(L, 2)
    counts["reject"] += N
    return counts
