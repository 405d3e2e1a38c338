"""Complete DFAs, DFA decompositions and the operations on them.

A :class:`Dfa` is always complete: ``delta[state][symbol_id]`` is defined for
every state and every symbol.  Symbols are text labels; a word is any sequence
of labels.  A :class:`Decomposition` is an ordered tuple of DFAs over one shared
alphabet whose language is the intersection of the member languages.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Iterator, Sequence

from .errors import FormatError, InputError

if TYPE_CHECKING:
    from .sample import LabeledSample

FORMAT_VERSION = "v1"

Word = Sequence[str]


def symbol_ids(alphabet: Sequence[str], word: Iterable[str]) -> tuple[int, ...]:
    """Translate a word of labels into alphabet indices."""
    index = {s: i for i, s in enumerate(alphabet)}
    ids = []
    for sym in word:
        try:
            ids.append(index[sym])
        except (KeyError, TypeError):
            raise InputError(f"unknown symbol {sym!r}; alphabet is {list(alphabet)}") from None
    return tuple(ids)


@dataclass(frozen=True)
class Dfa:
    alphabet: tuple[str, ...]
    num_states: int
    initial: int
    accepting: frozenset[int]
    delta: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        object.__setattr__(self, "delta", tuple(tuple(row) for row in self.delta))
        if not self.alphabet:
            raise InputError("alphabet must be non-empty")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise InputError(f"duplicate symbols in alphabet {list(self.alphabet)}")
        if self.num_states < 1:
            raise InputError("a DFA needs at least one state")
        if not 0 <= self.initial < self.num_states:
            raise InputError(f"initial state {self.initial} out of range")
        bad = [q for q in self.accepting if not 0 <= q < self.num_states]
        if bad:
            raise InputError(f"accepting states out of range: {sorted(bad)}")
        if len(self.delta) != self.num_states:
            raise InputError(f"delta has {len(self.delta)} rows for {self.num_states} states")
        for q, row in enumerate(self.delta):
            if len(row) != len(self.alphabet):
                raise InputError(f"delta row for state {q} has {len(row)} entries, "
                                 f"expected {len(self.alphabet)}")
            for a, target in enumerate(row):
                if not 0 <= target < self.num_states:
                    raise InputError(f"delta({q}, {self.alphabet[a]!r}) = {target} out of range")

    @classmethod
    def from_function(cls, alphabet, num_states, initial, accepting, step) -> "Dfa":
        """Build a DFA from ``step(state, symbol_label) -> state``."""
        delta = [[step(q, s) for s in alphabet] for q in range(num_states)]
        return cls(tuple(alphabet), num_states, initial, frozenset(accepting), delta)

    @classmethod
    def universal(cls, alphabet) -> "Dfa":
        """The 1-state DFA accepting every word."""
        return cls(tuple(alphabet), 1, 0, frozenset({0}), [[0] * len(alphabet)])

    def run(self, ids: Iterable[int]) -> int:
        """State reached from the initial state under a word of symbol indices."""
        q = self.initial
        for a in ids:
            q = self.delta[q][a]
        return q

    def accepts(self, word: Word) -> bool:
        return self.run(symbol_ids(self.alphabet, word)) in self.accepting

    def reachable(self) -> list[int]:
        """Reachable states in canonical BFS order."""
        seen = {self.initial}
        order = [self.initial]
        queue = deque(order)
        while queue:
            q = queue.popleft()
            for target in self.delta[q]:
                if target not in seen:
                    seen.add(target)
                    order.append(target)
                    queue.append(target)
        return order


def dfa_accepts(dfa: Dfa, word: Word) -> bool:
    return dfa.accepts(word)


@dataclass(frozen=True)
class Decomposition:
    dfas: tuple[Dfa, ...]

    def __post_init__(self):
        object.__setattr__(self, "dfas", tuple(self.dfas))
        if not self.dfas:
            raise InputError("a decomposition needs at least one DFA")
        alphabet = self.dfas[0].alphabet
        for k, dfa in enumerate(self.dfas):
            if dfa.alphabet != alphabet:
                raise InputError(f"DFA {k} has alphabet {list(dfa.alphabet)}, "
                                 f"expected {list(alphabet)}")
        sizes = self.sizes
        if any(a > b for a, b in zip(sizes, sizes[1:])):
            raise InputError(f"state counts must be non-decreasing, got {sizes}")

    @property
    def alphabet(self) -> tuple[str, ...]:
        return self.dfas[0].alphabet

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(d.num_states for d in self.dfas)

    def __len__(self):
        return len(self.dfas)

    def __iter__(self) -> Iterator[Dfa]:
        return iter(self.dfas)

    def accepts(self, word: Word) -> bool:
        ids = symbol_ids(self.alphabet, word)
        return all(d.run(ids) in d.accepting for d in self.dfas)


def decomposition_accepts(decomp: Decomposition, word: Word) -> bool:
    return decomp.accepts(word)


def product(decomp: Decomposition | Sequence[Dfa]) -> Dfa:
    """Reachable part of the intersection automaton, numbered in BFS order."""
    dfas = tuple(decomp.dfas if isinstance(decomp, Decomposition) else decomp)
    if not dfas:
        raise InputError("product of an empty sequence of DFAs")
    alphabet = dfas[0].alphabet
    if any(d.alphabet != alphabet for d in dfas):
        raise InputError("product requires a shared alphabet")
    start = tuple(d.initial for d in dfas)
    index = {start: 0}
    order = [start]
    rows = []
    queue = deque([start])
    while queue:
        state = queue.popleft()
        row = []
        for a in range(len(alphabet)):
            succ = tuple(d.delta[q][a] for d, q in zip(dfas, state))
            if succ not in index:
                index[succ] = len(order)
                order.append(succ)
                queue.append(succ)
            row.append(index[succ])
        rows.append(row)
    accepting = {index[s] for s in order
                 if all(q in d.accepting for d, q in zip(dfas, s))}
    return Dfa(alphabet, len(order), 0, frozenset(accepting), rows)


def minimize(dfa: Dfa) -> Dfa:
    """Minimal complete DFA for the same language, states in BFS order.

    Unreachable states are dropped, then Moore partition refinement merges
    equivalent states.
    """
    reach = dfa.reachable()
    n_sym = len(dfa.alphabet)
    block = {q: int(q in dfa.accepting) for q in reach}
    n_blocks = len(set(block.values()))
    while True:
        signature = {q: (block[q],) + tuple(block[dfa.delta[q][a]] for a in range(n_sym))
                     for q in reach}
        ids: dict[tuple, int] = {}
        new_block = {q: ids.setdefault(signature[q], len(ids)) for q in reach}
        block = new_block
        if len(ids) == n_blocks:
            break
        n_blocks = len(ids)
    # renumber blocks in BFS order from the initial block
    rep = {}
    for q in reach:
        rep.setdefault(block[q], q)
    start = block[dfa.initial]
    number = {start: 0}
    queue = deque([start])
    rows: dict[int, list[int]] = {}
    while queue:
        b = queue.popleft()
        row = []
        for a in range(n_sym):
            target = block[dfa.delta[rep[b]][a]]
            if target not in number:
                number[target] = len(number)
                queue.append(target)
            row.append(number[target])
        rows[number[b]] = row
    accepting = {number[b] for b in number if rep[b] in dfa.accepting}
    return Dfa(dfa.alphabet, len(number), 0, frozenset(accepting),
               [rows[i] for i in range(len(number))])


def equivalent(a: Dfa, b: Dfa) -> bool:
    """Language equality, by searching the pair automaton for a distinguishing state."""
    if a.alphabet != b.alphabet:
        raise InputError("cannot compare DFAs over different alphabets")
    start = (a.initial, b.initial)
    seen = {start}
    queue = deque([start])
    while queue:
        p, q = queue.popleft()
        if (p in a.accepting) != (q in b.accepting):
            return False
        for s in range(len(a.alphabet)):
            nxt = (a.delta[p][s], b.delta[q][s])
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return True


def is_consistent(decomp: Decomposition, sample: "LabeledSample") -> bool:
    """True iff every positive is accepted by all members and every negative
    is rejected by at least one."""
    if tuple(sample.alphabet) != decomp.alphabet:
        raise InputError(f"sample alphabet {list(sample.alphabet)} does not match "
                         f"decomposition alphabet {list(decomp.alphabet)}")
    return (all(decomp.accepts(w) for w in sample.positives)
            and not any(decomp.accepts(w) for w in sample.negatives))


# -- serialization ---------------------------------------------------------

def to_dot(dfa: Dfa, name: str = "dfa") -> str:
    """Graphviz digraph; parallel edges between two states share one label."""
    lines = [f"digraph {_dot_id(name)} {{", "  rankdir=LR;", '  __start [shape=point, label=""];']
    for q in range(dfa.num_states):
        shape = "doublecircle" if q in dfa.accepting else "circle"
        lines.append(f'  {q} [shape={shape}, label="{q}"];')
    lines.append(f"  __start -> {dfa.initial};")
    edges: dict[tuple[int, int], list[str]] = {}
    for q, row in enumerate(dfa.delta):
        for a, target in enumerate(row):
            edges.setdefault((q, target), []).append(dfa.alphabet[a])
    for (q, target), labels in edges.items():
        label = ",".join(labels).replace("\\", "\\\\").replace('"', '\\"')
        lines.append(f'  {q} -> {target} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _dot_id(name: str) -> str:
    return name if name.isidentifier() else json.dumps(name)


def dfa_to_dict(dfa: Dfa, with_alphabet: bool = True) -> dict:
    d = {}
    if with_alphabet:
        d["alphabet"] = list(dfa.alphabet)
    d.update(num_states=dfa.num_states, initial=dfa.initial,
             accepting=sorted(dfa.accepting), delta=[list(row) for row in dfa.delta])
    return d


def dfa_from_dict(d: dict, alphabet: Sequence[str] | None = None, where: str = "dfa") -> Dfa:
    if not isinstance(d, dict):
        raise FormatError(f"{where}: expected an object")
    alphabet = d.get("alphabet", alphabet)
    if alphabet is None:
        raise FormatError(f"{where}: missing 'alphabet'")
    for key in ("num_states", "initial", "accepting", "delta"):
        if key not in d:
            raise FormatError(f"{where}: missing {key!r}")
    num_states = d["num_states"]
    delta = d["delta"]
    if not isinstance(num_states, int) or not isinstance(delta, list):
        raise FormatError(f"{where}: 'num_states' must be an integer and 'delta' a list")
    for q in range(num_states):
        row = delta[q] if q < len(delta) else []
        if not isinstance(row, list):
            raise FormatError(f"{where}: delta row for state {q} must be a list")
        if len(row) < len(alphabet):
            raise FormatError(f"{where}: delta missing entry for state {q}, "
                              f"symbol {alphabet[len(row)]!r}")
    try:
        return Dfa(tuple(alphabet), num_states, d["initial"], frozenset(d["accepting"]), delta)
    except InputError as exc:
        raise FormatError(f"{where}: {exc}") from None
    except TypeError as exc:
        raise FormatError(f"{where}: {exc}") from None


def decomposition_to_dict(decomp: Decomposition) -> dict:
    return {"version": FORMAT_VERSION,
            "alphabet": list(decomp.alphabet),
            "dfas": [dfa_to_dict(d, with_alphabet=False) for d in decomp.dfas]}


def decomposition_from_dict(d: dict) -> Decomposition:
    if not isinstance(d, dict):
        raise FormatError("decomposition document must be a JSON object")
    if d.get("version") != FORMAT_VERSION:
        raise FormatError(f"unsupported version {d.get('version')!r}, expected {FORMAT_VERSION!r}")
    if "alphabet" not in d or "dfas" not in d:
        raise FormatError("decomposition document needs 'alphabet' and 'dfas'")
    dfas = [dfa_from_dict(x, d["alphabet"], where=f"dfas[{k}]") for k, x in enumerate(d["dfas"])]
    try:
        return Decomposition(tuple(dfas))
    except InputError as exc:
        raise FormatError(str(exc)) from None


def loads_json(text: str):
    """json.loads with errors converted to FormatError carrying the position."""
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def decomposition_to_json(decomp: Decomposition) -> str:
    return json.dumps(decomposition_to_dict(decomp), indent=2) + "\n"


def decomposition_from_json(text: str) -> Decomposition:
    return decomposition_from_dict(loads_json(text))
