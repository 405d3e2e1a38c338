"""Labeled samples and the augmented prefix tree acceptor (APTA) built from them."""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .automata import FORMAT_VERSION, loads_json, symbol_ids
from .errors import ContradictionError, FormatError, InputError


@dataclass(frozen=True)
class LabeledSample:
    """Alphabet plus positive and negative words (tuples of symbol labels)."""

    alphabet: tuple[str, ...]
    positives: frozenset[tuple[str, ...]]
    negatives: frozenset[tuple[str, ...]]

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "positives", frozenset(tuple(w) for w in self.positives))
        object.__setattr__(self, "negatives", frozenset(tuple(w) for w in self.negatives))
        if not self.alphabet:
            raise InputError("alphabet must be non-empty")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise InputError(f"duplicate symbols in alphabet {list(self.alphabet)}")
        for w in self.positives | self.negatives:
            symbol_ids(self.alphabet, w)
        both = self.positives & self.negatives
        if both:
            shown = sorted(" ".join(w) or "<empty>" for w in both)
            raise ContradictionError(f"words labeled both positive and negative: {shown}")

    @classmethod
    def create(cls, positives: Iterable[Sequence[str]] = (), negatives: Iterable[Sequence[str]] = (),
               alphabet: Sequence[str] | None = None) -> "LabeledSample":
        """Build a sample; without an explicit alphabet the sorted set of
        occurring symbols is used."""
        positives = [tuple(w) for w in positives]
        negatives = [tuple(w) for w in negatives]
        if alphabet is None:
            alphabet = sorted({s for w in positives + negatives for s in w})
            if not alphabet:
                raise InputError("cannot infer an alphabet from a sample without symbols")
        return cls(tuple(alphabet), frozenset(positives), frozenset(negatives))

    def __len__(self):
        return len(self.positives) + len(self.negatives)


@dataclass(frozen=True)
class Apta:
    """Prefix tree over all sample words.

    Node 0 is the root (empty prefix).  Nodes are numbered breadth-first with
    children in alphabet order, so the tree is independent of sample order.
    ``parent[0]`` and ``label[0]`` are -1.
    """

    alphabet: tuple[str, ...]
    prefixes: tuple[tuple[int, ...], ...]
    parent: tuple[int, ...]
    label: tuple[int, ...]
    accepting: frozenset[int]
    rejecting: frozenset[int]

    @property
    def size(self) -> int:
        return len(self.prefixes)

    def __len__(self):
        return len(self.prefixes)

    def node(self, word: Sequence[str]) -> int | None:
        """Node for a word's prefix path, or None if the word is not in the tree."""
        return self._index.get(symbol_ids(self.alphabet, word))

    @property
    def _index(self) -> dict[tuple[int, ...], int]:
        cache = self.__dict__.get("_index_cache")
        if cache is None:
            cache = {p: v for v, p in enumerate(self.prefixes)}
            object.__setattr__(self, "_index_cache", cache)
        return cache


def build_apta(sample: LabeledSample) -> Apta:
    pos = {symbol_ids(sample.alphabet, w) for w in sample.positives}
    neg = {symbol_ids(sample.alphabet, w) for w in sample.negatives}
    if pos & neg:
        raise ContradictionError("sample contains contradictory labels")
    prefixes = {()}
    for w in pos | neg:
        for i in range(1, len(w) + 1):
            prefixes.add(w[:i])
    # BFS order with children in symbol order == sort by (length, ids)
    ordered = sorted(prefixes, key=lambda p: (len(p), p))
    index = {p: v for v, p in enumerate(ordered)}
    parent = tuple(index[p[:-1]] if p else -1 for p in ordered)
    label = tuple(p[-1] if p else -1 for p in ordered)
    return Apta(sample.alphabet, tuple(ordered), parent, label,
                frozenset(index[w] for w in pos), frozenset(index[w] for w in neg))


# -- file formats -----------------------------------------------------------

def sample_to_dict(sample: LabeledSample) -> dict:
    order = lambda words: sorted((list(w) for w in words), key=lambda w: (len(w), w))
    return {"version": FORMAT_VERSION, "alphabet": list(sample.alphabet),
            "positives": order(sample.positives), "negatives": order(sample.negatives)}


def sample_to_json(sample: LabeledSample) -> str:
    return json.dumps(sample_to_dict(sample), indent=2) + "\n"


def sample_from_dict(d: dict) -> LabeledSample:
    if not isinstance(d, dict):
        raise FormatError("sample document must be a JSON object")
    if "version" in d and d["version"] != FORMAT_VERSION:
        raise FormatError(f"unsupported version {d['version']!r}, expected {FORMAT_VERSION!r}")
    for key in ("positives", "negatives"):
        words = d.get(key, [])
        if not isinstance(words, list) or not all(
                isinstance(w, list) and all(isinstance(s, str) for s in w) for w in words):
            raise FormatError(f"{key!r} must be a list of words, each a list of symbol strings")
    alphabet = d.get("alphabet")
    if alphabet is not None and (not isinstance(alphabet, list)
                                 or not all(isinstance(s, str) for s in alphabet)):
        raise FormatError("'alphabet' must be a list of strings")
    return LabeledSample.create(d.get("positives", []), d.get("negatives", []), alphabet)


def sample_from_json(text: str) -> LabeledSample:
    return sample_from_dict(loads_json(text))


def read_abbadingo(text: str) -> LabeledSample:
    """Parse the Abbadingo plain-text format.

    The header is ``count alphabet_size``; every further line is
    ``label length sym ...`` with label 1 (positive), 0 (negative) or -1
    (unlabeled, skipped).  Symbols are the integers ``0..alphabet_size-1``.
    """
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormatError("empty Abbadingo file")
    try:
        count, k = (int(x) for x in lines[0].split())
    except ValueError:
        raise FormatError(f"line 1: bad Abbadingo header {lines[0]!r}") from None
    alphabet = [str(i) for i in range(k)]
    positives, negatives = [], []
    for lineno, line in enumerate(lines[1:], start=2):
        fields = line.split()
        try:
            label, length = int(fields[0]), int(fields[1])
        except (ValueError, IndexError):
            raise FormatError(f"line {lineno}: expected 'label length symbols...'") from None
        word = fields[2:]
        if len(word) != length:
            raise FormatError(f"line {lineno}: declared length {length}, found {len(word)} symbols")
        if label == 1:
            positives.append(word)
        elif label == 0:
            negatives.append(word)
        elif label != -1:
            raise FormatError(f"line {lineno}: label must be 1, 0 or -1")
    if len(lines) - 1 != count:
        raise FormatError(f"header announces {count} strings, file has {len(lines) - 1}")
    return LabeledSample.create(positives, negatives, alphabet)


def write_abbadingo(sample: LabeledSample) -> str:
    index = {s: str(i) for i, s in enumerate(sample.alphabet)}
    out = [f"{len(sample)} {len(sample.alphabet)}"]
    for label, words in ((1, sample.positives), (0, sample.negatives)):
        for w in sorted(words, key=lambda w: (len(w), w)):
            out.append(" ".join([str(label), str(len(w))] + [index[s] for s in w]))
    return "\n".join(out) + "\n"


def load_sample(path: str | Path) -> LabeledSample:
    """Read a JSON or Abbadingo sample file, detected by its first character."""
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        return sample_from_json(text)
    return read_abbadingo(text)
