"""Partially-ordered task generators and the scaling benchmark harness.

An ordering task is a chain of distinct symbols ``c_0, c_1, ..., c_{L-1}`` that
must all be observed in that order, i.e. the chain is a (scattered) subsequence
of the word; other symbols are ignored.  A pair ``(before, after)`` is the chain
of length 2.  The ground truth of a task with several chains is the
decomposition holding one chain DFA per chain; the DFA has ``L + 1`` states
(progress ``0..L``) and only the final one accepts.
"""
from __future__ import annotations

import csv
import io
import itertools
import logging
import random
import string
import time
from dataclasses import dataclass, field
from typing import Sequence

from .automata import Decomposition, Dfa, equivalent, minimize, product
from .errors import GenerationError, InputError
from .pareto import SearchOptions, search_frontier
from .sample import LabeledSample

log = logging.getLogger(__name__)

CSV_COLUMNS = ("scenario", "n", "|Σ|", "num_examples", "seed", "frontier_tuples", "wall_ms", "status")


@dataclass(frozen=True)
class PartialOrderTask:
    orderings: tuple[tuple[str, ...], ...]
    alphabet: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "orderings", tuple(tuple(c) for c in self.orderings))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        if not self.orderings:
            raise InputError("a task needs at least one ordering")
        for chain in self.orderings:
            if len(chain) < 2 or len(set(chain)) != len(chain):
                raise InputError(f"ordering {chain} needs at least two distinct symbols")
            missing = [s for s in chain if s not in self.alphabet]
            if missing:
                raise InputError(f"ordering {chain} uses symbols outside the alphabet: {missing}")


def toy_task() -> PartialOrderTask:
    """Yellow before red, blue before brown, over ``y r b n``."""
    return PartialOrderTask((("y", "r"), ("b", "n")), ("y", "r", "b", "n"))


def chain_task(num_chains: int, symbols_per_chain: int = 2) -> PartialOrderTask:
    """``num_chains`` orderings over disjoint fresh symbols ``a0 b0 ... a1 b1 ...``."""
    if num_chains < 1 or symbols_per_chain < 2:
        raise InputError("need at least one chain of at least two symbols")
    letters = string.ascii_lowercase[:symbols_per_chain]
    chains = tuple(tuple(f"{c}{i}" for c in letters) for i in range(num_chains))
    return PartialOrderTask(chains, tuple(s for chain in chains for s in chain))


def ordering_dfa(chain: Sequence[str], alphabet: Sequence[str]) -> Dfa:
    L = len(chain)

    def step(q, sym):
        return q + 1 if q < L and chain[q] == sym else q

    return Dfa.from_function(tuple(alphabet), L + 1, 0, [L], step)


def ground_truth(task: PartialOrderTask) -> Decomposition:
    dfas = sorted((ordering_dfa(c, task.alphabet) for c in task.orderings),
                  key=lambda d: d.num_states)
    return Decomposition(tuple(dfas))


def default_max_length(task: PartialOrderTask) -> int:
    """Total chain length plus 2 (``2 * pairs + 2`` for pair tasks)."""
    return sum(len(c) for c in task.orderings) + 2


class _ClassSampler:
    """Exact sampler for the words of one class (accepted or rejected).

    Draws the same distribution as picking a length uniformly in
    ``0..max_length``, then each symbol uniformly, and discarding words of the
    other class, without the wasted draws.  ``ways[l][q]`` counts the words of
    length ``l`` leading from state ``q`` into the class.
    """

    def __init__(self, dfa: Dfa, max_length: int, accepted: bool):
        self.dfa = dfa
        goal = [(q in dfa.accepting) == accepted for q in range(dfa.num_states)]
        ways = [[int(g) for g in goal]]
        for _ in range(max_length):
            prev = ways[-1]
            ways.append([sum(prev[t] for t in dfa.delta[q]) for q in range(dfa.num_states)])
        self.ways = ways
        sigma = len(dfa.alphabet)
        # P(length l | class) is proportional to ways[l][q0] / sigma**l
        self.length_weights = [ways[l][dfa.initial] * sigma ** (max_length - l)
                               for l in range(max_length + 1)]
        self.total = sum(ways[l][dfa.initial] for l in range(max_length + 1))

    def draw(self, rng: random.Random) -> tuple[str, ...]:
        length = _weighted_index(rng, self.length_weights)
        q, word = self.dfa.initial, []
        for remaining in range(length, 0, -1):
            row = self.dfa.delta[q]
            a = _weighted_index(rng, [self.ways[remaining - 1][t] for t in row])
            word.append(self.dfa.alphabet[a])
            q = row[a]
        return tuple(word)


def _weighted_index(rng: random.Random, weights: Sequence[int]) -> int:
    pick = rng.randrange(sum(weights))
    for i, w in enumerate(weights):
        if pick < w:
            return i
        pick -= w
    raise AssertionError("unreachable")


def generate_sample(task: PartialOrderTask, count: int, seed: int,
                    max_length: int | None = None) -> LabeledSample:
    """``count/2`` distinct positives and ``count/2`` distinct negatives.

    Words follow the "uniform length in ``0..max_length``, then uniform
    symbols" distribution conditioned on their label; duplicates are redrawn.
    For a fixed seed, samples grow monotonically with ``count``.
    """
    if count < 2 or count % 2:
        raise InputError(f"example count must be even and >= 2, got {count}")
    if max_length is None:
        max_length = default_max_length(task)
    truth = ground_truth(task)
    half = count // 2
    mono = product(truth)
    classes = []
    for accepted in (True, False):
        sampler = _ClassSampler(mono, max_length, accepted)
        if sampler.total < half:
            kind = "positive" if accepted else "negative"
            raise GenerationError(f"only {sampler.total} {kind} words up to length "
                                  f"{max_length}; cannot draw {half}")
        classes.append(sampler)
    drawn = []
    for label, sampler in zip(("pos", "neg"), classes):
        # one stream per class: the sample for count c is a subset of the one for c + 2
        rng = random.Random(f"{seed}:{label}")
        words: dict[tuple[str, ...], None] = {}
        while len(words) < half:
            words[sampler.draw(rng)] = None
        drawn.append(frozenset(words))
    return LabeledSample(task.alphabet, drawn[0], drawn[1])


def exhaustive_sample(task: PartialOrderTask, max_length: int) -> LabeledSample:
    """Every word up to ``max_length``, labeled by the ground truth."""
    truth = ground_truth(task)
    words = [w for length in range(max_length + 1)
             for w in itertools.product(task.alphabet, repeat=length)]
    positives = frozenset(w for w in words if truth.accepts(w))
    return LabeledSample(task.alphabet, positives, frozenset(words) - positives)


def find_characteristic_sample(task: PartialOrderTask, seed: int = 0,
                               counts: Sequence[int] = tuple(range(10, 62, 2)),
                               opts: SearchOptions = SearchOptions(),
                               exact_language: bool = False):
    """Grow the example count until the frontier recovers the ground truth.

    Stops at the first count whose frontier holds the ground-truth size tuple
    and whose witness has a minimized product as large as the ground truth's.
    With ``exact_language`` the witness must also recognise exactly the
    ground-truth language.  Returns ``(count, sample, frontier)``; raises
    GenerationError if no count works.
    """
    truth = ground_truth(task)
    target = minimize(product(truth))
    for count in counts:
        sample = generate_sample(task, count, seed)
        frontier = search_frontier(sample, len(truth), opts)
        if truth.sizes in frontier.tuples:
            mono = minimize(product(frontier.witness(truth.sizes)))
            if mono.num_states == target.num_states and \
                    (not exact_language or equivalent(mono, target)):
                return count, sample, frontier
        log.info("count %d: frontier %s not yet characteristic", count, frontier.tuples)
    raise GenerationError(f"no characteristic sample among counts {list(counts)}")


# -- benchmark harness --------------------------------------------------------

@dataclass(frozen=True)
class BenchConfig:
    scenario: str
    num_dfas: tuple[int, ...]
    num_examples: tuple[int, ...]
    symbols_per_task: int = 2
    seeds: tuple[int, ...] = (0, 1, 2)
    timeout: float = 60.0
    baseline: bool = True
    symmetry_breaking: bool = True

    def __post_init__(self):
        for name in ("num_dfas", "num_examples", "seeds"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
            if not getattr(self, name):
                raise InputError(f"bench config {name} must be non-empty")
        if self.timeout <= 0:
            raise InputError("bench timeout must be positive")


DESK_CONFIGS = {
    "Q1": BenchConfig("Q1", num_dfas=(2, 3, 4, 5, 6), num_examples=(10,), symbols_per_task=2),
    "Q2": BenchConfig("Q2", num_dfas=(2,), num_examples=(10, 20, 30, 40, 50, 60), symbols_per_task=4),
}

PAPER_CONFIGS = {
    "Q1-2sym": BenchConfig("Q1-2sym", tuple(range(2, 13)), (10,), 2, tuple(range(10)), 600.0),
    "Q1-4sym": BenchConfig("Q1-4sym", tuple(range(2, 13)), (10,), 4, tuple(range(10)), 600.0),
    "Q2-2sym": BenchConfig("Q2-2sym", (4,), tuple(range(10, 201, 10)), 2, tuple(range(10)), 600.0),
    "Q2-4sym": BenchConfig("Q2-4sym", (2,), tuple(range(10, 201, 10)), 4, tuple(range(10)), 600.0),
}


def _format_tuples(tuples) -> str:
    return ";".join("(" + ",".join(map(str, t)) + ")" for t in tuples)


def run_cell(config: BenchConfig, n: int, count: int, seed: int) -> list[dict]:
    task = chain_task(n, config.symbols_per_task)
    sample = generate_sample(task, count, seed)
    rows = []
    methods = [("decomposition", n)] + ([("monolithic", 1)] if config.baseline else [])
    for method, n_search in methods:
        opts = SearchOptions(symmetry_breaking=config.symmetry_breaking,
                             global_timeout=config.timeout)
        start = time.perf_counter()
        frontier = search_frontier(sample, n_search, opts)
        wall_ms = (time.perf_counter() - start) * 1000
        rows.append({"scenario": f"{config.scenario}/{method}", "n": n,
                     "|Σ|": len(task.alphabet), "num_examples": count, "seed": seed,
                     "frontier_tuples": _format_tuples(frontier.tuples),
                     "wall_ms": round(wall_ms, 3),
                     "status": "ok" if frontier.complete else "timeout"})
    return rows


def _warm_up():
    # keeps one-time solver start-up cost out of the first timed cell
    search_frontier(LabeledSample(("a",), frozenset({("a",)}), frozenset({()})), 1)


def run_bench(config: BenchConfig, workers: int = 1) -> list[dict]:
    _warm_up()
    cells = [(n, count, seed) for n in config.num_dfas
             for count in config.num_examples for seed in config.seeds]
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(lambda c: run_cell(config, *c), cells))
    else:
        results = [run_cell(config, *c) for c in cells]
    return [row for rows in results for row in rows]


def rows_to_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


@dataclass
class CellSummary:
    scenario: str
    n: int
    num_examples: int
    mean_ms: float
    timeouts: int
    runs: int = field(default=0)


def summarize(rows: Sequence[dict]) -> list[CellSummary]:
    """Mean wall time over seeds per (scenario, n, num_examples)."""
    groups: dict[tuple, list[dict]] = {}
    for row in rows:
        groups.setdefault((row["scenario"], row["n"], row["num_examples"]), []).append(row)
    out = []
    for (scenario, n, count), members in groups.items():
        times = [float(r["wall_ms"]) for r in members]
        out.append(CellSummary(scenario, n, count, sum(times) / len(times),
                               sum(r["status"] != "ok" for r in members), len(members)))
    return out
