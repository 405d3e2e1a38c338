"""Breadth-first enumeration of the Pareto-optimal size tuples.

The search walks the DAG of non-decreasing size tuples, where an edge adds one
state to one coordinate.  A tuple is solved only if no frontier member
dominates it; a SAT tuple joins the frontier and is not expanded, an UNSAT
tuple enqueues its ordered successors.  Tuples are processed one coordinate-sum
layer at a time, in lexicographic order inside a layer.  Tuples of equal sum
can never dominate one another, so a layer may be solved concurrently and the
frontier merged afterwards without changing the result.
"""
from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .automata import Decomposition, decomposition_to_dict, is_consistent
from .encoding import EncodeOptions, decode, encode, validate_sizes
from .errors import InputError, SizeCapExceeded
from .sample import Apta, LabeledSample, build_apta
from .satgate import SolveResult, Status, make_backend, solve

log = logging.getLogger(__name__)

SizeTuple = tuple[int, ...]


def dominates(a: Sequence[int], b: Sequence[int]) -> bool:
    """Strict product-order dominance: ``a <= b`` everywhere and ``<`` somewhere."""
    if len(a) != len(b):
        raise InputError(f"cannot compare size tuples of lengths {len(a)} and {len(b)}")
    return all(x <= y for x, y in zip(a, b)) and any(x < y for x, y in zip(a, b))


def successors(t: Sequence[int]) -> list[SizeTuple]:
    out = []
    for j in range(len(t)):
        s = tuple(m + 1 if i == j else m for i, m in enumerate(t))
        if all(a <= b for a, b in zip(s, s[1:])):
            out.append(s)
    return sorted(out)


@dataclass(frozen=True)
class SearchOptions:
    symmetry_breaking: bool = True
    timeout: float | None = None          # seconds per SAT call
    global_timeout: float | None = None   # seconds for the whole search
    size_cap: int | None = None           # default: APTA size + 1
    start: str = "ones"                   # "ones" or "twos"
    parallel: int = 1
    backend: str = "internal"


@dataclass(frozen=True)
class FrontierEntry:
    sizes: SizeTuple
    decomposition: Decomposition


@dataclass
class Frontier:
    n: int
    entries: list[FrontierEntry] = field(default_factory=list)
    complete: bool = True
    reason: str | None = None
    solved: list[tuple[SizeTuple, str]] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def tuples(self) -> list[SizeTuple]:
        return [e.sizes for e in self.entries]

    def witness(self, sizes: Sequence[int]) -> Decomposition:
        for e in self.entries:
            if e.sizes == tuple(sizes):
                return e.decomposition
        raise KeyError(tuple(sizes))

    def to_dict(self) -> dict:
        """Machine-readable report; contains no timings so it is reproducible."""
        d = {"version": "v1", "n": self.n, "incomplete": not self.complete,
             "frontier": [{"sizes": list(e.sizes),
                           "decomposition": decomposition_to_dict(e.decomposition)}
                          for e in self.entries],
             "solved": [{"sizes": list(t), "status": s} for t, s in self.solved]}
        if self.reason:
            d["reason"] = self.reason
        return d


def solve_sizes(apta: Apta, sizes: Sequence[int], symmetry_breaking: bool = True,
                budget: float | None = None, backend=None
                ) -> tuple[SolveResult, Decomposition | None]:
    """One SAT call: is there a decomposition with exactly these state counts?"""
    sizes = validate_sizes(sizes)
    cnf, varmap = encode(apta, sizes, EncodeOptions(symmetry_breaking=symmetry_breaking))
    result = solve(cnf, budget, backend)
    if not result.sat:
        return result, None
    return result, decode(result.model, varmap, sizes, apta)


def identify(sample: LabeledSample, sizes: Sequence[int], symmetry_breaking: bool = True,
             budget: float | None = None, backend=None):
    apta = build_apta(sample)
    result, decomp = solve_sizes(apta, sizes, symmetry_breaking, budget, backend)
    if decomp is not None and not is_consistent(decomp, sample):
        raise AssertionError("decoded decomposition is inconsistent with the sample")
    return result, decomp


def search_frontier(sample: LabeledSample, n: int,
                    opts: SearchOptions = SearchOptions()) -> Frontier:
    if not isinstance(n, int) or n < 1:
        raise InputError(f"number of DFAs must be a positive integer, got {n!r}")
    if opts.start not in ("ones", "twos"):
        raise InputError(f"start must be 'ones' or 'twos', got {opts.start!r}")
    started = time.perf_counter()
    deadline = None if opts.global_timeout is None else started + opts.global_timeout
    apta = build_apta(sample)
    cap = opts.size_cap if opts.size_cap is not None else apta.size + 1
    backend = make_backend(opts.backend)
    result = Frontier(n)
    found: dict[SizeTuple, Decomposition] = {}

    layer = [(1,) * n if opts.start == "ones" else (2,) * n]
    visited = set(layer)

    def budget():
        if deadline is None:
            return opts.timeout
        remaining = deadline - time.perf_counter()
        return remaining if opts.timeout is None else min(opts.timeout, remaining)

    def run(sizes):
        return solve_sizes(apta, sizes, opts.symmetry_breaking, budget(), backend)

    pool = ThreadPoolExecutor(opts.parallel) if opts.parallel > 1 else None
    try:
        while layer:
            todo = [t for t in sorted(layer) if not any(dominates(f, t) for f in found)]
            too_big = [t for t in todo if t[-1] > cap]
            if too_big:
                raise SizeCapExceeded(f"size tuple {too_big[0]} exceeds the size cap {cap}")
            if deadline is not None and time.perf_counter() >= deadline:
                result.complete, result.reason = False, "global timeout"
                break
            outcomes = list(pool.map(run, todo)) if pool else (run(t) for t in todo)
            next_layer = []
            for sizes, (res, decomp) in zip(todo, outcomes):
                log.debug("sizes %s: %s", sizes, res.status.value)
                if res.status is Status.TIMEOUT:
                    result.complete = False
                    result.reason = f"timeout while solving {sizes}"
                    break
                result.solved.append((sizes, res.status.value))
                if res.sat:
                    assert is_consistent(decomp, sample)
                    found[sizes] = decomp
                else:
                    for s in successors(sizes):
                        if s not in visited:
                            visited.add(s)
                            next_layer.append(s)
            if not result.complete:
                break
            layer = next_layer
    finally:
        if pool:
            pool.shutdown(cancel_futures=True)
    result.entries = [FrontierEntry(t, found[t]) for t in sorted(found)]
    result.wall_time = time.perf_counter() - started
    return result
