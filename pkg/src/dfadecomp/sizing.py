"""Description length of DFAs and decompositions, in nats.

For a DFA with ``m`` states, alphabet size ``s``, accepting set ``F`` and ``z``
non-stuttering transitions (``delta(q, a) != q``)::

    size = 3 + 2 ln m + 2 ln s + (|F| + 1) ln m + z (ln s + 2 ln m)

A decomposition shares the alphabet header between members and stores member
sizes relative to the smallest one::

    sum(size(A_k)) - (n - 1)(2 ln s + 1) - 2 (n - 1) ln m_1
"""
from __future__ import annotations

import math

from .automata import Decomposition, Dfa


def non_stuttering(dfa: Dfa) -> int:
    return sum(1 for q, row in enumerate(dfa.delta) for target in row if target != q)


def dfa_dl(dfa: Dfa) -> float:
    m = dfa.num_states
    ln_m = math.log(m)
    ln_s = math.log(len(dfa.alphabet))
    z = non_stuttering(dfa)
    return 3 + 2 * ln_m + 2 * ln_s + (len(dfa.accepting) + 1) * ln_m + z * (ln_s + 2 * ln_m)


def decomposition_dl(decomp: Decomposition) -> float:
    n = len(decomp)
    ln_s = math.log(len(decomp.alphabet))
    total = sum(dfa_dl(d) for d in decomp.dfas)
    if n == 1:
        return total
    return total - (n - 1) * (2 * ln_s + 1) - 2 * (n - 1) * math.log(decomp.dfas[0].num_states)


def to_bits(nats: float) -> float:
    return nats / math.log(2)
