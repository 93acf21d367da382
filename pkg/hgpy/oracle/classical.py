# -*- coding: utf-8 -*-
"""Bit-flip decoding of the classical expander code ker(H)
"""
import heapq
from typing import List, Union

import hgpy.core.gf2 as hggf2
import hgpy.core.graph as hggraph
import hgpy.core.logger as hglogger
from hgpy.core.exceptions import DimensionError

log = hglogger.getLogger(__name__)


def classical_flip_decode(G: hggraph.BipartiteGraph, s: hggf2.Gf2Vector) -> Union[hggf2.Gf2Vector, None]:
    """Flip left bits with more unsatisfied than satisfied checks until the syndrome vanishes

    Bits are the left vertices, checks the right vertices. The lowest
    flippable bit goes first. Returns the correction, or None when no single
    flip lowers the syndrome weight any more.
    """
    if s.length != G.n_B:
        raise DimensionError(f'Syndrome of length {s.length} does not match n_B={G.n_B}')

    syndrome = s.to_bits().astype(int).tolist()
    unsatisfied: List[int] = [sum(syndrome[b] for b in nbrs) for nbrs in G.adjacency_A]
    correction = [0] * G.n_A

    def flippable(a: int) -> bool:
        return 2 * unsatisfied[a] > G.delta_A

    heap = [a for a in range(G.n_A) if flippable(a)]
    heapq.heapify(heap)

    while heap:
        a = heapq.heappop(heap)
        if not flippable(a):
            continue

        correction[a] ^= 1
        for b in G.adjacency_A[a]:
            syndrome[b] ^= 1
            step = 1 if syndrome[b] else -1
            for other in G.adjacency_B[b]:
                unsatisfied[other] += step
                if step > 0 and flippable(other):
                    heapq.heappush(heap, other)
        if flippable(a):
            heapq.heappush(heap, a)

    if any(syndrome):
        log.debug(f'Bit-flip decoding stuck with syndrome weight {sum(syndrome)}')
        return None
    return hggf2.Gf2Vector.from_bits(correction)
