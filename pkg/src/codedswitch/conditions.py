"""Full-throughput condition checkers.

A full-throughput read cycle serves all L requested packets.  Three
checks of increasing precision:

* coverage: |union of all packet sets| >= k*L, necessary;
* pairwise: max_{i!=j} |S_i intersect S_j| <= 2(n-k)/(L-1), sufficient;
* extended Hall: |union over J| >= k*|J| for every packet subset J,
  necessary and sufficient (checked by subset enumeration).

The pairwise bound is kept as an exact rational; integer set-cardinality
comparisons use its floor.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import floor

import numpy as np

from .errors import DegenerateL, TooLarge
from .model import Instance

HALL_ENUMERATION_CAP = 20


@dataclass(frozen=True)
class IntersectionStats:
    """Pairwise intersection matrix of an instance's MU sets.

    ``pairwise[i][j] = |S_i intersect S_j|`` (diagonal = n).  ``phi(s, members)``
    is the sum of |intersection over I| for all s-subsets I of ``members``,
    the quantity driving the inclusion-exclusion form of the Hall condition.
    """

    pairwise: np.ndarray
    max_pairwise: int
    _masks: tuple

    def phi(self, s: int, members=None) -> int:
        if members is None:
            members = range(len(self._masks))
        members = list(members)
        total = 0
        for idx in combinations(members, s):
            inter = self._masks[idx[0]]
            for i in idx[1:]:
                inter &= self._masks[i]
            total += inter.bit_count()
        return total


def _packet_masks(inst: Instance) -> tuple:
    return tuple(sum(1 << m for m in p) for p in inst.packets)


def intersection_stats(inst: Instance) -> IntersectionStats:
    masks = _packet_masks(inst)
    L = inst.L
    pair = np.zeros((L, L), dtype=np.int64)
    for i in range(L):
        pair[i, i] = inst.n
        for j in range(i + 1, L):
            c = (masks[i] & masks[j]).bit_count()
            pair[i, j] = pair[j, i] = c
    mx = 0
    if L >= 2:
        off = pair[~np.eye(L, dtype=bool)]
        mx = int(off.max())
    return IntersectionStats(pairwise=pair, max_pairwise=mx, _masks=masks)


def coverage_holds(inst: Instance) -> bool:
    """Necessary condition: the packets cover at least k*L distinct MUs."""
    union = 0
    for p in inst.packets:
        for m in p:
            union |= 1 << m
    return union.bit_count() >= inst.k * inst.L


def t_max(n: int, k: int, L: int) -> Fraction:
    """Largest tolerable pairwise intersection, 2(n-k)/(L-1), exact.

    Integer cardinality comparisons should use floor(t_max(...)).  A single
    packet imposes no pairwise constraint, so L < 2 is rejected.
    """
    if L < 2:
        raise DegenerateL(f"pairwise bound needs L >= 2, got L={L}")
    return Fraction(2 * (n - k), L - 1)


def pairwise_holds(inst: Instance) -> bool:
    """Sufficient condition: all pairwise intersections within floor(t_max)."""
    if inst.L < 2:
        raise DegenerateL(f"pairwise bound needs L >= 2, got L={inst.L}")
    bound = floor(t_max(inst.n, inst.k, inst.L))
    masks = _packet_masks(inst)
    for i in range(inst.L):
        for j in range(i + 1, inst.L):
            if (masks[i] & masks[j]).bit_count() > bound:
                return False
    return True


def hall_full_throughput(inst: Instance, cap: int = HALL_ENUMERATION_CAP) -> bool:
    """Exact full-throughput test: every packet subset J covers >= k|J| MUs.

    Enumerates subsets in increasing cardinality so small violations are
    found cheaply.  Refuses instances with more than ``cap`` packets.
    """
    L = inst.L
    if L > cap:
        raise TooLarge(f"L={L} exceeds the {cap}-packet enumeration cap")
    masks = _packet_masks(inst)
    k = inst.k
    for c in range(1, L + 1):
        need = k * c
        for idx in combinations(range(L), c):
            union = 0
            for i in idx:
                union |= masks[i]
            if union.bit_count() < need:
                return False
    return True
