"""Core domain types for switch read instances and solutions.

A switch spreads each packet over n coded chunks stored in n distinct
memory units (MUs) out of N.  A read request names L packets; serving a
packet consumes k of its MUs, and each MU delivers at most one chunk per
read cycle, so served packets must use pairwise disjoint k-subsets.  The
instantaneous throughput of a read cycle is the fraction of MUs actively
serving packets, ``rho = l_star * k / N``.

MU sets are canonical sorted tuples of indices in [0, N).  Instances and
solutions are immutable after construction and safe to share across
threads; throughput is computed in exact rational arithmetic and exported
as a float.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    BadParams,
    CardinalityMismatch,
    DuplicateIndex,
    IndexOutOfRange,
    NotCyclicArc,
    NotSubset,
    Overlap,
    RhoMismatch,
    WrongCardinality,
)

MuSet = tuple  # sorted tuple of distinct MU indices

PLACEMENT_TAGS = ("uniform", "cyclic", "design", "custom")


def muset(indices: Iterable[int]) -> MuSet:
    """Canonicalise an iterable of MU indices into a sorted tuple.

    Raises DuplicateIndex if an index repeats.
    """
    out = tuple(sorted(int(i) for i in indices))
    for a, b in zip(out, out[1:]):
        if a == b:
            raise DuplicateIndex(f"MU index {a} appears more than once")
    return out


@dataclass(frozen=True)
class Instance:
    """One read-cycle problem: L packets stored over N memory units.

    ``packets[i]`` is the sorted n-subset of MU indices holding packet i's
    coded chunks.  L is implicit as ``len(packets)`` so the two can never
    diverge.  ``placement`` tags how the packets were placed (uniform,
    cyclic, design or custom); a cyclic tag promises every packet occupies
    n cyclically consecutive MUs.
    """

    N: int
    k: int
    n: int
    packets: tuple
    placement: str = "custom"

    def __post_init__(self):
        object.__setattr__(self, "packets", tuple(tuple(p) for p in self.packets))

    @property
    def L(self) -> int:
        return len(self.packets)

    def to_json(self) -> str:
        obj = {
            "N": self.N,
            "k": self.k,
            "n": self.n,
            "placement": self.placement,
            "packets": [list(p) for p in self.packets],
        }
        return json.dumps(obj, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "Instance":
        obj = json.loads(text)
        return cls(
            N=int(obj["N"]),
            k=int(obj["k"]),
            n=int(obj["n"]),
            packets=tuple(muset(p) for p in obj["packets"]),
            placement=str(obj.get("placement", "custom")),
        )


@dataclass(frozen=True)
class Solution:
    """Per-packet assignments for one read cycle.

    ``assignments[i]`` is either None (packet i not served) or the sorted
    k-subset of MUs reading packet i.  ``l_star`` and ``rho`` are derived,
    never stored, so they cannot disagree with the assignments.
    """

    assignments: tuple

    def __post_init__(self):
        object.__setattr__(
            self,
            "assignments",
            tuple(None if a is None else tuple(a) for a in self.assignments),
        )

    @property
    def l_star(self) -> int:
        return sum(1 for a in self.assignments if a is not None)

    def rho_exact(self, inst: Instance) -> Fraction:
        return Fraction(self.l_star * inst.k, inst.N)

    def to_json(self) -> str:
        obj = {
            "assignments": [None if a is None else list(a) for a in self.assignments]
        }
        return json.dumps(obj, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "Solution":
        obj = json.loads(text)
        sol = cls(
            assignments=tuple(
                None if a is None else muset(a) for a in obj["assignments"]
            )
        )
        # Optional declared statistics are cross-checked on load.
        if "l_star" in obj and int(obj["l_star"]) != sol.l_star:
            raise RhoMismatch(
                f"declared l_star {obj['l_star']} != derived {sol.l_star}"
            )
        if "rho" in obj:
            declared = float(obj["rho"])
            k = obj.get("k")
            N = obj.get("N")
            if k is not None and N is not None:
                actual = sol.l_star * int(k) / int(N)
                if abs(declared - actual) > 1e-12:
                    raise RhoMismatch(f"declared rho {declared} != {actual}")
        return sol


@dataclass(frozen=True)
class BipartiteView:
    """Packet/MU incidence graph: edge (i, m) iff m is in packets[i]."""

    packet_count: int
    mu_count: int
    edges: tuple = field(default=())

    @property
    def packet_vertices(self) -> range:
        return range(self.packet_count)

    @property
    def mu_vertices(self) -> range:
        return range(self.mu_count)


def bipartite_view(inst: Instance) -> BipartiteView:
    edges = tuple((i, m) for i, p in enumerate(inst.packets) for m in p)
    return BipartiteView(packet_count=inst.L, mu_count=inst.N, edges=edges)


def is_cyclic_arc(mus: Sequence[int], n: int, N: int) -> bool:
    """True iff ``mus`` equals {s, s+1, ..., s+n-1} mod N for some s."""
    if len(mus) != n or n > N:
        return False
    s = set(mus)
    if len(s) != n:
        return False
    if n == N:
        return True
    for m in mus:
        if (m - 1) % N not in s:
            return all((m + r) % N in s for r in range(n))
    return False  # every predecessor present but n < N: impossible


def arc_start(mus: Sequence[int], N: int) -> int:
    """Start index of a cyclic arc (the member whose predecessor is absent)."""
    s = set(mus)
    if len(s) == N:
        return 0
    for m in mus:
        if (m - 1) % N not in s:
            return m
    raise NotCyclicArc(f"{tuple(mus)} is not a cyclic arc mod {N}")


def validate_instance(inst: Instance) -> None:
    """Check all Instance invariants; raise on the first violation."""
    if not (1 <= inst.k <= inst.n <= inst.N):
        raise BadParams(
            f"need 1 <= k <= n <= N, got k={inst.k}, n={inst.n}, N={inst.N}"
        )
    if inst.placement not in PLACEMENT_TAGS:
        raise BadParams(f"unknown placement tag {inst.placement!r}")
    for i, p in enumerate(inst.packets):
        if len(set(p)) != len(p):
            raise DuplicateIndex(f"packet {i} repeats an MU index")
        if len(p) != inst.n:
            raise CardinalityMismatch(
                f"packet {i} has {len(p)} MUs, expected n={inst.n}"
            )
        for m in p:
            if not (0 <= m < inst.N):
                raise IndexOutOfRange(f"packet {i}: MU index {m} not in [0, {inst.N})")
        if tuple(p) != tuple(sorted(p)):
            raise BadParams(f"packet {i} is not sorted ascending")
        if inst.placement == "cyclic" and not is_cyclic_arc(p, inst.n, inst.N):
            raise NotCyclicArc(f"packet {i} = {p} is not an arc of length {inst.n}")


def validate_solution(inst: Instance, sol: Solution) -> None:
    """Check all Solution invariants against ``inst``; raise on violation."""
    if len(sol.assignments) != inst.L:
        raise WrongCardinality(
            f"{len(sol.assignments)} assignments for {inst.L} packets"
        )
    seen = set()
    for i, a in enumerate(sol.assignments):
        if a is None:
            continue
        if len(a) != inst.k:
            raise WrongCardinality(
                f"packet {i} assigned {len(a)} MUs, expected k={inst.k}"
            )
        stored = set(inst.packets[i])
        for m in a:
            if m not in stored:
                raise NotSubset(f"packet {i}: MU {m} not in its stored set")
            if m in seen:
                raise Overlap(f"MU {m} assigned to more than one packet")
            seen.add(m)


def throughput(inst: Instance, sol: Solution) -> float:
    """Instantaneous throughput l_star * k / N of a valid solution."""
    return float(sol.rho_exact(inst))


def empty_solution(inst: Instance) -> Solution:
    return Solution(assignments=(None,) * inst.L)
