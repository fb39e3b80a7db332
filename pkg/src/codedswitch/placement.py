"""Packet placement policies and block-design substrates.

Three write-path policies decide which n MUs hold a packet's chunks:

* uniform: any of the C(N, n) n-subsets, drawn uniformly;
* cyclic: one of the N arcs of n cyclically consecutive MUs;
* design: a block of a packing whose pairwise intersections are bounded,
  so that full throughput is guaranteed by construction for suitable L.

Design substrates come from projective planes (Steiner 2-designs) or from
a greedy lexicographic scan equivalent to constant-weight-code packings
with distance d = 2(n - t_max).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from pathlib import Path

import numpy as np

from .errors import (
    BadParams,
    CoverageDuplicate,
    CoverageGap,
    EmptyDesign,
    IntersectionTooLarge,
    NotPrime,
    WrongCardinality,
)
from .model import Instance, muset

DESIGN_SOURCES = ("projective_plane", "lexicographic_packing", "file")


@dataclass(frozen=True)
class PlacementRng:
    """Reproducible random stream: identical (seed, stream_id) draws match."""

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence([int(self.seed), int(self.stream_id)])
        return np.random.Generator(np.random.PCG64(ss))


def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, PlacementRng):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, (int, np.integer)):
        return PlacementRng(int(rng)).generator()
    raise BadParams(f"expected PlacementRng, Generator or seed, got {type(rng)!r}")


@dataclass(frozen=True)
class BlockDesign:
    """A verified packing: b blocks of size n with intersections <= t-1.

    For ``source='projective_plane'`` the blocks are the lines of PG(2, q),
    a Steiner 2-design: b = q^2+q+1 = N and every pair of points lies in
    exactly one block.
    """

    N: int
    n: int
    t: int
    blocks: tuple
    source: str = "file"

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(tuple(b) for b in self.blocks))

    @property
    def b(self) -> int:
        return len(self.blocks)

    def block_set(self) -> frozenset:
        return frozenset(self.blocks)

    def save(self, path) -> None:
        lines = [f"{self.N} {self.n} {self.t}"]
        lines += [" ".join(str(m) for m in blk) for blk in self.blocks]
        Path(path).write_text("\n".join(lines) + "\n")

    @classmethod
    def load(cls, path) -> "BlockDesign":
        rows = Path(path).read_text().split("\n")
        rows = [r for r in rows if r.strip()]
        N, n, t = (int(x) for x in rows[0].split())
        blocks = tuple(muset(int(x) for x in r.split()) for r in rows[1:])
        return cls(N=N, n=n, t=t, blocks=blocks, source="file")


def draw_uniform(N: int, n: int, L: int, rng) -> Instance:
    """L independent uniform n-subsets of {0..N-1}, with replacement."""
    if not (1 <= n <= N) or L < 1:
        raise BadParams(f"need 1 <= n <= N and L >= 1, got N={N}, n={n}, L={L}")
    gen = _as_generator(rng)
    packets = tuple(
        tuple(sorted(gen.choice(N, size=n, replace=False).tolist())) for _ in range(L)
    )
    return Instance(N=N, k=n, n=n, packets=packets, placement="uniform")


def draw_cyclic(N: int, n: int, L: int, rng) -> Instance:
    """L independent arcs {s..s+n-1 mod N} with uniform starts, replacement allowed."""
    if not (1 <= n < N) or L < 1:
        raise BadParams(f"need 1 <= n < N and L >= 1, got N={N}, n={n}, L={L}")
    gen = _as_generator(rng)
    starts = gen.integers(0, N, size=L)
    packets = tuple(
        tuple(sorted((int(s) + r) % N for r in range(n))) for s in starts
    )
    return Instance(N=N, k=n, n=n, packets=packets, placement="cyclic")


def instance_from_starts(N: int, n: int, starts, k: int | None = None) -> Instance:
    """Cyclic instance from explicit arc starts (helper for enumeration)."""
    packets = tuple(tuple(sorted((int(s) + r) % N for r in range(n))) for s in starts)
    return Instance(N=N, k=n if k is None else k, n=n, packets=packets, placement="cyclic")


def with_k(inst: Instance, k: int) -> Instance:
    """Same placement, different chunk requirement k."""
    return Instance(N=inst.N, k=k, n=inst.n, packets=inst.packets, placement=inst.placement)


def draw_design(design: BlockDesign, L: int, rng, replace: bool = True) -> Instance:
    """L packets drawn uniformly from the design blocks (balls into bins).

    ``replace=False`` conditions on distinct blocks, for experiments that
    study the distinct-block regime directly.
    """
    if design.b == 0:
        raise EmptyDesign("design has no blocks")
    if L < 1:
        raise BadParams(f"need L >= 1, got {L}")
    gen = _as_generator(rng)
    if replace:
        idx = gen.integers(0, design.b, size=L)
    else:
        if L > design.b:
            raise BadParams(f"cannot draw {L} distinct blocks from {design.b}")
        idx = gen.choice(design.b, size=L, replace=False)
    packets = tuple(design.blocks[int(i)] for i in idx)
    return Instance(
        N=design.N, k=design.n, n=design.n, packets=packets, placement="design"
    )


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    if q % 2 == 0:
        return q == 2
    f = 3
    while f * f <= q:
        if q % f == 0:
            return False
        f += 2
    return True


def build_projective_plane(q: int) -> BlockDesign:
    """Lines of PG(2, q) as a 2-(q^2+q+1, q+1, 1) Steiner design, q prime.

    Points are normalised homogeneous triples over GF(q); a point lies on a
    line [a,b,c] iff ax + by + cz = 0 (mod q).  Produces b = q^2+q+1 blocks
    of size q+1 on as many points.
    """
    if not is_prime(q):
        raise NotPrime(f"projective plane order must be prime, got {q}")

    def normalised_triples():
        # last non-zero coordinate scaled to 1: one representative per point
        for x in range(q):
            for y in range(q):
                yield (x, y, 1)
        for x in range(q):
            yield (x, 1, 0)
        yield (1, 0, 0)

    points = list(normalised_triples())
    index = {p: i for i, p in enumerate(points)}
    assert len(points) == q * q + q + 1

    blocks = []
    for line in points:  # lines share the same normalised coordinates
        a, b, c = line
        blk = [
            index[(x, y, z)]
            for (x, y, z) in points
            if (a * x + b * y + c * z) % q == 0
        ]
        blocks.append(tuple(sorted(blk)))
    blocks.sort()
    return BlockDesign(
        N=len(points), n=q + 1, t=2, blocks=tuple(blocks), source="projective_plane"
    )


def build_lexicographic_packing(N: int, n: int, t_max: int) -> BlockDesign:
    """Greedy lexicographic scan keeping n-subsets that intersect all kept
    blocks in at most t_max elements.

    Deterministic for fixed parameters; yields a valid packing, not
    necessarily a maximum one.  Equivalent to the support of a constant
    weight code with minimum distance 2(n - t_max).
    """
    if not (0 <= t_max < n <= N):
        raise BadParams(f"need 0 <= t_max < n <= N, got N={N}, n={n}, t_max={t_max}")
    kept_masks: list[int] = []
    kept: list[tuple] = []
    for cand in combinations(range(N), n):
        cm = 0
        for m in cand:
            cm |= 1 << m
        if all((cm & km).bit_count() <= t_max for km in kept_masks):
            kept_masks.append(cm)
            kept.append(cand)
    return BlockDesign(
        N=N, n=n, t=t_max + 1, blocks=tuple(kept), source="lexicographic_packing"
    )


def verify_packing(design: BlockDesign) -> None:
    """Check block sizes and the pairwise intersection bound t-1.

    For Steiner sources (projective planes) additionally require that every
    t-subset of points is covered exactly once.
    """
    for i, blk in enumerate(design.blocks):
        if len(blk) != design.n:
            raise WrongCardinality(f"block {i} has size {len(blk)}, expected {design.n}")
    if design.source == "projective_plane":
        cover: dict[tuple, int] = {}
        for blk in design.blocks:
            for sub in combinations(blk, design.t):
                cover[sub] = cover.get(sub, 0) + 1
        for sub in combinations(range(design.N), design.t):
            c = cover.get(sub, 0)
            if c == 0:
                raise CoverageGap(f"{sub} lies in no block")
            if c > 1:
                raise CoverageDuplicate(f"{sub} lies in {c} blocks")
    masks = [sum(1 << m for m in blk) for blk in design.blocks]
    for i in range(len(masks)):
        for j in range(i + 1, len(masks)):
            inter = (masks[i] & masks[j]).bit_count()
            if inter > design.t - 1:
                raise IntersectionTooLarge(
                    f"blocks {i} and {j} intersect in {inter} > t-1 = {design.t - 1}"
                )
