"""Probability analysis of full-throughput behaviour under random placement.

For an ensemble of random instances (N, n, k, L fixed, packets drawn by a
placement policy) the central quantity is Pr(all L packets servable).
Closed forms and bounds:

* ``p_cover_uniform``  exact probability that L uniform n-subsets cover at
  least kL points, via a Markov chain on union cardinality; an upper bound
  on full throughput for uniform placement.
* ``p_pair_cyclic``    exact probability that L uniform arcs pairwise
  intersect within a threshold; a lower bound for cyclic placement.
* ``p_pair_design``    exact probability that L uniform block draws are
  distinct (balls into bins); equals full-throughput probability when a
  block cannot serve two packets (k > n/2).
* ``p_cover_cyclic``   coverage probability for arcs, by exact enumeration
  over start tuples or Monte Carlo; an upper bound for cyclic placement.
* ``p_full_throughput_exact``  Pr(L* = L) itself, by enumerating the
  placement support with an optimal solver, or Monte Carlo beyond the cap.

Binomial-heavy quantities are computed in exact rational arithmetic and
converted to float only at the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import comb, sqrt

import numpy as np

from .errors import BadParams, TooLarge
from .model import Instance
from .placement import (
    BlockDesign,
    PlacementRng,
    _as_generator,
    draw_cyclic,
    draw_design,
    draw_uniform,
    instance_from_starts,
    with_k,
)

ENUMERATION_CAP = 10**8
SOLVE_ENUMERATION_CAP = 10**6
MC_DEFAULT_SAMPLES = 10**6

CLOSED_FORM = "closed_form"
EXACT_ENUMERATION = "exact_enumeration"
MONTE_CARLO = "monte_carlo"


@dataclass(frozen=True)
class ProbabilityEstimate:
    """A probability in [0,1] with its computation method and stderr (0 if exact)."""

    value: float
    method: str
    stderr: float = 0.0

    def within(self, other: float, sigmas: float = 3.0, atol: float = 1e-12) -> bool:
        return abs(self.value - other) <= sigmas * self.stderr + atol


def _exact(value: Fraction) -> ProbabilityEstimate:
    return ProbabilityEstimate(value=float(value), method=CLOSED_FORM, stderr=0.0)


# ---------------------------------------------------------------------------
# union-cardinality Markov chain (uniform coverage)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UnionModelMatrix:
    """Transition matrix on the union cardinality of repeated uniform n-subsets.

    Entry (i, j) is the probability that the union of a fixed i-set and a
    fresh uniform n-subset of an N-element ground set has exactly j
    elements; rows are exact rationals summing to one, supported on
    max(i, n) <= j <= min(i+n, N).
    """

    N: int
    n: int
    gamma: tuple  # (N+1) x (N+1) nested tuples of Fraction


def _intersection_count(N: int, m: int, i: int, n: int) -> int:
    """Number of (i-set, n-set) pairs from N elements meeting in exactly m."""
    total = 0
    for j in range(0, min(i, n) - m + 1):
        nu = comb(N, m + j) * comb(N - (m + j), i - (m + j)) * comb(N - (m + j), n - (m + j))
        total += (-1) ** j * nu * comb(m + j, m)
    return total


def union_model_matrix(N: int, n: int) -> UnionModelMatrix:
    if not (1 <= n <= N):
        raise BadParams(f"need 1 <= n <= N, got n={n}, N={N}")
    denom = comb(N, n)
    rows = []
    for i in range(N + 1):
        d = comb(N, i) * denom
        row = [Fraction(0)] * (N + 1)
        for j in range(max(i, n), min(i + n, N) + 1):
            m = i + n - j
            row[j] = Fraction(_intersection_count(N, m, i, n), d)
        rows.append(tuple(row))
    return UnionModelMatrix(N=N, n=n, gamma=tuple(rows))


def union_cardinality_distribution(N: int, n: int, L: int):
    """Exact distribution of |union of L uniform n-subsets| as Fractions."""
    gamma = union_model_matrix(N, n).gamma
    row = [Fraction(0)] * (N + 1)
    row[0] = Fraction(1)
    for _ in range(L):
        nxt = [Fraction(0)] * (N + 1)
        for i, pi in enumerate(row):
            if pi == 0:
                continue
            gi = gamma[i]
            for j in range(max(i, n), min(i + n, N) + 1):
                nxt[j] += pi * gi[j]
        row = nxt
    return row


def p_cover_uniform(N: int, n: int, k: int, L: int) -> ProbabilityEstimate:
    """Pr(|union of L uniform n-subsets| >= kL), exact."""
    if k * L > N:
        raise BadParams(f"coverage needs kL <= N, got kL={k * L}, N={N}")
    if not (1 <= k <= n <= N) or L < 1:
        raise BadParams(f"bad parameters N={N}, n={n}, k={k}, L={L}")
    dist = union_cardinality_distribution(N, n, L)
    return _exact(1 - sum(dist[: k * L], Fraction(0)))


# ---------------------------------------------------------------------------
# cyclic pairwise probability
# ---------------------------------------------------------------------------

def p_pair_cyclic(N: int, n: int, t_max_int: int, L: int) -> ProbabilityEstimate:
    """Pr(max pairwise arc intersection <= t_max_int) for L uniform arcs.

    Exact product form: each placed arc forbids the next starts from its
    first n - t positions, leaving N - L(n - t) free slots distributed as
    gaps.  Zero when a factor is non-positive (no legal placement); one for
    L = 1 or a vacuous threshold t >= n.
    """
    if L < 1 or N < 1 or not (0 < n <= N) or t_max_int < 0:
        raise BadParams(f"bad parameters N={N}, n={n}, t={t_max_int}, L={L}")
    if L == 1 or t_max_int >= n:
        return _exact(Fraction(1))
    span = L * (n - t_max_int)
    num = Fraction(1)
    for i in range(1, L):
        factor = N - span + i
        if factor <= 0:
            return _exact(Fraction(0))
        num *= factor
    return _exact(num / Fraction(N) ** (L - 1))


# ---------------------------------------------------------------------------
# design distinct-block probability (balls into bins)
# ---------------------------------------------------------------------------

def p_pair_design(b: int, L: int) -> ProbabilityEstimate:
    """Pr(L uniform draws from b blocks are all distinct)."""
    if b < 1 or L < 1:
        raise BadParams(f"need b >= 1 and L >= 1, got b={b}, L={L}")
    if L > b:
        return _exact(Fraction(0))
    surjections = sum((-1) ** j * comb(L, j) * (L - j) ** L for j in range(L + 1))
    return _exact(Fraction(comb(b, L) * surjections, b**L))


# ---------------------------------------------------------------------------
# cyclic coverage probability
# ---------------------------------------------------------------------------

def _arc_coverage_count(starts, N: int, n: int) -> int:
    """|union of arcs| via sorted gaps: each start covers min(gap, n) points."""
    ss = sorted(starts)
    total = 0
    for a, b in zip(ss, ss[1:]):
        total += min(b - a, n)
    total += min(ss[0] + N - ss[-1], n)
    return total


def p_cover_cyclic(
    N: int,
    n: int,
    k: int,
    L: int,
    cap: int = ENUMERATION_CAP,
    samples: int = MC_DEFAULT_SAMPLES,
    rng=None,
) -> ProbabilityEstimate:
    """Pr(L uniform arcs of length n cover at least kL of N circle points).

    Exact enumeration over the N^L start tuples when that fits the cap
    (exploiting rotation invariance by pinning the first start), otherwise
    Monte Carlo with a normal-approximation stderr.
    """
    if k * L > N:
        raise BadParams(f"coverage needs kL <= N, got kL={k * L}, N={N}")
    if not (1 <= k <= n <= N) or L < 1:
        raise BadParams(f"bad parameters N={N}, n={n}, k={k}, L={L}")
    need = k * L
    if N**L <= cap:
        good = 0
        for rest in product(range(N), repeat=L - 1):
            if _arc_coverage_count((0,) + rest, N, n) >= need:
                good += 1
        return ProbabilityEstimate(
            value=float(Fraction(good, N ** (L - 1))),
            method=EXACT_ENUMERATION,
            stderr=0.0,
        )
    gen = _as_generator(rng if rng is not None else PlacementRng(0, 0))
    starts = gen.integers(0, N, size=(samples, L))
    starts.sort(axis=1)
    gaps = np.diff(starts, axis=1)
    wrap = starts[:, 0] + N - starts[:, -1]
    covered = np.minimum(gaps, n).sum(axis=1) + np.minimum(wrap, n)
    p = float(np.mean(covered >= need))
    return ProbabilityEstimate(
        value=p, method=MONTE_CARLO, stderr=sqrt(max(p * (1 - p), 1e-300) / samples)
    )


# ---------------------------------------------------------------------------
# exact full-throughput probability
# ---------------------------------------------------------------------------

def _policy_solver(policy: str, design: BlockDesign | None):
    # imported here to avoid a cycle at module load
    from .errors import ConditionViolated
    from .solvers import solve_cyclic, solve_design, solve_oracle

    if policy == "cyclic":
        return lambda inst: solve_cyclic(inst)
    if policy == "design":
        if design is None:
            raise BadParams("design policy needs a BlockDesign")

        def solve(inst):
            try:
                return solve_design(inst, design)
            except ConditionViolated:
                # parameter regime outside the guarantee; still well defined
                return solve_oracle(inst)

        return solve
    if policy == "uniform":
        return lambda inst: solve_oracle(inst)
    raise BadParams(f"unknown policy {policy!r}")


def p_full_throughput_exact(
    policy: str,
    N: int,
    n: int,
    k: int,
    L: int,
    design: BlockDesign | None = None,
    cap: int = SOLVE_ENUMERATION_CAP,
    samples: int = MC_DEFAULT_SAMPLES,
    seed: int = 0,
    exact_only: bool = False,
) -> ProbabilityEstimate:
    """Pr(L* = L) under the policy's drawing distribution.

    Enumerates the whole placement support (start tuples, block tuples or
    n-subset tuples) when it fits the cap, solving each point with the
    policy's optimal solver; otherwise falls back to Monte Carlo unless
    ``exact_only`` is set.
    """
    if not (1 <= k <= n <= N) or L < 1:
        raise BadParams(f"bad parameters N={N}, n={n}, k={k}, L={L}")
    if policy == "design" and design is not None:
        if design.N != N or design.n != n:
            raise BadParams(
                f"design is on (N={design.N}, n={design.n}), asked for (N={N}, n={n})"
            )
    solver = _policy_solver(policy, design)

    if policy == "cyclic":
        support = N**L
        if support <= cap * N:  # first start pinned by rotation invariance
            good = 0
            for rest in product(range(N), repeat=L - 1):
                inst = instance_from_starts(N, n, (0,) + rest, k=k)
                if solver(inst).l_star == L:
                    good += 1
            return ProbabilityEstimate(
                float(Fraction(good, N ** (L - 1))), EXACT_ENUMERATION, 0.0
            )
    elif policy == "design":
        b = design.b
        if b**L <= cap:
            good = 0
            total = 0
            for idx in product(range(b), repeat=L):
                packets = tuple(design.blocks[i] for i in idx)
                inst = Instance(N=N, k=k, n=n, packets=packets, placement="design")
                total += 1
                if solver(inst).l_star == L:
                    good += 1
            return ProbabilityEstimate(
                float(Fraction(good, total)), EXACT_ENUMERATION, 0.0
            )
    elif policy == "uniform":
        subsets = comb(N, n)
        if subsets**L <= cap:
            all_subsets = list(combinations(range(N), n))
            good = 0
            total = 0
            for chosen in product(all_subsets, repeat=L):
                inst = Instance(N=N, k=k, n=n, packets=chosen, placement="uniform")
                total += 1
                if solver(inst).l_star == L:
                    good += 1
            return ProbabilityEstimate(
                float(Fraction(good, total)), EXACT_ENUMERATION, 0.0
            )
    else:
        raise BadParams(f"unknown policy {policy!r}")

    if exact_only:
        raise TooLarge(f"support of {policy} policy exceeds the cap {cap}")

    gen = PlacementRng(seed, 0).generator()
    good = 0
    for _ in range(samples):
        if policy == "cyclic":
            inst = with_k(draw_cyclic(N, n, L, gen), k)
        elif policy == "design":
            inst = with_k(draw_design(design, L, gen), k)
        else:
            inst = with_k(draw_uniform(N, n, L, gen), k)
        if solver(inst).l_star == L:
            good += 1
    p = good / samples
    return ProbabilityEstimate(
        p, MONTE_CARLO, sqrt(max(p * (1 - p), 1e-300) / samples)
    )
