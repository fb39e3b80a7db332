"""Read algorithms: given an instance, serve as many packets as possible.

An optimal read algorithm returns the maximum number of packets servable
with pairwise disjoint k-subsets.  The general problem is NP-hard once
3 <= k <= n (see ``reduce_lsp`` for an executable reduction from l-set
packing), so this module provides:

* ``solve_oracle``   exhaustive branch-and-bound, exact on any instance
                     small enough to enumerate; the reference for tests;
* ``solve_greedy``   the natural baseline, optimal only by luck;
* ``solve_matching_k1`` / ``solve_matching_k2n2``
                     polynomial special cases via bipartite matching and
                     general-graph (blossom) matching;
* ``solve_cyclic``   optimal for cyclic placements via anchored sweeps,
                     assigning each served packet k cyclically consecutive
                     MUs so the unread chunks form one cyclic erasure burst;
* ``solve_design``   optimal for design placements via exclusive-MU pools
                     and a balanced orientation splitting shared MUs.

All solvers are pure functions of their inputs and deterministic; the
documented tie-breaking rules make outputs reproducible.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from math import floor

from .conditions import t_max
from .errors import (
    BadParams,
    BlockNotInDesign,
    ConditionViolated,
    TooLarge,
    UnequalCardinality,
    WrongParams,
)
from .model import Instance, Solution, arc_start, empty_solution, is_cyclic_arc
from .placement import BlockDesign, _as_generator

DEFAULT_ORACLE_CAP = 24

SOLVER_KINDS = ("oracle", "greedy", "matching_k1", "matching_k2n2", "cyclic_opt", "design_opt")


# ---------------------------------------------------------------------------
# exhaustive oracle
# ---------------------------------------------------------------------------

def solve_oracle(inst: Instance, cap: int = DEFAULT_ORACLE_CAP) -> Solution:
    """Provably maximal solution by branch-and-bound over packets.

    Each packet is either skipped or assigned one k-subset of its still
    free MUs; subproblem values are memoised on (packet index, used MUs
    restricted to the future packets' span).  Search order is fixed for
    reproducibility: packets by index, k-subsets in lexicographic order,
    the skip branch last.  Refuses instances with L*n > cap.
    """
    L, n, k = inst.L, inst.n, inst.k
    if L * n > cap:
        raise TooLarge(f"L*n = {L * n} exceeds the oracle cap {cap}")
    if L == 0:
        return empty_solution(inst)

    options = []  # per packet: list of (mask, mus) in lexicographic order
    for p in inst.packets:
        opts = []
        for sub in combinations(p, k):
            m = 0
            for mu in sub:
                m |= 1 << mu
            opts.append((m, sub))
        options.append(opts)

    future = [0] * (L + 1)
    for i in range(L - 1, -1, -1):
        fm = future[i + 1]
        for mu in inst.packets[i]:
            fm |= 1 << mu
        future[i] = fm

    memo: dict = {}

    def best(idx: int, used: int) -> int:
        if idx == L:
            return 0
        used &= future[idx]
        key = (idx, used)
        hit = memo.get(key)
        if hit is not None:
            return hit
        rem = L - idx
        b = 0
        for om, _ in options[idx]:
            if om & used:
                continue
            v = 1 + best(idx + 1, used | om)
            if v > b:
                b = v
                if b == rem:
                    break
        if b < rem:
            v = best(idx + 1, used)
            if v > b:
                b = v
        memo[key] = b
        return b

    best(0, 0)

    assignments: list = [None] * L
    used = 0
    for idx in range(L):
        target = best(idx, used)
        chosen = None
        for om, mus in options[idx]:
            if om & used:
                continue
            if 1 + best(idx + 1, used | om) == target:
                chosen = (om, mus)
                break
        if chosen is not None:
            assignments[idx] = chosen[1]
            used |= chosen[0]
    return Solution(assignments=tuple(assignments))


# ---------------------------------------------------------------------------
# greedy baseline
# ---------------------------------------------------------------------------

def solve_greedy(inst: Instance, rng) -> Solution:
    """Visit packets in a random order; serve any packet that still has k
    free MUs, taking its k lowest-index free MUs.  Valid but not optimal."""
    gen = _as_generator(rng)
    order = gen.permutation(inst.L)
    used = bytearray(inst.N)
    assignments: list = [None] * inst.L
    for i in order:
        i = int(i)
        avail = [m for m in inst.packets[i] if not used[m]]
        if len(avail) >= inst.k:
            take = avail[: inst.k]
            for m in take:
                used[m] = 1
            assignments[i] = tuple(take)
    return Solution(assignments=tuple(assignments))


# ---------------------------------------------------------------------------
# matching special cases
# ---------------------------------------------------------------------------

def solve_matching_k1(inst: Instance) -> Solution:
    """k=1: a maximum bipartite packet/MU matching is an optimal read."""
    if inst.k != 1:
        raise WrongParams(f"matching_k1 requires k=1, got k={inst.k}")
    mu_owner = [-1] * inst.N  # mu -> packet currently matched to it

    def try_augment(i: int, banned: bytearray) -> bool:
        for m in inst.packets[i]:
            if banned[m]:
                continue
            banned[m] = 1
            if mu_owner[m] == -1 or try_augment(mu_owner[m], banned):
                mu_owner[m] = i
                return True
        return False

    for i in range(inst.L):
        try_augment(i, bytearray(inst.N))

    assignments: list = [None] * inst.L
    for m, i in enumerate(mu_owner):
        if i != -1:
            assignments[i] = (m,)
    return Solution(assignments=tuple(assignments))


def _blossom_matching(n: int, adj: list) -> list:
    """Maximum matching on a general graph (blossom contraction, O(V^3)).

    ``adj[v]`` lists neighbours in a fixed order; returns match[v] = partner
    or -1.  Classic base/parent arrays formulation.
    """
    match = [-1] * n
    parent = [-1] * n
    base = list(range(n))
    in_queue = [False] * n
    in_blossom = [False] * n

    def lca(a: int, b: int) -> int:
        on_path = [False] * n
        x = a
        while True:
            x = base[x]
            on_path[x] = True
            if match[x] == -1:
                break
            x = parent[match[x]]
        y = b
        while True:
            y = base[y]
            if on_path[y]:
                return y
            y = parent[match[y]]

    def mark_path(v: int, b: int, child: int) -> None:
        while base[v] != b:
            in_blossom[base[v]] = True
            in_blossom[base[match[v]]] = True
            parent[v] = child
            child = match[v]
            v = parent[match[v]]

    def find_augmenting(root: int) -> bool:
        for i in range(n):
            parent[i] = -1
            base[i] = i
            in_queue[i] = False
        in_queue[root] = True
        q = deque([root])
        while q:
            v = q.popleft()
            for to in adj[v]:
                if base[v] == base[to] or match[v] == to:
                    continue
                if to == root or (match[to] != -1 and parent[match[to]] != -1):
                    cur = lca(v, to)
                    for i in range(n):
                        in_blossom[i] = False
                    mark_path(v, cur, to)
                    mark_path(to, cur, v)
                    for i in range(n):
                        if in_blossom[base[i]]:
                            base[i] = cur
                            if not in_queue[i]:
                                in_queue[i] = True
                                q.append(i)
                elif parent[to] == -1:
                    parent[to] = v
                    if match[to] == -1:
                        u = to
                        while u != -1:
                            pv = parent[u]
                            nxt = match[pv]
                            match[u] = pv
                            match[pv] = u
                            u = nxt
                        return True
                    else:
                        if not in_queue[match[to]]:
                            in_queue[match[to]] = True
                            q.append(match[to])
        return False

    for v in range(n):
        if match[v] == -1:
            find_augmenting(v)
    return match


def solve_matching_k2n2(inst: Instance) -> Solution:
    """k=n=2: MUs become graph vertices, each packet an edge between its two
    MUs; a maximum matching picks the largest set of disjoint pairs."""
    if not (inst.k == 2 and inst.n == 2):
        raise WrongParams(f"matching_k2n2 requires k=n=2, got k={inst.k}, n={inst.n}")
    pair_packets: dict = {}
    for i, p in enumerate(inst.packets):
        pair_packets.setdefault(p, []).append(i)
    neighbours: list = [[] for _ in range(inst.N)]
    for (a, b) in pair_packets:
        neighbours[a].append(b)
        neighbours[b].append(a)
    for lst in neighbours:
        lst.sort()
    match = _blossom_matching(inst.N, neighbours)

    assignments: list = [None] * inst.L
    for a in range(inst.N):
        b = match[a]
        if b > a:
            i = pair_packets[(a, b)][0]  # lowest-index packet on this pair
            assignments[i] = (a, b)
    return Solution(assignments=tuple(assignments))


# ---------------------------------------------------------------------------
# cyclic placement: anchored sweep
# ---------------------------------------------------------------------------

def cyclic_starts(inst: Instance) -> list:
    """Arc start of every packet; WrongParams if any packet is not an arc."""
    if inst.n >= inst.N:
        raise WrongParams(f"cyclic solver needs n < N, got n={inst.n}, N={inst.N}")
    starts = []
    for i, p in enumerate(inst.packets):
        if not is_cyclic_arc(p, inst.n, inst.N):
            raise WrongParams(f"packet {i} = {p} is not a cyclic arc")
        starts.append(arc_start(p, inst.N))
    return starts


def cyclic_anchor_order(inst: Instance, anchor: int) -> list:
    """Packets sorted by arc start clockwise from the anchor's start,
    ties broken by packet index."""
    starts = cyclic_starts(inst)
    s0 = starts[anchor]
    return sorted(range(inst.L), key=lambda i: ((starts[i] - s0) % inst.N, i))


def solve_cyclic(inst: Instance) -> Solution:
    """Optimal read for cyclic placements.

    For every anchor packet, sweep the packets in clockwise start order and
    serve each packet whose arc still contains k consecutive free MUs,
    taking the earliest such run (clockwise within the arc).  The best
    anchor wins; the first anchor reaching the maximum is kept.  Runs in
    O(L^2) sweeps.

    Serving consecutive runs means the n-k unread chunk positions of every
    served packet form a single cyclic burst, which is what lets cheap
    binary cyclic codes replace MDS codes on the write path.
    """
    starts = cyclic_starts(inst)
    N, n, k, L = inst.N, inst.n, inst.k, inst.L
    if L == 0:
        return empty_solution(inst)
    arcs = [tuple((s + r) % N for r in range(n)) for s in starts]

    best_count = -1
    best_assign: dict = {}
    for j in range(L):
        s0 = starts[j]
        order = sorted(range(L), key=lambda i: ((starts[i] - s0) % N, i))
        used = bytearray(N)
        assign: dict = {}
        for i in order:
            arc = arcs[i]
            run = 0
            found = -1
            for t in range(n):
                if used[arc[t]]:
                    run = 0
                else:
                    run += 1
                    if run == k:
                        found = t - k + 1
                        break
            if found >= 0:
                window = arc[found : found + k]
                for m in window:
                    used[m] = 1
                assign[i] = tuple(sorted(window))
        if len(assign) > best_count:
            best_count = len(assign)
            best_assign = assign
            if best_count == L:
                break

    assignments = tuple(best_assign.get(i) for i in range(L))
    return Solution(assignments=assignments)


# ---------------------------------------------------------------------------
# design placement: exclusive pools plus balanced splits
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OrientedBalanceGraph:
    """Orientation of an undirected multigraph with |in - out| <= 1 per vertex."""

    vertices: tuple
    directed_edges: tuple  # one (u, v) per input edge, in input order


def balanced_orientation(edges) -> OrientedBalanceGraph:
    """Orient edges so every vertex's in/out degrees differ by at most one.

    Odd-degree vertices are paired through an auxiliary vertex, making all
    degrees even; an Euler circuit of each component then orients the real
    edges along the walk.  Linear in the number of edges.
    """
    edges = [tuple(e) for e in edges]
    for (u, v) in edges:
        if u == v:
            raise BadParams("self-loops cannot be balanced")
    n_real = len(edges)
    adj: dict = {}
    degree: dict = {}
    all_edges = list(edges)

    def add(u, v, eid):
        adj.setdefault(u, []).append((eid, v))
        adj.setdefault(v, []).append((eid, u))
        degree[u] = degree.get(u, 0) + 1
        degree[v] = degree.get(v, 0) + 1

    for eid, (u, v) in enumerate(edges):
        add(u, v, eid)
    aux = ("aux",)  # cannot collide with caller vertex labels of other types
    odd = sorted(v for v in degree if degree[v] % 2 == 1 and v != aux)
    for v in odd:
        eid = len(all_edges)
        all_edges.append((aux, v))
        add(aux, v, eid)

    for v in adj:
        adj[v].sort(key=lambda t: (t[1] == aux, str(t[1]), t[0]))

    used = [False] * len(all_edges)
    ptr = {v: 0 for v in adj}
    oriented: list = [None] * n_real

    real_vertices = sorted(v for v in adj if v != aux)
    for seed in real_vertices:
        if ptr[seed] >= len(adj[seed]):
            continue
        stack = [(seed, -1)]
        popped = []
        while stack:
            v, ein = stack[-1]
            lst = adj[v]
            i = ptr[v]
            while i < len(lst) and used[lst[i][0]]:
                i += 1
            ptr[v] = i
            if i == len(lst):
                popped.append((v, ein))
                stack.pop()
            else:
                eid, w = lst[i]
                used[eid] = True
                stack.append((w, eid))
        walk = popped[::-1]
        for (x, _), (y, ey) in zip(walk, walk[1:]):
            if ey < n_real:
                oriented[ey] = (x, y)

    assert all(o is not None for o in oriented)
    return OrientedBalanceGraph(
        vertices=tuple(real_vertices), directed_edges=tuple(oriented)
    )


def solve_design(inst: Instance, design: BlockDesign, oracle_cap: int = DEFAULT_ORACLE_CAP) -> Solution:
    """Optimal read for design placements.

    Works on the packets stored in distinct blocks (first occurrence by
    packet index; duplicates stay unserved, which is optimal when k > n/2
    since a block cannot serve two packets; with duplicates and k <= n/2
    the exhaustive oracle is used instead).  Each packet receives all MUs
    exclusive to it, half of every evenly shared pair pool, and a
    floor/ceil split of every odd pool according to a balanced orientation;
    the resulting pool is truncated to the k lowest indices.

    Shared pools are split deterministically: for packets i < j, i takes a
    prefix of the sorted pool and j the complementary suffix.
    """
    block_set = design.block_set()
    for i, p in enumerate(inst.packets):
        if p not in block_set:
            raise BlockNotInDesign(f"packet {i} = {p} is not a design block")

    first: dict = {}
    sub: list = []
    duplicates = False
    for i, p in enumerate(inst.packets):
        if p in first:
            duplicates = True
        else:
            first[p] = i
            sub.append(i)

    if duplicates and 2 * inst.k <= inst.n:
        return solve_oracle(inst, cap=oracle_cap)

    Lp = len(sub)
    assignments: list = [None] * inst.L
    if Lp == 0:
        return Solution(assignments=tuple(assignments))

    if Lp >= 2:
        bound = floor(t_max(inst.n, inst.k, Lp))
        worst = 0
        sets = [set(inst.packets[i]) for i in sub]
        for a in range(Lp):
            for b in range(a + 1, Lp):
                worst = max(worst, len(sets[a] & sets[b]))
        if worst > bound:
            raise ConditionViolated(
                f"max pairwise intersection {worst} exceeds floor(t_max) = {bound} "
                f"for {Lp} distinct blocks"
            )

    owners: dict = {}
    for i in sub:
        for m in inst.packets[i]:
            owners.setdefault(m, []).append(i)

    pools: dict = {i: [] for i in sub}
    shared: dict = {}
    for m in sorted(owners):
        os = owners[m]
        if len(os) == 1:
            pools[os[0]].append(m)
        elif len(os) == 2:
            shared.setdefault((os[0], os[1]), []).append(m)
        # MUs shared by three or more packets are never needed

    pairs = sorted(shared)
    odd_pairs = [pr for pr in pairs if len(shared[pr]) % 2 == 1]
    orientation = balanced_orientation(odd_pairs)
    towards: dict = {
        pr: head for pr, (_, head) in zip(odd_pairs, orientation.directed_edges)
    }

    for (i, j) in pairs:
        mus = shared[(i, j)]  # already sorted ascending
        h = len(mus) // 2
        if len(mus) % 2 == 0:
            cut = h
        else:
            cut = h + 1 if towards[(i, j)] == i else h
        pools[i].extend(mus[:cut])
        pools[j].extend(mus[cut:])

    for i in sub:
        pool = sorted(pools[i])
        if len(pool) >= inst.k:
            assignments[i] = tuple(pool[: inst.k])
    return Solution(assignments=tuple(assignments))


# ---------------------------------------------------------------------------
# l-set packing reduction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReductionOutput:
    """Read instance equivalent to an l-set-packing question.

    The packing instance has M pairwise disjoint sets iff the read
    instance can serve at least ``threshold`` = 2M packets with k = l and
    n = l + 1.  Elements are re-indexed: original element e becomes
    ``element_index[e]``, its mirror ``element_index[e] + mirror_offset``,
    and ``theta_index`` is the one fresh element shared by every packet.
    """

    instance: Instance
    threshold: int
    element_index: dict
    mirror_offset: int
    theta_index: int


def reduce_lsp(sets, M: int) -> ReductionOutput:
    """Transform l-set packing (l >= 3) into an equivalent read instance.

    Every input set A over elements {a_j} yields two packets: A plus a
    fresh element theta, and the mirror copy {b_j : a_j in A} plus theta.
    Serving 2M packets with k = l forces M disjoint original sets.
    """
    sets = [tuple(sorted(s)) for s in sets]
    if not sets:
        raise BadParams("need at least one set")
    l = len(sets[0])
    for s in sets:
        if len(set(s)) != len(s) or len(s) != l:
            raise UnequalCardinality(f"all sets must have {l} distinct elements")
    if l < 3:
        raise BadParams(f"reduction applies to set size >= 3, got {l}")
    if M < 1:
        raise BadParams(f"need M >= 1, got {M}")

    elements = sorted({e for s in sets for e in s})
    index = {e: i for i, e in enumerate(elements)}
    s_count = len(elements)
    theta = 2 * s_count

    packets = []
    for s in sets:
        packets.append(tuple(sorted([index[e] for e in s] + [theta])))
    for s in sets:
        packets.append(tuple(sorted([index[e] + s_count for e in s] + [theta])))

    inst = Instance(
        N=2 * s_count + 1, k=l, n=l + 1, packets=tuple(packets), placement="custom"
    )
    return ReductionOutput(
        instance=inst,
        threshold=2 * M,
        element_index=index,
        mirror_offset=s_count,
        theta_index=theta,
    )
