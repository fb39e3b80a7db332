"""The three placement policies and the full-throughput conditions.

Placement decides which n MUs hold a packet's chunks.  Uniform placement
allows any n-subset, cyclic placement only arcs of consecutive MUs, and
design placement only blocks of a packing with bounded pairwise overlap.
The coverage condition is necessary for serving all L packets, the
pairwise condition sufficient, and the extended Hall condition exact.
"""

from math import floor

from codedswitch import (
    PlacementRng,
    build_projective_plane,
    coverage_holds,
    draw_cyclic,
    draw_design,
    draw_uniform,
    hall_full_throughput,
    pairwise_holds,
    solve_oracle,
    t_max,
    with_k,
)

rng = PlacementRng(seed=2).generator()
N, n, k, L = 12, 4, 3, 3

plane = build_projective_plane(3)  # 13 points, 13 blocks of size 4
draws = {
    "uniform": with_k(draw_uniform(N, n, L, rng), k),
    "cyclic": with_k(draw_cyclic(N, n, L, rng), k),
    "design": with_k(draw_design(plane, L, rng), k),
}

bound = t_max(n, k, L)
print(f"N={N}, n={n}, k={k}, L={L}: pairwise bound t_max = {bound} "
      f"(integer threshold {floor(bound)})\n")

for name, inst in draws.items():
    print(f"{name} placement (N={inst.N}):")
    for p in inst.packets:
        print(f"  {p}")
    cov = coverage_holds(inst)
    pw = pairwise_holds(inst)
    hall = hall_full_throughput(inst)
    best = solve_oracle(inst, cap=36).l_star
    print(f"  coverage {cov} | pairwise {pw} | hall {hall} | optimal l* = {best}")
    assert hall == (best == inst.L)  # the Hall check is exact
    print()

print("pairwise implies hall implies coverage; only hall is exact.")
