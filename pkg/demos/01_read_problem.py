"""The maximal-throughput read problem in miniature.

Five memory units, three packets, each stored as three coded chunks.
How many packets can one read cycle serve when every MU delivers at
most one chunk?  The answer depends on k, the number of chunks needed
to rebuild a packet.
"""

from codedswitch import (
    Instance,
    bipartite_view,
    solve_oracle,
    throughput,
    validate_instance,
    validate_solution,
    with_k,
)

inst = Instance(N=5, k=3, n=3, packets=((0, 1, 2), (1, 3, 4), (2, 3, 4)))
validate_instance(inst)

view = bipartite_view(inst)
print(f"{inst.L} packets over {inst.N} MUs, {len(view.edges)} incidences")
for i, p in enumerate(inst.packets):
    print(f"  packet {i}: MUs {p}")

print()
print("k = chunks needed per packet; every MU serves at most one chunk:")
for k in (3, 2, 1):
    sub = with_k(inst, k)
    sol = solve_oracle(sub)
    validate_solution(sub, sol)
    print(f"  k={k}: best l* = {sol.l_star}, throughput rho = {throughput(sub, sol):.2f}")
    for i, a in enumerate(sol.assignments):
        mark = f"reads from {a}" if a else "unserved"
        print(f"    packet {i}: {mark}")

print()
print("Uncoded (k=n) every pair of packets collides; with one chunk of")
print("redundancy two packets fit, and at k=1 all three are served.")
