"""Erasure codecs wired to read solutions, end to end.

An MDS code rebuilds a packet from any k of its n chunks.  A binary
cyclic code only guarantees recovery from one cyclic burst of up to n-k
erasures, but that is exactly the erasure shape the cyclic read algorithm
leaves behind, so the cheap code suffices.
"""

from codedswitch import PlacementRng, draw_cyclic, solve_cyclic, with_k
from codedswitch.codec import (
    BINARY_CYCLIC,
    MDS,
    CodecConfig,
    cyclic_codebook,
    end_to_end_read,
    mds_decode,
    mds_encode,
    store_packets,
)

# --- MDS: any k of n ---------------------------------------------------------
cfg = CodecConfig(k=3, n=5, B=8, family=MDS)
data = [bytes([d] * 8) for d in (17, 34, 51)]
enc = mds_encode(data, cfg)
rebuilt = mds_decode(enc.mask([1, 3, 4]), cfg)  # two chunks lost
print("MDS [5,3]: decode from chunks {1,3,4} ->", rebuilt == data)

# --- binary cyclic: one burst of n-k -----------------------------------------
cyc = CodecConfig(k=2, n=4, B=1, family=BINARY_CYCLIC)
print(f"\nbinary cyclic [4,2], generator {cyc.generator:#b}")
print("codebook:", sorted(cyclic_codebook(cyc)))
print("any 2 consecutive (cyclically) positions may be erased; the")
print("remaining 2 always determine the codeword.")

# --- end to end over a solved cyclic instance ---------------------------------
rng = PlacementRng(5).generator()
inst = with_k(draw_cyclic(12, 4, 5, rng), 2)
sol = solve_cyclic(inst)
codec = CodecConfig(k=2, n=4, B=16, family=BINARY_CYCLIC)
payloads = [
    [bytes(rng.integers(0, 256, size=16, dtype=int).tolist()) for _ in range(2)]
    for _ in range(inst.L)
]
stored = store_packets(inst, payloads, codec)
out = end_to_end_read(inst, sol, stored, codec)

print(f"\nsolved cyclic instance, l* = {sol.l_star} of {inst.L} packets:")
for i, r in enumerate(out):
    if r is None:
        print(f"  packet {i}: unserved this cycle")
    else:
        print(f"  packet {i}: decoded from MUs {sol.assignments[i]} ->",
              "payload ok" if r == payloads[i] else "MISMATCH")
