"""One-shot exhaustive cross-check of the Q=3 plane-graph enumeration.

Brute force over every dart pairing times every rotation combination, with the
sphere condition evaluated by a vectorized cycle count (pointer doubling on
the face permutation).  No search pruning is shared with the fast enumerator.

Run directly (takes tens of minutes):  python3 tests/slow_oracle_q3.py
"""

import sys
import time

import numpy as np

from hlink.planar import (PlaneGraph, canonical_code, classify_double_arcs,
                          edge_connectivity, enumerate_plane_graphs)

BLOCKS = [(0, 1, 2), (3, 4, 5), (6, 7, 8, 9), (10, 11, 12, 13), (14, 15, 16, 17)]
N_DARTS = 18
F_TARGET = 6  # V - E + F = 2 with V = 5, E = 9


def all_pairings():
    block_of = {}
    for b, blk in enumerate(BLOCKS):
        for d in blk:
            block_of[d] = b
    quad = [len(b) == 4 for b in BLOCKS]
    pairing = [-1] * N_DARTS
    out = []

    def fill(d):
        while d < N_DARTS and pairing[d] >= 0:
            d += 1
        if d == N_DARTS:
            out.append(pairing.copy())
            return
        bd = block_of[d]
        for e in range(d + 1, N_DARTS):
            if pairing[e] >= 0 or block_of[e] == bd:
                continue
            be = block_of[e]
            n_par = sum(1 for x in BLOCKS[bd]
                        if pairing[x] >= 0 and block_of[pairing[x]] == be)
            if n_par >= 2 or (n_par == 1 and not (quad[bd] and quad[be])):
                continue
            pairing[d] = e
            pairing[e] = d
            fill(d + 1)
            pairing[d] = -1
            pairing[e] = -1

    fill(0)
    return np.array(out, dtype=np.int8)


def rotation_sigmas():
    """Every combination of cyclic orders (vertex 0 pinned by relabeling)."""
    from itertools import permutations, product
    per_block = []
    for i, blk in enumerate(BLOCKS):
        if i == 0:
            per_block.append([blk])
        else:
            per_block.append([(blk[0],) + t for t in permutations(blk[1:])])
    sigmas = []
    for rots in product(*per_block):
        sig = [0] * N_DARTS
        for rot in rots:
            for i, d in enumerate(rot):
                sig[d] = rot[(i + 1) % len(rot)]
        sigmas.append((rots, np.array(sig, dtype=np.int8)))
    return sigmas


def count_faces_rows(phi):
    """Per-row cycle count of (N, 18) permutations via pointer doubling."""
    n, w = phi.shape
    lab = np.broadcast_to(np.arange(w, dtype=np.int8), (n, w)).copy()
    f = phi.copy()
    for _ in range(5):  # 2^5 >= 18
        lab = np.minimum(lab, np.take_along_axis(lab, f.astype(np.int64), 1))
        f = np.take_along_axis(f, f.astype(np.int64), 1)
    return (lab == np.arange(w, dtype=np.int8)).sum(axis=1)


def main():
    t0 = time.time()
    pairings = all_pairings()
    print("pairings: %d (%.0fs)" % (len(pairings), time.time() - t0), flush=True)
    codes = set()
    kept = 0
    for k, (rots, sig) in enumerate(rotation_sigmas()):
        phi = sig[pairings]  # phi[r, d] = sigma[alpha[d]]
        faces = count_faces_rows(phi)
        for row in np.nonzero(faces == F_TARGET)[0]:
            g = PlaneGraph(rots, [int(x) for x in pairings[row]])
            if not g.is_connected() or edge_connectivity(g) < 3:
                continue
            if any(v[-1] == "forbidden" for v in classify_double_arcs(g)):
                continue
            kept += 1
            codes.add(canonical_code(g))
        if k % 40 == 0:
            print("rotation combo %d/432, codes so far %d (%.0fs)" %
                  (k, len(codes), time.time() - t0), flush=True)
    fast = set(canonical_code(g) for g in enumerate_plane_graphs(3))
    print("oracle codes: %d  fast codes: %d  spherical graphs seen: %d" %
          (len(codes), len(fast), kept))
    print("MATCH" if codes == fast else "MISMATCH")
    return 0 if codes == fast else 1


if __name__ == "__main__":
    sys.exit(main())
