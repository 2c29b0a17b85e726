"""Slow, independently written generators used to validate the fast paths.

The brute-force plane-graph generator below shares no search machinery with
hlink.planar._matchings: it tries every cyclic order at every vertex (vertex 0
is pinned, which only fixes a relabeling of its three darts) and every dart
pairing, with no canonical-augmentation or face-based pruning, then filters
finished graphs by the admissibility rules and checks the sphere condition by
counting faces outright.
"""

from itertools import permutations, product

from hlink.planar import (PlaneGraph, canonical_code, classify_double_arcs,
                          edge_connectivity)


def _cyclic_orders(block):
    """All distinct cyclic orders of a dart block, anchored at its first dart."""
    first = block[0]
    rest = list(block[1:])
    return [(first,) + tail for tail in permutations(rest)]


def brute_force_plane_graph_codes(q):
    """Canonical codes of all admissible plane graphs with Q=q, by brute force."""
    blocks = [(0, 1, 2), (3, 4, 5)]
    blocks += [tuple(range(6 + 4 * i, 10 + 4 * i)) for i in range(q)]
    n_darts = 6 + 4 * q
    block_of = {}
    for b, blk in enumerate(blocks):
        for d in blk:
            block_of[d] = b
    quad = [len(blk) == 4 for blk in blocks]

    # vertex 0 pinned to the standard order: any graph can be relabeled so
    # that vertex 0 reads (0, 1, 2) counterclockwise
    rotation_choices = [[(0, 1, 2)]] + [_cyclic_orders(blk) for blk in blocks[1:]]

    codes = set()
    pairing = [-1] * n_darts

    if q == 0:
        # triple arc between the two trivalent vertices: allowed only here
        for second in _cyclic_orders((3, 4, 5)):
            for m in permutations((3, 4, 5)):
                triple = [m[0], m[1], m[2], -1, -1, -1]
                for a, b in enumerate(m):
                    triple[b] = a
                g = PlaneGraph([(0, 1, 2), second], triple)
                if g.is_connected() and g.n_vertices - g.n_edges + len(g.faces()) == 2:
                    codes.add(canonical_code(g))
        return codes

    def finish():
        probe = PlaneGraph([blk for blk in blocks], pairing)
        # rotation-independent filters first
        if not probe.is_connected() or edge_connectivity(probe) < 3:
            return
        for rots in product(*rotation_choices):
            g = PlaneGraph(rots, pairing)
            if g.n_vertices - g.n_edges + len(g.faces()) != 2:
                continue  # not a sphere embedding
            if any(v[-1] == "forbidden" for v in classify_double_arcs(g)):
                continue
            codes.add(canonical_code(g))

    def fill(d):
        while d < n_darts and pairing[d] >= 0:
            d += 1
        if d == n_darts:
            finish()
            return
        bd = block_of[d]
        for e in range(d + 1, n_darts):
            if pairing[e] >= 0 or block_of[e] == bd:
                continue
            # arc multiplicity: never three, never two off a trivalent vertex
            n_par = sum(1 for x in blocks[bd]
                        if pairing[x] >= 0 and block_of[pairing[x]] == block_of[e])
            if n_par >= 2 or (n_par == 1 and not (quad[bd] and quad[block_of[e]])):
                continue
            pairing[d] = e
            pairing[e] = d
            fill(d + 1)
            pairing[d] = -1
            pairing[e] = -1

    fill(0)
    return codes
