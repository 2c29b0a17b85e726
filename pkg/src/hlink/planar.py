"""Plane multigraphs with two trivalent and up to six quadrivalent vertices.

A graph is stored as a rotation system (combinatorial map): darts are integers
0..2E-1, `alpha` pairs the two darts of each edge, and each vertex carries its
incident darts in counterclockwise order.  Faces are the orbits of
sigma(alpha(.)), and an embedding is spherical iff V - E + F = 2.

The enumerator fixes the rotation blocks (vertex 0 owns darts 0..2, vertex 1
owns 3..5, quadrivalent vertex i owns 6+4i..9+4i) and searches over perfect
matchings of the darts, pruning loops, arc multiplicities, and non-spherical
partial face structures.
"""

from __future__ import annotations

import json
import re
from functools import lru_cache


class PlaneGraph:
    """An embedded multigraph given by vertex rotations plus a dart pairing."""

    __slots__ = ("vertices", "alpha", "sigma", "vertex_of")

    def __init__(self, vertices, alpha):
        self.vertices = tuple(tuple(rot) for rot in vertices)
        self.alpha = tuple(alpha)
        n_darts = len(self.alpha)
        sigma = [-1] * n_darts
        vertex_of = [-1] * n_darts
        seen = set()
        for v, rot in enumerate(self.vertices):
            if len(rot) not in (2, 3, 4):
                raise ValueError("vertex degree must be 2, 3 or 4")
            for i, d in enumerate(rot):
                if d in seen:
                    raise ValueError("dart %d used twice" % d)
                seen.add(d)
                sigma[d] = rot[(i + 1) % len(rot)]
                vertex_of[d] = v
        if len(seen) != n_darts or -1 in sigma:
            raise ValueError("rotations must cover darts 0..%d" % (n_darts - 1))
        for d in range(n_darts):
            a = self.alpha[d]
            if a == d or self.alpha[a] != d:
                raise ValueError("alpha must be a fixed-point-free involution")
        self.sigma = tuple(sigma)
        self.vertex_of = tuple(vertex_of)

    # -- basic counts -------------------------------------------------

    @property
    def n_darts(self):
        return len(self.alpha)

    @property
    def n_edges(self):
        return len(self.alpha) // 2

    @property
    def n_vertices(self):
        return len(self.vertices)

    def kind(self, v):
        return {2: "marker", 3: "trivalent", 4: "quadrivalent"}[len(self.vertices[v])]

    @property
    def n_trivalent(self):
        return sum(1 for rot in self.vertices if len(rot) == 3)

    @property
    def n_quadrivalent(self):
        return sum(1 for rot in self.vertices if len(rot) == 4)

    def edges(self):
        """Edges as (dart, partner) with dart < partner."""
        return [(d, self.alpha[d]) for d in range(self.n_darts) if d < self.alpha[d]]

    # -- topology -----------------------------------------------------

    def faces(self):
        """Orbits of sigma(alpha(.)), each a tuple of darts."""
        out = []
        seen = [False] * self.n_darts
        for d0 in range(self.n_darts):
            if seen[d0]:
                continue
            face = []
            d = d0
            while not seen[d]:
                seen[d] = True
                face.append(d)
                d = self.sigma[self.alpha[d]]
            out.append(tuple(face))
        return out

    def genus(self):
        if not self.is_connected():
            raise ValueError("genus of a disconnected map is undefined here")
        return (2 - self.n_vertices + self.n_edges - len(self.faces())) // 2

    def is_connected(self):
        if self.n_darts == 0:
            return True
        stack = [0]
        seen = {0}
        while stack:
            d = stack.pop()
            for nxt in (self.alpha[d], self.sigma[d]):
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return len(seen) == self.n_darts

    def reflected(self):
        """The mirror image: every rotation reversed."""
        return PlaneGraph([rot[::-1] for rot in self.vertices], self.alpha)

    # -- serialization ------------------------------------------------

    def to_text(self):
        parts = []
        for v, rot in enumerate(self.vertices):
            tag = {2: "m", 3: "t", 4: "q"}[len(rot)]
            parts.append("v%d(%s): %s" % (v, tag, " ".join(str(d) for d in rot)))
        pairs = "".join("(%d,%d)" % e for e in self.edges())
        return "T=%d Q=%d | %s | pairs: %s" % (
            self.n_trivalent, self.n_quadrivalent, " ; ".join(parts), pairs)

    @classmethod
    def from_text(cls, line):
        head, verts, pairs = [s.strip() for s in line.split("|")]
        if not re.match(r"T=\d+ Q=\d+$", head):
            raise ValueError("bad graph header %r" % head)
        rotations = []
        for chunk in verts.split(";"):
            chunk = chunk.strip()
            m = re.match(r"v(\d+)\(([mtq])\):\s*(.*)$", chunk)
            if not m or int(m.group(1)) != len(rotations):
                raise ValueError("bad vertex record %r" % chunk)
            rotations.append([int(x) for x in m.group(3).split()])
        if not pairs.startswith("pairs:"):
            raise ValueError("missing pairs section")
        alpha = [-1] * sum(len(r) for r in rotations)
        for a, b in re.findall(r"\((\d+),(\d+)\)", pairs):
            a, b = int(a), int(b)
            alpha[a] = b
            alpha[b] = a
        return cls(rotations, alpha)

    def to_json_obj(self):
        return {
            "T": self.n_trivalent,
            "Q": self.n_quadrivalent,
            "vertices": [{"kind": self.kind(v), "rotation": list(rot)}
                         for v, rot in enumerate(self.vertices)],
            "pairs": [list(e) for e in self.edges()],
        }

    @classmethod
    def from_json_obj(cls, obj):
        rotations = [rec["rotation"] for rec in obj["vertices"]]
        alpha = [-1] * sum(len(r) for r in rotations)
        for a, b in obj["pairs"]:
            alpha[a] = b
            alpha[b] = a
        return cls(rotations, alpha)

    def to_json(self):
        return json.dumps(self.to_json_obj(), separators=(",", ":"))

    def __repr__(self):
        return "PlaneGraph(V=%d, E=%d)" % (self.n_vertices, self.n_edges)


# ---------------------------------------------------------------------------
# canonical codes
# ---------------------------------------------------------------------------

def _invert(perm):
    inv = [0] * len(perm)
    for i, p in enumerate(perm):
        inv[p] = i
    return tuple(inv)


def _trace(sigma, alpha, start):
    """Relabel darts in breadth-first discovery order from `start`.

    Neighbors are pushed partner-first, then rotation-successor, so the label
    sequence depends only on the isomorphism type rooted at `start`.
    """
    n = len(sigma)
    new = [-1] * n
    new[start] = 0
    order = [start]
    i = 0
    while i < len(order):
        d = order[i]
        for nxt in (alpha[d], sigma[d]):
            if new[nxt] < 0:
                new[nxt] = len(order)
                order.append(nxt)
        i += 1
    code = []
    for d in order:
        code.append(new[alpha[d]])
        code.append(new[sigma[d]])
    return tuple(code)


def canonical_code(graph, mirror=True):
    """A relabeling-invariant code; with mirror=True also reflection-invariant.

    The code is the lexicographic minimum of the traced label sequence over
    all start darts (restricted to trivalent vertices when any exist) and,
    when mirror is set, over both orientations.
    """
    if not graph.is_connected():
        raise ValueError("canonical codes are defined for connected graphs")
    sigma, alpha = graph.sigma, graph.alpha
    starts = [d for d in range(graph.n_darts)
              if len(graph.vertices[graph.vertex_of[d]]) == 3]
    if not starts:
        starts = list(range(graph.n_darts))
    variants = [sigma]
    if mirror:
        variants.append(_invert(sigma))
    best = None
    for sig in variants:
        for s in starts:
            code = _trace(sig, alpha, s)
            if best is None or code < best:
                best = code
    return best


# ---------------------------------------------------------------------------
# filters
# ---------------------------------------------------------------------------

def edge_connectivity(graph):
    """Minimum edge-cut size of the underlying abstract multigraph.

    Brute force over vertex bipartitions; fine for the census sizes (V <= 8).
    Returns 0 for a disconnected graph.
    """
    nv = graph.n_vertices
    if nv == 1:
        return graph.n_darts  # no cut can disconnect a single vertex
    ends = [(graph.vertex_of[a], graph.vertex_of[b]) for a, b in graph.edges()]
    best = None
    for mask in range(1, 1 << (nv - 1)):  # vertex nv-1 stays outside
        cut = 0
        for u, v in ends:
            if ((mask >> u) & 1) != ((mask >> v) & 1):
                cut += 1
        if best is None or cut < best:
            best = cut
    return best


def has_small_cut(graph):
    """Whether edge-connectivity is <= 1 (disconnected, or some bridge).

    One iterative lowlink pass over the vertex-level multigraph; loops are
    ignored and parallel edges are told apart by edge id, so only a true
    bridge triggers.  Much cheaper than edge_connectivity on hot paths.
    """
    nv = graph.n_vertices
    if nv <= 1:
        return False
    adj = [[] for _ in range(nv)]
    for eid, (a, b) in enumerate(graph.edges()):
        u, v = graph.vertex_of[a], graph.vertex_of[b]
        if u != v:
            adj[u].append((v, eid))
            adj[v].append((u, eid))
    disc = [-1] * nv
    low = [0] * nv
    scan = [0] * nv
    entered_by = [-1] * nv
    disc[0] = low[0] = 0
    clock = 1
    stack = [0]
    while stack:
        u = stack[-1]
        if scan[u] < len(adj[u]):
            v, e = adj[u][scan[u]]
            scan[u] += 1
            if disc[v] < 0:
                disc[v] = low[v] = clock
                clock += 1
                entered_by[v] = e
                stack.append(v)
            elif e != entered_by[u] and disc[v] < low[u]:
                low[u] = disc[v]
        else:
            stack.pop()
            if stack:
                p = stack[-1]
                if low[u] < low[p]:
                    low[p] = low[u]
                if low[u] > disc[p]:
                    return True
    return clock < nv


def has_loop(graph):
    return any(graph.vertex_of[a] == graph.vertex_of[b] for a, b in graph.edges())


def double_arcs(graph):
    """Pairs of parallel edges, grouped by endpoint pair."""
    by_ends = {}
    for a, b in graph.edges():
        key = tuple(sorted((graph.vertex_of[a], graph.vertex_of[b])))
        by_ends.setdefault(key, []).append((a, b))
    out = []
    for key, group in sorted(by_ends.items()):
        if len(group) >= 2:
            for i in range(len(group)):
                for j in range(i + 1, len(group)):
                    out.append((key, group[i], group[j]))
    return out


def classify_double_arcs(graph):
    """Verdict per parallel-edge pair: 'bigon-quadri' or 'forbidden'.

    A pair is admissible only when both endpoints are quadrivalent and the two
    arcs bound a bigon face of the embedding.
    """
    bigons = set()
    for face in graph.faces():
        if len(face) == 2:
            bigons.add(frozenset(face))
    verdicts = []
    for (u, v), e1, e2 in double_arcs(graph):
        if len(graph.vertices[u]) != 4 or len(graph.vertices[v]) != 4:
            verdicts.append(((u, v), e1, e2, "forbidden"))
            continue
        ok = False
        for x in e1:
            for y in e2:
                if frozenset((x, y)) in bigons:
                    ok = True
        verdicts.append(((u, v), e1, e2, "bigon-quadri" if ok else "forbidden"))
    return verdicts


def trivial_theta():
    """Two trivalent vertices joined by three arcs, embedded in the sphere."""
    return PlaneGraph([(0, 1, 2), (3, 4, 5)], [3, 5, 4, 0, 2, 1])


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

def _matchings(q):
    """All admissible dart pairings on the fixed rotation blocks for Q=q.

    Yields alpha tuples.  Prunes loops, over-multiplicity (no triple arcs, no
    double arcs touching a trivalent vertex), non-spherical partial faces, and
    relabelings of interchangeable vertices (a fresh block may only be entered
    at its first dart, fresh quadrivalent blocks in index order).
    """
    nv = q + 2
    rotations = [(0, 1, 2), (3, 4, 5)]
    rotations += [tuple(range(6 + 4 * i, 10 + 4 * i)) for i in range(q)]
    n_darts = 6 + 4 * q
    n_edges = n_darts // 2
    f_target = q + 3  # V - E + F = 2 with V = q+2, E = 2q+3
    sigma = [0] * n_darts
    vertex_of = [0] * n_darts
    for v, rot in enumerate(rotations):
        for i, d in enumerate(rot):
            sigma[d] = rot[(i + 1) % len(rot)]
            vertex_of[d] = v
    first_dart = [rot[0] for rot in rotations]
    quad = [len(rot) == 4 for rot in rotations]

    alpha = [-1] * n_darts
    mult = [[0] * nv for _ in range(nv)]
    touched = [0] * nv  # matched darts per vertex block
    # partial faces: arcs of d -> sigma[alpha[d]] form disjoint paths/cycles;
    # pstart[e] = start of the path ending at e, pend[s] = end of the path
    # starting at s.  Every dart begins as its own trivial path.
    pstart = list(range(n_darts))
    pend = list(range(n_darts))
    results = []

    # state threaded through the recursion: closed = faces completed so far
    # (monotone; the sphere needs exactly f_target), n_active = activated
    # vertex blocks (every fresh block still needs an edge, so prune when
    # fewer edges remain than fresh blocks).
    def rec(cursor, left, closed, n_active):
        if left == 0:
            if closed != f_target:
                return
            seen = 1  # bitmask of blocks reachable from block 0
            stack = [0]
            while stack:
                u = stack.pop()
                row = mult[u]
                for w in range(nv):
                    if row[w] and not (seen >> w) & 1:
                        seen |= 1 << w
                        stack.append(w)
            if seen == (1 << nv) - 1:
                results.append(tuple(alpha))
            return
        d = cursor
        while alpha[d] >= 0:
            d += 1
        vd = vertex_of[d]
        if touched[vd] == 0 and vd >= 2:
            # all darts below d are matched, so blocks 0..vd-1 are fully
            # matched among themselves: a closed component, dead branch
            return
        fresh_d = touched[vd] == 0 and vd == 1
        row_d = mult[vd]
        for e in range(d + 1, n_darts):
            if alpha[e] >= 0:
                continue
            ve = vertex_of[e]
            if ve == vd:
                continue
            m = row_d[ve]
            if m and (m > 1 or not (quad[vd] and quad[ve])):
                continue
            fresh_e = touched[ve] == 0
            if fresh_e:
                if e != first_dart[ve]:
                    continue
                # interchangeable fresh blocks: quadrivalent ones must be
                # activated in index order; the least fresh one has index
                # 2 + (active quadrivalent blocks)
                if quad[ve] and ve != n_active + (touched[1] == 0):
                    continue
            na = n_active + fresh_e + fresh_d
            if left - 1 < nv - na:  # not enough edges left to reach all blocks
                continue
            alpha[d] = e
            alpha[e] = d
            row_d[ve] = m + 1
            mult[ve][vd] = m + 1
            touched[vd] += 1
            touched[ve] += 1
            # phi-arcs d -> sigma[e] and e -> sigma[d]
            u1, v1 = d, sigma[e]
            s1 = pstart[u1]
            if s1 == v1:
                c1 = closed + 1
            else:
                c1 = closed
                e1 = pend[v1]
                pend[s1] = e1
                pstart[e1] = s1
            u2, v2 = e, sigma[d]
            s2 = pstart[u2]
            if s2 == v2:
                c2 = c1 + 1
            else:
                c2 = c1
                e2 = pend[v2]
                pend[s2] = e2
                pstart[e2] = s2
            # open paths = unmatched-dart arcs still to place = 2*(left-1),
            # and each remaining arc closes at most one face
            if c2 <= f_target <= c2 + 2 * (left - 1):
                rec(d + 1, left - 1, c2, na)
            if s2 != v2:
                pend[s2] = u2
                pstart[e2] = v2
            if s1 != v1:
                pend[s1] = u1
                pstart[e1] = v1
            alpha[d] = -1
            alpha[e] = -1
            row_d[ve] = m
            mult[ve][vd] = m
            touched[vd] -= 1
            touched[ve] -= 1

    # block 0 is active from the start (dart 0 is matched first)
    rec(0, n_edges, 0, 1)
    return rotations, results


@lru_cache(maxsize=None)
def _enumerate_cached(q, mirror_dedup):
    if q == 0:
        # The base case: three arcs joining the two trivalent vertices.  The
        # multiplicity filters reject triple arcs everywhere else, but this
        # embedding is spherical and 3-edge-connected and is admitted.
        return (trivial_theta(),)
    rotations, alphas = _matchings(q)
    by_code = {}
    for alpha in alphas:
        g = PlaneGraph(rotations, alpha)
        if edge_connectivity(g) < 3:
            continue
        if any(v[-1] == "forbidden" for v in classify_double_arcs(g)):
            continue
        code = canonical_code(g, mirror=mirror_dedup)
        prev = by_code.get(code)
        if prev is None or alpha < prev.alpha:
            by_code[code] = g
    return tuple(by_code[c] for c in sorted(by_code))


def enumerate_plane_graphs(q, mirror_dedup=True):
    """All admissible plane graphs with two trivalent and q quadrivalent vertices.

    Admissible: connected, spherical, abstract edge-connectivity 3, no loops,
    double arcs only between quadrivalent vertices and bounding bigon faces.
    Deduplicated by canonical code (up to reflection unless mirror_dedup is
    False) and returned sorted by code.
    """
    if not 0 <= q <= 6:
        raise ValueError("q must be between 0 and 6")
    return list(_enumerate_cached(q, bool(mirror_dedup)))
