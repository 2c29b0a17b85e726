"""Diagrams of trivalent spines: plane-graph skeletons with crossing data.

A diagram is a spherical plane graph whose quadrivalent vertices carry an
over/under resolution: one of the two opposite dart pairs is the overstrand.
This module traces spatial components, orients arcs, serializes diagrams in
an X/V code, applies the local rewrite moves R1-R5 and IH, and runs bounded
breadth-first reduction searches with canonical-code deduplication.
"""

import re
from typing import NamedTuple, Optional

from .planar import PlaneGraph, edge_connectivity, has_small_cut


class MoveError(ValueError):
    """A move site does not match the local pattern required by its kind."""


class Diagram:
    """A plane-graph skeleton plus an over/under choice per crossing.

    ``over`` holds one bool per quadrivalent vertex (in vertex order):
    True means the dart pair {rotation[0], rotation[2]} is the overstrand,
    False means {rotation[1], rotation[3]} is.
    """

    __slots__ = ("skeleton", "over", "quads")

    def __init__(self, skeleton: PlaneGraph, over=()):
        self.skeleton = skeleton
        self.quads = tuple(
            i for i, rot in enumerate(skeleton.vertices) if len(rot) == 4
        )
        self.over = tuple(bool(b) for b in over)
        if len(self.over) != len(self.quads):
            raise ValueError(
                "need %d over bits, got %d" % (len(self.quads), len(self.over))
            )

    @property
    def crossings(self):
        return len(self.quads)

    def over_pair(self, vertex):
        """The two darts of the overstrand at a quadrivalent vertex."""
        rot = self.skeleton.vertices[vertex]
        if len(rot) != 4:
            raise ValueError("vertex %d is not a crossing" % vertex)
        bit = self.over[self.quads.index(vertex)]
        return (rot[0], rot[2]) if bit else (rot[1], rot[3])

    def is_over(self, dart):
        """Whether this dart lies on the overstrand at its (crossing) vertex."""
        v = self.skeleton.vertex_of[dart]
        return dart in self.over_pair(v)

    def mirror(self):
        """Reflect the skeleton and flip every crossing."""
        # Reflection reverses each rotation, (r0,r1,r2,r3) -> (r3,r2,r1,r0),
        # which moves the dart pair {r0,r2} to positions {1,3}; flipping the
        # stored bit keeps the same dart set as the overstrand, which is
        # exactly the mirror diagram.
        return Diagram(self.skeleton.reflected(), tuple(not b for b in self.over))

    def __eq__(self, other):
        return (
            isinstance(other, Diagram)
            and self.skeleton.vertices == other.skeleton.vertices
            and self.skeleton.alpha == other.skeleton.alpha
            and self.over == other.over
        )

    def __hash__(self):
        return hash((self.skeleton.vertices, self.skeleton.alpha, self.over))

    def __repr__(self):
        return "Diagram(c=%d, n=%d)" % (self.crossings, component_count(self))


def assign_crossings(g: PlaneGraph):
    """All over/under resolutions of a skeleton, one per mirror pair.

    Flipping every crossing of a diagram yields its mirror image (viewed from
    the back of the sphere), so of the 2^c raw resolutions only 2^(c-1) are
    distinct up to that global flip; we keep the representative whose first
    crossing bit is False.  A crossing-free skeleton gives one diagram.
    """
    c = sum(1 for rot in g.vertices if len(rot) == 4)
    if c == 0:
        return [Diagram(g, ())]
    out = []
    for mask in range(2 ** (c - 1)):
        bits = tuple((mask >> i) & 1 == 1 for i in range(c - 1))
        out.append(Diagram(g, (False,) + bits))
    return out


def dart_components(d: Diagram):
    """Spatial-graph component label of every dart.

    Strands continue straight through crossings; trivalent vertices join all
    three incident strands.  Returns (labels, n) where labels[dart] is a
    component id in 0..n-1, numbered by smallest dart.
    """
    sk = d.skeleton
    n = len(sk.alpha)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for dd, aa in enumerate(sk.alpha):
        union(dd, aa)
    for rot in sk.vertices:
        if len(rot) == 4:
            union(rot[0], rot[2])
            union(rot[1], rot[3])
        else:
            for x in rot[1:]:
                union(rot[0], x)
    ids = {}
    labels = [0] * n
    for x in range(n):
        labels[x] = ids.setdefault(find(x), len(ids))
    return labels, len(ids)


def component_count(d: Diagram):
    """Number of spatial-graph components (independent of crossing choices)."""
    return dart_components(d)[1]


def diagram_connectivity(d: Diagram):
    """Edge-connectivity of the underlying plane graph (crossings count as
    4-valent vertices); 0 means split, 1 reducible."""
    return edge_connectivity(d.skeleton)


def crossing_free(g: PlaneGraph):
    """The unique diagram over a skeleton with no quadrivalent vertices."""
    return Diagram(g, ())


def disjoint_union(a: Diagram, b: Diagram):
    """The split diagram holding a and b side by side (b's darts shifted)."""
    off = len(a.skeleton.alpha)
    vertices = list(a.skeleton.vertices)
    vertices += [tuple(d + off for d in rot) for rot in b.skeleton.vertices]
    alpha = list(a.skeleton.alpha) + [d + off for d in b.skeleton.alpha]
    return Diagram(PlaneGraph(vertices, alpha), a.over + b.over)


def delete_component(d: Diagram, comp):
    """The diagram left after removing one circle component entirely.

    Crossings between the removed circle and the rest become plain strand
    passages; a surviving circle that thereby loses all of its vertices is
    kept as a bare marker circle.  The result may be split or carry removable
    kinks -- callers compare it by invariants, not by diagram identity.
    """
    labels, n = dart_components(d)
    if not (0 <= comp < n):
        raise ValueError("no component %r" % (comp,))
    for rot in d.skeleton.vertices:
        if len(rot) == 3 and labels[rot[0]] == comp:
            raise ValueError("component %d is not a circle" % comp)
    return restrict_to_components(d, set(range(n)) - {comp})


def restrict_to_components(d: Diagram, comps):
    """The sub-diagram spanned by a set of components.

    All other components are removed: their crossings with kept strands
    become plain passages, and their vertices (trivalent ones included)
    vanish with them.  A kept circle that loses every vertex comes back as a
    bare marker circle.
    """
    sk = d.skeleton
    alpha = sk.alpha
    labels, n = dart_components(d)
    comps = set(comps)
    if not comps or not comps <= set(range(n)):
        raise ValueError("no components %r" % (sorted(comps),))

    keep = []
    for rot in sk.vertices:
        if len(rot) == 4:
            keep.append(labels[rot[0]] in comps and labels[rot[1]] in comps)
        else:
            keep.append(labels[rot[0]] in comps)

    def resolve(dart):
        # alpha, continued straight through any dropped crossing; dropped
        # trivalent vertices are never reached from a kept dart
        nxt = alpha[dart]
        while not keep[sk.vertex_of[nxt]]:
            rot = sk.vertices[sk.vertex_of[nxt]]
            nxt = alpha[rot[(rot.index(nxt) + 2) % 4]]
        return nxt

    renum = {}
    vertices = []
    over = []
    for v, rot in enumerate(sk.vertices):
        if not keep[v]:
            continue
        for x in rot:
            renum[x] = len(renum)
        vertices.append(tuple(renum[x] for x in rot))
        if len(rot) == 4:
            over.append(d.over[d.quads.index(v)])
    new_alpha = [0] * len(renum)
    for x, nx in renum.items():
        new_alpha[nx] = renum[resolve(x)]

    # kept circles that crossed nothing but removed components come back as
    # bare marker circles
    lost = set(comps)
    for v, rot in enumerate(sk.vertices):
        if keep[v]:
            for x in rot:
                lost.discard(labels[x])
    for _ in sorted(lost):
        a = len(new_alpha)
        vertices.append((a, a + 1))
        new_alpha += [a + 1, a]
    return Diagram(PlaneGraph(vertices, new_alpha), tuple(over))


# ---------------------------------------------------------------------------
# strand tracing and arcs


def _strand_exit(sk: PlaneGraph, arrival):
    """Continue a strand through a marker or straight through a crossing;
    None at a trivalent vertex (strands end there)."""
    rot = sk.vertices[sk.vertex_of[arrival]]
    k = len(rot)
    if k == 3:
        return None
    i = rot.index(arrival)
    return rot[(i + k // 2) % k]


def orient_edges(d: Diagram):
    """Deterministic direction choice for every edge.

    Scanning darts in increasing order, each still-unoriented edge seeds a
    strand walk; the walk extends forwards and backwards through crossings
    and markers (stopping at trivalent vertices), so every crossing is
    traversed coherently.  Returns {min dart of edge: forward dart}, where
    the forward dart's vertex is the tail of the edge.
    """
    sk = d.skeleton
    alpha = sk.alpha
    fwd = {}

    def eid(x):
        return min(x, alpha[x])

    for seed in range(len(alpha)):
        if eid(seed) in fwd:
            continue
        cur = seed
        while True:
            fwd[eid(cur)] = cur
            nxt = _strand_exit(sk, alpha[cur])
            if nxt is None or eid(nxt) in fwd:
                break
            cur = nxt
        cur = seed
        while True:
            rot = sk.vertices[sk.vertex_of[cur]]
            if len(rot) == 3:
                break
            i = rot.index(cur)
            arrival = rot[(i + len(rot) // 2) % len(rot)]
            prev = alpha[arrival]
            if eid(prev) in fwd:
                break
            fwd[eid(prev)] = prev
            cur = prev
    return fwd


class Arc(NamedTuple):
    """A maximal oriented strand run that never passes under a crossing.

    ``darts`` lists the forward darts of its edges in traversal order;
    ``closed`` marks a circle component with no underpass (and no trivalent
    vertex) at all.
    """

    darts: tuple
    closed: bool


def arcs(d: Diagram):
    """The arc partition of a diagram's edges, in deterministic order.

    Returns (list of Arc, {min dart of edge: arc index}).
    """
    sk = d.skeleton
    alpha = sk.alpha
    fwd = orient_edges(d)

    def eid(x):
        return min(x, alpha[x])

    def under_arrival(arrival):
        v = sk.vertex_of[arrival]
        return len(sk.vertices[v]) == 4 and not d.is_over(arrival)

    starts = []
    for v, rot in enumerate(sk.vertices):
        if len(rot) == 3:
            for g in rot:
                if fwd[eid(g)] == g:
                    starts.append(g)
        elif len(rot) == 4:
            for x in rot:
                if under_arrival(x) and fwd[eid(x)] == alpha[x]:
                    # the understrand exits on the opposite dart
                    starts.append(_strand_exit(sk, x))
    starts.sort()

    out = []
    index = {}

    def walk(start, closed):
        run = []
        cur = start
        while True:
            run.append(cur)
            index[eid(cur)] = len(out)
            arrival = alpha[cur]
            if closed is False:
                if len(sk.vertices[sk.vertex_of[arrival]]) == 3:
                    break
                if under_arrival(arrival):
                    break
                cur = _strand_exit(sk, arrival)
            else:
                cur = _strand_exit(sk, arrival)
                if cur == start:
                    break
        out.append(Arc(tuple(run), closed))

    for s in starts:
        walk(s, False)
    for seed in range(len(alpha)):
        e = eid(seed)
        if e not in index:
            walk(fwd[e], True)
    return out, index


# ---------------------------------------------------------------------------
# canonical codes


def _trace_code(sigma, alpha, vertex_of, degrees, overset, flip, start, best):
    """One breadth-first relabeling trace, or None once it provably exceeds
    ``best`` (all traces of a diagram have equal length, so a prefix that
    compares greater can never win the final min)."""
    n = len(sigma)
    new = [-1] * n
    order = [start]
    new[start] = 0
    nxt = 1
    vseen = [False] * len(degrees)
    bits = []
    buf = bytearray()
    equal = best is not None
    k = 0
    v = vertex_of[start]
    vseen[v] = True
    if degrees[v] == 4:
        bits.append(1 if ((start in overset) ^ flip) else 0)
    i = 0
    while i < len(order):
        dd = order[i]
        i += 1
        a = alpha[dd]
        s = sigma[dd]
        if new[a] < 0:
            new[a] = nxt
            nxt += 1
            order.append(a)
            v = vertex_of[a]
            if not vseen[v]:
                vseen[v] = True
                if degrees[v] == 4:
                    bits.append(1 if ((a in overset) ^ flip) else 0)
        if new[s] < 0:
            new[s] = nxt
            nxt += 1
            order.append(s)
            v = vertex_of[s]
            if not vseen[v]:
                vseen[v] = True
                if degrees[v] == 4:
                    bits.append(1 if ((s in overset) ^ flip) else 0)
        pa = new[a]
        ps = new[s]
        buf.append(pa)
        buf.append(ps)
        if equal:
            b = best[k]
            if pa != b:
                if pa > b:
                    return None
                equal = False
            else:
                k += 1
                b = best[k]
                if ps != b:
                    if ps > b:
                        return None
                    equal = False
                else:
                    k += 1
    return bytes(buf) + b"\xff" + bytes(bits)


def canonical_diagram_code(d: Diagram, mirror=False):
    """Canonical bytes for a diagram, invariant under relabeling and under
    viewing the sphere from the back; with mirror=True also under mirroring.
    """
    sk = d.skeleton
    nd = len(sk.alpha)
    if nd >= 255:
        raise ValueError("diagram too large for byte-coded traces")
    sigma = [0] * nd
    for rot in sk.vertices:
        for i, dart in enumerate(rot):
            sigma[dart] = rot[(i + 1) % len(rot)]
    inv = [0] * nd
    for dd in range(nd):
        inv[sigma[dd]] = dd
    degrees = [len(rot) for rot in sk.vertices]
    overset = set()
    for v in d.quads:
        overset.update(d.over_pair(v))

    starts = [dd for dd in range(nd) if degrees[sk.vertex_of[dd]] == 3]
    if not starts:
        starts = range(nd)
    # same link: identity view and back view (reversed rotations, bits
    # flipped); mirror adds the two cross combinations.
    variants = [(sigma, False), (inv, True)]
    if mirror:
        variants += [(inv, False), (sigma, True)]
    best = None
    for sg, fl in variants:
        for s in starts:
            code = _trace_code(sg, sk.alpha, sk.vertex_of, degrees, overset, fl, s, best)
            if code is not None and (best is None or code < best):
                best = code
    return best


# ---------------------------------------------------------------------------
# X/V text code


def to_text(d: Diagram):
    """One-line X/V code.  Edge-segments are numbered from 1 in min-dart
    order; X(a,b,c,d) lists a crossing's segments counterclockwise starting
    at the incoming understrand, V(a,b,c) a trivalent vertex counterclockwise
    from its lexicographically smallest rotation."""
    sk = d.skeleton
    alpha = sk.alpha
    if any(len(rot) == 2 for rot in sk.vertices):
        raise ValueError("circle components without crossings have no X/V code")
    fwd = orient_edges(d)

    def eid(x):
        return min(x, alpha[x])

    label = {}
    for dd in sorted(fwd):
        label[dd] = len(label) + 1

    def lab(x):
        return label[eid(x)]

    parts = []
    for v, rot in enumerate(sk.vertices):
        if len(rot) == 3:
            labs = [lab(x) for x in rot]
            best = min(tuple(labs[i:] + labs[:i]) for i in range(3))
            parts.append("V(%d,%d,%d)" % best)
        else:
            under = [x for x in rot if x not in d.over_pair(v)]
            incoming = [x for x in under if fwd[eid(x)] == alpha[x]]
            if len(incoming) != 1:
                raise AssertionError("understrand must enter exactly once")
            i = rot.index(incoming[0])
            ccw = [rot[(i + k) % 4] for k in range(4)]
            parts.append("X(%d,%d,%d,%d)" % tuple(lab(x) for x in ccw))
    return " ".join(parts)


def from_text(text: str):
    """Parse a one-line X/V code back into a Diagram."""
    entries = []
    pos = 0
    for m in re.finditer(r"([XV])\(\s*([0-9,\s]+?)\s*\)", text):
        labs = [int(t) for t in m.group(2).replace(",", " ").split()]
        if m.group(1) == "X" and len(labs) != 4:
            raise ValueError("X entry needs 4 segment labels: %s" % m.group(0))
        if m.group(1) == "V" and len(labs) != 3:
            raise ValueError("V entry needs 3 segment labels: %s" % m.group(0))
        entries.append((m.group(1), labs))
        pos += 1
    if not entries:
        raise ValueError("no X/V entries found")
    slots = {}
    dart = 0
    vertices = []
    over_bits = []
    for kind, labs in entries:
        rot = tuple(range(dart, dart + len(labs)))
        vertices.append(rot)
        if kind == "X":
            over_bits.append(False)  # over pair sits at positions 1, 3
        for k, lb in enumerate(labs):
            slots.setdefault(lb, []).append(dart + k)
        dart += len(labs)
    alpha = [-1] * dart
    for lb, ds in sorted(slots.items()):
        if len(ds) != 2:
            raise ValueError("segment label %d used %d times" % (lb, len(ds)))
        alpha[ds[0]], alpha[ds[1]] = ds[1], ds[0]
    g = PlaneGraph(vertices, alpha)
    if g.genus() != 0:
        raise ValueError("X/V code does not describe a sphere diagram")
    bits = []
    qi = 0
    for kind, _ in entries:
        if kind == "X":
            bits.append(over_bits[qi])
            qi += 1
    return Diagram(g, tuple(bits))


# ---------------------------------------------------------------------------
# move engine


class MoveStep(NamedTuple):
    """One local rewrite: kind in {R1,R2,R3,R4,R5,IH}, a site tuple of darts
    (plus variant flags where a kind has choices), and a direction --
    "apply" removes crossings (or is neutral), "inverse" adds them."""

    kind: str
    site: tuple
    direction: str = "apply"


class _Sketch:
    """Mutable diagram under surgery.  Darts are arbitrary ints; finish()
    compacts them back into a Diagram."""

    def __init__(self, d: Diagram):
        sk = d.skeleton
        self.rot = [list(r) for r in sk.vertices]
        self.alpha = dict(enumerate(sk.alpha))
        self.vertex_of = dict(enumerate(sk.vertex_of))
        self.overset = set()
        for v in d.quads:
            self.overset.update(d.over_pair(v))
        self._next = len(sk.alpha)

    def fresh(self, k):
        ds = list(range(self._next, self._next + k))
        self._next += k
        return ds

    def add_vertex(self, rotation, over_darts=None):
        vid = len(self.rot)
        self.rot.append(list(rotation))
        for dd in rotation:
            self.vertex_of[dd] = vid
        if over_darts:
            self.overset.update(over_darts)
        return vid

    def join(self, a, b):
        self.alpha[a] = b
        self.alpha[b] = a

    def del_vertex(self, v):
        for dd in self.rot[v]:
            del self.vertex_of[dd]
            self.alpha.pop(dd, None)
            self.overset.discard(dd)
        self.rot[v] = None

    def sigma(self, dart, k=1):
        r = self.rot[self.vertex_of[dart]]
        return r[(r.index(dart) + k) % len(r)]

    def insert_crossing(self, d1, d2, first_over):
        """Cut the edges holding d1 and d2 and join them at a new crossing
        with counterclockwise rotation (toward d1, toward d2, toward old
        alpha(d1), toward old alpha(d2)); the d1-strand is the overstrand
        iff first_over."""
        a1, a2 = self.alpha[d1], self.alpha[d2]
        if {d1, a1} & {d2, a2}:
            raise AssertionError("crossing insertion needs two distinct edges")
        m1, m2, m3, m4 = self.fresh(4)
        over = (m1, m3) if first_over else (m2, m4)
        self.add_vertex((m1, m2, m3, m4), over)
        self.join(d1, m1)
        self.join(d2, m2)
        self.join(a1, m3)
        self.join(a2, m4)
        return m1, m2, m3, m4

    def _through_map(self, removed):
        """Straight-through dart pairing inside a set of vertices about to be
        spliced out, plus the set of their darts."""
        thr = {}
        rdarts = set()
        for v in removed:
            r = self.rot[v]
            rdarts.update(r)
            if len(r) == 4:
                thr[r[0]], thr[r[2]] = r[2], r[0]
                thr[r[1]], thr[r[3]] = r[3], r[1]
            elif len(r) == 2:
                thr[r[0]], thr[r[1]] = r[1], r[0]
            else:
                raise AssertionError("cannot splice through a trivalent vertex")
        return thr, rdarts

    def outward_from(self, removed, r):
        """The surviving dart a strand reaches when it leaves removed dart r
        away from r's vertex; None when the strand closes up inside."""
        thr, rdarts = self._through_map(removed)
        cur = self.alpha[r]
        while cur in rdarts:
            if cur == r:
                return None
            cur = self.alpha[thr[cur]]
        return cur

    def splice_out(self, removed):
        """Delete crossings/markers, reconnecting each strand straight
        through; fully internal strands become bare circles (loop markers).
        Returns the vertex ids of circles created this way."""
        thr, rdarts = self._through_map(removed)
        visited = set()
        for dd, aa in list(self.alpha.items()):
            if dd in rdarts or aa not in rdarts:
                continue
            cur = aa
            while True:
                visited.add(cur)
                out = thr[cur]
                visited.add(out)
                nxt = self.alpha[out]
                if nxt not in rdarts:
                    self.join(dd, nxt)
                    break
                cur = nxt
        leftover = sorted(rdarts - visited)
        done = set()
        circles = []
        for m in leftover:
            if m in done:
                continue
            cur = m
            while cur not in done:
                done.add(cur)
                out = thr[cur]
                done.add(out)
                cur = self.alpha[out]
            x, y = self.fresh(2)
            circles.append(self.add_vertex((x, y)))
            self.join(x, y)
        for v in removed:
            self.del_vertex(v)
        return circles

    def smooth_markers(self):
        """Splice out degree-2 vertices sitting on a strand (keep bare
        circles, whose two darts bound a loop edge)."""
        while True:
            v = next(
                (
                    i
                    for i, r in enumerate(self.rot)
                    if r is not None and len(r) == 2 and self.alpha[r[0]] != r[1]
                ),
                None,
            )
            if v is None:
                return
            self.splice_out({v})

    def finish(self):
        self.smooth_markers()
        live = sorted(self.vertex_of)
        newid = {dd: i for i, dd in enumerate(live)}
        vertices = []
        bits = []
        for r in self.rot:
            if r is None:
                continue
            vertices.append(tuple(newid[dd] for dd in r))
            if len(r) == 4:
                bits.append(r[0] in self.overset)
        alpha = [0] * len(live)
        for dd in live:
            aa = self.alpha[dd]
            if aa not in newid:
                raise AssertionError("dangling dart after surgery")
            alpha[newid[dd]] = newid[aa]
        return Diagram(PlaneGraph(vertices, alpha), tuple(bits))


def _phi(sk: PlaneGraph):
    """Face successor: next dart counterclockwise around the face to the
    right of each directed edge."""
    sigma = [0] * len(sk.alpha)
    for rot in sk.vertices:
        for i, dart in enumerate(rot):
            sigma[dart] = rot[(i + 1) % len(rot)]
    return [sigma[a] for a in sk.alpha]


def _face_of(phi, dart):
    orbit = [dart]
    cur = phi[dart]
    while cur != dart:
        orbit.append(cur)
        cur = phi[cur]
    return orbit


def _deg(sk, dart):
    return len(sk.vertices[sk.vertex_of[dart]])


def _require(cond, kind, message):
    if not cond:
        raise MoveError("%s: %s" % (kind, message))


def _apply_r1(d, step):
    sk = d.skeleton
    if step.direction == "apply":
        (l,) = step.site
        phi = _phi(sk)
        _require(phi[l] == l, "R1", "site is not a monogon face")
        v = sk.vertex_of[l]
        _require(len(sk.vertices[v]) == 4, "R1", "monogon vertex is not a crossing")
        s = _Sketch(d)
        s.splice_out({v})
        return s.finish()
    p, variant = step.site
    _require(0 <= variant < 4, "R1", "kink variant out of range")
    s = _Sketch(d)
    q = s.alpha[p]
    m1, m2, m3, m4 = s.fresh(4)
    if variant % 2 == 0:
        # loop darts in positions 2,3; strand pairs {m1,m3}, {m2,m4}
        s.add_vertex((m1, m2, m3, m4), (m1, m3) if variant < 2 else (m2, m4))
    else:
        # loop darts in positions 1,2; strand pairs {m1,m4}, {m3,m2}
        s.add_vertex((m1, m3, m4, m2), (m1, m4) if variant < 2 else (m3, m2))
    s.join(p, m1)
    s.join(q, m2)
    s.join(m3, m4)
    return s.finish()


def _r2_coherent(d, x, y):
    """Overstrand agreement across a bigon with sides x and y."""
    return d.is_over(x) == d.is_over(d.skeleton.alpha[x])


def _apply_r2(d, step):
    sk = d.skeleton
    if step.direction == "apply":
        (x,) = step.site
        phi = _phi(sk)
        y = phi[x]
        _require(phi[y] == x and y != x, "R2", "site is not a bigon face")
        u, v = sk.vertex_of[x], sk.vertex_of[y]
        _require(u != v, "R2", "bigon sides meet at one vertex")
        _require(
            len(sk.vertices[u]) == 4 and len(sk.vertices[v]) == 4,
            "R2",
            "bigon corner is not a crossing",
        )
        _require(
            _r2_coherent(d, x, y),
            "R2",
            "bigon is not coherent (one strand must pass over both corners)",
        )
        s = _Sketch(d)
        s.splice_out({u, v})
        return s.finish()
    a, b, a_over = step.site
    phi = _phi(sk)
    _require(b in _face_of(phi, a), "R2", "darts do not share a face")
    _require(
        sk.alpha[a] != b and a != b and sk.alpha[a] != sk.alpha[b] and a != sk.alpha[b],
        "R2",
        "strand cannot push across its own edge",
    )
    s = _Sketch(d)
    u = s.insert_crossing(a, s.alpha[b], a_over)
    s.insert_crossing(u[2], b, a_over)
    return s.finish()


def _apply_r3(d, step):
    sk = d.skeleton
    x, y, z = step.site
    phi = _phi(sk)
    _require(
        phi[x] == y and phi[y] == z and phi[z] == x,
        "R3",
        "site is not a triangular face",
    )
    u, v, w = sk.vertex_of[x], sk.vertex_of[y], sk.vertex_of[z]
    _require(
        len({u, v, w}) == 3,
        "R3",
        "triangle corners are not three distinct vertices",
    )
    _require(
        all(len(sk.vertices[t]) == 4 for t in (u, v, w)),
        "R3",
        "triangle corner is not a crossing",
    )
    ax = sk.alpha[x]
    _require(
        d.is_over(x) == d.is_over(ax),
        "R3",
        "sliding strand must pass its two corners uniformly",
    )
    s = _Sketch(d)
    # legs (far darts) of the three strands at the triangle's corners
    s1, a3 = s.sigma(x, 2), s.sigma(x, 1)
    s2, b5 = s.sigma(ax, 2), s.sigma(ax, 3)
    ay = s.alpha[y]
    b6, a4 = s.sigma(ay, 2), s.sigma(z, 2)
    over_s_u = d.is_over(x)
    over_s_v = d.is_over(ax)
    over_a_w = d.is_over(z)
    ext = {leg: s.alpha[leg] for leg in (s1, s2, a3, a4, b5, b6)}
    # new crossings: wp = A x B, up = S x A, vp = S x B
    wp = s.fresh(4)  # (toward leg3/A, toward vp/B, toward up/A, toward leg5/B)
    up = s.fresh(4)  # (toward leg2/S, toward wp/A, toward vp/S, toward leg4/A)
    vp = s.fresh(4)  # (toward up/S, toward wp/B, toward leg1/S, toward leg6/B)
    s.add_vertex(wp, (wp[0], wp[2]) if over_a_w else (wp[1], wp[3]))
    s.add_vertex(up, (up[1], up[3]) if not over_s_u else (up[0], up[2]))
    s.add_vertex(vp, (vp[0], vp[2]) if over_s_v else (vp[1], vp[3]))
    s.join(wp[1], vp[1])
    s.join(wp[2], up[1])
    s.join(up[2], vp[0])
    newleg = {s1: vp[2], s2: up[0], a3: wp[0], a4: up[3], b5: wp[3], b6: vp[3]}
    for v_old in (u, v, w):
        s.del_vertex(v_old)
    seen = set()
    for leg, partner in ext.items():
        if leg in seen:
            continue
        if partner in newleg:
            s.join(newleg[leg], newleg[partner])
            seen.add(partner)
        else:
            s.join(newleg[leg], partner)
    return s.finish()


def _corner_face(d, g):
    """Face at the corner between trivalent leg g and the next leg ccw."""
    sk = d.skeleton
    rot = sk.vertices[sk.vertex_of[g]]
    g_next = rot[(rot.index(g) + 1) % 3]
    return g_next, _face_of(_phi(sk), g_next)


def _apply_r4(d, step):
    """Slide a strand past a trivalent vertex: two crossings on consecutive
    legs trade for one on the remaining leg (direction "apply"), or back
    (direction "inverse")."""
    sk = d.skeleton
    (g,) = step.site
    t = sk.vertex_of[g]
    _require(len(sk.vertices[t]) == 3, "R4", "site dart is not a trivalent leg")
    if step.direction == "apply":
        g_next, face = _corner_face(d, g)
        _require(len(face) == 3, "R4", "corner face is not a triangle")
        _, a, b = face
        c2, c1 = sk.vertex_of[a], sk.vertex_of[b]
        _require(
            c1 != c2 and c1 != t and c2 != t,
            "R4",
            "triangle corners must be two distinct crossings",
        )
        _require(
            len(sk.vertices[c1]) == 4 and len(sk.vertices[c2]) == 4,
            "R4",
            "corner face must meet two crossings",
        )
        s_over = d.is_over(a)
        _require(
            s_over == d.is_over(sk.alpha[a]),
            "R4",
            "sliding strand must pass both legs uniformly",
        )
        s = _Sketch(d)
        g_far = s.sigma(g, 2)  # third leg of t
        # the sliding strand's western attachment (beyond the leg-g_next
        # crossing c2); may resolve through the removed region
        sxw = s.sigma(s.alpha[g_next], 3)
        d2 = s.outward_from({c1, c2}, sxw)
        circles = s.splice_out({c1, c2})
        if d2 is None:
            d2 = min(s.rot[circles[0]])  # strand closed into a bare circle
        _require(
            d2 != g_far and s.alpha[g_far] != d2,
            "R4",
            "sliding strand merges with the target leg (degenerate site)",
        )
        s.insert_crossing(g_far, d2, not s_over)
        return s.finish()
    # inverse: one crossing on leg g trades for two on the other legs
    x = sk.alpha[g]
    c3 = sk.vertex_of[x]
    _require(len(sk.vertices[c3]) == 4, "R4", "leg does not end at a crossing")
    s = _Sketch(d)
    g1, g2 = s.sigma(g, 1), s.sigma(g, 2)  # legs for the new crossings
    s_over = d.is_over(s.sigma(x, 1))
    sxe = s.sigma(x, 3)  # strand dart on the side that takes the g1 crossing
    e_att = s.outward_from({c3}, sxe)
    circles = s.splice_out({c3})
    if e_att is None:
        e_att = min(s.rot[circles[0]])
    _require(
        e_att != g1 and s.alpha[g1] != e_att
        and e_att != g2 and s.alpha[e_att] != g2,
        "R4",
        "strand merges with the target leg (degenerate site)",
    )
    c1 = s.insert_crossing(g1, e_att, not s_over)
    s.insert_crossing(g2, c1[3], not s_over)
    return s.finish()


def _apply_r5(d, step):
    """Twist or untwist two consecutive legs of a trivalent vertex."""
    sk = d.skeleton
    if step.direction == "apply":
        (g,) = step.site
        t = sk.vertex_of[g]
        _require(len(sk.vertices[t]) == 3, "R5", "site dart is not a trivalent leg")
        g_next, face = _corner_face(d, g)
        _require(len(face) == 2, "R5", "corner face is not a bigon")
        y = face[1]
        c = sk.vertex_of[y]
        _require(
            len(sk.vertices[c]) == 4,
            "R5",
            "corner bigon must close at a crossing",
        )
        # Untwisting swaps the two far attachments back, so the crossing is
        # removed with the adjacent pairing {y, sigma(y)} / {the other two},
        # not the through-splice used for R1/R2.
        s = _Sketch(d)
        md, ma, mb = s.sigma(y, 1), s.sigma(y, 2), s.sigma(y, 3)
        gg, gg_next = s.alpha[y], s.alpha[mb]
        ext_a, ext_d = s.alpha[ma], s.alpha[md]
        s.del_vertex(c)
        if ext_a == md:
            s.join(gg, gg_next)  # untwisting a kinked loop leg
        else:
            s.join(gg, ext_d)
            s.join(gg_next, ext_a)
        return s.finish()
    g, first_over = step.site
    t = sk.vertex_of[g]
    _require(len(sk.vertices[t]) == 3, "R5", "site dart is not a trivalent leg")
    s = _Sketch(d)
    g_next = s.sigma(g, 1)
    ext1, ext2 = s.alpha[g], s.alpha[g_next]
    # Twisting the corner swaps the two legs' far attachments: the g strand
    # now runs t -> crossing -> ext2 and the g_next strand t -> crossing ->
    # ext1.  Planarity pins the ccw rotation at the new crossing to
    # (-> ext2, -> g_next, -> g, -> ext1).
    ma, mb, mc, md = s.fresh(4)
    s.add_vertex((ma, mb, mc, md), (ma, mc) if first_over else (mb, md))
    s.join(g, mc)
    s.join(g_next, mb)
    if ext1 == g_next:
        s.join(ma, md)  # twisting a loop leg: kink the loop
    else:
        s.join(ext2, ma)
        s.join(ext1, md)
    return s.finish()


def _apply_ih(d, step):
    """Contract the edge between the two trivalent vertices and re-split it
    the other way."""
    sk = d.skeleton
    (h1,) = step.site
    h2 = sk.alpha[h1]
    t1, t2 = sk.vertex_of[h1], sk.vertex_of[h2]
    _require(
        t1 != t2
        and len(sk.vertices[t1]) == 3
        and len(sk.vertices[t2]) == 3,
        "IH",
        "site must be an edge joining the two trivalent vertices",
    )
    s = _Sketch(d)
    u1, u2 = s.sigma(h1, 1), s.sigma(h1, 2)
    v1, v2 = s.sigma(h2, 1), s.sigma(h2, 2)
    s.rot[t1] = [h1, u2, v1]
    s.rot[t2] = [h2, v2, u1]
    s.vertex_of[v1] = t1
    s.vertex_of[u1] = t2
    return s.finish()


_APPLIERS = {
    "R1": _apply_r1,
    "R2": _apply_r2,
    "R3": _apply_r3,
    "R4": _apply_r4,
    "R5": _apply_r5,
    "IH": _apply_ih,
}

R_MOVES = frozenset({"R1", "R2", "R3", "R4", "R5"})
RIH_MOVES = R_MOVES | {"IH"}


def move_delta(step: MoveStep):
    """Crossing-count change of a move step."""
    base = {"R1": 1, "R2": 2, "R3": 0, "R4": 1, "R5": 1, "IH": 0}[step.kind]
    return -base if step.direction == "apply" else base


def apply_move(d: Diagram, step: MoveStep):
    """Rewrite d by one move; raises MoveError when the site does not match
    the kind's local pattern."""
    if step.kind not in _APPLIERS:
        raise MoveError("unknown move kind %r" % (step.kind,))
    if step.direction not in ("apply", "inverse"):
        raise MoveError("%s: unknown direction %r" % (step.kind, step.direction))
    if step.kind in ("R3", "IH") and step.direction == "inverse":
        raise MoveError("%s: has no separate inverse direction" % step.kind)
    out = _APPLIERS[step.kind](d, step)
    if out.skeleton.genus() != 0:
        raise AssertionError("move broke sphericality: %s" % (step,))
    if component_count(out) != component_count(d):
        raise AssertionError("move changed component count: %s" % (step,))
    return out


def enumerate_move_sites(d: Diagram, kinds=RIH_MOVES, increasing=True):
    """All applicable MoveSteps of the requested kinds, crossing-increasing
    directions included unless increasing=False."""
    sk = d.skeleton
    phi = _phi(sk)
    faces = sk.faces()
    steps = []

    def quad(dart):
        return _deg(sk, dart) == 4

    if "R1" in kinds:
        for f in faces:
            if len(f) == 1 and quad(f[0]):
                steps.append(MoveStep("R1", (f[0],)))
        if increasing:
            for p in range(len(sk.alpha)):
                for variant in range(4):
                    steps.append(MoveStep("R1", (p, variant), "inverse"))
    if "R2" in kinds:
        for f in faces:
            if len(f) == 2:
                x, y = f
                u, v = sk.vertex_of[x], sk.vertex_of[y]
                if (
                    u != v
                    and quad(x)
                    and quad(y)
                    and d.is_over(x) == d.is_over(sk.alpha[x])
                ):
                    steps.append(MoveStep("R2", (min(x, y),)))
        if increasing:
            for f in faces:
                for a in f:
                    for b in f:
                        if b not in (a, sk.alpha[a]):
                            steps.append(MoveStep("R2", (a, b, False), "inverse"))
                            steps.append(MoveStep("R2", (a, b, True), "inverse"))
    if "R3" in kinds:
        for f in faces:
            if len(f) == 3 and all(quad(x) for x in f):
                us = [sk.vertex_of[x] for x in f]
                if len(set(us)) == 3:
                    for i, x in enumerate(f):
                        if d.is_over(x) == d.is_over(sk.alpha[x]):
                            steps.append(
                                MoveStep("R3", (f[i], f[(i + 1) % 3], f[(i + 2) % 3]))
                            )
    if "R4" in kinds or "R5" in kinds:
        for t, rot in enumerate(sk.vertices):
            if len(rot) != 3:
                continue
            for g in rot:
                g_next = rot[(rot.index(g) + 1) % 3]
                face = _face_of(phi, g_next)
                if "R4" in kinds:
                    if len(face) == 3:
                        _, a, b = face
                        c2, c1 = sk.vertex_of[a], sk.vertex_of[b]
                        if (
                            c1 != c2
                            and quad(a)
                            and quad(b)
                            and d.is_over(a) == d.is_over(sk.alpha[a])
                        ):
                            steps.append(MoveStep("R4", (g,)))
                    if increasing and quad(sk.alpha[g]):
                        steps.append(MoveStep("R4", (g,), "inverse"))
                if "R5" in kinds:
                    if len(face) == 2 and quad(face[1]):
                        steps.append(MoveStep("R5", (g,)))
                    if increasing:
                        steps.append(MoveStep("R5", (g, False), "inverse"))
                        steps.append(MoveStep("R5", (g, True), "inverse"))
    if "IH" in kinds:
        for h1 in range(len(sk.alpha)):
            h2 = sk.alpha[h1]
            if h1 < h2 and _deg(sk, h1) == 3 and _deg(sk, h2) == 3:
                if sk.vertex_of[h1] != sk.vertex_of[h2]:
                    steps.append(MoveStep("IH", (h1,)))
    return steps


class Verdict(NamedTuple):
    """Outcome of a bounded reduction search."""

    kind: str  # "reduced" | "survivor" | "inconclusive"
    diagram: Optional[Diagram] = None
    class_id: Optional[bytes] = None
    states: int = 0
    members: Optional[frozenset] = None  # survivor closure, when requested


def reduce_search(
    d: Diagram,
    max_crossings=None,
    max_states=5_000_000,
    moves=RIH_MOVES,
    want_members=False,
):
    """Breadth-first closure of d under the move set, deduplicated by
    mirror-inclusive canonical code.

    Returns ReducedTo as soon as a diagram with fewer crossings than d (or
    with edge-connectivity <= 1, the split/reducible form) is reached, a
    SurvivorClass verdict (class id = least canonical code of the closure)
    when the closure is exhausted, and Inconclusive when a budget runs out.
    """
    c0 = d.crossings
    if max_crossings is None:
        max_crossings = c0 + 2
    if max_crossings < c0:
        raise ValueError("max_crossings below the diagram's crossing count")
    if has_small_cut(d.skeleton):
        return Verdict("reduced", diagram=d, states=1)
    start = canonical_diagram_code(d, mirror=True)
    seen = {start}
    frontier = [d]
    while frontier:
        nxt_frontier = []
        for cur in frontier:
            c = cur.crossings
            for step in enumerate_move_sites(cur, moves):
                if c + move_delta(step) > max_crossings:
                    continue
                try:
                    out = apply_move(cur, step)
                except MoveError:
                    continue  # degenerate site shapes are skipped, not fatal
                if out.crossings < c0 or has_small_cut(out.skeleton):
                    return Verdict("reduced", diagram=out, states=len(seen))
                code = canonical_diagram_code(out, mirror=True)
                if code in seen:
                    continue
                if len(seen) >= max_states:
                    return Verdict("inconclusive", states=len(seen))
                seen.add(code)
                nxt_frontier.append(out)
        frontier = nxt_frontier
    return Verdict("survivor", class_id=min(seen), states=len(seen),
                   members=frozenset(seen) if want_members else None)
