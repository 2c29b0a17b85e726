"""Connected sums of diagrams and the census of composite links.

Two geometric gluings live here.  An order-2 sum cuts one edge open in each
diagram and splices the second diagram into the first, merging one strand of
each; it is how link summands are attached to a spatial graph.  An order-1
sum joins a chosen component of each diagram by a bridge arc, raising the
genus of the merged component; iterating it over a link pool reproduces the
table of reducible census entries.

The enumerators at the bottom drive both operations over hand-built pools,
discarding composites whose invariants certify a split or reducible result
and deduplicating survivors by a bounded move search.
"""

from typing import NamedTuple, Optional

from .diagram import (
    Diagram,
    canonical_diagram_code,
    component_count,
    dart_components,
    reduce_search,
)
from .groups import alternating_group
from .invariants import (
    count_hom_classes,
    free_product_classes_from_profiles,
    hom_count_profile,
)
from .planar import PlaneGraph
from .wirtinger import (Presentation, presentation_from_diagram,
                        tietze_simplify)


class SumSite(NamedTuple):
    """Where a connected sum attaches on one diagram.

    ``index`` names an edge by one of its darts (order-2 sums) or a strand
    component by its label (order-1 sums).  ``flip`` picks the gluing
    orientation of an order-2 splice and is ignored for order-1 sums.
    """

    diagram: str
    index: int
    flip: bool = False


def _check_edge_site(d, site):
    if not (0 <= site.index < len(d.skeleton.alpha)):
        raise ValueError(
            "diagram %r has no edge dart %r" % (site.diagram, site.index)
        )


def order2_sum(d1: Diagram, s1: SumSite, d2: Diagram, s2: SumSite) -> Diagram:
    """Splice d2 into an edge of d1, merging one strand of each.

    Both named edges are cut; the four loose ends are rejoined across the
    diagrams, in one of the two orientations chosen by the XOR of the sites'
    flip flags.  Crossing counts add, and the component counts satisfy
    n = n1 + n2 - 1.
    """
    _check_edge_site(d1, s1)
    _check_edge_site(d2, s2)
    off = len(d1.skeleton.alpha)
    vertices = list(d1.skeleton.vertices)
    vertices += [tuple(x + off for x in rot) for rot in d2.skeleton.vertices]
    alpha = list(d1.skeleton.alpha) + [x + off for x in d2.skeleton.alpha]

    a1, b1 = s1.index, d1.skeleton.alpha[s1.index]
    a2, b2 = s2.index + off, d2.skeleton.alpha[s2.index] + off
    if s1.flip == s2.flip:
        pairs = ((a1, b2), (b1, a2))
    else:
        pairs = ((a1, a2), (b1, b2))
    for x, y in pairs:
        alpha[x] = y
        alpha[y] = x
    return Diagram(PlaneGraph(vertices, alpha), d1.over + d2.over)


def order1_sum(d1: Diagram, s1: SumSite, d2: Diagram, s2: SumSite) -> Diagram:
    """Join a component of each diagram by a bridge arc.

    Each selected component gets a new trivalent vertex subdividing its
    least-dart edge, and the two new vertices are joined by a bridge edge,
    so the result always has a cut edge (connectivity 1).  The merged
    component carries the genus of both selected ones.
    """
    joined = []
    for d, s in ((d1, s1), (d2, s2)):
        labels, n = dart_components(d)
        if not (0 <= s.index < n):
            raise ValueError(
                "diagram %r has no component %r" % (s.diagram, s.index)
            )
        joined.append(min(x for x in range(len(labels)) if labels[x] == s.index))

    off = len(d1.skeleton.alpha)
    vertices = list(d1.skeleton.vertices)
    vertices += [tuple(x + off for x in rot) for rot in d2.skeleton.vertices]
    alpha = list(d1.skeleton.alpha) + [x + off for x in d2.skeleton.alpha]

    base = len(alpha)
    bridge = []
    for x in (joined[0], joined[1] + off):
        y = alpha[x]
        p, q, r = base, base + 1, base + 2
        base += 3
        vertices.append((p, q, r))
        alpha += [x, -1, y]
        alpha[x] = p
        alpha[y] = r
        bridge.append(q)
    alpha[bridge[0]] = bridge[1]
    alpha[bridge[1]] = bridge[0]
    return Diagram(PlaneGraph(vertices, alpha), d1.over + d2.over)


# ---------------------------------------------------------------------------
# diagram symmetries and site orbits


def _traces(d):
    """Every breadth-first relabeling of the diagram: (code, labeling) pairs.

    Both sphere orientations are traced, so labelings whose codes tie for
    the minimum correspond exactly to the self-maps of the diagram.
    """
    sk = d.skeleton
    nd = len(sk.alpha)
    sigma = [0] * nd
    for rot in sk.vertices:
        for i, x in enumerate(rot):
            sigma[x] = rot[(i + 1) % len(rot)]
    inv = [0] * nd
    for x, y in enumerate(sigma):
        inv[y] = x
    degrees = [len(sk.vertices[sk.vertex_of[x]]) for x in range(nd)]
    overset = set()
    for v, rot in enumerate(sk.vertices):
        if len(rot) == 4:
            overset.update(d.over_pair(v))

    out = []
    for sg, fl in ((sigma, False), (inv, True)):
        for start in range(nd):
            new = [-1] * nd
            order = [start]
            new[start] = 0
            code = []
            bits = []
            vseen = set()
            i = 0
            while i < len(order):
                x = order[i]
                i += 1
                v = sk.vertex_of[x]
                if v not in vseen:
                    vseen.add(v)
                    if degrees[x] == 4:
                        bits.append((x in overset) ^ fl)
                for y in (sk.alpha[x], sg[x]):
                    if new[y] < 0:
                        new[y] = len(order)
                        order.append(y)
                        w = sk.vertex_of[y]
                        if w not in vseen:
                            vseen.add(w)
                            if degrees[y] == 4:
                                bits.append((y in overset) ^ fl)
                code.append(new[sk.alpha[x]])
                code.append(new[sg[x]])
            out.append((tuple(code) + (None,) + tuple(bits), new))
    return out


def diagram_automorphisms(d):
    """Dart permutations mapping the diagram to itself, identity included.

    Derived from tied minimal traces: if two relabelings read off the same
    code, composing one with the other's inverse fixes the diagram.
    """
    traces = _traces(d)
    best = min(code for code, _ in traces)
    winners = [new for code, new in traces if code == best]
    base = winners[0]
    autos = []
    for new in winners:
        lookup = [0] * len(new)
        for x, lab in enumerate(new):
            lookup[lab] = x
        autos.append(tuple(lookup[lab] for lab in base))
    return autos


def edge_orbit_reps(d):
    """One least-dart representative per edge orbit under the diagram's
    symmetries."""
    alpha = d.skeleton.alpha
    autos = diagram_automorphisms(d)
    seen = set()
    reps = []
    for x in range(len(alpha)):
        e = min(x, alpha[x])
        if e in seen:
            continue
        reps.append(e)
        for pi in autos:
            seen.add(min(pi[e], alpha[pi[e]]))
    return reps


def component_orbit_reps(d):
    """One label representative per component orbit under the diagram's
    symmetries."""
    labels, n = dart_components(d)
    autos = diagram_automorphisms(d)
    seen = set()
    reps = []
    for comp in range(n):
        if comp in seen:
            continue
        reps.append(comp)
        dart = labels.index(comp)
        for pi in autos:
            seen.add(labels[pi[dart]])
    return reps


# ---------------------------------------------------------------------------
# the composite census


class CompositeClass(NamedTuple):
    """One inequivalent composite, with how it was built."""

    diagram: Diagram
    trace: str
    crossings: int
    components: int
    ks_a4: int
    ks_a5: int
    class_id: bytes


def _simplified_presentation(d):
    return tietze_simplify(presentation_from_diagram(d))


class _FactorUniverse:
    """Complement hom profiles every order-1 decomposition can draw from.

    Starts with the trivial pieces, the summand links, and their pairwise
    order-2 sums; composite census entries join as they are found, since a
    deeper candidate can split off along any earlier entry.  The profiles
    make each free-product prediction a short Burnside sum.
    """

    def __init__(self, link_pool, table, max_crossings):
        self.table = table
        self.entries = []  # (name, profile, crossings, components)
        self.add("unknot", Presentation(1, ()), 0, 1)
        self.add("trivial-theta", Presentation(2, ()), 0, 1)
        for name, d, _rev in link_pool:
            self.add(name, _simplified_presentation(d), d.crossings,
                     component_count(d))
        for i, (name1, d1, rev1) in enumerate(link_pool):
            for name2, d2, _ in link_pool[i:]:
                if d1.crossings + d2.crossings > max_crossings:
                    continue
                for e1, flip in summand_site_reps(d1, rev1):
                    for e2 in edge_orbit_reps(d2):
                        d = order2_sum(d1, SumSite(name1, e1, flip),
                                       d2, SumSite(name2, e2))
                        self.add("%s#%s@%d,%d" % (name1, name2, e1, e2),
                                 _simplified_presentation(d), d.crossings,
                                 component_count(d))

    def add(self, name, presentation, crossings, components):
        self.entries.append((
            name,
            hom_count_profile(presentation, self.table),
            crossings,
            components,
        ))

    def certificate(self, c, n, ks):
        """The factor pair whose free product explains ks, if any.

        A match certifies the measured class count equals the one a split or
        order-1-reducible link with these factors would have; crossing and
        component bookkeeping must agree exactly.
        """
        for i, (na, pa, ca, nna) in enumerate(self.entries):
            for nb, pb, cb, nnb in self.entries[i:]:
                if ca + cb != c or nna + nnb - 1 != n:
                    continue
                value = free_product_classes_from_profiles(
                    (pa, pb), self.table)
                if value == ks:
                    return (na, nb)
        return None


def summand_site_reps(d, reversible):
    """(edge, flip) choices worth trying when splicing d into something."""
    flips = (False,) if reversible else (False, True)
    return [(e, f) for e in edge_orbit_reps(d) for f in flips]


def enumerate_composites(
    max_crossings=6,
    graph_pool=None,
    link_pool=None,
    max_link_summands=2,
    reduce_budget=2,
    with_a5=True,
    log=None,
):
    """All inequivalent non-split, irreducible composites within budget.

    Starting from the spatial-graph pool, link summands are spliced in at
    one site per edge orbit, in every nesting the summand budget allows.
    Candidates whose class counts equal a free-product prediction are
    discarded as split or reducible; the rest are grouped by a bounded move
    search and returned with their construction traces.  Discard reasons are
    appended to ``log`` when a list is passed; ``with_a5=False`` skips the
    slower second hom count and reports -1 instead.
    """
    if graph_pool is None or link_pool is None:
        from . import fixtures

        if graph_pool is None:
            graph_pool = fixtures.pool_graphs()
        if link_pool is None:
            link_pool = fixtures.summand_links()
    a4 = alternating_group(4)
    a5 = alternating_group(5)
    if log is None:
        log = []

    states = {}  # canonical code -> (diagram, trace, summands)
    for name in sorted(graph_pool):
        d = graph_pool[name]
        states[canonical_diagram_code(d, mirror=True)] = (d, name, 0)
    frontier = list(states)
    while frontier:
        nxt = []
        for key in frontier:
            d, trace, k = states[key]
            if k == max_link_summands:
                continue
            for lname, ld, rev in link_pool:
                if d.crossings + ld.crossings > max_crossings:
                    continue
                for e1 in edge_orbit_reps(d):
                    for e2, flip in summand_site_reps(ld, rev):
                        child = order2_sum(
                            d, SumSite(trace, e1, flip),
                            ld, SumSite(lname, e2),
                        )
                        code = canonical_diagram_code(child, mirror=True)
                        if code in states:
                            continue
                        step = "%s # %s@%d%s" % (
                            trace, lname, e1, "!" if flip else "")
                        states[code] = (child, step, k + 1)
                        nxt.append(code)
        frontier = nxt

    universe = _FactorUniverse(link_pool, a4, max_crossings)
    classes = {}
    order = []
    explored = {}  # canonical code -> class id, over survivor closures
    levels = sorted({k for _, _, k in states.values() if k > 0})
    for level in levels:
        found = []
        for code, (d, trace, k) in states.items():
            if k != level or component_count(d) < 2:
                continue
            p = _simplified_presentation(d)
            ks4 = count_hom_classes(p, a4).count
            split = universe.certificate(
                d.crossings, component_count(d), ks4)
            if split is not None:
                log.append((trace, "free product of %s and %s" % split))
                continue
            if code in explored:  # lies in an already-searched closure
                log.append((trace, "same class as %s"
                            % classes[explored[code]][1]))
                continue
            verdict = reduce_search(
                d, max_crossings=d.crossings + reduce_budget,
                want_members=True)
            if verdict.kind != "survivor":
                log.append((trace, "simplified by moves"))
                continue
            for member in verdict.members:
                explored[member] = verdict.class_id
            if verdict.class_id in classes:
                log.append((trace, "same class as %s"
                            % classes[verdict.class_id][1]))
                continue
            classes[verdict.class_id] = (d, trace, ks4)
            order.append(verdict.class_id)
            found.append((verdict.class_id, p))
        # entries found at this level join the factor universe: a deeper
        # candidate can split off along any of them
        for cid, p in found:
            d, trace, _ = classes[cid]
            universe.add(trace, p, d.crossings, component_count(d))

    out = []
    for cid in order:
        d, trace, ks4 = classes[cid]
        ks5 = (count_hom_classes(_simplified_presentation(d), a5).count
               if with_a5 else -1)
        out.append(CompositeClass(
            diagram=d,
            trace=trace,
            crossings=d.crossings,
            components=component_count(d),
            ks_a4=ks4,
            ks_a5=ks5,
            class_id=cid,
        ))
    out.sort(key=lambda x: (x.crossings, x.components, x.ks_a4, x.trace))
    return out


# ---------------------------------------------------------------------------
# the order-1 (reducible) census


class OrderOneFactor(NamedTuple):
    """A pool link for the reducible census.

    ``orbits`` groups component labels by the link's symmetry; None marks a
    link whose symmetry has not been recorded, which taints every row it
    appears in.  ``family`` merges rows of links sharing one summand list.
    """

    name: str
    family: str
    diagram: Diagram
    orbits: Optional[tuple]


class ReducibleRow(NamedTuple):
    crossings: int
    split: str  # "c1 + c2"
    description: str  # "L1 o L2" with family names
    count: int
    unverified: bool


def enumerate_order1_census(max_crossings=6, link_pool=None):
    """Count inequivalent order-1 sums of pool links, grouped as table rows.

    Factor pairs are unordered; the second factor must have more than one
    component so the sum is a handlebody link.  Each row counts the distinct
    (selected orbit, selected orbit) choices -- factor isotopy types with
    selected components determine the sum, so the products need no further
    deduplication.
    """
    if link_pool is None:
        from . import fixtures

        link_pool = fixtures.order1_pool()

    rows = {}
    row_order = []
    for i, f1 in enumerate(link_pool):
        n1 = component_count(f1.diagram)
        for f2 in link_pool[i:]:
            n2 = component_count(f2.diagram)
            c = f1.diagram.crossings + f2.diagram.crossings
            if c > max_crossings or n1 + n2 - 1 < 2:
                continue
            first, second = f1, f2
            if n1 > 1 and (n2 == 1 or f2.diagram.crossings
                           < f1.diagram.crossings):
                first, second = f2, f1
            if f1.name == f2.name:
                k = len(f1.orbits) if f1.orbits else 1
                count = k * (k + 1) // 2
            else:
                count = ((len(first.orbits) if first.orbits else 1)
                         * (len(second.orbits) if second.orbits else 1))
            key = (
                c,
                "%d + %d" % (first.diagram.crossings,
                             second.diagram.crossings),
                "%s o %s" % (first.family, second.family),
            )
            bad = first.orbits is None or second.orbits is None
            if key not in rows:
                rows[key] = (0, False)
                row_order.append(key)
            old_count, old_bad = rows[key]
            rows[key] = (old_count + count, old_bad or bad)

    out = [
        ReducibleRow(c, split, desc, rows[(c, split, desc)][0],
                     rows[(c, split, desc)][1])
        for (c, split, desc) in row_order
    ]
    # stable: rows with equal (crossings, split) keep pool-pair order
    out.sort(key=lambda r: (r.crossings, r.split))
    return out
