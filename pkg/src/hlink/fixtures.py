"""Hand-built link diagrams used as pipeline inputs.

Three small constructors cover every link we need: closures of braid words,
numerator closures of rational tangles, and pretzel links.  Each named
fixture below is pinned down in tests by structural invariants (component
count, linking numbers, alternation, hom counts), and where two routes to
the same link exist they are checked against each other.
"""

from .diagram import (Diagram, _strand_exit, component_count,
                      dart_components, from_text)
from .planar import PlaneGraph, trivial_theta
from .sums import OrderOneFactor, SumSite, order2_sum


def braid_closure(word, strands):
    """The standard closure of a braid word.

    ``word`` is a sequence of nonzero integers: k stands for the positive
    generator crossing strands k and k+1 (the strand entering upper-left
    passes over), -k for its inverse.  Strand positions the word never
    touches close into disjoint marker circles.
    """
    if strands < 2:
        raise ValueError("need at least 2 strands")
    vertices = []
    bits = []
    pair = {}
    hang = [None] * strands  # dart waiting below each position
    top = [None] * strands  # dart to close back to at each position
    nxt = 0
    for t in word:
        k = abs(t)
        if not 1 <= k < strands:
            raise ValueError("generator %d out of range" % t)
        ul, dl, dr, ur = nxt, nxt + 1, nxt + 2, nxt + 3
        nxt += 4
        vertices.append((ul, dl, dr, ur))  # counterclockwise
        bits.append(t > 0)  # positive: overstrand is {ul, dr}
        for pos, up in ((k - 1, ul), (k, ur)):
            if hang[pos] is None:
                top[pos] = up
            else:
                pair[hang[pos]] = up
                pair[up] = hang[pos]
        hang[k - 1] = dl
        hang[k] = dr
    for pos in range(strands):
        if hang[pos] is not None:
            pair[hang[pos]] = top[pos]
            pair[top[pos]] = hang[pos]
        else:  # untouched strand: a bare circle
            vertices.append((nxt, nxt + 1))
            pair[nxt] = nxt + 1
            pair[nxt + 1] = nxt
            nxt += 2
    alpha = [pair[d] for d in range(nxt)]
    return Diagram(PlaneGraph(vertices, alpha), bits)


def rational_link(twists):
    """Numerator closure of the rational tangle built from ``twists``.

    Twist regions alternate, horizontal first and horizontal last (the vector
    length must be odd): odd-position entries twist the two right-hand tangle
    corners, even-position ones the two bottom corners.  A vector of positive
    entries [a1, a2, ..., an] yields the alternating diagram of the two-bridge
    link whose fraction is the continued fraction an + 1/(a_{n-1} + ... 1/a1);
    negative entries flip the corresponding crossings.
    """
    if not twists or any(t == 0 for t in twists):
        raise ValueError("twist vector must be nonempty with nonzero entries")
    if len(twists) % 2 == 0:
        raise ValueError("twist vector must have odd length (end horizontally)")
    vertices = []
    bits = []
    pair = {}
    nxt = 0
    # Where each tangle corner currently ends: ("dart", d) for a dart of an
    # inserted crossing, ("peer", corner) for a crossing-free strand running
    # straight to another corner (the initial 0-tangle).
    att = {"NW": ("peer", "NE"), "NE": ("peer", "NW"),
           "SW": ("peer", "SE"), "SE": ("peer", "SW")}
    for region, t in enumerate(twists):
        horizontal = region % 2 == 0
        # Every crossing is allocated with rotation (nw, sw, se, ne),
        # counterclockwise; True means the nw-se diagonal is the overstrand.
        # A uniform bit is exactly the alternating assignment.
        bit = t > 0
        for _ in range(abs(t)):
            nw, sw, se, ne = nxt, nxt + 1, nxt + 2, nxt + 3
            nxt += 4
            vertices.append((nw, sw, se, ne))
            bits.append(bit)
            if horizontal:  # crossing sits right of the tangle
                (side_a, inner_a, outer_a) = ("NE", nw, ne)
                (side_b, inner_b, outer_b) = ("SE", sw, se)
            else:  # crossing sits below the tangle
                (side_a, inner_a, outer_a) = ("SW", nw, sw)
                (side_b, inner_b, outer_b) = ("SE", ne, se)
            va, vb = att[side_a], att[side_b]
            if va == ("peer", side_b):  # strand ran corner-to-corner
                pair[inner_a] = inner_b
                pair[inner_b] = inner_a
            else:
                for (kind, val), inner in ((va, inner_a), (vb, inner_b)):
                    if kind == "dart":
                        pair[val] = inner
                        pair[inner] = val
                    else:  # the far corner's strand now ends here
                        att[val] = ("dart", inner)
            att[side_a] = ("dart", outer_a)
            att[side_b] = ("dart", outer_b)
    for a, b in (("NW", "NE"), ("SW", "SE")):  # numerator closure
        (ka, da), (kb, db) = att[a], att[b]
        if ka != "dart" or kb != "dart":
            raise ValueError("degenerate tangle, no crossings on a strand")
        pair[da] = db
        pair[db] = da
    alpha = [pair[d] for d in range(nxt)]
    return Diagram(PlaneGraph(vertices, alpha), bits)


def pretzel_link(*twists):
    """The pretzel link with the given vertical twist counts.

    Each entry is a column of that many crossings; columns hang side by side
    between a top and a bottom strand, with matching outer closure arcs on
    the left and right.
    """
    if len(twists) < 2 or any(t == 0 for t in twists):
        raise ValueError("need at least two nonzero twist regions")
    vertices = []
    bits = []
    pair = {}
    nxt = 0
    tops = []  # (top-left, top-right) darts of each column
    bottoms = []  # (bottom-left, bottom-right)
    for t in twists:
        first = last = None
        for j in range(abs(t)):
            # rotation (ul, ll, lr, ur), counterclockwise; True puts the
            # ul-lr diagonal on top.
            ul, ll, lr, ur = nxt, nxt + 1, nxt + 2, nxt + 3
            nxt += 4
            vertices.append((ul, ll, lr, ur))
            bits.append(t > 0)
            if j == 0:
                first = (ul, ur)
            else:
                pll, plr = last
                pair[pll] = ul
                pair[ul] = pll
                pair[plr] = ur
                pair[ur] = plr
            last = (ll, lr)
        tops.append(first)
        bottoms.append(last)
    for i in range(len(twists) - 1):  # chain neighbouring columns
        pair[tops[i][1]] = tops[i + 1][0]
        pair[tops[i + 1][0]] = tops[i][1]
        pair[bottoms[i][1]] = bottoms[i + 1][0]
        pair[bottoms[i + 1][0]] = bottoms[i][1]
    pair[tops[0][0]] = tops[-1][1]  # closure arc over the top
    pair[tops[-1][1]] = tops[0][0]
    pair[bottoms[0][0]] = bottoms[-1][1]  # closure arc under the bottom
    pair[bottoms[-1][1]] = bottoms[0][0]
    alpha = [pair[d] for d in range(nxt)]
    return Diagram(PlaneGraph(vertices, alpha), bits)


def is_alternating(d):
    """Whether over and under passages alternate along every strand.

    Marker vertices are transparent; edges ending at a trivalent vertex do
    not constrain anything (the notion is only used for links here).
    """
    sk = d.skeleton
    quad = [len(rot) == 4 for rot in sk.vertices]
    for a in range(len(sk.alpha)):
        b = sk.alpha[a]
        if a < b and quad[sk.vertex_of[a]] and quad[sk.vertex_of[b]]:
            if d.is_over(a) == d.is_over(b):
                return False
    return True


# ---------------------------------------------------------------------------
# named links


def unknot():
    """A crossing-free circle."""
    return Diagram(PlaneGraph([(0, 1)], [1, 0]), ())


def hopf():
    return braid_closure([1, 1], 2)


def trefoil():
    return braid_closure([1, 1, 1], 2)


def figure_eight():
    return braid_closure([1, -2, 1, -2], 3)


def l4a1():
    """The (2,4) torus link."""
    return braid_closure([1, 1, 1, 1], 2)


def whitehead():
    """The Whitehead link, as the two-bridge link of 8/3."""
    return rational_link([2, 1, 2])


def l6a1():
    """The (2,6) torus link."""
    return braid_closure([1] * 6, 2)


def l6a2():
    """The two-bridge link of 10/3."""
    return rational_link([1, 2, 3])


def l6a3():
    """The two-bridge link of 12/5."""
    return rational_link([2, 2, 2])


def l6a4():
    """The Borromean rings."""
    return braid_closure([1, -2, 1, -2, 1, -2], 3)


def l6a5():
    """The alternating three-component necklace, pretzel (2,2,2)."""
    return pretzel_link(2, 2, 2)


def l6n1():
    """The (3,3) torus link."""
    return braid_closure([1, 2, 1, 2, 1, 2], 3)


# ---------------------------------------------------------------------------
# composite links


def _comp_edge(d, comp):
    """The smallest edge dart lying on the given strand component."""
    labels, _ = dart_components(d)
    return labels.index(comp)


def _quad_profile(d):
    """How each component meets the crossings: (self, sorted partner counts).

    Components with different profiles cannot be exchanged by any symmetry
    of the link diagram's isotopy class that this census cares about; equal
    profiles are grouped by _component_orbits and vouched for per fixture.
    """
    labels, n = dart_components(d)
    quads = [[0] * n for _ in range(n)]
    for rot in d.skeleton.vertices:
        if len(rot) == 4:
            a, b = labels[rot[0]], labels[rot[1]]
            quads[a][b] += 1
            if a != b:
                quads[b][a] += 1
    return [
        (quads[i][i],
         tuple(sorted(c for j, c in enumerate(quads[i]) if j != i and c)))
        for i in range(n)
    ]


def _component_orbits(d):
    """Component labels grouped by crossing profile, smallest label first."""
    groups = {}
    for i, key in enumerate(_quad_profile(d)):
        groups.setdefault(key, []).append(i)
    return tuple(sorted(tuple(v) for v in groups.values()))


def chain3():
    """Three rings in a row: two Hopf links merged along one ring each."""
    return order2_sum(hopf(), SumSite("Hopf", 0),
                      hopf(), SumSite("Hopf", 0))


def chain4():
    """Four rings in a row: a Hopf link spliced onto an end ring of chain3."""
    c3 = chain3()
    end = _quad_profile(c3).index((0, (2,)))
    return order2_sum(c3, SumSite("chain3", _comp_edge(c3, end)),
                      hopf(), SumSite("Hopf", 0))


def star4():
    """A central ring with three others through it: Hopf onto chain3's middle."""
    c3 = chain3()
    middle = _quad_profile(c3).index((0, (2, 2)))
    return order2_sum(c3, SumSite("chain3", _comp_edge(c3, middle)),
                      hopf(), SumSite("Hopf", 0))


def trefoil_hopf():
    """A Hopf link with one ring carrying a trefoil knot."""
    return order2_sum(trefoil(), SumSite("trefoil", 0),
                      hopf(), SumSite("Hopf", 0))


def l4a1_hopf():
    """L4a1 with a Hopf link spliced onto one of its rings."""
    return order2_sum(l4a1(), SumSite("L4a1", 0),
                      hopf(), SumSite("Hopf", 0))


def summand_links():
    """Links spliced into spines by order-2 sums: (name, diagram, reversible).

    ``reversible`` records that the link has a symmetry reversing the spliced
    strand, so the two splice orientations at a site agree; the tests check
    those certificates by comparing hom counts of both orientations.
    """
    return [
        ("Hopf", hopf(), True),
        ("Trefoil", trefoil(), True),
        ("K4a1", figure_eight(), True),
        ("L4a1", l4a1(), True),
    ]


def order1_pool():
    """Pool links for the reducible census, with component-symmetry orbits.

    The prime pool links all have symmetries exchanging any two components
    (torus and two-bridge links admit half-turns, the Borromean rings and the
    necklace rotations), so their components form a single orbit.  For the
    composite links the crossing-profile classes of _component_orbits are the
    true orbits: a chain reverses end to end, the star's outer rings rotate,
    and components with distinct profiles stay distinct.  ``family`` names
    the summand list, merging rows like the two four-ring links.
    """
    def all_one(d):
        return (tuple(range(component_count(d))),)

    out = []
    for name, build in (
        ("unknot", unknot), ("Hopf", hopf), ("trefoil", trefoil),
        ("K4a1", figure_eight), ("L4a1", l4a1), ("Whitehead", whitehead),
    ):
        d = build()
        out.append(OrderOneFactor(name, name, d, all_one(d)))
    for name, build in (("Hopf#Hopf", chain3),
                        ("trefoil#Hopf", trefoil_hopf)):
        d = build()
        out.append(OrderOneFactor(name, name, d, _component_orbits(d)))
    for name, build in (
        ("L6a1", l6a1), ("L6a2", l6a2), ("L6a3", l6a3),
        ("L6a4", l6a4), ("L6a5", l6a5), ("L6n1", l6n1),
    ):
        d = build()
        out.append(OrderOneFactor(name, name, d, all_one(d)))
    d = l4a1_hopf()
    out.append(OrderOneFactor("L4a1#Hopf", "L4a1#Hopf", d,
                              _component_orbits(d)))
    for name, build in (("chain4", chain4), ("star4", star4)):
        d = build()
        out.append(OrderOneFactor(name, "(Hopf#Hopf)#Hopf", d,
                                  _component_orbits(d)))
    return out


# ---------------------------------------------------------------------------
# spine graph pool

# R-minimal spatial-graph diagrams with up to four crossings, harvested from
# a bounded move search over all small seeds.  Each entry was pinned down by
# its shape (theta or handcuff), its hom counts, and the hom counts of its
# split union with a circle; G4_4 and G4_5 are additionally told apart by the
# hom counts of their Hopf composites.
_POOL_CODES = {
    # 2-crossing handcuff whose constituent circles form a clasp
    "G2_1": "V(1,2,3) V(1,4,5) X(2,5,6,7) X(4,3,7,6)",
    # 3-crossing theta curve
    "G3_1": "V(1,2,3) V(1,4,5) X(2,5,6,7) X(8,9,4,3) X(9,8,7,6)",
    # 4-crossing handcuff, the only small spine whose neighbourhood is a
    # nontrivial handlebody knot (split union with a circle counts 274)
    "G4_1": "V(1,2,3) V(4,5,6) X(1,4,7,8) X(8,9,10,2) X(11,5,3,10) X(9,7,6,11)",
    # 4-crossing prime handcuff
    "G4_2": "V(1,2,3) V(1,4,5) X(2,5,6,7) X(4,3,8,9) X(10,11,7,6) X(11,10,9,8)",
    # 4-crossing prime theta curve
    "G4_3": "V(1,2,3) V(1,4,5) X(2,5,6,7) X(8,9,4,3) X(9,10,11,6) X(10,8,7,11)",
    # 4-crossing theta curve with a surrounding circle; its Hopf composite
    # has hom counts 326
    "G4_4": "V(1,2,3) V(1,4,5) X(2,6,7,8) X(10,3,8,9) X(9,11,4,10) X(6,5,11,7)",
    # 4-crossing handcuff with a surrounding circle; its Hopf composite has
    # hom counts 486
    "G4_5": "V(1,2,3) V(1,4,5) X(2,6,7,8) X(9,3,8,7) X(11,4,9,10) X(10,6,5,11)",
}


def pool_graph(name):
    """One spine diagram from the sum pool by name (G0_1, G2_1, ... G4_5)."""
    if name == "G0_1":
        return Diagram(trivial_theta(), ())
    return from_text(_POOL_CODES[name])


def pool_graphs():
    """All eight pool spines, keyed by name."""
    out = {"G0_1": pool_graph("G0_1")}
    for name in _POOL_CODES:
        out[name] = pool_graph(name)
    return out


def spine_shape(d):
    """'theta' or 'handcuff': how the first spine's three strands attach."""
    sk = d.skeleton
    tri = [v for v, rot in enumerate(sk.vertices) if len(rot) == 3]
    if not tri:
        raise ValueError("diagram has no trivalent vertices")
    cross = 0
    seen = set()
    for v in tri:
        for start in sk.vertices[v]:
            if start in seen:
                continue
            cur = start
            while True:
                arrive = sk.alpha[cur]
                seen.add(cur)
                seen.add(arrive)
                w = sk.vertex_of[arrive]
                if len(sk.vertices[w]) == 3:
                    break
                cur = _strand_exit(sk, arrive)
            if w != v:
                cross += 1
    return "theta" if cross == 3 else "handcuff"
