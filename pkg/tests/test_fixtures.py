"""Structural checks for the hand-built link and spine fixtures."""

import pytest

from hlink.diagram import (R_MOVES, canonical_diagram_code, component_count,
                           disjoint_union, reduce_search)
from hlink.fixtures import (braid_closure, figure_eight, hopf, is_alternating,
                            l4a1, l6a1, l6a2, l6a3, l6a4, l6a5, l6n1,
                            pool_graph, pool_graphs, pretzel_link,
                            rational_link, spine_shape, trefoil, unknot,
                            whitehead)
from hlink.groups import alternating_group
from hlink.invariants import count_hom_classes, linking_matrix
from hlink.wirtinger import presentation_from_diagram

A4 = alternating_group(4)
A5 = alternating_group(5)


def ks(d, table):
    return count_hom_classes(presentation_from_diagram(d), table).count


# builder, crossings, components, alternating, hom classes into A4 and A5
# (counts computed by the verified counter and frozen)
LINKS = [
    (unknot, 0, 1, True, 4, 5),
    (hopf, 2, 2, True, 14, 22),
    (trefoil, 3, 1, True, 6, 10),
    (figure_eight, 4, 1, True, 6, 9),
    (l4a1, 4, 2, True, 16, 36),
    (whitehead, 5, 2, True, 18, 36),
    (l6a1, 6, 2, True, 20, 41),
    (l6a2, 6, 2, True, 18, 38),
    (l6a3, 6, 2, True, 16, 51),
    (l6a4, 6, 3, True, 90, 326),
    (l6a5, 6, 3, True, 60, 161),
    (l6n1, 6, 3, False, 56, 152),
]


def test_link_fixture_invariants():
    for build, c, n, alt, k4, k5 in LINKS:
        d = build()
        assert d.crossings == c, build.__name__
        assert component_count(d) == n, build.__name__
        assert is_alternating(d) == alt, build.__name__
        assert ks(d, A4) == k4, build.__name__
        assert ks(d, A5) == k5, build.__name__


def test_link_fixtures_pairwise_distinct():
    seen = {}
    for build, c, n, alt, k4, k5 in LINKS:
        key = (c, n, alt, k4, k5)
        assert key not in seen, (build.__name__, seen.get(key))
        seen[key] = build.__name__


def test_linking_numbers():
    expected = {
        hopf: [1],
        l4a1: [2],
        whitehead: [0],
        l6a1: [3],
        l6a2: [3],
        l6a3: [2],
        l6a4: [0, 0, 0],
        l6a5: [1, 1, 1],
        l6n1: [1, 1, 1],
    }
    for build, want in expected.items():
        d = build()
        n = component_count(d)
        got = sorted(
            abs(linking_matrix(d, i, j).matrix[0][0])
            for i in range(n)
            for j in range(i + 1, n)
        )
        assert got == sorted(want), build.__name__


def test_two_construction_routes_agree():
    def code(d):
        return canonical_diagram_code(d, mirror=True)

    assert code(rational_link([2])) == code(hopf())
    assert code(rational_link([3])) == code(trefoil())
    assert code(rational_link([4])) == code(l4a1())
    assert code(rational_link([1, 1, 2])) == code(figure_eight())
    assert code(whitehead()) == code(braid_closure([1, -2, 1, -2, 1], 3))


def test_braid_closure_validation():
    with pytest.raises(ValueError):
        braid_closure([1], 1)
    with pytest.raises(ValueError):
        braid_closure([2], 2)
    # an untouched strand closes into a disjoint circle
    d = braid_closure([1, 1], 3)
    assert component_count(d) == 3
    assert d.skeleton.n_vertices == 3  # two crossings and one marker


def test_rational_link_validation():
    with pytest.raises(ValueError):
        rational_link([])
    with pytest.raises(ValueError):
        rational_link([2, 2])  # even length ends on a vertical twist
    with pytest.raises(ValueError):
        rational_link([2, 0, 2])
    # fraction 1/(1 + 1/1) + 2 = 5/2 with a redundant leading twist: still
    # a 4-crossing knot
    d = rational_link([1, 1, 2])
    assert d.crossings == 4
    assert component_count(d) == 1


def test_pretzel_validation():
    with pytest.raises(ValueError):
        pretzel_link(2)
    with pytest.raises(ValueError):
        pretzel_link(2, 0, 2)
    d = pretzel_link(2, 2)
    assert d.crossings == 4
    assert component_count(d) == 2


POOL = [
    # name, crossings, components, shape, hom classes into A4 and A5
    ("G0_1", 0, 1, "theta", 22, 77),
    ("G2_1", 2, 1, "handcuff", 22, 77),
    ("G3_1", 3, 1, "theta", 22, 77),
    ("G4_1", 4, 1, "handcuff", 30, 156),
    ("G4_2", 4, 1, "handcuff", 22, 77),
    ("G4_3", 4, 1, "theta", 22, 77),
    ("G4_4", 4, 2, "theta", 82, 375),
    ("G4_5", 4, 2, "handcuff", 82, 375),
]


def test_pool_shapes_and_counts():
    for name, c, n, shape, k4, k5 in POOL:
        d = pool_graph(name)
        assert d.crossings == c, name
        assert component_count(d) == n, name
        assert spine_shape(d) == shape, name
        assert ks(d, A4) == k4, name
        assert ks(d, A5) == k5, name


def test_pool_graphs_distinct():
    codes = {}
    for name, d in pool_graphs().items():
        code = canonical_diagram_code(d, mirror=True)
        assert code not in codes, (name, codes.get(code))
        codes[code] = name


def test_pool_split_unions():
    # split unions with a circle, counted into A4: the trivial spine gives
    # the free rank-3 value, and only G4_1 carries a nontrivial handlebody
    # knot; G4_4 and G4_5 tie here and are separated by their composites.
    circle = unknot()
    assert ks(disjoint_union(pool_graph("G2_1"), circle), A4) == 178
    assert ks(disjoint_union(pool_graph("G4_1"), circle), A4) == 274
    assert ks(disjoint_union(pool_graph("G4_4"), circle), A4) == 694
    assert ks(disjoint_union(pool_graph("G4_5"), circle), A4) == 694


def test_pool_reps_are_r_minimal():
    for name in ("G2_1", "G3_1"):
        verdict = reduce_search(pool_graph(name), moves=R_MOVES)
        assert verdict.kind == "survivor", name
