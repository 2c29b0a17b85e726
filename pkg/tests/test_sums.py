"""Connected sums, their symmetry bookkeeping, and the composite censuses.

Expected class counts are frozen from runs cross-checked two ways: direct
orbit enumeration agrees with the Burnside profile formula on every free
product tested, and the split-union values match the free-product
predictions computed from the factors alone.
"""

import pytest

from hlink.diagram import (
    Diagram,
    component_count,
    delete_component,
    diagram_connectivity,
    disjoint_union,
)
from hlink.fixtures import (
    chain3,
    chain4,
    hopf,
    l4a1,
    order1_pool,
    pool_graph,
    star4,
    summand_links,
    trefoil_hopf,
    unknot,
)
from hlink.groups import alternating_group
from hlink.invariants import (
    count_hom_classes,
    count_hom_classes_direct,
    free_product_classes_from_profiles,
    hom_count_profile,
)
from hlink.planar import trivial_theta
from hlink.sums import (
    SumSite,
    component_orbit_reps,
    diagram_automorphisms,
    edge_orbit_reps,
    enumerate_composites,
    enumerate_order1_census,
    order1_sum,
    order2_sum,
)
from hlink.wirtinger import Presentation, presentation_from_diagram, tietze_simplify

A4 = alternating_group(4)
A5 = alternating_group(5)


def ks(d, table):
    p = tietze_simplify(presentation_from_diagram(d))
    return count_hom_classes(p, table).count


def profile(d, table):
    p = tietze_simplify(presentation_from_diagram(d))
    return hom_count_profile(p, table)


def theta():
    return Diagram(trivial_theta(), ())


# ---------------------------------------------------------------------------
# the sum operations


def test_order2_sum_adds_crossings_and_components():
    g = pool_graph("G2_1")
    for link, n_link in ((hopf(), 2), (l4a1(), 2)):
        d = order2_sum(g, SumSite("G2_1", 0), link, SumSite("link", 0))
        assert d.crossings == g.crossings + link.crossings
        assert component_count(d) == 1 + n_link - 1


def test_order2_sum_site_errors():
    with pytest.raises(ValueError):
        order2_sum(hopf(), SumSite("a", 99), hopf(), SumSite("b", 0))
    with pytest.raises(ValueError):
        order2_sum(hopf(), SumSite("a", 0), hopf(), SumSite("b", -1))


def test_order2_splice_of_unknot_is_neutral():
    g = pool_graph("G2_1")
    d = order2_sum(g, SumSite("G2_1", 0), unknot(), SumSite("unknot", 0))
    assert d.crossings == g.crossings
    assert ks(d, A4) == ks(g, A4) == 22


def test_clasp_handcuff_hopf_composite():
    # the smallest nontrivial composite; both splice orientations agree
    g = pool_graph("G2_1")
    for flip in (False, True):
        d = order2_sum(g, SumSite("G2_1", 0, flip), hopf(), SumSite("Hopf", 0))
        assert component_count(d) == 2
        assert ks(d, A4) == 114
        assert ks(d, A5) == 600


def test_order1_sum_is_a_bridge():
    d = order1_sum(unknot(), SumSite("unknot", 0), hopf(), SumSite("Hopf", 0))
    assert d.crossings == 2
    assert component_count(d) == 2
    assert diagram_connectivity(d) == 1


def test_order1_sum_component_errors():
    with pytest.raises(ValueError):
        order1_sum(unknot(), SumSite("unknot", 5), hopf(), SumSite("Hopf", 0))
    with pytest.raises(ValueError):
        order1_sum(unknot(), SumSite("unknot", 0), hopf(), SumSite("Hopf", 2))


# ---------------------------------------------------------------------------
# free-product predictions


def test_free_product_formula_matches_direct_count():
    d = order1_sum(unknot(), SumSite("unknot", 0), hopf(), SumSite("Hopf", 0))
    p = tietze_simplify(presentation_from_diagram(d))
    direct = count_hom_classes_direct(p, A4).count
    z = hom_count_profile(Presentation(1, ()), A4)
    predicted = free_product_classes_from_profiles((z, profile(hopf(), A4)), A4)
    assert direct == predicted == count_hom_classes(p, A4).count == 82


def test_free_product_formula_on_double_bridge():
    d = order1_sum(hopf(), SumSite("Hopf", 0), hopf(), SumSite("Hopf", 1))
    h = profile(hopf(), A4)
    assert ks(d, A4) == free_product_classes_from_profiles((h, h), A4) == 310


def test_free_product_anchors():
    z = hom_count_profile(Presentation(1, ()), A4)
    f2 = hom_count_profile(Presentation(2, ()), A4)
    assert free_product_classes_from_profiles((f2, z), A4) == 178
    assert free_product_classes_from_profiles((z, z), A4) == 22
    # dual route: split unions counted directly
    assert ks(disjoint_union(theta(), unknot()), A4) == 178
    g = pool_graph("G4_1")
    assert free_product_classes_from_profiles((profile(g, A4), z), A4) == 274
    assert ks(disjoint_union(g, unknot()), A4) == 274


# ---------------------------------------------------------------------------
# symmetries and site orbits


def test_diagram_automorphisms_are_structure_maps():
    for d, count in ((theta(), 12), (hopf(), 8), (pool_graph("G2_1"), 4)):
        sk = d.skeleton
        nd = len(sk.alpha)
        sigma = [0] * nd
        for rot in sk.vertices:
            for i, x in enumerate(rot):
                sigma[x] = rot[(i + 1) % len(rot)]
        inv = [0] * nd
        for x, y in enumerate(sigma):
            inv[y] = x
        autos = diagram_automorphisms(d)
        assert len(autos) == count
        assert tuple(range(nd)) in autos
        for pi in autos:
            assert sorted(pi) == list(range(nd))
            assert [pi[sk.alpha[x]] for x in range(nd)] \
                == [sk.alpha[pi[x]] for x in range(nd)]
            # rotations are preserved up to reversing the sphere orientation
            conj = [pi[sigma[x]] for x in range(nd)]
            assert conj in ([sigma[pi[x]] for x in range(nd)],
                            [inv[pi[x]] for x in range(nd)])
        # closure under composition
        auto_set = set(autos)
        for a in autos:
            for b in autos:
                assert tuple(a[b[x]] for x in range(nd)) in auto_set


def test_edge_orbits():
    assert edge_orbit_reps(theta()) == [0]
    assert edge_orbit_reps(hopf()) == [0]
    # clasp handcuff: bridge edge, loop edges, clasp edges
    assert edge_orbit_reps(pool_graph("G2_1")) == [0, 1, 8]


def test_component_orbits_of_chain():
    assert component_orbit_reps(chain3()) == [0, 1]
    assert len(component_orbit_reps(hopf())) == 1


def test_summand_reversibility_certificates():
    # the fixture marks every summand link reversible; check that both
    # splice orientations of each one produce the same class counts
    g = pool_graph("G2_1")
    for name, link, reversible in summand_links():
        assert reversible, name
        a = order2_sum(g, SumSite("G2_1", 0, False), link, SumSite(name, 0))
        b = order2_sum(g, SumSite("G2_1", 0, True), link, SumSite(name, 0))
        assert ks(a, A4) == ks(b, A4), name


# ---------------------------------------------------------------------------
# component deletion


def test_delete_component_of_hopf():
    assert ks(delete_component(hopf(), 0), A4) == 4  # a bare circle


def test_delete_component_of_chain():
    c3 = chain3()
    end, middle = component_orbit_reps(c3)
    # dropping an end leaves a two-ring clasp; dropping the middle splits
    values = {ks(delete_component(c3, end), A4),
              ks(delete_component(c3, middle), A4)}
    assert values == {14, 22}


def test_delete_component_resurrects_bare_circles():
    d = delete_component(l4a1(), 0)
    assert d.crossings == 0
    assert component_count(d) == 1
    assert ks(d, A4) == 4


def test_delete_component_errors():
    with pytest.raises(ValueError):
        delete_component(theta(), 0)  # spine, not a circle
    with pytest.raises(ValueError):
        delete_component(hopf(), 2)


# ---------------------------------------------------------------------------
# the order-1 census


EXPECTED_ORDER1_ROWS = [
    (2, "0 + 2", "unknot o Hopf", 1),
    (4, "0 + 4", "unknot o L4a1", 1),
    (4, "0 + 4", "unknot o Hopf#Hopf", 2),
    (4, "2 + 2", "Hopf o Hopf", 1),
    (5, "0 + 5", "unknot o Whitehead", 1),
    (5, "0 + 5", "unknot o trefoil#Hopf", 2),
    (5, "3 + 2", "trefoil o Hopf", 1),
    (6, "0 + 6", "unknot o L6a1", 1),
    (6, "0 + 6", "unknot o L6a2", 1),
    (6, "0 + 6", "unknot o L6a3", 1),
    (6, "0 + 6", "unknot o L6a4", 1),
    (6, "0 + 6", "unknot o L6a5", 1),
    (6, "0 + 6", "unknot o L6n1", 1),
    (6, "0 + 6", "unknot o L4a1#Hopf", 3),
    (6, "0 + 6", "unknot o (Hopf#Hopf)#Hopf", 4),
    (6, "2 + 4", "Hopf o L4a1", 1),
    (6, "2 + 4", "Hopf o Hopf#Hopf", 2),
    (6, "4 + 2", "K4a1 o Hopf", 1),
]


def test_order1_census_rows():
    rows = enumerate_order1_census()
    assert [(r.crossings, r.split, r.description, r.count) for r in rows] \
        == EXPECTED_ORDER1_ROWS
    assert not any(r.unverified for r in rows)
    totals = {}
    for r in rows:
        totals[r.crossings] = totals.get(r.crossings, 0) + r.count
    assert totals == {2: 1, 4: 4, 5: 4, 6: 17}


def test_order1_census_flags_missing_orbits():
    pool = order1_pool()
    pool = [f._replace(orbits=None) if f.name == "Hopf" else f for f in pool]
    rows = enumerate_order1_census(link_pool=pool)
    flagged = {r.description for r in rows if r.unverified}
    assert "unknot o Hopf" in flagged
    assert "Hopf o Hopf" in flagged
    assert "unknot o L4a1" not in flagged


def test_order1_pool_orbit_annotations():
    got = {f.name: len(f.orbits) for f in order1_pool()}
    assert got == {
        "unknot": 1, "Hopf": 1, "trefoil": 1, "K4a1": 1, "L4a1": 1,
        "Whitehead": 1, "Hopf#Hopf": 2, "trefoil#Hopf": 2,
        "L6a1": 1, "L6a2": 1, "L6a3": 1, "L6a4": 1, "L6a5": 1, "L6n1": 1,
        "L4a1#Hopf": 3, "chain4": 2, "star4": 2,
    }


def test_four_ring_links_are_distinct():
    assert component_count(chain4()) == component_count(star4()) == 4
    assert ks(chain4(), A4) == 226
    assert ks(star4(), A4) == 296
    # knotting one Hopf ring changes the count, so the composites are
    # genuinely new links
    assert ks(trefoil_hopf(), A4) > ks(hopf(), A4)


# ---------------------------------------------------------------------------
# the composite census (small slices; the full run lives in acceptance)


def test_composites_clasp_handcuff_slice():
    log = []
    out = enumerate_composites(
        max_crossings=4,
        graph_pool={"G2_1": pool_graph("G2_1")},
        link_pool=[("Hopf", hopf(), True)],
        with_a5=False,
        log=log,
    )
    assert len(out) == 1
    only = out[0]
    assert (only.crossings, only.components, only.ks_a4) == (4, 2, 114)
    assert only.trace == "G2_1 # Hopf@0"
    assert any(reason == "simplified by moves" for _, reason in log)


def test_composites_theta_needs_three_rings():
    pool = {"G0_1": pool_graph("G0_1")}
    links = [("Hopf", hopf(), True)]
    assert enumerate_composites(graph_pool=pool, link_pool=links,
                                with_a5=False) == []
    out = enumerate_composites(graph_pool=pool, link_pool=links,
                               max_link_summands=3, with_a5=False)
    assert [(c.crossings, c.components, c.ks_a4) for c in out] \
        == [(6, 4, 1242)]
