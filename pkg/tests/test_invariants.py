"""Counting invariants: hom-class counts, linking, chirality, irreducibility.

Expected values here come from two independent routes wherever possible:
the Burnside centralizer formula for free groups, and explicit orbit
enumeration (count_hom_classes_direct) for everything small.
"""

import pytest

from hlink.diagram import Diagram, apply_move, enumerate_move_sites, MoveError
from hlink.groups import alternating_group, burnside_free_hom_classes
from hlink.planar import PlaneGraph, trivial_theta
from hlink.invariants import (
    ChiralityVerdict,
    chirality_test,
    count_constrained_classes,
    count_hom_classes,
    count_hom_classes_direct,
    irreducibility_test,
    linking_matrix,
)
from hlink.wirtinger import Presentation, presentation_from_diagram

A4 = alternating_group(4)
A5 = alternating_group(5)


def hopf():
    return Diagram(
        PlaneGraph([(0, 1, 2, 3), (4, 5, 6, 7)], [7, 6, 5, 4, 3, 2, 1, 0]),
        (False, False),
    )


def split_circles():
    return Diagram(PlaneGraph([(0, 1), (2, 3)], [1, 0, 3, 2]), ())


def test_one_relator_collapse():
    p = Presentation(1, ((1,),))
    assert count_hom_classes(p, A4) == ("A4", 1)
    assert count_hom_classes(p, A5) == ("A5", 1)


def test_free_groups_match_burnside_formula():
    for rank in (0, 1, 2, 3):
        p = Presentation(rank, ())
        assert count_hom_classes(p, A4).count == burnside_free_hom_classes(A4, rank)
    assert count_hom_classes(Presentation(3, ()), A5).count == 3675


def test_direct_orbit_enumeration_agrees():
    cases = [
        Presentation(1, ((1,),)),
        Presentation(2, ()),
        presentation_from_diagram(Diagram(trivial_theta(), ())),
        presentation_from_diagram(hopf()),
    ]
    for p in cases:
        assert count_hom_classes(p, A4).count == count_hom_classes_direct(p, A4).count


def test_hopf_class_count():
    p = presentation_from_diagram(hopf())
    assert count_hom_classes(p, A4).count == 14  # frozen, confirmed by direct orbits
    assert count_constrained_classes(p, A4, ()) == 14


def test_split_circles_are_free():
    p = presentation_from_diagram(split_circles())
    assert count_hom_classes(p, A4).count == burnside_free_hom_classes(A4, 2)


def test_class_count_is_move_invariant():
    d = hopf()
    base = count_hom_classes(presentation_from_diagram(d), A4).count
    applied = 0
    for step in enumerate_move_sites(d):
        try:
            d2 = apply_move(d, step)
        except MoveError:
            continue
        assert count_hom_classes(presentation_from_diagram(d2), A4).count == base
        applied += 1
    assert applied > 0


def test_hopf_linking():
    lm = linking_matrix(hopf(), 0, 1)
    assert lm.matrix in (((1,),), ((-1,),))
    assert lm.divisors == (1,)
    # mirroring flips the sign but not the divisors
    lmm = linking_matrix(hopf().mirror(), 0, 1)
    assert lmm.matrix[0][0] == -lm.matrix[0][0]
    assert lmm.divisors == (1,)


def test_split_linking_vanishes():
    lm = linking_matrix(split_circles(), 0, 1)
    assert lm.matrix == ((0,),)
    assert lm.divisors == ()


def test_spine_component_contributes_two_cycles():
    d = Diagram(
        PlaneGraph([(0, 1, 2), (3, 4, 5), (6, 7)], [1, 0, 3, 2, 5, 4, 7, 6]), ()
    )
    lm = linking_matrix(d, 0, 1)
    assert lm.matrix == ((0,), (0,))
    assert lm.divisors == ()


def test_linking_argument_errors():
    with pytest.raises(ValueError):
        linking_matrix(hopf(), 0, 0)
    with pytest.raises(ValueError):
        linking_matrix(hopf(), 0, 7)


def test_hopf_chirality_counts():
    for g, expect in ((A4, 4), (A5, 5)):
        v = chirality_test(hopf(), 0, g)
        assert v == ChiralityVerdict("Inconclusive", expect, expect)


def test_mirror_swaps_constraint_counts():
    # abelian example has equal counts; check the swap on both components anyway
    for comp in (0, 1):
        v = chirality_test(hopf(), comp, A4)
        vm = chirality_test(hopf().mirror(), comp, A4)
        assert (v.count, v.mirror_count) == (vm.mirror_count, vm.count)


def test_irreducible_two_component_example():
    # worked arithmetic: 114 + 6*9 + 2*16 = 200, not divisible by 12
    v = irreducibility_test(114, None, 2, 3)
    assert v.conclusion == "Irreducible"
    assert v.conditions == (("trivial-knot-a4", False),)


def test_inconclusive_when_divisible():
    # 310 + 26*9 + 8*16 = 672 = 14 * 48: the p=0 link condition holds
    v = irreducibility_test(310, 1841, 3, 4)
    assert v.conclusion == "Inconclusive"
    assert ("2gen-link-p0", True) in v.conditions
    assert ("trivial-knot-a4", True) in v.conditions
    assert ("trivial-knot-a5", True) in v.conditions


def test_a5_refutes_but_link_condition_blocks():
    v = irreducibility_test(502, 5883, 3, 4)
    assert v.conclusion == "Inconclusive"
    assert ("trivial-knot-a5", False) in v.conditions
    assert ("2gen-link-p0", True) in v.conditions


def test_missing_a5_when_needed():
    # 10 + 54 + 32 = 96 is divisible by 12, so the A5 condition is decisive
    v = irreducibility_test(10, None, 2, 3)
    assert v.conclusion == "Inconclusive"
    assert "ks_a5" in v.reason


def test_rank_component_table_bounds():
    v = irreducibility_test(100, None, 5, 7)
    assert v.conclusion == "Inconclusive"
    assert "no divisibility rule" in v.reason
    with pytest.raises(ValueError):
        irreducibility_test(100, None, 1, 3)


def test_four_generator_two_component_rule():
    # both p in {0, 1} must fail for the verdict to certify
    for ks in range(200):
        v = irreducibility_test(ks, None, 2, 4)
        holds = [(ks + (6 + 16 * p) * 9 + (2 + 6 * p) * 16) % (12 + 24 * p) == 0
                 for p in (0, 1)]
        assert (v.conclusion == "Irreducible") == (not any(holds))
