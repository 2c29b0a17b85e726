"""Arc presentations, peripheral words, and Tietze simplification."""

import pytest

from hlink.diagram import Diagram
from hlink.planar import PlaneGraph, trivial_theta
from hlink.wirtinger import (
    Presentation,
    free_reduce,
    inverse_word,
    load_presentation,
    peripheral_words,
    presentation_from_diagram,
    save_presentation,
    tietze_simplify,
)


def circle():
    return Diagram(PlaneGraph([(0, 1)], [1, 0]), ())


def hopf():
    return Diagram(
        PlaneGraph([(0, 1, 2, 3), (4, 5, 6, 7)], [7, 6, 5, 4, 3, 2, 1, 0]),
        (False, False),
    )


def kinked_circle(over):
    # one crossing whose strands belong to the same circle (a curl)
    return Diagram(PlaneGraph([(0, 1, 2, 3)], [1, 0, 3, 2]), (over,))


def test_word_helpers():
    assert inverse_word((1, -2, 3)) == (-3, 2, -1)
    assert free_reduce((1, 2, -2, -1, 3)) == (3,)
    assert free_reduce(()) == ()


def test_circle_presentation():
    p = presentation_from_diagram(circle())
    assert p.n_gens == 1
    assert p.relators == ()
    assert p.peripherals == ((0, (1,), ()),)
    assert p.peripheral(0) == ((1,), ())


def test_theta_presentation():
    p = presentation_from_diagram(Diagram(trivial_theta(), ()))
    assert p.n_gens == 3
    assert len(p.relators) == 2
    assert p.peripherals == ()
    q = tietze_simplify(p)
    assert q.n_gens == 2
    assert q.relators == ()


def test_kink_writhe_cancels_longitude():
    for over in (False, True):
        p = presentation_from_diagram(kinked_circle(over))
        m, l = p.peripheral(0)
        assert len(m) == 1
        assert l == (), "curl writhe must cancel the over-arc letter"


def test_hopf_presentation_and_peripherals():
    p = presentation_from_diagram(hopf())
    assert p.n_gens == 2
    assert len(p.relators) == 2
    q = tietze_simplify(p)
    assert q.n_gens == 2
    assert len(q.relators) == 1
    r = q.relators[0]
    # the surviving relator is a commutator
    assert sorted(abs(t) for t in r) == [1, 1, 2, 2] and sum(r) == 0
    for comp in (0, 1):
        m, l = q.peripheral(comp)
        other = 2 if comp == 0 else 1
        assert [abs(t) for t in m] in ([1], [2])
        assert [abs(t) for t in l] == [other] or l == ()


def test_peripheral_words_error_paths():
    with pytest.raises(ValueError):
        peripheral_words(Diagram(trivial_theta(), ()), 0)  # spine component
    with pytest.raises(ValueError):
        peripheral_words(circle(), 5)


def test_abelianization_rank_guard():
    # rank = circles + total genus; both fixtures exercise the assert
    presentation_from_diagram(Diagram(trivial_theta(), ()))
    presentation_from_diagram(
        Diagram(PlaneGraph([(0, 1, 2), (3, 4, 5)], [1, 0, 3, 2, 5, 4]), ())
    )


def test_tietze_eliminates_unique_generators():
    # x3 occurs once in the last relator, so it must be eliminated
    p = Presentation(3, ((1, 2, -1, -2), (3, 1, 2)))
    q = tietze_simplify(p)
    assert q.n_gens == 2
    assert q.relators == ((1, 2, -1, -2),)


def test_presentation_validation():
    with pytest.raises(ValueError):
        Presentation(1, ((2,),))  # letter out of range
    with pytest.raises(ValueError):
        Presentation(1, ((0,),))
    with pytest.raises(ValueError):
        Presentation(2, (), peripherals=((0, (3,), ()),))


def test_file_roundtrip(tmp_path):
    p = presentation_from_diagram(hopf())
    path = tmp_path / "hopf.pres"
    save_presentation(p, path)
    q = load_presentation(path)
    assert q.n_gens == p.n_gens
    assert q.relators == p.relators
    assert q.peripherals == p.peripherals


def test_load_rejects_garbage(tmp_path):
    path = tmp_path / "bad.pres"
    path.write_text("gens x\n")
    with pytest.raises(ValueError):
        load_presentation(path)
    path.write_text("1 2 3\n")
    with pytest.raises(ValueError):
        load_presentation(path)
