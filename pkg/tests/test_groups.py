import numpy as np
import pytest

from hlink.groups import (GroupTable, alternating_group,
                          burnside_free_hom_classes, group_by_name,
                          load_group, save_group)


def test_a4_basic_structure():
    a4 = alternating_group(4)
    assert a4.order == 12
    assert len(a4.class_reps) == 4
    assert sorted(a4.class_sizes) == [1, 3, 4, 4]
    # identity is element 0 and forms its own class
    assert a4.class_id[0] == 0
    assert a4.class_sizes[0] == 1


def test_a5_basic_structure():
    a5 = alternating_group(5)
    assert a5.order == 60
    assert len(a5.class_reps) == 5
    assert sorted(a5.class_sizes) == [1, 12, 12, 15, 20]


def test_class_centralizer_product():
    for k in (4, 5):
        g = alternating_group(k)
        for rep, cent in zip(g.class_reps, g.centralizer):
            assert len(cent) * g.class_sizes[g.class_id[rep]] == g.order


def test_inverses():
    a5 = alternating_group(5)
    for a in range(60):
        assert a5.mul[a, a5.inv[a]] == 0
        assert a5.mul[a5.inv[a], a] == 0


def test_burnside_free_group_counts():
    a4 = alternating_group(4)
    a5 = alternating_group(5)
    # rank 0: only the trivial hom; rank 1: one per conjugacy class
    assert burnside_free_hom_classes(a4, 0) == 1
    assert burnside_free_hom_classes(a4, 1) == 4
    assert burnside_free_hom_classes(a5, 1) == 5
    # free groups of rank 2..4 (complement groups of split handlebody links);
    # values are (1/|G|) sum over classes of |cl|*|C|^rank, computed by hand:
    # A4 rank 2: (144 + 3*16 + 8*9)/12 = 22
    # A4 rank 3: (1728 + 3*64 + 8*27)/12 = 178
    # A5 rank 3: (216000 + 15*64 + 20*27 + 24*125)/60 = 3675
    assert burnside_free_hom_classes(a4, 2) == 22
    assert burnside_free_hom_classes(a4, 3) == 178
    assert burnside_free_hom_classes(a5, 3) == 3675
    assert burnside_free_hom_classes(a4, 4) == 1846
    assert burnside_free_hom_classes(a5, 4) == 216341


def test_group_file_roundtrip(tmp_path):
    a4 = alternating_group(4)
    path = tmp_path / "a4.grp"
    save_group(a4, str(path))
    back = load_group(str(path))
    assert back.order == 12
    assert np.array_equal(back.mul, a4.mul)
    assert len(back.class_reps) == 4


def test_group_by_name(tmp_path):
    assert group_by_name("a4").order == 12
    assert group_by_name("A5").order == 60
    path = tmp_path / "c3.grp"
    mul = np.array([[0, 1, 2], [1, 2, 0], [2, 0, 1]])
    save_group(GroupTable(mul, name="c3"), str(path))
    assert group_by_name("file:%s" % path).order == 3
    with pytest.raises(ValueError):
        group_by_name("s3")


def test_bad_table_rejected():
    mul = np.array([[0, 1], [1, 1]])
    with pytest.raises(ValueError):
        GroupTable(mul)
