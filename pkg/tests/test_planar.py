import pytest

from hlink.planar import (PlaneGraph, canonical_code, classify_double_arcs,
                          edge_connectivity, enumerate_plane_graphs, has_loop,
                          trivial_theta)
from oracles import brute_force_plane_graph_codes


def test_theta_is_spherical():
    t = trivial_theta()
    assert t.n_vertices == 2
    assert t.n_edges == 3
    assert sorted(len(f) for f in t.faces()) == [2, 2, 2]
    assert t.genus() == 0


def test_euler_holds_for_all_generated():
    for q in range(0, 5):
        for g in enumerate_plane_graphs(q):
            assert g.n_vertices - g.n_edges + len(g.faces()) == 2
            assert g.n_trivalent == 2
            assert g.n_quadrivalent == q
            assert not has_loop(g)


def test_counts_small():
    assert len(enumerate_plane_graphs(0)) == 1
    assert len(enumerate_plane_graphs(1)) == 0
    assert len(enumerate_plane_graphs(2)) == 1
    assert len(enumerate_plane_graphs(3)) == 3
    assert len(enumerate_plane_graphs(4)) == 10


def test_q_out_of_range():
    with pytest.raises(ValueError):
        enumerate_plane_graphs(7)
    with pytest.raises(ValueError):
        enumerate_plane_graphs(-1)


def test_edge_connectivity_examples():
    assert edge_connectivity(trivial_theta()) == 3
    # two triangles joined by a single edge (bridge endpoints trivalent,
    # remaining corners 2-valent)
    bridge = PlaneGraph(
        [(0, 1, 2), (3, 4), (5, 6), (7, 8, 9), (10, 11), (12, 13)],
        [3, 6, 7, 0, 5, 4, 1, 2, 10, 13, 8, 12, 11, 9])
    assert edge_connectivity(bridge) == 1
    # a 4-cycle through four 2-valent markers
    square = PlaneGraph([(0, 1), (2, 3), (4, 5), (6, 7)],
                        [3, 4, 7, 0, 1, 6, 5, 2])
    assert edge_connectivity(square) == 2


def test_canonical_code_relabeling_invariance():
    for g in enumerate_plane_graphs(3):
        # relabel darts by a rotation of every vertex's dart tuple
        rots = [rot[1:] + rot[:1] for rot in g.vertices]
        g2 = PlaneGraph(rots, g.alpha)
        assert canonical_code(g2) == canonical_code(g)


def test_canonical_code_reflection_invariance():
    for q in (2, 3, 4):
        for g in enumerate_plane_graphs(q):
            assert canonical_code(g.reflected()) == canonical_code(g)


def test_mirror_flag_refines():
    with_mirror = enumerate_plane_graphs(4)
    without = enumerate_plane_graphs(4, mirror_dedup=False)
    assert len(without) >= len(with_mirror)
    # chiral embeddings split into two orientation classes
    codes = set(canonical_code(g) for g in without)
    assert codes == set(canonical_code(g) for g in with_mirror)


def test_double_arc_classification():
    theta = trivial_theta()
    verdicts = classify_double_arcs(theta)
    assert verdicts and all(v[-1] == "forbidden" for v in verdicts)
    g = enumerate_plane_graphs(2)[0]  # the unique Q=2 graph has double arcs
    verdicts = classify_double_arcs(g)
    assert verdicts and all(v[-1] == "bigon-quadri" for v in verdicts)


def test_text_roundtrip():
    for g in enumerate_plane_graphs(3):
        line = g.to_text()
        g2 = PlaneGraph.from_text(line)
        assert g2.to_text() == line
        assert canonical_code(g2) == canonical_code(g)


def test_json_roundtrip():
    g = enumerate_plane_graphs(2)[0]
    g2 = PlaneGraph.from_json_obj(g.to_json_obj())
    assert canonical_code(g2) == canonical_code(g)


def test_brute_force_oracle_agrees_small_q():
    for q in (0, 1, 2):
        oracle = brute_force_plane_graph_codes(q)
        fast = set(canonical_code(g) for g in enumerate_plane_graphs(q))
        assert oracle == fast
