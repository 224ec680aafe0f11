import itertools
import json

import pytest

from braidhom import diagram as dg


def trefoil(marked=0):
    return dg.parse_diagram("s1 s1 s1", 2, marked=marked)


# -- parsing ----------------------------------------------------------------

def test_trefoil_matches_standard_picture():
    D = trefoil()
    assert len(D.crossings) == 3 and len(D.edges) == 6
    # e_0, e_1 across the top; e_2, e_3 in the middle; e_4, e_5 below
    assert D.edges[0].segments == ((0, 1),)
    assert D.edges[1].segments == ((0, 2),)
    assert D.edges[2].segments == ((1, 1),)
    assert D.edges[5].segments == ((2, 2),)
    v0 = D.vertex(0)
    assert v0.ports == {"out_left": 0, "out_right": 1,
                        "in_left": 2, "in_right": 3}
    v2 = D.vertex(2)
    assert v2.ports["in_left"] == 0 and v2.ports["in_right"] == 1
    assert D.marked_edge == 0


def test_unknot_single_edge():
    D = dg.parse_diagram("", 1)
    assert len(D.edges) == 1 and not D.vertices
    assert D.edges[0].segments == ((0, 1),)


def test_x1_closure_loops():
    D = dg.parse_diagram("x1", 2)
    assert len(D.singular_vertices) == 1 and len(D.edges) == 2
    v = D.vertex(0)
    assert v.ports["out_left"] == v.ports["in_left"] == 0
    assert v.ports["out_right"] == v.ports["in_right"] == 1


def test_parse_errors():
    with pytest.raises(dg.DiagramError):
        dg.parse_diagram("s5", 3)
    with pytest.raises(dg.DiagramError):
        dg.parse_diagram("y1", 2)
    with pytest.raises(dg.DiagramError):
        dg.parse_diagram("-x1", 2)
    with pytest.raises(dg.DiagramError):
        dg.parse_diagram("s1", 2, marked=7)


def test_edge_ids_stable_and_json():
    D1 = trefoil()
    D2 = trefoil()
    assert D1.to_json() == D2.to_json()
    doc = json.loads(D1.to_json())
    assert doc["schema"] == 1 and doc["strands"] == 2
    assert [e["id"] for e in doc["edges"]] == [0, 1, 2, 3, 4, 5]


def test_vertex_balance_everywhere():
    for word, n in [("s1 s1 s1", 2), ("x1 b2", 2), ("s1 -s2 s1", 3),
                    ("x1 x2 b3", 3)]:
        D = dg.parse_diagram(word, n)
        for v in D.vertices:
            assert len(v.in_edges()) == len(v.out_edges())


# -- Seifert data -----------------------------------------------------------

def test_trefoil_seifert_unmarked():
    sd = dg.seifert_data(dg.parse_diagram("s1 s1 s1", 2))
    assert len(sd.circles) == 2
    assert sd.rotation == -2


def test_identity_braid_rotation():
    sd = dg.seifert_data(dg.parse_diagram("", 3))
    assert sd.rotation == -3 and sd.signs == (-1, -1, -1)


def test_marked_unknot_sign_zero():
    D = dg.parse_diagram("", 1, marked=0)
    sd = dg.seifert_data(D)
    assert sd.signs == (0,) and sd.rotation == 0


def test_marked_trefoil_signs():
    D = trefoil()
    sd = dg.seifert_data(D)
    by_first = {cyc[0]: s for cyc, s in zip(sd.circles, sd.signs)}
    # circle through the marked edge counts 0, the inner circle -1
    assert by_first[0] == 0 and by_first[1] == -1
    assert sd.rotation == -1


def test_strand_rotation_basics():
    assert dg.strand_rotation(trefoil()) == -2
    assert dg.strand_rotation(dg.parse_diagram("", 3)) == -3
    D = trefoil()
    sub = dg.subdiagram(D, {0, 3, 4})   # complement of e1 e2 e5
    assert dg.strand_rotation(sub) == -1


# -- multi-cycles -----------------------------------------------------------

def brute_balanced(D, forbid_full):
    eids = D.edge_ids()
    out = []
    for r in range(len(eids) + 1):
        for comb in itertools.combinations(eids, r):
            Z = set(comb)
            ok = True
            for v in D.vertices:
                ni = sum(1 for e in v.in_edges() if e in Z)
                no = sum(1 for e in v.out_edges() if e in Z)
                if ni != no or (forbid_full and v.is_four_valent
                                and ni + no == 4):
                    ok = False
                    break
            if ok:
                out.append(frozenset(Z))
    return sorted(out, key=lambda s: (len(s), sorted(s)))


@pytest.mark.parametrize("word,strands", [
    ("x1", 2), ("x1 x1", 2), ("b1", 1), ("x1 b1", 2), ("x1 x2", 3),
    ("x1 x1 x1", 2), ("x1 b1 b2", 2),
])
def test_multicycles_against_brute_force(word, strands):
    D = dg.parse_diagram(word, strands)
    got = [m.edges for m in dg.enumerate_multicycles(D)]
    assert got == brute_balanced(D, True)


def test_multicycles_of_x1():
    D = dg.parse_diagram("x1", 2)
    got = {m.edges for m in dg.enumerate_multicycles(D)}
    assert got == {frozenset(), frozenset({0}), frozenset({1})}


def test_multicycles_unknot():
    D = dg.parse_diagram("", 1)
    got = {m.edges for m in dg.enumerate_multicycles(D)}
    assert got == {frozenset(), frozenset({0})}


def test_multicycle_stats_and_rotation():
    D = dg.parse_diagram("x1 x1", 2)
    for m in dg.enumerate_multicycles(D):
        assert m.T1 + m.T2 + m.D1 + m.D2 == sum(
            1 for v in D.vertices if v.is_four_valent
            and sum(1 for e in v.ports.values() if e in m.edges) == 2)
        # rotation equals -(cut count at the top level)
        occ = sum(1 for e in m.edges
                  for (g, _p) in D.edges[e].segments if g == 0)
        assert m.rotation == -occ if m.edges else m.rotation == 0


def test_multicycles_reject_crossings():
    with pytest.raises(dg.DiagramError):
        dg.enumerate_multicycles(trefoil())


# -- labelings ---------------------------------------------------------------

def test_trefoil_admissible_marked_labelings():
    D = trefoil()
    labs = dg.enumerate_labelings(D, require_marked_2=True,
                                  admissible_only=True)
    got = {tuple(sorted(f.edges_one)) for f in labs}
    assert got == {(), (1, 2, 5), (1, 3, 4), (1, 3, 5)}
    turns = {tuple(sorted(f.edges_one)): f.turns for f in labs}
    assert turns[()] == 0
    assert turns[(1, 2, 5)] == 1 and turns[(1, 3, 4)] == 1
    assert turns[(1, 3, 5)] == 3


def test_unknot_marked_labeling_unique():
    D = dg.parse_diagram("", 1, marked=0)
    labs = dg.enumerate_labelings(D, require_marked_2=True)
    assert len(labs) == 1 and labs[0].edges_one == frozenset()


def test_x1_labelings_allow_all_four():
    D = dg.parse_diagram("x1", 2)
    got = {f.edges_one for f in dg.enumerate_labelings(D)}
    assert got == {frozenset(), frozenset({0}), frozenset({1}),
                   frozenset({0, 1})}


def test_labelings_superset_of_multicycles():
    for word, n in [("x1", 2), ("x1 x1", 2), ("x1 b1", 2), ("x1 x2", 3)]:
        D = dg.parse_diagram(word, n)
        cycles = {m.edges for m in dg.enumerate_multicycles(D)}
        labels = {f.edges_one for f in dg.enumerate_labelings(D)}
        assert cycles <= labels


def test_complement_of_cycle_is_cycle():
    D = dg.parse_diagram("s1 s2 s1", 3)
    all_edges = set(D.edges)
    labels = {f.edges_one for f in dg.enumerate_labelings(D)}
    for Z in labels:
        assert frozenset(all_edges - Z) in labels


def test_require_marked_needs_mark():
    with pytest.raises(dg.DiagramError):
        dg.enumerate_labelings(dg.parse_diagram("s1", 2),
                               require_marked_2=True)


# -- subdiagrams --------------------------------------------------------------

def test_subdiagram_of_x1_cycle():
    D = dg.parse_diagram("x1", 2)
    sub = dg.subdiagram(D, set(D.edges) - {0})
    assert set(sub.edges) == {1}
    assert len(sub.vertices) == 1 and sub.vertices[0].kind == "b"
    assert sub.vertices[0].ports == {"in": 1, "out": 1}


def test_subdiagram_empty_keep_is_identity():
    D = dg.parse_diagram("x1 b1", 2)
    sub = dg.subdiagram(D, set(D.edges))
    assert set(sub.edges) == set(D.edges)
    assert [v.kind for v in sub.vertices] == [v.kind for v in D.vertices]


def test_trefoil_class_discards_crossings():
    D = trefoil()
    sub = dg.subdiagram(D, {1, 3, 5})
    assert not sub.vertices
    assert dg.strand_rotation(sub) == -1
    assert len(dg.seifert_circles(sub)) == 1


def test_class_partition_and_strand_additivity():
    for word, n in [("x1 x1", 2), ("x1 x2", 3), ("x1 b1 b2", 2)]:
        D = dg.parse_diagram(word, n)
        r = dg.strand_rotation(D)
        for f in dg.enumerate_labelings(D):
            one = dg.subdiagram(D, f.edges_one)
            two = dg.subdiagram(D, set(D.edges) - set(f.edges_one))
            assert set(one.edges) | set(two.edges) == set(D.edges)
            assert not (set(one.edges) & set(two.edges))
            assert dg.strand_rotation(one) + dg.strand_rotation(two) == r


def test_adjacent_sign_sums_match_writhe_identity():
    # s(D_{f,1}) = w(D) - w(D_{f,2}) and symmetrically
    for word, n, mark in [("s1 s1 s1", 2, 0), ("s1 -s2", 3, 0),
                          ("s1 s2 s1", 3, 0)]:
        D = dg.parse_diagram(word, n, marked=mark)
        w = D.writhe()
        for f in dg.enumerate_labelings(D, require_marked_2=True):
            one = dg.subdiagram(D, f.edges_one)
            two = dg.subdiagram(D, set(D.edges) - set(f.edges_one))
            w1 = one.writhe()
            w2 = two.writhe()
            assert dg.adjacent_sign_sum(D, f.edges_one, 1) == w - w2
            assert dg.adjacent_sign_sum(D, f.edges_one, 2) == w - w1


def test_as_braid_word_roundtrip_full_diagram():
    D = trefoil()
    word, strands = dg.as_braid_word(D)
    assert word == "s1 s1 s1" and strands == 2
