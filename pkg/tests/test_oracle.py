from itertools import combinations, permutations

import pytest
from hypothesis import given, settings, strategies as st

from minquad.basecases import load_base
from minquad.embedding import SurfaceSpec, certify, is_face_simple, matches_pattern
from minquad.oracle import SearchInconclusive, SearchProblem, enumerate_quadrilaterals, find_one, search

CUBE_EDGES = {(1, 2), (2, 3), (3, 4), (1, 4), (5, 6), (6, 7), (7, 8), (5, 8), (1, 5), (2, 6), (3, 7), (4, 8)}


def brute_force_four_cycles(n, edges):
    """Count 4-cycles by checking every ordered 4-tuple; each cycle is seen 8 times."""
    adj = {frozenset(e) for e in edges}
    hits = 0
    for quad in permutations(range(1, n + 1), 4):
        if all(frozenset((quad[i], quad[(i + 1) % 4])) in adj for i in range(4)):
            hits += 1
    return hits // 8


def test_quadrilateral_counts():
    k4 = set(combinations(range(1, 5), 2))
    k5 = set(combinations(range(1, 6), 2))
    assert len(enumerate_quadrilaterals(4, k4)) == 3
    assert len(enumerate_quadrilaterals(5, k5)) == 15
    # the cube has six 4-cycles, all of them facial
    assert len(enumerate_quadrilaterals(8, CUBE_EDGES)) == brute_force_four_cycles(8, CUBE_EDGES) == 6


@settings(max_examples=40)
@given(st.integers(4, 7).flatmap(lambda n: st.tuples(st.just(n), st.sets(st.sampled_from(list(combinations(range(1, n + 1), 2)))))))
def test_quadrilateral_count_matches_brute_force(case):
    n, edges = case
    quads = enumerate_quadrilaterals(n, set(edges))
    assert len(quads) == brute_force_four_cycles(n, edges)
    assert len(set(quads)) == len(quads)


def test_k5_orientable_solutions_are_tori():
    res = search(SearchProblem.complete_minus(5, orientable=True))
    assert res.complete and len(res.solutions) == 12
    assert all(e.surface == SurfaceSpec(True, 1) for e in res.solutions)


def test_k5_has_no_nonorientable_quadrangulation():
    res = search(SearchProblem.complete_minus(5, orientable=False))
    assert res.complete and res.solutions == []


def test_no_five_vertex_quadrangulation_of_n2():
    res = search(SearchProblem(5, None, target_chi=0, orientable=False))
    assert res.complete and res.solutions == []


def test_no_face_simple_seven_vertex_sphere():
    res = search(SearchProblem(7, None, target_chi=2, face_simple=True))
    assert res.complete and res.solutions == []


def test_cube_is_a_face_simple_eight_vertex_sphere():
    emb = find_one(SearchProblem(8, None, target_chi=2, face_simple=True))
    assert emb is not None and emb.n == 8 and is_face_simple(emb)
    assert emb.surface == SurfaceSpec(True, 0)


@pytest.mark.parametrize("missing,count,surface", [(((5, 6),), 32, "N3"), (((1, 3), (2, 6), (3, 4)), 6, "N2")])
def test_k6_minus_edges(missing, count, surface):
    res = search(SearchProblem.complete_minus(6, missing, orientable=False))
    assert res.complete and len(res.solutions) == count
    assert {str(e.surface) for e in res.solutions} == {surface}


def test_required_faces_are_honoured():
    pats = [(1, 2, None, 4), (3, 5, 2, None)]
    res = search(SearchProblem.complete_minus(5, orientable=True, required_faces=pats))
    assert res.solutions
    for emb in res.solutions:
        for pat in pats:
            assert any(matches_pattern(f, pat, directed=True) for f in emb.face_tuples())


def test_solutions_are_sound():
    for emb in search(SearchProblem.complete_minus(6, ((5, 6),), orientable=False), limit=5).solutions:
        cert = certify(emb)
        assert cert.ok and cert.missing_edges == [(5, 6)]


def test_node_cap_is_reported():
    with pytest.raises(SearchInconclusive):
        search(SearchProblem.complete_minus(8, orientable=True, target_chi=-6), node_cap=3)


def test_problem_text_round_trip():
    prob = SearchProblem.complete_minus(7, ((1, 6),), target_chi=-3, orientable=False, required_faces=[(2, 6, None, 7)])
    text = prob.to_text()
    assert "graph K7 minus {1-6}" in text and "require-face v2 v6 x v7" in text
    again = SearchProblem.from_text(text)
    assert again.to_text() == text


@pytest.mark.parametrize("bad", ["n 5\n", "graph Q5\n", "n 5\ngraph K6 minus {}\n", "graph K5 minus {}\ncolour red\n"])
def test_problem_text_errors(bad):
    with pytest.raises((ValueError, KeyError)):
        SearchProblem.from_text(bad)


def test_odd_edge_count_rejected():
    with pytest.raises(ValueError):
        SearchProblem.complete_minus(5, ((1, 2),)).face_count()


