"""The eight acceptance criteria, one test each.

Each test records its outcome in ``conftest.ACCEPTANCE`` so that the terminal
summary prints one PASS/FAIL line per criterion.
"""

import math
import random
import time
from contextlib import contextmanager
from itertools import combinations

import pytest

from conftest import ACCEPTANCE
from helpers import KEPT_DIAGONALS, random_surgery
from minquad import io
from minquad.basecases import BASE_CASES, check_base, load_base, load_nq8_chain
from minquad.cli import EXIT_OK, main, surfaces_up_to
from minquad.constructor import build, minimal_quadrangulation, replay
from minquad.embedding import SurfaceSpec, certify, face_touch_multiplicity, is_face_simple, is_quadrangular
from minquad.ledger import classify, is_diagonal_of
from minquad.oracle import SearchProblem, search
from minquad.pipelines import (
    NonorientableEven,
    NonorientableOdd,
    OrientableEven,
    OrientableOdd,
    admissible_t_set,
    check_property_p,
)

X = None
N_MAX = 34


@contextmanager
def criterion(k: int, text: str):
    ACCEPTANCE[k] = (False, text)
    start = time.perf_counter()
    yield
    ACCEPTANCE[k] = (True, f"{text} ({time.perf_counter() - start:.1f}s)")


def formula_order(surface: SurfaceSpec) -> int:
    """Closed-form minimal order, computed with floating point as an independent check."""
    if surface == SurfaceSpec(True, 0):
        return 4
    if surface == SurfaceSpec(False, 2):
        return 6
    return math.ceil((5 + math.sqrt(25 - 16 * surface.euler_characteristic)) / 2)


def test_criterion_1_formula(tmp_path, capsys):
    with criterion(1, "minimal orders for Euler genus 0..50"):
        start = time.perf_counter()
        surfaces = surfaces_up_to(50)
        assert len(surfaces) == 26 + 50
        for s in surfaces:
            out = tmp_path / f"{s}.emb"
            assert main(["build", "--surface", str(s), "--out", str(out)]) == EXIT_OK, s
            emb = io.read(out)
            cert = certify(emb)
            assert cert.ok and cert.surface == s, s
            assert emb.n == formula_order(s), s
        assert time.perf_counter() - start < 60


def test_criterion_2_sweep():
    with criterion(2, f"all admissible (n,t) for n <= {N_MAX}"):
        start = time.perf_counter()
        count = 0
        for orientable in (True, False):
            for n in range(4, N_MAX + 1):
                for t in admissible_t_set(n, orientable):
                    if (n, t, orientable) == (5, 0, False):
                        continue
                    emb = build(n, t, orientable).emb
                    m = n * (n - 1) // 2 - t
                    assert (emb.n, emb.m, len(emb.missing_edges())) == (n, m, t)
                    assert emb.orientable == orientable
                    cert = certify(emb)
                    assert cert.ok and cert.chi == n - m // 2 and is_quadrangular(emb)
                    count += 1
        assert count > 300
        assert time.perf_counter() - start < 300


DELTA = {"disc": (2, 4, 2, 0), "handle": (0, 4, 2, -2), "crosscap": (0, 2, 1, -1)}


def test_criterion_3_surgery_accounting():
    with criterion(3, "Δ-accounting over 1200 random surgeries"):
        r = random.Random(31747)
        pool = [load_base(name) for name in ("c4", "cube", "phi5", "k4", "k6e1", "k6e3", "phi7", "phi8", "o8")]
        pool += [build(13, 0, True).emb, build(11, 1, False).emb]
        done = 0
        while done < 1200:
            emb = r.choice(pool)
            kind = ("disc", "handle", "crosscap")[done % 3]
            got = random_surgery(emb, kind, r)
            if got is None:
                continue
            out, step, roles = got
            delta = (out.n - emb.n, out.m - emb.m, out.r - emb.r, out.euler_characteristic - emb.euler_characteristic)
            assert delta == DELTA[kind]
            assert is_quadrangular(out) and out.surface is not None
            if kind == "handle":
                for side, i, j in KEPT_DIAGONALS[roles["type"]]:
                    sq = roles["outer"] if side == "o" else roles["inner"]
                    assert any(is_diagonal_of((sq[i], sq[j]), f) for f in step.created_faces)
            done += 1


def _report(pipe, n_from, stage):
    return next(r for r in pipe.reports if r.n_from == n_from and r.stage == stage)


def _conforms(pipe, n_from, stage, expected, missing):
    rep = _report(pipe, n_from, stage)
    st = rep.state
    assert st.ledger.matches(expected) == [], (stage, st.ledger.dump())
    assert st.emb.missing_edges() == {tuple(sorted(e)) for e in missing}, stage
    assert st.ledger.validate(st.emb) == []
    return st


def test_criterion_4_stage_vectors():
    with criterion(4, "stage diagonal sets in all four pipelines, Property P"):
        # orientable even, 8 -> 16
        pipe = OrientableEven().run(16)
        d8 = [((1, 2), X), ((7, 8), X)]
        _conforms(pipe, 8, "stage 1", d8 + [((3, 4), (9, 4, X, 3)), ((5, 6), (10, 5, X, 6)), ((9, 10), X)], [(9, 10)])
        _conforms(pipe, 8, "stage 2", d8 + [((3, 4), X), ((5, 6), X), ((9, 11), (9, 4, 11, 3)), ((10, 12), (10, 5, 12, 6))],
                  [(9, 10), (11, 12)])
        _conforms(pipe, 8, "stage 3", d8 + [((3, 4), X), ((5, 6), X), ((9, 11), (9, 4, 11, 13)), ((10, 12), (10, 14, 12, 6)),
                                            ((13, 14), X)], [(9, 10), (11, 12), (13, 14)])
        st = _conforms(pipe, 8, "stage 4", [(p, X) for p in [(1, 2), (3, 4), (5, 6), (7, 8), (9, 11), (10, 12), (13, 14), (15, 16)]], [])
        assert classify(list(st.ledger.diagonals), range(1, 17)).kind == "perfect"

        # orientable odd, 5 -> 13
        pipe = OrientableOdd().run(13)
        d5 = [((1, 5), X), ((3, 4), X), ((4, 5), X), ((2, 3), X)]
        _conforms(pipe, 5, "stage 1", d5 + [((6, 7), X)], [(2, 6), (2, 7), (6, 7)])
        _conforms(pipe, 5, "stage 2", d5 + [((6, 8), (6, 2, 8, 1)), ((7, 9), (7, 1, 9, 2))], [(6, 7), (8, 9)])
        _conforms(pipe, 5, "stage 3", d5 + [((6, 8), (6, 10, 8, 1)), ((7, 9), (7, 11, 9, 2)), ((10, 11), X)], [(6, 7)])
        new = [(6, 8), (7, 9), (10, 11), (12, 13)]
        _conforms(pipe, 5, "stage 4", d5 + [(p, X) for p in new], [])
        verts = range(1, 14)
        assert str(classify([(3, 4), (5, 1)] + new, verts)) == "v2-nearly-perfect"
        assert str(classify([(4, 5), (3, 2)] + new, verts)) == "v1-nearly-perfect"

        # nonorientable even, 8 -> 12
        pipe = NonorientableEven().run(12)
        _conforms(pipe, 8, "stage 1", [((1, 2), X), ((7, 8), X), ((3, 4), (3, 10, 4, X)), ((5, 6), (5, 9, 6, X)), ((9, 10), X)],
                  [(5, 7)])
        _conforms(pipe, 8, "stage 2 without optional crosscap(s)",
                  [(p, X) for p in [(1, 2), (3, 4), (5, 6), (7, 8)]] + [((9, 11), (9, 6, 11, 5)), ((10, 12), (10, 4, 12, 3))],
                  [(5, 7), (11, 12)])

        # nonorientable odd, 7 -> 11
        pipe = NonorientableOdd().run(11)
        d7 = [((1, 3), X), ((2, 3), X)]
        _conforms(pipe, 7, "stage 1 without optional crosscap(s)",
                  d7 + [((4, 6), (4, 8, 6, X)), ((5, 7), (5, 9, 7, X)), ((8, 9), (8, 2, 9, X))], [(4, 5), (8, 9)])
        _conforms(pipe, 7, "stage 2 without optional crosscap(s)",
                  d7 + [((4, 6), X), ((5, 7), X), ((8, 10), (8, 6, 10, 4)), ((9, 11), (9, 7, 11, 5))], [(2, 10), (2, 11), (8, 9)])
        assert check_property_p(pipe.state.emb, pipe.state.ledger, 11).ok
        assert [(n, rep.ok) for n, rep in pipe.property_reports] == [(7, True), (11, True)]


def test_criterion_5_oracle_nonexistence():
    with criterion(5, "complete searches: K5 nonorientable, 5-vertex N2, face-simple 7-vertex S0"):
        problems = [
            SearchProblem.complete_minus(5, orientable=False),
            SearchProblem(5, None, target_chi=0, orientable=False),
            SearchProblem(7, None, target_chi=2, orientable=True, face_simple=True),
        ]
        for prob in problems:
            res = search(prob)
            assert res.complete and res.solutions == []
        cube = load_base("cube")
        assert cube.n == 8 and is_face_simple(cube)


def test_criterion_6_face_simplicity():
    with criterion(6, "face-simple orientable outputs, touching faces when m > C(n,2)/2"):
        checked = 0
        for n in range(4, N_MAX + 1):
            for t in admissible_t_set(n, True):
                emb = build(n, t, True).emb
                if emb.min_degree() >= 3:
                    assert is_face_simple(emb), (n, t)
                    checked += 1
        assert checked > 100
        dense = 0
        for s in surfaces_up_to(50):
            emb = minimal_quadrangulation(s).emb
            if 2 * emb.m > emb.n * (emb.n - 1) // 2:
                assert face_touch_multiplicity(emb).max_touch >= 2, s
                dense += 1
        assert dense > 50


def test_criterion_7_base_certification():
    with criterion(7, "stored base embeddings and the nonorientable order-8 chain"):
        load_base.cache_clear()
        load_nq8_chain.cache_clear()
        start = time.perf_counter()
        for name, bc in BASE_CASES.items():
            assert check_base(load_base(name), bc) == []
        chain = load_nq8_chain()
        assert sorted(chain.by_t(), reverse=True) == [8, 4, 2, 0]
        assert set(admissible_t_set(8, False)) <= set(chain.by_t())
        assert time.perf_counter() - start < 1


def _constructed(limit: int):
    out = []
    for n in range(4, N_MAX + 1):
        for orientable in (True, False):
            for t in admissible_t_set(n, orientable):
                if (n, t, orientable) != (5, 0, False):
                    out.append(build(n, t, orientable))
    step = max(1, len(out) // limit)
    return out[::step][:limit]


def test_criterion_8_round_trip(tmp_path):
    with criterion(8, "write/read/write and log replay for 100 embeddings"):
        cons = _constructed(100)
        assert len(cons) == 100
        for k, con in enumerate(cons):
            path = tmp_path / f"{k}.emb"
            io.write(con.emb, path)
            text = path.read_text()
            assert io.dumps(io.read(path)) == text
            log = tmp_path / f"{k}.log"
            log.write_text(con.log_text())
            again = tmp_path / f"{k}.replayed.emb"
            assert main(["replay", str(log), "--out", str(again)]) == EXIT_OK
            assert again.read_text() == text
