import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import KEPT_DIAGONALS, random_surgery
from minquad.basecases import load_base
from minquad.embedding import SurfaceSpec, canonical_face, face_set
from minquad.ledger import is_diagonal_of
from minquad.surgery import (
    HANDLE_PATTERNS,
    HandleType,
    SurgeryError,
    SurgeryStep,
    apply_step,
    crosscap_addition,
    crosscap_removal,
    disc_addition,
    handle_addition,
    handle_chords,
    handle_faces,
    relabel,
)

DELTA = {"disc": (2, 4, 2, 0), "handle": (0, 4, 2, -2), "crosscap": (0, 2, 1, -1)}
POOL = ["c4", "cube", "phi5", "k4", "k6e1", "k6e3", "phi7", "phi8", "o8"]


def _delta(before, after):
    return (
        after.n - before.n,
        after.m - before.m,
        after.r - before.r,
        after.euler_characteristic - before.euler_characteristic,
    )


def test_chords_per_type():
    assert handle_chords(HandleType.I) == [(("o", 1), ("i", 2)), (("o", 1), ("i", 4)), (("o", 3), ("i", 2)), (("o", 3), ("i", 4))]
    assert handle_chords(HandleType.IV) == [(("o", 1), ("i", 1)), (("o", 2), ("i", 4)), (("o", 3), ("i", 3)), (("o", 4), ("i", 2))]
    for htype, faces in HANDLE_PATTERNS.items():
        assert len(faces) == 4 and len(handle_chords(htype)) == 4


def test_kept_diagonals_match_patterns():
    # every kept pair must be opposite corners in some created square
    o, i = (1, 2, 3, 4), (5, 6, 7, 8)
    for htype, kept in KEPT_DIAGONALS.items():
        created = handle_faces(htype, o, i)
        for side, a, b in kept:
            sq = o if side == "o" else i
            assert any(is_diagonal_of((sq[a], sq[b]), f) for f in created), (htype, side)


@pytest.mark.parametrize("htype", ["I", "II", "III"])
def test_handle_on_opposite_cube_faces(cube, htype):
    out, step = handle_addition(cube, (1, 2, 3, 4), (5, 8, 7, 6), HandleType(htype))
    assert out.surface == SurfaceSpec(True, 1)
    assert out.m == 16 and out.r == 8
    assert {canonical_face(f) for f in step.created_faces} <= face_set(out, directed=True)


def test_type_iv_refuses_existing_edge(cube):
    # o1 i1 = 1-5 is a cube edge
    with pytest.raises(SurgeryError):
        handle_addition(cube, (1, 2, 3, 4), (5, 8, 7, 6), HandleType.IV)


def test_handle_rejects_anticlockwise_square(cube):
    with pytest.raises(SurgeryError):
        handle_addition(cube, (4, 3, 2, 1), (5, 8, 7, 6), HandleType.I)


def test_handle_needs_two_faces(cube):
    with pytest.raises(SurgeryError):
        handle_addition(cube, (1, 2, 3, 4), (3, 4, 1, 2), HandleType.I)


def test_disc_on_four_cycle():
    c4 = load_base("c4")
    f = c4.face_tuples()[0]
    out, step = disc_addition(c4, f)
    assert (out.n, out.m, out.r) == (6, 8, 4)
    assert out.surface == SurfaceSpec(True, 0)
    assert step.new_vertices == (5, 6)
    with pytest.raises(SurgeryError):
        disc_addition(c4, f, (5, 7))


def test_crosscap_then_removal_restores_faces(cube):
    f = (1, 2, 3, 4)
    crossed, _ = crosscap_addition(cube, f)
    assert (crossed.m, crossed.r, crossed.surface) == (14, 7, SurfaceSpec(False, 1))
    back, step = crosscap_removal(crossed, (1, 3), (2, 4))
    assert face_set(back) == face_set(cube)
    assert step.removed_edges == ((1, 3), (2, 4))


def test_crosscap_refuses_existing_diagonal(phi5):
    with pytest.raises(SurgeryError):
        crosscap_addition(phi5, phi5.face_tuples()[0])


def test_crosscap_removal_rejects_non_crossing(phi5):
    with pytest.raises(SurgeryError):
        crosscap_removal(phi5, (1, 2), (3, 4))


def test_relabel_step(cube):
    mapping = {v: 9 - v for v in range(1, 9)}
    out, step = relabel(cube, mapping)
    assert step.to_line() == "relabel map=8,7,6,5,4,3,2,1"
    again, _ = apply_step(cube, SurgeryStep.from_line(step.to_line()))
    assert again == out
    with pytest.raises(SurgeryError):
        relabel(cube, {1: 2})


@pytest.mark.parametrize(
    "line",
    [
        "disc outer=1,2,3,4 diag=1,3 new=9,10",
        "handle type=III outer=1,2,3,4 inner=5,8,7,6",
        "crosscap face=1,2,3,4",
        "crosscap_removal edges=1-7,4-5",
        "relabel map=2,1,3",
    ],
)
def test_step_lines_round_trip(line):
    assert SurgeryStep.from_line(line).to_line() == line


def test_step_line_rejects_wrong_disc_diagonal():
    with pytest.raises(ValueError):
        SurgeryStep.from_line("disc outer=1,2,3,4 diag=2,4 new=9,10")


@settings(max_examples=300)
@given(st.sampled_from(POOL), st.sampled_from(["disc", "handle", "crosscap"]), st.integers(0, 2**32 - 1))
def test_random_surgery_accounting(name, kind, seed):
    emb = load_base(name)
    got = random_surgery(emb, kind, random.Random(seed))
    if got is None:
        return
    out, step, roles = got
    assert _delta(emb, out) == DELTA[kind]
    assert out.surface is not None
    assert all(len(f) == 4 and len(set(f)) == 4 for f in out.face_tuples())
    faces = face_set(out)
    assert all(canonical_face(f, directed=False) in faces for f in step.created_faces)
    if kind == "disc":
        f, (a, b) = roles["square"], roles["new"]
        assert any(is_diagonal_of((f[0], f[2]), g) for g in out.face_tuples())
        assert any(is_diagonal_of((a, b), g) for g in out.face_tuples())
    if kind == "handle":
        for side, i, j in KEPT_DIAGONALS[roles["type"]]:
            sq = roles["outer"] if side == "o" else roles["inner"]
            assert any(is_diagonal_of((sq[i], sq[j]), g) for g in step.created_faces)
        if emb.orientable:
            assert out.orientable
    if kind == "crosscap":
        assert not out.orientable
    # replaying the logged step gives the same rotation system
    again, _ = apply_step(emb, SurgeryStep.from_line(step.to_line()))
    assert again == out

