import pytest
from hypothesis import given, strategies as st

from minquad.constructor import (
    InadmissibleError,
    NonexistenceError,
    all_pairs,
    build,
    format_log,
    minimal_order,
    minimal_quadrangulation,
    pair_for_surface,
    parse_log,
    pipeline_for,
    replay,
)
from minquad.embedding import SurfaceSpec, certify
from minquad.ledger import Ledger
from minquad.pipelines import NonorientableOdd, admissible_t_set, check_property_p


def test_admissible_sets():
    assert admissible_t_set(8, True) == [0, 4]
    assert admissible_t_set(7, False) == [1, 3]
    assert admissible_t_set(4, True) == [] and admissible_t_set(6, True) == []
    assert admissible_t_set(5, True) == [0]


@pytest.mark.parametrize("surface,n", [("S0", 4), ("N1", 4), ("N2", 6), ("S1", 5), ("N3", 6), ("S4", 8), ("N5", 7), ("S2", 7)])
def test_minimal_order(surface, n):
    assert minimal_order(SurfaceSpec.parse(surface)) == n


@given(st.integers(0, 400), st.booleans())
def test_minimal_order_is_least_solution(eg, orientable):
    if orientable and eg % 2:
        return
    s = SurfaceSpec(orientable, eg // 2 if orientable else eg) if eg or orientable else SurfaceSpec(True, 0)
    chi = s.euler_characteristic
    n = minimal_order(s)
    if chi < 2 and not (chi == 0 and not s.orientable):
        # quadrangulation needs m = 2(n - chi) <= C(n, 2); n is the least such order >= 4
        assert 2 * (n - chi) <= n * (n - 1) // 2
        assert n == 4 or 2 * (n - 1 - chi) > (n - 1) * (n - 2) // 2


@pytest.mark.parametrize("surface,pair", [("S0", (4, 2)), ("N1", (4, 0)), ("S1", (5, 0)), ("N3", (6, 1)), ("N2", (6, 3)), ("S2", (7, 3)), ("S3", (8, 4))])
def test_pair_for_surface(surface, pair):
    assert pair_for_surface(SurfaceSpec.parse(surface)) == pair


@pytest.mark.parametrize("n,t,orientable", [(4, 2, True), (4, 0, False), (5, 0, True), (6, 3, False), (7, 1, False), (8, 0, True), (9, 2, True), (11, 1, False)])
def test_build_small(n, t, orientable):
    con = build(n, t, orientable)
    assert con.certificate.ok
    assert (con.emb.n, len(con.emb.missing_edges()), con.emb.orientable) == (n, t, orientable)
    assert replay(con.base, con.steps) == con.emb


def test_k5_nonorientable_is_nonexistent():
    with pytest.raises(NonexistenceError):
        build(5, 0, False)


@pytest.mark.parametrize("n,t,orientable", [(8, 2, True), (6, 0, True), (9, 9, False), (3, 0, True)])
def test_inadmissible(n, t, orientable):
    with pytest.raises(InadmissibleError):
        build(n, t, orientable)


def test_minimal_quadrangulation_checks():
    con = minimal_quadrangulation(SurfaceSpec.parse("N7"))
    assert con.certificate.ok and con.surface == SurfaceSpec(False, 7)
    names = [name for name, _ in con.certificate.checks]
    assert any(name.startswith("n = minimal order") for name in names)


def test_log_round_trip():
    con = build(13, 0, True)
    base, steps = parse_log(con.log_text())
    assert base == con.base and format_log(base, steps) == con.log_text()
    with pytest.raises(ValueError):
        parse_log("disc outer=1,2,3,4 diag=1,3 new=9,10\n")


def test_all_pairs_skips_nonexistent():
    pairs = all_pairs(8, False)
    assert (5, 0) not in pairs and (7, 1) in pairs and (8, 2) in pairs


@pytest.mark.parametrize("orientable,n", [(True, 16), (True, 13), (False, 12), (False, 11)])
def test_pipeline_reports_are_clean(orientable, n):
    pipe = pipeline_for(n, orientable)
    assert pipe.reports and all(r.ok for r in pipe.reports)


def test_snapshots_cover_descending_t():
    pipe = pipeline_for(12, False)
    for t in admissible_t_set(12, False):
        snap = pipe.snapshots[(12, t)]
        assert len(snap.emb.missing_edges()) == t


def test_property_p_holds_along_the_induction():
    pipe = NonorientableOdd().run(19)
    assert [n for n, _ in pipe.property_reports] == [7, 11, 15, 19]
    assert all(rep.ok for _, rep in pipe.property_reports)


def test_property_p_negative_control():
    st = NonorientableOdd().run(11).state
    assert check_property_p(st.emb, st.ledger).ok
    # an embedding without its diagonal ledger fails (b), and claiming the (c) square breaks (c)
    assert not check_property_p(st.emb, Ledger(False)).diagonals_ok
    led = st.ledger.copy()
    led.release("P")
    sq = next(f for f in st.emb.face_tuples() if sorted(f)[:1] == [2] and {10, 11} <= set(f))
    led.diagonals[(2, sq[2] if sq[0] == 2 else sq[0])] = sq
    assert not check_property_p(st.emb, led).square_ok


def test_wrong_order_fails_property_p():
    emb = build(13, 0, True).emb
    rep = check_property_p(emb, Ledger(False))
    assert not rep.ok and "3 mod 4" in rep.details[0]


def test_certificates_match_requested_surface():
    con = build(12, 2, False)
    cert = certify(con.emb)
    assert cert.surface == SurfaceSpec.from_euler(12 - con.emb.m // 2, False)
