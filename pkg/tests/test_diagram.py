from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cforge.braid import BraidWord, parse_braid, random_braid
from cforge.diagram import (
    Diagram,
    DiagramError,
    DTCode,
    NotRealizableError,
    braid_to_diagram,
    braid_to_pd,
    diagram_to_pd,
    dt_is_prime_like,
    extract_dt,
    parse_dt,
    parse_pd,
    pd_to_diagram,
    realize_dt,
)
from cforge.invariants import alexander, determinant, fingerprint
from cforge.poly import parse_poly

K12A153_DT = "[26,-30,-24,-18,-2,-28,-32,-34,-8,-6,-22,-20,-16,-10,-12,-4,-14]"
K12N239_DT = "[20,24,12,10,16,-18,30,8,6,34,2,32,14,28,26,4,22,36]"
TREFOIL_PD = "X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]"


def test_parse_dt_examples():
    assert len(parse_dt(K12A153_DT)) == 17
    assert len(parse_dt("[4,6,2]")) == 3
    with pytest.raises(DiagramError):
        parse_dt("[4,4,2]")
    with pytest.raises(DiagramError):
        parse_dt("[3,6,2]")
    with pytest.raises(DiagramError):
        parse_dt("4,6,2")


def test_realize_trefoil():
    d = realize_dt("[4,6,2]")
    assert d.n_crossings == 3
    assert determinant(alexander(d)) == 3


def test_scrambled_dt_is_not_realizable():
    # [4,8,10,2,6] with two entries swapped
    with pytest.raises(NotRealizableError):
        realize_dt("[4,10,8,2,6]")


def test_k12n239_dt_matches_table(table):
    d = realize_dt(K12N239_DT)
    assert d.n_crossings == 18
    m = table.lookup(fingerprint(d)).unique
    assert m is not None and m.record.name == "K12n239"


def test_trefoil_pd_counts():
    d = pd_to_diagram(parse_pd(TREFOIL_PD))
    assert d.n_crossings == 3 and d.n_arcs == 6
    assert len(d.faces) == 5
    assert d.n_crossings - d.n_arcs + len(d.faces) == 2
    assert alexander(d) == parse_poly("t^2 - t + 1")


def test_crossingless_diagram_conventions():
    d = Diagram((), ())
    assert len(diagram_to_pd(d)) == 0
    assert d.n_components() == 1 and d.is_knot()
    # a round circle splits the sphere into two faces
    assert len(d.faces) == 2 and d.euler_characteristic() == 2
    assert parse_pd("[]") == diagram_to_pd(d)


def test_pd_parse_errors():
    with pytest.raises(DiagramError):
        parse_pd("X[1,2,3]")
    with pytest.raises(DiagramError):
        parse_pd("X[1,2,3,4]")
    with pytest.raises(DiagramError):
        parse_pd("nonsense")


def test_pd_parse_nested_list_form():
    a = parse_pd(TREFOIL_PD)
    b = parse_pd("[[1,5,2,4],[3,1,4,6],[5,3,6,2]]")
    assert a == b


def test_braid_to_pd_examples(table, witnesses):
    one = braid_to_pd(BraidWord(2, (1,)))
    assert len(one) == 1
    assert fingerprint(pd_to_diagram(one)) == fingerprint(BraidWord(1, ()))
    tre = braid_to_pd(BraidWord(2, (1, 1, 1)))
    assert len(tre) == 3
    assert alexander(pd_to_diagram(tre)) == parse_poly("t^2 - t + 1")
    src = next(p for p in witnesses["pulldown"] if p["source"] == "K12a905")
    b = parse_braid(src["source_braid"])
    d = braid_to_diagram(b)
    assert d.n_crossings == len(b)
    assert fingerprint(d) == table["K12a905"].fingerprint


knots = st.integers(0, 10**6).map(lambda s: random_braid(s, (2, 6), (1, 16)))


@given(knots)
def test_pd_roundtrip_and_planarity(b):
    d = braid_to_diagram(b)
    assert d.is_planar()
    if d.n_crossings:
        assert d.n_arcs == 2 * d.n_crossings
        for arcs in diagram_to_pd(d).crossings:
            assert len(arcs) == 4
    back = pd_to_diagram(diagram_to_pd(d))
    assert back.crossings == d.canonical().crossings
    assert back.over_in == d.over_in


@given(knots)
def test_dt_roundtrip(b):
    d = braid_to_diagram(b)
    dt = extract_dt(d)
    if not dt_is_prime_like(dt):
        return
    r = realize_dt(dt)
    assert r.n_crossings == d.n_crossings
    assert extract_dt(r) == dt
    fp, rfp = fingerprint(d), fingerprint(r)
    assert rfp == fp or rfp == fp.mirror()


@given(knots)
def test_braid_and_diagram_routes_agree(b):
    assert alexander(b) == alexander(braid_to_diagram(b))


def test_dt_chirality_matches_corpus(corpus):
    # the corpus braid and DT code must give the same knot, not its mirror
    for row in corpus:
        if not row["dt"] or not row["braid"]:
            continue
        d = realize_dt(row["dt"])
        b = parse_braid(row["braid"])
        assert fingerprint(d) == fingerprint(b), row["name"]


def test_mirror_and_crossing_change():
    d = realize_dt("[4,6,2]")
    assert d.mirror().writhe() == -d.writhe()
    assert d.change_crossings([0]).signs[0] == -d.signs[0]


def test_reduced_removes_nugatory_crossings():
    d = braid_to_diagram(BraidWord(3, (1, 1, 1, 2)))
    assert d.reduced().n_crossings == 3


def test_dt_entries_must_be_even():
    with pytest.raises(DiagramError):
        DTCode((1, 4, 2))
