from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cforge import linalg
from cforge.braid import BraidWord
from cforge.diagram import Diagram, braid_to_diagram, realize_dt
from cforge.lattice import (
    EXHAUSTED,
    INCONCLUSIVE,
    WITNESS,
    EmbeddingProblem,
    brute_force_embeds,
    embeds,
    enumerate_norm_vectors,
    g4_lower_bound,
    verify_witness,
)


def test_identity_embeds():
    c = embeds([[1]], 1)
    assert c.outcome == WITNESS
    assert c.witness in (((1,),), ((-1,),))


def test_seven_is_not_a_sum_of_three_squares():
    assert embeds([[7]], 3).outcome == EXHAUSTED
    assert not any(a * a + b * b + c * c == 7 for a, b, c in itertools.product(range(-2, 3), repeat=3))
    assert embeds([[7]], 4).outcome == WITNESS


@pytest.mark.parametrize("name,dim", [("17ah_0168368", 13), ("16a328556", 13), ("18ah_2335674", 15)])
def test_appendix_matrices_exhausted(witnesses, name, dim):
    t = next(t for t in witnesses["targets"] if t["name"] == name)
    assert t["dim"] == dim
    for order in ("adaptive", "diagonal", "connected"):
        assert embeds(t["goeritz"], dim, budget_seconds=120, order=order).outcome == EXHAUSTED


def test_budget_gives_inconclusive(witnesses):
    g = witnesses["targets"][0]["goeritz"]
    c = embeds(g, 13, budget_nodes=5)
    assert c.outcome == INCONCLUSIVE
    assert "witness" not in c.to_json()


def test_problem_validation():
    with pytest.raises(ValueError):
        EmbeddingProblem(((1, 2), (2, 1)), 3)
    with pytest.raises(ValueError):
        EmbeddingProblem(((1, 0), (1, 1)), 3)
    with pytest.raises(ValueError):
        embeds([[1, 2], [2, 1]], 4)
    assert EmbeddingProblem.for_knot(((2,),), -2).dim == 3


def test_norm_vector_classes():
    assert list(enumerate_norm_vectors(2, 2)) == [(1, 1)]
    assert list(enumerate_norm_vectors(0, 3)) == [(0, 0, 0)]
    assert list(enumerate_norm_vectors(5, 2)) == [(2, 1)]
    raw = set(enumerate_norm_vectors(2, 2, canonical=False))
    assert raw == {(1, 1), (1, -1), (-1, 1), (-1, -1)}


@given(st.integers(0, 9), st.integers(1, 4))
def test_raw_vectors_match_scan(norm, dim):
    got = set(enumerate_norm_vectors(norm, dim, canonical=False))
    want = {v for v in itertools.product(range(-3, 4), repeat=dim) if sum(x * x for x in v) == norm}
    assert got == want


def _small_pd(rng, m):
    while True:
        G = [[0] * m for _ in range(m)]
        for i in range(m):
            G[i][i] = rng.randint(1, 6)
            for j in range(i):
                G[i][j] = G[j][i] = rng.randint(-2, 2)
        if linalg.positive_definite(G):
            return G


def test_agrees_with_brute_force():
    rng = random.Random(11)
    for _ in range(200):
        m = rng.randint(1, 3)
        G = _small_pd(rng, m)
        n = rng.randint(m, m + 2)
        bf = brute_force_embeds(G, n)
        c = embeds(G, n)
        assert (bf is not None) == c.is_witness, (G, n)
        if bf is not None:
            assert verify_witness(bf, G) and verify_witness(c.witness, G)


def test_planted_embeddings_are_found():
    rng = random.Random(4)
    for _ in range(30):
        m = rng.randint(2, 7)
        n = m + rng.randint(0, 3)
        M = [[rng.choice((-1, 0, 0, 1)) for _ in range(m)] for _ in range(n)]
        G = linalg.matmul(linalg.transpose(M), M)
        if not linalg.positive_definite(G):
            continue
        c = embeds(G, n)
        assert c.is_witness and verify_witness(c.witness, G)


def test_verify_witness_rejects():
    assert not verify_witness([[1, 0], [0, 1]], [[1, 0], [0, 2]])
    assert not verify_witness([[1]], [[1, 0], [0, 1]])


def test_genus_bound_examples(witnesses):
    t = next(t for t in witnesses["targets"] if t["name"] == "17ah_0168368")
    b = g4_lower_bound(realize_dt(t["dt"]))
    assert b.signature == -4 and b.bound == 3
    assert g4_lower_bound(t["goeritz"], -4).bound == 3
    assert g4_lower_bound(Diagram((), ())).bound == 0
    tre = g4_lower_bound(braid_to_diagram(BraidWord(2, (1, 1, 1))))
    assert tre.bound == 1 and tre.signature == -2
    if tre.certificate is not None:
        assert tre.certificate.is_witness
        assert verify_witness(tre.certificate.witness, tre.gram)


def test_obstruction_never_exceeds_known_genus(corpus):
    # knots whose 4-genus is |sigma|/2 cannot be obstructed
    for row in corpus:
        if not row["dt"] or not row["g4"].isdigit():
            continue
        g4, sig = int(row["g4"]), int(row["signature"])
        if g4 != abs(sig) // 2:
            continue
        assert g4_lower_bound(realize_dt(row["dt"]), budget_seconds=10).bound == g4, row["name"]
