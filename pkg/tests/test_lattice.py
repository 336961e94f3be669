import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from qhball import lattice, plumbing
from qhball.lattice import (Donaldson, Embedding, Status, donaldson_verdict, embedding_profile,
                            find_embedding, verify_embedding)
from qhball.plumbing import GramMatrix, SurgeryTriple, gram, surgery_plumbing
from oracles import embeds_by_rows

WITNESS_222 = Embedding.from_columns([(1, 1, 0), (0, 1, 1), (-1, 1, 0)])


def test_path_222_found_and_verified():
    g = GramMatrix.path((2, 2, 2))
    res = find_embedding(g)
    assert res.status is Status.FOUND
    assert verify_embedding(g, res.embedding)
    assert verify_embedding(g, WITNESS_222)


def test_identity_is_not_a_witness():
    g = GramMatrix.path((2, 2, 2))
    assert not verify_embedding(g, Embedding(((1, 0, 0), (0, 1, 0), (0, 0, 1))))


def test_profile_of_222_witness():
    prof = embedding_profile(WITNESS_222)
    assert prof.contributions == (-1, 0, -2)
    assert prof.total == -3 == 2 + 2 + 2 - 9
    assert prof.hit_counts == (2, 3, 1)


def test_path_22_none_by_determinant():
    res = find_embedding(GramMatrix.path((2, 2)))
    assert res.status is Status.NONE and res.nodes_explored == 0 and not res.budget_hit


def test_rejects_indefinite():
    with pytest.raises(ValueError):
        find_embedding(GramMatrix.from_rows([[1, 2], [2, 1]]))


def test_gamma2_5_7_37_none():
    res = find_embedding(gram(surgery_plumbing(SurgeryTriple(5, 7, 37))))
    assert res.status is Status.NONE


@pytest.mark.parametrize("t", [(7, 17, 121), (5, 12, 64), (7, 11, 81)])
def test_square_gamma2_none_by_search(t):
    tree = surgery_plumbing(SurgeryTriple(*t))
    assert tree.kind is plumbing.Kind.GAMMA2
    res = find_embedding(gram(tree))
    assert res.status is Status.NONE and res.nodes_explored > 0


def test_gamma1_witness_profile():
    t = SurgeryTriple(3, 17, 49)
    tree = surgery_plumbing(t)
    v = donaldson_verdict(t)
    assert v.status is Donaldson.UNOBSTRUCTED
    assert verify_embedding(gram(tree), v.embedding)
    assert embedding_profile(v.embedding).total == tree.k - tree.N - 5 == -1


def test_donaldson_examples():
    assert donaldson_verdict(SurgeryTriple(5, 7, 37)).status is Donaldson.OBSTRUCTED
    with pytest.raises(plumbing.ExcludedSurgery):
        donaldson_verdict(SurgeryTriple(2, 3, 6))


def test_small_budget_is_inconclusive_never_none():
    t = SurgeryTriple(28, 201, 75 * 75)
    res = find_embedding(gram(surgery_plumbing(t)), budget=1000)
    assert res.status is Status.INCONCLUSIVE and res.budget_hit
    assert donaldson_verdict(t, 1000).status is Donaldson.INCONCLUSIVE


def test_budget_environment_variable(monkeypatch):
    monkeypatch.setenv(lattice.BUDGET_ENV, "1234")
    assert lattice.default_budget() == 1234
    t = SurgeryTriple(28, 201, 75 * 75)
    assert find_embedding(gram(surgery_plumbing(t))).status is Status.INCONCLUSIVE
    monkeypatch.delenv(lattice.BUDGET_ENV)
    assert lattice.default_budget() == lattice.DEFAULT_BUDGET


def test_deterministic():
    g = gram(surgery_plumbing(SurgeryTriple(17, 99, 1681)))
    a, b = find_embedding(g), find_embedding(g)
    assert a == b and a.status is Status.FOUND


@st.composite
def tree_grams(draw):
    n = draw(st.integers(1, 7))
    weights = draw(st.lists(st.integers(2, 5), min_size=n, max_size=n))
    parents = [draw(st.integers(0, i - 1)) for i in range(1, n)]
    off = {(p, i + 1): 1 for i, p in enumerate(parents)}
    return GramMatrix(tuple(weights), off)


@settings(max_examples=150, deadline=None)
@given(tree_grams())
def test_soundness_and_oracle_on_random_trees(g):
    if not plumbing.is_positive_definite(g):
        with pytest.raises(ValueError):
            find_embedding(g)
        return
    res = find_embedding(g, budget=10 ** 6)
    assert res.status is not Status.INCONCLUSIVE
    if res.status is Status.FOUND:
        assert verify_embedding(g, res.embedding)
        prof = embedding_profile(res.embedding)
        assert prof.total == sum(g.diag) - 3 * g.order
    assert (res.status is Status.FOUND) == embeds_by_rows(g.rows())


def test_oracle_sample_of_linear_grams():
    rng = random.Random(7)
    strings = [s for n in range(1, 5) for s in itertools.product(range(2, 6), repeat=n)]
    for ws in rng.sample(strings, 60) + [(2, 2, 2), (5,), (2, 5), (3, 3), (2, 2, 2, 2, 2)]:
        g = GramMatrix.path(ws)
        assert (find_embedding(g).status is Status.FOUND) == embeds_by_rows(g.rows()), ws
