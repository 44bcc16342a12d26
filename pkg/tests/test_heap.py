from __future__ import annotations

import pytest
from hypothesis import given, settings

from klfactor.coxeter import Permutation, contains_pattern
from klfactor.factorization import Factorization
from klfactor.heap import (
    Component,
    EmbeddingError,
    Heap,
    apply_path,
    build_heap,
    diamond_exists,
    diamond_matches_pattern,
    diamond_pattern,
    diamond_witness,
    heap_is_minimal,
    is_minimal_direct,
    is_minimal_strong_bidescent,
    is_strong_bidescent,
    is_strong_bidescent_direct,
    is_strong_rdes,
    lattice_embedding,
)
from klfactor.patterns import is_strong_rdes_direct, monotone_factorization

from .conftest import factorizations, permutations

F = Factorization.of
B3412 = F(4, [[2], [1, 3], [2]])
A2 = F(3, [[1], [2], [1]])

# pieces of the 3412 heap
C = Component(1, 2, 3)
FF = Component(2, 1, 2)
G = Component(2, 3, 4)
E = Component(3, 2, 3)


def test_build_heap_3412():
    h = build_heap(B3412)
    assert h.components == (C, FF, G, E)
    assert h.step(C, "+u1") == G
    assert h.step(C, "+u2") == FF
    assert h.step(E, "-u1") == FF
    assert h.step(E, "-u2") == G
    assert h.step(E, "+u1") is None
    assert h.to_json()[0] == {"i": 2, "j": 3, "level": 1, "steps": {"+u1": 2, "+u2": 1}}


def test_build_heap_a2():
    h = build_heap(A2)
    e1, e2, e3 = Component(1, 1, 2), Component(2, 2, 3), Component(3, 1, 2)
    assert h.components == (e1, e2, e3)
    assert h.step(e2, "-u1") == e1
    assert h.step(e3, "-u1") == e1
    assert h.step(e1, "+u1") == e2


def test_single_block_heap_has_no_steps():
    h = build_heap(F(5, [[1, 3, 4]]))
    assert len(h) == 2
    assert all(not steps for steps in h.steps.values())


def test_apply_path():
    h = build_heap(B3412)
    assert apply_path(h, C, []) == C
    assert apply_path(h, C, ["+u1", "+u2"]) == E
    assert apply_path(h, C, ["+u2", "+u1"]) == E
    assert apply_path(h, E, ["+u1"]) is None
    assert apply_path(h, E, ["-u1", "-u2"]) == C
    with pytest.raises(ValueError):
        apply_path(h, Component(9, 1, 2), [])
    with pytest.raises(ValueError):
        apply_path(h, C, ["+u3"])


def test_strong_descent_examples():
    assert is_strong_bidescent(B3412)
    assert is_strong_rdes(B3412)
    assert not is_strong_rdes(A2)
    assert is_strong_rdes(F(4, [[1, 2, 3]]))
    assert is_strong_bidescent(F(4, [[1, 2, 3]]))


def test_minimality_examples():
    assert is_minimal_strong_bidescent(B3412)
    assert is_minimal_strong_bidescent(F(4, [[1, 2]]))
    # the repeated {1} across the commuting spacer {3}
    spaced = F(4, [[1], [3], [1]])
    assert is_strong_bidescent(spaced)
    assert not is_minimal_strong_bidescent(spaced)
    assert not is_minimal_direct(spaced)
    with pytest.raises(ValueError):
        is_minimal_strong_bidescent(A2)


def test_lattice_embedding_examples():
    emb = lattice_embedding(build_heap(B3412))
    assert emb.coords == {C: (0, 0), G: (1, 1), FF: (-1, 1), E: (0, 2)}
    assert set(emb.classes.values()) == {0}
    emb = lattice_embedding(build_heap(F(3, [[1]])))
    assert emb.coords == {Component(1, 1, 2): (0, 0)}
    two = build_heap(F(4, [[1, 3]]))
    emb = lattice_embedding(two)
    assert set(emb.coords.values()) == {(0, 0)}
    assert sorted(emb.classes.values()) == [0, 1]


def test_lattice_embedding_inconsistent():
    # a heap where +u1 and +u2 from one piece reach the same piece
    h = build_heap(F(4, [[1], [3], [1]]))
    assert not heap_is_minimal(h)
    with pytest.raises(EmbeddingError):
        lattice_embedding(h)


def test_diamond_examples():
    h = build_heap(B3412)
    assert diamond_exists(h, C, 2, 2)
    assert contains_pattern(B3412.leading, diamond_pattern(2, 2))
    assert not diamond_exists(h, C, 3, 2)
    assert all(diamond_exists(h, e, 1, 1) for e in h)
    assert diamond_witness(h, 2, 2) == C
    assert diamond_pattern(2, 3) == Permutation.parse("45123")
    with pytest.raises(ValueError):
        diamond_exists(h, C, 0, 1)


def test_empty_heap():
    h = Heap([])
    assert len(h) == 0
    assert lattice_embedding(h).coords == {}


@settings(max_examples=80, deadline=None)
@given(factorizations(max_n=5, max_blocks=4))
def test_heap_characterizations_match_direct(f):
    assert is_strong_rdes(f) == is_strong_rdes_direct(f)
    assert is_strong_bidescent(f) == is_strong_bidescent_direct(f)
    if is_strong_bidescent(f):
        h = build_heap(f)
        assert heap_is_minimal(h) == is_minimal_direct(f)


@settings(max_examples=80, deadline=None)
@given(permutations(min_n=2, max_n=7))
def test_monotone_output_heap(w):
    res = monotone_factorization(w)
    if not res.ok:
        return
    f = res.factorization
    h = build_heap(f)
    assert is_minimal_strong_bidescent(f)
    emb = lattice_embedding(h)
    for e in h:
        x = apply_path(h, e, ["+u1", "+u2"])
        if x is not None:
            assert apply_path(h, e, ["+u2", "+u1"]) == x
            assert emb.coords[x] == (emb.coords[e][0], emb.coords[e][1] + 2)
    for m1 in (2, 3):
        for m2 in (2, 3):
            assert diamond_matches_pattern(f, m1, m2)
