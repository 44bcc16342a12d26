from __future__ import annotations

import pytest
from hypothesis import given, settings

from klfactor.coxeter import GenSet, Permutation, all_permutations
from klfactor.factorization import Factorization, is_admissible
from klfactor.heap import is_minimal_strong_bidescent
from klfactor.patterns import (
    PATTERNS,
    DescentInterval,
    PeelFailure,
    PeelStep,
    avoidance_class,
    avoids,
    directedness_profile,
    is_left_monotone,
    is_monotone,
    is_right_monotone,
    is_right_monotone_interval,
    is_strong_rdes_interval,
    monotone_factorization,
    peel_step,
    realizes_through,
    strong_rdes_intervals,
)

from .conftest import permutations

F = Factorization.of


def P(text: str) -> Permutation:
    return Permutation.parse(text)


# -- directedness ------------------------------------------------------------


def test_profile_identity():
    prof = directedness_profile(Permutation.identity(5))
    assert all(p.uncrossed and p.directed and not p.properly_directed for p in prof)


def test_profile_45312():
    prof = directedness_profile(P("45312"))
    middle = prof[2]
    assert not middle.left_directed and not middle.right_directed
    assert [p.directed for p in prof] == [True, True, False, True, True]
    assert [(p.lam, p.rho) for p in prof] == [(1, 4), (2, 4), (2, 4), (2, 4), (2, 5)]


def test_profile_longest_element():
    prof = directedness_profile(P("321"))
    assert all(p.left_directed and p.right_directed for p in prof)
    assert [p.strong_left for p in prof] == [True, False, False]
    assert [p.strong_right for p in prof] == [False, False, True]


@settings(max_examples=100, deadline=None)
@given(permutations(max_n=7))
def test_profile_invariants(w):
    prof = directedness_profile(w)
    for p in prof:
        assert prof[p.lam - 1].lam == p.lam <= p.position <= p.rho == prof[p.rho - 1].rho
        assert not p.strong_left or p.left_directed
        assert not p.strong_right or p.right_directed
        assert p.uncrossed == (p.strong_left and p.strong_right)


# -- intervals ---------------------------------------------------------------


def test_interval_examples():
    assert strong_rdes_intervals(Permutation.identity(4)) == []
    assert strong_rdes_intervals(P("45312")) == [DescentInterval(2, 4, 2, 4)]
    assert strong_rdes_intervals(P("45312"))[0].kind == "strong-right-descent"
    # positions 2 and 3 of 3412 are left- and right-directed respectively
    (iv,) = strong_rdes_intervals(P("3412"))
    assert (iv.a, iv.b, iv.l, iv.r) == (2, 3, 2, 3)
    assert iv.right_monotone
    assert iv.to_json() == {"a": 2, "b": 3, "l": 2, "r": 3, "kind": "right-monotone"}
    assert is_strong_rdes_interval(P("45312"), 2, 4)
    assert not is_right_monotone_interval(P("45312"), 2, 4)
    assert is_right_monotone_interval(P("3412"), 2, 3)


def test_intervals_exist_for_4231_avoiders():
    for n in range(2, 7):
        for w in all_permutations(n):
            if not w.is_identity() and avoids(w, "4231"):
                assert strong_rdes_intervals(w)


# -- peeling -----------------------------------------------------------------


def test_peel_examples():
    step = peel_step(P("3412"))
    assert isinstance(step, PeelStep)
    assert (step.J_r, step.J_star, step.x) == (GenSet({2}, 4), GenSet((), 4), P("3142"))
    step = peel_step(P("3142"))
    assert (step.J_r, step.J_star, step.x) == (GenSet({1, 3}, 4), GenSet((), 4), P("1324"))
    step = peel_step(P("321"))
    assert (step.J_r, step.J_star, step.x) == (GenSet({1, 2}, 3), GenSet((), 3), Permutation.identity(3))
    with pytest.raises(ValueError):
        peel_step(Permutation.identity(3))


def test_peel_failures():
    fail = peel_step(P("45312"))
    assert isinstance(fail, PeelFailure)
    assert fail.to_json() == {"status": "fails-45312", "stage": "4 5 3 1 2", "interval": [2, 4]}
    fail = peel_step(P("4231"))
    assert fail.status == "fails-4231" and fail.interval is None


def test_monotone_factorization_examples():
    res = monotone_factorization(Permutation.identity(3))
    assert res.ok and res.factorization == Factorization(3, ())
    res = monotone_factorization(P("3412"))
    assert res.to_json() == {"w": "3 4 1 2", "factorization": [[2], [1, 3], [2]], "status": "ok"}
    res = monotone_factorization(P("45312"))
    assert not res.ok
    assert res.to_json()["status"] == "fails-45312"


def test_monotone_predicates():
    assert is_monotone(F(4, [[2], [1, 3], [2]]))
    assert not is_monotone(F(3, [[1], [2], [1]]))
    assert is_monotone(F(4, [[1, 2, 3]]))
    assert is_right_monotone(F(4, [[2], [1, 3], [2]]))
    assert is_left_monotone(F(4, [[2], [1, 3], [2]]))


def test_avoidance_examples():
    assert all(avoidance_class(Permutation.identity(5)).values())
    assert avoidance_class(P("45312")) == {
        "avoids_4231": True,
        "avoids_45312": False,
        "avoids_34512": True,
        "avoids_45123": True,
    }
    assert all(avoidance_class(P("3412")).values())
    assert set(PATTERNS) == {"4231", "45312", "34512", "45123"}


def test_realizes_through():
    w = P("45312")
    pat = PATTERNS["45312"]
    assert all(realizes_through(w, pat, p) for p in range(1, 6))
    assert realizes_through(w, pat, 3, slot=3)
    assert not realizes_through(w, pat, 2, slot=3)


# -- exhaustive properties ---------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_algorithm_success_criterion(n):
    for w in all_permutations(n):
        res = monotone_factorization(w)
        assert res.ok == avoids(w, "4231", "45312")
        if res.ok:
            f = res.factorization
            assert f.leading == w
            assert is_monotone(f)
            assert is_admissible(f)
            if f.r:
                assert is_minimal_strong_bidescent(f)
        elif avoids(w, "4231"):
            assert res.failure.status == "fails-45312"


@pytest.mark.parametrize("n", [5, 6])
def test_45312_iff_undirected(n):
    pat = PATTERNS["45312"]
    for w in all_permutations(n):
        if not avoids(w, "4231"):
            continue
        prof = directedness_profile(w)
        for p in range(1, n + 1):
            assert realizes_through(w, pat, p, slot=3) == (not prof[p - 1].directed)
