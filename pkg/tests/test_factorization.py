from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings

from klfactor.coxeter import GenSet, Permutation, all_permutations, bruhat_leq, contains_pattern, w0
from klfactor.factorization import (
    Factorization,
    Mask,
    all_reduced_words,
    canonicalize,
    cf_moves,
    cf_normal_form,
    cf_orbit,
    class_count,
    component_stats,
    contract_once,
    defect_data,
    defect_polynomials,
    defect_polynomials_via_hecke,
    enumerate_mask_classes,
    equivalent,
    is_absolutely_bidescent,
    is_admissible,
    is_bidescent,
    is_ldes_factorization,
    is_rdes_factorization,
    is_tight,
    is_tight_via_hecke,
    iter_masks_raw,
    minimal_contractions,
    reduced_word_factorization,
    resolution_dimension,
    string_position,
)
from klfactor.hecke import kl_poly
from klfactor.laurent import ONE, Q, LaurentPoly

from .conftest import factorizations

F = Factorization.of


def P(text: str) -> Permutation:
    return Permutation.parse(text)


A2 = F(3, [[1], [2], [1]])
B3412 = F(4, [[2], [1, 3], [2]])
# the outer blocks share generator 2, which commutes with the middle block {4}
SPACED = F(6, [[2, 3], [4], [1, 2, 5]])


def family_json(f: Factorization, overlaps: str = "general") -> dict[str, str]:
    return defect_polynomials(f, overlaps).to_json()["polys"]


# -- types and text ----------------------------------------------------------


def test_factorization_basics():
    assert B3412.r == 3
    assert B3412.leading == P("3412")
    assert B3412.to_json() == {"n": 4, "blocks": [[2], [1, 3], [2]]}
    assert Factorization.from_json({"n": 4, "blocks": [[2], [1, 3], [2]]}) == B3412
    assert Factorization.from_json('{"n": 3, "blocks": [[1], [2], [1]]}') == A2
    assert B3412.upslice(2) == F(4, [[2], [1, 3]])
    assert str(A2) == "({1}, {2}, {1})"
    with pytest.raises(ValueError):
        F(3, [[3]])


def test_mask_validation():
    with pytest.raises(ValueError):
        defect_data(A2, Mask.of(3, [[2], [], []]))
    with pytest.raises(ValueError):
        defect_data(A2, Mask.of(3, [[1], []]))


# -- defects -----------------------------------------------------------------


def test_defect_data_examples():
    d = defect_data(A2, Mask.of(3, [[1], [], [1]]))
    assert d.d_R == 1
    assert d.per_level == (frozenset(), frozenset(), frozenset({(1, 2)}))
    assert defect_data(A2, Mask.identity(A2)).d_R == 0
    d = defect_data(B3412, Mask.of(4, [[2], [], [2]]))
    assert d.d_R == 1
    assert d.per_level[2] == frozenset({(2, 3)})


def test_canonicalize_examples():
    f = F(2, [[1], [1]])
    assert canonicalize(f, Mask.of(2, [[1], [1]])) == Mask.identity(f)
    assert canonicalize(B3412, Mask.identity(B3412)) == Mask.identity(B3412)
    sigma = Mask.of(3, [[1], [2], [1]])
    assert canonicalize(A2, sigma) == sigma


def test_canonicalize_non_adjacent_overlap():
    # s2 in the first block belongs to the overlap with the third block
    sigma = Mask.of(6, [[2], [], []])
    assert canonicalize(SPACED, sigma) == Mask.of(6, [[], [], [2]])
    assert canonicalize(SPACED, sigma, "adjacent") == sigma


def test_enumerate_examples():
    f = F(2, [[1], [1]])
    classes = list(enumerate_mask_classes(f))
    assert [str(c.target) for c in classes] == ["1 2", "2 1"]
    assert class_count(A2) == 8 == len(list(enumerate_mask_classes(A2)))
    empty = F(3, [[]])
    assert [c.target for c in enumerate_mask_classes(empty)] == [Permutation.identity(3)]
    assert class_count(B3412) == 16
    assert class_count(SPACED) == 72
    assert class_count(SPACED, "adjacent") == 144


def test_defect_polynomials_a2():
    assert family_json(A2) == {
        "1 2 3": "1 + q",
        "1 3 2": "1",
        "2 1 3": "1 + q",
        "2 3 1": "1",
        "3 1 2": "1",
        "3 2 1": "1",
    }
    assert defect_polynomials(A2).leading == P("321")


def test_defect_polynomials_single_block():
    J = GenSet({1, 2}, 3)
    fam = defect_polynomials(Factorization(3, (J,)))
    assert set(fam.polys) == set(all_permutations(3))
    assert all(p == ONE for p in fam.polys.values())


def test_defect_polynomials_3412():
    fam = defect_polynomials(B3412)
    assert fam[Permutation.identity(4)] == ONE + Q
    assert fam[P("3412")] == ONE
    assert len(fam.polys) == 14
    # the family is the KL column of 3412
    for x in all_permutations(4):
        assert fam[x] == kl_poly(x, P("3412"))


def test_defect_polynomials_via_hecke_examples():
    f = F(2, [[1], [1]])
    fam = defect_polynomials_via_hecke(f)
    assert fam.polys == {Permutation.identity(2): ONE, P("21"): ONE}
    assert defect_polynomials_via_hecke(A2) == defect_polynomials(A2)
    assert defect_polynomials_via_hecke(B3412) == defect_polynomials(B3412)


def test_resolution_dimension():
    assert resolution_dimension(A2) == 3 == A2.leading.length
    redundant = F(3, [[1], [2], [1, 2]])
    assert resolution_dimension(redundant) == 4
    assert redundant.leading.length == 3


def test_admissible_examples():
    assert is_admissible(F(3, [[1, 2]]))
    assert is_admissible(A2)
    assert is_admissible(B3412)
    # the top element is reached by two classes, one of them with a defect
    redundant = F(3, [[1], [2], [1, 2]])
    assert defect_polynomials(redundant)[P("321")] == ONE + Q
    assert not is_admissible(redundant)


def test_tight_examples():
    ok, witness = is_tight(A2)
    assert not ok
    assert witness.canonical == Mask.of(3, [[1], [], []])
    assert witness.target == P("213")
    assert witness.d_R == 1
    assert is_tight(B3412) == (True, None)
    assert is_tight(F(3, [[1, 2]])) == (True, None)


def test_tight_via_hecke_examples():
    assert is_tight_via_hecke(B3412)
    assert not is_tight_via_hecke(A2)
    assert is_tight_via_hecke(F(3, [[1]]))


def test_overlap_mode_changes_tightness():
    assert SPACED.leading == P("431562")
    assert is_tight(SPACED)[0]
    assert is_tight_via_hecke(SPACED)
    assert not is_tight(SPACED, "adjacent")[0]
    assert not is_tight_via_hecke(SPACED, "adjacent")


def test_string_position_examples():
    e = Mask.identity(B3412)
    assert all(string_position(e, p, k) == p for p in range(1, 5) for k in range(4))
    assert string_position(Mask.of(2, [[1]]), 1, 1) == 2
    # s2 * s1 s3 has window 3 1 4 2, whose inverse sends 2 to 4
    assert string_position(Mask.of(4, [[2], [1, 3]]), 2, 2) == 4
    assert string_position(Mask.of(4, [[2], [1, 3]]), 2, 0) == 2
    with pytest.raises(ValueError):
        string_position(e, 1, 4)


def test_component_stats_examples():
    f = F(4, [[1, 2, 3]])
    (only,) = component_stats(f, Mask.identity(f))
    pairs = frozenset(itertools.combinations(range(1, 5), 2))
    assert only.rmeet == pairs and only.rbounce == pairs and not only.rdef

    stats = component_stats(A2, Mask.of(3, [[1], [], [1]]))
    top = stats[-1]
    assert (top.level, top.interval) == (3, (1, 2))
    assert top.rdef == top.rcross == frozenset({(1, 2)})
    assert not top.rbounce

    stats = component_stats(B3412, Mask.of(4, [[2], [], [2]]))
    assert [(s.level, s.interval) for s in stats] == [(1, (2, 3)), (2, (1, 2)), (2, (3, 4)), (3, (2, 3))]
    assert stats[3].rdef == frozenset({(2, 3)})
    for s in stats[1:3]:
        assert len(s.rbounce) == 1 and not s.rdef


# -- contraction and Cartier-Foata -------------------------------------------


def test_contract_once_examples():
    got = {str(g) for g in contract_once(F(4, [[1], [3], [1]]))}
    assert got == {"({1}, {3})", "({3}, {1})"}
    assert contract_once(A2) == []
    assert contract_once(F(3, [[1, 2], [1, 2]])) == [F(3, [[1, 2]])]


def test_cf_examples():
    assert cf_normal_form(F(4, [[3], [1]])) == F(4, [[1, 3]])
    assert equivalent(F(4, [[1], [3]]), F(4, [[3], [1]]))
    assert cf_normal_form(F(3, [[1], [2]])) == F(3, [[1], [2]])
    assert not equivalent(F(3, [[1], [2]]), F(3, [[2], [1]]))
    assert cf_normal_form(Factorization(3, ())) == Factorization(3, ())
    # the orbit also holds the two splittings of {1,3}; all share one normal form
    orbit = cf_orbit(B3412)
    assert {str(g) for g in orbit} == {
        "({2}, {1,3}, {2})",
        "({2}, {1}, {3}, {2})",
        "({2}, {3}, {1}, {2})",
    }
    assert all(cf_normal_form(g) == B3412 for g in orbit)


def test_descent_predicates():
    assert is_bidescent(B3412)
    assert is_absolutely_bidescent(B3412)
    assert is_bidescent(F(3, [[1, 2]]))
    # w = 231: {2} is a component of rdes and {1} one of ldes
    f = F(3, [[1], [2]])
    assert f.leading == P("231")
    assert is_rdes_factorization(f) and is_ldes_factorization(f)
    assert is_bidescent(f)
    assert not is_bidescent(A2)


def test_reduced_words():
    assert all_reduced_words(P("321")) == [[1, 2, 1], [2, 1, 2]]
    assert reduced_word_factorization(P("231")) == F(3, [[1], [2]])


# -- properties --------------------------------------------------------------


def _corpus_small(max_blocks: int = 3):
    for n in range(2, 5):
        gens = range(1, n)
        subsets = [c for k in range(1, n) for c in itertools.combinations(gens, k)]
        for r in range(1, max_blocks + 1):
            for blocks in itertools.product(subsets, repeat=r):
                yield F(n, blocks)


def test_defects_class_invariant_small_corpus():
    # the full corpus is covered by the acceptance suite
    for f in _corpus_small(max_blocks=2):
        for mode in ("general", "adjacent"):
            for parts, _x, d in iter_masks_raw(f, mode):
                sigma = Mask(tuple(Permutation(p) for p in parts), f.n)
                canon = canonicalize(f, sigma, mode)
                assert canon.target == sigma.target
                data, cdata = defect_data(f, sigma, mode), defect_data(f, canon, mode)
                assert data.d_R == d
                assert data == cdata


def test_hecke_routes_agree_small_corpus():
    for f in _corpus_small():
        fam = defect_polynomials(f)
        if resolution_dimension(f) == f.leading.length:
            assert defect_polynomials_via_hecke(f) == fam
        assert is_tight(f)[0] == is_tight_via_hecke(f)


def test_321_avoiding_reduced_words_are_tight():
    for n in range(2, 5):
        for w in all_permutations(n):
            if contains_pattern(w, "321"):
                continue
            for word in all_reduced_words(w):
                f = reduced_word_factorization(w, word)
                assert is_tight(f)[0]
                fam = defect_polynomials(f)
                for x in all_permutations(n):
                    assert fam[x] == kl_poly(x, w)


@settings(max_examples=60, deadline=None)
@given(factorizations(max_n=5, max_blocks=3))
def test_family_invariants(f):
    fam = defect_polynomials(f)
    assert sum(p.evaluate(1) for p in fam.polys.values()) == class_count(f)
    assert all(bruhat_leq(x, fam.leading) for x in fam.polys)
    assert all(c > 0 for p in fam.polys.values() for _e, c in p.terms())
    assert all(p.is_q_polynomial() for p in fam.polys.values())
    if is_tight(f)[0]:
        assert is_admissible(f)


@settings(max_examples=60, deadline=None)
@given(factorizations(max_n=5, max_blocks=3))
def test_graded_count_factorizes(f):
    fam = defect_polynomials(f)
    lhs = LaurentPoly()
    for x, p in fam.polys.items():
        lhs = lhs + p * LaurentPoly.monomial(2 * x.length)
    rhs = ONE
    counts: dict[int, set[Permutation]] = {}
    for c in enumerate_mask_classes(f):
        for k, s in enumerate(c.canonical.parts):
            counts.setdefault(k, set()).add(s)
    for k in range(f.r):
        rhs = rhs * sum((LaurentPoly.monomial(2 * s.length) for s in counts[k]), LaurentPoly())
    assert lhs == rhs


@settings(max_examples=60, deadline=None)
@given(factorizations(max_n=5, max_blocks=3))
def test_moves_and_contractions_preserve_leading(f):
    for g in cf_moves(f):
        assert g.leading == f.leading
        assert equivalent(f, g)
        assert is_tight(g)[0] == is_tight(f)[0]
        assert defect_polynomials(g) == defect_polynomials(f)
    for g in contract_once(f):
        assert g.leading == f.leading
    for g in minimal_contractions(f):
        assert g.leading == f.leading and not contract_once(g)


@settings(max_examples=60, deadline=None)
@given(factorizations(max_n=5, max_blocks=3))
def test_canonicalize_idempotent(f):
    for c in enumerate_mask_classes(f):
        assert canonicalize(f, c.canonical) == c.canonical


@settings(max_examples=30, deadline=None)
@given(factorizations(max_n=5, max_blocks=2))
def test_single_and_reversed(f):
    # reversing the blocks inverts the leading element
    assert f.reversed().leading == f.leading.inverse()
    assert w0(f.blocks[0]) == Factorization(f.n, f.blocks[:1]).leading
