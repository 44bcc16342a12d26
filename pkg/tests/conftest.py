from __future__ import annotations

from hypothesis import strategies as st

from klfactor.coxeter import GenSet, Permutation
from klfactor.factorization import Factorization
from klfactor.laurent import LaurentPoly


@st.composite
def permutations(draw, min_n: int = 1, max_n: int = 6) -> Permutation:
    n = draw(st.integers(min_n, max_n))
    return Permutation(tuple(draw(st.permutations(range(1, n + 1)))))


@st.composite
def permutation_pairs(draw, min_n: int = 1, max_n: int = 6) -> tuple[Permutation, Permutation]:
    n = draw(st.integers(min_n, max_n))
    perm = st.permutations(range(1, n + 1)).map(lambda p: Permutation(tuple(p)))
    return draw(perm), draw(perm)


@st.composite
def factorizations(draw, max_n: int = 5, max_blocks: int = 3, nonempty: bool = True) -> Factorization:
    n = draw(st.integers(2, max_n))
    block = st.sets(st.integers(1, n - 1), min_size=1 if nonempty else 0, max_size=n - 1)
    blocks = draw(st.lists(block, min_size=1, max_size=max_blocks))
    return Factorization(n, tuple(GenSet(b, n) for b in blocks))


laurent_polys = st.dictionaries(st.integers(-6, 6), st.integers(-5, 5), max_size=5).map(LaurentPoly)
