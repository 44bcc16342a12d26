"""The symmetric group S_n as a Coxeter system of type A.

Permutations are written in one-line notation with 1-based positions and
values.  Products compose right to left: ``(u * v)(p) == u(v(p))``, so
right multiplication by ``s_i`` swaps the entries in positions ``i, i+1``
and left multiplication by ``s_i`` swaps the values ``i, i+1``.

Functions whose names start with ``w_`` work on raw window tuples and skip
validation; they are the inner loops behind the public API.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from functools import cached_property

Window = tuple[int, ...]


# ---------------------------------------------------------------------------
# raw window helpers


def w_compose(u: Window, v: Window) -> Window:
    return tuple([u[x - 1] for x in v])


def w_inverse(w: Window) -> Window:
    out = [0] * len(w)
    for p, x in enumerate(w, 1):
        out[x - 1] = p
    return tuple(out)


def w_length(w: Window) -> int:
    n = len(w)
    return sum(1 for p in range(n) for q in range(p + 1, n) if w[p] > w[q])


def w_identity(n: int) -> Window:
    return tuple(range(1, n + 1))


def w_rswap(w: Window, i: int) -> Window:
    """``w * s_i``: swap positions ``i`` and ``i+1``."""
    lst = list(w)
    lst[i - 1], lst[i] = lst[i], lst[i - 1]
    return tuple(lst)


def w_lswap(w: Window, i: int) -> Window:
    """``s_i * w``: swap values ``i`` and ``i+1``."""
    return tuple(i + 1 if x == i else i if x == i + 1 else x for x in w)


def w_reduced_word(w: Window) -> list[int]:
    """A reduced word ``[i1, ..., ik]`` with ``w = s_i1 ... s_ik`` (bubble sort)."""
    lst = list(w)
    word: list[int] = []
    changed = True
    while changed:
        changed = False
        for i in range(len(lst) - 1):
            if lst[i] > lst[i + 1]:
                lst[i], lst[i + 1] = lst[i + 1], lst[i]
                word.append(i + 1)
                changed = True
    # we sorted w by right multiplications w s_{j1} ... s_{jk} = e
    return word[::-1]


def w_sort_intervals(w: Window, intervals: Iterable[tuple[int, int]]) -> Window:
    """Sort the values of ``w`` increasingly inside each position interval."""
    lst = list(w)
    for a, b in intervals:
        lst[a - 1 : b] = sorted(lst[a - 1 : b])
    return tuple(lst)


def w_reverse_intervals(n: int, intervals: Iterable[tuple[int, int]]) -> Window:
    lst = list(range(1, n + 1))
    for a, b in intervals:
        lst[a - 1 : b] = lst[a - 1 : b][::-1]
    return tuple(lst)


def runs(gens: Iterable[int]) -> tuple[tuple[int, int], ...]:
    """Position intervals ``[a, b]`` of the maximal runs ``{a, ..., b-1}``."""
    out: list[tuple[int, int]] = []
    for g in sorted(set(gens)):
        if out and out[-1][1] == g:
            out[-1] = (out[-1][0], g + 1)
        else:
            out.append((g, g + 1))
    return tuple(out)


def gens_of_interval(a: int, b: int) -> range:
    """Generators ``{a, ..., b-1}`` of the position interval ``[a, b]``."""
    return range(a, b)


def parabolic_windows(n: int, intervals: Sequence[tuple[int, int]]) -> list[Window]:
    """All elements of the parabolic subgroup permuting each interval, sorted."""
    factors = [list(itertools.permutations(range(a, b + 1))) for a, b in intervals]
    out = []
    for choice in itertools.product(*factors):
        lst = list(range(1, n + 1))
        for (a, b), perm in zip(intervals, choice):
            lst[a - 1 : b] = perm
        out.append(tuple(lst))
    out.sort()
    return out


def min_coset_windows(
    n: int, intervals: Sequence[tuple[int, int]], sub_intervals: Sequence[tuple[int, int]]
) -> list[Window]:
    """Minimum-length representatives of ``W_J / W_K`` for ``K`` inside ``J``.

    ``intervals`` are the components of ``J`` and ``sub_intervals`` those of
    ``K``; a representative has increasing values on every ``K`` interval.
    """
    out = []
    for x in parabolic_windows(n, intervals):
        if all(x[p - 1] < x[p] for a, b in sub_intervals for p in range(a, b)):
            out.append(x)
    return out


# ---------------------------------------------------------------------------
# Permutation


@dataclass(frozen=True, order=False)
class Permutation:
    """An element of S_n in one-line notation ``(w(1), ..., w(n))``."""

    window: Window

    def __post_init__(self) -> None:
        w = tuple(self.window)
        object.__setattr__(self, "window", w)
        if sorted(w) != list(range(1, len(w) + 1)):
            raise ValueError(f"not a permutation window: {w}")

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(w_identity(n))

    @classmethod
    def simple(cls, i: int, n: int) -> Permutation:
        if not 1 <= i < n:
            raise ValueError(f"s_{i} is not a generator of S_{n}")
        return cls(w_rswap(w_identity(n), i))

    @classmethod
    def from_word(cls, word: Iterable[int], n: int) -> Permutation:
        w = w_identity(n)
        for i in word:
            w = w_rswap(w, i)
        return cls(w)

    @classmethod
    def parse(cls, text: str) -> Permutation:
        """Parse space-separated one-line notation such as ``"3 4 1 2"``.

        A window of single digits may also be written without spaces.
        """
        s = text.replace(",", " ").strip()
        if not s:
            raise ValueError("empty permutation")
        parts = s.split()
        if len(parts) == 1 and len(parts[0]) > 1 and parts[0].isdigit():
            parts = list(parts[0])
        try:
            return cls(tuple(int(t) for t in parts))
        except ValueError as exc:
            raise ValueError(f"cannot parse permutation {text!r}: {exc}") from None

    @property
    def n(self) -> int:
        return len(self.window)

    def __call__(self, p: int) -> int:
        return self.window[p - 1]

    def __mul__(self, other: Permutation) -> Permutation:
        return compose(self, other)

    def inverse(self) -> Permutation:
        return Permutation(w_inverse(self.window))

    @cached_property
    def length(self) -> int:
        return w_length(self.window)

    def reduced_word(self) -> list[int]:
        return w_reduced_word(self.window)

    def is_identity(self) -> bool:
        return self.window == w_identity(self.n)

    def sort_key(self) -> tuple[int, Window]:
        """Order by length, then lexicographically by window."""
        return (self.length, self.window)

    def __str__(self) -> str:
        return " ".join(map(str, self.window))

    def __repr__(self) -> str:
        return f"Permutation({''.join(map(str, self.window)) if self.n < 10 else self.window})"


def all_permutations(n: int) -> Iterator[Permutation]:
    """S_n in lexicographic window order."""
    for w in itertools.permutations(range(1, n + 1)):
        yield Permutation(w)


# ---------------------------------------------------------------------------
# GenSet


@dataclass(frozen=True)
class GenSet:
    """A subset of the simple generators ``{1, ..., n-1}`` of S_n."""

    generators: frozenset[int]
    n: int

    def __init__(self, generators: Iterable[int], n: int):
        gens = frozenset(generators)
        bad = [g for g in gens if not 1 <= g < n]
        if bad:
            raise ValueError(f"generators {sorted(bad)} out of range for n={n}")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "n", n)

    @classmethod
    def parse(cls, text: str, n: int) -> GenSet:
        s = text.strip().strip("{}[]")
        if not s:
            return cls((), n)
        try:
            return cls((int(t) for t in s.replace(" ", ",").split(",") if t), n)
        except ValueError:
            raise ValueError(f"cannot parse generator set {text!r}") from None

    @classmethod
    def from_intervals(cls, intervals: Iterable[tuple[int, int]], n: int) -> GenSet:
        return cls((g for a, b in intervals for g in gens_of_interval(a, b)), n)

    @cached_property
    def components(self) -> tuple[tuple[int, int], ...]:
        """Position intervals ``[a, b]`` of the connected components."""
        return runs(self.generators)

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.generators))

    def __len__(self) -> int:
        return len(self.generators)

    def __contains__(self, g: object) -> bool:
        return g in self.generators

    def __bool__(self) -> bool:
        return bool(self.generators)

    def __and__(self, other: GenSet) -> GenSet:
        return GenSet(self.generators & other.generators, self.n)

    def __or__(self, other: GenSet) -> GenSet:
        return GenSet(self.generators | other.generators, self.n)

    def __le__(self, other: GenSet) -> bool:
        return self.generators <= other.generators

    def sorted(self) -> list[int]:
        return sorted(self.generators)

    def __str__(self) -> str:
        return ",".join(map(str, sorted(self.generators)))

    def __repr__(self) -> str:
        return f"GenSet({{{self}}}, n={self.n})"


# ---------------------------------------------------------------------------
# operations


def _same_n(u: Permutation, v: Permutation) -> None:
    if u.n != v.n:
        raise ValueError(f"mismatched sizes {u.n} and {v.n}")


def compose(u: Permutation, v: Permutation) -> Permutation:
    """``(u * v)(p) = u(v(p))``."""
    _same_n(u, v)
    return Permutation(w_compose(u.window, v.window))


def length(w: Permutation) -> int:
    """Number of inversions."""
    return w.length


def right_descents(w: Permutation) -> GenSet:
    win = w.window
    return GenSet((i for i in range(1, w.n) if win[i - 1] > win[i]), w.n)


def left_descents(w: Permutation) -> GenSet:
    return right_descents(w.inverse())


def left_inversion_reflections(w: Permutation) -> set[tuple[int, int]]:
    """Value pairs ``(a, b)``, ``a < b``, with ``b`` left of ``a`` in ``w``."""
    inv = w_inverse(w.window)
    n = w.n
    return {(a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1) if inv[a - 1] > inv[b - 1]}


def w_bruhat_leq(x: Window, w: Window) -> bool:
    n = len(x)
    # compare the counts #{a <= i : x(a) >= j} for every i, j
    cx = [0] * (n + 2)
    cw = [0] * (n + 2)
    for i in range(n):
        for j in range(1, x[i] + 1):
            cx[j] += 1
        for j in range(1, w[i] + 1):
            cw[j] += 1
        for j in range(1, n + 1):
            if cx[j] > cw[j]:
                return False
    return True


def bruhat_leq(x: Permutation, w: Permutation) -> bool:
    """Bruhat order via the rank-matrix criterion."""
    _same_n(x, w)
    return w_bruhat_leq(x.window, w.window)


def w0(J: GenSet) -> Permutation:
    """Longest element of ``W_J``: reverse each component interval."""
    return Permutation(w_reverse_intervals(J.n, J.components))


def coset_decompose_right(w: Permutation, J: GenSet) -> tuple[Permutation, Permutation]:
    """``w = wJmin * wJ`` with ``wJ`` in ``W_J`` and ``wJmin`` minimal in ``w W_J``."""
    if w.n != J.n:
        raise ValueError(f"mismatched sizes {w.n} and {J.n}")
    m = w_sort_intervals(w.window, J.components)
    wj = w_compose(w_inverse(m), w.window)
    return Permutation(m), Permutation(wj)


def w_demazure(n: int, blocks: Iterable[Sequence[tuple[int, int]]]) -> Window:
    """Leading element of a sequence of blocks given by component intervals."""
    w = w_identity(n)
    for comps in blocks:
        m = w_sort_intervals(w, comps)
        w = w_compose(m, w_reverse_intervals(n, comps))
    return w


def demazure_leading(J_seq: Sequence[GenSet], n: int | None = None) -> Permutation:
    """The Bruhat-maximal product ``w(J)`` of the blocks' parabolic subgroups."""
    if n is None:
        if not J_seq:
            raise ValueError("n is required for an empty sequence")
        n = J_seq[0].n
    if any(J.n != n for J in J_seq):
        raise ValueError("blocks have mismatched sizes")
    return Permutation(w_demazure(n, (J.components for J in J_seq)))


def w_pattern_positions(w: Window, pattern: Window) -> tuple[int, ...] | None:
    """Lexicographically least occurrence, by depth-first search with pruning."""
    n, k = len(w), len(pattern)
    if k > n:
        return None
    chosen: list[int] = []

    def extend(start: int) -> bool:
        d = len(chosen)
        if d == k:
            return True
        for p in range(start, n - (k - d) + 1):
            val = w[p]
            ok = True
            for e in range(d):
                if (w[chosen[e]] < val) != (pattern[e] < pattern[d]):
                    ok = False
                    break
            if ok:
                chosen.append(p)
                if extend(p + 1):
                    return True
                chosen.pop()
        return False

    if extend(0):
        return tuple(p + 1 for p in chosen)
    return None


def pattern_positions(w: Permutation, pattern: Permutation) -> tuple[int, ...] | None:
    """Positions ``p_1 < ... < p_k`` where ``w`` realizes ``pattern``, or ``None``."""
    if pattern.n > w.n:
        raise ValueError("pattern longer than the permutation")
    return w_pattern_positions(w.window, pattern.window)


def contains_pattern(w: Permutation, pattern: Permutation | str) -> bool:
    if isinstance(pattern, str):
        pattern = Permutation.parse(pattern)
    if pattern.n > w.n:
        return False
    return w_pattern_positions(w.window, pattern.window) is not None


def commutes(J1: GenSet, J2: GenSet) -> bool:
    """Disjoint and at distance at least two everywhere."""
    return all(abs(i - j) >= 2 for i in J1.generators for j in J2.generators)


def gens_commute(g1: Iterable[int], g2: Iterable[int]) -> bool:
    g2 = tuple(g2)
    return all(abs(i - j) >= 2 for i in g1 for j in g2)


OVERLAP_MODES = ("adjacent", "general")


def overlap_subsets(J_seq: Sequence[GenSet], mode: str = "general") -> dict[tuple[int, int], GenSet]:
    """Nonempty overlap subsets ``O(i, k)`` of a block sequence, keyed by 0-based ``(i, k)``.

    ``mode="adjacent"`` uses ``J_i & J_{i+1}`` only.  ``mode="general"`` uses,
    for every ``i < k``, the generators of ``J_i & J_k`` that commute with
    every block strictly between.  Overlaps sharing a block are pairwise
    commuting, so their parabolic subgroups multiply freely.
    """
    if mode not in OVERLAP_MODES:
        raise ValueError(f"unknown overlap mode {mode!r}")
    out: dict[tuple[int, int], GenSet] = {}
    r = len(J_seq)
    for i in range(r):
        last = min(r, i + 2) if mode == "adjacent" else r
        for k in range(i + 1, last):
            between = [J_seq[j].generators for j in range(i + 1, k)]
            gens = [
                g
                for g in J_seq[i].generators & J_seq[k].generators
                if all(abs(g - h) >= 2 for B in between for h in B)
            ]
            if gens:
                out[(i, k)] = GenSet(gens, J_seq[i].n)
    return out
