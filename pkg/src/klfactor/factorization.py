"""Factorizations into parabolic blocks, masks, defects and defect polynomials.

A factorization is a sequence ``J_1, ..., J_r`` of generator subsets of S_n.
A mask picks ``sigma_k`` in each parabolic subgroup ``W_{J_k}``; its target is
the product ``sigma_1 ... sigma_r``.  Writing ``w_k = sigma_1 ... sigma_k``,
level ``k`` contributes one defect for every pair of positions ``p < q`` that

* lies in one component interval of ``J_k``,
* does not lie in one component interval of the incoming overlap ``F_k``,
* is inverted by ``w_{k-1}``.

With ``overlaps="general"`` (the default), ``F_k`` is the union of the overlap
subsets ``O(i, k)`` for ``i < k``: the generators shared by ``J_i`` and ``J_k``
that commute with every block strictly between them.  With
``overlaps="adjacent"``, ``F_k = J_{k-1} & J_k``.  The two agree unless some
generator is shared across a commuting spacer; only the general form is
invariant under Cartier-Foata moves.

Defects are recorded as the value pairs ``(w_{k-1}(q), w_{k-1}(p))``, i.e. as
reflections in the left inversion set of ``w_{k-1}``; in that form they do
not depend on the representative of a mask class.
"""

from __future__ import annotations

import json
from collections import deque
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from functools import cached_property

from .coxeter import (
    GenSet,
    Permutation,
    Window,
    demazure_leading,
    gens_commute,
    left_descents,
    min_coset_windows,
    overlap_subsets,
    parabolic_windows,
    right_descents,
    runs,
    w_compose,
    w_demazure,
    w_identity,
    w_inverse,
    w_length,
    w_sort_intervals,
)
from .hecke import (
    NoPolynomialQuotientError,
    expand_in_kl_basis,
    schur_quotient,
)
from .laurent import InexactDivisionError, LaurentPoly

Pair = tuple[int, int]


# ---------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class Factorization:
    """A sequence of generator subsets ``J_1, ..., J_r`` of S_n."""

    n: int
    blocks: tuple[GenSet, ...] = ()

    def __post_init__(self) -> None:
        blocks = tuple(self.blocks)
        object.__setattr__(self, "blocks", blocks)
        for J in blocks:
            if J.n != self.n:
                raise ValueError(f"block {J!r} does not live in S_{self.n}")

    @classmethod
    def of(cls, n: int, blocks: Sequence[Sequence[int]]) -> Factorization:
        """Build from plain generator lists, e.g. ``Factorization.of(4, [[2], [1, 3], [2]])``."""
        return cls(n, tuple(GenSet(b, n) for b in blocks))

    @classmethod
    def from_json(cls, data: str | dict) -> Factorization:
        if isinstance(data, str):
            data = json.loads(data)
        return cls.of(int(data["n"]), data["blocks"])

    def to_json(self) -> dict:
        return {"n": self.n, "blocks": self.as_lists()}

    def as_lists(self) -> list[list[int]]:
        return [J.sorted() for J in self.blocks]

    @property
    def r(self) -> int:
        return len(self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self) -> Iterator[GenSet]:
        return iter(self.blocks)

    def __getitem__(self, k: int) -> GenSet:
        return self.blocks[k]

    @cached_property
    def leading(self) -> Permutation:
        """``w(J)``, the Bruhat-maximal product of the blocks."""
        return demazure_leading(self.blocks, self.n)

    def upslice(self, k: int) -> Factorization:
        """The first ``k`` blocks."""
        return Factorization(self.n, self.blocks[:k])

    def slice(self, i: int, k: int) -> Factorization:
        """Blocks ``J_i, ..., J_k`` (1-based, inclusive)."""
        return Factorization(self.n, self.blocks[i - 1 : k])

    def reversed(self) -> Factorization:
        """``J_r, ..., J_1``; its leading element is ``w(J)^-1``."""
        return Factorization(self.n, self.blocks[::-1])

    def mirrored(self) -> Factorization:
        """Image under the diagram symmetry ``s_i -> s_{n-i}``."""
        return Factorization(self.n, tuple(GenSet((self.n - g for g in J), self.n) for J in self.blocks))

    def without_empty(self) -> Factorization:
        return Factorization(self.n, tuple(J for J in self.blocks if J))

    def key(self) -> tuple[int, tuple[tuple[int, ...], ...]]:
        return (self.n, tuple(tuple(J.sorted()) for J in self.blocks))

    def __str__(self) -> str:
        return "(" + ", ".join("{" + str(J) + "}" for J in self.blocks) + ")"


def _comps(f: Factorization) -> list[tuple[tuple[int, int], ...]]:
    return [J.components for J in f.blocks]


def _overlap_map(f: Factorization, overlaps: str) -> dict[tuple[int, int], GenSet]:
    return overlap_subsets(f.blocks, overlaps)


def _left_overlaps(f: Factorization, overlaps: str) -> list[tuple[tuple[int, int], ...]]:
    """Per level ``k``, the components of the union of all ``O(i, k)`` with ``i < k``."""
    gens: list[set[int]] = [set() for _ in range(f.r)]
    for (_i, k), K in _overlap_map(f, overlaps).items():
        gens[k] |= K.generators
    return [runs(g) for g in gens]


def _right_overlaps(
    f: Factorization, overlaps: str
) -> list[list[tuple[int, tuple[tuple[int, int], ...]]]]:
    """Per level ``i``, the pairs ``(k, components of O(i, k))`` with ``k > i``."""
    out: list[list[tuple[int, tuple[tuple[int, int], ...]]]] = [[] for _ in range(f.r)]
    for (i, k), K in sorted(_overlap_map(f, overlaps).items()):
        out[i].append((k, K.components))
    return out


@dataclass(frozen=True)
class Mask:
    """A sequence ``sigma_k`` in ``W_{J_k}``."""

    parts: tuple[Permutation, ...]
    n: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "parts", tuple(self.parts))
        if any(s.n != self.n for s in self.parts):
            raise ValueError("mask parts have mismatched sizes")

    @classmethod
    def of(cls, n: int, parts: Sequence[Sequence[int] | Permutation | str]) -> Mask:
        perms = []
        for p in parts:
            if isinstance(p, Permutation):
                perms.append(p)
            elif isinstance(p, str):
                perms.append(Permutation.parse(p))
            else:
                perms.append(Permutation.from_word(p, n))
        return cls(tuple(perms), n)

    @classmethod
    def identity(cls, f: Factorization) -> Mask:
        e = Permutation.identity(f.n)
        return cls((e,) * f.r, f.n)

    @cached_property
    def target(self) -> Permutation:
        w = w_identity(self.n)
        for s in self.parts:
            w = w_compose(w, s.window)
        return Permutation(w)

    def partial(self, k: int) -> Window:
        """Window of ``w_k = sigma_1 ... sigma_k``."""
        w = w_identity(self.n)
        for s in self.parts[:k]:
            w = w_compose(w, s.window)
        return w

    def windows(self) -> tuple[Window, ...]:
        return tuple(s.window for s in self.parts)

    def __str__(self) -> str:
        return "(" + ", ".join(str(s) for s in self.parts) + ")"


def check_mask(f: Factorization, sigma: Mask) -> None:
    """Raise ``ValueError`` unless every ``sigma_k`` lies in ``W_{J_k}``."""
    if sigma.n != f.n or len(sigma.parts) != f.r:
        raise ValueError(f"mask {sigma} does not match factorization {f}")
    for k, (J, s) in enumerate(zip(f.blocks, sigma.parts), 1):
        if w_sort_intervals(s.window, J.components) != w_identity(f.n):
            raise ValueError(f"part {k} of {sigma} is not in the parabolic subgroup of {{{J}}}")


@dataclass(frozen=True)
class MaskClass:
    """A mask class, represented by its canonical (fiber-product normal form) mask."""

    canonical: Mask
    d_R: int

    @property
    def target(self) -> Permutation:
        return self.canonical.target


@dataclass(frozen=True)
class DefectData:
    """The defect statistic of a mask.

    ``per_level[k-1]`` holds the reflections (value pairs) contributed by level
    ``k``; ``positions[k-1]`` holds the corresponding position pairs, which
    depend on the chosen representative of the mask class.
    """

    d_R: int
    per_level: tuple[frozenset[Pair], ...]
    positions: tuple[frozenset[Pair], ...] = field(compare=False)


@dataclass(frozen=True)
class DefectFamily:
    """The defect polynomials ``P^J_x`` (polynomials in ``q``) and ``w(J)``."""

    leading: Permutation
    polys: dict[Permutation, LaurentPoly]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DefectFamily):
            return NotImplemented
        return self.leading == other.leading and self.polys == other.polys

    def __getitem__(self, x: Permutation) -> LaurentPoly:
        return self.polys.get(x, LaurentPoly())

    def to_json(self) -> dict:
        keys = sorted(self.polys, key=Permutation.sort_key)
        return {
            "leading": str(self.leading),
            "polys": {str(x): self.polys[x].render("q") for x in keys},
        }


# ---------------------------------------------------------------------------
# defects


def _fresh_pairs(f: Factorization, overlaps: str = "general") -> list[list[Pair]]:
    """Per level, the position pairs that meet freshly in a block component."""
    out = []
    for J, kc in zip(f.blocks, _left_overlaps(f, overlaps)):
        pairs = []
        for a, b in J.components:
            for p in range(a, b + 1):
                for q in range(p + 1, b + 1):
                    if not any(c <= p and q <= d for c, d in kc):
                        pairs.append((p, q))
        out.append(pairs)
    return out


def defect_data(f: Factorization, sigma: Mask, overlaps: str = "general") -> DefectData:
    check_mask(f, sigma)
    fresh = _fresh_pairs(f, overlaps)
    w = w_identity(f.n)
    refl: list[frozenset[Pair]] = []
    pos: list[frozenset[Pair]] = []
    for pairs, s in zip(fresh, sigma.parts):
        hit = [(p, q) for p, q in pairs if w[p - 1] > w[q - 1]]
        pos.append(frozenset(hit))
        refl.append(frozenset((w[q - 1], w[p - 1]) for p, q in hit))
        w = w_compose(w, s.window)
    return DefectData(sum(len(x) for x in refl), tuple(refl), tuple(pos))


def string_position(sigma: Mask, p: int, k: int) -> int:
    """``(sigma_1 ... sigma_k)^-1 (p)``."""
    if not 0 <= k <= len(sigma.parts):
        raise ValueError(f"level {k} out of range 0..{len(sigma.parts)}")
    if not 1 <= p <= sigma.n:
        raise ValueError(f"position {p} out of range")
    return w_inverse(sigma.partial(k))[p - 1]


# ---------------------------------------------------------------------------
# mask classes


def canonicalize(f: Factorization, sigma: Mask, overlaps: str = "general") -> Mask:
    """Fiber-product normal form by one left-to-right sweep.

    ``sigma_i = tau_i u`` with ``u`` in the subgroup generated by all overlaps
    ``O(i, k)``, ``k > i``, and ``tau_i`` minimal.  The overlaps of one block
    commute, so ``u`` splits into pieces ``u_k``; each ``u_k`` is pushed into
    ``sigma_k``.  It commutes with every block in between, so the target is
    unchanged.
    """
    check_mask(f, sigma)
    parts = list(sigma.windows())
    _canonicalize_raw(parts, _right_overlaps(f, overlaps))
    return Mask(tuple(Permutation(p) for p in parts), f.n)


def _restrict(u: Window, intervals: Sequence[tuple[int, int]]) -> Window:
    """The factor of ``u`` acting on ``intervals`` (which ``u`` must preserve)."""
    out = list(range(1, len(u) + 1))
    for a, b in intervals:
        out[a - 1 : b] = u[a - 1 : b]
    return tuple(out)


def _canonicalize_raw(
    parts: list[Window], right: Sequence[Sequence[tuple[int, tuple[tuple[int, int], ...]]]]
) -> None:
    for i, targets in enumerate(right):
        if not targets:
            continue
        s = parts[i]
        tau = w_sort_intervals(s, [c for _k, kc in targets for c in kc])
        if tau == s:
            continue
        u = w_compose(w_inverse(tau), s)
        parts[i] = tau
        for k, kc in targets:
            uk = _restrict(u, kc)
            if uk != w_identity(len(u)):
                parts[k] = w_compose(uk, parts[k])


def _class_choices(f: Factorization, overlaps: str = "general") -> list[list[Window]]:
    comps = _comps(f)
    out = []
    for i, targets in enumerate(_right_overlaps(f, overlaps)):
        if targets:
            sub = runs(g for _k, kc in targets for a, b in kc for g in range(a, b))
            out.append(min_coset_windows(f.n, comps[i], sub))
        else:
            out.append(parabolic_windows(f.n, comps[i]))
    return out


def _walk(
    f: Factorization, choices: list[list[Window]], overlaps: str = "general"
) -> Iterator[tuple[tuple[Window, ...], Window, int]]:
    """Depth-first walk over ``choices[0] x ... x choices[r-1]``.

    Yields ``(parts, target, d_R)``; each level's defect count depends only on
    the partial product entering it, so it is computed once per prefix.
    """
    fresh = _fresh_pairs(f, overlaps)
    r = f.r
    if r == 0:
        yield ((), w_identity(f.n), 0)
        return
    parts: list[Window] = [()] * r

    def rec(k: int, w: Window, d: int) -> Iterator[tuple[tuple[Window, ...], Window, int]]:
        d += sum(1 for p, q in fresh[k] if w[p - 1] > w[q - 1])
        last = k + 1 == r
        for s in choices[k]:
            parts[k] = s
            ws = w_compose(w, s)
            if last:
                yield (tuple(parts), ws, d)
            else:
                yield from rec(k + 1, ws, d)

    yield from rec(0, w_identity(f.n), 0)


def iter_classes_raw(
    f: Factorization, overlaps: str = "general"
) -> Iterator[tuple[tuple[Window, ...], Window, int]]:
    """Canonical mask classes as raw ``(parts, target, d_R)`` triples."""
    return _walk(f, _class_choices(f, overlaps), overlaps)


def iter_masks_raw(
    f: Factorization, overlaps: str = "general"
) -> Iterator[tuple[tuple[Window, ...], Window, int]]:
    """Every mask (not just class representatives) as raw triples."""
    return _walk(f, [parabolic_windows(f.n, c) for c in _comps(f)], overlaps)


def enumerate_mask_classes(f: Factorization, overlaps: str = "general") -> Iterator[MaskClass]:
    for parts, _target, d in iter_classes_raw(f, overlaps):
        yield MaskClass(Mask(tuple(Permutation(p) for p in parts), f.n), d)


def class_count(f: Factorization, overlaps: str = "general") -> int:
    """``prod_i [W_{J_i} : W_{R_i}]`` where ``R_i`` joins the overlaps ``O(i, k)``, ``k > i``."""
    total = 1
    for choice in _class_choices(f, overlaps):
        total *= len(choice)
    return total


# ---------------------------------------------------------------------------
# defect polynomials, admissibility, tightness


def _family(leading: Window, acc: dict[Window, dict[int, int]]) -> DefectFamily:
    return DefectFamily(
        Permutation(leading),
        {Permutation(x): LaurentPoly(c) for x, c in acc.items()},
    )


def defect_polynomials(f: Factorization, overlaps: str = "general") -> DefectFamily:
    """``P^J_x = sum over classes with target x of q^{d_R}``."""
    acc: dict[Window, dict[int, int]] = {}
    for _parts, x, d in iter_classes_raw(f, overlaps):
        c = acc.setdefault(x, {})
        c[2 * d] = c.get(2 * d, 0) + 1
    return _family(f.leading.window, acc)


def resolution_dimension(f: Factorization, overlaps: str = "general") -> int:
    """``sum_k l(w0(J_k)) - sum_{i<k} l(w0(O(i, k)))``.

    This is the power ``D`` with ``C'_{J_1} ... C'_{J_r} = prod pi(O(i, k))
    * v^{-D} sum_x P^J_x T_x``; it equals ``l(w(J))`` exactly when the blocks
    multiply without redundancy.
    """

    def top(J: GenSet) -> int:
        return sum((b - a + 1) * (b - a) // 2 for a, b in J.components)

    return sum(top(J) for J in f.blocks) - sum(top(K) for K in _overlap_map(f, overlaps).values())


def defect_polynomials_via_hecke(f: Factorization, overlaps: str = "general") -> DefectFamily:
    """Read ``P^J_x`` off the Schur quotient as ``v^{l(w(J))}`` times the ``T_x`` coefficient.

    Raises :class:`InexactDivisionError` if the quotient does not exist and
    :class:`NoPolynomialQuotientError` if the rescaled coefficients are not
    polynomials in ``q``.
    """
    h = schur_quotient(f.blocks, f.n, overlaps)
    lw = f.leading.length
    polys = {}
    for x, c in h.terms.items():
        p = c.shift(lw)
        if not p.is_q_polynomial():
            raise NoPolynomialQuotientError(
                f"coefficient {p.render('v')} at {x} is not a polynomial in q for {f}"
            )
        polys[x] = p
    return DefectFamily(f.leading, polys)


def is_admissible(f: Factorization, overlaps: str = "general") -> bool:
    return defect_polynomials(f, overlaps)[f.leading] == LaurentPoly.monomial(0)


def is_tight(f: Factorization, overlaps: str = "general") -> tuple[bool, MaskClass | None]:
    """Check ``l(w(J)) - l(target) > 2 d_R`` for every class with ``d_R > 0``.

    Returns ``(True, None)`` or ``(False, first violating class)``.
    """
    lw = f.leading.length
    for parts, x, d in iter_classes_raw(f, overlaps):
        if d and lw - w_length(x) <= 2 * d:
            return False, MaskClass(Mask(tuple(Permutation(p) for p in parts), f.n), d)
    return True, None


def is_tight_via_hecke(f: Factorization, overlaps: str = "general") -> bool:
    """True iff the Schur quotient is the single basis element ``C'_{w(J)}``."""
    try:
        h = schur_quotient(f.blocks, f.n, overlaps)
    except InexactDivisionError:
        return False
    return expand_in_kl_basis(h) == {f.leading: LaurentPoly.monomial(0)}


# ---------------------------------------------------------------------------
# per-component statistics


@dataclass(frozen=True)
class ComponentStats:
    """Meeting statistics of the strings entering one block component.

    Pairs are value pairs ``(a, b)`` with ``a < b`` (string labels).
    """

    level: int
    interval: tuple[int, int]
    rmeet: frozenset[Pair]
    rdef: frozenset[Pair]
    rcross: frozenset[Pair]
    rbounce: frozenset[Pair]


def component_stats(
    f: Factorization, sigma: Mask, overlaps: str = "general"
) -> list[ComponentStats]:
    """Per block component: fresh meetings, defects, crossings and bounces."""
    check_mask(f, sigma)
    ovl = _left_overlaps(f, overlaps)
    w = w_identity(f.n)
    out = []
    for k, (J, s) in enumerate(zip(f.blocks, sigma.parts), 1):
        nxt = w_compose(w, s.window)
        inv_prev = w_inverse(w)
        inv_next = w_inverse(nxt)
        kc = ovl[k - 1]
        for a, b in J.components:
            meet, dfc, cross = set(), set(), set()
            for p in range(a, b + 1):
                for q in range(p + 1, b + 1):
                    x, y = sorted((w[p - 1], w[q - 1]))
                    before = inv_prev[x - 1] > inv_prev[y - 1]
                    after = inv_next[x - 1] > inv_next[y - 1]
                    if before != after:
                        cross.add((x, y))
                    if not any(c <= p and q <= d for c, d in kc):
                        meet.add((x, y))
                        if before:
                            dfc.add((x, y))
            out.append(
                ComponentStats(
                    k, (a, b), frozenset(meet), frozenset(dfc), frozenset(cross), frozenset(meet - cross)
                )
            )
        w = nxt
    return out


# ---------------------------------------------------------------------------
# contraction and Cartier-Foata equivalence


def _gens(a: int, b: int) -> frozenset[int]:
    return frozenset(range(a, b))


def contract_once(f: Factorization) -> list[Factorization]:
    """All factorizations obtained by one legal removal of a block component.

    A component ``C`` of ``J_i`` may be removed when ``C`` lies inside some
    other block ``J_k`` and commutes with every block strictly between.
    Empty blocks are dropped; outputs are distinct and listed in discovery
    order.
    """
    out: list[Factorization] = []
    seen: set = set()
    for i, J in enumerate(f.blocks):
        for a, b in J.components:
            C = _gens(a, b)
            for k, K in enumerate(f.blocks):
                if k == i or not C <= K.generators:
                    continue
                lo, hi = sorted((i, k))
                if not all(gens_commute(C, f.blocks[j].generators) for j in range(lo + 1, hi)):
                    continue
                blocks = list(f.blocks)
                blocks[i] = GenSet(J.generators - C, f.n)
                g = Factorization(f.n, tuple(blocks)).without_empty()
                if g.leading != f.leading:
                    raise AssertionError(f"contraction {f} -> {g} changed the leading element")
                if g.key() not in seen:
                    seen.add(g.key())
                    out.append(g)
    return out


def minimal_contractions(f: Factorization) -> list[Factorization]:
    """All factorizations reachable by contractions that admit no further contraction."""
    out: dict = {}
    seen: set = {f.key()}
    todo = [f]
    while todo:
        g = todo.pop()
        nxt = contract_once(g)
        if not nxt:
            out.setdefault(g.key(), g)
        for h in nxt:
            if h.key() not in seen:
                seen.add(h.key())
                todo.append(h)
    return [out[k] for k in sorted(out)]


def _pieces(f: Factorization) -> list[tuple[int, frozenset[int]]]:
    return [(k, _gens(a, b)) for k, J in enumerate(f.blocks) for a, b in J.components]


def cf_normal_form(f: Factorization) -> Factorization:
    """Cartier-Foata normal form: every component moved as early as it can go.

    Each component lands one level after the latest earlier component it does
    not commute with; components never merge since commuting components are
    at distance at least two.
    """
    pieces = _pieces(f)
    level: list[int] = []
    for idx, (k, C) in enumerate(pieces):
        lv = 0
        for jdx in range(idx):
            kj, D = pieces[jdx]
            if kj < k and not gens_commute(C, D):
                lv = max(lv, level[jdx])
        level.append(lv + 1)
    top = max(level, default=0)
    blocks = [set() for _ in range(top)]
    for (_k, C), lv in zip(pieces, level):
        blocks[lv - 1] |= C
    return Factorization(f.n, tuple(GenSet(b, f.n) for b in blocks))


def equivalent(f: Factorization, g: Factorization) -> bool:
    return f.n == g.n and cf_normal_form(f).key() == cf_normal_form(g).key()


def cf_moves(f: Factorization) -> list[Factorization]:
    """All factorizations one component move away from ``f``.

    A component of ``J_i`` can join another block ``J_l``, or form a new block
    at any gap, provided it commutes with every block it passes and with
    ``J_l`` itself.  Empty blocks are dropped.
    """
    out: dict = {}
    r = f.r
    for i, J in enumerate(f.blocks):
        for a, b in J.components:
            C = _gens(a, b)
            rest = GenSet(J.generators - C, f.n)

            def passes(lo: int, hi: int) -> bool:
                return all(gens_commute(C, f.blocks[j].generators) for j in range(lo, hi))

            # join an existing block l
            for l, L in enumerate(f.blocks):
                if l == i or not gens_commute(C, L.generators):
                    continue
                lo, hi = (l + 1, i) if l < i else (i + 1, l)
                if not passes(lo, hi):
                    continue
                blocks = list(f.blocks)
                blocks[i] = rest
                blocks[l] = GenSet(L.generators | C, f.n)
                g = Factorization(f.n, tuple(blocks)).without_empty()
                out.setdefault(g.key(), g)
            # form a new block in gap t (before block t), t in 0..r
            for t in range(r + 1):
                if t in (i, i + 1) and not rest:
                    continue
                lo, hi = (t, i) if t <= i else (i + 1, t)
                if not passes(lo, hi):
                    continue
                blocks = list(f.blocks)
                blocks[i] = rest
                blocks.insert(t, GenSet(C, f.n))
                g = Factorization(f.n, tuple(blocks)).without_empty()
                if g.key() != f.key():
                    out.setdefault(g.key(), g)
    out.pop(f.key(), None)
    return [out[k] for k in sorted(out)]


def cf_orbit(f: Factorization, limit: int = 100_000) -> list[Factorization]:
    """Breadth-first closure of ``f`` under single component moves."""
    f = f.without_empty()
    seen = {f.key(): f}
    queue = deque([f])
    while queue:
        g = queue.popleft()
        for h in cf_moves(g):
            if h.key() not in seen:
                if len(seen) >= limit:
                    raise RuntimeError(f"Cartier-Foata orbit of {f} exceeds {limit} elements")
                seen[h.key()] = h
                queue.append(h)
    return [seen[k] for k in sorted(seen)]


# ---------------------------------------------------------------------------
# descent-type predicates


def _outward_components_ok(f: Factorization, descents: GenSet, later: bool) -> bool:
    comps = set(descents.components)
    for i, J in enumerate(f.blocks):
        others = f.blocks[i + 1 :] if later else f.blocks[:i]
        for a, b in J.components:
            C = _gens(a, b)
            if all(gens_commute(C, K.generators) for K in others) and (a, b) not in comps:
                return False
    return True


def is_rdes_factorization(f: Factorization) -> bool:
    """Components of ``J_i`` commuting with all later blocks are components of ``rdes(w(J))``."""
    return _outward_components_ok(f, right_descents(f.leading), later=True)


def is_ldes_factorization(f: Factorization) -> bool:
    """Components of ``J_i`` commuting with all earlier blocks are components of ``ldes(w(J))``."""
    return _outward_components_ok(f, left_descents(f.leading), later=False)


def is_bidescent(f: Factorization) -> bool:
    return is_rdes_factorization(f) and is_ldes_factorization(f)


def is_absolutely_bidescent(f: Factorization) -> bool:
    """Every contiguous slice of every Cartier-Foata equivalent sequence is bidescent."""
    for g in cf_orbit(f):
        for i in range(1, g.r + 1):
            for k in range(i, g.r + 1):
                if not is_bidescent(g.slice(i, k)):
                    return False
    return True


def reduced_word_factorization(w: Permutation, word: Sequence[int] | None = None) -> Factorization:
    """Singleton blocks ``({i_1}, ..., {i_k})`` along a reduced word of ``w``."""
    if word is None:
        word = w.reduced_word()
    return Factorization.of(w.n, [[i] for i in word])


def all_reduced_words(w: Permutation) -> list[list[int]]:
    """Every reduced word of ``w``, lexicographically."""
    out: list[list[int]] = []

    def rec(x: Window, suffix: list[int]) -> None:
        desc = [i for i in range(1, len(x)) if x[i - 1] > x[i]]
        if not desc:
            out.append(suffix[::-1])
            return
        for i in desc:
            y = list(x)
            y[i - 1], y[i] = y[i], y[i - 1]
            rec(tuple(y), suffix + [i])

    rec(w.window, [])
    out.sort()
    return out


def iter_factorizations(
    n: int, max_blocks: int, max_block_size: int | None = None, min_blocks: int = 1
) -> Iterator[Factorization]:
    """All factorizations of S_n with nonempty blocks, ``min_blocks <= r <= max_blocks``."""
    from itertools import combinations, product

    gens = range(1, n)
    top = n - 1 if max_block_size is None else min(max_block_size, n - 1)
    subsets = [GenSet(c, n) for size in range(1, top + 1) for c in combinations(gens, size)]
    for r in range(min_blocks, max_blocks + 1):
        for blocks in product(subsets, repeat=r):
            yield Factorization(n, blocks)


def leading_window(f: Factorization) -> Window:
    return w_demazure(f.n, _comps(f))


__all__ = [
    "ComponentStats",
    "DefectData",
    "DefectFamily",
    "Factorization",
    "Mask",
    "MaskClass",
    "all_reduced_words",
    "canonicalize",
    "cf_moves",
    "cf_normal_form",
    "cf_orbit",
    "check_mask",
    "class_count",
    "component_stats",
    "contract_once",
    "defect_data",
    "defect_polynomials",
    "defect_polynomials_via_hecke",
    "enumerate_mask_classes",
    "equivalent",
    "is_absolutely_bidescent",
    "is_admissible",
    "is_bidescent",
    "is_ldes_factorization",
    "is_rdes_factorization",
    "is_tight",
    "is_tight_via_hecke",
    "iter_classes_raw",
    "iter_factorizations",
    "iter_masks_raw",
    "minimal_contractions",
    "reduced_word_factorization",
    "resolution_dimension",
    "string_position",
]
