"""Hecke algebra of S_n over ``Z[v, v^-1]`` and its Kazhdan-Lusztig basis.

Conventions: ``q = v^2``,

* ``T_w T_s = T_{ws}`` if ``ws > w`` and ``q T_{ws} + (q - 1) T_w`` otherwise,
* ``C'_w = v^{-l(w)} sum_x P_{x,w}(q) T_x``,
* the bar involution sends ``v -> v^-1`` and ``T_w -> T_{w^-1}^{-1}``.

Coefficients are kept internally as plain ``{exponent of v: int}`` dicts and
Kazhdan-Lusztig polynomials as tuples of coefficients in ``q``; the public
surface speaks :class:`~klfactor.laurent.LaurentPoly` and
:class:`~klfactor.coxeter.Permutation`.
"""

from __future__ import annotations

import threading
from collections.abc import Iterable, Mapping, Sequence
from functools import lru_cache

from .coxeter import (
    GenSet,
    Permutation,
    Window,
    overlap_subsets,
    w_identity,
    w_inverse,
    w_length,
    w_lswap,
    w_reduced_word,
    w_rswap,
)
from .laurent import InexactDivisionError, LaurentPoly, exact_div

Raw = dict[Window, dict[int, int]]


class NoPolynomialQuotientError(InexactDivisionError):
    """The Schur quotient exists but does not normalize to polynomials in ``q``."""


# ---------------------------------------------------------------------------
# raw coefficient arithmetic


def _acc(target: dict[int, int], p: Mapping[int, int], shift: int = 0, scale: int = 1) -> None:
    for e, k in p.items():
        e += shift
        s = target.get(e, 0) + scale * k
        if s:
            target[e] = s
        else:
            del target[e]


def _clean(raw: Raw) -> Raw:
    return {w: c for w, c in raw.items() if c}


def _rmul_gen(raw: Raw, i: int) -> Raw:
    """``h * T_{s_i}``."""
    out: Raw = {}
    for w, c in raw.items():
        ws = w_rswap(w, i)
        if w[i - 1] < w[i]:
            _acc(out.setdefault(ws, {}), c)
        else:
            _acc(out.setdefault(ws, {}), c, 2)
            tgt = out.setdefault(w, {})
            _acc(tgt, c, 2)
            _acc(tgt, c, 0, -1)
    return _clean(out)


def _lmul_gen(raw: Raw, i: int) -> Raw:
    """``T_{s_i} * h``."""
    out: Raw = {}
    for w, c in raw.items():
        sw = w_lswap(w, i)
        if w.index(i) < w.index(i + 1):
            _acc(out.setdefault(sw, {}), c)
        else:
            _acc(out.setdefault(sw, {}), c, 2)
            tgt = out.setdefault(w, {})
            _acc(tgt, c, 2)
            _acc(tgt, c, 0, -1)
    return _clean(out)


def _add(a: Raw, b: Raw, scale: int = 1, shift: int = 0) -> Raw:
    out = {w: dict(c) for w, c in a.items()}
    for w, c in b.items():
        _acc(out.setdefault(w, {}), c, shift, scale)
    return _clean(out)


def _scale(raw: Raw, p: Mapping[int, int]) -> Raw:
    out: Raw = {}
    for w, c in raw.items():
        acc: dict[int, int] = {}
        for e1, k1 in c.items():
            for e2, k2 in p.items():
                acc[e1 + e2] = acc.get(e1 + e2, 0) + k1 * k2
        acc = {e: k for e, k in acc.items() if k}
        if acc:
            out[w] = acc
    return out


def _shift(raw: Raw, k: int) -> Raw:
    return {w: {e + k: c for e, c in cs.items()} for w, cs in raw.items()}


def _rmul_T(raw: Raw, x: Window) -> Raw:
    for i in w_reduced_word(x):
        raw = _rmul_gen(raw, i)
    return raw


def _mul(a: Raw, b: Raw) -> Raw:
    out: Raw = {}
    for x, c in b.items():
        part = _scale(_rmul_T(a, x), c)
        for w, p in part.items():
            _acc(out.setdefault(w, {}), p)
    return _clean(out)


def _rmul_parabolic_sum(raw: Raw, intervals: Iterable[tuple[int, int]]) -> Raw:
    """``h * sum_{x in W_J} T_x`` via the factorization into ``X_1 ... X_{m-1}``.

    For a component on positions ``[a, b]`` the sum over its symmetric group is
    ``X_1 X_2 ... X_{m-1}`` with ``X_k = 1 + T_k + T_k T_{k-1} + ... + T_k ... T_1``
    (indices shifted by ``a - 1``).
    """
    for a, b in intervals:
        for k in range(a, b):
            acc = raw
            g = raw
            for j in range(k, a - 1, -1):
                g = _rmul_gen(g, j)
                acc = _add(acc, g)
            raw = acc
    return raw


# ---------------------------------------------------------------------------
# HeckeElt


class HeckeElt:
    """A finite combination ``sum_w c_w T_w`` in the Hecke algebra of S_n."""

    __slots__ = ("n", "_t")

    def __init__(self, n: int, terms: Mapping[Permutation, LaurentPoly | int] | None = None):
        self.n = n
        raw: Raw = {}
        for w, c in (terms or {}).items():
            if w.n != n:
                raise ValueError(f"term {w} does not lie in S_{n}")
            if isinstance(c, int):
                c = LaurentPoly.monomial(0, c)
            _acc(raw.setdefault(w.window, {}), c.coeffs)
        self._t = _clean(raw)

    @classmethod
    def _wrap(cls, n: int, raw: Raw) -> HeckeElt:
        h = object.__new__(cls)
        h.n = n
        h._t = raw
        return h

    @classmethod
    def T(cls, w: Permutation, coeff: LaurentPoly | int = 1) -> HeckeElt:
        return cls(w.n, {w: coeff})

    @classmethod
    def zero(cls, n: int) -> HeckeElt:
        return cls._wrap(n, {})

    @classmethod
    def one(cls, n: int) -> HeckeElt:
        return cls._wrap(n, {w_identity(n): {0: 1}})

    # -- access -------------------------------------------------------------

    @property
    def terms(self) -> dict[Permutation, LaurentPoly]:
        return {Permutation(w): LaurentPoly(c) for w, c in self._t.items()}

    def coeff(self, w: Permutation) -> LaurentPoly:
        return LaurentPoly(self._t.get(w.window, {}))

    def support(self) -> list[Permutation]:
        return sorted((Permutation(w) for w in self._t), key=Permutation.sort_key)

    def __len__(self) -> int:
        return len(self._t)

    def __bool__(self) -> bool:
        return bool(self._t)

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: HeckeElt) -> None:
        if self.n != other.n:
            raise ValueError(f"mismatched sizes {self.n} and {other.n}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HeckeElt):
            return NotImplemented
        return self.n == other.n and self._t == other._t

    def __hash__(self) -> int:
        return hash((self.n, frozenset((w, frozenset(c.items())) for w, c in self._t.items())))

    def __add__(self, other: HeckeElt) -> HeckeElt:
        self._check(other)
        return HeckeElt._wrap(self.n, _add(self._t, other._t))

    def __sub__(self, other: HeckeElt) -> HeckeElt:
        self._check(other)
        return HeckeElt._wrap(self.n, _add(self._t, other._t, scale=-1))

    def __neg__(self) -> HeckeElt:
        return HeckeElt._wrap(self.n, _scale(self._t, {0: -1}))

    def __mul__(self, other: HeckeElt | LaurentPoly | int) -> HeckeElt:
        if isinstance(other, HeckeElt):
            return mul(self, other)
        if isinstance(other, int):
            other = LaurentPoly.monomial(0, other)
        return HeckeElt._wrap(self.n, _scale(self._t, other.coeffs))

    def __rmul__(self, other: LaurentPoly | int) -> HeckeElt:
        return self * other

    def bar(self) -> HeckeElt:
        return bar(self)

    # -- text ---------------------------------------------------------------

    def to_json(self) -> list[dict[str, str]]:
        """Terms sorted by length, then window."""
        out = []
        for w in sorted(self._t, key=lambda w: (w_length(w), w)):
            out.append({"perm": " ".join(map(str, w)), "coeff": LaurentPoly(self._t[w]).render()})
        return out

    def __repr__(self) -> str:
        if not self._t:
            return f"HeckeElt(n={self.n}, 0)"
        body = " + ".join(f"({t['coeff']})T[{t['perm']}]" for t in self.to_json())
        return f"HeckeElt(n={self.n}, {body})"


def mul(h1: HeckeElt, h2: HeckeElt) -> HeckeElt:
    h1._check(h2)
    return HeckeElt._wrap(h1.n, _mul(h1._t, h2._t))


# bar(T_w) is memoized per window; it is reused heavily by bar-invariance checks
_bar_cache: dict[Window, Raw] = {}
_bar_lock = threading.Lock()


def _bar_T(w: Window) -> Raw:
    cached = _bar_cache.get(w)
    if cached is not None:
        return cached
    word = w_reduced_word(w)
    if not word:
        res: Raw = {w: {0: 1}}
    else:
        # bar(T_w) = bar(T_{w s}) * T_s^{-1} with s the last letter of the word
        i = word[-1]
        prev = _bar_T(w_rswap(w, i))
        # h * T_s^{-1} = q^{-1} h T_s + (q^{-1} - 1) h
        res = _add(_shift(_rmul_gen(prev, i), -2), _shift(prev, -2))
        res = _add(res, prev, scale=-1)
    with _bar_lock:
        _bar_cache[w] = res
    return res


def bar(h: HeckeElt) -> HeckeElt:
    out: Raw = {}
    for w, c in h._t.items():
        cb = {-e: k for e, k in c.items()}
        for x, p in _scale(_bar_T(w), cb).items():
            _acc(out.setdefault(x, {}), p)
    return HeckeElt._wrap(h.n, _clean(out))


# ---------------------------------------------------------------------------
# Kazhdan-Lusztig polynomials

QPoly = tuple[int, ...]


def _qadd_into(acc: list[int], p: QPoly, shift: int = 0, scale: int = 1) -> None:
    need = len(p) + shift
    if len(acc) < need:
        acc.extend([0] * (need - len(acc)))
    for i, k in enumerate(p):
        if k:
            acc[i + shift] += scale * k


def _qtrim(acc: list[int]) -> QPoly:
    while acc and acc[-1] == 0:
        acc.pop()
    return tuple(acc)


class KLTable:
    """Lazily computed Kazhdan-Lusztig polynomials of S_n.

    Columns ``x -> P_{x,w}`` are computed on demand by the standard recursion
    on length, pivoting on the smallest-index left descent of ``w``, and are
    memoized.  Once computed a column never changes.
    """

    def __init__(self, n: int):
        self.n = n
        self._cols: dict[Window, dict[Window, QPoly]] = {w_identity(n): {w_identity(n): (1,)}}
        self._lock = threading.RLock()

    def _column(self, w: Window) -> dict[Window, QPoly]:
        col = self._cols.get(w)
        if col is not None:
            return col
        with self._lock:
            col = self._cols.get(w)
            if col is None:
                col = self._compute(w)
                self._cols[w] = col
        return col

    def _compute(self, w: Window) -> dict[Window, QPoly]:
        inv = w_inverse(w)
        i = next(i for i in range(1, self.n) if inv[i - 1] > inv[i])
        v = w_lswap(w, i)
        lw = w_length(w)
        pv = self._column(v)
        acc: dict[Window, list[int]] = {}
        for x, p in pv.items():
            sx = w_lswap(x, i)
            # sx > x iff value i sits left of value i+1 in x
            up = x.index(i) < x.index(i + 1)
            shift = 0 if up else 1
            _qadd_into(acc.setdefault(x, []), p, shift)
            _qadd_into(acc.setdefault(sx, []), p, shift)
        lv = lw - 1
        for z, p in pv.items():
            if z == v or z.index(i) < z.index(i + 1):
                continue
            d = lv - w_length(z)
            if d % 2 == 0:
                continue
            top = (d - 1) // 2
            mu = p[top] if top < len(p) else 0
            if not mu:
                continue
            for y, pz in self._column(z).items():
                _qadd_into(acc.setdefault(y, []), pz, (lw - w_length(z)) // 2, -mu)
        out = {}
        for y, a in acc.items():
            t = _qtrim(a)
            if t:
                out[y] = t
        return out

    # -- public ---------------------------------------------------------------

    def poly(self, x: Permutation, w: Permutation) -> LaurentPoly:
        """``P_{x,w}`` as a Laurent polynomial in ``v`` (even exponents)."""
        return LaurentPoly.from_q(self._column(w.window).get(x.window, ()))

    def q_coeffs(self, x: Permutation, w: Permutation) -> tuple[int, ...]:
        return self._column(w.window).get(x.window, ())

    def column(self, w: Permutation) -> dict[Permutation, LaurentPoly]:
        return {Permutation(x): LaurentPoly.from_q(p) for x, p in self._column(w.window).items()}

    def mu(self, x: Permutation, w: Permutation) -> int:
        d = w.length - x.length
        if d <= 0 or d % 2 == 0:
            return 0
        p = self.q_coeffs(x, w)
        top = (d - 1) // 2
        return p[top] if top < len(p) else 0

    def basis(self, w: Permutation) -> HeckeElt:
        """``C'_w``."""
        return HeckeElt._wrap(self.n, self._basis_raw(w.window))

    def _basis_raw(self, w: Window) -> Raw:
        lw = w_length(w)
        return {x: {2 * k - lw: c for k, c in enumerate(p) if c} for x, p in self._column(w).items()}


@lru_cache(maxsize=None)
def kl_table(n: int) -> KLTable:
    """The shared (lazily filled) Kazhdan-Lusztig table of S_n."""
    return KLTable(n)


def kl_basis(w: Permutation) -> HeckeElt:
    return kl_table(w.n).basis(w)


def kl_poly(x: Permutation, w: Permutation) -> LaurentPoly:
    return kl_table(w.n).poly(x, w)


# ---------------------------------------------------------------------------
# parabolic products and Schur quotients


def _q_factorial(m: int) -> list[int]:
    out = [1]
    for k in range(1, m + 1):
        nxt = [0] * (len(out) + k - 1)
        for i, c in enumerate(out):
            for j in range(k):
                nxt[i + j] += c
        out = nxt
    return out


def poincare_laurent(J: GenSet) -> LaurentPoly:
    """``v^{-l(w0(J))} sum_{u in W_J} q^{l(u)}``."""
    poly = LaurentPoly.monomial(0)
    top = 0
    for a, b in J.components:
        m = b - a + 1
        poly = poly * LaurentPoly.from_q(_q_factorial(m))
        top += m * (m - 1) // 2
    return poly.shift(-top)


def _comps_key(blocks: Sequence[GenSet]) -> tuple[tuple[tuple[int, int], ...], ...]:
    return tuple(J.components for J in blocks)


@lru_cache(maxsize=8192)
def _parabolic_product(n: int, key: tuple[tuple[tuple[int, int], ...], ...]) -> Raw:
    # product of the sums over W_{J_k} (without the normalizing v-shift);
    # prefixes are cached so factorizations sharing a prefix share work
    if not key:
        return {w_identity(n): {0: 1}}
    return _rmul_parabolic_sum(_parabolic_product(n, key[:-1]), key[-1])


def parabolic_kl_product(J_seq: Sequence[GenSet], n: int | None = None) -> HeckeElt:
    """``C'_{w0(J_1)} ... C'_{w0(J_r)}``."""
    n = _infer_n(J_seq, n)
    raw = _parabolic_product(n, _comps_key(J_seq))
    shift = -sum((b - a + 1) * (b - a) // 2 for J in J_seq for a, b in J.components)
    return HeckeElt._wrap(n, _shift(raw, shift))


def overlap_poincare(J_seq: Sequence[GenSet], overlaps: str = "general") -> LaurentPoly:
    """Product of the Laurent Poincare polynomials of the overlap subsets."""
    out = LaurentPoly.monomial(0)
    for K in overlap_subsets(J_seq, overlaps).values():
        out = out * poincare_laurent(K)
    return out


def schur_quotient(
    J_seq: Sequence[GenSet], n: int | None = None, overlaps: str = "general"
) -> HeckeElt:
    """The C'-monomial of the blocks divided by the overlap Poincare product.

    ``overlaps`` selects the general overlap subsets (the default) or only the
    adjacent overlaps ``J_k & J_{k+1}``, see :func:`~klfactor.coxeter.overlap_subsets`.
    Raises :class:`InexactDivisionError` when some coefficient is not divisible.
    """
    n = _infer_n(J_seq, n)
    prod = parabolic_kl_product(J_seq, n)
    denom = overlap_poincare(J_seq, overlaps)
    if denom == LaurentPoly.monomial(0):
        return prod
    out: Raw = {}
    for w, c in prod._t.items():
        out[w] = exact_div(LaurentPoly(c), denom).coeffs
    return HeckeElt._wrap(n, out)


def expand_in_kl_basis(h: HeckeElt) -> dict[Permutation, LaurentPoly]:
    """Coefficients ``c_w`` with ``h = sum_w c_w C'_w``."""
    table = kl_table(h.n)
    rem: Raw = {w: dict(c) for w, c in h._t.items()}
    out: dict[Permutation, LaurentPoly] = {}
    while rem:
        # a longest support element is Bruhat-maximal in the support
        x = max(rem, key=lambda w: (w_length(w), w))
        lx = w_length(x)
        c = {e + lx: k for e, k in rem[x].items()}
        out[Permutation(x)] = LaurentPoly(c)
        for y, p in _scale(table._basis_raw(x), c).items():
            _acc(rem.setdefault(y, {}), p, 0, -1)
        rem = _clean(rem)
    return out


def from_kl_coefficients(n: int, coeffs: Mapping[Permutation, LaurentPoly]) -> HeckeElt:
    """``sum_w c_w C'_w``."""
    table = kl_table(n)
    out: Raw = {}
    for w, c in coeffs.items():
        for y, p in _scale(table._basis_raw(w.window), c.coeffs).items():
            _acc(out.setdefault(y, {}), p)
    return HeckeElt._wrap(n, _clean(out))


def _infer_n(J_seq: Sequence[GenSet], n: int | None) -> int:
    if n is None:
        if not J_seq:
            raise ValueError("n is required for an empty sequence")
        n = J_seq[0].n
    if any(J.n != n for J in J_seq):
        raise ValueError("blocks have mismatched sizes")
    return n
