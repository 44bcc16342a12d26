"""Exact Laurent polynomials in one variable ``v`` over the integers.

The Hecke algebra conventions used throughout the package put ``q = v**2``,
so every half-integral power of ``q`` is an integral power of ``v``.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Mapping


class InexactDivisionError(ArithmeticError):
    """Raised when a Laurent polynomial is not divisible over the integers."""


class LaurentPoly:
    """An integer Laurent polynomial stored as ``{exponent of v: coefficient}``.

    Instances are immutable and kept in canonical form (no zero coefficients),
    so equality and hashing are structural.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        c: dict[int, int] = {}
        for e, k in items:
            if k:
                c[e] = c.get(e, 0) + k
        self._c = {e: k for e, k in c.items() if k}

    @classmethod
    def _wrap(cls, c: dict[int, int]) -> LaurentPoly:
        # caller guarantees canonical form
        p = object.__new__(cls)
        p._c = c
        return p

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> LaurentPoly:
        return cls._wrap({exponent: coeff} if coeff else {})

    @classmethod
    def from_q(cls, coeffs: Iterable[int]) -> LaurentPoly:
        """Polynomial in ``q`` from its coefficient list ``[c0, c1, ...]``."""
        return cls._wrap({2 * i: c for i, c in enumerate(coeffs) if c})

    # -- inspection ---------------------------------------------------------

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._c)

    def __getitem__(self, exponent: int) -> int:
        return self._c.get(exponent, 0)

    def __bool__(self) -> bool:
        return bool(self._c)

    def __len__(self) -> int:
        return len(self._c)

    def terms(self) -> list[tuple[int, int]]:
        """``(exponent, coefficient)`` pairs, exponent ascending."""
        return sorted(self._c.items())

    def degree(self) -> int:
        if not self._c:
            raise ValueError("degree of the zero polynomial")
        return max(self._c)

    def valuation(self) -> int:
        if not self._c:
            raise ValueError("valuation of the zero polynomial")
        return min(self._c)

    def is_q_polynomial(self) -> bool:
        """True iff every exponent of ``v`` is even and nonnegative."""
        return all(e >= 0 and e % 2 == 0 for e in self._c)

    def q_coeffs(self) -> list[int]:
        """Coefficient list in ``q``; requires :meth:`is_q_polynomial`."""
        if not self.is_q_polynomial():
            raise ValueError(f"{self} is not a polynomial in q")
        if not self._c:
            return []
        out = [0] * (max(self._c) // 2 + 1)
        for e, k in self._c.items():
            out[e // 2] = k
        return out

    def evaluate(self, v: int | float) -> int | float:
        return sum(k * v**e for e, k in self._c.items())

    # -- arithmetic ---------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.monomial(0, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        return hash(frozenset(self._c.items()))

    def __add__(self, other: LaurentPoly | int) -> LaurentPoly:
        if isinstance(other, int):
            other = LaurentPoly.monomial(0, other)
        c = dict(self._c)
        for e, k in other._c.items():
            s = c.get(e, 0) + k
            if s:
                c[e] = s
            else:
                c.pop(e, None)
        return LaurentPoly._wrap(c)

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly._wrap({e: -k for e, k in self._c.items()})

    def __sub__(self, other: LaurentPoly | int) -> LaurentPoly:
        if isinstance(other, int):
            other = LaurentPoly.monomial(0, other)
        return self + (-other)

    def __rsub__(self, other: int) -> LaurentPoly:
        return LaurentPoly.monomial(0, other) - self

    def __mul__(self, other: LaurentPoly | int) -> LaurentPoly:
        if isinstance(other, int):
            if not other:
                return ZERO
            return LaurentPoly._wrap({e: k * other for e, k in self._c.items()})
        c: dict[int, int] = {}
        for e1, k1 in self._c.items():
            for e2, k2 in other._c.items():
                e = e1 + e2
                c[e] = c.get(e, 0) + k1 * k2
        return LaurentPoly._wrap({e: k for e, k in c.items() if k})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> LaurentPoly:
        if k < 0:
            if len(self._c) != 1:
                raise InexactDivisionError(f"{self} is not a unit")
            ((e, c),) = self._c.items()
            if c not in (1, -1):
                raise InexactDivisionError(f"{self} is not a unit")
            return LaurentPoly.monomial(e * k, c ** (-k))
        out = ONE
        for _ in range(k):
            out = out * self
        return out

    def shift(self, k: int) -> LaurentPoly:
        """Multiply by ``v**k``."""
        return LaurentPoly._wrap({e + k: c for e, c in self._c.items()})

    def bar(self) -> LaurentPoly:
        """The ring involution ``v -> v**-1``."""
        return LaurentPoly._wrap({-e: k for e, k in self._c.items()})

    def exact_div(self, other: LaurentPoly) -> LaurentPoly:
        return exact_div(self, other)

    def __floordiv__(self, other: LaurentPoly) -> LaurentPoly:
        return exact_div(self, other)

    # -- text ---------------------------------------------------------------

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"

    def __str__(self) -> str:
        return self.render()

    def render(self, var: str | None = None) -> str:
        """Render with exponents ascending, e.g. ``"v^-1 + v"``.

        ``var="q"`` renders in ``q = v^2`` (all exponents must be even);
        ``var=None`` picks ``q`` when possible and ``v`` otherwise.
        """
        if var is None:
            var = "q" if all(e % 2 == 0 for e in self._c) else "v"
        if var == "q" and any(e % 2 for e in self._c):
            raise ValueError(f"odd power of v in {self.render('v')}")
        if not self._c:
            return "0"
        out = []
        for e, k in sorted(self._c.items()):
            power = e // 2 if var == "q" else e
            if power == 0:
                mono = ""
            elif power == 1:
                mono = var
            else:
                mono = f"{var}^{power}"
            mag = abs(k)
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}{mono}")
            if not out:
                out.append(body if k > 0 else f"-{body}")
            else:
                out.append(f"+ {body}" if k > 0 else f"- {body}")
        return " ".join(out)


ZERO = LaurentPoly()
ONE = LaurentPoly.monomial(0)
V = LaurentPoly.monomial(1)
Q = LaurentPoly.monomial(2)


def add(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a + b


def mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a * b


def bar(a: LaurentPoly) -> LaurentPoly:
    return a.bar()


def exact_div(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Return ``c`` with ``b * c == a``, dividing from the top exponent down.

    Raises :class:`InexactDivisionError` when no such integer ``c`` exists.
    """
    if not b:
        raise ZeroDivisionError("division by the zero Laurent polynomial")
    if not a:
        return ZERO
    db, cb = b.degree(), b[b.degree()]
    lowest = a.valuation() - b.valuation()
    rem = dict(a._c)
    quot: dict[int, int] = {}
    while rem:
        top = max(rem)
        e = top - db
        if e < lowest or rem[top] % cb:
            raise InexactDivisionError(f"{a} is not divisible by {b}")
        k = rem[top] // cb
        quot[e] = k
        for eb, kb in b._c.items():
            x = rem.get(e + eb, 0) - k * kb
            if x:
                rem[e + eb] = x
            else:
                rem.pop(e + eb, None)
    return LaurentPoly._wrap(quot)


_TERM = re.compile(r"([+-]?)\s*(\d*)\s*[*·]?\s*(?:([vq])(?:\^\(?(-?\d+)\)?)?)?\s*$")


def parse(text: str) -> LaurentPoly:
    """Parse the :meth:`LaurentPoly.render` grammar; ``q`` is read as ``v^2``."""
    s = text.strip()
    if not s:
        raise ValueError("empty polynomial")
    # split before every +/- that is not an exponent sign
    pieces = re.split(r"(?<![\^(])\s*(?=[+-])", s)
    c: dict[int, int] = {}
    for piece in pieces:
        piece = piece.strip()
        if not piece:
            continue
        m = _TERM.match(piece)
        if m is None or not (m.group(2) or m.group(3)):
            raise ValueError(f"cannot parse term {piece!r} in {text!r}")
        sign, digits, var, power = m.groups()
        k = int(digits) if digits else 1
        if sign == "-":
            k = -k
        if var is None:
            e = 0
        else:
            e = int(power) if power is not None else 1
            if var == "q":
                e *= 2
        c[e] = c.get(e, 0) + k
    return LaurentPoly(c)
