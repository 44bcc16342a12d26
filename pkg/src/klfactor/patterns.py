"""Directedness, strong right-descent intervals and monotone factorizations.

For a permutation ``w`` and a position ``p``:

* ``lambda_w(p)`` is the position of the largest value among ``w(1..p)``,
* ``rho_w(p)`` is the position of the smallest value among ``w(p..n)``,
* ``p`` is left-directed when every position left of ``lambda_w(p)`` holds a
  value below ``w(p)``, and right-directed when every position right of
  ``rho_w(p)`` holds a value above ``w(p)``;
* strong left/right-directed means ``lambda_w(p) == p`` / ``rho_w(p) == p``.

A strong right-descent interval ``[a, b]`` is a decreasing run dominating
everything to its left and dominated by everything to its right.  The
monotone-factorization algorithm peels such intervals off from the right.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .coxeter import (
    GenSet,
    Permutation,
    contains_pattern,
    w_compose,
    w_reverse_intervals,
    w_sort_intervals,
)
from .factorization import Factorization

PATTERNS = {
    "4231": Permutation((4, 2, 3, 1)),
    "45312": Permutation((4, 5, 3, 1, 2)),
    "34512": Permutation((3, 4, 5, 1, 2)),
    "45123": Permutation((4, 5, 1, 2, 3)),
}


# ---------------------------------------------------------------------------
# directedness


@dataclass(frozen=True)
class PositionProfile:
    position: int
    lam: int
    rho: int
    left_directed: bool
    right_directed: bool
    strong_left: bool
    strong_right: bool

    @property
    def directed(self) -> bool:
        return self.left_directed or self.right_directed

    @property
    def uncrossed(self) -> bool:
        return self.strong_left and self.strong_right

    @property
    def properly_directed(self) -> bool:
        return self.directed and not self.uncrossed

    def to_json(self) -> dict:
        return {
            "p": self.position,
            "lambda": self.lam,
            "rho": self.rho,
            "left_directed": self.left_directed,
            "right_directed": self.right_directed,
            "strong_left": self.strong_left,
            "strong_right": self.strong_right,
            "uncrossed": self.uncrossed,
            "properly_directed": self.properly_directed,
        }


def directedness_profile(w: Permutation) -> list[PositionProfile]:
    """One :class:`PositionProfile` per position ``1..n``."""
    win = w.window
    n = len(win)
    lam = [0] * (n + 1)
    best = 0
    for p in range(1, n + 1):
        if best == 0 or win[p - 1] > win[best - 1]:
            best = p
        lam[p] = best
    rho = [0] * (n + 2)
    best = 0
    for p in range(n, 0, -1):
        if best == 0 or win[p - 1] < win[best - 1]:
            best = p
        rho[p] = best
    out = []
    for p in range(1, n + 1):
        v = win[p - 1]
        left = all(win[x - 1] < v for x in range(1, lam[p]))
        right = all(win[x - 1] > v for x in range(rho[p] + 1, n + 1))
        out.append(PositionProfile(p, lam[p], rho[p], left, right, lam[p] == p, rho[p] == p))
    return out


# ---------------------------------------------------------------------------
# intervals


@dataclass(frozen=True)
class DescentInterval:
    """A strong right-descent interval ``[a, b]`` with directedness cutoffs.

    Positions ``a..l`` are exactly the left-directed ones and ``r..b`` exactly
    the right-directed ones.
    """

    a: int
    b: int
    l: int
    r: int

    @property
    def right_monotone(self) -> bool:
        """Every position is directed, i.e. the two directed ranges cover ``[a, b]``."""
        return self.r <= self.l + 1

    @property
    def kind(self) -> str:
        return "right-monotone" if self.right_monotone else "strong-right-descent"

    def star_intervals(self) -> tuple[tuple[int, int], tuple[int, int]]:
        """The position intervals ``[a, a+b-l-1]`` and ``[b-r+a+1, b]``."""
        a, b, l, r = self.a, self.b, self.l, self.r
        return (a, a + b - l - 1), (b - r + a + 1, b)

    def to_json(self) -> dict:
        return {"a": self.a, "b": self.b, "l": self.l, "r": self.r, "kind": self.kind}


def _cutoffs(prof: list[PositionProfile], a: int, b: int) -> tuple[int, int]:
    left = [p for p in range(a, b + 1) if prof[p - 1].left_directed]
    right = [p for p in range(a, b + 1) if prof[p - 1].right_directed]
    # both lists are nonempty: a is left-directed and b is right-directed
    return max(left), min(right)


def _is_strong_rdes_interval(win: tuple[int, ...], a: int, b: int) -> bool:
    if a >= b:
        return False
    if any(win[p - 1] < win[p] for p in range(a, b)):
        return False
    top, bottom = win[a - 1], win[b - 1]
    return all(win[x - 1] < top for x in range(1, a)) and all(
        win[x - 1] > bottom for x in range(b + 1, len(win) + 1)
    )


def strong_rdes_intervals(w: Permutation) -> list[DescentInterval]:
    """All strong right-descent intervals, left to right, with cutoffs ``l, r``."""
    win = w.window
    n = len(win)
    prof = directedness_profile(w)
    out = []
    p = 1
    while p <= n:
        q = p
        while q < n and win[q - 1] > win[q]:
            q += 1
        if _is_strong_rdes_interval(win, p, q):
            l, r = _cutoffs(prof, p, q)
            out.append(DescentInterval(p, q, l, r))
        p = q + 1
    return out


def is_strong_rdes_interval(w: Permutation, a: int, b: int) -> bool:
    return _is_strong_rdes_interval(w.window, a, b)


def is_right_monotone_interval(w: Permutation, a: int, b: int) -> bool:
    if not _is_strong_rdes_interval(w.window, a, b):
        return False
    prof = directedness_profile(w)
    return all(prof[p - 1].directed for p in range(a, b + 1))


# ---------------------------------------------------------------------------
# peeling


@dataclass(frozen=True)
class PeelStep:
    J_r: GenSet
    J_star: GenSet
    x: Permutation
    intervals: tuple[DescentInterval, ...]


@dataclass(frozen=True)
class PeelFailure:
    """Why peeling stopped: ``status`` is ``fails-45312`` or ``fails-4231``."""

    status: str
    stage: Permutation
    interval: tuple[int, int] | None

    def to_json(self) -> dict:
        out: dict = {"status": self.status, "stage": str(self.stage)}
        if self.interval is not None:
            out["interval"] = list(self.interval)
        return out


def peel_step(w: Permutation) -> PeelStep | PeelFailure:
    """Peel the strong right-descent intervals off ``w`` (which must not be the identity)."""
    if w.is_identity():
        raise ValueError("peel_step needs a non-identity permutation")
    intervals = strong_rdes_intervals(w)
    if not intervals:
        return PeelFailure("fails-4231", w, None)
    for iv in intervals:
        if not iv.right_monotone:
            return PeelFailure("fails-45312", w, (iv.a, iv.b))
    n = w.n
    J_r = GenSet.from_intervals(((iv.a, iv.b) for iv in intervals), n)
    star = [seg for iv in intervals for seg in iv.star_intervals() if seg[1] > seg[0]]
    J_star = GenSet.from_intervals(star, n)
    m = w_sort_intervals(w.window, J_r.components)
    x = w_compose(m, w_reverse_intervals(n, J_star.components))
    return PeelStep(J_r, J_star, Permutation(x), tuple(intervals))


@dataclass(frozen=True)
class MonotoneResult:
    w: Permutation
    factorization: Factorization | None
    failure: PeelFailure | None = None

    @property
    def ok(self) -> bool:
        return self.factorization is not None

    def to_json(self) -> dict:
        if self.factorization is not None:
            return {"w": str(self.w), "factorization": self.factorization.as_lists(), "status": "ok"}
        assert self.failure is not None
        return {"w": str(self.w), **self.failure.to_json()}


def monotone_factorization(w: Permutation) -> MonotoneResult:
    """Peel until the identity, prepending each ``J_r``; failures are values."""
    blocks: list[GenSet] = []
    x = w
    while not x.is_identity():
        step = peel_step(x)
        if isinstance(step, PeelFailure):
            return MonotoneResult(w, None, step)
        blocks.insert(0, step.J_r)
        x = step.x
    f = Factorization(w.n, tuple(blocks))
    if f.leading != w:
        return MonotoneResult(w, None, PeelFailure("fails-leading", w, None))
    return MonotoneResult(w, f)


# ---------------------------------------------------------------------------
# factorization-level predicates


def _blocks_are(f: Factorization, test) -> bool:
    for k in range(1, f.r + 1):
        w = f.upslice(k).leading
        if not all(test(w, a, b) for a, b in f.blocks[k - 1].components):
            return False
    return True


def is_strong_rdes_direct(f: Factorization) -> bool:
    """Every component of ``J_k`` is a strong right-descent interval of ``w(J_1..J_k)``."""
    return _blocks_are(f, is_strong_rdes_interval)


def is_strong_ldes_direct(f: Factorization) -> bool:
    return is_strong_rdes_direct(f.reversed())


def is_right_monotone(f: Factorization) -> bool:
    """Every component of ``J_k`` is a right-monotone interval of ``w(J_1..J_k)``."""
    return _blocks_are(f, is_right_monotone_interval)


def is_left_monotone(f: Factorization) -> bool:
    """Right-monotonicity of the reversed sequence."""
    return is_right_monotone(f.reversed())


def is_monotone(f: Factorization) -> bool:
    return is_right_monotone(f) and is_left_monotone(f)


# ---------------------------------------------------------------------------
# avoidance


def avoidance_class(w: Permutation) -> dict[str, bool]:
    return {f"avoids_{name}": not contains_pattern(w, pat) for name, pat in PATTERNS.items()}


def avoids(w: Permutation, *names: str) -> bool:
    return all(not contains_pattern(w, PATTERNS[name]) for name in names)


def realizes_through(w: Permutation, pattern: Permutation, p: int, slot: int | None = None) -> bool:
    """Does some occurrence of ``pattern`` in ``w`` use position ``p``?

    With ``slot`` (1-based), ``p`` must play the role of pattern position
    ``slot``; e.g. ``slot=3`` for 45312 asks for ``p`` as the middle entry.
    """
    win, pat = w.window, pattern.window
    k = len(pat)
    rest = [x for x in range(1, len(win) + 1) if x != p]
    for combo in itertools.combinations(rest, k - 1):
        pos = sorted(combo + (p,))
        if slot is not None and pos[slot - 1] != p:
            continue
        vals = [win[x - 1] for x in pos]
        if all((vals[i] < vals[j]) == (pat[i] < pat[j]) for i in range(k) for j in range(i + 1, k)):
            return True
    return False


def rdes_generators(w: Permutation) -> GenSet:
    """Generators covered by the strong right-descent intervals of ``w``."""
    return GenSet.from_intervals(((iv.a, iv.b) for iv in strong_rdes_intervals(w)), w.n)


__all__ = [
    "DescentInterval",
    "MonotoneResult",
    "PATTERNS",
    "PeelFailure",
    "PeelStep",
    "PositionProfile",
    "avoidance_class",
    "avoids",
    "directedness_profile",
    "is_left_monotone",
    "is_monotone",
    "is_right_monotone",
    "is_right_monotone_interval",
    "is_strong_ldes_direct",
    "is_strong_rdes_direct",
    "is_strong_rdes_interval",
    "monotone_factorization",
    "peel_step",
    "realizes_through",
    "strong_rdes_intervals",
]
