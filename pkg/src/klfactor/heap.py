"""The heap of connected components of a factorization.

Every connected component of every block is a piece ``[i, j]`` at the level
of its block.  Four partial maps connect pieces across levels:

* ``f + u1``: the lowest piece above ``f`` containing ``j_f``,
* ``f + u2``: the lowest piece above ``f`` containing ``i_f``,
* ``h - u1``: the highest piece below ``h`` containing ``i_h``,
* ``h - u2``: the highest piece below ``h`` containing ``j_h``.

Since pieces on one level are disjoint, "lowest" and "highest" are the same
as "with no intermediate-level piece containing that position".
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass

from .coxeter import Permutation, contains_pattern
from .factorization import Factorization, contract_once
from .patterns import is_strong_rdes_direct

STEPS = ("+u1", "+u2", "-u1", "-u2")
_VECTORS = {"+u1": (1, 1), "+u2": (-1, 1), "-u1": (-1, -1), "-u2": (1, -1)}
_INVERSE = {"+u1": "-u1", "-u1": "+u1", "+u2": "-u2", "-u2": "+u2"}


class EmbeddingError(ValueError):
    """Path sums disagree or two pieces land on one lattice point."""


@dataclass(frozen=True, order=True)
class Component:
    """A piece of the heap: positions ``[i, j]`` of a component of block ``level``."""

    level: int
    i: int
    j: int

    def contains(self, p: int) -> bool:
        return self.i <= p <= self.j

    def __str__(self) -> str:
        return f"[{self.i},{self.j}]@{self.level}"


class Heap:
    """Pieces (sorted by level, then left end) with precomputed step maps."""

    def __init__(self, components: Iterable[Component]):
        self.components: tuple[Component, ...] = tuple(sorted(components))
        self.index = {c: k for k, c in enumerate(self.components)}
        self.steps: dict[str, dict[int, int]] = {s: {} for s in STEPS}
        comps = self.components
        for a, f in enumerate(comps):
            for key, pos in (("+u1", f.j), ("+u2", f.i)):
                above = [b for b, h in enumerate(comps) if h.level > f.level and h.contains(pos)]
                if above:
                    self.steps[key][a] = min(above, key=lambda b: comps[b].level)
            for key, pos in (("-u1", f.i), ("-u2", f.j)):
                below = [b for b, h in enumerate(comps) if h.level < f.level and h.contains(pos)]
                if below:
                    self.steps[key][a] = max(below, key=lambda b: comps[b].level)

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def step(self, f: Component, key: str) -> Component | None:
        b = self.steps[key].get(self.index[f])
        return None if b is None else self.components[b]

    def to_json(self) -> list[dict]:
        out = []
        for a, c in enumerate(self.components):
            steps = {s: self.steps[s][a] for s in STEPS if a in self.steps[s]}
            out.append({"i": c.i, "j": c.j, "level": c.level, "steps": steps})
        return out


def build_heap(f: Factorization) -> Heap:
    return Heap(Component(k, a, b) for k, J in enumerate(f.blocks, 1) for a, b in J.components)


def apply_path(h: Heap, f: Component, path: Iterable[str]) -> Component | None:
    """Apply steps left to right; ``None`` as soon as one is undefined."""
    if f not in h.index:
        raise ValueError(f"{f} is not a piece of this heap")
    cur: Component | None = f
    for key in path:
        if key not in _VECTORS:
            raise ValueError(f"unknown step {key!r}")
        cur = h.step(cur, key)
        if cur is None:
            return None
    return cur


# ---------------------------------------------------------------------------
# characterizations


def heap_is_strong_rdes(h: Heap) -> bool:
    """``g - u_i = f`` forces ``f + m u_i = g`` for some ``m > 0``."""
    for key_down, key_up in (("-u1", "+u1"), ("-u2", "+u2")):
        for g, f in h.steps[key_down].items():
            cur = f
            while cur is not None and cur != g:
                cur = h.steps[key_up].get(cur)
            if cur is None:
                return False
    return True


def heap_is_strong_bidescent(h: Heap) -> bool:
    """``f = g - u_i`` exactly when ``g = f + u_i``, for ``i = 1, 2``."""
    for i in ("1", "2"):
        up, down = h.steps["+u" + i], h.steps["-u" + i]
        if {(a, b) for a, b in up.items()} != {(b, a) for a, b in down.items()}:
            return False
    return True


def heap_is_minimal(h: Heap) -> bool:
    """No piece ``e`` with ``e + u1 == e + u2``."""
    up1, up2 = h.steps["+u1"], h.steps["+u2"]
    return not any(a in up2 and up2[a] == b for a, b in up1.items())


def is_strong_rdes(f: Factorization) -> bool:
    return heap_is_strong_rdes(build_heap(f))


def is_strong_bidescent(f: Factorization) -> bool:
    return heap_is_strong_bidescent(build_heap(f))


def is_strong_bidescent_direct(f: Factorization) -> bool:
    """Strong right-descent for the sequence and for its reversal."""
    return is_strong_rdes_direct(f) and is_strong_rdes_direct(f.reversed())


def is_minimal_strong_bidescent(f: Factorization) -> bool:
    """Minimality of a strong bidescent factorization via the heap.

    Raises ``ValueError`` when ``f`` is not strong bidescent.
    """
    h = build_heap(f)
    if not heap_is_strong_bidescent(h):
        raise ValueError(f"{f} is not strong bidescent")
    return heap_is_minimal(h)


def is_minimal_direct(f: Factorization) -> bool:
    """No contraction of ``f`` is again strong bidescent."""
    return not any(is_strong_bidescent(g) for g in contract_once(f))


# ---------------------------------------------------------------------------
# lattice realization


@dataclass(frozen=True)
class LatticeEmbedding:
    """Lattice coordinates per piece, with the id of its connected class."""

    coords: dict[Component, tuple[int, int]]
    classes: dict[Component, int]

    def to_json(self, h: Heap) -> list[dict]:
        return [
            {"index": h.index[c], "class": self.classes[c], "x": self.coords[c][0], "y": self.coords[c][1]}
            for c in h.components
        ]


def lattice_embedding(h: Heap) -> LatticeEmbedding:
    """Place pieces in ``Z^2`` with ``+u1 -> (1, 1)`` and ``+u2 -> (-1, 1)``.

    Each connected class is anchored at the origin on its least piece (by
    level, then position).  Raises :class:`EmbeddingError` if two paths give
    different coordinates or two pieces of a class collide.
    """
    coords: dict[int, tuple[int, int]] = {}
    classes: dict[int, int] = {}
    cls = 0
    for start in range(len(h.components)):
        if start in coords:
            continue
        coords[start] = (0, 0)
        classes[start] = cls
        queue = deque([start])
        while queue:
            a = queue.popleft()
            x, y = coords[a]
            for key, (dx, dy) in _VECTORS.items():
                b = h.steps[key].get(a)
                if b is None:
                    continue
                pt = (x + dx, y + dy)
                if b in coords:
                    if coords[b] != pt:
                        raise EmbeddingError(
                            f"{h.components[b]} reached at {coords[b]} and {pt} via {key}"
                        )
                else:
                    coords[b] = pt
                    classes[b] = cls
                    queue.append(b)
        cls += 1
    seen: dict[tuple[int, tuple[int, int]], int] = {}
    for a, pt in coords.items():
        key = (classes[a], pt)
        if key in seen:
            raise EmbeddingError(
                f"{h.components[a]} and {h.components[seen[key]]} share lattice point {pt}"
            )
        seen[key] = a
    return LatticeEmbedding(
        {h.components[a]: pt for a, pt in coords.items()},
        {h.components[a]: c for a, c in classes.items()},
    )


def diamond_exists(h: Heap, e: Component, m1: int, m2: int) -> bool:
    """Is ``e + (m1 - 1) u1 + (m2 - 1) u2`` defined?"""
    if m1 < 1 or m2 < 1:
        raise ValueError("m1 and m2 must be positive")
    return apply_path(h, e, ["+u1"] * (m1 - 1) + ["+u2"] * (m2 - 1)) is not None


def diamond_witness(h: Heap, m1: int, m2: int) -> Component | None:
    """First piece (level ascending) admitting the ``(m1, m2)`` diamond."""
    for e in h.components:
        if diamond_exists(h, e, m1, m2):
            return e
    return None


def diamond_pattern(m1: int, m2: int) -> Permutation:
    """``m2+1, ..., m2+m1, 1, ..., m2``."""
    return Permutation(tuple(range(m2 + 1, m2 + m1 + 1)) + tuple(range(1, m2 + 1)))


def diamond_matches_pattern(f: Factorization, m1: int, m2: int) -> bool:
    """Compare the diamond criterion with a direct pattern scan of ``w(J)``."""
    h = build_heap(f)
    has_diamond = diamond_witness(h, m1, m2) is not None
    pat = diamond_pattern(m1, m2)
    return has_diamond == contains_pattern(f.leading, pat)
