"""Cross-verification suites shared by the ``verify``/``sweep`` commands and the tests.

Every suite returns a :class:`CheckResult` holding the number of cases
examined, the number of failures and a few failure descriptions.  Suites are
deterministic: the same bounds always give the same result.
"""

from __future__ import annotations

import os
import random
import time
from collections import Counter
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .coxeter import (
    Permutation,
    Window,
    all_permutations,
    bruhat_leq,
    contains_pattern,
    right_descents,
    w_compose,
    w_identity,
    w_length,
)
from .factorization import (
    Factorization,
    Mask,
    _canonicalize_raw,
    _class_choices,
    _fresh_pairs,
    _right_overlaps,
    all_reduced_words,
    cf_moves,
    cf_normal_form,
    class_count,
    component_stats,
    contract_once,
    defect_polynomials,
    defect_polynomials_via_hecke,
    equivalent,
    is_admissible,
    is_tight,
    is_tight_via_hecke,
    iter_classes_raw,
    iter_factorizations,
    iter_masks_raw,
    minimal_contractions,
    reduced_word_factorization,
    resolution_dimension,
)
from .heap import (
    EmbeddingError,
    apply_path,
    build_heap,
    diamond_matches_pattern,
    heap_is_minimal,
    heap_is_strong_bidescent,
    heap_is_strong_rdes,
    is_minimal_direct,
    is_strong_bidescent_direct,
    lattice_embedding,
)
from .hecke import (
    bar,
    expand_in_kl_basis,
    kl_basis,
    kl_table,
    schur_quotient,
)
from .laurent import ONE, InexactDivisionError, LaurentPoly
from .patterns import (
    avoids,
    directedness_profile,
    is_monotone,
    is_right_monotone,
    is_strong_rdes_direct,
    monotone_factorization,
    realizes_through,
)

FOUR_PATTERNS = ("4231", "45312", "45123", "34512")
MAX_EXAMPLES = 10


@dataclass
class CheckResult:
    """Outcome of one suite; ``examples`` keeps the first few failures."""

    name: str
    checked: int = 0
    failed: int = 0
    examples: list[str] = field(default_factory=list)
    info: dict = field(default_factory=dict)
    seconds: float = 0.0
    truncated: bool = False

    @property
    def ok(self) -> bool:
        return self.failed == 0 and not self.truncated

    def case(self, passed: bool, describe: Callable[[], str] | str = "") -> bool:
        """Record one case; ``describe`` is only evaluated on failure."""
        self.checked += 1
        if not passed:
            self.failed += 1
            if len(self.examples) < MAX_EXAMPLES:
                self.examples.append(describe() if callable(describe) else describe)
        return passed

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        extra = " (truncated)" if self.truncated else ""
        return f"{status} {self.name}: {self.checked} checked, {self.failed} failed{extra}"

    def to_json(self, timings: bool = False) -> dict:
        out = {
            "name": self.name,
            "ok": self.ok,
            "checked": self.checked,
            "failed": self.failed,
            "examples": list(self.examples),
        }
        if self.info:
            out["info"] = self.info
        if self.truncated:
            out["truncated"] = True
        if timings:
            out["seconds"] = round(self.seconds, 3)
        return out


def _timed(fn: Callable[..., CheckResult]) -> Callable[..., CheckResult]:
    def wrapper(*args, **kwargs) -> CheckResult:
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t0
        return res

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def worker_count() -> int:
    """Worker processes allowed by ``KLFACTOR_THREADS`` (default: CPU count)."""
    cpus = os.cpu_count() or 1
    raw = os.environ.get("KLFACTOR_THREADS")
    if raw is None:
        return cpus
    try:
        cap = int(raw)
    except ValueError:
        return 1
    return max(1, min(cap, cpus))


def parallel_map(fn: Callable, items: Sequence, workers: int = 1) -> list:
    """``[fn(x) for x in items]``, optionally over a process pool; order is preserved."""
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    chunk = max(1, len(items) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=chunk))


def corpus(n_max: int = 5, max_blocks: int = 3, max_block_size: int = 3) -> list[Factorization]:
    """Every factorization with ``n <= n_max`` and ``1 <= r <= max_blocks``.

    Blocks are nonempty with at most ``max_block_size`` generators.
    """
    return [f for n in range(1, n_max + 1) for f in iter_factorizations(n, max_blocks, max_block_size)]


def kl_family(w: Permutation) -> dict[Permutation, LaurentPoly]:
    """``x -> P_{x,w}`` over the whole Bruhat interval below ``w``."""
    return kl_table(w.n).column(w)


# ---------------------------------------------------------------------------
# worked cases


@_timed
def a2_worked_case() -> CheckResult:
    """``({1},{2},{1})`` in S_3: family, admissibility, non-tightness, Hecke agreement."""
    res = CheckResult("a2-worked-case")
    f = Factorization.of(3, [[1], [2], [1]])
    fam = defect_polynomials(f)
    one_q = LaurentPoly.from_q([1, 1])
    expected = {Permutation.parse(x): ONE for x in ("132", "231", "312", "321")}
    expected[Permutation.parse("123")] = one_q
    expected[Permutation.parse("213")] = one_q
    res.case(fam.polys == expected, lambda: f"family {fam.to_json()}")
    res.case(is_admissible(f), "not admissible")
    tight, witness = is_tight(f)
    res.case(not tight, "reported tight")
    res.case(
        witness is not None
        and witness.target == Permutation.parse("213")
        and witness.d_R == 1
        and f.leading.length - witness.target.length == 2,
        lambda: f"witness {witness}",
    )
    res.case(defect_polynomials_via_hecke(f) == fam, "Hecke route disagrees")
    expansion = expand_in_kl_basis(schur_quotient(f.blocks, f.n))
    res.case(
        expansion == {Permutation.parse("321"): ONE, Permutation.parse("213"): ONE},
        lambda: f"KL expansion {expansion}",
    )
    res.case(not is_tight_via_hecke(f), "Hecke route reports tight")
    return res


@_timed
def case_3412() -> CheckResult:
    """3412: algorithm output, tightness and the KL family."""
    res = CheckResult("3412-case")
    w = Permutation.parse("3412")
    out = monotone_factorization(w)
    expected = Factorization.of(4, [[2], [1, 3], [2]])
    res.case(out.ok and equivalent(out.factorization, expected), lambda: f"algorithm gave {out.to_json()}")
    f = out.factorization if out.ok else expected
    res.case(is_tight(f)[0], "not tight")
    res.case(is_tight_via_hecke(f), "Hecke route: not tight")
    fam = defect_polynomials(f)
    res.case(fam.polys == kl_family(w), lambda: f"family {fam.to_json()}")
    res.case(fam[Permutation.identity(4)] == LaurentPoly.from_q([1, 1]), "P_e != 1 + q")
    return res


def tight_classes_of(w: Permutation, max_blocks: int, overlaps: str = "general") -> list[Factorization]:
    """CF normal forms of tight contraction-minimal factorizations of ``w``.

    Every tight factorization of ``w`` with at most ``max_blocks`` nonempty
    blocks is reduced to its minimal contractions; the tight ones are
    collected up to Cartier-Foata equivalence.
    """
    found: dict = {}
    for f in iter_factorizations(w.n, max_blocks):
        if f.leading != w or not is_tight(f, overlaps)[0]:
            continue
        for g in minimal_contractions(f):
            if is_tight(g, overlaps)[0]:
                h = cf_normal_form(g)
                found.setdefault(h.key(), h)
    return [found[k] for k in sorted(found)]


@_timed
def tight_4231(max_blocks: int = 4) -> CheckResult:
    """4231 has exactly two inequivalent tight factorizations, swapped by ``i -> 5 - i``."""
    res = CheckResult("4231-two-tight")
    w = Permutation.parse("4231")
    classes = tight_classes_of(w, max_blocks)
    res.info["classes"] = [g.as_lists() for g in classes]
    res.case(len(classes) == 2, lambda: f"found {len(classes)} classes: {[str(g) for g in classes]}")
    if len(classes) == 2:
        a, b = classes
        res.case(equivalent(a.mirrored(), b), lambda: f"{a} and {b} are not mirror images")
    return res


# ---------------------------------------------------------------------------
# algorithm and pattern-class sweeps


def _algorithm_case(w: Permutation) -> tuple[bool, bool]:
    out = monotone_factorization(w)
    oracle = not contains_pattern(w, "4231") and not contains_pattern(w, "45312")
    return out.ok, oracle


@_timed
def algorithm_criterion(n_max: int = 6, workers: int = 1) -> CheckResult:
    """Peeling succeeds exactly on 4231- and 45312-avoiding permutations."""
    res = CheckResult("algorithm-success-criterion")
    for n in range(1, n_max + 1):
        perms = list(all_permutations(n))
        for w, (ok, oracle) in zip(perms, parallel_map(_algorithm_case, perms, workers)):
            res.case(ok == oracle, lambda w=w, ok=ok: f"{w}: algorithm ok={ok}, avoidance={not ok}")
    return res


def four_pattern_class(n: int) -> list[Permutation]:
    return [w for w in all_permutations(n) if avoids(w, *FOUR_PATTERNS)]


def _four_pattern_case(args: tuple[Permutation, str]) -> str | None:
    w, overlaps = args
    out = monotone_factorization(w)
    if not out.ok:
        return f"{w}: algorithm failed ({out.to_json()})"
    f = out.factorization
    problems = []
    if not is_admissible(f, overlaps):
        problems.append("not admissible")
    tight, witness = is_tight(f, overlaps)
    if not tight:
        problems.append(f"not tight (class {witness.canonical}, d={witness.d_R}, target {witness.target})")
    if defect_polynomials(f, overlaps).polys != kl_family(w):
        problems.append("family differs from KL")
    return f"{w} {f}: " + "; ".join(problems) if problems else None


@_timed
def four_pattern_sweep(n: int = 6, overlaps: str = "general", workers: int = 1) -> CheckResult:
    """Monotone factorizations of the four-pattern-avoiding class are tight with KL family."""
    name = "four-pattern-sweep" if overlaps == "general" else f"four-pattern-sweep[{overlaps}]"
    res = CheckResult(name)
    perms = four_pattern_class(n)
    for msg in parallel_map(_four_pattern_case, [(w, overlaps) for w in perms], workers):
        res.case(msg is None, msg or "")
    return res


@_timed
def deodhar_specialization(n: int = 5) -> CheckResult:
    """Singleton blocks along any reduced word of a 321-avoiding ``w`` are tight with KL family."""
    res = CheckResult("deodhar-specialization")
    for w in all_permutations(n):
        if contains_pattern(w, "321"):
            continue
        kl = kl_family(w)
        for word in all_reduced_words(w):
            f = reduced_word_factorization(w, word)
            res.case(
                f.leading == w and is_tight(f)[0] and defect_polynomials(f).polys == kl,
                lambda w=w, word=word: f"{w} word {word}",
            )
    return res


# ---------------------------------------------------------------------------
# corpus properties


def _level_defects(fresh: list[list[tuple[int, int]]], parts: tuple[Window, ...], n: int) -> tuple:
    w = w_identity(n)
    out = []
    for pairs, s in zip(fresh, parts):
        out.append(frozenset((w[q - 1], w[p - 1]) for p, q in pairs if w[p - 1] > w[q - 1]))
        w = w_compose(w, s)
    return tuple(out)


def _invariance_case(args: tuple[Factorization, str]) -> str | None:
    f, overlaps = args
    fresh = _fresh_pairs(f, overlaps)
    right = _right_overlaps(f, overlaps)
    reps = {parts: (x, _level_defects(fresh, parts, f.n)) for parts, x, _d in iter_classes_raw(f, overlaps)}
    hits: Counter = Counter()
    for parts, x, _d in iter_masks_raw(f, overlaps):
        canon = list(parts)
        _canonicalize_raw(canon, right)
        key = tuple(canon)
        rep = reps.get(key)
        mask = " ".join(str(Permutation(p)) for p in parts)
        if rep is None:
            return f"{f}: normal form of mask ({mask}) is not a class representative"
        if rep[0] != x:
            return f"{f}: mask ({mask}) and its normal form have different targets"
        if rep[1] != _level_defects(fresh, parts, f.n):
            return f"{f}: defects of mask ({mask}) differ from its class representative"
        hits[key] += 1
    if set(hits) != set(reps) or len(set(hits.values())) > 1:
        return f"{f}: classes are not orbits of one common size"
    return None


@_timed
def defect_invariance(
    fs: Sequence[Factorization], overlaps: str = "general", workers: int = 1
) -> CheckResult:
    """Every mask has the target and per-level defect sets of its class representative."""
    name = "defect-invariance" if overlaps == "general" else f"defect-invariance[{overlaps}]"
    res = CheckResult(name)
    for msg in parallel_map(_invariance_case, [(f, overlaps) for f in fs], workers):
        res.case(msg is None, msg or "")
    return res


def _hecke_case(args: tuple[Factorization, str]) -> tuple[str | None, bool, str | None]:
    """``(identity failure, excluded, tightness disagreement)`` for one factorization."""
    f, overlaps = args
    fam = defect_polynomials(f, overlaps)
    lw = f.leading.length
    excluded = False
    problem = None
    try:
        via = defect_polynomials_via_hecke(f, overlaps)
    except InexactDivisionError:
        excluded = True
        via = None
    if via is not None and via != fam:
        problem = f"{f}: Hecke family differs from enumeration"
    if excluded:
        # the quotient either does not exist or carries the power v^-D with D != l(w(J))
        d = resolution_dimension(f, overlaps)
        try:
            h = schur_quotient(f.blocks, f.n, overlaps)
            shifted = {x: p.shift(-d) for x, p in fam.polys.items()}
            if d == lw or h.terms != shifted:
                problem = f"{f}: excluded although D = {d}, l(w(J)) = {lw}"
        except InexactDivisionError:
            pass
    tight_disagrees = None
    if is_tight(f, overlaps)[0] != is_tight_via_hecke(f, overlaps):
        tight_disagrees = f"{f}: is_tight and is_tight_via_hecke disagree"
    return problem, excluded, tight_disagrees


@_timed
def hecke_identity(fs: Sequence[Factorization], overlaps: str = "general", workers: int = 1) -> CheckResult:
    """Schur quotient equals ``v^-l(w(J)) sum P^J_x T_x`` wherever the Hecke route succeeds.

    Factorizations where it does not (redundant blocks, ``D != l(w(J))``) are
    counted in ``info`` and must still satisfy the identity with ``v^-D``.
    Tightness must agree between the two routes everywhere.
    """
    name = "hecke-identity" if overlaps == "general" else f"hecke-identity[{overlaps}]"
    res = CheckResult(name)
    excluded = 0
    for problem, ex, tight_msg in parallel_map(_hecke_case, [(f, overlaps) for f in fs], workers):
        excluded += ex
        res.case(problem is None, problem or "")
        res.case(tight_msg is None, tight_msg or "")
    res.info["identity_cases"] = len(fs) - excluded
    res.info["redundant_excluded"] = excluded
    return res


@_timed
def factorization_invariants(fs: Sequence[Factorization], overlaps: str = "general") -> CheckResult:
    """Class counts, tight implies admissible, the l-graded identity and CF invariance."""
    res = CheckResult("factorization-invariants")
    for f in fs:
        fam = defect_polynomials(f, overlaps)
        total = sum(p.evaluate(1) for p in fam.polys.values())
        res.case(total == class_count(f, overlaps), lambda f=f: f"{f}: sum P(1) != class count")
        res.case(
            all(bruhat_leq(x, f.leading) for x in fam.polys),
            lambda f=f: f"{f}: support not below w(J)",
        )
        tight = is_tight(f, overlaps)[0]
        res.case(not tight or is_admissible(f, overlaps), lambda f=f: f"{f}: tight but not admissible")
        lhs = sum((p.shift(2 * x.length) for x, p in fam.polys.items()), LaurentPoly())
        rhs = ONE
        for choice in _class_choices(f, overlaps):
            rhs = rhs * sum((LaurentPoly.monomial(2 * w_length(u)) for u in choice), LaurentPoly())
        res.case(lhs == rhs, lambda f=f: f"{f}: l-graded identity fails")
        g = cf_normal_form(f)
        res.case(g.leading == f.leading, lambda f=f: f"{f}: normal form changes w(J)")
        res.case(
            defect_polynomials(g, overlaps) == fam and is_tight(g, overlaps)[0] == tight,
            lambda f=f: f"{f}: family or tightness not invariant under Cartier-Foata moves",
        )
        for h in cf_moves(f):
            res.case(
                h.leading == f.leading and cf_normal_form(h).key() == g.key(),
                lambda f=f, h=h: f"{f} -> {h}: move changes w(J) or normal form",
            )
        for h in contract_once(f):
            res.case(h.leading == f.leading, lambda f=f, h=h: f"{f} -> {h}: contraction changes w(J)")
    return res


# ---------------------------------------------------------------------------
# heaps


def minimal_strong_bidescent_sample(fs: Iterable[Factorization], n_max: int = 7) -> list[Factorization]:
    """Minimal strong bidescent factorizations: from ``fs`` plus monotone ones up to ``n_max``."""
    out: dict = {}
    for f in fs:
        h = build_heap(f)
        if heap_is_strong_bidescent(h) and heap_is_minimal(h):
            out.setdefault(f.key(), f)
    for n in range(1, n_max + 1):
        for w in all_permutations(n):
            if w.is_identity():
                continue
            m = monotone_factorization(w)
            if m.ok:
                out.setdefault(m.factorization.key(), m.factorization)
    return [out[k] for k in sorted(out)]


@_timed
def heap_characterizations(
    fs: Sequence[Factorization], diamond_n_max: int = 7, sample: Sequence[Factorization] | None = None
) -> CheckResult:
    """Heap predicates versus direct definitions; diamonds versus pattern scans."""
    res = CheckResult("heap-characterizations")
    for f in fs:
        h = build_heap(f)
        res.case(
            heap_is_strong_rdes(h) == is_strong_rdes_direct(f),
            lambda f=f: f"{f}: strong right-descent heap/direct disagree",
        )
        sb = heap_is_strong_bidescent(h)
        res.case(
            sb == is_strong_bidescent_direct(f),
            lambda f=f: f"{f}: strong bidescent heap/direct disagree",
        )
        if sb:
            res.case(
                heap_is_minimal(h) == is_minimal_direct(f),
                lambda f=f: f"{f}: minimality heap/contraction disagree",
            )
    if sample is None:
        sample = minimal_strong_bidescent_sample(fs, diamond_n_max)
    res.info["minimal_strong_bidescent"] = len(sample)
    for f in sample:
        h = build_heap(f)
        if not (heap_is_strong_bidescent(h) and heap_is_minimal(h)):
            res.case(False, f"{f}: sample member is not minimal strong bidescent")
            continue
        for m1 in (2, 3):
            for m2 in (2, 3):
                res.case(
                    diamond_matches_pattern(f, m1, m2),
                    lambda f=f, m1=m1, m2=m2: f"{f}: diamond ({m1},{m2}) disagrees with pattern scan",
                )
        try:
            lattice_embedding(h)
            res.case(True)
        except EmbeddingError as exc:
            res.case(False, f"{f}: {exc}")
        for e in h:
            a = apply_path(h, e, ["+u1", "+u2"])
            b = apply_path(h, e, ["+u2", "+u1"])
            res.case(a is None or a == b, lambda f=f, e=e: f"{f}: {e} +u1+u2 defined but +u2+u1 differs")
    return res


# ---------------------------------------------------------------------------
# patterns and monotone factorizations


def _reachable_contractions(f: Factorization) -> list[Factorization]:
    seen = {f.key(): f}
    todo = [f]
    while todo:
        g = todo.pop()
        for h in contract_once(g):
            if h.key() not in seen:
                seen[h.key()] = h
                todo.append(h)
    return [seen[k] for k in sorted(seen)]


def _monotone_contraction_case(f: Factorization) -> str | None:
    if not any(is_monotone(g) for g in _reachable_contractions(f)):
        return f"{f}: no monotone contraction"
    for i in range(1, f.r + 1):
        for k in range(i, f.r + 1):
            if not avoids(f.slice(i, k).leading, "4231", "45312"):
                return f"{f}: slice {i}..{k} realizes 4231 or 45312"
    return None


@_timed
def monotone_contraction(
    searches: Sequence[tuple[int, int]] = ((4, 4), (5, 3)), workers: int = 1
) -> CheckResult:
    """Tight factorizations of 4231-avoiding targets have a monotone contraction.

    ``searches`` lists ``(n, max_blocks)`` pairs; every slice target must
    avoid 4231 and 45312.  The tight factorizations of 4231 itself are
    recorded in ``info`` as a contrast (the statement does not apply).
    """
    res = CheckResult("monotone-contraction")
    for n, r in searches:
        fs = [f for f in iter_factorizations(n, r) if avoids(f.leading, "4231") and is_tight(f)[0]]
        res.info[f"tight_S{n}_r{r}"] = len(fs)
        for msg in parallel_map(_monotone_contraction_case, fs, workers):
            res.case(msg is None, msg or "")
    w = Permutation.parse("4231")
    without = [
        f.as_lists()
        for f in tight_classes_of(w, 4)
        if not any(is_monotone(g) for g in _reachable_contractions(f))
    ]
    res.info["tight_4231_without_monotone_contraction"] = without
    return res


def _bounce_case(w: Permutation) -> list[str]:
    f = monotone_factorization(w).factorization
    bad = []
    for parts, _x, d in iter_classes_raw(f):
        if d == 0:
            continue
        sigma = Mask(tuple(Permutation(p) for p in parts), f.n)
        stats = component_stats(f, sigma)
        bound = sum(len(s.rbounce - s.rdef) for s in stats)
        if not d < bound:
            bad.append(f"{w} {f} mask ({sigma}): d_R = {d} >= {bound}")
    return bad


@_timed
def bounce_inequality(n: int = 6, workers: int = 1) -> CheckResult:
    """``d_R < sum over components of |rbounce - rdef|`` for positive-defect classes."""
    res = CheckResult("bounce-inequality")
    perms = four_pattern_class(n)
    for w, bad in zip(perms, parallel_map(_bounce_case, perms, workers)):
        res.case(not bad, lambda bad=bad: bad[0])
    return res


@_timed
def pattern_properties(n_max: int = 6) -> CheckResult:
    """Directedness versus 45312, and properties of successful peeling."""
    res = CheckResult("pattern-properties")
    for n in range(1, n_max + 1):
        for w in all_permutations(n):
            if not avoids(w, "4231"):
                continue
            prof = directedness_profile(w)
            for p in range(1, n + 1):
                res.case(
                    realizes_through(w, Permutation((4, 5, 3, 1, 2)), p, slot=3) != prof[p - 1].directed,
                    lambda w=w, p=p: f"{w}: 45312 centred at {p} vs directedness",
                )
            m = monotone_factorization(w)
            if not m.ok:
                continue
            f = m.factorization
            h = build_heap(f)
            res.case(
                f.leading == w
                and is_monotone(f)
                and is_admissible(f)
                and heap_is_strong_bidescent(h)
                and heap_is_minimal(h),
                lambda w=w, f=f: f"{w} {f}: output not a minimal monotone admissible factorization",
            )
            res.case(
                all(avoids(f.upslice(k).leading, "4231") for k in range(1, f.r + 1)),
                lambda w=w: f"{w}: some upslice realizes 4231",
            )
    return res


@_timed
def monotone_uniqueness(n_max: int = 4, max_blocks: int = 4) -> CheckResult:
    """Every contraction-free monotone factorization is equivalent to the algorithm's output."""
    res = CheckResult("monotone-uniqueness")
    for n in range(1, n_max + 1):
        for f in iter_factorizations(n, max_blocks):
            if contract_once(f) or not is_monotone(f):
                continue
            m = monotone_factorization(f.leading)
            res.case(
                m.ok and equivalent(m.factorization, f),
                lambda f=f, m=m: f"{f}: algorithm gave {m.to_json()}",
            )
    return res


@_timed
def strong_rdes_monotone(fs: Sequence[Factorization]) -> CheckResult:
    """Strong right-descent factorizations are right-monotone iff every upslice avoids 45312."""
    res = CheckResult("strong-rdes-monotone")
    for f in fs:
        if not is_strong_rdes_direct(f):
            continue
        ups = all(avoids(f.upslice(k).leading, "45312") for k in range(1, f.r + 1))
        res.case(is_right_monotone(f) == ups, lambda f=f: f"{f}: right-monotone vs upslice 45312-avoidance")
    return res


# ---------------------------------------------------------------------------
# Kazhdan-Lusztig oracle


def _kl_column_ok(w: Permutation) -> str | None:
    c = kl_basis(w)
    if bar(c) != c:
        return f"{w}: C'_w is not bar invariant"
    lw = w.length
    for x, p in kl_table(w.n).column(w).items():
        if x == w:
            if p != ONE:
                return f"{w}: P_w,w = {p}"
            continue
        if not bruhat_leq(x, w):
            return f"{w}: {x} in the support is not below w"
        if p.degree() > lw - x.length - 1 or p[0] != 1:
            return f"{w}: P_{x},w = {p} violates the degree bound"
    return None


@_timed
def kl_consistency(n_full: int = 4, n_sampled: int = 5, samples: int = 500, seed: int = 0) -> CheckResult:
    """Bar invariance and degree bounds of ``C'_w``; ``P_{xs,w} = P_{x,w}`` for ``s`` in ``rdes(w)``."""
    res = CheckResult("kl-self-consistency")
    for w in all_permutations(n_full):
        msg = _kl_column_ok(w)
        res.case(msg is None, msg or "")
    pool = list(all_permutations(n_sampled))
    rng = random.Random(seed)
    for w in rng.sample(pool, min(samples, len(pool))):
        msg = _kl_column_ok(w)
        res.case(msg is None, msg or "")
    table = kl_table(n_full)
    for w in all_permutations(n_full):
        for s in right_descents(w):
            for x in all_permutations(n_full):
                xs = x * Permutation.simple(s, n_full)
                res.case(
                    table.poly(xs, w) == table.poly(x, w),
                    lambda w=w, x=x, s=s: f"P_(x s{s}),w != P_x,w for x={x}, w={w}",
                )
    return res


# ---------------------------------------------------------------------------
# exhaustive sweeps


def batched_map(
    fn: Callable, items: Sequence, workers: int = 1, deadline: float | None = None, batch: int = 256
) -> tuple[list, bool]:
    """Like :func:`parallel_map` but stops between batches once ``deadline`` has passed.

    Returns the results computed so far (a prefix of the full list) and
    whether the run was truncated.
    """
    out: list = []
    for start in range(0, len(items), batch):
        if deadline is not None and time.monotonic() > deadline:
            return out, True
        out.extend(parallel_map(fn, items[start : start + batch], workers))
    return out, False


def _sweep_permutation_case(w: Permutation) -> tuple[list[str], dict[str, int]]:
    problems: list[str] = []
    counts = {"permutations": 1}
    m = monotone_factorization(w)
    oracle = avoids(w, "4231", "45312")
    if m.ok != oracle:
        problems.append(f"{w}: algorithm ok={m.ok} but 4231/45312-avoidance={oracle}")
    if m.ok:
        counts["monotone"] = 1
        f = m.factorization
        h = build_heap(f)
        if not (f.leading == w and is_monotone(f) and is_admissible(f)):
            problems.append(f"{w} {f}: output not monotone admissible with w(J) = w")
        if not (heap_is_strong_bidescent(h) and heap_is_minimal(h)):
            problems.append(f"{w} {f}: output not minimal strong bidescent")
        if avoids(w, *FOUR_PATTERNS):
            counts["four_pattern_class"] = 1
            msg = _four_pattern_case((w, "general"))
            if msg is not None:
                problems.append(msg)
        if is_tight(f)[0]:
            counts["tight"] = 1
    return problems, counts


def _sweep_factorization_case(f: Factorization) -> tuple[list[str], dict[str, int]]:
    problems: list[str] = []
    counts = {"factorizations": 1}
    fam = defect_polynomials(f)
    if sum(p.evaluate(1) for p in fam.polys.values()) != class_count(f):
        problems.append(f"{f}: sum P(1) != class count")
    tight = is_tight(f)[0]
    admissible = is_admissible(f)
    counts["tight"] = int(tight)
    counts["admissible"] = int(admissible)
    if tight and not admissible:
        problems.append(f"{f}: tight but not admissible")
    if tight != is_tight_via_hecke(f):
        problems.append(f"{f}: is_tight and is_tight_via_hecke disagree")
    d = resolution_dimension(f)
    try:
        h = schur_quotient(f.blocks, f.n)
        if h.terms != {x: p.shift(-d) for x, p in fam.polys.items()}:
            problems.append(f"{f}: Schur quotient != v^-D sum P^J_x T_x")
    except InexactDivisionError:
        problems.append(f"{f}: overlap Poincare product does not divide")
    if d != f.leading.length:
        counts["redundant"] = 1
    g = cf_normal_form(f)
    if g.leading != f.leading or defect_polynomials(g) != fam:
        problems.append(f"{f}: Cartier-Foata normal form changes w(J) or the family")
    return problems, counts


def _collect(name: str, results: list, truncated: bool) -> CheckResult:
    res = CheckResult(name, truncated=truncated)
    totals: Counter = Counter()
    for problems, counts in results:
        totals.update(counts)
        res.checked += 1
        if problems:
            res.failed += 1
            if len(res.examples) < MAX_EXAMPLES:
                res.examples.append(problems[0])
    res.info = dict(sorted(totals.items()))
    return res


@_timed
def sweep_permutations(n: int = 6, workers: int = 1, deadline: float | None = None) -> CheckResult:
    """Every ``w`` in S_n: algorithm criterion, output properties, four-pattern class tightness."""
    perms = list(all_permutations(n))
    results, truncated = batched_map(_sweep_permutation_case, perms, workers, deadline)
    return _collect(f"sweep-permutations[S{n}]", results, truncated)


@_timed
def sweep_factorizations(
    n: int = 6,
    max_blocks: int = 3,
    max_block_size: int | None = None,
    workers: int = 1,
    deadline: float | None = None,
) -> CheckResult:
    """Every factorization of S_n within the bounds: the two routes, class counts, invariance."""
    fs = list(iter_factorizations(n, max_blocks, max_block_size))
    results, truncated = batched_map(_sweep_factorization_case, fs, workers, deadline)
    return _collect(f"sweep-factorizations[S{n},r<={max_blocks}]", results, truncated)


# ---------------------------------------------------------------------------
# suites


@dataclass(frozen=True)
class Bounds:
    """Bounds for :func:`verify_all`."""

    corpus_n: int = 5
    max_blocks: int = 3
    max_block_size: int = 3
    sweep_n: int = 6
    diamond_n: int = 7
    deodhar_n: int = 5
    algorithm_n: int = 6

    def to_json(self) -> dict:
        return dict(self.__dict__)


def verify_all(
    bounds: Bounds = Bounds(),
    workers: int = 1,
    progress: Callable[[CheckResult], None] | None = None,
    deadline: float | None = None,
) -> list[CheckResult]:
    """Run every suite at ``bounds``; suites not started before ``deadline`` are marked truncated."""
    fs = corpus(bounds.corpus_n, bounds.max_blocks, bounds.max_block_size)
    jobs: list[tuple[str, Callable[[], CheckResult]]] = [
        ("a2-worked-case", a2_worked_case),
        ("3412-case", case_3412),
        ("4231-two-tight", tight_4231),
        ("algorithm-success-criterion", lambda: algorithm_criterion(bounds.algorithm_n, workers)),
        ("four-pattern-sweep", lambda: four_pattern_sweep(bounds.sweep_n, workers=workers)),
        ("deodhar-specialization", lambda: deodhar_specialization(bounds.deodhar_n)),
        ("defect-invariance", lambda: defect_invariance(fs, workers=workers)),
        ("hecke-identity", lambda: hecke_identity(fs, workers=workers)),
        ("hecke-identity[adjacent]", lambda: hecke_identity(fs, "adjacent", workers=workers)),
        ("heap-characterizations", lambda: heap_characterizations(fs, bounds.diamond_n)),
        ("monotone-contraction", lambda: monotone_contraction(workers=workers)),
        ("bounce-inequality", lambda: bounce_inequality(bounds.sweep_n, workers)),
        ("kl-self-consistency", kl_consistency),
        ("factorization-invariants", lambda: factorization_invariants(fs)),
        ("pattern-properties", lambda: pattern_properties(bounds.algorithm_n)),
        ("monotone-uniqueness", monotone_uniqueness),
        ("strong-rdes-monotone", lambda: strong_rdes_monotone(fs)),
    ]
    out = []
    for name, job in jobs:
        if deadline is not None and time.monotonic() > deadline:
            res = CheckResult(name, truncated=True)
        else:
            res = job()
        out.append(res)
        if progress is not None:
            progress(res)
    return out


__all__ = [
    "Bounds",
    "CheckResult",
    "FOUR_PATTERNS",
    "a2_worked_case",
    "algorithm_criterion",
    "batched_map",
    "bounce_inequality",
    "case_3412",
    "corpus",
    "defect_invariance",
    "deodhar_specialization",
    "factorization_invariants",
    "heap_characterizations",
    "hecke_identity",
    "kl_consistency",
    "kl_family",
    "minimal_strong_bidescent_sample",
    "monotone_contraction",
    "monotone_uniqueness",
    "parallel_map",
    "pattern_properties",
    "strong_rdes_monotone",
    "sweep_factorizations",
    "sweep_permutations",
    "four_pattern_class",
    "four_pattern_sweep",
    "tight_4231",
    "tight_classes_of",
    "verify_all",
    "worker_count",
]
