"""Finite partition search: monochromatic variable words and extractions.

Searches are exhaustive inside their budget, deterministic, and every
success is re-checked by evaluating the colouring again over the full
substitution range before it is returned.  Running out of budget or of
candidates yields an :class:`Exhausted` value, never an exception.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, List, Mapping, Optional, Sequence

from .codec import Codec, make_codec
from .errors import ConfigError, LocWordsError, UncoveredValue
from .kernels import weak_schur_count_avoiding, weak_schur_first_avoiding
from .spaces import Space
from .words import (
    TWO_SIDED,
    VAR,
    DominationVector,
    Word,
    WordSequence,
    concat,
    extracted_word,
    plan_choices,
    substitute,
)

__all__ = [
    "MAX_COLORS",
    "Coloring",
    "coloring_from_json",
    "SearchBudget",
    "Meter",
    "Exhausted",
    "Ball",
    "coloring_from_net",
    "substitution_range",
    "window_candidates",
    "SubstitutionWitness",
    "search_monochromatic_substitutions",
    "ExtractionWitness",
    "extraction_candidates",
    "iter_monochromatic_extractions",
    "search_monochromatic_extraction",
    "constant_words_of_prefix",
    "HindmanResult",
    "hindman_finite_check",
]

MAX_COLORS = 16


# -- colourings ---------------------------------------------------------------
@dataclass
class Coloring:
    """A rule ``word -> colour`` with colours ``1..arity``.

    Colour ``0`` is reserved for words a search must reject outright (net
    values outside the region being refined).
    """

    arity: int
    rule: str
    fn: Callable[[Word], int] = field(repr=False)
    params: dict = field(default_factory=dict)

    def __call__(self, w: Word) -> int:
        c = self.fn(w)
        if not 0 <= c <= self.arity:
            raise LocWordsError(f"colour {c} out of range 1..{self.arity}")
        return c

    def to_json(self) -> dict:
        if self.rule == "net":
            raise ConfigError("net colourings are built at run time and are not serialised")
        return {"rule": self.rule, "arity": self.arity, **self.params}


def word_key(w: Word) -> str:
    return str(w)


def coloring_from_json(obj: Mapping) -> Coloring:
    """Catalog: ``constant``, ``residue``, ``length_mod``, ``letter_sum_mod``,
    ``max_position_mod``, ``table``."""
    rule = obj.get("rule")
    params = {k: v for k, v in obj.items() if k not in ("rule", "arity")}
    if rule == "constant":
        return Coloring(1, rule, lambda w: 1, params)
    if rule == "table":
        entries = {str(k): int(v) for k, v in obj.get("entries", {}).items()}
        default = int(obj.get("default", 1))
        arity = int(obj.get("arity", max([default, *entries.values()])))
        _check_arity(arity)
        if any(not 1 <= c <= arity for c in [default, *entries.values()]):
            raise ConfigError("table colours must lie in 1..arity")
        return Coloring(arity, rule, lambda w: entries.get(word_key(w), default), params)
    try:
        m = int(obj["modulus"])
    except (KeyError, TypeError, ValueError):
        raise ConfigError(f"colouring {rule!r} needs an integer 'modulus'") from None
    _check_arity(m)
    if rule == "residue":
        codec = make_codec(obj.get("codec", "rational"))
        params["codec"] = codec.to_json()

        def residue(w: Word, codec: Codec = codec) -> int:
            v = Fraction(codec.decode(w))
            return (v.numerator // v.denominator) % m + 1

        return Coloring(m, rule, residue, params)
    if rule == "length_mod":
        return Coloring(m, rule, lambda w: len(w) % m + 1, params)
    if rule == "letter_sum_mod":
        return Coloring(m, rule, lambda w: sum(v for _, v in w.entries) % m + 1, params)
    if rule == "max_position_mod":
        return Coloring(m, rule, lambda w: w.entries[-1][0] % m + 1, params)
    raise ConfigError(f"unknown colouring rule {rule!r}")


def _check_arity(s: int) -> None:
    if not 1 <= s <= MAX_COLORS:
        raise ConfigError(f"colour count {s} outside 1..{MAX_COLORS}")


@dataclass(frozen=True)
class Ball:
    center: object
    radius: Fraction


def coloring_from_net(net: Callable[[Word], object], balls: Sequence[Ball], space: Space,
                      reject_uncovered: bool = False) -> Coloring:
    """Colour ``w`` by the least index ``i`` (1-based) with ``net(w)`` in ball ``i``.

    Values outside every ball raise :class:`UncoveredValue`, or get colour 0
    when ``reject_uncovered`` is set.
    """
    balls = list(balls)
    same_radius = len({b.radius for b in balls}) == 1
    centres = [b.center for b in balls]

    def colour(w: Word) -> int:
        x = net(w)
        if same_radius and balls:
            i = space.locate(x, centres, balls[0].radius)
        else:
            i = next((j for j, b in enumerate(balls) if space.distance(x, b.center) <= b.radius), -1)
        if i < 0:
            if reject_uncovered:
                return 0
            raise UncoveredValue(w)
        return i + 1

    return Coloring(max(1, len(balls)), "net", colour)


# -- budgets ------------------------------------------------------------------
@dataclass(frozen=True)
class SearchBudget:
    """Bounds for a finite search: position window ``+-window``, picks per
    extracted term, candidates examined, and the run seed."""

    window: int = 3
    max_plan_terms: int = 2
    max_candidates: int = 100_000
    seed: int = 0

    def __post_init__(self) -> None:
        if min(self.window, self.max_plan_terms, self.max_candidates) < 1:
            raise ConfigError("budget bounds must be positive")

    def to_json(self) -> dict:
        return {"window": self.window, "max_plan_terms": self.max_plan_terms,
                "max_candidates": self.max_candidates, "seed": self.seed}


class Meter:
    """Shared candidate counter, so nested searches draw on one budget."""

    def __init__(self, limit: int) -> None:
        self.limit, self.used = limit, 0

    def take(self) -> bool:
        if self.used >= self.limit:
            return False
        self.used += 1
        return True

    @property
    def spent(self) -> bool:
        return self.used >= self.limit


@dataclass(frozen=True)
class Exhausted:
    """No witness: ``reason`` is ``"complete"`` (whole finite universe searched) or ``"budget"``."""

    reason: str
    examined: int

    def __bool__(self) -> bool:
        return False


# -- monochromatic variable words ---------------------------------------------
def substitution_range(w: Word, k: DominationVector) -> list:
    """Every legal substitution of a variable word, lexicographic."""
    if w.kind == TWO_SIDED:
        bp, bq = k(w.pos_domain[0]), k(w.neg_domain[-1])
        return [(p, q) for p in range(1, bp + 1) for q in range(1, bq + 1)]
    return [(p,) for p in range(1, k(w.entries[0][0]) + 1)]


def _position_options(n: int, k: DominationVector) -> list:
    return [None] + list(range(1, k(n) + 1))


def window_candidates(k: DominationVector, window: int) -> Iterator[Word]:
    """Variable words with positions in the window, in search order.

    Order: by ``r = max |position|``, then by number of variable positions,
    then by the variable set (lexicographic), then by the constant letters
    (``itertools.product`` order, absent first).  Two-sided candidates are
    zero-class.
    """
    two = k.kind == TWO_SIDED
    for r in range(1, window + 1):
        positions = sorted([*range(-r, 0), *range(1, r + 1)]) if two else list(range(1, r + 1))
        edge = {-r, r}
        for nv in range(1, len(positions) + 1):
            for vset in itertools.combinations(positions, nv):
                if two and not (vset[0] < 0 < vset[-1]):
                    continue
                rest = [n for n in positions if n not in vset]
                for letters in itertools.product(*(_position_options(n, k) for n in rest)):
                    entries = [(n, VAR) for n in vset] + [(n, v) for n, v in zip(rest, letters) if v]
                    if not edge.intersection(n for n, _ in entries):
                        continue
                    yield Word(tuple(sorted(entries)), k.kind)


@dataclass(frozen=True)
class SubstitutionWitness:
    word: Word
    color: int
    substitutions: int
    examined: int


def search_monochromatic_substitutions(col: Coloring, k: DominationVector, budget: SearchBudget) -> object:
    """First window candidate ``u`` whose substitutions ``u(p,q)`` all share one colour."""
    meter = Meter(budget.max_candidates)
    for u in window_candidates(k, budget.window):
        if not meter.take():
            return Exhausted("budget", meter.used)
        subs = substitution_range(u, k)
        first = None
        for s in subs:
            c = col(substitute(u, s, k))
            if c == 0 or (first is not None and c != first):
                break
            first = c
        else:
            # independent re-evaluation before reporting
            if {col(substitute(u, s, k)) for s in subs} == {first}:
                return SubstitutionWitness(u, first, len(subs), meter.used)
    return Exhausted("complete", meter.used)


# -- monochromatic extractions ------------------------------------------------
@dataclass(frozen=True)
class ExtractionWitness:
    terms: tuple  # extracted variable words u_1..u_d
    plans: tuple  # plans over the base realising each term
    color: int
    words_checked: int
    examined: int


def extraction_candidates(base: WordSequence, after: int, max_picks: int) -> Iterator[tuple]:
    """Variable plans using base indices ``> after``.

    Order: by last index used, then number of picks, then lexicographic on
    the picks with the variable pick last.
    """
    L = len(base)
    for last in range(after + 1, L + 1):
        for t in range(1, max_picks + 1):
            for earlier in itertools.combinations(range(after + 1, last), t - 1):
                idx = (*earlier, last)
                choices = [plan_choices(base, i, True) for i in idx]
                for subs in itertools.product(*choices):
                    if None in subs:
                        yield tuple(zip(idx, subs))


def _term_subs(k: DominationVector, m: int, kind: str) -> list:
    """Substitutions allowed for the ``m``-th term of an extraction."""
    if kind == TWO_SIDED:
        return [(p, q) for p in range(1, k(m) + 1) for q in range(1, k(-m) + 1)]
    return [(p,) for p in range(1, k(m) + 1)]


def constant_words_of_prefix(terms: Sequence[Word], k: DominationVector, max_terms: Optional[int] = None) -> list:
    """All constant extracted words of the finite sequence ``terms`` (plan bounds by term index)."""
    out = []
    if not terms:
        return out
    kind = terms[0].kind
    max_terms = len(terms) if max_terms is None else max_terms
    partial = [((), None)]
    for m, u in enumerate(terms, 1):
        subs = [(s, substitute(u, s, k)) for s in _term_subs(k, m, kind)]
        fresh = []
        for picks, w in partial:
            if len(picks) >= max_terms:
                continue
            for s, us in subs:
                nw = us if w is None else concat(w, us)
                fresh.append((picks + ((m, s),), nw))
        partial.extend(fresh)
        out.extend(fresh)
    return out


def iter_monochromatic_extractions(col: Coloring, base: WordSequence, terms_wanted: int,
                                   budget: SearchBudget, meter: Optional[Meter] = None,
                                   check_terms: Optional[int] = None,
                                   color: Optional[int] = None) -> Iterator[ExtractionWitness]:
    """Depth-first search over extractions ``u_1..u_d`` of ``base``.

    Every constant extracted word of the prefix that uses at most
    ``check_terms`` of its terms (default: all) must get the same nonzero
    colour, or colour ``color`` when given.  Successes are yielded in search
    order; the caller may keep iterating to backtrack.
    """
    meter = meter or Meter(budget.max_candidates)
    if terms_wanted > len(base) or terms_wanted < 1:
        return
    k, kind = base.k, base.kind
    check_terms = terms_wanted if check_terms is None else check_terms
    chosen: List[tuple] = []  # (plan, word)

    def rec(m: int, after: int, words: list, colour: Optional[int]) -> Iterator[ExtractionWitness]:
        if m > terms_wanted:
            yield ExtractionWitness(tuple(w for _, w in chosen), tuple(p for p, _ in chosen),
                                    colour, len(words), meter.used)
            return
        # each later term needs at least one fresh base index
        room = len(base) - (terms_wanted - m)
        for plan in extraction_candidates(base, after, budget.max_plan_terms):
            if plan[-1][0] > room:
                return
            if not meter.take():
                return
            u = extracted_word(base, plan)
            subs = [substitute(u, s, k) for s in _term_subs(k, m, kind)]
            fresh = []
            c = colour
            ok = True
            for us in subs:
                for picks, w in [(0, None)] + words:
                    if picks >= check_terms:
                        continue
                    nw = us if w is None else concat(w, us)
                    got = col(nw)
                    if got == 0 or (c is not None and got != c):
                        ok = False
                        break
                    c = got
                    fresh.append((picks + 1, nw))
                if not ok:
                    break
            if not ok:
                continue
            chosen.append((plan, u))
            yield from rec(m + 1, plan[-1][0], words + fresh, c)
            chosen.pop()
            if meter.spent:
                return

    yield from rec(1, 0, [], color)


def _verify_extraction(col: Coloring, base: WordSequence, wit: ExtractionWitness, check_terms: int) -> bool:
    seq = WordSequence(wit.terms, base.k)
    for u, plan in zip(wit.terms, wit.plans):
        if extracted_word(base, plan) != u:
            return False
    colours = {col(w) for _, w in constant_words_of_prefix(seq.terms, base.k, check_terms)}
    return colours == {wit.color}


def search_monochromatic_extraction(col: Coloring, base: WordSequence, terms_wanted: int,
                                    budget: SearchBudget, check_terms: Optional[int] = None) -> object:
    """First extraction prefix whose constant extracted words are monochromatic, or :class:`Exhausted`."""
    meter = Meter(budget.max_candidates)
    ct = terms_wanted if check_terms is None else check_terms
    for wit in iter_monochromatic_extractions(col, base, terms_wanted, budget, meter, check_terms):
        if not _verify_extraction(col, base, wit, ct):  # pragma: no cover - defensive
            raise LocWordsError("extraction witness failed re-verification")
        return wit
    return Exhausted("budget" if meter.spent else "complete", meter.used)


# -- Hindman / weak Schur specialisation --------------------------------------
@dataclass(frozen=True)
class HindmanResult:
    """``n_star``: least ``N`` where every 2-colouring of ``1..N`` has a
    monochromatic ``{a, b, a + b}`` with ``a < b``.  ``avoiding`` is a
    colouring of ``1..n_star-1`` (colours 1 and 2) with no such triple."""

    n_star: int
    avoiding: tuple
    counts: tuple  # counts[n-1]: avoiding colourings of 1..n with colour(1) fixed
    verified: bool


def has_mono_sum(colouring: Sequence[int]) -> Optional[tuple]:
    """A triple ``(a, b, a+b)`` with ``a < b`` in one colour, or ``None``."""
    n = len(colouring)
    for a in range(1, n + 1):
        for b in range(a + 1, n + 1 - a):
            if colouring[a - 1] == colouring[b - 1] == colouring[a + b - 1]:
                return (a, b, a + b)
    return None


def hindman_finite_check(max_n: int = 20, colors: int = 2, backend: Optional[str] = None) -> HindmanResult:
    if colors != 2:
        raise ConfigError("only 2-colourings are supported")
    if not 1 <= max_n <= 62:
        raise ConfigError("max_n must lie in 1..62")
    counts = []
    n_star = None
    avoiding = None
    for n in range(1, max_n + 1):
        first = weak_schur_first_avoiding(n, backend)
        counts.append(weak_schur_count_avoiding(n, backend) if first is not None else 0)
        if first is None and n_star is None:
            n_star = n
        elif first is not None:
            if n_star is not None:
                raise LocWordsError(f"avoiding colouring reappears at {n}")  # pragma: no cover
            avoiding = tuple(c + 1 for c in first)
    if n_star is None:
        raise LocWordsError(f"every N <= {max_n} admits an avoiding colouring; raise max_n")
    verified = avoiding is not None and len(avoiding) == n_star - 1 and has_mono_sum(avoiding) is None
    return HindmanResult(n_star, avoiding, tuple(counts), verified)
