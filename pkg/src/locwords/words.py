"""Located words over an infinite alphabet dominated by a sequence.

A word is a finite map from nonzero integer positions to letters.  Letters
are positive integers; on the negative side the stored letter ``v`` stands
for the negative-indexed symbol of index ``-v`` so the bound check is the
same on both sides.  The variable symbol is stored as letter ``0`` (``VAR``).

Two flavours exist: *two-sided* words live on all of ``Z*`` and are ordered
by the straddling relation R1, *one-sided* words live on ``N`` and are
ordered by the precedence relation R2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

from .errors import (
    DomainOverlap,
    EmptyDomain,
    InvalidDomination,
    InvalidSequence,
    LetterOutOfBound,
    LocWordsError,
    NotZeroClass,
    OneSidedDomain,
    PlanIndexOutOfRange,
    SubstitutionOutOfBound,
    ZeroPosition,
)

__all__ = [
    "VAR",
    "TWO_SIDED",
    "ONE_SIDED",
    "DominationVector",
    "Word",
    "WordSequence",
    "Sub",
    "Plan",
    "make_word",
    "validate_word",
    "concat",
    "concat_all",
    "rel_r1",
    "rel_r2",
    "substitute",
    "min_index",
    "extracted_word",
    "plan_choices",
    "enumerate_extracted",
    "count_extracted",
    "find_extraction_plan",
    "is_extraction",
    "ExtractionCheck",
    "diagonal_sequence",
    "positions_sequence",
]

VAR = 0
TWO_SIDED = "two-sided"
ONE_SIDED = "one-sided"
_KINDS = (TWO_SIDED, ONE_SIDED)

# A substitution is (p, q) for two-sided words, (p,) for one-sided ones;
# None is the variable pick that leaves the word unchanged.
Sub = Optional[tuple]
Plan = tuple  # tuple[tuple[int, Sub], ...]


@lru_cache(maxsize=None)
def _fib(n: int) -> int:
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


_RULE_ARITY = {
    "constant": 1,
    "abs": 0,
    "abs_plus_one": 0,
    "affine": 2,
    "capped_abs": 1,
    "fibonacci": 1,
    "table": 3,
}


@dataclass(frozen=True)
class DominationVector:
    """Per-position letter bounds ``k_n``, drawn from a small rule catalog.

    Rules (``params`` in brackets):

    ``constant [c]``         k_n = c
    ``abs []``               k_n = |n|
    ``abs_plus_one []``      k_n = |n| + 1
    ``affine [a, b]``        k_n = a|n| + b
    ``capped_abs [cap]``     k_n = min(|n|, cap)
    ``fibonacci [offset]``   k_n = F(|n| + offset)
    ``table [pos, neg, tail]`` explicit values for n = 1..len(pos) and
    n = -1..-len(neg); ``tail`` is a ``{"rule", "params"}`` mapping used
    beyond the tables.
    """

    rule: str
    params: tuple = ()
    kind: str = TWO_SIDED

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise InvalidDomination(f"unknown kind {self.kind!r}")
        if self.rule not in _RULE_ARITY:
            raise InvalidDomination(f"unknown domination rule {self.rule!r}")
        params = tuple(self.params)
        if self.rule == "table":
            pos, neg, tail = params
            if not isinstance(tail, DominationVector):
                tail = DominationVector(tail["rule"], tuple(tail.get("params", ())), self.kind)
            params = (tuple(int(v) for v in pos), tuple(int(v) for v in neg), tail)
        object.__setattr__(self, "params", params)
        if len(params) != _RULE_ARITY[self.rule]:
            raise InvalidDomination(f"rule {self.rule!r} takes {_RULE_ARITY[self.rule]} params")
        self._check_monotone()

    def _check_monotone(self) -> None:
        r, p = self.rule, self.params
        if r == "constant" and p[0] < 1:
            raise InvalidDomination("constant bound must be >= 1")
        if r == "affine" and (p[0] < 0 or p[0] + p[1] < 1):
            raise InvalidDomination("affine bound needs a >= 0 and a + b >= 1")
        if r == "capped_abs" and p[0] < 1:
            raise InvalidDomination("cap must be >= 1")
        if r == "fibonacci" and p[0] < 0:
            raise InvalidDomination("fibonacci offset must be >= 0")
        if r == "table":
            pos, neg, tail = p
            sides = ((pos, 1), (neg, -1)) if self.kind == TWO_SIDED else ((pos, 1),)
            for side, sign in sides:
                seq = list(side) + [tail(sign * (len(side) + 1))]
                if seq[0] < 1 or any(a > b for a, b in zip(seq, seq[1:])):
                    raise InvalidDomination("table values must be >= 1 and nondecreasing")

    def __call__(self, n: int) -> int:
        if n == 0:
            raise ZeroPosition()
        if self.kind == ONE_SIDED and n < 0:
            return 0
        m = abs(n)
        r, p = self.rule, self.params
        if r == "constant":
            return p[0]
        if r == "abs":
            return m
        if r == "abs_plus_one":
            return m + 1
        if r == "affine":
            return p[0] * m + p[1]
        if r == "capped_abs":
            return min(m, p[0])
        if r == "fibonacci":
            return _fib(m + p[0])
        pos, neg, tail = p
        table = pos if n > 0 else neg
        return table[m - 1] if m <= len(table) else tail(n)

    def with_kind(self, kind: str) -> "DominationVector":
        return DominationVector(self.rule, self.params, kind)

    def to_json(self) -> dict:
        params = list(self.params)
        if self.rule == "table":
            pos, neg, tail = self.params
            params = [list(pos), list(neg), {"rule": tail.rule, "params": list(tail.params)}]
        return {"rule": self.rule, "params": params, "kind": self.kind}

    @classmethod
    def from_json(cls, obj: Mapping) -> "DominationVector":
        try:
            return cls(obj["rule"], tuple(obj.get("params", ())), obj.get("kind", TWO_SIDED))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, LocWordsError):
                raise
            raise InvalidDomination(f"bad domination vector {obj!r}: {exc}") from None


@dataclass(frozen=True)
class Word:
    """An immutable located word; ``entries`` are ``(position, letter)`` sorted by position."""

    entries: tuple
    kind: str = TWO_SIDED
    _map: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_map", dict(self.entries))

    # -- structure ---------------------------------------------------------
    @property
    def domain(self) -> tuple:
        return tuple(n for n, _ in self.entries)

    @property
    def neg_domain(self) -> tuple:
        return tuple(n for n, _ in self.entries if n < 0)

    @property
    def pos_domain(self) -> tuple:
        return tuple(n for n, _ in self.entries if n > 0)

    @cached_property
    def variable_positions(self) -> tuple:
        return tuple(n for n, v in self.entries if v == VAR)

    @property
    def is_variable(self) -> bool:
        return bool(self.variable_positions)

    @property
    def is_zero_class(self) -> bool:
        vp = self.variable_positions
        return bool(vp) and vp[0] < 0 < vp[-1]

    def __getitem__(self, n: int) -> int:
        return self._map[n]

    def __contains__(self, n: object) -> bool:
        return n in self._map

    def __len__(self) -> int:
        return len(self.entries)

    def as_dict(self) -> dict:
        return dict(self._map)

    def __str__(self) -> str:
        body = ", ".join(f"{n}:{'v' if v == VAR else v}" for n, v in self.entries)
        return "{" + body + "}"


def make_word(raw: Union[Mapping, Iterable], kind: str = TWO_SIDED) -> Word:
    """Build a word from ``{position: letter}``, checking structure but not bounds.

    Letters may be given as ``"v"`` (or ``VAR``) for the variable.
    """
    items = raw.items() if isinstance(raw, Mapping) else raw
    entries = []
    for n, v in items:
        n = int(n)
        if v == "v" or v == "υ":
            v = VAR
        v = int(v)
        if n == 0:
            raise ZeroPosition()
        if v < 0:
            raise LetterOutOfBound(n, v, 0)
        if kind == ONE_SIDED and n < 0:
            raise LetterOutOfBound(n, v, 0)
        entries.append((n, v))
    if not entries:
        raise EmptyDomain()
    entries.sort()
    if any(a[0] == b[0] for a, b in zip(entries, entries[1:])):
        raise DomainOverlap(next(a[0] for a, b in zip(entries, entries[1:]) if a[0] == b[0]))
    if kind not in _KINDS:
        raise LocWordsError(f"unknown word kind {kind!r}")
    return Word(tuple(entries), kind)


def _check_bounds(w: Word, k: DominationVector) -> None:
    for n, v in w.entries:
        if v != VAR and v > k(n):
            raise LetterOutOfBound(n, v, k(n))
        if v == VAR and k(n) < 1:
            raise LetterOutOfBound(n, v, k(n))


def validate_word(raw: Union[Mapping, Word], k: DominationVector) -> Word:
    """Classify ``raw`` under ``k`` and check every letter bound.

    >>> k = DominationVector("abs")
    >>> validate_word({-2: "v", 1: "v", 3: 2}, k).is_zero_class
    True
    """
    w = raw if isinstance(raw, Word) else make_word(raw, k.kind)
    if w.kind != k.kind:
        raise LocWordsError(f"{w.kind} word checked against {k.kind} domination")
    _check_bounds(w, k)
    return w


def concat(w: Word, u: Word) -> Word:
    """The concatenating word: union of two words with disjoint domains."""
    if w.kind != u.kind:
        raise LocWordsError("cannot concatenate words of different kinds")
    overlap = w._map.keys() & u._map.keys()
    if overlap:
        raise DomainOverlap(min(overlap))
    return Word(tuple(sorted(w.entries + u.entries)), w.kind)


def concat_all(words: Iterable[Word]) -> Word:
    words = list(words)
    if not words:
        raise EmptyDomain()
    out = words[0]
    for u in words[1:]:
        out = concat(out, u)
    return out


def rel_r2(w: Word, u: Word) -> bool:
    """``dom(w)`` wholly precedes ``dom(u)``."""
    return w.entries[-1][0] < u.entries[0][0]


def rel_r1(w: Word, u: Word) -> bool:
    """``dom(u)`` splits into two nonempty parts strictly straddling ``dom(w)``."""
    lo, hi = w.entries[0][0], w.entries[-1][0]
    below = above = False
    for n, _ in u.entries:
        if n < lo:
            below = True
        elif n > hi:
            above = True
        else:
            return False
    return below and above


def min_index(w: Word) -> int:
    """Convergence index of ``w``: ``min(-max dom-, min dom+)`` (two-sided) or ``min dom``."""
    if w.kind == ONE_SIDED:
        return w.entries[0][0]
    neg, pos = w.neg_domain, w.pos_domain
    if not neg or not pos:
        raise OneSidedDomain(f"{w} lacks a negative or positive part")
    return min(-neg[-1], pos[0])


def _norm_sub(sub, kind: str) -> Sub:
    if sub is None or sub == "v" or (isinstance(sub, int) and sub == VAR):
        return None
    if isinstance(sub, int):
        sub = (sub,)
    sub = tuple(int(x) for x in sub)
    if len(sub) != (2 if kind == TWO_SIDED else 1):
        raise SubstitutionOutOfBound(f"substitution {sub} does not fit a {kind} word")
    if min(sub) < 1:
        raise SubstitutionOutOfBound(f"substitution {sub} has a letter below 1")
    return sub


def substitute(w: Word, sub, k: DominationVector) -> Word:
    """Replace the variable: positive positions get ``p``, negative positions ``q``.

    ``sub=None`` is the variable pick and returns ``w`` unchanged.
    """
    sub = _norm_sub(sub, w.kind)
    if sub is None:
        return w
    vp = w.variable_positions
    if not vp:
        raise SubstitutionOutOfBound(f"{w} has no variable to substitute")
    if w.kind == TWO_SIDED:
        if not w.is_zero_class:
            raise NotZeroClass(f"{w} lacks a variable on both sides")
        p, q = sub
        bp, bq = k(w.pos_domain[0]), k(w.neg_domain[-1])
        if p > bp or q > bq:
            raise SubstitutionOutOfBound(f"({p},{q}) exceeds ({bp},{bq}) for {w}")
    else:
        (p,) = sub
        q = None
        bp = k(w.entries[0][0])
        if p > bp:
            raise SubstitutionOutOfBound(f"{p} exceeds {bp} for {w}")
    entries = []
    for n, v in w.entries:
        if v == VAR:
            v = p if n > 0 else q
            # k is nondecreasing away from 0, so the minimal-position bound covers all
            assert v <= k(n)
        entries.append((n, v))
    return Word(tuple(entries), w.kind)


def _check_feasible(m: int, t: Word) -> bool:
    if t.kind == ONE_SIDED:
        return m <= t.entries[0][0]
    neg, pos = t.neg_domain, t.pos_domain
    return bool(neg and pos) and m <= pos[0] and -m >= neg[-1]


@dataclass(frozen=True)
class WordSequence:
    """A finite prefix of a strictly R1- (two-sided) or R2- (one-sided) increasing sequence of variable words."""

    terms: tuple
    k: DominationVector

    def __post_init__(self) -> None:
        terms = tuple(self.terms)
        object.__setattr__(self, "terms", terms)
        if not terms:
            raise InvalidSequence("a sequence needs at least one term")
        two = self.k.kind == TWO_SIDED
        for m, t in enumerate(terms, 1):
            validate_word(t, self.k)
            if not t.is_variable:
                raise InvalidSequence(f"term {m} is not a variable word")
            if two and not t.is_zero_class:
                raise InvalidSequence(f"term {m} is not zero-class")
            if not _check_feasible(m, t):
                raise InvalidSequence(f"term {m} violates index feasibility")
        rel = rel_r1 if two else rel_r2
        for m, (a, b) in enumerate(zip(terms, terms[1:]), 1):
            if not rel(a, b):
                raise InvalidSequence(f"terms {m} and {m + 1} are not {self.order}-increasing")

    @property
    def order(self) -> str:
        return "R1" if self.k.kind == TWO_SIDED else "R2"

    @property
    def kind(self) -> str:
        return self.k.kind

    def __len__(self) -> int:
        return len(self.terms)

    def __getitem__(self, i):
        return self.terms[i]

    def prefix(self, n: int) -> "WordSequence":
        return WordSequence(self.terms[:n], self.k)

    def tail(self, start: int) -> "WordSequence":
        """Terms ``start..`` (1-based) as a new sequence; feasibility is re-checked."""
        return WordSequence(self.terms[start - 1:], self.k)


def diagonal_sequence(k: DominationVector, length: int) -> WordSequence:
    """``w_n = {-n: v, n: v}`` (two-sided) or ``w_n = {n: v}`` (one-sided)."""
    if k.kind == TWO_SIDED:
        terms = [Word(((-n, VAR), (n, VAR)), TWO_SIDED) for n in range(1, length + 1)]
    else:
        terms = [Word(((n, VAR),), ONE_SIDED) for n in range(1, length + 1)]
    return WordSequence(tuple(terms), k)


def positions_sequence(k: DominationVector, positive: Sequence[int], negative: Sequence[int] = ()) -> WordSequence:
    """``w_n = {-negative[n]: v, positive[n]: v}``; ``negative`` is ignored for one-sided ``k``."""
    if k.kind == TWO_SIDED:
        if len(negative) != len(positive):
            raise InvalidSequence("need as many negative as positive positions")
        terms = [Word(((-r, VAR), (m, VAR)), TWO_SIDED) for m, r in zip(positive, negative)]
    else:
        terms = [Word(((m, VAR),), ONE_SIDED) for m in positive]
    return WordSequence(tuple(terms), k)


# -- extraction ------------------------------------------------------------
def plan_choices(seq: WordSequence, index: int, variable: bool = True) -> list:
    """Legal substitutions for term ``index`` (1-based): lexicographic, the variable pick last."""
    k = seq.k
    if seq.kind == TWO_SIDED:
        subs = [(p, q) for p in range(1, k(index) + 1) for q in range(1, k(-index) + 1)]
    else:
        subs = [(p,) for p in range(1, k(index) + 1)]
    if variable:
        subs.append(None)
    return subs


def extracted_word(seq: WordSequence, plan: Iterable) -> Word:
    """The concatenation of the substituted picked terms.

    ``plan`` is a list of ``(term_index, substitution)`` with strictly
    increasing 1-based indices; a ``None`` substitution keeps the variable.
    """
    plan = list(plan)
    if not plan:
        raise EmptyDomain()
    prev = 0
    parts = []
    for idx, sub in plan:
        if not 1 <= idx <= len(seq) or idx <= prev:
            raise PlanIndexOutOfRange(f"bad plan index {idx}")
        prev = idx
        sub = _norm_sub(sub, seq.kind)
        if sub is not None:
            bounds = (seq.k(idx), seq.k(-idx)) if seq.kind == TWO_SIDED else (seq.k(idx),)
            if any(s > b for s, b in zip(sub, bounds)):
                raise SubstitutionOutOfBound(f"{sub} exceeds {bounds} at term {idx}")
        parts.append(substitute(seq.terms[idx - 1], sub, seq.k))
    return concat_all(parts)


def enumerate_extracted(
    seq: WordSequence,
    constant_only: bool = True,
    max_terms: Optional[int] = None,
    variable_only: bool = False,
    start: int = 1,
) -> Iterator[tuple]:
    """Yield ``(plan, word)`` for every extraction plan using at most ``max_terms`` terms.

    The order is lexicographic on the pick list (a plan precedes its
    extensions).  ``constant_only`` restricts to constant words, otherwise
    ``variable_only`` restricts to words keeping the variable; with both
    false every plan is emitted.
    """
    L = len(seq)
    max_terms = L if max_terms is None else max_terms
    if max_terms > L:
        raise PlanIndexOutOfRange(f"max_terms {max_terms} exceeds sequence length {L}")
    subs = [None] + [
        [(s, substitute(seq.terms[i - 1], s, seq.k)) for s in plan_choices(seq, i, not constant_only)]
        for i in range(1, L + 1)
    ]

    def rec(first: int, plan: tuple, parts: tuple, has_var: bool) -> Iterator[tuple]:
        for i in range(first, L + 1):
            for s, part in subs[i]:
                p2 = plan + ((i, s),)
                pr = parts + (part,)
                hv = has_var or s is None
                if not variable_only or hv:
                    yield p2, Word(tuple(sorted(e for w in pr for e in w.entries)), seq.kind)
                if len(p2) < max_terms:
                    yield from rec(i + 1, p2, pr, hv)

    if max_terms >= 1:
        yield from rec(start, (), (), False)


def _esym(values: Sequence[int], m: int) -> int:
    """Sum over subsets of size 1..m of the product of ``values``."""
    e = [1] + [0] * m
    for v in values:
        for j in range(m, 0, -1):
            e[j] += e[j - 1] * v
    return sum(e[1:])


def count_extracted(seq: WordSequence, constant_only: bool = True, max_terms: Optional[int] = None,
                    variable_only: bool = False) -> int:
    """Closed-form count matching :func:`enumerate_extracted`."""
    L = len(seq)
    m = L if max_terms is None else max_terms
    c = [len(plan_choices(seq, i, False)) for i in range(1, L + 1)]
    if constant_only:
        return _esym(c, m)
    total = _esym([x + 1 for x in c], m)
    return total - _esym(c, m) if variable_only else total


def find_extraction_plan(word: Word, base: WordSequence, variable: bool = True) -> Optional[Plan]:
    """The unique plan producing ``word`` from ``base``, or None.

    With ``variable`` the plan must keep the variable in at least one pick;
    otherwise it must substitute every pick.
    """
    if word.kind != base.kind:
        return None
    owner = {}
    for i, t in enumerate(base.terms, 1):
        for n in t.domain:
            owner[n] = i
    used = set()
    for n in word.domain:
        i = owner.get(n)
        if i is None:
            return None
        used.add(i)
    used = sorted(used)
    plan = []
    for i in used:
        t = base.terms[i - 1]
        if any(n not in word for n in t.domain):
            return None
        pos_letters, neg_letters = set(), set()
        for n, v in t.entries:
            got = word[n]
            if v != VAR:
                if got != v:
                    return None
            else:
                (pos_letters if n > 0 else neg_letters).add(got)
        letters = pos_letters | neg_letters
        if letters == {VAR}:
            plan.append((i, None))
            continue
        if VAR in letters or len(pos_letters) > 1 or len(neg_letters) > 1:
            return None
        if base.kind == TWO_SIDED:
            sub = (pos_letters.pop(), neg_letters.pop())
            if sub[0] > base.k(i) or sub[1] > base.k(-i):
                return None
        else:
            sub = (pos_letters.pop(),)
            if sub[0] > base.k(i):
                return None
        plan.append((i, sub))
    has_var = any(s is None for _, s in plan)
    if has_var != variable:
        return None
    return tuple(plan)


@dataclass(frozen=True)
class ExtractionCheck:
    ok: bool
    plans: tuple = ()
    failed_at: Optional[int] = None

    def __bool__(self) -> bool:
        return self.ok


def is_extraction(candidate: WordSequence, base: WordSequence, depth: Optional[int] = None) -> ExtractionCheck:
    """Check that the first ``depth`` terms of ``candidate`` are extracted variable words of ``base``."""
    depth = len(candidate) if depth is None else depth
    if candidate.k != base.k or depth > len(candidate):
        return ExtractionCheck(False, (), 0)
    plans = []
    for m, u in enumerate(candidate.terms[:depth], 1):
        plan = find_extraction_plan(u, base, variable=True)
        if plan is None:
            return ExtractionCheck(False, tuple(plans), m)
        plans.append(plan)
    return ExtractionCheck(True, tuple(plans))
