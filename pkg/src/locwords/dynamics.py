"""Limits, recurrence and multiple recurrence for word-indexed systems.

Every search here works at finite depth with a candidate budget.  A
success is always re-verified by applying the maps directly to every
examined extracted word; an unsuccessful search returns
:class:`~locwords.ramsey.Exhausted`.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterator, List, Optional, Sequence

from .codec import make_codec
from .errors import (
    ChainBudgetExhausted,
    ConfigError,
    LocWordsError,
    NotCommuting,
    NotInvertible,
)
from .kernels import fs_max_distance
from .ramsey import (
    Ball,
    Exhausted,
    Meter,
    SearchBudget,
    _term_subs,
    coloring_from_net,
    constant_words_of_prefix,
    extraction_candidates,
    iter_monochromatic_extractions,
)
from .semigroup import PhiShift, SemigroupTable, decompose_term
from .spaces import CircleExact, CircleFixed, Cyclic, Space
from .systems import Angle, ProductSystem, QuotientSystem, WordSystem, _rotate_amount
from .words import (
    ONE_SIDED,
    TWO_SIDED,
    VAR,
    DominationVector,
    Word,
    WordSequence,
    concat,
    concat_all,
    enumerate_extracted,
    extracted_word,
    find_extraction_plan,
    min_index,
    rel_r1,
    rel_r2,
    substitute,
)

__all__ = [
    "Net",
    "LawReport",
    "check_system_law",
    "random_related_pair",
    "LimitReport",
    "r_limit_check",
    "IPReport",
    "uniform_ip_check",
    "ConvergentResult",
    "iter_convergent_extractions",
    "find_convergent_extraction",
    "RecurrenceResult",
    "find_recurrent_point",
    "verify_recurrence",
    "RecurrentSetWitness",
    "recurrent_set_check",
    "Prop12Result",
    "prop12_chain",
    "MultiResult",
    "multiple_recurrence_search",
    "check_invertible",
    "check_commuting",
    "IntersectionReport",
    "intersection_check",
    "SemigroupReport",
    "semigroup_recurrence",
    "level_lengths",
]


# -- nets ---------------------------------------------------------------------
@dataclass
class Net:
    """A rule ``word -> point`` from a small catalog.

    ``constant``  every word goes to ``point``.
    ``orbit``     ``w -> T^w(x)`` for a system.
    ``decoded``   ``w -> decode(w) * alpha`` on a circle.
    ``index``     ``w -> 1 / min_index(w)`` on a circle.
    ``table``     explicit ``str(word) -> point`` with a default.
    """

    rule: str
    space: Space
    fn: Callable[[Word], Any] = field(repr=False)
    params: dict = field(default_factory=dict)
    system: Optional[WordSystem] = field(default=None, repr=False)
    start: Any = None

    def __call__(self, w: Word):
        return self.fn(w)

    @classmethod
    def constant(cls, space: Space, point) -> "Net":
        point = space.normalize(point)
        return cls("constant", space, lambda w: point, {"point": space.point_to_json(point)})

    @classmethod
    def orbit(cls, system: WordSystem, x) -> "Net":
        x = system.space.normalize(x)
        return cls("orbit", system.space, lambda w: system.apply(w, x),
                   {"x": system.space.point_to_json(x)}, system, x)

    @classmethod
    def decoded(cls, space: Space, codec, alpha) -> "Net":
        codec, alpha = make_codec(codec), Angle.parse(alpha)
        return cls("decoded", space, lambda w: _rotate_amount(space, alpha, codec.decode(w)),
                   {"codec": codec.to_json(), "alpha": alpha.to_json()})

    @classmethod
    def index(cls, space: Space) -> "Net":
        return cls("index", space, lambda w: space.normalize(Fraction(1, min_index(w))), {})

    @classmethod
    def table(cls, space: Space, values: dict, default) -> "Net":
        vals = {str(k): space.normalize(v) for k, v in values.items()}
        default = space.normalize(default)
        return cls("table", space, lambda w: vals.get(str(w), default),
                   {"values": {k: space.point_to_json(v) for k, v in vals.items()},
                    "default": space.point_to_json(default)})


# -- the word-system law ------------------------------------------------------
def _random_letters(positions, k: DominationVector, rng: random.Random) -> tuple:
    return tuple((n, rng.randint(1, k(n))) for n in sorted(positions))


def random_related_pair(k: DominationVector, rng: random.Random, window: int = 4) -> tuple:
    """Random constant words ``w1 < w2`` in the order that goes with ``k``."""
    if k.kind == TWO_SIDED:
        lo, hi = rng.randint(1, window), rng.randint(1, window)
        inner = [n for n in range(-lo, hi + 1) if n and rng.random() < 0.6] or [rng.choice([-lo, hi])]
        a, b = inner[0], inner[-1]
        left = [n for n in range(a - window, a) if n < 0 and rng.random() < 0.5] or [min(a, 0) - 1 - rng.randint(0, 2)]
        right = [n for n in range(max(b, 0) + 1, max(b, 0) + window + 1) if rng.random() < 0.5] or [max(b, 0) + 1]
        w1 = Word(_random_letters(inner, k, rng), TWO_SIDED)
        w2 = Word(_random_letters(left + right, k, rng), TWO_SIDED)
        assert rel_r1(w1, w2)
    else:
        cut = rng.randint(1, window)
        first = [n for n in range(1, cut + 1) if rng.random() < 0.6] or [cut]
        second = [n for n in range(cut + 1, cut + window + 1) if rng.random() < 0.5] or [cut + 1]
        w1 = Word(_random_letters(first, k, rng), ONE_SIDED)
        w2 = Word(_random_letters(second, k, rng), ONE_SIDED)
        assert rel_r2(w1, w2)
    return w1, w2


@dataclass(frozen=True)
class LawReport:
    max_deviation: Fraction
    samples: int
    worst: Optional[tuple]  # (w1, w2, x) at the maximum

    @property
    def exact(self) -> bool:
        return self.max_deviation == 0


def check_system_law(sys: WordSystem, samples: int = 1000, seed: int = 0, window: int = 4) -> LawReport:
    """Sample ``d(T^{w1}(T^{w2} x), T^{w1 * w2} x)`` over related pairs and points."""
    rng = random.Random(seed)
    worst, dev = None, Fraction(0)
    for _ in range(samples):
        w1, w2 = random_related_pair(sys.k, rng, window)
        x = sys.space.sample(rng)
        d = sys.space.distance(sys.apply(w1, sys.apply(w2, x)), sys.apply(concat(w1, w2), x))
        if d > dev or worst is None:
            dev, worst = max(d, dev), (w1, w2, x)
    return LawReport(dev, samples, worst)


# -- limits -------------------------------------------------------------------
@dataclass(frozen=True)
class LimitReport:
    ok: bool
    examined: int
    worst: Optional[tuple]  # (word, distance) of the largest offender, or of the largest distance when ok


def r_limit_check(net: Net, x0, eps, n0: int, words) -> LimitReport:
    """True iff ``d(net(w), x0) <= eps`` for every examined ``w`` with ``min_index(w) >= n0``."""
    eps = Fraction(eps)
    worst, examined, ok = None, 0, True
    for w in words:
        if min_index(w) < n0:
            continue
        examined += 1
        d = net.space.distance(net(w), x0)
        if worst is None or d > worst[1]:
            worst = (w, d)
        if d > eps:
            ok = False
    return LimitReport(ok, examined, worst)


@dataclass(frozen=True)
class IPReport:
    r_limit: bool
    uniform_ip: bool
    r_examined: int
    ip_examined: int
    r_offender: Optional[tuple]
    ip_offender: Optional[tuple]  # (F, substitutions, distance)

    @property
    def agree(self) -> bool:
        return self.r_limit == self.uniform_ip


def uniform_ip_check(seq: WordSequence, net: Net, x0, eps, n0: int, depth: int) -> IPReport:
    """Two independent routes over the constant extracted words of ``seq``.

    The limit route enumerates extracted words and keeps those with
    ``min_index >= n0``.  The IP route runs over all finite index sets ``F``
    with ``min F >= n0`` and ``|F| <= depth`` and, for each, over every
    choice of substitutions on ``F``.  On sequences whose ``n``-th term has
    index ``n`` both routes examine the same words.
    """
    eps = Fraction(eps)
    words = (w for _, w in enumerate_extracted(seq, constant_only=True, max_terms=depth))
    lim = r_limit_check(net, x0, eps, n0, words)
    r_off = lim.worst if not lim.ok else None

    k, kind = seq.k, seq.kind
    ip_ok, ip_count, ip_off = True, 0, None
    indices = range(max(n0, 1), len(seq) + 1)
    for size in range(1, depth + 1):
        for F in itertools.combinations(indices, size):
            ranges = []
            for n in F:
                if kind == TWO_SIDED:
                    ranges.append([(p, q) for p in range(1, k(n) + 1) for q in range(1, k(-n) + 1)])
                else:
                    ranges.append([(p,) for p in range(1, k(n) + 1)])
            for subs in itertools.product(*ranges):
                entries = []
                for n, s in zip(F, subs):
                    for pos, v in seq.terms[n - 1].entries:
                        if v == VAR:
                            v = s[0] if pos > 0 else s[1]
                        entries.append((pos, v))
                y = net(Word(tuple(sorted(entries)), kind))
                ip_count += 1
                d = net.space.distance(y, x0)
                if d > eps:
                    if ip_ok or d > ip_off[2]:
                        ip_off = (F, subs, d)
                    ip_ok = False
    return IPReport(lim.ok, ip_ok, lim.examined, ip_count, r_off, ip_off)


# -- convergent extractions ---------------------------------------------------
def level_lengths(levels: int, terms_wanted: int, stride: int) -> list:
    """Prefix length at each refinement level; the last level has ``terms_wanted`` terms."""
    return [terms_wanted + (levels - 1 - i) * stride for i in range(levels)]


def _radii(levels: int, start_level: int, schedule) -> list:
    if schedule is not None:
        radii = [Fraction(r) for r in schedule]
        if len(radii) != levels or any(r <= 0 for r in radii):
            raise ConfigError("schedule must list one positive radius per level")
        return radii
    return [Fraction(1, 2 ** j) for j in range(start_level, start_level + levels)]


@dataclass(frozen=True)
class ConvergentResult:
    terms: tuple
    plans: tuple  # plans over the base
    x0: Any
    radii: tuple
    centres: tuple
    achieved: Fraction  # max distance from x0 over the final prefix's extracted words
    words: int
    examined: int


def _restrict(space: Space, net: list, region: Optional[Ball], r: Fraction) -> list:
    if region is None:
        return net
    return [c for c in net if space.distance(c, region.center) <= region.radius + r]


def _plan_over_base(word: Word, base: WordSequence) -> tuple:
    plan = find_extraction_plan(word, base, variable=True)
    if plan is None:  # pragma: no cover - extraction is transitive
        raise LocWordsError(f"{word} is not an extracted variable word of the base")
    return plan


def iter_convergent_extractions(net: Net, base: WordSequence, levels: int, budget: SearchBudget,
                                terms_wanted: int = 2, start_level: int = 1, stride: int = 1,
                                schedule=None, meter: Optional[Meter] = None) -> Iterator[ConvergentResult]:
    """Nested ball refinement, yielding verified results in search order.

    Level ``j`` covers the previous ball with radius-``r_j`` balls centred on
    an ``r_j``-net, colours words by the least ball holding their net value
    and asks the partition search for an extraction of the previous prefix
    whose extracted words share one ball.  Each yielded prefix has its
    extracted words checked directly against every level's ball.
    """
    space = net.space
    radii = _radii(levels, start_level, schedule)
    lengths = level_lengths(levels, terms_wanted, stride)
    meter = meter or Meter(budget.max_candidates)
    if lengths[0] > len(base):
        return

    def rec(i: int, seq: WordSequence, region: Optional[Ball], path: list) -> Iterator[ConvergentResult]:
        r = radii[i]
        centres = _restrict(space, space.epsilon_net(r), region, r)
        balls = [Ball(c, r) for c in centres]
        col = coloring_from_net(net, balls, space, reject_uncovered=True)
        for wit in iter_monochromatic_extractions(col, seq, lengths[i], budget, meter,
                                                  check_terms=terms_wanted):
            ball = balls[wit.color - 1]
            nxt = WordSequence(wit.terms, base.k)
            if i + 1 < levels:
                yield from rec(i + 1, nxt, ball, path + [ball])
            else:
                res = _finish(net, base, nxt, path + [ball], radii, meter)
                if res is not None:
                    yield res
            if meter.spent:
                return

    yield from rec(0, base, None, [])


def _finish(net: Net, base: WordSequence, seq: WordSequence, balls: list, radii: list, meter: Meter):
    space = net.space
    words = [w for _, w in constant_words_of_prefix(seq.terms, base.k)]
    values = [net(w) for w in words]
    for ball in balls:
        if any(space.distance(v, ball.center) > ball.radius for v in values):
            return None
    candidates = [balls[-1].center]
    for v in values:
        if v not in candidates:
            candidates.append(v)
        if len(candidates) > 32:
            break
    best = None
    for c in candidates:
        m = max(space.distance(v, c) for v in values)
        if best is None or m < best[1]:
            best = (c, m)
    plans = tuple(_plan_over_base(u, base) for u in seq.terms)
    return ConvergentResult(seq.terms, plans, best[0], tuple(radii), tuple(b.center for b in balls),
                            best[1], len(words), meter.used)


def find_convergent_extraction(net: Net, base: WordSequence, levels: int, budget: SearchBudget,
                               terms_wanted: int = 2, start_level: int = 1, stride: int = 1,
                               schedule=None) -> object:
    meter = Meter(budget.max_candidates)
    for res in iter_convergent_extractions(net, base, levels, budget, terms_wanted, start_level,
                                           stride, schedule, meter):
        return res
    return Exhausted("budget" if meter.spent else "complete", meter.used)


# -- recurrent points ---------------------------------------------------------
@dataclass(frozen=True)
class RecurrenceResult:
    terms: tuple
    plans: tuple
    x: Any
    x0: Any
    achieved: Fraction  # max of orbit_residual and return_residual
    orbit_residual: Fraction  # max d(T^w x, x0)
    return_residual: Fraction  # max d(T^w x0, x0)
    chain_bound: Optional[Fraction]  # bound on d(T^w x0, x0) from the continuity chain
    chain_covered: int
    n0: int
    words: int
    examined: int
    residuals: tuple  # (picks, orbit max, return max) per number of picked terms


def _fs_choices(sys: WordSystem, terms: Sequence[Word]) -> Optional[tuple]:
    """Per-term translation choices as integers modulo ``M`` when the kernel applies."""
    space = sys.space
    if not sys.additive or not isinstance(space, (CircleExact, CircleFixed, Cyclic)):
        return None
    k, kind = sys.k, terms[0].kind
    raw = [[sys.translation(substitute(u, s, k)) for s in _term_subs(k, m, kind)] for m, u in enumerate(terms, 1)]
    if isinstance(space, CircleExact):
        D = 1
        for ch in raw:
            for t in ch:
                D = D * t.denominator // math.gcd(D, t.denominator)
        return [[int(t * D) for t in ch] for ch in raw], D, (lambda x: int(Fraction(x) * D) if Fraction(x) * D == int(Fraction(x) * D) else None)
    M = space.M if isinstance(space, CircleFixed) else space.n
    return raw, M, (lambda x: int(x))


def _residual_scan(sys: WordSystem, terms, x, x0) -> tuple:
    """Direct evaluation of both residuals over every constant extracted word."""
    space = sys.space
    by_picks = {}
    orbit = ret = Fraction(0)
    words = constant_words_of_prefix(terms, sys.k)
    for picks, w in words:
        a = space.distance(sys.apply(w, x), x0)
        b = space.distance(sys.apply(w, x0), x0)
        orbit, ret = max(orbit, a), max(ret, b)
        cur = by_picks.get(len(picks), (Fraction(0), Fraction(0)))
        by_picks[len(picks)] = (max(cur[0], a), max(cur[1], b))
    residuals = tuple((d, o, r) for d, (o, r) in sorted(by_picks.items()))
    return orbit, ret, words, residuals


def _chain_bound(sys: WordSystem, words, x, x0) -> tuple:
    """``d(T^w x0, x0) <= mod(d(T^{w1} x, x0)) + d(T^{w * w1} x, x0)`` with ``w < w1`` examined."""
    rel = rel_r1 if sys.k.kind == TWO_SIDED else rel_r2
    space = sys.space
    orbit_d = {w: space.distance(sys.apply(w, x), x0) for _, w in words}
    worst, covered = None, 0
    for _, w in words:
        best = None
        for _, w1 in words:
            if not rel(w, w1):
                continue
            bound = sys.require_modulus(orbit_d[w1]) + space.distance(sys.apply(concat(w, w1), x), x0)
            if best is None or bound < best:
                best = bound
        if best is not None:
            covered += 1
            worst = best if worst is None else max(worst, best)
    return worst, covered


def verify_recurrence(sys: WordSystem, terms: Sequence[Word], x, x0) -> tuple:
    """``(orbit_residual, return_residual, word_count, residuals)`` by direct evaluation."""
    orbit, ret, words, residuals = _residual_scan(sys, list(terms), x, x0)
    return orbit, ret, len(words), residuals


def find_recurrent_point(sys: WordSystem, base: WordSequence, x, levels: int, budget: SearchBudget,
                         terms_wanted: int = 2, start_level: int = 1, stride: int = 1, schedule=None,
                         target=None) -> object:
    """Extraction ``u`` of ``base`` and ``x0`` with ``T^w x`` and ``T^w x0`` near ``x0``.

    Runs the convergent-extraction search on the orbit net of ``x``, picks
    ``x0`` among the final ball centre and the first net values, verifies
    both residuals directly and reports the continuity-chain bound.  With
    ``target`` set, results whose achieved residual exceeds it are skipped
    and the search continues.
    """
    sys.require_modulus(Fraction(0))
    if base.k != sys.k:
        raise ConfigError("base sequence and system use different domination vectors")
    x = sys.space.normalize(x)
    net = Net.orbit(sys, x)
    meter = Meter(budget.max_candidates)
    target = None if target is None else Fraction(target)
    for res in iter_convergent_extractions(net, base, levels, budget, terms_wanted, start_level,
                                           stride, schedule, meter):
        x0 = _best_x0(sys, res, x)
        orbit, ret, words, residuals = _residual_scan(sys, list(res.terms), x, x0)
        achieved = max(orbit, ret)
        if target is not None and achieved > target:
            if meter.spent:
                break
            continue
        chain, covered = _chain_bound(sys, words, x, x0)
        return RecurrenceResult(res.terms, res.plans, x, x0, achieved, orbit, ret, chain, covered, 1,
                                len(words), meter.used, residuals)
    return Exhausted("budget" if meter.spent else "complete", meter.used)


def _best_x0(sys: WordSystem, res: ConvergentResult, x):
    """Candidate with the least max residual; the kernel scores translation systems."""
    space = sys.space
    words = [w for _, w in constant_words_of_prefix(res.terms, sys.k)]
    values = [sys.apply(w, x) for w in words]
    cands = [res.x0, res.centres[-1]]
    for v in values:
        if v not in cands:
            cands.append(v)
        if len(cands) >= 34:
            break
    fs = _fs_choices(sys, res.terms)
    ret = None
    if fs is not None:
        choices, M, to_int = fs
        if isinstance(space, CircleFixed) or isinstance(space, Cyclic):
            ret = fs_max_distance(choices, M, 0, 0)[0]
    best = None
    for c in cands:
        orbit = max(space.distance(v, c) for v in values)
        if ret is None:
            back = max(space.distance(sys.apply(w, c), c) for w in words)
        else:
            back = Fraction(ret, M) if not isinstance(space, Cyclic) else Fraction(1 if ret else 0)
        score = max(orbit, back)
        if best is None or score < best[0]:
            best = (score, c)
    return best[1]


# -- recurrent sets and the chain construction --------------------------------
@dataclass(frozen=True)
class RecurrentSetWitness:
    x: Any
    y: Any
    u: Word
    plan: tuple
    residual: Fraction


def _substitutions_upto(u: Word, k: DominationVector, m: int) -> Optional[list]:
    """``u(p, q)`` for ``1 <= p, q <= m``; ``None`` when ``m`` exceeds the letter bounds."""
    if u.kind == TWO_SIDED:
        if k(u.pos_domain[0]) < m or k(u.neg_domain[-1]) < m:
            return None
        return [substitute(u, (p, q), k) for p in range(1, m + 1) for q in range(1, m + 1)]
    if k(u.entries[0][0]) < m:
        return None
    return [substitute(u, (p,), k) for p in range(1, m + 1)]


def _variable_candidates(seq: WordSequence, m: int, budget: SearchBudget, after: int = 0):
    for plan in extraction_candidates(seq, after, budget.max_plan_terms):
        u = extracted_word(seq, plan)
        if min_index(u) <= m:
            continue
        subs = _substitutions_upto(u, seq.k, m)
        if subs is None:
            continue
        yield plan, u, subs


def _preimages(sys: WordSystem, A, target, subs) -> list:
    """Points of ``A`` to try as ``y``; ``A=None`` means the whole (additive) space."""
    if A is not None:
        return list(A)
    if not sys.additive:
        raise ConfigError("the whole space may stand in for A only for translation systems")
    return [sys.space.add(target, sys.space.neg(sys.translation(subs[0])))]


def recurrent_set_check(sys: WordSystem, seq: WordSequence, A, eps, m: int, budget: SearchBudget) -> object:
    """For each ``x`` in ``A`` find ``y`` in ``A`` and ``u`` in EV(seq) with ``min_index(u) > m`` and
    ``d(T^{u(p,q)} y, x) <= eps`` for all ``1 <= p, q <= m``."""
    eps = Fraction(eps)
    A = [sys.space.normalize(a) for a in A]
    meter = Meter(budget.max_candidates)
    out = []
    for x in A:
        found = None
        for plan, u, subs in _variable_candidates(seq, m, budget):
            ys = [x] + [a for a in A if a != x]
            for y in ys:
                if not meter.take():
                    return Exhausted("budget", meter.used)
                res = max(sys.space.distance(sys.apply(s, y), x) for s in subs)
                if res <= eps:
                    found = RecurrentSetWitness(x, y, u, plan, res)
                    break
            if found:
                break
        if found is None:
            return Exhausted("complete", meter.used)
        out.append(found)
    return tuple(out)


@dataclass(frozen=True)
class Prop12Result:
    u: Word
    z: Any
    i: int
    j: int
    chain: tuple  # (z_r, u_r) pairs built
    residual: Fraction


def prop12_chain(sys: WordSystem, seq: WordSequence, A, eps, m: int, budget: SearchBudget,
                 max_chain: int = 64) -> Prop12Result:
    """Chain ``z_0, z_1, ...`` with ``d(T^{u_{r+1}(p,q)} z_{r+1}, z_r) <= eps_r``, then pigeonhole.

    ``eps_r = eps / 2**(r+2)`` so the chained errors of an isometric system
    stay below ``eps / 2``.  When two chain points are within ``eps / 2`` the
    concatenation ``u_{i+1} * ... * u_j`` is returned with ``z = z_j`` after
    a direct check of ``d(T^{u(p,q)} z, z) <= eps``.  ``A=None`` stands for
    the whole space of a translation system.
    """
    eps = Fraction(eps)
    space = sys.space
    pts = None if A is None else [space.normalize(a) for a in A]
    z = [pts[0] if pts else space.normalize(0)]
    us: List[Word] = []
    after = 0
    meter = Meter(budget.max_candidates)
    for r in range(max_chain):
        tol = eps / 2 ** (r + 2)
        step = None
        for plan, u, subs in _variable_candidates(seq, m, budget, after):
            for y in _preimages(sys, pts, z[-1], subs):
                if not meter.take():
                    raise ChainBudgetExhausted(f"budget spent after {r} chain steps")
                if max(space.distance(sys.apply(s, y), z[-1]) for s in subs) <= tol:
                    step = (plan, u, y)
                    break
            if step:
                break
        if step is None:
            raise ChainBudgetExhausted(f"no chain step {r + 1} inside the sequence")
        plan, u, y = step
        after = plan[-1][0]
        us.append(u)
        z.append(y)
        j = len(z) - 1
        for i in range(j):
            if space.distance(z[i], z[j]) > eps / 2:
                continue
            U = concat_all(us[i:j])
            subs = _substitutions_upto(U, seq.k, m)
            if subs is None:
                continue
            res = max(space.distance(sys.apply(s, z[j]), z[j]) for s in subs)
            if res <= eps:
                return Prop12Result(U, z[j], i, j, tuple(zip(z[1:], us)), res)
    raise ChainBudgetExhausted(f"chain of length {max_chain} did not close")


# -- multiple recurrence ------------------------------------------------------
def check_invertible(systems: Sequence[WordSystem], samples: int = 64, seed: int = 0) -> None:
    rng = random.Random(seed)
    for s in systems:
        if not s.invertible:
            raise NotInvertible(f"{s.kind} system is not invertible")
        for _ in range(samples):
            w, _unused = random_related_pair(s.k, rng)
            x = s.space.sample(rng)
            if s.space.distance(s.apply_inverse(w, s.apply(w, x)), x) != 0:
                raise NotInvertible(f"inverse fails for {w} at {x}")


def check_commuting(systems: Sequence[WordSystem], samples: int = 64, seed: int = 0) -> None:
    rng = random.Random(seed)
    for a, b in itertools.combinations(systems, 2):
        if a.space != b.space or a.k != b.k:
            raise NotCommuting("systems must share one space and one domination vector")
        for _ in range(samples):
            w1, w2 = random_related_pair(a.k, rng)
            if rng.random() < 0.5:
                w1, w2 = w2, w1
            x = a.space.sample(rng)
            if a.space.distance(a.apply(w1, b.apply(w2, x)), b.apply(w2, a.apply(w1, x))) != 0:
                raise NotCommuting(f"maps for {w1} and {w2} do not commute at {x}")


@dataclass(frozen=True)
class MultiResult:
    x0: Any
    terms: tuple
    plans: tuple
    achieved: Fraction
    per_system: tuple  # max d(T_i^w x0, x0) for each system
    words: int
    examined: int
    inner: Optional[Any] = None  # result of the quotient step


def _multi_residuals(systems, terms, x0) -> tuple:
    words = [w for _, w in constant_words_of_prefix(list(terms), systems[0].k)]
    per = tuple(max(s.space.distance(s.apply(w, x0), x0) for w in words) for s in systems)
    return per, len(words)


def multiple_recurrence_search(systems: Sequence[WordSystem], base: WordSequence, levels: int,
                               budget: SearchBudget, x=None, terms_wanted: int = 2, start_level: int = 1,
                               stride: int = 1, schedule=None, target=None, samples: int = 64) -> object:
    """``x0`` with ``d(T_i^w x0, x0)`` small for every system and extracted word.

    One system is exactly :func:`find_recurrent_point`.  For more, the
    quotients ``S_i = T_i T_m^{-1}`` are solved first; the product system is
    then searched from the diagonal point ``(y, ..., y)`` along the quotient
    prefix, and diagonal candidates are verified directly.
    """
    systems = list(systems)
    if not systems:
        raise ConfigError("need at least one system")
    space = systems[0].space
    x = space.normalize(0 if x is None else x)
    if len(systems) == 1:
        res = find_recurrent_point(systems[0], base, x, levels, budget, terms_wanted, start_level,
                                   stride, schedule, target)
        if isinstance(res, Exhausted):
            return res
        return MultiResult(res.x0, res.terms, res.plans, res.achieved, (res.return_residual,), res.words,
                           res.examined, res)
    check_invertible(systems, samples, budget.seed)
    check_commuting(systems, samples, budget.seed)
    last = systems[-1]
    quotients = [QuotientSystem(s, last) for s in systems[:-1]]
    # one spare quotient term leaves the product search a choice of extraction
    outer_len = level_lengths(levels, terms_wanted, stride)[0] + 1
    inner = multiple_recurrence_search(quotients, base, levels, budget, x, outer_len, start_level,
                                       stride, schedule, target, samples)
    if isinstance(inner, Exhausted):
        return inner
    y = inner.x0
    mid = WordSequence(inner.terms, base.k)
    prod = ProductSystem(systems)
    diag = tuple(y for _ in systems)
    res = find_recurrent_point(prod, mid, diag, levels, budget, terms_wanted, start_level, stride, schedule)
    if isinstance(res, Exhausted):
        return Exhausted(res.reason, res.examined + inner.examined)
    cands = [y] + [c for c in res.x0 if c != y]
    best = None
    for c in cands:
        per, n = _multi_residuals(systems, res.terms, c)
        if best is None or max(per) < best[0]:
            best = (max(per), c, per, n)
    achieved, x0, per, n = best
    if target is not None and achieved > Fraction(target):
        return Exhausted("budget", res.examined + inner.examined)
    plans = tuple(_plan_over_base(u, base) for u in res.terms)
    return MultiResult(x0, res.terms, plans, achieved, per, n, res.examined + inner.examined, inner)


# -- intersections -------------------------------------------------------------
@dataclass(frozen=True)
class IntersectionReport:
    ok: bool
    witnesses: tuple  # (word, point) pairs; point is None where the intersection is empty
    examined: int


def _intersection_point(systems, w: Word, U: Ball):
    space = systems[0].space
    r = Fraction(U.radius)

    def inside(z) -> bool:
        return all(space.distance(s.apply(w, z), U.center) <= r for s in systems)

    if all(s.additive for s in systems) and isinstance(space, (CircleExact, CircleFixed, Cyclic)):
        cands = []
        for s in systems:
            base = space.add(U.center, space.neg(s.translation(w)))
            cands.append(base)
            if isinstance(space, CircleExact):
                cands += [space.normalize(base + r), space.normalize(base - r)]
            elif isinstance(space, CircleFixed):
                step = math.floor(r * space.M)
                cands += [space.add(base, step), space.add(base, space.neg(step))]
        if isinstance(space, Cyclic) and r >= 1:
            cands.append(0)
        for z in cands:
            if inside(z):
                return z
        return None
    if space.finite:
        for z in space.points():
            if inside(z):
                return z
        return None
    raise LocWordsError(f"no intersection procedure for {space.name}")


def intersection_check(systems: Sequence[WordSystem], U: Ball, terms: Sequence[Word], depth: Optional[int] = None) -> IntersectionReport:
    """For every constant extracted word ``w`` of ``terms``, a point ``z`` with
    ``T_i^w(z)`` in ``U`` for all ``i``.

    For translations each preimage of ``U`` is an arc; a nonempty
    intersection of closed arcs contains one of their endpoints, so checking
    centres and endpoints is complete.  Finite spaces are enumerated.
    """
    k = systems[0].k
    out, ok = [], True
    words = constant_words_of_prefix(list(terms), k, depth)
    for _, w in words:
        z = _intersection_point(systems, w, U)
        out.append((w, z))
        ok = ok and z is not None
    return IntersectionReport(ok, tuple(out), len(words))


# -- semigroups ------------------------------------------------------------------
@dataclass(frozen=True)
class SemigroupReport:
    result: Any  # RecurrenceResult or Exhausted
    decompositions: tuple  # TermDecomposition per extracted term


def semigroup_recurrence(table: SemigroupTable, space: Space, base: WordSequence, levels: int,
                         budget: SearchBudget, x=0, alpha="1", terms_wanted: int = 2, start_level: int = 1,
                         stride: int = 1, schedule=None, target=None) -> SemigroupReport:
    """Recurrence for ``T^w = translation by h(phi(w))`` plus the per-term split of ``phi``."""
    sys = PhiShift(table, space, base.k, alpha)
    res = find_recurrent_point(sys, base, x, levels, budget, terms_wanted, start_level, stride, schedule, target)
    if isinstance(res, Exhausted):
        return SemigroupReport(res, ())
    k = base.k
    decs = []
    for m, u in enumerate(res.terms, 1):
        bounds = (k(m), k(-m)) if k.kind == TWO_SIDED else (k(m),)
        decs.append(decompose_term(table, u, bounds, k))
    return SemigroupReport(res, tuple(decs))
