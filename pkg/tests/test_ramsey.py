import itertools
from fractions import Fraction

import pytest

from locwords.codec import decode_rational, make_codec
from locwords.errors import ConfigError, UncoveredValue
from locwords.ramsey import (
    Ball,
    Exhausted,
    SearchBudget,
    coloring_from_json,
    coloring_from_net,
    constant_words_of_prefix,
    has_mono_sum,
    hindman_finite_check,
    search_monochromatic_extraction,
    search_monochromatic_substitutions,
    substitution_range,
    window_candidates,
)
from locwords.spaces import CircleExact
from locwords.words import (
    ONE_SIDED,
    TWO_SIDED,
    DominationVector,
    diagonal_sequence,
    extracted_word,
    make_word,
    substitute,
)

from oracles import monochromatic_exists

CIRCLE = CircleExact()
K2 = DominationVector("constant", (2,), ONE_SIDED)


def frac_net(w):
    return CIRCLE.normalize(decode_rational(w))


class TestColoringFromNet:
    def test_single_ball(self):
        col = coloring_from_net(frac_net, [Ball(Fraction(0), Fraction(1, 2))], CIRCLE)
        assert {col(make_word(d)) for d in ({1: 1}, {-1: 1}, {-2: 2, 3: 1})} == {1}

    def test_half_intervals(self):
        balls = [Ball(Fraction(1, 4), Fraction(1, 4)), Ball(Fraction(3, 4), Fraction(1, 4))]
        col = coloring_from_net(frac_net, balls, CIRCLE)
        # -1/2 -> 1/2 sits in both closed balls, least index wins; 1/6 -> ball 1; -1/6 -> 5/6 -> ball 2
        assert col(make_word({-1: 1})) == 1
        assert col(make_word({-2: 1})) == 1  # (-1)^2/3! = 1/6
        assert col(make_word({-2: 1, -1: 1})) == 2  # 1/6 - 1/2 = -1/3 -> 2/3

    def test_uncovered(self):
        col = coloring_from_net(frac_net, [Ball(Fraction(0), Fraction(1, 10))], CIRCLE)
        with pytest.raises(UncoveredValue):
            col(make_word({-1: 1}))
        col = coloring_from_net(frac_net, [Ball(Fraction(0), Fraction(1, 10))], CIRCLE, reject_uncovered=True)
        assert col(make_word({-1: 1})) == 0


class TestSubstitutionSearch:
    def test_constant_first_candidate(self):
        res = search_monochromatic_substitutions(coloring_from_json({"rule": "constant"}), K2, SearchBudget())
        assert res.examined == 1

    def test_parity_witness(self):
        col = coloring_from_json({"rule": "residue", "modulus": 2,
                                  "codec": {"codec": "integer", "radix": {"rule": "constant", "params": [2]}}})
        u = make_word({1: 2, 2: "v"}, ONE_SIDED)
        codec = make_codec({"codec": "integer", "radix": {"rule": "constant", "params": [2]}})
        assert [codec.decode(substitute(u, (p,), K2)) for p in (1, 2)] == [0, -2]
        assert len({col(substitute(u, s, K2)) for s in substitution_range(u, K2)}) == 1
        res = search_monochromatic_substitutions(col, K2, SearchBudget())
        assert not isinstance(res, Exhausted)
        assert {col(substitute(res.word, s, K2)) for s in substitution_range(res.word, K2)} == {res.color}

    def test_all_distinct_colours_exhaust(self):
        words = {}
        for w in window_candidates(K2, 2):
            for s in substitution_range(w, K2):
                words.setdefault(str(substitute(w, s, K2)), len(words) + 1)
        col = coloring_from_json({"rule": "table", "entries": words, "default": 1})
        res = search_monochromatic_substitutions(col, K2, SearchBudget(window=2))
        assert isinstance(res, Exhausted) and res.reason == "complete"
        assert not monochromatic_exists(lambda d: words[str(make_word(d, ONE_SIDED))], 2, K2, False)

    def test_arity_cap(self):
        with pytest.raises(ConfigError):
            coloring_from_json({"rule": "length_mod", "modulus": 17})


def brute_extraction_exists(col, base, terms, max_picks):
    """Every prefix of ``terms`` extracted words with <= max_picks picks each, checked directly."""
    k = base.k
    n = len(base)

    def plans(after):
        for r in range(1, max_picks + 1):
            for idx in itertools.combinations(range(after + 1, n + 1), r):
                opts = []
                for i in idx:
                    t = base.terms[i - 1]
                    subs = [(p, q) for p in range(1, k(i) + 1) for q in range(1, k(-i) + 1)] if t.kind == TWO_SIDED \
                        else [(p,) for p in range(1, k(i) + 1)]
                    opts.append([None] + subs)
                for pick in itertools.product(*opts):
                    if None in pick:
                        yield tuple(zip(idx, pick))

    def rec(after, chosen):
        if len(chosen) == terms:
            words = constant_words_of_prefix(chosen, k)
            return len({col(w) for _, w in words}) == 1
        for plan in plans(after):
            if rec(plan[-1][0], chosen + [extracted_word(base, plan)]):
                return True
        return False

    return rec(0, [])


class TestExtractionSearch:
    def test_constant(self):
        base = diagonal_sequence(DominationVector("abs"), 3)
        res = search_monochromatic_extraction(coloring_from_json({"rule": "constant"}), base, 2, SearchBudget())
        assert res.terms == base.terms[:2]

    def test_too_long(self):
        base = diagonal_sequence(DominationVector("abs"), 2)
        res = search_monochromatic_extraction(coloring_from_json({"rule": "constant"}), base, 3, SearchBudget())
        assert isinstance(res, Exhausted)

    @pytest.mark.parametrize("rule, modulus, length", [
        ("residue", 2, 4), ("residue", 3, 4), ("length_mod", 2, 4), ("letter_sum_mod", 2, 4),
        ("max_position_mod", 2, 5), ("max_position_mod", 3, 3), ("max_position_mod", 4, 4),
        ("residue", 5, 3), ("letter_sum_mod", 7, 3),
    ])
    def test_agrees_with_brute_force(self, rule, modulus, length):
        base = diagonal_sequence(DominationVector("capped_abs", (2,)), length)
        col = coloring_from_json({"rule": rule, "modulus": modulus})
        budget = SearchBudget(max_plan_terms=2, max_candidates=10 ** 6)
        res = search_monochromatic_extraction(col, base, 2, budget)
        found = not isinstance(res, Exhausted)
        assert found == brute_extraction_exists(col, base, 2, 2)
        if found:
            words = constant_words_of_prefix(res.terms, base.k)
            assert {col(w) for _, w in words} == {res.color}
        else:
            assert res.reason == "complete"


class TestHindman:
    def test_small_avoider(self):
        assert has_mono_sum([1, 2, 2]) is None
        assert has_mono_sum([1, 1, 1]) is not None

    def test_result(self):
        res = hindman_finite_check(14)
        assert res.verified and res.n_star == 9
        assert all(c == 0 for c in res.counts[res.n_star - 1:])
        assert all(c > 0 for c in res.counts[: res.n_star - 1])
