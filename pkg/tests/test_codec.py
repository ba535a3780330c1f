import random
from fractions import Fraction

import pytest

from locwords.codec import (
    IntegerCodec,
    MixedRadix,
    NaturalCodec,
    RationalCodec,
    decode_integer,
    decode_natural,
    decode_rational,
    encode_integer,
    encode_natural,
    encode_rational,
    format_rational,
    lift_variable,
    make_codec,
    parse_rational,
)
from locwords.errors import WrongDomination, ZeroInput
from locwords.words import ONE_SIDED, TWO_SIDED, DominationVector, make_word, substitute

from oracles import digit_vectors, integer_value, rational_value

FACT_RADIX = MixedRadix(DominationVector("abs_plus_one", (), ONE_SIDED))


def w2(d):
    return make_word(d, TWO_SIDED)


def w1(d):
    return make_word(d, ONE_SIDED)


class TestRational:
    @pytest.mark.parametrize("d, value", [({1: 1}, 1), ({-1: 1}, Fraction(-1, 2)), ({1: 1, 2: 2}, -3)])
    def test_decode_examples(self, d, value):
        assert decode_rational(w2(d)) == value

    @pytest.mark.parametrize("q, d", [(1, {1: 1}), (Fraction(-1, 2), {-1: 1}), (2, {2: 2, 3: 1})])
    def test_encode_examples(self, q, d):
        assert encode_rational(q).as_dict() == d

    def test_zero(self):
        with pytest.raises(ZeroInput):
            encode_rational(0)

    def test_matches_oracle_on_small_supports(self):
        positions = [-3, -2, -1, 1, 2, 3]
        bound = lambda n: abs(n)
        seen = {}
        for d in digit_vectors(positions, bound):
            v = rational_value(d)
            assert decode_rational(w2(d)) == v
            assert v not in seen, (d, seen.get(v))
            seen[v] = d
        # the unique small-support expansion is what encode returns
        for v, d in seen.items():
            if v != 0:
                assert encode_rational(v).as_dict() == d

    def test_parse_format(self):
        assert parse_rational("-6/4") == Fraction(-3, 2)
        assert format_rational(Fraction(-3, 2)) == "-3/2"
        assert format_rational(Fraction(4)) == "4"


class TestInteger:
    def test_examples(self):
        assert decode_integer(w1({1: 1}), FACT_RADIX) == 1
        assert decode_integer(w1({1: 1, 2: 1}), FACT_RADIX) == -1
        assert encode_integer(5, FACT_RADIX).as_dict() == {1: 1, 2: 1, 3: 1}

    def test_oracle_and_round_trip(self):
        bases = [2, 3, 4, 5, 6]
        for d in digit_vectors([1, 2, 3, 4], lambda s: bases[s - 1] - 1):
            assert decode_integer(w1(d), FACT_RADIX) == integer_value(d, bases)
        for z in range(-500, 501):
            if z:
                assert decode_integer(encode_integer(z, FACT_RADIX), FACT_RADIX) == z

    def test_letters_up_to_base_decode(self):
        radix = MixedRadix(DominationVector("constant", (2,), ONE_SIDED))
        assert decode_integer(w1({1: 2, 2: 1}), radix) == 2 - 2
        with pytest.raises(WrongDomination):
            decode_integer(w1({1: 3}), radix)

    def test_other_radices(self):
        for rule, params in (("constant", (3,)), ("affine", (1, 2))):
            radix = MixedRadix(DominationVector(rule, params, ONE_SIDED))
            for z in list(range(-200, 0)) + list(range(1, 201)):
                assert decode_integer(encode_integer(z, radix), radix) == z


class TestNatural:
    def test_examples(self):
        assert encode_natural(5, 2).as_dict() == {1: 1, 3: 1}
        assert decode_natural(w1({1: 1}), 10) == 1

    @pytest.mark.parametrize("base", [2, 3, 10])
    def test_round_trip(self, base):
        for n in range(1, 10_001):
            assert decode_natural(encode_natural(n, base), base) == n

    def test_zero(self):
        with pytest.raises(ZeroInput):
            encode_natural(0, 2)


class TestCodecObjects:
    def test_make_codec(self):
        assert make_codec("rational") == RationalCodec()
        assert make_codec({"codec": "integer"}) == IntegerCodec()
        assert make_codec({"codec": "natural", "base": 3}) == NaturalCodec(3)
        for c in (RationalCodec(), IntegerCodec(), NaturalCodec(7)):
            assert make_codec(c.to_json()) == c


class TestVariableNumbers:
    def test_one_sided(self):
        vn = lift_variable(w1({1: "v"}), "integer")
        assert [vn.value(p) for p in (1, 2)] == [1, 2]

    def test_two_sided_order(self):
        vn = lift_variable(w2({-1: "v", 1: "v"}), "rational")
        assert vn.value(1, 1) == Fraction(1, 2)
        assert vn.value(3, 1) == 3 - Fraction(1, 2)

    def test_matches_substitution(self):
        rng = random.Random(7)
        k = DominationVector("abs")
        for _ in range(100):
            lo, hi = rng.randint(1, 4), rng.randint(1, 4)
            d = {n: rng.choice(["v", None] + list(range(1, abs(n) + 1))) for n in range(-lo, hi + 1) if n}
            d = {n: c for n, c in d.items() if c is not None}
            d[-lo], d[hi] = "v", "v"
            u = w2(d)
            vn = lift_variable(u, "rational")
            for p in range(1, k(u.pos_domain[0]) + 1):
                for q in range(1, k(u.neg_domain[-1]) + 1):
                    assert vn.value(p, q) == decode_rational(substitute(u, (p, q), k))
