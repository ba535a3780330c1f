from fractions import Fraction

from hypothesis import assume, given, settings
from hypothesis import strategies as st

from locwords.codec import (
    IntegerCodec,
    RationalCodec,
    decode_natural,
    encode_natural,
    lift_variable,
)
from locwords.serialize import word_from_json, word_to_json
from locwords.spaces import CircleExact, Cyclic
from locwords.systems import CodecRotation
from locwords.words import (
    ONE_SIDED,
    DominationVector,
    concat,
    make_word,
    min_index,
    rel_r1,
    substitute,
)

from oracles import integer_value, rational_value

RAT = RationalCodec()
INT = IntegerCodec()
ABS = DominationVector("abs")

nonzero_fractions = st.builds(Fraction, st.integers(-10 ** 6, 10 ** 6).filter(bool), st.integers(1, 3000))
positions = st.integers(-8, 8).filter(bool)


@st.composite
def rational_words(draw, allowed=positions, min_size=1):
    """Constant two-sided words with letters inside the rational digit bounds."""
    pos = draw(st.sets(allowed, min_size=min_size, max_size=8))
    return {n: draw(st.integers(1, abs(n))) for n in pos}


@st.composite
def integer_words(draw, max_pos=8):
    pos = draw(st.sets(st.integers(1, max_pos), min_size=1, max_size=6))
    return {n: draw(st.integers(1, n)) for n in pos}


@st.composite
def disjoint_words(draw, words, parts=2):
    """Split one word's positions among ``parts`` nonempty owners."""
    d = draw(words.filter(lambda d: len(d) >= parts))
    keys = list(d)
    owners = list(range(parts)) + [draw(st.integers(0, parts - 1)) for _ in keys[parts:]]
    owners = draw(st.permutations(owners))
    return tuple({n: d[n] for n, o in zip(keys, owners) if o == i} for i in range(parts))


class TestCodecLaws:
    @settings(deadline=None)  # a prime denominator p needs p - 1 fractional digits
    @given(nonzero_fractions)
    def test_rational_round_trip(self, q):
        w = RAT.encode(q)
        assert RAT.decode(w) == q
        assert all(1 <= v <= abs(n) for n, v in w.entries)

    @given(rational_words())
    def test_rational_matches_oracle(self, d):
        assert RAT.decode(make_word(d)) == rational_value(d)

    @given(st.integers(-10 ** 9, 10 ** 9).filter(bool))
    def test_integer_round_trip(self, z):
        assert INT.decode(INT.encode(z)) == z

    @given(integer_words())
    def test_integer_matches_oracle(self, d):
        assert INT.decode(make_word(d, ONE_SIDED)) == integer_value(d, [n + 1 for n in range(1, 9)])

    @given(st.integers(1, 10 ** 12), st.integers(2, 16))
    def test_natural_round_trip(self, n, base):
        assert decode_natural(encode_natural(n, base), base) == n

    @given(disjoint_words(rational_words()))
    def test_rational_homomorphism(self, pair):
        a, b = (make_word(d) for d in pair)
        assert RAT.decode(concat(a, b)) == RAT.decode(a) + RAT.decode(b)

    @given(disjoint_words(integer_words()))
    def test_integer_homomorphism(self, pair):
        a, b = (make_word(d, ONE_SIDED) for d in pair)
        assert INT.decode(concat(a, b)) == INT.decode(a) + INT.decode(b)


class TestWordLaws:
    @given(disjoint_words(rational_words(), 3))
    def test_concat_associative_and_commutative(self, ds):
        x, y, z = (make_word(d) for d in ds)
        assert concat(concat(x, y), z) == concat(x, concat(y, z))
        assert concat(x, y) == concat(y, x)

    @given(rational_words())
    def test_json_round_trip(self, d):
        w = make_word(d)
        assert word_from_json(word_to_json(w)) == w

    @given(st.data())
    def test_substitution_keeps_domain_and_index(self, data):
        lo, hi = data.draw(st.integers(1, 5)), data.draw(st.integers(1, 5))
        d = {n: data.draw(st.sampled_from(["v", "drop"] + list(range(1, abs(n) + 1))))
             for n in range(-lo, hi + 1) if n}
        d = {n: c for n, c in d.items() if c != "drop"}
        d[-lo], d[hi] = "v", "v"
        u = make_word(d)
        p = data.draw(st.integers(1, ABS(u.pos_domain[0])))
        q = data.draw(st.integers(1, ABS(u.neg_domain[-1])))
        w = substitute(u, (p, q), ABS)
        assert w.domain == u.domain and min_index(w) == min_index(u)
        assert not w.is_variable
        assert lift_variable(u, RAT).value(p, q) == RAT.decode(w)


@st.composite
def straddling_pairs(draw):
    """Constant words ``w1, w2`` where ``w2`` straddles ``w1``."""
    lo, hi = draw(st.integers(1, 4)), draw(st.integers(1, 4))
    inner = draw(rational_words(st.integers(-lo, hi).filter(bool)))
    a, b = min(inner), max(inner)
    left = draw(rational_words(st.integers(min(a, 0) - 4, min(a, 0) - 1)))
    right = draw(rational_words(st.integers(max(b, 0) + 1, max(b, 0) + 4)))
    w1, w2 = make_word(inner), make_word({**left, **right})
    assert rel_r1(w1, w2)
    return w1, w2


class TestSystemLaw:
    @settings(max_examples=200)
    @given(straddling_pairs(), st.integers(0, 6), st.integers(1, 6))
    def test_rational_rotation(self, pair, x, step):
        sys_ = CodecRotation(CircleExact(), RAT, Fraction(step, 7))
        w1, w2 = pair
        x = Fraction(x, 7)
        assert sys_.apply(w1, sys_.apply(w2, x)) == sys_.apply(concat(w1, w2), x)

    @given(integer_words(), st.integers(1, 8), st.integers(0, 10))
    def test_integer_codec_on_cyclic(self, d, cut, x):
        # positions up to ``cut`` form the earlier word
        assume(min(d) <= cut < max(d))
        a = make_word({n: v for n, v in d.items() if n <= cut}, ONE_SIDED)
        b = make_word({n: v for n, v in d.items() if n > cut}, ONE_SIDED)
        sys_ = CodecRotation(Cyclic(11), INT, 3)
        assert sys_.apply(a, sys_.apply(b, x)) == sys_.apply(concat(a, b), x)
