import pytest

from locwords.dynamics import semigroup_recurrence
from locwords.errors import ConfigError, LocWordsError, MissingTableEntry
from locwords.ramsey import Exhausted, SearchBudget, constant_words_of_prefix
from locwords.spaces import CircleExact, Cyclic
from locwords.semigroup import PhiShift, SemigroupTable, decompose_term, semigroup_phi
from locwords.words import ONE_SIDED, DominationVector, diagonal_sequence, make_word, substitute

ABS = DominationVector("abs")


def phi_by_hand(y, d):
    """Direct sum over a plain dict, negative positions read with the sign flipped."""
    return sum(y(v if n > 0 else -v, n) for n, v in d.items())


class TestPhi:
    def test_letter_rule(self):
        table = SemigroupTable("integers", "letter")
        assert semigroup_phi(table, make_word({1: 1})) == 1

    def test_negative_position_uses_flipped_letter(self):
        # keys spell out y_{l,n}; only the two entries the word touches are present
        table = SemigroupTable("integers", "table", {"values": {"-1,-2": 10, "2,1": 100}})
        assert semigroup_phi(table, make_word({-2: 1, 1: 2})) == 110
        with pytest.raises(MissingTableEntry):
            semigroup_phi(table, make_word({-2: 2, 1: 2}))

    @pytest.mark.parametrize("carrier, modulus", [("integers", None), ("cyclic", 7), ("rationals", None)])
    def test_against_direct_sum(self, carrier, modulus):
        table = SemigroupTable(carrier, "letter_times_position", modulus=modulus)
        d = {-3: 2, -1: 1, 2: 2, 5: 4}
        want = phi_by_hand(lambda l, n: l * n, d)
        if modulus:
            want %= modulus
        assert semigroup_phi(table, make_word(d)) == want

    def test_product_rule(self):
        table = SemigroupTable("integers", "product", {"p": [3, 5], "q": 7, "y": {"rule": "position"}})
        # y_{2,4} = p(2) * 4, y_{-1,-2} = q(1) * (-2)
        assert semigroup_phi(table, make_word({-2: 1, 4: 2})) == 5 * 4 + 7 * -2

    def test_variable_rejected(self):
        with pytest.raises(LocWordsError):
            semigroup_phi(SemigroupTable("integers", "letter"), make_word({1: "v"}))

    def test_bad_tables(self):
        with pytest.raises(ConfigError):
            SemigroupTable("cyclic", "letter")
        with pytest.raises(ConfigError):
            SemigroupTable("integers", "sideways")
        with pytest.raises(ConfigError):
            PhiShift(SemigroupTable("vectors", "letter", dim=2), CircleExact(), ABS)


class TestDecomposition:
    def test_two_sided_product(self):
        table = SemigroupTable("integers", "product", {"p": "identity", "q": [2, 4, 6]})
        u = make_word({-4: 1, -3: "v", 2: "v", 3: 2})
        dec = decompose_term(table, u, (2, 3), ABS)
        assert dec.checked == 6
        assert dec.pos_variables == (2,) and dec.neg_variables == (-3,)
        for i in (1, 2):
            for j in (1, 2, 3):
                got = semigroup_phi(table, substitute(u, (i, j), ABS))
                assert got == dec.a + i * dec.b + 2 * j * dec.c

    def test_one_sided_letter(self):
        k = DominationVector("constant", (3,), ONE_SIDED)
        table = SemigroupTable("cyclic", "letter_times_position", modulus=11)
        u = make_word({1: 2, 4: "v", 6: "v"}, ONE_SIDED)
        dec = decompose_term(table, u, (3,), k)
        assert dec.checked == 3 and dec.b is None


class TestRecurrence:
    def test_z5_exact(self):
        table = SemigroupTable("cyclic", "letter_times_position", modulus=5)
        space = Cyclic(5)
        base = diagonal_sequence(ABS, 10)
        rep = semigroup_recurrence(table, space, base, 1, SearchBudget(max_candidates=10 ** 6), x=0,
                                   terms_wanted=2, target=0)
        res = rep.result
        assert not isinstance(res, Exhausted) and res.achieved == 0
        assert len(rep.decompositions) == len(res.terms)
        # every constant word of the prefix returns x0 exactly, recomputed from the letter sums
        for _, w in constant_words_of_prefix(res.terms, ABS):
            assert phi_by_hand(lambda l, n: l * n, w.as_dict()) % 5 == 0
        for m, (u, dec) in enumerate(zip(res.terms, rep.decompositions), 1):
            for i in range(1, ABS(m) + 1):
                for j in range(1, ABS(-m) + 1):
                    d = substitute(u, (i, j), ABS).as_dict()
                    want = (sum(abs(d[n] * n) for n in dec.constant_positions)
                            + i * sum(dec.pos_variables) - j * sum(dec.neg_variables))
                    assert phi_by_hand(lambda l, n: l * n, d) % 5 == want % 5

    def test_exhausted_keeps_empty_split(self):
        table = SemigroupTable("integers", "letter")
        rep = semigroup_recurrence(table, CircleExact(), diagonal_sequence(ABS, 3), 1,
                                   SearchBudget(max_candidates=50), alpha="1/7", terms_wanted=3, target=0)
        # three terms cannot be extracted from a three-term base with a free choice left
        assert isinstance(rep.result, Exhausted) and rep.decompositions == ()
