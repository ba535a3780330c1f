"""Exact bijections between located words and Q*, Z*, N.

* rational: two-sided words under ``k_n = |n|``; position ``r > 0`` weighs
  ``(-1)**(r+1) * r!`` and position ``-s`` weighs ``(-1)**s / (s+1)!``.
* integer: one-sided words over a mixed radix ``k_1, k_2, ...`` (all >= 2);
  position ``s`` weighs ``(-1)**(s-1) * k_1...k_{s-1}``.
* natural: one-sided words in base ``k``; position ``s`` weighs ``k**(s-1)``.

Decoding is linear in the letters, so it is additive over concatenation of
disjoint words.  All arithmetic uses :class:`fractions.Fraction` and ints.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Optional, Union

from .errors import InvalidDomination, LocWordsError, WrongDomination, ZeroInput
from .words import ONE_SIDED, TWO_SIDED, VAR, DominationVector, Word, make_word

__all__ = [
    "RATIONAL_K",
    "MixedRadix",
    "VariableNumber",
    "Codec",
    "RationalCodec",
    "IntegerCodec",
    "NaturalCodec",
    "make_codec",
    "parse_rational",
    "format_rational",
    "decode_rational",
    "encode_rational",
    "decode_integer",
    "encode_integer",
    "decode_natural",
    "encode_natural",
    "lift_variable",
]

RATIONAL_K = DominationVector("abs", (), TWO_SIDED)


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise LocWordsError(f"cannot parse rational {text!r}: {exc}") from None


def format_rational(q: Fraction) -> str:
    return str(Fraction(q))


# -- rational ----------------------------------------------------------------
@lru_cache(maxsize=4096)
def rational_weight(n: int) -> Fraction:
    if n > 0:
        return Fraction((-1) ** (n + 1) * factorial(n))
    s = -n
    return Fraction((-1) ** s, factorial(s + 1))


def _check_rational_word(w: Word) -> None:
    if w.kind != TWO_SIDED:
        raise WrongDomination("the rational codec needs a two-sided word")
    for n, v in w.entries:
        if v != VAR and v > abs(n):
            raise WrongDomination(f"digit {v} at position {n} exceeds {abs(n)}")


def decode_rational(w: Word) -> Fraction:
    """Exact value of the factorial expansion encoded by ``w``."""
    _check_rational_word(w)
    if w.is_variable:
        raise WrongDomination("variable words decode through lift_variable")
    digits = w.as_dict()
    # integer part with a running factorial, fractional part by Horner over (S+1)!
    whole, f = 0, 1
    for r in range(1, max(w.pos_domain, default=0) + 1):
        f *= r
        whole += digits.get(r, 0) * (-1) ** (r + 1) * f
    num, den = 0, 1
    for s in range(1, -min(w.neg_domain, default=0) + 1):
        num = num * (s + 1) + digits.get(-s, 0) * (-1) ** s
        den *= s + 1
    return whole + Fraction(num, den)


def _alternating_digits(x: int, radix) -> dict:
    """Digits of ``x = sum d_s (-1)**(s-1) * radix(1)...radix(s-1)``, ``0 <= d_s < radix(s)``."""
    digits = {}
    s = 1
    while x:
        r = radix(s)
        d = x % r
        if d:
            digits[s] = d
        x = (x - d) // -r
        s += 1
    return digits


def encode_rational(q: Union[Fraction, int, str]) -> Word:
    """The unique two-sided word decoding to ``q`` (``q != 0``).

    The fractional digits fall out of residues: after scaling by ``(S+1)!``
    the digit at ``-s`` is fixed modulo ``s+1``, peeled from the top down.
    What remains is the integer part, expanded in the alternating factorial
    radix.
    """
    q = parse_rational(q) if isinstance(q, str) else Fraction(q)
    if q == 0:
        raise ZeroInput()
    S, f = 1, 2
    while f % q.denominator:
        S += 1
        f *= S + 1
    X = q.numerator * (f // q.denominator)
    digits = {}
    for s in range(S, 0, -1):
        # X = N*(s+1)! + sum_{t<=s} d_t (-1)**t (s+1)!/(t+1)!
        sign = (-1) ** s
        d = (sign * X) % (s + 1)
        if d:
            digits[-s] = d
        X = (X - sign * d) // (s + 1)
    digits.update(_alternating_digits(X, lambda r: r + 1))
    w = make_word(digits, TWO_SIDED)
    if decode_rational(w) != q:  # pragma: no cover - guarded by the residue argument
        raise AssertionError(f"rational encoding failed for {q}")
    return w


# -- integer ------------------------------------------------------------------
@dataclass(frozen=True)
class MixedRadix:
    """Radix sequence ``k_1, k_2, ...`` with cumulative products ``l_0 = 1, l_s = k_1...k_s``."""

    bases: DominationVector

    def __post_init__(self) -> None:
        if self.bases.kind != ONE_SIDED:
            object.__setattr__(self, "bases", self.bases.with_kind(ONE_SIDED))
        if self.bases(1) < 2:
            raise InvalidDomination("mixed radix bases must be >= 2")

    def __call__(self, s: int) -> int:
        return self.bases(s)

    def cumulative(self, s: int) -> int:
        return _cumulative(self.bases, s)

    def weight(self, s: int) -> int:
        return (-1) ** (s - 1) * self.cumulative(s - 1)

    def digits(self) -> DominationVector:
        """Letter bounds ``k_s - 1`` of canonical (bijective) words."""
        b = self.bases
        if b.rule == "abs_plus_one":
            return DominationVector("abs", (), ONE_SIDED)
        if b.rule == "constant":
            return DominationVector("constant", (b.params[0] - 1,), ONE_SIDED)
        if b.rule == "affine":
            return DominationVector("affine", (b.params[0], b.params[1] - 1), ONE_SIDED)
        if b.rule == "table":
            pos, neg, tail = b.params
            inner = MixedRadix(tail).digits()
            return DominationVector("table", ([v - 1 for v in pos], [], inner), ONE_SIDED)
        raise InvalidDomination(f"no canonical digit rule for radix rule {b.rule!r}")


@lru_cache(maxsize=8192)
def _cumulative(bases: DominationVector, s: int) -> int:
    return 1 if s == 0 else _cumulative(bases, s - 1) * bases(s)


def _check_integer_word(w: Word, radix: MixedRadix) -> None:
    if w.kind != ONE_SIDED:
        raise WrongDomination("the integer codec needs a one-sided word")
    for s, v in w.entries:
        if v != VAR and v > radix(s):
            raise WrongDomination(f"digit {v} at position {s} exceeds {radix(s)}")


def decode_integer(w: Word, radix: MixedRadix) -> int:
    _check_integer_word(w, radix)
    if w.is_variable:
        raise WrongDomination("variable words decode through lift_variable")
    return sum(v * radix.weight(s) for s, v in w.entries)


def encode_integer(z: int, radix: MixedRadix) -> Word:
    """Canonical word for ``z != 0``: digits ``1 <= z_s <= k_s - 1``."""
    if z == 0:
        raise ZeroInput()
    return make_word(_alternating_digits(int(z), radix), ONE_SIDED)


# -- natural ------------------------------------------------------------------
def decode_natural(w: Word, base: int) -> int:
    if w.kind != ONE_SIDED:
        raise WrongDomination("the natural codec needs a one-sided word")
    total = 0
    for s, v in w.entries:
        if v == VAR or v > base - 1:
            raise WrongDomination(f"digit {v} at position {s} is not in 1..{base - 1}")
        total += v * base ** (s - 1)
    return total


def encode_natural(n: int, base: int) -> Word:
    if base < 2:
        raise InvalidDomination("base must be >= 2")
    if n < 1:
        raise ZeroInput()
    digits, s = {}, 1
    while n:
        n, d = divmod(n, base)
        if d:
            digits[s] = d
        s += 1
    return make_word(digits, ONE_SIDED)


# -- codec objects ------------------------------------------------------------
class Codec:
    """Common surface of the three codecs: weights, letter bounds, encode/decode."""

    name: str
    k: DominationVector  # letter bounds of canonical words

    def weight(self, n: int):
        raise NotImplementedError

    def decode(self, w: Word):
        raise NotImplementedError

    def encode(self, x) -> Word:
        raise NotImplementedError

    def check(self, w: Word) -> None:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError


class RationalCodec(Codec):
    name = "rational"
    k = RATIONAL_K

    def weight(self, n: int) -> Fraction:
        return rational_weight(n)

    def decode(self, w: Word) -> Fraction:
        return decode_rational(w)

    def encode(self, x) -> Word:
        return encode_rational(x)

    def check(self, w: Word) -> None:
        _check_rational_word(w)

    def to_json(self) -> dict:
        return {"codec": "rational"}

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalCodec)

    def __hash__(self) -> int:
        return hash("rational")


class IntegerCodec(Codec):
    name = "integer"

    def __init__(self, radix: Optional[MixedRadix] = None) -> None:
        self.radix = radix or MixedRadix(DominationVector("abs_plus_one", (), ONE_SIDED))
        self.k = self.radix.digits()

    def weight(self, n: int) -> int:
        return self.radix.weight(n)

    def decode(self, w: Word) -> int:
        return decode_integer(w, self.radix)

    def encode(self, x) -> Word:
        return encode_integer(int(x), self.radix)

    def check(self, w: Word) -> None:
        _check_integer_word(w, self.radix)

    def to_json(self) -> dict:
        return {"codec": "integer", "radix": self.radix.bases.to_json()}

    def __eq__(self, other) -> bool:
        return isinstance(other, IntegerCodec) and other.radix == self.radix

    def __hash__(self) -> int:
        return hash(("integer", self.radix))


class NaturalCodec(Codec):
    name = "natural"

    def __init__(self, base: int = 10) -> None:
        if base < 2:
            raise InvalidDomination("base must be >= 2")
        self.base = base
        self.k = DominationVector("constant", (base - 1,), ONE_SIDED)

    def weight(self, n: int) -> int:
        return self.base ** (n - 1)

    def decode(self, w: Word) -> int:
        return decode_natural(w, self.base)

    def encode(self, x) -> Word:
        return encode_natural(int(x), self.base)

    def check(self, w: Word) -> None:
        if w.kind != ONE_SIDED or any(v != VAR and v > self.base - 1 for _, v in w.entries):
            raise WrongDomination(f"{w} is not a base-{self.base} word")

    def to_json(self) -> dict:
        return {"codec": "natural", "base": self.base}

    def __eq__(self, other) -> bool:
        return isinstance(other, NaturalCodec) and other.base == self.base

    def __hash__(self) -> int:
        return hash(("natural", self.base))


def make_codec(spec) -> Codec:
    """Build a codec from a name or a ``{"codec": ..., ...}`` mapping."""
    if isinstance(spec, Codec):
        return spec
    if isinstance(spec, str):
        spec = {"codec": spec}
    name = spec.get("codec")
    if name == "rational":
        return RationalCodec()
    if name == "integer":
        radix = spec.get("radix")
        bases = DominationVector.from_json({**radix, "kind": ONE_SIDED}) if radix else None
        return IntegerCodec(MixedRadix(bases) if bases else None)
    if name == "natural":
        return NaturalCodec(int(spec.get("base", 10)))
    raise LocWordsError(f"unknown codec {name!r}")


# -- variable words -----------------------------------------------------------
@dataclass(frozen=True)
class VariableNumber:
    """Affine value of a variable word: ``value(i, j) = constant + i*pos_coeff + j*neg_coeff``.

    ``i`` fills the positive variable positions and ``j`` the negative ones,
    matching the (p, q) order of word substitution.
    """

    word: Word
    constant: Fraction
    pos_coeff: Fraction
    neg_coeff: Fraction

    def value(self, i: int, j: Optional[int] = None) -> Fraction:
        if j is None:
            if self.neg_coeff:
                raise LocWordsError("a negative-side variable needs the second index")
            j = 0
        return self.constant + i * self.pos_coeff + j * self.neg_coeff


def lift_variable(vw: Word, codec: Union[Codec, str] = "rational") -> VariableNumber:
    codec = make_codec(codec)
    codec.check(vw)
    c = b_pos = b_neg = Fraction(0)
    for n, v in vw.entries:
        wt = codec.weight(n)
        if v != VAR:
            c += v * wt
        elif n > 0:
            b_pos += wt
        else:
            b_neg += wt
    return VariableNumber(vw, c, b_pos, b_neg)
