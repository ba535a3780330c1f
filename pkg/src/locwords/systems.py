"""Word-indexed families of maps ``T^w`` obeying ``T^{w1} T^{w2} = T^{w1 * w2}``.

Catalog
-------
``single_map``      ``T^w = B^{e(w)}`` with ``e(w) = sum l_n * w_n`` for a base map ``B``.
``bi_sequence``     ``T^w = T_{n_1}^{l w_{n_1}} ... T_{n_k}^{l w_{n_k}}`` with
                    ``T_n = B^n`` and ``T_{-n} = C^n`` for base maps ``B``, ``C``.
``codec_rotation``  translation by ``decode(w) * alpha`` on a circle or cyclic group.
``product``         several systems acting coordinatewise.
``hyperspace_lift`` the image map on finite point sets.

Every system declares a continuity modulus: all catalog members are
isometries of their metric, so ``modulus(delta) = delta``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .codec import Codec, make_codec, parse_rational
from .errors import ConfigError, LocWordsError, ModulusUnavailable, NotInvertible
from .spaces import CircleExact, CircleFixed, Cyclic, FiniteSpace, Hyperspace, Product, Space, space_from_json
from .words import TWO_SIDED, VAR, DominationVector, Word

__all__ = [
    "Angle",
    "BaseMap",
    "WordSystem",
    "SingleMap",
    "BiSequence",
    "CodecRotation",
    "ProductSystem",
    "HyperspaceLift",
    "QuotientSystem",
    "system_from_json",
    "exponent",
]

_ANGLE_BITS = 256


# -- angles -------------------------------------------------------------------
@dataclass(frozen=True)
class Angle:
    """A rotation angle: exact rational, or a named irrational with a 2**-256 approximant."""

    label: str
    value: Fraction
    exact: bool

    @classmethod
    def parse(cls, spec) -> "Angle":
        if isinstance(spec, Angle):
            return spec
        if isinstance(spec, (int, Fraction)):
            return cls(str(Fraction(spec)), Fraction(spec), True)
        if isinstance(spec, dict):
            spec = spec.get("angle") or spec.get("label")
        if not isinstance(spec, str):
            raise ConfigError(f"cannot read angle {spec!r}")
        P = _ANGLE_BITS
        if spec == "golden":
            # (sqrt(5) - 1) / 2
            return cls(spec, Fraction(math.isqrt(5 << (2 * P)) - (1 << P), 1 << (P + 1)), False)
        if spec.startswith("sqrt:"):
            n = int(spec[5:])
            r = math.isqrt(n)
            if r * r == n:
                return cls(spec, Fraction(r), True)
            return cls(spec, Fraction(math.isqrt(n << (2 * P)), 1 << P), False)
        return cls(spec, parse_rational(spec), True)

    def to_json(self) -> str:
        return self.label


def _rotate_amount(space: Space, angle: Angle, e) -> object:
    """Translation by ``e * angle`` expressed in ``space`` coordinates."""
    if isinstance(space, CircleFixed):
        return round(Fraction(e) * angle.value * space.M) % space.M
    if isinstance(space, CircleExact):
        if not angle.exact:
            raise ConfigError("an irrational angle needs the fixed-precision circle")
        return (Fraction(e) * angle.value) % 1
    if isinstance(space, Cyclic):
        amount = Fraction(e) * angle.value
        if amount.denominator != 1:
            raise LocWordsError(f"non-integral shift {amount} on Z/{space.n}")
        return int(amount) % space.n
    raise ConfigError(f"rotations need a circle or cyclic space, not {space.name}")


# -- base maps ----------------------------------------------------------------
class BaseMap:
    """A single self-map ``B`` that can be iterated ``e`` times."""

    def __init__(self, space: Space, rule: str, param=None) -> None:
        self.space, self.rule = space, rule
        if rule == "identity":
            self.param = None
        elif rule in ("rotation", "shift"):
            self.param = Angle.parse(param)
            if not space.additive:
                raise ConfigError(f"{rule} needs an additive space")
        elif rule == "permutation":
            if not isinstance(space, FiniteSpace) or sorted(param) != list(range(space.n)):
                raise ConfigError("permutation must list each point of a finite space once")
            self.param = tuple(int(v) for v in param)
        elif rule == "multiply":
            if not isinstance(space, Cyclic):
                raise ConfigError("multiply needs a cyclic space")
            self.param = int(param)
        else:
            raise ConfigError(f"unknown base map {rule!r}")

    @property
    def additive(self) -> bool:
        return self.rule in ("identity", "rotation", "shift") and self.space.additive

    @property
    def invertible(self) -> bool:
        if self.rule == "multiply":
            return math.gcd(self.param, self.space.n) == 1
        return True

    def step(self, e: int):
        """Translation equal to ``B^e`` (additive maps only)."""
        if self.rule == "identity":
            return self.space.normalize(0)
        return _rotate_amount(self.space, self.param, e)

    def power(self, x, e: int):
        if e < 0 and not self.invertible:
            raise NotInvertible(f"{self.rule} map is not invertible")
        if self.additive:
            return self.space.add(x, self.step(e))
        if self.rule == "permutation":
            perm = self.param
            if e < 0:
                inv = [0] * len(perm)
                for i, v in enumerate(perm):
                    inv[v] = i
                perm, e = tuple(inv), -e
            for _ in range(e % _cycle_lcm(perm)):
                x = perm[x]
            return x
        m = self.space.n
        return (x * pow(self.param, e, m)) % m

    def to_json(self) -> dict:
        out = {"rule": self.rule}
        if self.rule in ("rotation", "shift"):
            out["param"] = self.param.to_json()
        elif self.param is not None:
            out["param"] = list(self.param) if isinstance(self.param, tuple) else self.param
        return out


def _cycle_lcm(perm) -> int:
    seen, out = set(), 1
    for s in range(len(perm)):
        if s in seen:
            continue
        n, x = 0, s
        while x not in seen:
            seen.add(x)
            x = perm[x]
            n += 1
        out = out * n // math.gcd(out, n)
    return out


def exponent(w: Word, weights: DominationVector) -> int:
    """``sum weights(n) * letter`` over the entries of a constant word."""
    total = 0
    for n, v in w.entries:
        if v == VAR:
            raise LocWordsError("maps are indexed by constant words")
        total += weights(n) * v
    return total


# -- systems ------------------------------------------------------------------
class WordSystem:
    """Shared surface: ``apply``, optional ``translation``, ``modulus`` and inverse."""

    kind = "system"
    space: Space
    k: DominationVector

    @property
    def order(self) -> str:
        return "R1" if self.k.kind == TWO_SIDED else "R2"

    @property
    def additive(self) -> bool:
        return False

    @property
    def invertible(self) -> bool:
        return True

    def apply(self, w: Word, x):
        raise NotImplementedError

    def apply_inverse(self, w: Word, x):
        if not self.invertible:
            raise NotInvertible(f"{self.kind} system is not invertible")
        if self.additive:
            return self.space.add(x, self.space.neg(self.translation(w)))
        raise NotInvertible(f"{self.kind} system has no inverse")

    def translation(self, w: Word):
        """Element ``t`` with ``T^w(x) = x + t`` (additive systems only)."""
        raise LocWordsError(f"{self.kind} system is not a translation family")

    def modulus(self, delta) -> Fraction:
        # catalog systems are isometries of their metric
        return Fraction(delta)

    def require_modulus(self, delta) -> Fraction:
        m = self.modulus(delta)
        if m is None:
            raise ModulusUnavailable(f"{self.kind} system declares no continuity modulus")
        return m

    def to_json(self) -> dict:
        raise NotImplementedError


class SingleMap(WordSystem):
    kind = "single_map"

    def __init__(self, space: Space, k: DominationVector, base: BaseMap, weights: DominationVector) -> None:
        self.space, self.k, self.base, self.weights = space, k, base, weights

    @property
    def additive(self) -> bool:
        return self.base.additive

    @property
    def invertible(self) -> bool:
        return self.base.invertible

    def exponent(self, w: Word) -> int:
        return exponent(w, self.weights)

    def translation(self, w: Word):
        if not self.additive:
            return super().translation(w)
        return self.base.step(self.exponent(w))

    def apply(self, w: Word, x):
        return self.base.power(x, self.exponent(w))

    def apply_inverse(self, w: Word, x):
        return self.base.power(x, -self.exponent(w))

    def to_json(self) -> dict:
        return {"kind": self.kind, "space": self.space.to_json(), "k": self.k.to_json(),
                "map": self.base.to_json(), "weights": self.weights.to_json()}


class BiSequence(WordSystem):
    """``T_n = B**n`` for ``n > 0`` and ``T_{-n} = C**n``; composed in position order."""

    kind = "bi_sequence"

    def __init__(self, space: Space, k: DominationVector, pos: BaseMap, neg: BaseMap,
                 weights: DominationVector) -> None:
        self.space, self.k, self.pos, self.neg, self.weights = space, k, pos, neg, weights

    @property
    def additive(self) -> bool:
        return self.pos.additive and self.neg.additive

    @property
    def invertible(self) -> bool:
        return self.pos.invertible and self.neg.invertible

    def _factors(self, w: Word):
        for n, v in w.entries:
            if v == VAR:
                raise LocWordsError("maps are indexed by constant words")
            yield (self.pos if n > 0 else self.neg), abs(n) * self.weights(n) * v

    def translation(self, w: Word):
        if not self.additive:
            return super().translation(w)
        t = self.space.normalize(0)
        for m, e in self._factors(w):
            t = self.space.add(t, m.step(e))
        return t

    def apply(self, w: Word, x):
        # the leftmost factor acts last
        for m, e in reversed(list(self._factors(w))):
            x = m.power(x, e)
        return x

    def apply_inverse(self, w: Word, x):
        for m, e in self._factors(w):
            x = m.power(x, -e)
        return x

    def to_json(self) -> dict:
        return {"kind": self.kind, "space": self.space.to_json(), "k": self.k.to_json(),
                "map": self.pos.to_json(), "neg_map": self.neg.to_json(), "weights": self.weights.to_json()}


class CodecRotation(WordSystem):
    """Translation by ``decode(w) * alpha``; on ``Z/m`` the angle is an integer step."""

    kind = "codec_rotation"

    def __init__(self, space: Space, codec: Codec, alpha) -> None:
        if not space.additive or isinstance(space, Product):
            raise ConfigError("codec rotations act on a circle or a cyclic group")
        self.space, self.codec, self.alpha = space, make_codec(codec), Angle.parse(alpha)
        self.k = self.codec.k
        if isinstance(space, Cyclic) and self.codec.name == "rational":
            raise ConfigError("the rational codec needs a circle, not Z/m")

    @property
    def additive(self) -> bool:
        return True

    def value(self, w: Word):
        return self.codec.decode(w)

    def translation(self, w: Word):
        return _rotate_amount(self.space, self.alpha, self.codec.decode(w))

    def apply(self, w: Word, x):
        return self.space.add(x, self.translation(w))

    def to_json(self) -> dict:
        return {"kind": self.kind, "space": self.space.to_json(), "codec": self.codec.to_json(),
                "alpha": self.alpha.to_json()}


class ProductSystem(WordSystem):
    kind = "product"

    def __init__(self, systems: Sequence[WordSystem]) -> None:
        if not systems:
            raise ConfigError("a product needs at least one system")
        ks = {s.k for s in systems}
        if len(ks) != 1:
            raise ConfigError("product factors must share one domination vector")
        self.systems = tuple(systems)
        self.k = systems[0].k
        self.space = Product([s.space for s in systems])

    @property
    def additive(self) -> bool:
        return all(s.additive for s in self.systems)

    @property
    def invertible(self) -> bool:
        return all(s.invertible for s in self.systems)

    def translation(self, w: Word):
        if not self.additive:
            return super().translation(w)
        return tuple(s.translation(w) for s in self.systems)

    def apply(self, w: Word, x):
        return tuple(s.apply(w, c) for s, c in zip(self.systems, x))

    def apply_inverse(self, w: Word, x):
        return tuple(s.apply_inverse(w, c) for s, c in zip(self.systems, x))

    def to_json(self) -> dict:
        return {"kind": self.kind, "systems": [s.to_json() for s in self.systems]}


class HyperspaceLift(WordSystem):
    kind = "hyperspace_lift"

    def __init__(self, base: WordSystem) -> None:
        self.base = base
        self.k = base.k
        self.space = Hyperspace(base.space)

    @property
    def invertible(self) -> bool:
        return self.base.invertible

    def apply(self, w: Word, A):
        return self.space.normalize(self.base.apply(w, a) for a in A)

    def apply_inverse(self, w: Word, A):
        return self.space.normalize(self.base.apply_inverse(w, a) for a in A)

    def to_json(self) -> dict:
        return {"kind": self.kind, "base": self.base.to_json()}


class QuotientSystem(WordSystem):
    """``S^w = T_a^w (T_b^w)^{-1}`` for commuting invertible systems on one space."""

    kind = "quotient"

    def __init__(self, a: WordSystem, b: WordSystem) -> None:
        if a.space != b.space or a.k != b.k:
            raise ConfigError("quotient needs systems on one space with one domination vector")
        self.a, self.b = a, b
        self.space, self.k = a.space, a.k

    @property
    def additive(self) -> bool:
        return self.a.additive and self.b.additive

    def translation(self, w: Word):
        if not self.additive:
            return super().translation(w)
        return self.space.add(self.a.translation(w), self.space.neg(self.b.translation(w)))

    def apply(self, w: Word, x):
        if self.additive:
            return self.space.add(x, self.translation(w))
        return self.a.apply(w, self.b.apply_inverse(w, x))

    def apply_inverse(self, w: Word, x):
        if self.additive:
            return self.space.add(x, self.space.neg(self.translation(w)))
        return self.b.apply(w, self.a.apply_inverse(w, x))

    def to_json(self) -> dict:
        return {"kind": self.kind, "a": self.a.to_json(), "b": self.b.to_json()}


def _k_from(obj, default_kind: str = TWO_SIDED) -> DominationVector:
    k = obj.get("k")
    if k is None:
        raise ConfigError("system needs a domination vector 'k'")
    return DominationVector.from_json({"kind": default_kind, **k})


def system_from_json(obj) -> WordSystem:
    try:
        kind = obj["kind"]
        if kind in ("single_map", "bi_sequence"):
            space = space_from_json(obj["space"])
            k = _k_from(obj)
            weights = DominationVector.from_json({"kind": k.kind, **obj.get("weights", {"rule": "constant", "params": [1]})})
            m = obj["map"]
            base = BaseMap(space, m["rule"], m.get("param"))
            if kind == "single_map":
                return SingleMap(space, k, base, weights)
            n = obj.get("neg_map", m)
            return BiSequence(space, k, base, BaseMap(space, n["rule"], n.get("param")), weights)
        if kind == "codec_rotation":
            return CodecRotation(space_from_json(obj["space"]), make_codec(obj["codec"]), obj["alpha"])
        if kind == "product":
            return ProductSystem([system_from_json(s) for s in obj["systems"]])
        if kind == "hyperspace_lift":
            return HyperspaceLift(system_from_json(obj["base"]))
        if kind == "quotient":
            return QuotientSystem(system_from_json(obj["a"]), system_from_json(obj["b"]))
        if kind == "phi_shift":
            from .semigroup import PhiShift
            return PhiShift.from_json(obj)
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"malformed system description: {exc}") from None
    raise ConfigError(f"unknown system kind {obj.get('kind')!r}")
