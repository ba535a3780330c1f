"""Compact metric spaces with finite epsilon-nets.

Distances are always :class:`fractions.Fraction` so comparisons with a
tolerance are exact.  The fixed-precision circle stores points as integers
modulo ``2**bits``; its distances are exact multiples of ``2**-bits``.
"""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction
from typing import Any, Optional, Sequence

from .codec import parse_rational
from .errors import ConfigError, LocWordsError

__all__ = [
    "Space",
    "CircleExact",
    "CircleFixed",
    "FiniteSpace",
    "Cyclic",
    "Product",
    "Hyperspace",
    "torus",
    "space_from_json",
]


def _frac(x) -> Fraction:
    return parse_rational(x) if isinstance(x, str) else Fraction(x)


class Space:
    """Interface shared by every space in the catalog."""

    name = "space"
    finite = False

    def distance(self, x, y) -> Fraction:
        raise NotImplementedError

    def epsilon_net(self, eps) -> list:
        """Centres whose closed ``eps``-balls cover the space."""
        raise NotImplementedError

    def sample(self, rng: random.Random):
        raise NotImplementedError

    def points(self) -> list:
        raise LocWordsError(f"{self.name} is not finite")

    def normalize(self, x):
        return x

    def point_to_json(self, x) -> Any:
        raise NotImplementedError

    def point_from_json(self, obj) -> Any:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    def locate(self, x, centres: Sequence, eps) -> int:
        """Least index ``i`` with ``distance(x, centres[i]) <= eps``, or ``-1``."""
        eps = Fraction(eps)
        for i, c in enumerate(centres):
            if self.distance(x, c) <= eps:
                return i
        return -1

    # additive structure, present on circles and cyclic groups
    additive = False

    def add(self, x, t):
        raise LocWordsError(f"{self.name} has no translation structure")

    def neg(self, t):
        raise LocWordsError(f"{self.name} has no translation structure")

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and self.to_json() == other.to_json()

    def __hash__(self) -> int:
        return hash(repr(self.to_json()))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.to_json()})"


def _circle_grid(eps) -> int:
    eps = Fraction(eps)
    if eps <= 0:
        raise LocWordsError("a circle has no finite 0-net")
    if eps >= Fraction(1, 2):
        return 1
    return math.ceil(1 / (2 * eps))


class CircleExact(Space):
    """R/Z with rational points in ``[0, 1)``."""

    name = "circle"
    additive = True

    def normalize(self, x) -> Fraction:
        x = _frac(x)
        return x - math.floor(x)

    def distance(self, x, y) -> Fraction:
        d = (Fraction(x) - Fraction(y)) % 1
        return min(d, 1 - d)

    def epsilon_net(self, eps) -> list:
        n = _circle_grid(eps)
        return [Fraction(i, n) for i in range(n)]

    def sample(self, rng: random.Random) -> Fraction:
        return Fraction(rng.randrange(1 << 30), 1 << 30)

    def add(self, x, t) -> Fraction:
        return (Fraction(x) + Fraction(t)) % 1

    def neg(self, t) -> Fraction:
        return (-Fraction(t)) % 1

    def point_to_json(self, x) -> str:
        return str(Fraction(x))

    def point_from_json(self, obj) -> Fraction:
        return self.normalize(obj)

    def to_json(self) -> dict:
        return {"type": "circle"}


class CircleFixed(Space):
    """R/Z with points stored as integers modulo ``2**bits``."""

    name = "circle-fixed"
    additive = True

    def __init__(self, bits: int = 62) -> None:
        if not 8 <= bits <= 62:
            raise ConfigError("fixed-point bits must lie in 8..62")
        self.bits = bits
        self.M = 1 << bits

    def normalize(self, x) -> int:
        if isinstance(x, int):
            return x % self.M
        return round(_frac(x) * self.M) % self.M

    def distance(self, x, y) -> Fraction:
        d = (x - y) % self.M
        return Fraction(min(d, self.M - d), self.M)

    def epsilon_net(self, eps) -> list:
        n = _circle_grid(eps)
        return [(i * self.M) // n for i in range(n)]

    def locate(self, x, centres, eps) -> int:
        n = len(centres)
        # grids produced by epsilon_net admit a direct guess; fall back to a scan
        eps = Fraction(eps)
        if n and eps * n <= 1 and centres[-1] == ((n - 1) * self.M) // n and centres[0] == 0:
            guess = (x * n) // self.M
            for i in sorted({(guess + s) % n for s in (-1, 0, 1, 2)}):
                if self.distance(x, centres[i]) <= eps:
                    return i
            return -1
        return super().locate(x, centres, eps)

    def sample(self, rng: random.Random) -> int:
        return rng.randrange(self.M)

    def add(self, x, t) -> int:
        return (x + t) % self.M

    def neg(self, t) -> int:
        return (-t) % self.M

    def as_fraction(self, x) -> Fraction:
        return Fraction(x, self.M)

    def point_to_json(self, x) -> int:
        return int(x)

    def point_from_json(self, obj) -> int:
        return self.normalize(obj)

    def to_json(self) -> dict:
        return {"type": "circle-fixed", "bits": self.bits}


class FiniteSpace(Space):
    """``{0, ..., n-1}`` with the discrete metric."""

    name = "finite"
    finite = True

    def __init__(self, n: int) -> None:
        if n < 1:
            raise ConfigError("a finite space needs at least one point")
        self.n = n

    def normalize(self, x) -> int:
        x = int(x)
        if not 0 <= x < self.n:
            raise LocWordsError(f"point {x} not in 0..{self.n - 1}")
        return x

    def distance(self, x, y) -> Fraction:
        return Fraction(0 if x == y else 1)

    def epsilon_net(self, eps) -> list:
        return [0] if Fraction(eps) >= 1 else list(range(self.n))

    def locate(self, x, centres, eps) -> int:
        if Fraction(eps) >= 1:
            return 0 if centres else -1
        try:
            return list(centres).index(x)
        except ValueError:
            return -1

    def points(self) -> list:
        return list(range(self.n))

    def sample(self, rng: random.Random) -> int:
        return rng.randrange(self.n)

    def point_to_json(self, x) -> int:
        return int(x)

    def point_from_json(self, obj) -> int:
        return self.normalize(obj)

    def to_json(self) -> dict:
        return {"type": "finite", "n": self.n}


class Cyclic(FiniteSpace):
    """Z/m with the discrete metric and its group law."""

    name = "cyclic"
    additive = True

    def normalize(self, x) -> int:
        return int(x) % self.n

    def add(self, x, t) -> int:
        return (x + t) % self.n

    def neg(self, t) -> int:
        return (-t) % self.n

    def to_json(self) -> dict:
        return {"type": "cyclic", "m": self.n}


class Product(Space):
    """Finite product with the max metric; points are tuples."""

    name = "product"

    def __init__(self, factors: Sequence[Space]) -> None:
        if not factors:
            raise ConfigError("a product needs at least one factor")
        self.factors = tuple(factors)
        self.finite = all(f.finite for f in self.factors)
        self.additive = all(f.additive for f in self.factors)

    def normalize(self, x) -> tuple:
        return tuple(f.normalize(c) for f, c in zip(self.factors, x))

    def distance(self, x, y) -> Fraction:
        return max(f.distance(a, b) for f, a, b in zip(self.factors, x, y))

    def epsilon_net(self, eps) -> list:
        return list(itertools.product(*(f.epsilon_net(eps) for f in self.factors)))

    def points(self) -> list:
        return list(itertools.product(*(f.points() for f in self.factors)))

    def sample(self, rng: random.Random) -> tuple:
        return tuple(f.sample(rng) for f in self.factors)

    def add(self, x, t) -> tuple:
        return tuple(f.add(a, b) for f, a, b in zip(self.factors, x, t))

    def neg(self, t) -> tuple:
        return tuple(f.neg(a) for f, a in zip(self.factors, t))

    def diagonal(self, y) -> tuple:
        return tuple(y for _ in self.factors)

    def point_to_json(self, x) -> list:
        return [f.point_to_json(c) for f, c in zip(self.factors, x)]

    def point_from_json(self, obj) -> tuple:
        if len(obj) != len(self.factors):
            raise LocWordsError("product point has the wrong number of coordinates")
        return tuple(f.point_from_json(c) for f, c in zip(self.factors, obj))

    def to_json(self) -> dict:
        return {"type": "product", "factors": [f.to_json() for f in self.factors]}


def torus(d: int, bits: Optional[int] = None) -> Product:
    circle = CircleFixed(bits) if bits else CircleExact()
    return Product([circle] * d)


class Hyperspace(Space):
    """Nonempty finite subsets of a base space under the Hausdorff distance.

    Points are sorted tuples without repeats.
    """

    name = "hyperspace"

    def __init__(self, base: Space) -> None:
        self.base = base
        self.finite = base.finite

    def normalize(self, A) -> tuple:
        pts = sorted({self.base.normalize(a) for a in A})
        if not pts:
            raise LocWordsError("hyperspace points are nonempty sets")
        return tuple(pts)

    def _one_sided(self, A, B) -> Fraction:
        return max(min(self.base.distance(a, b) for b in B) for a in A)

    def distance(self, A, B) -> Fraction:
        return max(self._one_sided(A, B), self._one_sided(B, A))

    def epsilon_net(self, eps) -> list:
        net = self.base.epsilon_net(eps)
        if len(net) > 16:
            raise LocWordsError("hyperspace net too large to enumerate")
        return [tuple(c) for r in range(1, len(net) + 1) for c in itertools.combinations(net, r)]

    def points(self) -> list:
        pts = self.base.points()
        return [tuple(c) for r in range(1, len(pts) + 1) for c in itertools.combinations(pts, r)]

    def sample(self, rng: random.Random) -> tuple:
        return self.normalize(self.base.sample(rng) for _ in range(rng.randint(1, 3)))

    def point_to_json(self, A) -> list:
        return [self.base.point_to_json(a) for a in A]

    def point_from_json(self, obj) -> tuple:
        return self.normalize(self.base.point_from_json(a) for a in obj)

    def to_json(self) -> dict:
        return {"type": "hyperspace", "base": self.base.to_json()}


def space_from_json(obj) -> Space:
    kind = obj.get("type")
    if kind == "circle":
        return CircleExact()
    if kind == "circle-fixed":
        return CircleFixed(int(obj.get("bits", 62)))
    if kind == "finite":
        return FiniteSpace(int(obj["n"]))
    if kind == "cyclic":
        return Cyclic(int(obj["m"]))
    if kind == "product":
        return Product([space_from_json(f) for f in obj["factors"]])
    if kind == "torus":
        return torus(int(obj["d"]), obj.get("bits"))
    if kind == "hyperspace":
        return Hyperspace(space_from_json(obj["base"]))
    raise ConfigError(f"unknown space type {kind!r}")
