"""Words indexing a commutative semigroup through ``phi(w) = sum y_{letter, position}``.

The letter at a negative position ``n`` is the negative-indexed symbol, so
an entry ``(n, v)`` with ``n < 0`` contributes ``y_{-v, n}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping, Optional

from .codec import parse_rational
from .errors import ConfigError, LocWordsError, MissingTableEntry
from .spaces import Space, space_from_json
from .systems import Angle, WordSystem, _rotate_amount
from .words import VAR, DominationVector, Word, substitute

__all__ = ["SemigroupTable", "semigroup_phi", "PhiShift", "TermDecomposition", "decompose_term"]

_CARRIERS = ("integers", "rationals", "cyclic", "vectors")


def _scalar_fn(spec) -> Any:
    """``"identity"``, a constant, or a list read as ``f(1), f(2), ...``."""
    if spec is None or spec == "identity":
        return lambda l: l
    if isinstance(spec, int):
        return lambda l: spec
    values = list(spec)

    def f(l: int) -> int:
        if not 1 <= l <= len(values):
            raise MissingTableEntry(f"no value for letter {l}")
        return values[l - 1]

    return f


@dataclass
class SemigroupTable:
    """Carrier plus the elements ``y_{l,n}``.

    ``rule`` is one of ``letter`` (``y = l``), ``letter_times_position``
    (``y = l * n``), ``product`` (``y_{l,n} = p(l) y_n`` for ``l > 0`` and
    ``q(-l) y_n`` for ``l < 0``) or ``table`` (explicit ``"l,n"`` keys).
    """

    carrier: str
    rule: str
    params: dict = field(default_factory=dict)
    modulus: Optional[int] = None
    dim: int = 1

    def __post_init__(self) -> None:
        if self.carrier not in _CARRIERS:
            raise ConfigError(f"unknown carrier {self.carrier!r}")
        if self.carrier == "cyclic" and not self.modulus:
            raise ConfigError("cyclic carrier needs a modulus")
        if self.rule not in ("letter", "letter_times_position", "product", "table"):
            raise ConfigError(f"unknown element rule {self.rule!r}")
        if self.rule == "product":
            self._p = _scalar_fn(self.params.get("p"))
            self._q = _scalar_fn(self.params.get("q"))
        self._table = {}
        if self.rule == "table":
            for key, val in self.params.get("values", {}).items():
                l, n = (int(s) for s in key.split(","))
                self._table[(l, n)] = self.coerce(val)

    # -- carrier arithmetic
    def zero(self):
        if self.carrier == "vectors":
            return (0,) * self.dim
        return Fraction(0) if self.carrier == "rationals" else 0

    def coerce(self, v):
        if self.carrier == "vectors":
            v = tuple(int(x) for x in v)
            if len(v) != self.dim:
                raise ConfigError(f"vector {v} does not have dimension {self.dim}")
            return v
        if self.carrier == "rationals":
            return parse_rational(v) if isinstance(v, str) else Fraction(v)
        v = int(v)
        return v % self.modulus if self.carrier == "cyclic" else v

    def add(self, a, b):
        if self.carrier == "vectors":
            return tuple(x + y for x, y in zip(a, b))
        s = a + b
        return s % self.modulus if self.carrier == "cyclic" else s

    def scale(self, c: int, a):
        if self.carrier == "vectors":
            return tuple(c * x for x in a)
        return self.coerce(c * a) if self.carrier != "rationals" else c * a

    def total(self, items):
        out = self.zero()
        for x in items:
            out = self.add(out, x)
        return out

    # -- elements
    def base(self, n: int):
        """``y_n`` for the product rule."""
        y = self.params.get("y", {"rule": "position"})
        if y["rule"] == "position":
            return self.coerce(n) if self.carrier != "vectors" else self.coerce([n] * self.dim)
        if y["rule"] == "constant":
            return self.coerce(y["value"])
        try:
            return self.coerce(y["values"][str(n)])
        except KeyError:
            raise MissingTableEntry(f"no y_{n}") from None

    def y(self, l: int, n: int):
        if self.rule == "letter":
            return self.coerce(l)
        if self.rule == "letter_times_position":
            return self.coerce(l * n)
        if self.rule == "product":
            c = self._p(l) if l > 0 else self._q(-l)
            return self.scale(c, self.base(n))
        try:
            return self._table[(l, n)]
        except KeyError:
            raise MissingTableEntry(f"no table entry y_{{{l},{n}}}") from None

    def to_json(self) -> dict:
        out = {"carrier": self.carrier, "rule": self.rule, "params": self.params}
        if self.modulus:
            out["modulus"] = self.modulus
        if self.carrier == "vectors":
            out["dim"] = self.dim
        return out

    @classmethod
    def from_json(cls, obj: Mapping) -> "SemigroupTable":
        try:
            return cls(obj["carrier"], obj["rule"], dict(obj.get("params", {})), obj.get("modulus"),
                       int(obj.get("dim", 1)))
        except KeyError as exc:
            raise ConfigError(f"semigroup table lacks {exc}") from None


def semigroup_phi(table: SemigroupTable, w: Word):
    """``sum y_{l,n}`` over the entries, with ``l = -v`` on the negative side."""
    out = table.zero()
    for n, v in w.entries:
        if v == VAR:
            raise LocWordsError("phi is defined on constant words; substitute first")
        out = table.add(out, table.y(v if n > 0 else -v, n))
    return out


class PhiShift(WordSystem):
    """``T^w(x) = x + h(phi(w))`` where ``h`` maps the carrier into the space's translations."""

    kind = "phi_shift"

    def __init__(self, table: SemigroupTable, space: Space, k: DominationVector, alpha="1") -> None:
        if not space.additive or table.carrier == "vectors":
            raise ConfigError("phi_shift needs a scalar carrier and an additive space")
        self.table, self.space, self.k = table, space, k
        self.alpha = Angle.parse(alpha)

    @property
    def additive(self) -> bool:
        return True

    def translation(self, w: Word):
        return _rotate_amount(self.space, self.alpha, semigroup_phi(self.table, w))

    def apply(self, w: Word, x):
        return self.space.add(x, self.translation(w))

    def to_json(self) -> dict:
        return {"kind": self.kind, "table": self.table.to_json(), "space": self.space.to_json(),
                "k": self.k.to_json(), "alpha": self.alpha.to_json()}

    @classmethod
    def from_json(cls, obj) -> "PhiShift":
        k = DominationVector.from_json(obj["k"])
        return cls(SemigroupTable.from_json(obj["table"]), space_from_json(obj["space"]), k, obj.get("alpha", "1"))


@dataclass(frozen=True)
class TermDecomposition:
    """``phi(u(i, j)) = a + sum_{V+} y_{i,t} + sum_{V-} y_{-j,t}``; for the product rule
    this reads ``a + p(i) b + q(j) c``."""

    a: Any
    b: Any
    c: Any
    constant_positions: tuple
    pos_variables: tuple
    neg_variables: tuple
    checked: int


def decompose_term(table: SemigroupTable, u: Word, bounds: tuple, k: DominationVector) -> TermDecomposition:
    """Split ``phi`` of a variable word and re-check every substitution within ``bounds``."""
    C = tuple(n for n, v in u.entries if v != VAR)
    Vp = tuple(n for n, v in u.entries if v == VAR and n > 0)
    Vm = tuple(n for n, v in u.entries if v == VAR and n < 0)
    a = table.total(table.y(u[n] if n > 0 else -u[n], n) for n in C)
    if table.rule == "product":
        b = table.total(table.base(n) for n in Vp)
        c = table.total(table.base(n) for n in Vm)
    else:
        b = c = None

    def predicted(i: int, j: Optional[int]):
        if table.rule == "product":
            out = table.add(a, table.scale(table._p(i), b))
            return out if j is None else table.add(out, table.scale(table._q(j), c))
        out = table.add(a, table.total(table.y(i, t) for t in Vp))
        return out if j is None else table.add(out, table.total(table.y(-j, t) for t in Vm))

    checked = 0
    two = len(bounds) == 2
    for i in range(1, bounds[0] + 1):
        for j in (range(1, bounds[1] + 1) if two else (None,)):
            got = semigroup_phi(table, substitute(u, (i, j) if two else (i,), k))
            if got != predicted(i, j):
                raise LocWordsError(f"decomposition mismatch at ({i},{j}) for {u}")
            checked += 1
    return TermDecomposition(a, b, c, C, Vp, Vm, checked)
