"""JSON forms for words, plans, sequences, budgets, nets and certificates."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Mapping, Optional

import jsonschema

from .codec import format_rational, parse_rational
from .errors import ConfigError, LocWordsError
from .ramsey import SearchBudget
from .spaces import Space
from .words import (
    TWO_SIDED,
    VAR,
    DominationVector,
    Word,
    WordSequence,
    diagonal_sequence,
    make_word,
    positions_sequence,
    validate_word,
)

__all__ = [
    "word_to_json",
    "word_from_json",
    "plan_to_json",
    "plan_from_json",
    "sequence_from_json",
    "sequence_to_json",
    "budget_from_json",
    "net_from_json",
    "rational_to_json",
    "rational_from_json",
    "canonical_json",
    "digest",
    "seal",
    "write_atomic",
    "load_schema",
    "validate",
    "BUDGET_ENV",
]

BUDGET_ENV = "LOCWORDS_MAX_CANDIDATES"


# -- words and plans ----------------------------------------------------------
def word_to_json(w: Word) -> dict:
    return {"kind": w.kind, "entries": {str(n): ("v" if v == VAR else v) for n, v in w.entries}}


def word_from_json(obj, k: Optional[DominationVector] = None, kind: Optional[str] = None) -> Word:
    """Accepts ``{"kind", "entries"}`` or a bare ``{position: letter}`` mapping."""
    if isinstance(obj, str):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise LocWordsError(f"word is not valid JSON: {exc}") from None
    if not isinstance(obj, Mapping):
        raise LocWordsError("a word is a JSON object")
    entries = obj.get("entries", obj if "kind" not in obj else None)
    if not isinstance(entries, Mapping):
        raise LocWordsError("word entries must be an object")
    kind = obj.get("kind") or kind or (k.kind if k else TWO_SIDED)
    w = make_word(entries, kind)
    return validate_word(w, k) if k is not None else w


def plan_to_json(plan) -> list:
    return [[i, None if s is None else list(s)] for i, s in plan]


def plan_from_json(obj) -> tuple:
    try:
        return tuple((int(i), None if s is None else tuple(int(x) for x in s)) for i, s in obj)
    except (TypeError, ValueError):
        raise LocWordsError(f"malformed plan {obj!r}") from None


def _fibs(n: int) -> list:
    out = [1, 1]
    while len(out) < n:
        out.append(out[-1] + out[-2])
    return out[:n]


def sequence_from_json(obj: Mapping) -> WordSequence:
    """Rules: ``diagonal``, ``positions``, ``fibonacci`` (both sides at ``F(offset + n)``), ``explicit``."""
    try:
        k = DominationVector.from_json(obj["k"])
        rule = obj.get("rule", "diagonal")
        if rule == "diagonal":
            return diagonal_sequence(k, int(obj["length"]))
        if rule == "positions":
            return positions_sequence(k, [int(p) for p in obj["positive"]], [int(p) for p in obj.get("negative", ())])
        if rule == "fibonacci":
            off, n = int(obj.get("offset", 0)), int(obj["length"])
            pos = _fibs(off + n)[off:]
            return positions_sequence(k, pos, pos if k.kind == TWO_SIDED else ())
        if rule == "explicit":
            return WordSequence(tuple(word_from_json(t, k) for t in obj["terms"]), k)
    except KeyError as exc:
        raise ConfigError(f"sequence description lacks {exc}") from None
    raise ConfigError(f"unknown sequence rule {rule!r}")


def sequence_to_json(seq: WordSequence) -> dict:
    return {"rule": "explicit", "k": seq.k.to_json(), "terms": [word_to_json(t) for t in seq.terms]}


def budget_from_json(obj: Optional[Mapping], seed: Optional[int] = None) -> SearchBudget:
    """Missing ``max_candidates`` falls back to ``$LOCWORDS_MAX_CANDIDATES``, then 100000."""
    obj = dict(obj or {})
    env = os.environ.get(BUDGET_ENV)
    default = SearchBudget().max_candidates
    if env:
        try:
            default = int(env)
        except ValueError:
            raise ConfigError(f"{BUDGET_ENV} must be an integer") from None
    try:
        return SearchBudget(int(obj.get("window", 3)), int(obj.get("max_plan_terms", 2)),
                            int(obj.get("max_candidates", default)),
                            int(seed if seed is not None else obj.get("seed", 0)))
    except (TypeError, ValueError):
        raise ConfigError(f"malformed budget {obj!r}") from None


def net_from_json(obj: Mapping, space: Space, system=None):
    from .dynamics import Net

    rule = obj.get("rule")
    if rule == "constant":
        return Net.constant(space, space.point_from_json(obj["point"]))
    if rule == "orbit":
        if system is None:
            raise ConfigError("an orbit net needs a system")
        return Net.orbit(system, space.point_from_json(obj.get("x", 0)))
    if rule == "decoded":
        return Net.decoded(space, obj.get("codec", "rational"), obj.get("alpha", "1"))
    if rule == "index":
        return Net.index(space)
    if rule == "table":
        vals = {k: space.point_from_json(v) for k, v in obj.get("values", {}).items()}
        return Net.table(space, vals, space.point_from_json(obj["default"]))
    raise ConfigError(f"unknown net rule {rule!r}")


def rational_to_json(x) -> Optional[str]:
    return None if x is None else format_rational(Fraction(x))


def rational_from_json(s) -> Fraction:
    return parse_rational(s) if isinstance(s, str) else Fraction(s)


# -- certificates -------------------------------------------------------------
def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def digest(cert: Mapping) -> str:
    """sha256 of the canonical form with the ``digest`` field left out."""
    body = {k: v for k, v in cert.items() if k != "digest"}
    return hashlib.sha256(canonical_json(body).encode()).hexdigest()


def seal(cert: dict) -> dict:
    cert = dict(cert)
    cert["digest"] = digest(cert)
    return cert


def write_atomic(path: str, text: str) -> None:
    """Write through a temporary file in the target directory, then rename."""
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".locwords-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    try:
        text = resources.files("locwords").joinpath("schemas", f"{name}.json").read_text("utf-8")
    except FileNotFoundError:
        raise ConfigError(f"no schema named {name!r}") from None
    return json.loads(text)


def validate(obj, name: str) -> None:
    try:
        jsonschema.validate(obj, load_schema(name))
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"{name}: {where}: {exc.message}") from None
