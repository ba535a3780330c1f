"""Command-line front end: codecs, partition witnesses, recurrence certificates.

Exit codes: 0 ok or exhausted, 2 domain error, 3 configuration or schema
error, 4 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import Optional

from . import __version__
from .codec import format_rational, make_codec, parse_rational
from .dynamics import (
    _chain_bound,
    _multi_residuals,
    _residual_scan,
    find_recurrent_point,
    multiple_recurrence_search,
    semigroup_recurrence,
    uniform_ip_check,
)
from .errors import ConfigError, LocWordsError
from .ramsey import (
    Exhausted,
    coloring_from_json,
    constant_words_of_prefix,
    has_mono_sum,
    hindman_finite_check,
    search_monochromatic_extraction,
    search_monochromatic_substitutions,
    substitution_range,
)
from .kernels import weak_schur_count_avoiding
from .semigroup import PhiShift, SemigroupTable, decompose_term
from .serialize import (
    budget_from_json,
    canonical_json,
    digest,
    net_from_json,
    plan_from_json,
    plan_to_json,
    rational_from_json,
    rational_to_json,
    seal,
    sequence_from_json,
    validate,
    word_from_json,
    word_to_json,
    write_atomic,
)
from .spaces import space_from_json
from .systems import system_from_json
from .words import TWO_SIDED, DominationVector, WordSequence, extracted_word, is_extraction, substitute

EXIT_OK, EXIT_DOMAIN, EXIT_CONFIG, EXIT_VERIFY = 0, 2, 3, 4


class VerificationFailed(Exception):
    """A certificate does not match what its own data recomputes to."""


def _schema_id(command: str) -> str:
    name = {"verify-partition": "partition", "find-recurrence": "recurrence", "multi-recurrence": "multi-recurrence",
            "check-ip": "ip", "semigroup-run": "semigroup", "hindman": "hindman"}[command]
    return f"locwords.{name}-certificate/1"


def _load_json(src: str):
    text = src if src.lstrip().startswith(("{", "[")) else None
    if text is None:
        try:
            with open(src, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read {src}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{src}: invalid JSON: {exc}") from None


def _point(space, obj):
    return space.normalize(0) if obj is None else space.point_from_json(obj)


def _rat(x) -> Optional[str]:
    return rational_to_json(x)


def _residual_rows(residuals) -> list:
    return [[d, _rat(o), _rat(r)] for d, o, r in residuals]


def _search_args(cfg: dict) -> dict:
    return {"levels": int(cfg["levels"]), "terms_wanted": int(cfg["terms"]),
            "start_level": int(cfg.get("start_level", 1)), "stride": int(cfg.get("stride", 1)),
            "schedule": [rational_from_json(r) for r in cfg["schedule"]] if cfg.get("schedule") else None,
            "target": rational_from_json(cfg["target"]) if cfg.get("target") is not None else None}


def _prefix_from_witness(base: WordSequence, wit: dict) -> tuple:
    plans = [plan_from_json(p) for p in wit["plans"]]
    terms = [word_from_json(t, base.k) for t in wit["terms"]]
    if len(plans) != len(terms) or not terms:
        raise VerificationFailed("plans and terms differ in number")
    for u, plan in zip(terms, plans):
        if extracted_word(base, plan) != u:
            raise VerificationFailed(f"term {u} is not realised by its plan")
    if not is_extraction(WordSequence(tuple(terms), base.k), base):
        raise VerificationFailed("terms are not an extraction of the base sequence")
    return tuple(terms), tuple(plans)


def _canonical_point(space, obj):
    x = space.point_from_json(obj)
    if space.point_to_json(x) != obj:
        raise VerificationFailed(f"point {obj!r} is not in canonical form")
    return x


def _same(label: str, got, want) -> None:
    if got != want:
        raise VerificationFailed(f"{label}: certificate says {want!r}, recomputed {got!r}")


# -- verify-partition ---------------------------------------------------------
def _partition_parts(cfg: dict):
    col = coloring_from_json(cfg["coloring"])
    k = DominationVector.from_json(cfg["k"])
    return col, k


def run_partition(cfg: dict, budget):
    col, k = _partition_parts(cfg)
    if cfg.get("mode", "substitution") == "substitution":
        res = search_monochromatic_substitutions(col, k, budget)
        if isinstance(res, Exhausted):
            return None, res.examined, []
        wit = {"mode": "substitution", "word": word_to_json(res.word), "color": res.color,
               "substitutions": res.substitutions}
        return wit, res.examined, []
    base = sequence_from_json(cfg["base"])
    terms = int(cfg.get("terms", 2))
    res = search_monochromatic_extraction(col, base, terms, budget, cfg.get("check_terms"))
    if isinstance(res, Exhausted):
        return None, res.examined, []
    wit = {"mode": "extraction", "terms": [word_to_json(t) for t in res.terms],
           "plans": [plan_to_json(p) for p in res.plans], "color": res.color, "words_checked": res.words_checked}
    return wit, res.examined, []


def check_partition(cfg: dict, wit: dict) -> None:
    col, k = _partition_parts(cfg)
    _same("mode", cfg.get("mode", "substitution"), wit.get("mode"))
    if wit["mode"] == "substitution":
        w = word_from_json(wit["word"], k)
        if not w.is_variable or (k.kind == TWO_SIDED and not w.is_zero_class):
            raise VerificationFailed(f"{w} is not an admissible variable word")
        words = substitution_range(w, k)
        colours = {col(substitute(w, s, k)) for s in words}
        _same("colours", colours, {wit["color"]})
        _same("substitutions", len(words), wit["substitutions"])
        return
    base = sequence_from_json(cfg["base"])
    terms, _ = _prefix_from_witness(base, wit)
    _same("term count", len(terms), int(cfg.get("terms", 2)))
    ct = cfg.get("check_terms") or len(terms)
    words = constant_words_of_prefix(terms, base.k, ct)
    _same("colours", {col(w) for _, w in words}, {wit["color"]})
    _same("words_checked", len(words), wit["words_checked"])


# -- find-recurrence ----------------------------------------------------------
def _recurrence_witness(sys_, terms, plans, x, x0, target=None) -> tuple:
    orbit, ret, words, residuals = _residual_scan(sys_, list(terms), x, x0)
    chain, covered = _chain_bound(sys_, words, x, x0)
    sp = sys_.space
    wit = {"terms": [word_to_json(t) for t in terms], "plans": [plan_to_json(p) for p in plans],
           "x": sp.point_to_json(x), "x0": sp.point_to_json(x0), "achieved": _rat(max(orbit, ret)),
           "orbit_residual": _rat(orbit), "return_residual": _rat(ret), "chain_bound": _rat(chain),
           "chain_covered": covered, "words": len(words), "residuals": _residual_rows(residuals)}
    return wit, [["picks", "orbit_residual", "return_residual", "orbit_float", "return_float"]] + [
        [d, _rat(o), _rat(r), float(o), float(r)] for d, o, r in residuals]


def run_recurrence(cfg: dict, budget):
    sys_ = system_from_json(cfg["system"])
    base = sequence_from_json(cfg["base"])
    x = _point(sys_.space, cfg.get("x"))
    res = find_recurrent_point(sys_, base, x, budget=budget, **_search_args(cfg))
    if isinstance(res, Exhausted):
        return None, res.examined, []
    wit, rows = _recurrence_witness(sys_, res.terms, res.plans, res.x, res.x0)
    return wit, res.examined, rows


def _check_recurrence_with(sys_, cfg: dict, wit: dict) -> None:
    base = sequence_from_json(cfg["base"])
    terms, plans = _prefix_from_witness(base, wit)
    _same("term count", len(terms), int(cfg["terms"]))
    x = _point(sys_.space, cfg.get("x"))
    x0 = _canonical_point(sys_.space, wit["x0"])
    got, _ = _recurrence_witness(sys_, terms, plans, x, x0)
    for key in got:
        _same(key, got[key], wit.get(key))
    target = cfg.get("target")
    if target is not None and rational_from_json(wit["achieved"]) > rational_from_json(target):
        raise VerificationFailed("achieved residual exceeds the configured target")


def check_recurrence(cfg: dict, wit: dict) -> None:
    _check_recurrence_with(system_from_json(cfg["system"]), cfg, wit)


# -- multi-recurrence ---------------------------------------------------------
def _multi_witness(systems, terms, plans, x, x0) -> tuple:
    per, n = _multi_residuals(systems, terms, x0)
    rows = [["picks"] + [f"system_{i + 1}" for i in range(len(systems))]]
    by, orbit = {}, [Fraction(0)] * len(systems)
    for picks, w in constant_words_of_prefix(list(terms), systems[0].k):
        cur = by.setdefault(len(picks), [Fraction(0)] * len(systems))
        for i, s in enumerate(systems):
            cur[i] = max(cur[i], s.space.distance(s.apply(w, x0), x0))
            orbit[i] = max(orbit[i], s.space.distance(s.apply(w, x), x0))
    rows += [[d] + [_rat(v) for v in vals] for d, vals in sorted(by.items())]
    sp = systems[0].space
    wit = {"terms": [word_to_json(t) for t in terms], "plans": [plan_to_json(p) for p in plans],
           "x": sp.point_to_json(x), "x0": sp.point_to_json(x0), "achieved": _rat(max(per)),
           "per_system": [_rat(v) for v in per], "orbit_residuals": [_rat(v) for v in orbit], "words": n}
    return wit, rows


def run_multi(cfg: dict, budget):
    systems = [system_from_json(s) for s in cfg["systems"]]
    base = sequence_from_json(cfg["base"])
    x = _point(systems[0].space, cfg.get("x"))
    res = multiple_recurrence_search(systems, base, budget=budget, x=x, samples=64, **_search_args(cfg))
    if isinstance(res, Exhausted):
        return None, res.examined, []
    wit, rows = _multi_witness(systems, res.terms, res.plans, x, res.x0)
    return wit, res.examined, rows


def check_multi(cfg: dict, wit: dict) -> None:
    systems = [system_from_json(s) for s in cfg["systems"]]
    base = sequence_from_json(cfg["base"])
    terms, plans = _prefix_from_witness(base, wit)
    _same("term count", len(terms), int(cfg["terms"]))
    x = _point(systems[0].space, cfg.get("x"))
    x0 = _canonical_point(systems[0].space, wit["x0"])
    got, _ = _multi_witness(systems, terms, plans, x, x0)
    for key in got:
        _same(key, got[key], wit.get(key))
    target = cfg.get("target")
    if target is not None and rational_from_json(wit["achieved"]) > rational_from_json(target):
        raise VerificationFailed("achieved residual exceeds the configured target")


# -- check-ip -----------------------------------------------------------------
def _ip_witness(cfg: dict) -> tuple:
    space = space_from_json(cfg["space"])
    seq = sequence_from_json(cfg["sequence"])
    net = net_from_json(cfg["net"], space)
    x0 = space.point_from_json(cfg["x0"])
    rep = uniform_ip_check(seq, net, x0, rational_from_json(cfg["eps"]), int(cfg["n0"]), int(cfg["depth"]))
    r_off = None if rep.r_offender is None else {"word": word_to_json(rep.r_offender[0]), "distance": _rat(rep.r_offender[1])}
    ip_off = None if rep.ip_offender is None else {
        "indices": list(rep.ip_offender[0]), "substitutions": [list(s) for s in rep.ip_offender[1]],
        "distance": _rat(rep.ip_offender[2])}
    wit = {"r_limit": rep.r_limit, "uniform_ip": rep.uniform_ip, "agree": rep.agree,
           "r_examined": rep.r_examined, "ip_examined": rep.ip_examined,
           "r_offender": r_off, "ip_offender": ip_off}
    rows = [["route", "converges", "examined"], ["r_limit", rep.r_limit, rep.r_examined],
            ["uniform_ip", rep.uniform_ip, rep.ip_examined]]
    return wit, rows


def run_ip(cfg: dict, budget):
    wit, rows = _ip_witness(cfg)
    return wit, wit["r_examined"] + wit["ip_examined"], rows


def check_ip(cfg: dict, wit: dict) -> None:
    got, _ = _ip_witness(cfg)
    for key in got:
        _same(key, got[key], wit.get(key))


# -- semigroup-run ------------------------------------------------------------
def _semigroup_parts(cfg: dict):
    table = SemigroupTable.from_json(cfg["table"])
    space = space_from_json(cfg["space"])
    base = sequence_from_json(cfg["base"])
    return table, space, base, PhiShift(table, space, base.k, cfg.get("alpha", "1"))


def _carrier_json(v):
    if v is None:
        return None
    if isinstance(v, tuple):
        return list(v)
    return _rat(v) if isinstance(v, Fraction) else v


def _decompositions(table, terms, k) -> list:
    out = []
    for m, u in enumerate(terms, 1):
        bounds = (k(m), k(-m)) if k.kind == TWO_SIDED else (k(m),)
        d = decompose_term(table, u, bounds, k)
        out.append({"a": _carrier_json(d.a), "b": _carrier_json(d.b), "c": _carrier_json(d.c),
                    "constant_positions": list(d.constant_positions), "pos_variables": list(d.pos_variables),
                    "neg_variables": list(d.neg_variables), "checked": d.checked})
    return out


def run_semigroup(cfg: dict, budget):
    table, space, base, sys_ = _semigroup_parts(cfg)
    x = _point(space, cfg.get("x"))
    rep = semigroup_recurrence(table, space, base, budget=budget, x=x, alpha=cfg.get("alpha", "1"),
                               **_search_args(cfg))
    res = rep.result
    if isinstance(res, Exhausted):
        return None, res.examined, []
    wit, rows = _recurrence_witness(sys_, res.terms, res.plans, res.x, res.x0)
    wit["decompositions"] = _decompositions(table, res.terms, base.k)
    return wit, res.examined, rows


def check_semigroup(cfg: dict, wit: dict) -> None:
    table, space, base, sys_ = _semigroup_parts(cfg)
    _check_recurrence_with(sys_, cfg, {k: v for k, v in wit.items() if k != "decompositions"})
    terms = [word_from_json(t, base.k) for t in wit["terms"]]
    _same("decompositions", _decompositions(table, terms, base.k), wit.get("decompositions"))


# -- hindman --------------------------------------------------------------------
def run_hindman(cfg: dict, budget):
    res = hindman_finite_check(int(cfg.get("max_n", 20)), int(cfg.get("colors", 2)))
    wit = {"n_star": res.n_star, "avoiding": list(res.avoiding), "counts": list(res.counts)}
    rows = [["n", "avoiding_colourings"]] + [[n, c] for n, c in enumerate(res.counts, 1)]
    return wit, len(res.counts), rows


def check_hindman(cfg: dict, wit: dict) -> None:
    n_star, avoiding = int(wit["n_star"]), list(wit["avoiding"])
    _same("avoiding length", len(avoiding), n_star - 1)
    if any(c not in (1, 2) for c in avoiding):
        raise VerificationFailed("avoiding colouring uses colours outside 1..2")
    if has_mono_sum(avoiding) is not None:
        raise VerificationFailed(f"colouring has a monochromatic sum {has_mono_sum(avoiding)}")
    counts = [weak_schur_count_avoiding(n) for n in range(1, int(cfg.get("max_n", 20)) + 1)]
    _same("counts", counts, wit["counts"])
    _same("first zero count", counts.index(0) + 1 if 0 in counts else None, n_star)


COMMANDS = {
    "verify-partition": ("partition-config", run_partition, check_partition),
    "find-recurrence": ("recurrence-config", run_recurrence, check_recurrence),
    "multi-recurrence": ("multi-config", run_multi, check_multi),
    "check-ip": ("ip-config", run_ip, check_ip),
    "semigroup-run": ("semigroup-config", run_semigroup, check_semigroup),
    "hindman": (None, run_hindman, check_hindman),
}


# -- certificate plumbing ---------------------------------------------------------
def build_certificate(command: str, cfg: dict, seed: Optional[int]) -> tuple:
    schema, run, _ = COMMANDS[command]
    if schema:
        validate(cfg, schema)
    cfg = dict(cfg)
    budget = budget_from_json(cfg.get("budget"), seed)
    if command != "hindman":
        cfg["budget"] = budget.to_json()
    wit, examined, rows = run(cfg, budget)
    cert = {"schema": _schema_id(command), "command": command, "status": "ok" if wit is not None else "exhausted",
            "config": cfg, "witness": wit, "examined": int(examined), "locwords_version": __version__}
    return seal(cert), rows


def check_certificate(cert) -> None:
    """Raises :class:`VerificationFailed` unless ``cert`` re-verifies from its own data."""
    try:
        validate(cert, "certificate")
    except ConfigError as exc:
        raise VerificationFailed(str(exc)) from None
    if cert["digest"] != digest(cert):
        raise VerificationFailed("digest does not match the certificate body")
    command = cert["command"]
    if cert["schema"] != _schema_id(command):
        raise VerificationFailed(f"schema {cert['schema']!r} does not belong to {command}")
    schema, _, check = COMMANDS[command]
    if (cert["status"] == "ok") != (cert["witness"] is not None):
        raise VerificationFailed("status and witness disagree")
    try:
        if schema:
            validate(cert["config"], schema)
        if cert["witness"] is not None:
            check(cert["config"], cert["witness"])
    except VerificationFailed:
        raise
    except (LocWordsError, KeyError, TypeError, ValueError, AttributeError, IndexError) as exc:
        raise VerificationFailed(f"{type(exc).__name__}: {exc}") from None


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        write_atomic(path, text)
    else:
        sys.stdout.write(text)


def _csv_text(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


# -- subcommands ------------------------------------------------------------------
def cmd_encode(args) -> int:
    codec = make_codec(_codec_spec(args))
    value = parse_rational(args.value) if codec.name == "rational" else int(args.value)
    _emit(canonical_json(word_to_json(codec.encode(value))) + "\n", args.output)
    return EXIT_OK


def cmd_decode(args) -> int:
    codec = make_codec(_codec_spec(args))
    w = word_from_json(args.word, codec.k)
    v = codec.decode(w)
    _emit((format_rational(v) if isinstance(v, Fraction) else str(v)) + "\n", args.output)
    return EXIT_OK


def _codec_spec(args):
    if args.codec == "natural":
        return {"codec": "natural", "base": args.base}
    return args.codec


def cmd_search(args) -> int:
    if args.check:
        return cmd_check(args)
    if args.config is None and args.command != "hindman":
        raise ConfigError("a configuration (path or inline JSON) is required")
    if args.seed is None:
        raise ConfigError("--seed is required for search subcommands")
    cfg = _load_json(args.config) if args.config else {}
    if args.command == "hindman":
        cfg = {"max_n": args.max_n, "colors": 2, **cfg}
    cert, rows = build_certificate(args.command, cfg, args.seed)
    _emit(json.dumps(cert, sort_keys=True, indent=2) + "\n", args.output)
    if args.emit_csv:
        write_atomic(args.emit_csv, _csv_text(rows))
    if cert["status"] == "exhausted":
        print(f"exhausted after {cert['examined']} candidates", file=sys.stderr)
    return EXIT_OK


def cmd_check(args) -> int:
    try:
        try:
            cert = _load_json(args.check)
        except ConfigError as exc:
            raise VerificationFailed(str(exc)) from None
        check_certificate(cert)
        if getattr(args, "command", None) not in (None, "check") and cert.get("command") != args.command:
            raise VerificationFailed(f"certificate is for {cert.get('command')}, not {args.command}")
    except VerificationFailed as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    print(f"ok: {cert['command']} certificate {cert['digest'][:12]} verified")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="locwords", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    for name, fn, helptext in (("encode", cmd_encode, "number -> word"), ("decode", cmd_decode, "word -> number")):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--codec", choices=("rational", "integer", "natural"), default="rational")
        sp.add_argument("--base", type=int, default=2, help="radix for the natural codec")
        sp.add_argument("value" if name == "encode" else "word")
        sp.add_argument("-o", "--output")
        sp.set_defaults(func=fn)

    helps = {
        "verify-partition": "monochromatic substitution or extraction witness",
        "find-recurrence": "recurrent point along an extraction",
        "multi-recurrence": "simultaneous recurrence for commuting systems",
        "check-ip": "compare the limit and uniform IP routes",
        "semigroup-run": "recurrence for a semigroup-indexed translation",
        "hindman": "least N forcing a monochromatic a, b, a+b",
    }
    for name, helptext in helps.items():
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("config", nargs="?", help="JSON file or inline JSON")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--check", metavar="CERT", help="re-verify a certificate instead of searching")
        sp.add_argument("--emit-csv", metavar="PATH", help="write the residual table as CSV")
        sp.add_argument("-o", "--output")
        if name == "hindman":
            sp.add_argument("--max-n", type=int, default=20)
        sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("check", help="re-verify any certificate")
    sp.add_argument("check", metavar="CERT")
    sp.set_defaults(func=cmd_check)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except LocWordsError as exc:
        msg = str(exc)
        name = type(exc).__name__
        print(msg if msg.startswith(name) else f"{name}: {msg}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValueError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
