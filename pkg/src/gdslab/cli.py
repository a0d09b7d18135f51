"""Command-line interface.

Subcommands:

    functors   derived-functor table for A = ⊕ Z/e_i
    dimsub     D(level, ideal) lattice, optionally modulo a denominator
    member     single-word membership test
    verify     run identification checkers for one divisor tuple
    sweep      run checkers over all divisor chains from a pool

Exit codes: 0 success (no FAIL), 1 a checker FAILed, 2 usage or parse
error, 3 internal containment violation (a denominator escaped its
numerator; the witness is printed).

JSON output (``--json``) is canonical: sorted keys, two-space indent,
integers only, so identical invocations are byte-identical.  The env var
GDSLAB_MAX_RANK overrides the sweep rank cap.
"""

import argparse
import json
import os
import sys

from .intlinalg import AbGroup, NotSublattice
from .freering import get_context, membership, parse_ideal_expr, parse_word, validate_divisors
from .nilpotent import SUBGROUP_TAGS, basic_commutators, log_length
from .functors import (
    BoundsRecord,
    ext_basis,
    h5,
    h7,
    l2_ls3,
    l_sp2,
    l_sp3,
    lie3_basis,
    resolution,
    sym_basis,
    tor,
)
from . import dimsub as _dimsub

SCHEMA_VERSION = 1
DEFAULT_SWEEP_RANK = 3
HARD_SWEEP_RANK = 4


def _canonicalize_divisors(values):
    return tuple(sorted(values, key=lambda v: (v != 0, -v)))


def _parse_divisors(text: str, canonicalize: bool) -> tuple:
    try:
        values = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise ValueError(f"could not parse divisor list {text!r}")
    if canonicalize:
        values = _canonicalize_divisors(values)
    return validate_divisors(values)


def _group_json(value):
    if isinstance(value, AbGroup):
        return value.to_list()
    if isinstance(value, BoundsRecord):
        out = {
            "sub": value.sub.to_list(),
            "quo": value.quo.to_list(),
            "order": value.order,
            "extension": value.extension,
        }
        if value.uncomputed:
            out["uncomputed"] = list(value.uncomputed)
        return out
    raise TypeError(f"unexpected group value {value!r}")


def cmd_functors(divisors: tuple) -> dict:
    m = len(divisors)
    group = AbGroup(divisors)
    res = resolution(divisors)
    _sp2_a, l1sp2 = l_sp2(res)
    _sp3_a, l1sp3, l2sp3 = l_sp3(res)
    result = {
        "group": group.to_list(),
        "free_cover": {
            "SP2": len(sym_basis(m, 2)),
            "SP3": len(sym_basis(m, 3)),
            "Lambda2": len(ext_basis(m, 2)),
            "Lambda3": len(ext_basis(m, 3)),
            "Lie3": len(lie3_basis(m)),
        },
        "L1SP2": l1sp2.to_list(),
        "L1SP3": l1sp3.to_list(),
        "L2SP3": l2sp3.to_list(),
        "L2Ls3": l2_ls3(res).to_list(),
        "TorZ2": tor(group, AbGroup((2,))).to_list(),
        "TorZ3": tor(group, AbGroup((3,))).to_list(),
        "H5": _group_json(h5(group)),
        "H7": _group_json(h7(group)),
    }
    return result


def cmd_dimsub(divisors: tuple, ideal: str, level: int, denominator=None) -> dict:
    p = _dimsub.problem(divisors, ideal, level)
    lat = _dimsub.dimension_lattice(p)
    m = len(divisors)
    basis = basic_commutators(m)
    labels = basis.labels()[: log_length(m, level)]
    result = {
        "ideal": str(parse_ideal_expr(ideal)),
        "level": level,
        "basis": list(labels),
        "lattice": [list(r) for r in lat.rows],
    }
    if denominator is not None:
        result["denominator"] = denominator
        result["quotient"] = _dimsub.quotient(p, denominator).to_list()
    return result


def cmd_member(divisors: tuple, word_text: str, ideal: str, level: int) -> dict:
    if level not in (3, 4):
        raise ValueError("level must be 3 or 4")
    ctx = get_context(len(divisors), level)
    word = parse_word(word_text)
    return {
        "word": word_text,
        "ideal": str(parse_ideal_expr(ideal)),
        "level": level,
        "member": membership(ctx, divisors, word, ideal),
    }


def _select_theorems(spec: str) -> tuple:
    if spec == "all":
        return _dimsub.THEOREM_IDS
    ids = tuple(s.strip() for s in spec.split(","))
    for tid in ids:
        if tid not in _dimsub.THEOREM_IDS:
            raise ValueError(f"unknown theorem id {tid!r}")
    return ids


def cmd_verify(theorems: tuple, divisors: tuple) -> tuple[list, dict]:
    results = []
    summary = {"PASS": 0, "FAIL": 0, "SKIPPED": 0}
    for tid in theorems:
        report = _dimsub.verify_theorem(tid, divisors)
        summary[report.status] += 1
        results.append(report.as_dict())
    return results, summary


def divisor_chains(pool, max_rank: int) -> tuple:
    """All divisibility chains over the pool, deterministically ordered."""
    values = sorted(set(int(v) for v in pool), reverse=True)
    chains = []

    def extend(chain):
        if chain:
            chains.append(tuple(chain))
        if len(chain) == max_rank:
            return
        for v in values:
            if not chain:
                extend(chain + [v])
            elif (v == 0 and chain[-1] == 0) or (v != 0 and chain[-1] % v == 0):
                extend(chain + [v])

    extend([])
    return tuple(sorted(chains, key=lambda c: (len(c), c)))


def cmd_sweep(pool, max_rank: int, theorems: tuple) -> tuple[list, dict]:
    results = []
    summary = {"PASS": 0, "FAIL": 0, "SKIPPED": 0, "tuples": 0}
    for chain in divisor_chains(pool, max_rank):
        summary["tuples"] += 1
        for tid in theorems:
            report = _dimsub.verify_theorem(tid, chain)
            summary[report.status] += 1
            results.append(report.as_dict())
    return results, summary


# --------------------------------------------------------------------------
# Document assembly and rendering


def _document(invocation: dict, results, summary=None) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "invocation": invocation,
        "results": results,
    }
    if summary is not None:
        doc["summary"] = summary
    return doc


def _render_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _render_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(_render_value(v) for v in value) + "]"
    if isinstance(value, dict):
        inner = " ".join(f"{k}={_render_value(value[k])}" for k in sorted(value))
        return "{" + inner + "}"
    return str(value)


def _render_text(doc: dict) -> str:
    lines = []
    for result in doc["results"]:
        parts = []
        for key in sorted(result):
            parts.append(f"{key}={_render_value(result[key])}")
        lines.append("  ".join(parts))
    if "summary" in doc:
        summary = doc["summary"]
        lines.append(
            "summary: " + " ".join(f"{k}={summary[k]}" for k in sorted(summary))
        )
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gdslab",
        description="Exact generalized dimension subgroup computations "
        "in truncated free group rings.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, divisors=True):
        if divisors:
            p.add_argument("--divisors", required=True, help="comma list e1,...,em")
            p.add_argument(
                "--canonicalize",
                action="store_true",
                help="sort the divisors into chain order before validating",
            )
        p.add_argument("--json", action="store_true", help="canonical JSON output")

    p = sub.add_parser("functors", help="derived-functor table for ⊕ Z/e_i")
    add_common(p)

    p = sub.add_parser("dimsub", help="D(level, ideal) lattice and quotients")
    add_common(p)
    p.add_argument("--ideal", required=True, help="ideal expression, e.g. 'f*r*f'")
    p.add_argument("--level", required=True, type=int, choices=(3, 4))
    p.add_argument(
        "--mod",
        default=None,
        choices=SUBGROUP_TAGS,
        help="denominator subgroup for the quotient",
    )

    p = sub.add_parser("member", help="test one word against 1 + a + f^level")
    add_common(p)
    p.add_argument("--word", required=True, help="group word, e.g. '[x2,x1]^9'")
    p.add_argument("--ideal", required=True)
    p.add_argument("--level", required=True, type=int, choices=(3, 4))

    p = sub.add_parser("verify", help="run identification checkers")
    add_common(p)
    p.add_argument(
        "--theorem",
        required=True,
        help="'all' or a comma list of ids: " + ",".join(_dimsub.THEOREM_IDS),
    )

    p = sub.add_parser("sweep", help="run checkers over all chains from a pool")
    add_common(p, divisors=False)
    p.add_argument("--pool", required=True, help="comma list of candidate divisors")
    p.add_argument("--max-rank", type=int, default=DEFAULT_SWEEP_RANK)
    p.add_argument("--theorem", default="all")
    return parser


def _dispatch(args) -> tuple[dict, int]:
    if args.command == "functors":
        divisors = _parse_divisors(args.divisors, args.canonicalize)
        invocation = {"command": "functors", "divisors": list(divisors)}
        return _document(invocation, [cmd_functors(divisors)]), 0

    if args.command == "dimsub":
        divisors = _parse_divisors(args.divisors, args.canonicalize)
        invocation = {
            "command": "dimsub",
            "divisors": list(divisors),
            "ideal": args.ideal,
            "level": args.level,
            "mod": args.mod,
        }
        result = cmd_dimsub(divisors, args.ideal, args.level, args.mod)
        return _document(invocation, [result]), 0

    if args.command == "member":
        divisors = _parse_divisors(args.divisors, args.canonicalize)
        invocation = {
            "command": "member",
            "divisors": list(divisors),
            "word": args.word,
            "ideal": args.ideal,
            "level": args.level,
        }
        return _document(invocation, [cmd_member(divisors, args.word, args.ideal, args.level)]), 0

    if args.command == "verify":
        divisors = _parse_divisors(args.divisors, args.canonicalize)
        theorems = _select_theorems(args.theorem)
        invocation = {
            "command": "verify",
            "divisors": list(divisors),
            "theorems": list(theorems),
        }
        results, summary = cmd_verify(theorems, divisors)
        code = 1 if summary["FAIL"] else 0
        return _document(invocation, results, summary), code

    if args.command == "sweep":
        try:
            pool = [int(v) for v in args.pool.split(",")]
        except ValueError:
            raise ValueError(f"could not parse pool {args.pool!r}")
        if not pool:
            raise ValueError("pool is empty")
        cap = HARD_SWEEP_RANK
        env_cap = os.environ.get("GDSLAB_MAX_RANK")
        if env_cap is not None:
            cap = int(env_cap)
        if args.max_rank < 1:
            raise ValueError("max rank must be at least 1")
        if args.max_rank > cap:
            raise ValueError(f"max rank {args.max_rank} exceeds the cap {cap}")
        if args.max_rank > DEFAULT_SWEEP_RANK:
            print(
                f"warning: sweep at rank {args.max_rank} may be slow",
                file=sys.stderr,
            )
        theorems = _select_theorems(args.theorem)
        invocation = {
            "command": "sweep",
            "pool": sorted(set(pool)),
            "max_rank": args.max_rank,
            "theorems": list(theorems),
        }
        results, summary = cmd_sweep(pool, args.max_rank, theorems)
        code = 1 if summary["FAIL"] else 0
        return _document(invocation, results, summary), code

    raise ValueError(f"unknown command {args.command!r}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        doc, code = _dispatch(args)
    except NotSublattice as exc:
        print(f"containment violation: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    rendered = _render_json(doc) if args.json else _render_text(doc)
    sys.stdout.write(rendered)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
