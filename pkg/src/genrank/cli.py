"""Command line interface.

Subcommands: rank (maximal irredundant size), mu (maximal Nielsen
irredundant size), witness (find or rule out a size), zdemo (integer
witness family), certify (density certificates for rational tuples),
product-check (generation in a product of two simple groups), orbit
(Nielsen orbit statistics at one size).

Exit codes: 0 success, 2 budget-limited or non-exhaustive result,
3 density not certified, 4 cross-prime evidence mixed or undecided,
64 usage errors, 65 data or unsupported-input errors.

Output is a structured payload rendered either as an indented table or
as JSON.  The payload carries no wall-clock fields, so repeated runs
with the same inputs and seed are reproducible bytewise.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from fractions import Fraction

from .arithmetic import (DenominatorClash, PlanConfig, RationalMatrix,
                         RationalTuple, assess_irredundancy,
                         assess_nielsen_irredundancy, certify_density,
                         DensityCertificate, replay_certificate,
                         serialize_certificate)
from .fp import FpMatrix, ProjectiveMatrix, is_prime, projective_canonicalize
from .groups import (CayleyTableGroup, CyclicPower, GeneratingTuple, GroupSpec,
                     Integers, ProductGroup, ProjSpecialLinear, SpecialLinear,
                     product_generates)
from .nielsen import mu_rank, orbit_statistics
from .redundancy import (SearchLimits, irredundant_witness, is_redundant,
                         max_irredundant_size, z_witness)

EXIT_OK = 0
EXIT_BUDGET = 2
EXIT_NOT_CERTIFIED = 3
EXIT_EVIDENCE_MIXED = 4
EXIT_USAGE = 64
EXIT_DATA = 65


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


_SL_RE = re.compile(r"^(p?sl)(\d+):(\d+)$")
_CYC_RE = re.compile(r"^cyclic:(\d+)\^(\d+)$")


def _split_top_level(s: str) -> list:
    parts = []
    depth = 0
    cur = []
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise UsageError("unbalanced parentheses in group descriptor")
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth != 0:
        raise UsageError("unbalanced parentheses in group descriptor")
    parts.append("".join(cur))
    return parts


def parse_group(desc: str) -> GroupSpec:
    """Grammar: z | sl<n>:<p> | psl<n>:<p> | cyclic:<m>^<k> |
    prod(<desc>,<desc>).  Grammar violations are usage errors;
    well-formed descriptors with bad numbers are data errors."""
    desc = desc.strip()
    if desc == "z":
        return Integers()
    m = _SL_RE.match(desc)
    if m:
        kind, n_s, p_s = m.groups()
        n, p = int(n_s), int(p_s)
        if n < 2:
            raise DataError("matrix dimension must be at least 2")
        if p < 3 or not is_prime(p):
            raise DataError("p must be prime >= 3")
        try:
            return SpecialLinear(n, p) if kind == "sl" else ProjSpecialLinear(n, p)
        except ValueError as exc:
            raise DataError(str(exc))
    m = _CYC_RE.match(desc)
    if m:
        mod, k = int(m.group(1)), int(m.group(2))
        try:
            return CyclicPower(mod, k)
        except ValueError as exc:
            raise DataError(str(exc))
    if desc.startswith("prod(") and desc.endswith(")"):
        parts = _split_top_level(desc[5:-1])
        if len(parts) != 2:
            raise UsageError("prod(...) takes exactly two factors")
        try:
            return ProductGroup(tuple(parse_group(part) for part in parts))
        except ValueError as exc:
            raise DataError(str(exc))
    raise UsageError(f"cannot parse group descriptor {desc!r}")


def describe_element(spec: GroupSpec, x):
    if isinstance(spec, ProductGroup):
        return [describe_element(f, v) for f, v in zip(spec.factors, x)]
    if isinstance(spec, SpecialLinear):
        return [list(r) for r in x.rows()]
    if isinstance(spec, ProjSpecialLinear):
        return [list(r) for r in x.rep.rows()]
    if isinstance(spec, CyclicPower):
        return list(x)
    return x


def _witness_payload(witness: GeneratingTuple | None):
    if witness is None:
        return None
    return [describe_element(witness.group, x) for x in witness.items]


def _stats_payload(stats: dict) -> dict:
    out = {}
    for k, v in stats.items():
        if k in ("elapsed", "classes"):
            continue
        out[k] = v
    return out


# ---------------------------------------------------------------------------
# Input files.
# ---------------------------------------------------------------------------

def _read_lines(path: str) -> list:
    try:
        with open(path) as fh:
            raw = fh.read()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}")
    lines = []
    for line in raw.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    return lines


def read_rational_tuple(path: str) -> RationalTuple:
    """File format: a header line "sl <n>", then one matrix per line as
    n*n rationals (like 2 or -1/3) row-major, whitespace separated."""
    lines = _read_lines(path)
    if not lines:
        raise DataError("input file is empty")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "sl":
        raise DataError('the header must be "sl <n>"')
    try:
        dim = int(head[1])
    except ValueError:
        raise DataError('the header must be "sl <n>"')
    if dim < 2:
        raise DataError("matrix dimension must be at least 2")
    mats = []
    for line in lines[1:]:
        fields = line.split()
        if len(fields) != dim * dim:
            raise DataError(f"expected {dim * dim} entries per matrix line")
        try:
            entries = tuple(Fraction(f) for f in fields)
        except (ValueError, ZeroDivisionError) as exc:
            raise DataError(f"bad rational entry: {exc}")
        try:
            mats.append(RationalMatrix(dim, entries))
        except ValueError as exc:
            raise DataError(str(exc))
    if not mats:
        raise DataError("no matrices in the input file")
    return RationalTuple(tuple(mats))


def _parse_factor_element(spec: GroupSpec, fields: list):
    if not isinstance(spec, (SpecialLinear, ProjSpecialLinear)):
        raise DataError("product factors must be sl or psl groups")
    n, p = spec.n, spec.p
    if len(fields) != n * n:
        raise DataError(f"expected {n * n} entries for a {spec.descriptor()} element")
    try:
        vals = [int(f) % p for f in fields]
    except ValueError:
        raise DataError("factor entries must be integers")
    m = FpMatrix(p, n, tuple(vals))
    if m.det() != 1:
        raise DataError("factor entry has determinant != 1 mod p")
    if isinstance(spec, ProjSpecialLinear):
        return projective_canonicalize(m)
    return m


def read_product_tuple(path: str) -> GeneratingTuple:
    """File format: a header "prod <desc1> <desc2>", then one tuple
    entry per line as the two factor matrices' integer entries mod p,
    separated by a | character."""
    lines = _read_lines(path)
    if not lines:
        raise DataError("input file is empty")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "prod":
        raise DataError('the header must be "prod <desc1> <desc2>"')
    f1 = parse_group(head[1])
    f2 = parse_group(head[2])
    group = ProductGroup((f1, f2))
    items = []
    for line in lines[1:]:
        halves = line.split("|")
        if len(halves) != 2:
            raise DataError("each entry line needs exactly one | separator")
        left = _parse_factor_element(f1, halves[0].split())
        right = _parse_factor_element(f2, halves[1].split())
        items.append((left, right))
    if not items:
        raise DataError("no tuple entries in the input file")
    return GeneratingTuple(group, tuple(items))


# ---------------------------------------------------------------------------
# Rendering.
# ---------------------------------------------------------------------------

def _render_lines(value, indent: int = 0, out=None) -> list:
    if out is None:
        out = []
    pad = "  " * indent
    if isinstance(value, dict):
        for k in value:
            v = value[k]
            if isinstance(v, (dict, list)) and v:
                out.append(f"{pad}{k}:")
                _render_lines(v, indent + 1, out)
            else:
                out.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, (dict, list)):
                out.append(f"{pad}-")
                _render_lines(item, indent + 1, out)
            else:
                out.append(f"{pad}- {_scalar(item)}")
    else:
        out.append(f"{pad}{_scalar(value)}")
    return out


def _scalar(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, list):
        return "[]"
    if isinstance(v, dict):
        return "{}"
    return str(v)


def emit(payload: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print("\n".join(_render_lines(payload)))


# ---------------------------------------------------------------------------
# Commands.
# ---------------------------------------------------------------------------

def _limits(args) -> SearchLimits:
    return SearchLimits(node_budget=args.node_budget,
                        time_budget=args.time_budget)


def _cmd_rank(args):
    spec = parse_group(args.group)
    res = max_irredundant_size(spec, limits=_limits(args), seed=args.seed)
    payload = {
        "command": "rank",
        "group": spec.descriptor(),
        "rank": "m",
        "value": res.value,
        "witness": _witness_payload(res.witness),
        "exhaustive": res.exhaustive,
        "notes": list(res.notes),
        "stats": _stats_payload(res.stats),
        "seed": args.seed,
        "threads": args.threads,
    }
    return payload, EXIT_OK if res.exhaustive else EXIT_BUDGET


def _cmd_mu(args):
    spec = parse_group(args.group)
    res = mu_rank(spec, limits=_limits(args))
    payload = {
        "command": "mu",
        "group": spec.descriptor(),
        "rank": "mu",
        "value": res.value,
        "witness": _witness_payload(res.witness),
        "exhaustive": res.exhaustive,
        "notes": list(res.notes),
        "stats": _stats_payload(res.stats),
        "seed": args.seed,
        "threads": args.threads,
    }
    return payload, EXIT_OK if res.exhaustive else EXIT_BUDGET


def _cmd_witness(args):
    spec = parse_group(args.group)
    res = irredundant_witness(spec, args.size,
                              involutions_only=args.involutions,
                              limits=_limits(args), seed=args.seed)
    payload = {
        "command": "witness",
        "group": spec.descriptor(),
        "size": args.size,
        "witness": _witness_payload(res.witness),
        "exhausted": res.exhausted,
        "notes": list(res.notes),
        "stats": _stats_payload(res.stats),
        "seed": args.seed,
    }
    undecided = res.witness is None and not res.exhausted
    return payload, EXIT_BUDGET if undecided else EXIT_OK


def _cmd_zdemo(args):
    if args.size < 1:
        raise DataError("size must be positive")
    w = z_witness(args.size)
    report = is_redundant(w)
    drops = []
    for i in range(len(w)):
        rest = w.without(i)
        g = math.gcd(*(abs(v) for v in rest.items)) if rest.items else 0
        drops.append({"index": i, "generates_without": report.droppable[i],
                      "gcd_without": g})
    payload = {
        "command": "zdemo",
        "group": "z",
        "size": args.size,
        "witness": list(w.items),
        "verdict": report.verdict,
        "drop_checks": drops,
    }
    return payload, EXIT_OK


def _cmd_certify(args):
    if args.replay:
        with open(args.input) as fh:
            stored = fh.read().strip()
        ok, detail = replay_certificate(stored)
        payload = {"command": "certify", "mode": "replay",
                   "match": ok, "detail": detail}
        return payload, EXIT_OK if ok else EXIT_DATA
    t = read_rational_tuple(args.input)
    explicit = tuple(args.primes) if args.primes else None
    config = PlanConfig(exceptional_floor=args.exceptional_floor,
                        max_primes=args.max_primes,
                        explicit_primes=explicit)
    try:
        result = certify_density(t, config)
    except DenominatorClash as exc:
        raise DataError(str(exc))
    serialized = serialize_certificate(result)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(serialized + "\n")
    certified = isinstance(result, DensityCertificate)
    payload = {
        "command": "certify",
        "mode": "certify",
        "certified": certified,
        "certificate": json.loads(serialized),
        "written_to": args.out,
    }
    code = EXIT_OK if certified else EXIT_NOT_CERTIFIED
    if args.irredundancy:
        ev = assess_irredundancy(t, prime_count=args.irredundancy, config=config)
        payload["irredundancy"] = {
            "summary": ev.summary,
            "records": [{"prime": r.prime, "generates": r.generates,
                         "verdict": r.verdict, "droppable": list(r.droppable)}
                        for r in ev.records],
        }
        if certified and ev.summary in ("mixed",):
            code = EXIT_EVIDENCE_MIXED
    if args.nielsen:
        ev = assess_nielsen_irredundancy(t, prime_count=args.nielsen,
                                         config=config, limits=_limits(args))
        payload["nielsen"] = {
            "summary": ev.summary,
            "records": [{"prime": r.prime, "verdict": r.verdict,
                         "visited": r.visited} for r in ev.records],
        }
        if certified and code == EXIT_OK and ev.summary in ("mixed", "undecided"):
            code = EXIT_EVIDENCE_MIXED
    return payload, code


def _cmd_product_check(args):
    t = read_product_tuple(args.input)
    try:
        report = product_generates(t)
    except ValueError as exc:
        raise DataError(str(exc))
    payload = {
        "command": "product-check",
        "group": t.group.descriptor(),
        "tuple_length": len(t),
        "generates": report.generates,
        "diagnosis": report.diagnosis,
    }
    return payload, EXIT_OK


def _cmd_orbit(args):
    spec = parse_group(args.group)
    try:
        stats = orbit_statistics(spec, args.size, limits=_limits(args))
    except ValueError as exc:
        raise DataError(str(exc))
    payload = {
        "command": "orbit",
        "group": spec.descriptor(),
        "size": args.size,
        "generating_classes": stats.generating_classes,
        "orbit_count": stats.orbit_count,
        "orbit_sizes": list(stats.orbit_sizes),
        "orbits_with_redundant": stats.orbits_with_redundant,
        "fraction_with_redundant": stats.fraction_with_redundant,
        "partial": stats.partial,
        "notes": list(stats.notes),
    }
    return payload, EXIT_BUDGET if stats.partial else EXIT_OK


def build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1,
                        help="accepted for interface stability; runs sequentially")
    common.add_argument("--node-budget", type=int, default=100_000_000)
    common.add_argument("--time-budget", type=float, default=600.0)
    common.add_argument("--format", choices=("table", "json"), default="table")

    parser = _Parser(prog="genrank",
                     description="irredundant generating sets and density certificates")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("rank", parents=[common],
                       help="maximal irredundant generating size")
    p.add_argument("group")
    p.set_defaults(func=_cmd_rank)

    p = sub.add_parser("mu", parents=[common],
                       help="maximal Nielsen-irredundant generating size")
    p.add_argument("group")
    p.set_defaults(func=_cmd_mu)

    p = sub.add_parser("witness", parents=[common],
                       help="find or rule out an irredundant generating set of a size")
    p.add_argument("group")
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--involutions", action="store_true")
    p.set_defaults(func=_cmd_witness)

    p = sub.add_parser("zdemo", parents=[common],
                       help="integer witness family with drop checks")
    p.add_argument("size", type=int)
    p.set_defaults(func=_cmd_zdemo)

    p = sub.add_parser("certify", parents=[common],
                       help="density certificate for a rational tuple file")
    p.add_argument("input")
    p.add_argument("--out")
    p.add_argument("--primes", type=int, nargs="+")
    p.add_argument("--exceptional-floor", type=int, default=3)
    p.add_argument("--max-primes", type=int, default=10)
    p.add_argument("--irredundancy", type=int, metavar="K")
    p.add_argument("--nielsen", type=int, metavar="K")
    p.add_argument("--replay", action="store_true",
                   help="treat the input as a stored certificate and re-run it")
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("product-check", parents=[common],
                       help="generation in a product of two simple groups")
    p.add_argument("input")
    p.set_defaults(func=_cmd_product_check)

    p = sub.add_parser("orbit", parents=[common],
                       help="Nielsen orbit statistics at one tuple size")
    p.add_argument("group")
    p.add_argument("--size", type=int, required=True)
    p.set_defaults(func=_cmd_orbit)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        payload, code = args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except DenominatorClash as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    emit(payload, args.format)
    return code


def entry() -> None:
    sys.exit(main())
