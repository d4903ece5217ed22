"""Exact rational matrix tuples and their reductions modulo primes.

A tuple of determinant-one matrices over the rationals generates a
subgroup of SL_n(Q); if some reduction modulo a good prime generates
the full finite group SL_n(F_p), the subgroup is Zariski dense.  This
module plans usable primes (skipping denominator primes and a
configurable exceptional floor), certifies density with replayable
evidence, and collects per-prime irredundancy and Nielsen evidence for
the rational tuple.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction

from .fp import FpMatrix, is_prime
from .groups import (GeneratingTuple, SpecialLinear, closure, is_generating,
                     sl2_generation_report)
from .nielsen import NielsenMove, SearchLimits, is_nielsen_redundant
from .redundancy import is_redundant

SCHEMA_VERSION = 1


class DenominatorClash(ValueError):
    """Reduction modulo p is undefined: p divides some denominator."""

    def __init__(self, prime: int):
        super().__init__(f"prime {prime} divides a denominator of the tuple")
        self.prime = prime


def _as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    raise ValueError(f"entries must be rational, got {type(v).__name__}")


def _prime_factors(n: int) -> list:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class RationalMatrix:
    """A square matrix of exact rationals with determinant one."""

    dim: int
    entries: tuple

    def __post_init__(self):
        if self.dim < 1 or len(self.entries) != self.dim * self.dim:
            raise ValueError("entry count must match the dimension")
        if any(not isinstance(v, Fraction) for v in self.entries):
            raise ValueError("entries must be Fractions; use from_rows to coerce")
        if self.det() != 1:
            raise ValueError("determinant is not 1")

    @classmethod
    def from_rows(cls, rows) -> "RationalMatrix":
        dim = len(rows)
        flat = []
        for row in rows:
            if len(row) != dim:
                raise ValueError("matrix must be square")
            flat.extend(_as_fraction(v) for v in row)
        return cls(dim, tuple(flat))

    @classmethod
    def identity(cls, dim: int) -> "RationalMatrix":
        return cls.from_rows([[1 if i == j else 0 for j in range(dim)]
                              for i in range(dim)])

    def rows(self):
        n = self.dim
        return tuple(self.entries[i * n:(i + 1) * n] for i in range(n))

    def det(self) -> Fraction:
        n = self.dim
        a = [list(row) for row in
             (self.entries[i * n:(i + 1) * n] for i in range(n))]
        det = Fraction(1)
        for col in range(n):
            pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
            if pivot is None:
                return Fraction(0)
            if pivot != col:
                a[col], a[pivot] = a[pivot], a[col]
                det = -det
            det *= a[col][col]
            inv = 1 / a[col][col]
            for r in range(col + 1, n):
                factor = a[r][col] * inv
                if factor:
                    for c in range(col, n):
                        a[r][c] -= factor * a[col][c]
        return det

    def __mul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        n = self.dim
        out = []
        for i in range(n):
            for j in range(n):
                out.append(sum((self.entries[i * n + k] * other.entries[k * n + j]
                                for k in range(n)), Fraction(0)))
        return RationalMatrix(n, tuple(out))

    def inverse(self) -> "RationalMatrix":
        n = self.dim
        a = [list(self.entries[i * n:(i + 1) * n]) +
             [Fraction(1 if j == i else 0) for j in range(n)] for i in range(n)]
        for col in range(n):
            pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
            if pivot is None:
                raise ZeroDivisionError("matrix is singular")
            a[col], a[pivot] = a[pivot], a[col]
            inv = 1 / a[col][col]
            a[col] = [v * inv for v in a[col]]
            for r in range(n):
                if r != col and a[r][col]:
                    factor = a[r][col]
                    a[r] = [v - factor * w for v, w in zip(a[r], a[col])]
        flat = []
        for i in range(n):
            flat.extend(a[i][n:])
        return RationalMatrix(n, tuple(flat))

    def is_identity(self) -> bool:
        n = self.dim
        return all(self.entries[i * n + j] == (1 if i == j else 0)
                   for i in range(n) for j in range(n))

    def denominator_primes(self) -> set:
        out = set()
        for v in self.entries:
            if v.denominator > 1:
                out.update(_prime_factors(v.denominator))
        return out

    def entry_strings(self) -> tuple:
        return tuple(str(v) for v in self.entries)


@dataclass(frozen=True)
class RationalTuple:
    """An ordered tuple of determinant-one rational matrices of one
    dimension."""

    matrices: tuple

    def __post_init__(self):
        if not self.matrices:
            raise ValueError("tuple must be nonempty")
        dims = {m.dim for m in self.matrices}
        if len(dims) != 1:
            raise ValueError("all matrices must share one dimension")

    @property
    def dim(self) -> int:
        return self.matrices[0].dim

    def denominator_primes(self) -> tuple:
        out = set()
        for m in self.matrices:
            out.update(m.denominator_primes())
        return tuple(sorted(out))

    def entry_strings(self) -> tuple:
        return tuple(m.entry_strings() for m in self.matrices)

    def fingerprint(self) -> str:
        payload = f"sl{self.dim}|" + "|".join(
            ",".join(strs) for strs in self.entry_strings())
        return hashlib.sha256(payload.encode()).hexdigest()


def reduce_matrix_mod_p(m: RationalMatrix, p: int) -> FpMatrix:
    """Entrywise reduction a/b -> a * b^(-1) mod p; denominators
    divisible by p have no reduction."""
    vals = []
    for v in m.entries:
        if v.denominator % p == 0:
            raise DenominatorClash(p)
        vals.append(v.numerator * pow(v.denominator, p - 2, p) % p)
    out = FpMatrix(p, m.dim, tuple(vals))
    if out.det() != 1:
        raise AssertionError("reduction broke the determinant")
    return out


def reduce_tuple_mod_p(t: RationalTuple, p: int) -> GeneratingTuple:
    spec = SpecialLinear(t.dim, p)
    return GeneratingTuple(spec, tuple(reduce_matrix_mod_p(m, p)
                                       for m in t.matrices))


@dataclass(frozen=True)
class PlanConfig:
    exceptional_floor: int = 3
    max_primes: int = 10
    explicit_primes: tuple | None = None
    closure_evidence_cap: int = 500_000


@dataclass(frozen=True)
class PrimePlan:
    candidates: tuple
    excluded_denominator_primes: tuple
    exceptional_floor: int
    notes: tuple = ()


def plan_primes(t: RationalTuple, config: PlanConfig | None = None) -> PrimePlan:
    """Candidate primes for reduction: the first max_primes primes above
    the exceptional floor that divide no denominator.  Explicit primes
    bypass the floor (with a note) but never the denominator rule."""
    config = config or PlanConfig()
    denoms = t.denominator_primes()
    floor = max(config.exceptional_floor, 3 if t.dim == 2 else 2)
    notes = []
    if floor != config.exceptional_floor:
        notes.append(f"exceptional floor raised to {floor} for dimension {t.dim}")
    if config.explicit_primes is not None:
        chosen = []
        for p in dict.fromkeys(config.explicit_primes):
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
            if p in denoms:
                raise ValueError(f"prime {p} divides a denominator of the tuple")
            if p <= floor:
                notes.append(f"prime {p} is at or below the exceptional floor {floor}")
            chosen.append(p)
        return PrimePlan(tuple(chosen), denoms, floor, tuple(notes))
    out = []
    p = floor + 1
    while len(out) < config.max_primes:
        if is_prime(p) and p not in denoms:
            out.append(p)
        p += 1
    return PrimePlan(tuple(out), denoms, floor, tuple(notes))


@dataclass(frozen=True)
class PerPrimeRecord:
    prime: int
    generates: bool
    diagnosis: str


@dataclass(frozen=True)
class DensityCertificate:
    version: int
    ambient: str
    entries: tuple
    fingerprint: str
    config: PlanConfig
    witness_prime: int
    evidence_kind: str          # "closure-order" or "fast-test"
    closure_order: int | None
    fast_test_reason: str | None
    caveat: str
    per_prime: tuple


@dataclass(frozen=True)
class NotCertifiedReport:
    version: int
    ambient: str
    entries: tuple
    fingerprint: str
    config: PlanConfig
    caveat: str
    per_prime: tuple


def _generation_evidence(gt: GeneratingTuple, cap: int):
    """Generation verdict plus certificate evidence at one prime.
    Small groups get the exact closure order; larger SL2 reductions get
    the structural transcript.  Both agree where both apply."""
    spec = gt.group
    p = spec.p
    structural = None
    if spec.n == 2 and p >= 5:
        structural = sl2_generation_report(gt)
    if spec.order <= cap:
        cl = closure(gt)
        generates = cl.order == spec.order
        diagnosis = "full closure" if generates else f"closure order {cl.order}"
        if structural is not None:
            if structural.generates != generates:
                raise AssertionError(
                    "structural test disagrees with closure enumeration")
            diagnosis = structural.reason
        return generates, "closure-order", cl.order, None, diagnosis
    if structural is None:
        raise ValueError(
            f"sl{spec.n} mod {p} is too large for closure evidence and has no "
            "structural test")
    return (structural.generates, "fast-test", None, structural.reason,
            structural.reason)


def certify_density(t: RationalTuple, config: PlanConfig | None = None):
    """Try planned primes in order; the first generating reduction
    yields a DensityCertificate, otherwise a NotCertifiedReport."""
    config = config or PlanConfig()
    plan = plan_primes(t, config)
    ambient = f"sl{t.dim}"
    per = []
    for p in plan.candidates:
        gt = reduce_tuple_mod_p(t, p)
        generates, kind, clord, reason, diagnosis = _generation_evidence(
            gt, config.closure_evidence_cap)
        per.append(PerPrimeRecord(p, generates, diagnosis))
        if generates:
            caveat = (f"generation of sl{t.dim} mod {p} certifies Zariski "
                      f"density; primes at most {plan.exceptional_floor} were "
                      "treated as potentially exceptional")
            return DensityCertificate(
                SCHEMA_VERSION, ambient, t.entry_strings(), t.fingerprint(),
                config, p, kind, clord, reason, caveat, tuple(per))
    caveat = ("no tried prime yields generation; this is evidence of "
              "non-density, not a proof")
    return NotCertifiedReport(SCHEMA_VERSION, ambient, t.entry_strings(),
                              t.fingerprint(), config, caveat, tuple(per))


def serialize_certificate(obj) -> str:
    """Canonical JSON form shared by certificates and negative reports;
    key order and separators are fixed so replays compare bytewise."""
    certified = isinstance(obj, DensityCertificate)
    payload = {
        "version": obj.version,
        "certified": certified,
        "ambient": obj.ambient,
        "entries": [list(e) for e in obj.entries],
        "fingerprint": obj.fingerprint,
        "config": {
            "exceptional_floor": obj.config.exceptional_floor,
            "max_primes": obj.config.max_primes,
            "closure_evidence_cap": obj.config.closure_evidence_cap,
        },
        "witness_prime": obj.witness_prime if certified else None,
        "evidence_kind": obj.evidence_kind if certified else None,
        "closure_order": obj.closure_order if certified else None,
        "fast_test_reason": obj.fast_test_reason if certified else None,
        "caveat": obj.caveat,
        "per_prime": [{"prime": r.prime, "generates": r.generates,
                       "diagnosis": r.diagnosis} for r in obj.per_prime],
    }
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def tuple_from_entry_strings(entries) -> RationalTuple:
    mats = []
    for strs in entries:
        dim = int(round(len(strs) ** 0.5))
        if dim * dim != len(strs):
            raise ValueError("entry count is not a square")
        mats.append(RationalMatrix(dim, tuple(Fraction(s) for s in strs)))
    return RationalTuple(tuple(mats))


def deserialize_certificate(s: str):
    payload = json.loads(s)
    if payload.get("version") != SCHEMA_VERSION:
        raise ValueError("unsupported certificate version")
    config = PlanConfig(
        exceptional_floor=payload["config"]["exceptional_floor"],
        max_primes=payload["config"]["max_primes"],
        closure_evidence_cap=payload["config"]["closure_evidence_cap"])
    entries = tuple(tuple(e) for e in payload["entries"])
    per = tuple(PerPrimeRecord(r["prime"], r["generates"], r["diagnosis"])
                for r in payload["per_prime"])
    if payload["certified"]:
        return DensityCertificate(
            payload["version"], payload["ambient"], entries,
            payload["fingerprint"], config, payload["witness_prime"],
            payload["evidence_kind"], payload["closure_order"],
            payload["fast_test_reason"], payload["caveat"], per)
    return NotCertifiedReport(payload["version"], payload["ambient"], entries,
                              payload["fingerprint"], config, payload["caveat"],
                              per)


def replay_certificate(s: str):
    """Re-run the serialized evidence from scratch and compare bytewise.
    The tried primes are replayed explicitly so the run revisits the
    same reductions in the same order."""
    obj = deserialize_certificate(s)
    t = tuple_from_entry_strings(obj.entries)
    if t.fingerprint() != obj.fingerprint:
        return False, "fingerprint mismatch: entries were altered"
    primes = tuple(r.prime for r in obj.per_prime)
    config = PlanConfig(exceptional_floor=obj.config.exceptional_floor,
                        max_primes=obj.config.max_primes,
                        explicit_primes=primes,
                        closure_evidence_cap=obj.config.closure_evidence_cap)
    fresh = serialize_certificate(certify_density(t, config))
    if fresh == s:
        return True, "replay reproduced the certificate bytewise"
    return False, "replay diverged from the stored certificate"


# ---------------------------------------------------------------------------
# Per-prime irredundancy and Nielsen evidence for rational tuples.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PrimeIrredundancyRecord:
    prime: int
    generates: bool
    verdict: str
    droppable: tuple


@dataclass(frozen=True)
class IrredundancyEvidence:
    fingerprint: str
    records: tuple
    summary: str


def assess_irredundancy(t: RationalTuple, prime_count: int = 5,
                        config: PlanConfig | None = None) -> IrredundancyEvidence:
    """Redundancy verdicts of the reductions at the first usable
    primes.  The summary is all-irredundant, all-redundant, mixed, or
    never-generating, judged over the generating primes only."""
    base = config or PlanConfig()
    plan = plan_primes(t, PlanConfig(base.exceptional_floor, prime_count,
                                     base.explicit_primes,
                                     base.closure_evidence_cap))
    records = []
    for p in plan.candidates:
        rep = is_redundant(reduce_tuple_mod_p(t, p))
        records.append(PrimeIrredundancyRecord(p, rep.generates, rep.verdict,
                                               rep.droppable))
    gen = [r for r in records if r.generates]
    if not gen:
        summary = "never-generating"
    elif all(r.verdict == "IrredundantGenerating" for r in gen):
        summary = "all-irredundant"
    elif all(r.verdict == "RedundantGenerating" for r in gen):
        summary = "all-redundant"
    else:
        summary = "mixed"
    return IrredundancyEvidence(t.fingerprint(), tuple(records), summary)


@dataclass(frozen=True)
class PrimeNielsenRecord:
    prime: int
    verdict: str
    visited: int


@dataclass(frozen=True)
class NielsenEvidence:
    fingerprint: str
    records: tuple
    summary: str


def assess_nielsen_irredundancy(t: RationalTuple, prime_count: int = 3,
                                config: PlanConfig | None = None,
                                limits: SearchLimits | None = None) -> NielsenEvidence:
    """Nielsen orbit verdicts of the reductions at the first usable
    primes.  Budget-limited walks report Unknown and taint the summary
    as undecided rather than guessing."""
    base = config or PlanConfig()
    plan = plan_primes(t, PlanConfig(base.exceptional_floor, prime_count,
                                     base.explicit_primes,
                                     base.closure_evidence_cap))
    limits = limits or SearchLimits(node_budget=200_000, time_budget=60.0)
    records = []
    for p in plan.candidates:
        gt = reduce_tuple_mod_p(t, p)
        if not is_generating(gt):
            records.append(PrimeNielsenRecord(p, "NotGenerating", 0))
            continue
        rep = is_nielsen_redundant(gt, limits)
        records.append(PrimeNielsenRecord(p, rep.verdict, rep.visited))
    decided = [r for r in records if r.verdict in ("NielsenRedundant",
                                                   "NielsenIrredundant")]
    if any(r.verdict == "Unknown" for r in records):
        summary = "undecided"
    elif not decided:
        summary = "never-generating"
    elif all(r.verdict == "NielsenIrredundant" for r in decided):
        summary = "all-nielsen-irredundant"
    elif all(r.verdict == "NielsenRedundant" for r in decided):
        summary = "all-nielsen-redundant"
    else:
        summary = "mixed"
    return NielsenEvidence(t.fingerprint(), tuple(records), summary)


def apply_move_rational(t: RationalTuple, mv: NielsenMove) -> RationalTuple:
    """The Nielsen move acting on exact rational matrices; reduction
    modulo any usable prime commutes with it."""
    items = list(t.matrices)
    n = len(items)
    if mv.i >= n or (mv.kind in ("L", "R", "S") and mv.j >= n):
        raise ValueError("move index exceeds tuple length")
    if mv.kind == "I":
        items[mv.i] = items[mv.i].inverse()
    elif mv.kind == "S":
        items[mv.i], items[mv.j] = items[mv.j], items[mv.i]
    else:
        other = items[mv.j] if mv.sign > 0 else items[mv.j].inverse()
        if mv.kind == "L":
            items[mv.i] = other * items[mv.i]
        else:
            items[mv.i] = items[mv.i] * other
    return RationalTuple(tuple(items))
