"""Nielsen transformations on generating tuples and the maximal
Nielsen-irredundant size.

A Nielsen move multiplies one entry by another entry or its inverse (on
either side), inverts an entry, or swaps two entries.  Moves are
invertible and fix the generated subgroup, so they act on the
generating tuples of one length.  A generating tuple is Nielsen
redundant when some move sequence reaches a tuple with a droppable
entry, and Nielsen irredundant otherwise; the rank mu is the largest
size carrying a Nielsen-irredundant generating tuple.

Orbit walks run on canonical forms under simultaneous conjugation:
conjugation commutes with every move entrywise, so a recorded move path
replayed from the original tuple reaches a conjugate of the stored
endpoint, and droppability verdicts transfer along conjugation.  A
Nielsen-irredundant tuple is in particular irredundant (the empty move
sequence), so at each size only the orbits of irredundant generating
classes have to be inspected, and a redundant member anywhere in an
orbit settles that whole orbit.
"""

from __future__ import annotations

import itertools
import time
from collections import deque
from dataclasses import dataclass

from .groups import GeneratingTuple, GroupSpec, Integers, CyclicPower, is_generating
from .indexed import MAX_INDEXED_ORDER, IndexedGroup
from .redundancy import (RankSearchResult, SearchLimits, is_redundant,
                         max_irredundant_size)

_MOVE_KINDS = ("L", "R", "I", "S")


@dataclass(frozen=True)
class NielsenMove:
    """One elementary move: L multiplies entry i on the left by entry j
    (sign -1 uses the inverse of entry j), R on the right, I inverts
    entry i, S swaps entries i and j."""

    kind: str
    i: int
    j: int = -1
    sign: int = 1

    def __post_init__(self):
        if self.kind not in _MOVE_KINDS:
            raise ValueError(f"unknown move kind {self.kind!r}")
        if self.i < 0:
            raise ValueError("index out of range")
        if self.kind in ("L", "R", "S"):
            if self.j < 0 or self.j == self.i:
                raise ValueError("moves need two distinct indices")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    def inverse(self) -> "NielsenMove":
        if self.kind in ("L", "R"):
            return NielsenMove(self.kind, self.i, self.j, -self.sign)
        return self

    def describe(self) -> str:
        if self.kind == "I":
            return f"I({self.i})"
        if self.kind == "S":
            return f"S({self.i},{self.j})"
        return f"{self.kind}({self.i},{self.j},{self.sign:+d})"


def all_moves(n: int) -> tuple:
    moves = []
    for kind in ("L", "R"):
        for i in range(n):
            for j in range(n):
                if i != j:
                    for s in (1, -1):
                        moves.append(NielsenMove(kind, i, j, s))
    for i in range(n):
        moves.append(NielsenMove("I", i))
    for i in range(n):
        for j in range(i + 1, n):
            moves.append(NielsenMove("S", i, j))
    return tuple(moves)


def apply_move(t: GeneratingTuple, mv: NielsenMove) -> GeneratingTuple:
    g = t.group
    items = list(t.items)
    n = len(items)
    if mv.i >= n or (mv.kind in ("L", "R", "S") and mv.j >= n):
        raise ValueError("move index exceeds tuple length")
    if mv.kind == "I":
        items[mv.i] = g.inv(items[mv.i])
    elif mv.kind == "S":
        items[mv.i], items[mv.j] = items[mv.j], items[mv.i]
    else:
        other = items[mv.j] if mv.sign > 0 else g.inv(items[mv.j])
        if mv.kind == "L":
            items[mv.i] = g.mul(other, items[mv.i])
        else:
            items[mv.i] = g.mul(items[mv.i], other)
    return GeneratingTuple(g, tuple(items))


@dataclass
class OrbitReport:
    """Result of walking one Nielsen orbit.  verdict is
    NielsenRedundant (with a move path from the start to a tuple with a
    droppable entry), NielsenIrredundant (orbit exhausted), or Unknown
    (budget ran out first)."""

    start: GeneratingTuple
    verdict: str
    path: tuple | None
    endpoint: GeneratingTuple | None
    visited: int
    frontier_peak: int
    notes: tuple = ()


def _apply_move_idx(ix: IndexedGroup, t: tuple, mv: NielsenMove) -> tuple:
    items = list(t)
    if mv.kind == "I":
        items[mv.i] = int(ix.inv[items[mv.i]])
    elif mv.kind == "S":
        items[mv.i], items[mv.j] = items[mv.j], items[mv.i]
    else:
        other = items[mv.j] if mv.sign > 0 else int(ix.inv[items[mv.j]])
        if mv.kind == "L":
            items[mv.i] = int(ix.mult[other, items[mv.i]])
        else:
            items[mv.i] = int(ix.mult[items[mv.i], other])
    return tuple(items)


def _redundant_entry_idx(ix: IndexedGroup, t: tuple):
    """Index of a droppable entry, or None.  Cheap shapes first: an
    identity entry, a repeated entry, an entry whose inverse is also
    present; then the full one-entry drop tests."""
    seen = {}
    for i, x in enumerate(t):
        if x == ix.identity:
            return i
        if x in seen:
            return i
        seen[x] = i
    for i, x in enumerate(t):
        j = seen.get(int(ix.inv[x]))
        if j is not None and j != i:
            return i
    for i in range(len(t)):
        if ix.generates(t[:i] + t[i + 1:]):
            return i
    return None


def _reconstruct_path(parents: dict, node: tuple) -> tuple:
    path = []
    while parents[node] is not None:
        node, mv = parents[node]
        path.append(mv)
    return tuple(reversed(path))


def _orbit_bfs_indexed(ix: IndexedGroup, start: tuple, limits: SearchLimits,
                       deadline: float | None = None) -> OrbitReport:
    t0 = time.monotonic()
    moves = all_moves(len(start))
    start_c = ix.canonical_tuple(start)
    parents: dict = {start_c: None}
    dq = deque([start_c])
    peak = 1
    start_tuple = ix.tuple_of(start)
    while dq:
        now = time.monotonic()
        if len(parents) > limits.node_budget or now - t0 > limits.time_budget or \
                (deadline is not None and now > deadline):
            return OrbitReport(start_tuple, "Unknown", None, None,
                               len(parents), peak,
                               ("orbit walk stopped at the search budget",))
        node = dq.popleft()
        if _redundant_entry_idx(ix, node) is not None:
            return OrbitReport(start_tuple, "NielsenRedundant",
                               _reconstruct_path(parents, node),
                               ix.tuple_of(node), len(parents), peak)
        for mv in moves:
            child = ix.canonical_tuple(_apply_move_idx(ix, node, mv))
            if child not in parents:
                parents[child] = (node, mv)
                dq.append(child)
        if len(dq) > peak:
            peak = len(dq)
    return OrbitReport(start_tuple, "NielsenIrredundant", None, None,
                       len(parents), peak)


def _canonical_tuple_generic(g: GroupSpec, items: tuple) -> tuple:
    if g.is_abelian or g.order is None or g.order > 1000:
        return items
    best, best_key = items, tuple(g.encode(x) for x in items)
    for c in g.elements():
        cand = tuple(g.conjugate(x, c) for x in items)
        key = tuple(g.encode(x) for x in cand)
        if key < best_key:
            best, best_key = cand, key
    return best


def _redundant_entry_generic(g: GroupSpec, items: tuple):
    e_key = g.encode(g.identity())
    seen = {}
    for i, x in enumerate(items):
        k = g.encode(x)
        if k == e_key:
            return i
        if k in seen:
            return i
        seen[k] = i
    for i, x in enumerate(items):
        j = seen.get(g.encode(g.inv(x)))
        if j is not None and j != i:
            return i
    for i in range(len(items)):
        rest = GeneratingTuple(g, items[:i] + items[i + 1:])
        if is_generating(rest):
            return i
    return None


def _orbit_bfs_generic(t: GeneratingTuple, limits: SearchLimits) -> OrbitReport:
    g = t.group
    t0 = time.monotonic()
    moves = all_moves(len(t))
    raw_canon = g.order is None or (g.order > 1000 and not g.is_abelian)
    start_c = _canonical_tuple_generic(g, t.items)
    key0 = tuple(g.encode(x) for x in start_c)
    parents: dict = {key0: None}
    nodes = {key0: start_c}
    dq = deque([key0])
    peak = 1
    notes = ("orbit deduplication is literal, not up to conjugation",) if raw_canon else ()
    while dq:
        if len(parents) > limits.node_budget or time.monotonic() - t0 > limits.time_budget:
            return OrbitReport(t, "Unknown", None, None, len(parents), peak,
                               notes + ("orbit walk stopped at the search budget",))
        key = dq.popleft()
        items = nodes[key]
        if _redundant_entry_generic(g, items) is not None:
            return OrbitReport(t, "NielsenRedundant", _reconstruct_path(parents, key),
                               GeneratingTuple(g, items), len(parents), peak, notes)
        for mv in moves:
            child = _canonical_tuple_generic(
                g, apply_move(GeneratingTuple(g, items), mv).items)
            ck = tuple(g.encode(x) for x in child)
            if ck not in parents:
                parents[ck] = (key, mv)
                nodes[ck] = child
                dq.append(ck)
        if len(dq) > peak:
            peak = len(dq)
    return OrbitReport(t, "NielsenIrredundant", None, None, len(parents), peak, notes)


def is_nielsen_redundant(t: GeneratingTuple, limits: SearchLimits | None = None,
                         indexed: bool = True) -> OrbitReport:
    """Walk the Nielsen orbit of a generating tuple looking for a
    member with a droppable entry."""
    limits = limits or SearchLimits()
    if not is_generating(t):
        raise ValueError("tuple does not generate; Nielsen analysis is undefined")
    g = t.group
    if len(t) == 0:
        return OrbitReport(t, "NielsenIrredundant", None, None, 1, 1)
    if indexed and g.order is not None and g.order <= MAX_INDEXED_ORDER:
        ix = IndexedGroup.from_spec(g)
        return _orbit_bfs_indexed(ix, ix.indices_of(t), limits)
    return _orbit_bfs_generic(t, limits)


def _mu_analytic_cyclic(spec: CyclicPower) -> RankSearchResult:
    """mu for (Z/m)^k is k when m > 1: generating k-tuples are
    invertible matrices over Z/m, whose columns stay independent under
    column operations, while any longer generating tuple column-reduces
    to one with a dependent entry."""
    if spec.modulus == 1:
        witness = GeneratingTuple(spec, ())
        value = 0
    else:
        witness = GeneratingTuple(spec, spec.generators())
        value = spec.copies
    return RankSearchResult(
        spec, "mu", value, witness, exhaustive=True,
        stats={"m": None, "nodes": 0, "elapsed": 0.0, "orbit_nodes": 0},
        notes=("value from column reduction over the residue ring",))


def mu_rank(spec: GroupSpec, limits: SearchLimits | None = None,
            force_search: bool = False) -> RankSearchResult:
    """Largest size of a Nielsen-irredundant generating tuple.

    The ladder runs over sizes from the minimal generating size d up to
    the maximal irredundant size m.  Size-d tuples are Nielsen
    irredundant outright (no generating tuple of any smaller size
    exists, so no entry is ever droppable anywhere in an orbit).  At
    each larger size every conjugacy class of irredundant generating
    sets is walked; redundant generating tuples are Nielsen redundant
    via the empty move sequence, so those classes cover everything."""
    limits = limits or SearchLimits()
    if isinstance(spec, Integers):
        return RankSearchResult(
            spec, "mu", 1, GeneratingTuple(spec, (1,)), exhaustive=True,
            stats={"m": None, "nodes": 0, "elapsed": 0.0, "orbit_nodes": 0},
            notes=("any longer integer tuple reduces to a unit entry by the "
                   "euclidean algorithm through Nielsen moves",))
    if isinstance(spec, CyclicPower) and not force_search:
        return _mu_analytic_cyclic(spec)
    if spec.order is None:
        raise ValueError(f"unsupported infinite group {spec.descriptor()}")
    t0 = time.monotonic()
    if spec.order > MAX_INDEXED_ORDER:
        from .redundancy import irredundant_witness
        w = irredundant_witness(spec, 2, limits=limits)
        if w.witness is not None and not spec.is_abelian:
            return RankSearchResult(
                spec, "mu", 2, w.witness, exhaustive=False,
                stats={"m": None, "nodes": w.stats.get("nodes", 0),
                       "elapsed": time.monotonic() - t0, "orbit_nodes": 0},
                notes=("lower bound: a generating pair of a nonabelian group "
                       "is minimal, hence Nielsen irredundant; the exhaustive "
                       f"ladder is limited to order <= {MAX_INDEXED_ORDER}",))
        return RankSearchResult(
            spec, "mu", None, None, exhaustive=False,
            stats={"m": None, "nodes": w.stats.get("nodes", 0),
                   "elapsed": time.monotonic() - t0, "orbit_nodes": 0},
            notes=(f"group order exceeds the exhaustive bound {MAX_INDEXED_ORDER} "
                   "and no generating pair was found",))
    m_res = max_irredundant_size(spec, limits=limits, collect=True,
                                 force_search=force_search)
    if not m_res.exhaustive:
        return RankSearchResult(
            spec, "mu", None, None, exhaustive=False,
            stats={"m": m_res.value, "nodes": m_res.stats["nodes"],
                   "elapsed": time.monotonic() - t0, "orbit_nodes": 0},
            notes=("the underlying irredundant-set search hit its budget",))
    classes = m_res.stats.get("classes", {})
    ix = IndexedGroup.from_spec(spec)
    if not classes:
        # trivial group: the empty tuple generates and nothing is droppable
        return RankSearchResult(
            spec, "mu", 0, GeneratingTuple(spec, ()), exhaustive=True,
            stats={"m": 0, "nodes": m_res.stats["nodes"],
                   "elapsed": time.monotonic() - t0, "orbit_nodes": 0})
    d = min(classes)
    m_val = max(classes)
    mu = d
    witness = ix.tuple_of(classes[d][0])
    notes = [f"size {d} is the minimal generating size; minimal tuples are "
             "Nielsen irredundant"]
    orbit_nodes = 0
    exhaustive = True
    deadline = t0 + limits.time_budget
    for k in range(d + 1, m_val + 1):
        for cset in classes.get(k, ()):
            rep = _orbit_bfs_indexed(ix, tuple(cset), limits, deadline=deadline)
            orbit_nodes += rep.visited
            if rep.verdict == "NielsenIrredundant":
                mu = k
                witness = rep.start
                break
            if rep.verdict == "Unknown":
                exhaustive = False
                notes.append(f"size {k}: an orbit walk hit the budget; "
                             "the verdict there is open")
                break
    result_notes = tuple(notes if exhaustive else notes + [
        "value is a lower bound"])
    return RankSearchResult(
        spec, "mu", mu, witness, exhaustive=exhaustive,
        stats={"m": m_val, "nodes": m_res.stats["nodes"],
               "elapsed": time.monotonic() - t0, "orbit_nodes": orbit_nodes},
        notes=result_notes)


# ---------------------------------------------------------------------------
# Full orbit partition at one size, for inspection.
# ---------------------------------------------------------------------------

@dataclass
class OrbitStatistics:
    group: GroupSpec
    size: int
    generating_classes: int
    orbit_count: int
    orbit_sizes: tuple
    orbits_with_redundant: int
    partial: bool
    notes: tuple = ()

    @property
    def fraction_with_redundant(self) -> float:
        if self.orbit_count == 0:
            return 0.0
        return self.orbits_with_redundant / self.orbit_count


def _is_z_minimal(ix: IndexedGroup, zs, rest: tuple) -> bool:
    conj = ix.conj
    for z in zs:
        img = tuple(int(conj[z, r]) for r in rest)
        if img < rest:
            return False
    return True


def _canonical_tuples(ix: IndexedGroup, k: int):
    """All canonical k-tuples, enumerated first entry by conjugacy
    class: a canonical tuple starts with a class-minimal element, and
    its tail is minimal under the centralizer of that element (under
    the whole group when the head is central, handled by recursion)."""
    if k == 0:
        yield ()
        return
    if ix.spec.is_abelian:
        yield from itertools.product(range(ix.n), repeat=k)
        return
    for c in ix.class_min_reps():
        if ix.central[c]:
            for rest in _canonical_tuples(ix, k - 1):
                yield (c,) + rest
        else:
            zs = [int(z) for z in ix.centralizer(c) if z != ix.identity]
            for rest in itertools.product(range(ix.n), repeat=k - 1):
                if _is_z_minimal(ix, zs, rest):
                    yield (c,) + rest


def orbit_statistics(spec: GroupSpec, size: int,
                     limits: SearchLimits | None = None) -> OrbitStatistics:
    """Partition all conjugacy classes of generating tuples of one size
    into Nielsen orbits and report which orbits contain a redundant
    tuple.  Exact and exhaustive, hence limited to small groups."""
    limits = limits or SearchLimits()
    if size < 1:
        raise ValueError("size must be positive")
    if spec.order is None or spec.order > 1000:
        raise ValueError("orbit statistics are limited to groups of order <= 1000")
    est = spec.order ** size if spec.is_abelian else spec.order ** (size - 1)
    if est > 2_000_000:
        raise ValueError("too many tuple classes at this size; pick a smaller size")
    ix = IndexedGroup.from_spec(spec)
    t0 = time.monotonic()
    all_gen = {t for t in _canonical_tuples(ix, size) if ix.generates(t)}
    moves = all_moves(size)
    seen: set = set()
    orbit_sizes = []
    with_red = 0
    partial = False
    notes: list = []
    for start in sorted(all_gen):
        if start in seen:
            continue
        if time.monotonic() - t0 > limits.time_budget or len(seen) > limits.node_budget:
            partial = True
            notes.append("stopped at the search budget before all orbits were walked")
            break
        members = {start}
        dq = deque([start])
        has_red = False
        while dq:
            node = dq.popleft()
            if not has_red and _redundant_entry_idx(ix, node) is not None:
                has_red = True
            for mv in moves:
                child = ix.canonical_tuple(_apply_move_idx(ix, node, mv))
                if child not in members:
                    if child not in all_gen:
                        raise AssertionError("orbit left the generating-class table")
                    members.add(child)
                    dq.append(child)
        seen.update(members)
        orbit_sizes.append(len(members))
        if has_red:
            with_red += 1
    return OrbitStatistics(
        spec, size, len(all_gen), len(orbit_sizes),
        tuple(sorted(orbit_sizes, reverse=True)), with_red, partial, tuple(notes))
