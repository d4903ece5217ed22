"""Dense index tables for small finite groups.

An IndexedGroup holds the full multiplication table of a group of
modest order as a numpy array, plus inverse and element-order tables,
conjugacy data, and helpers built on them: vectorized subgroup closure,
generation tests, and canonical forms of tuples and sets under
simultaneous conjugation.  Everything downstream of the table is pure
array arithmetic, which is what makes the exhaustive searches over
partial generating sets affordable.

Canonical forms use the minimum-index convention: elements are indexed
in encoding order, a conjugacy class is represented by its least index,
and the canonical image of a tuple is the lexicographically least
simultaneous conjugate.  The least conjugate of (t0, rest) always
starts with the class representative of t0, and the conjugators
achieving it form a coset of the centralizer of that representative,
so later positions only ever narrow a candidate array.
"""

from __future__ import annotations

import numpy as np

from . import groups as groups_mod
from .groups import (CayleyTableGroup, GeneratingTuple, GroupSpec,
                     ProjSpecialLinear, SpecialLinear, _sl2_verdict,
                     sl2_fast_applicable)

MAX_INDEXED_ORDER = 4096

_INSTANCE_CACHE: dict[str, "IndexedGroup"] = {}


def _matrix_rows(spec, elements, p):
    rows = []
    for el in elements:
        m = el.rep if isinstance(spec, ProjSpecialLinear) else el
        rows.append(m.entries)
    return np.array(rows, dtype=np.int64), p


def _build_mult_sl2(spec, elements) -> np.ndarray:
    """Vectorized table for 2x2 matrix groups: entries packed into
    base-p codes, products decoded through a lookup array."""
    p = spec.p
    ent, _ = _matrix_rows(spec, elements, p)
    n = len(elements)

    def codes(c0, c1, c2, c3):
        return ((c0 * p + c1) * p + c2) * p + c3

    lut = np.full(p ** 4, -1, dtype=np.int32)
    lut[codes(ent[:, 0], ent[:, 1], ent[:, 2], ent[:, 3])] = np.arange(n, dtype=np.int32)
    mult = np.empty((n, n), dtype=np.int32)
    b0, b1, b2, b3 = ent[:, 0], ent[:, 1], ent[:, 2], ent[:, 3]
    projective = isinstance(spec, ProjSpecialLinear)
    for i in range(n):
        a0, a1, a2, a3 = ent[i]
        c0 = (a0 * b0 + a1 * b2) % p
        c1 = (a0 * b1 + a1 * b3) % p
        c2 = (a2 * b0 + a3 * b2) % p
        c3 = (a2 * b1 + a3 * b3) % p
        code = codes(c0, c1, c2, c3)
        if projective:
            # the canonical coset representative is the entrywise
            # lexicographic minimum of M and -M, i.e. the smaller code
            code = np.minimum(code, codes((p - c0) % p, (p - c1) % p,
                                          (p - c2) % p, (p - c3) % p))
        mult[i] = lut[code]
    if (mult < 0).any():
        raise AssertionError("product escaped the element table")
    return mult


def _build_mult_generic(spec, elements) -> np.ndarray:
    n = len(elements)
    index = {spec.encode(x): i for i, x in enumerate(elements)}
    mult = np.empty((n, n), dtype=np.int32)
    for i, a in enumerate(elements):
        row = mult[i]
        for j, b in enumerate(elements):
            row[j] = index[spec.encode(spec.mul(a, b))]
    return mult


class IndexedGroup:
    """Tables and canonical-form helpers for one finite group."""

    def __init__(self, spec: GroupSpec):
        if spec.order is None or spec.order > MAX_INDEXED_ORDER:
            raise ValueError(
                f"indexing is limited to finite groups of order <= {MAX_INDEXED_ORDER}")
        self.spec = spec
        self.elements = spec.elements()
        self.n = len(self.elements)
        self.index = {spec.encode(x): i for i, x in enumerate(self.elements)}
        if isinstance(spec, CayleyTableGroup):
            self.mult = np.array(spec.table, dtype=np.int32)
        elif isinstance(spec, (SpecialLinear, ProjSpecialLinear)) and spec.n == 2:
            self.mult = _build_mult_sl2(spec, self.elements)
        else:
            self.mult = _build_mult_generic(spec, self.elements)
        self.identity = self.index[spec.encode(spec.identity())]
        self.inv = np.argmax(self.mult == self.identity, axis=1).astype(np.int32)
        self.orders = self._element_orders()
        self.central = self._central_mask()
        self._conj = None
        self._class_rep = None
        self._class_wit = None
        self._centralizers: dict[int, np.ndarray] = {}
        self._gen_cache: dict[tuple, bool] = {}
        self._sl2 = sl2_fast_applicable(spec)

    @classmethod
    def from_spec(cls, spec: GroupSpec) -> "IndexedGroup":
        key = spec.descriptor()
        inst = _INSTANCE_CACHE.get(key)
        if inst is None:
            inst = cls(spec)
            _INSTANCE_CACHE[key] = inst
        return inst

    def _element_orders(self) -> np.ndarray:
        orders = np.zeros(self.n, dtype=np.int32)
        cur = np.arange(self.n, dtype=np.int32)
        k = 0
        while (orders == 0).any():
            k += 1
            if k > self.n:
                raise AssertionError("element order exceeded group order")
            hit = (cur == self.identity) & (orders == 0)
            orders[hit] = k
            cur = self.mult[cur, np.arange(self.n)]
        return orders

    def _central_mask(self) -> np.ndarray:
        spec = self.spec
        if spec.is_abelian:
            return np.ones(self.n, dtype=bool)
        if isinstance(spec, (SpecialLinear, ProjSpecialLinear)):
            return np.array(
                [(x.rep if isinstance(spec, ProjSpecialLinear) else x).is_scalar()
                 for x in self.elements], dtype=bool)
        conj = self.conj
        return (conj == np.arange(self.n, dtype=np.int32)[None, :]).all(axis=0)

    @property
    def conj(self) -> np.ndarray:
        if self._conj is None:
            # conj[g, x] = g x g^{-1}
            self._conj = self.mult[self.mult, self.inv[:, None]]
        return self._conj

    def _class_data(self):
        if self._class_rep is None:
            conj = self.conj
            rep = np.full(self.n, -1, dtype=np.int32)
            wit = np.zeros(self.n, dtype=np.int32)
            for i in range(self.n):
                if rep[i] >= 0:
                    continue
                members = np.unique(conj[:, i])
                rep[members] = i
                for x in members:
                    wit[x] = np.flatnonzero(conj[:, x] == i)[0]
            self._class_rep = rep
            self._class_wit = wit
        return self._class_rep, self._class_wit

    def class_min_reps(self) -> list[int]:
        rep, _ = self._class_data()
        return sorted(int(v) for v in np.unique(rep))

    def centralizer(self, rep: int) -> np.ndarray:
        out = self._centralizers.get(rep)
        if out is None:
            out = np.flatnonzero(self.conj[:, rep] == rep).astype(np.int32)
            self._centralizers[rep] = out
        return out

    def indices_of(self, t: GeneratingTuple) -> tuple:
        return tuple(self.index[self.spec.encode(x)] for x in t.items)

    def tuple_of(self, idx) -> GeneratingTuple:
        return GeneratingTuple(self.spec, tuple(self.elements[i] for i in idx))

    # -- closure and generation --------------------------------------

    def closure_mask(self, gens, cap: int | None = None, target: int | None = None):
        """Vectorized closure BFS.  Returns (mask, count, exceeded,
        found); stops early once count passes cap or target is hit."""
        gens = np.unique(np.asarray(list(gens), dtype=np.int32)) if gens else \
            np.empty(0, dtype=np.int32)
        visited = np.zeros(self.n, dtype=bool)
        visited[self.identity] = True
        count = 1
        found = target is not None and visited[target]
        if found or gens.size == 0:
            return visited, count, False, found
        frontier = np.array([self.identity], dtype=np.int32)
        while frontier.size:
            prod = np.unique(self.mult[np.ix_(frontier, gens)].ravel())
            new = prod[~visited[prod]]
            if new.size == 0:
                break
            visited[new] = True
            count += int(new.size)
            if target is not None and visited[target]:
                return visited, count, False, True
            if cap is not None and count > cap:
                return visited, count, True, found
            frontier = new
        return visited, count, False, found

    def closure_indices(self, gens) -> frozenset:
        mask, _, _, _ = self.closure_mask(gens)
        return frozenset(int(i) for i in np.flatnonzero(mask))

    def generates(self, gens) -> bool:
        key = tuple(sorted(set(gens)))
        hit = self._gen_cache.get(key)
        if hit is not None:
            return hit
        out = self._generates_uncached(key)
        self._gen_cache[key] = out
        return out

    def _generates_uncached(self, gens) -> bool:
        if self._sl2:
            spec = self.spec
            center = 2 if isinstance(spec, SpecialLinear) else 1
            mats = []
            for i in gens:
                x = self.elements[i]
                mats.append(x.rep if isinstance(spec, ProjSpecialLinear) else x)

            def probe(cap):
                _, count, exceeded, _ = self.closure_mask(gens, cap=cap)
                return exceeded, count

            return _sl2_verdict(mats, spec.p, center, self.n, probe).generates
        _, count, _, _ = self.closure_mask(gens)
        return count == self.n

    # -- canonical forms under simultaneous conjugation ---------------

    def canonical_set(self, s) -> tuple:
        """Least sorted image of the set under conjugation."""
        if self.spec.is_abelian:
            return tuple(sorted(int(v) for v in s))
        cols = np.sort(self.conj[:, list(s)], axis=1)
        best = np.lexsort(cols.T[::-1])[0]
        return tuple(int(v) for v in cols[best])

    def canonical_tuple(self, t) -> tuple:
        """Least image of the ordered tuple under conjugation."""
        if self.spec.is_abelian:
            return tuple(int(v) for v in t)
        rep, wit = self._class_data()
        cands = None
        out = []
        for v in t:
            v = int(v)
            if cands is None:
                if self.central[v]:
                    out.append(v)
                    continue
                r = int(rep[v])
                out.append(r)
                cands = self.mult[self.centralizer(r), wit[v]]
            else:
                imgs = self.conj[cands, v]
                m = int(imgs.min())
                out.append(m)
                cands = cands[imgs == m]
        return tuple(out)
