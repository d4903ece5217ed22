"""Group model checks: closures, generation tests, products."""

import random

import pytest

from genrank.fp import FpMatrix, projective_canonicalize
from genrank.groups import (CayleyTableGroup, CyclicPower, GeneratingTuple,
                            Integers, ProductGroup, ProjSpecialLinear,
                            SpecialLinear, closure, enumerate_isomorphisms,
                            is_generating, is_generating_sl2_fast,
                            is_simple_finite, product_generates,
                            project_to_psl, sl2_generation_report)


def standard_pair(spec):
    p = spec.p
    s = FpMatrix.from_rows(p, [[0, -1], [1, 0]])
    t = FpMatrix.from_rows(p, [[1, 1], [0, 1]])
    if isinstance(spec, ProjSpecialLinear):
        s = projective_canonicalize(s)
        t = projective_canonicalize(t)
    return GeneratingTuple(spec, (s, t))


def test_orders_match_formulas():
    for p in (3, 5, 7, 11, 13):
        assert SpecialLinear(2, p).order == p * (p * p - 1)
        assert ProjSpecialLinear(2, p).order == p * (p * p - 1) // 2
    # |SL3(q)| = q^3 (q^2-1)(q^3-1)
    assert SpecialLinear(3, 3).order == 27 * 8 * 26
    assert CyclicPower(6, 2).order == 36
    assert Integers().order is None
    prod = ProductGroup((ProjSpecialLinear(2, 5), ProjSpecialLinear(2, 7)))
    assert prod.order == 60 * 168


def test_closure_of_standard_pair_is_whole_group():
    for p in (3, 5, 7, 13):
        spec = SpecialLinear(2, p)
        sub = closure(standard_pair(spec))
        assert len(sub.elements) == p * (p * p - 1)
        pspec = ProjSpecialLinear(2, p)
        psub = closure(standard_pair(pspec))
        assert len(psub.elements) == p * (p * p - 1) // 2


def test_closure_of_proper_subgroup():
    spec = SpecialLinear(2, 5)
    t = FpMatrix.from_rows(5, [[1, 1], [0, 1]])
    sub = closure(GeneratingTuple(spec, (t,)))
    assert len(sub.elements) == 5
    assert t in sub
    s = FpMatrix.from_rows(5, [[0, -1], [1, 0]])
    assert s not in sub


def test_closure_cap_raises():
    from genrank.groups import CapExceeded
    spec = SpecialLinear(2, 13)
    with pytest.raises(CapExceeded):
        closure(standard_pair(spec), cap=50)


def test_elements_enumeration_counts():
    for spec in (SpecialLinear(2, 3), ProjSpecialLinear(2, 5),
                 CyclicPower(4, 2)):
        els = spec.elements()
        assert len(els) == spec.order
        assert len(set(spec.encode(x) for x in els)) == len(els)


def test_group_axioms_spot_checks():
    rng = random.Random(5)
    for spec in (SpecialLinear(2, 5), ProjSpecialLinear(2, 7),
                 CyclicPower(6, 2),
                 ProductGroup((CyclicPower(2, 1), ProjSpecialLinear(2, 5)))):
        e = spec.identity()
        for _ in range(40):
            a = spec.random_element(rng)
            b = spec.random_element(rng)
            c = spec.random_element(rng)
            assert spec.mul(spec.mul(a, b), c) == spec.mul(a, spec.mul(b, c))
            assert spec.mul(a, spec.inv(a)) == e
            assert spec.mul(e, a) == a


def test_integers_generation_is_gcd():
    z = Integers()
    assert is_generating(GeneratingTuple(z, (15, 10, 6)))
    assert not is_generating(GeneratingTuple(z, (15, 10)))
    assert not is_generating(GeneratingTuple(z, (0,)))
    assert is_generating(GeneratingTuple(z, (-1,)))


def test_cyclic_generation():
    g = CyclicPower(6, 2)
    basis = (tuple([1, 0]), tuple([0, 1]))
    assert is_generating(GeneratingTuple(g, basis))
    assert not is_generating(GeneratingTuple(g, ((2, 0), (0, 1))))
    assert is_generating(GeneratingTuple(g, ((1, 0), (0, 1), (3, 3))))


def test_fast_test_matches_closure_on_samples():
    rng = random.Random(41)
    for spec in (SpecialLinear(2, 7), ProjSpecialLinear(2, 11)):
        full = spec.order
        agree = 0
        for _ in range(300):
            k = rng.choice((2, 3))
            t = GeneratingTuple(spec, tuple(spec.random_element(rng)
                                            for _ in range(k)))
            fast = is_generating_sl2_fast(t)
            brute = len(closure(t).elements) == full
            assert fast == brute
            agree += 1
        assert agree == 300


def test_generation_report_reasons():
    spec = SpecialLinear(2, 7)
    t = FpMatrix.from_rows(7, [[1, 1], [0, 1]])
    u = FpMatrix.from_rows(7, [[1, 3], [0, 1]])
    d = FpMatrix.from_rows(7, [[3, 0], [0, 5]])
    rep = sl2_generation_report(GeneratingTuple(spec, (t, u)))
    assert not rep.generates
    assert rep.reason == "common eigenvector"
    rep = sl2_generation_report(GeneratingTuple(spec, (t, d)))
    assert not rep.generates
    assert rep.reason == "common eigenvector"
    s = FpMatrix.from_rows(7, [[0, -1], [1, 0]])
    rep = sl2_generation_report(GeneratingTuple(spec, (s, t)))
    assert rep.generates
    # anti-diagonal and diagonal elements stabilize a line pair
    w = FpMatrix.from_rows(7, [[0, 3], [2, 0]])
    rep = sl2_generation_report(GeneratingTuple(spec, (d, w)))
    assert not rep.generates
    assert rep.reason in ("invariant line pair",
                          "closure order " + str(len(closure(GeneratingTuple(spec, (d, w))).elements)))


def test_project_to_psl_preserves_generation():
    spec = SpecialLinear(2, 5)
    t = standard_pair(spec)
    pt = project_to_psl(t)
    assert isinstance(pt.group, ProjSpecialLinear)
    assert is_generating(pt)


def test_cayley_table_round_trip():
    base = CyclicPower(3, 2)
    table = CayleyTableGroup.from_spec(base)
    assert table.order == 9
    els = table.elements()
    e = table.identity()
    for a in els:
        assert table.mul(a, table.inv(a)) == e
    gens = GeneratingTuple(table, tuple(table.generators()))
    assert len(closure(gens).elements) == 9


def test_simplicity_classifier():
    assert is_simple_finite(ProjSpecialLinear(2, 5))
    assert is_simple_finite(ProjSpecialLinear(2, 7))
    assert not is_simple_finite(SpecialLinear(2, 5))
    assert is_simple_finite(CyclicPower(5, 1))
    assert not is_simple_finite(CyclicPower(6, 1))
    assert not is_simple_finite(CyclicPower(3, 2))


def test_psl2_isomorphism_count():
    # the automorphism group of PSL2(p) has order p(p^2-1) for p >= 5
    autos = enumerate_isomorphisms(ProjSpecialLinear(2, 5),
                                   ProjSpecialLinear(2, 5))
    assert len(autos) == 120
    g = ProjSpecialLinear(2, 5)
    x = projective_canonicalize(FpMatrix.from_rows(5, [[0, -1], [1, 0]]))
    y = projective_canonicalize(FpMatrix.from_rows(5, [[1, 1], [0, 1]]))
    seen = set()
    for iso in autos:
        gx, gy = iso.apply(x), iso.apply(y)
        g.validate(gx), g.validate(gy)
        seen.add((g.encode(gx), g.encode(gy)))
    # distinct automorphisms move the generating pair to distinct images
    assert len(seen) == 120


def test_no_isomorphism_between_different_orders():
    assert enumerate_isomorphisms(ProjSpecialLinear(2, 5),
                                  ProjSpecialLinear(2, 7)) == ()


def test_product_generates_mixed_factors():
    p1 = ProjSpecialLinear(2, 5)
    p2 = ProjSpecialLinear(2, 7)
    prod = ProductGroup((p1, p2))
    a1 = projective_canonicalize(FpMatrix.from_rows(5, [[0, -1], [1, 0]]))
    b1 = projective_canonicalize(FpMatrix.from_rows(5, [[1, 1], [0, 1]]))
    a2 = projective_canonicalize(FpMatrix.from_rows(7, [[0, -1], [1, 0]]))
    b2 = projective_canonicalize(FpMatrix.from_rows(7, [[1, 1], [0, 1]]))
    rep = product_generates(GeneratingTuple(prod, ((a1, a2), (b1, b2))))
    assert rep.generates
    assert "non-isomorphic" in rep.diagnosis


def test_product_rejects_diagonal():
    p1 = ProjSpecialLinear(2, 5)
    prod = ProductGroup((p1, p1))
    a = projective_canonicalize(FpMatrix.from_rows(5, [[0, -1], [1, 0]]))
    b = projective_canonicalize(FpMatrix.from_rows(5, [[1, 1], [0, 1]]))
    rep = product_generates(GeneratingTuple(prod, ((a, a), (b, b))))
    assert not rep.generates
    assert rep.diagnosis == "graph of identity"
    assert rep.isomorphism is not None


def test_product_rejects_twisted_diagonal():
    p1 = ProjSpecialLinear(2, 5)
    prod = ProductGroup((p1, p1))
    a = projective_canonicalize(FpMatrix.from_rows(5, [[0, -1], [1, 0]]))
    b = projective_canonicalize(FpMatrix.from_rows(5, [[1, 1], [0, 1]]))
    c = projective_canonicalize(FpMatrix.from_rows(5, [[2, 0], [1, 3]]))
    ci = p1.inv(c)
    twisted = GeneratingTuple(prod, ((a, p1.mul(p1.mul(c, a), ci)),
                                     (b, p1.mul(p1.mul(c, b), ci))))
    rep = product_generates(twisted)
    assert not rep.generates
    assert "graph of isomorphism" in rep.diagnosis


def test_product_proper_projection():
    p1 = ProjSpecialLinear(2, 5)
    p2 = ProjSpecialLinear(2, 7)
    prod = ProductGroup((p1, p2))
    a1 = projective_canonicalize(FpMatrix.from_rows(5, [[0, -1], [1, 0]]))
    b1 = projective_canonicalize(FpMatrix.from_rows(5, [[1, 1], [0, 1]]))
    t2 = projective_canonicalize(FpMatrix.from_rows(7, [[1, 1], [0, 1]]))
    u2 = projective_canonicalize(FpMatrix.from_rows(7, [[1, 3], [0, 1]]))
    rep = product_generates(GeneratingTuple(prod, ((a1, t2), (b1, u2))))
    assert not rep.generates
    assert rep.diagnosis == "projection 2 proper"


def test_product_agreement_with_closure_sample():
    rng = random.Random(7)
    p1 = ProjSpecialLinear(2, 5)
    prod = ProductGroup((p1, p1))
    full = prod.order
    for _ in range(40):
        k = rng.choice((2, 3))
        t = GeneratingTuple(prod, tuple(prod.random_element(rng)
                                        for _ in range(k)))
        rep = product_generates(t)
        brute = len(closure(t).elements) == full
        assert rep.generates == brute, rep.diagnosis


def test_descriptor_round_trip():
    for spec in (SpecialLinear(2, 5), ProjSpecialLinear(3, 3),
                 CyclicPower(12, 3), Integers(),
                 ProductGroup((CyclicPower(2, 2), SpecialLinear(2, 3)))):
        d = spec.descriptor()
        assert isinstance(d, str) and d
