"""Irredundance verdicts and the maximal irredundant size search."""

import math
import random

from genrank.fp import FpMatrix, projective_canonicalize
from genrank.groups import (CyclicPower, GeneratingTuple, Integers,
                            ProjSpecialLinear, SpecialLinear, closure,
                            is_generating)
from genrank.redundancy import (SearchLimits, cyclic_power_rank_witness,
                                involution_pair_is_proper,
                                irredundant_witness, is_redundant,
                                max_irredundant_size, z_witness)


def test_z_witness_values():
    assert z_witness(1).items == (1,)
    assert z_witness(2).items == (3, 2)
    assert z_witness(3).items == (15, 10, 6)
    assert z_witness(4).items == (105, 70, 42, 30)


def test_z_witness_is_irredundant_generating():
    for n in range(1, 7):
        w = z_witness(n)
        rep = is_redundant(w)
        assert rep.verdict == "IrredundantGenerating"
        assert math.gcd(*w.items) == 1 if n > 1 else w.items == (1,)


def test_redundancy_verdicts_in_cyclic_group():
    g = CyclicPower(6, 1)
    assert is_redundant(GeneratingTuple(g, ((2,),))).verdict == "NotGenerating"
    assert is_redundant(GeneratingTuple(g, ((1,),))).verdict == "IrredundantGenerating"
    rep = is_redundant(GeneratingTuple(g, ((1,), (2,))))
    assert rep.verdict == "RedundantGenerating"
    assert rep.droppable == (False, True)
    # both entries needed
    rep = is_redundant(GeneratingTuple(g, ((2,), (3,))))
    assert rep.verdict == "IrredundantGenerating"


def test_max_irredundant_size_psl2_5():
    res = max_irredundant_size(ProjSpecialLinear(2, 5))
    assert res.value == 3
    assert res.exhaustive
    assert res.witness is not None
    assert is_redundant(res.witness).verdict == "IrredundantGenerating"
    print("psl2:5 m =", res.value, "classes", res.stats["recorded"])


def test_max_irredundant_size_sl2_5():
    res = max_irredundant_size(SpecialLinear(2, 5))
    assert res.value == 3
    assert res.exhaustive


def test_witness_survives_conjugation():
    spec = ProjSpecialLinear(2, 5)
    res = max_irredundant_size(spec)
    w = res.witness
    rng = random.Random(1)
    for _ in range(5):
        g = spec.random_element(rng)
        moved = w.conjugated(g)
        assert is_redundant(moved).verdict == "IrredundantGenerating"


def test_cyclic_analytic_matches_forced_search():
    for spec in (CyclicPower(2, 1), CyclicPower(6, 1), CyclicPower(2, 2),
                 CyclicPower(12, 1), CyclicPower(6, 2), CyclicPower(30, 1)):
        fast = max_irredundant_size(spec)
        slow = max_irredundant_size(spec, force_search=True)
        assert fast.value == slow.value, spec.descriptor()
        assert fast.exhaustive and slow.exhaustive


def test_cyclic_rank_formula():
    # k copies of Z/m admit k * omega(m) irredundant generators
    cases = {(2, 1): 1, (2, 3): 3, (6, 1): 2, (6, 2): 4, (30, 1): 3,
             (12, 2): 4, (1000, 3): 6}
    for (m, k), want in cases.items():
        res = max_irredundant_size(CyclicPower(m, k))
        assert res.value == want, (m, k)


def test_cyclic_witness_drop_checks():
    spec = CyclicPower(12, 2)
    w = cyclic_power_rank_witness(spec)
    assert len(w) == 4
    rep = is_redundant(w)
    assert rep.verdict == "IrredundantGenerating"


def test_integers_rank_unbounded():
    res = max_irredundant_size(Integers())
    assert res.value is None
    assert res.exhaustive
    assert any("every size" in n for n in res.notes)


def test_budget_gives_lower_bound():
    limits = SearchLimits(node_budget=10, time_budget=600.0)
    res = max_irredundant_size(SpecialLinear(2, 5), limits=limits)
    assert not res.exhaustive
    assert any("budget" in n for n in res.notes)
    if res.value is not None:
        assert res.value <= 3


def test_involution_pair_proper_dihedral():
    spec = ProjSpecialLinear(2, 5)
    els = spec.elements()
    invols = [x for x in els
              if x != spec.identity() and spec.mul(x, x) == spec.identity()]
    assert len(invols) == 15
    a, b = invols[0], invols[3]
    rep = involution_pair_is_proper(GeneratingTuple(spec, (a, b)))
    assert rep.proper
    assert rep.closure_order == 2 * rep.product_order
    assert rep.closure_order <= 2 * (5 + 1)


def test_irredundant_witness_target_size():
    spec = ProjSpecialLinear(2, 5)
    res = irredundant_witness(spec, 3)
    assert res.witness is not None and len(res.witness) == 3
    assert is_redundant(res.witness).verdict == "IrredundantGenerating"
    res4 = irredundant_witness(spec, 4)
    assert res4.witness is None
    assert res4.exhausted


def test_irredundant_witness_involutions_only():
    spec = ProjSpecialLinear(2, 5)
    res = irredundant_witness(spec, 3, involutions_only=True)
    assert res.witness is not None
    e = spec.identity()
    for x in res.witness.items:
        assert spec.mul(x, x) == e


def test_maximal_size_monotone_family():
    # m grows along 2 -> 3 -> 4 as the prime moves 5 -> 7
    m5 = max_irredundant_size(ProjSpecialLinear(2, 5)).value
    m7 = max_irredundant_size(ProjSpecialLinear(2, 7)).value
    assert m5 == 3
    assert m7 == 4
