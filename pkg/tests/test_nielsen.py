"""Elementary moves, orbit walks, and the Nielsen rank."""

import random

import pytest

from genrank.groups import (CyclicPower, GeneratingTuple, Integers,
                            ProjSpecialLinear, SpecialLinear, closure)
from genrank.nielsen import (NielsenMove, all_moves, apply_move,
                             is_nielsen_redundant, mu_rank, orbit_statistics)
from genrank.redundancy import SearchLimits, max_irredundant_size


def random_tuple(spec, k, rng):
    return GeneratingTuple(spec, tuple(spec.random_element(rng)
                                       for _ in range(k)))


def test_move_count():
    # 2n(n-1) multiplications, n inversions, n(n-1)/2 swaps
    assert len(all_moves(2)) == 4 + 4 + 2 + 1
    assert len(all_moves(3)) == 30


def test_move_validation():
    with pytest.raises(ValueError):
        NielsenMove("L", 0, 0, 1)
    with pytest.raises(ValueError):
        NielsenMove("S", 2, 2)
    with pytest.raises(ValueError):
        NielsenMove("Q", 0, 1, 1)
    with pytest.raises(ValueError):
        NielsenMove("L", 0, 1, 2)


def test_move_describe():
    assert NielsenMove("L", 0, 1, 1).describe() == "L(0,1,+1)"
    assert NielsenMove("R", 2, 0, -1).describe() == "R(2,0,-1)"
    assert NielsenMove("I", 1).describe() == "I(1)"
    assert NielsenMove("S", 0, 2).describe() == "S(0,2)"


def test_moves_are_invertible():
    rng = random.Random(3)
    spec = ProjSpecialLinear(2, 5)
    for _ in range(10):
        t = random_tuple(spec, 3, rng)
        for mv in all_moves(3):
            back = apply_move(apply_move(t, mv), mv.inverse())
            assert back.items == t.items, mv.describe()


def test_moves_preserve_generated_subgroup():
    rng = random.Random(7)
    spec = SpecialLinear(2, 5)
    for _ in range(6):
        t = random_tuple(spec, 2, rng)
        base = frozenset(closure(t).encodings)
        for mv in all_moves(2):
            moved = apply_move(t, mv)
            assert frozenset(closure(moved).encodings) == base


def test_moves_commute_with_conjugation():
    rng = random.Random(11)
    spec = ProjSpecialLinear(2, 5)
    for _ in range(8):
        t = random_tuple(spec, 2, rng)
        g = spec.random_element(rng)
        for mv in all_moves(2):
            lhs = apply_move(t, mv).conjugated(g)
            rhs = apply_move(t.conjugated(g), mv)
            assert lhs.items == rhs.items


def test_redundant_tuple_detected_with_replayable_path():
    spec = ProjSpecialLinear(2, 5)
    gens = tuple(spec.generators())
    x, y = gens[0], gens[1]
    t = GeneratingTuple(spec, (x, y, spec.mul(x, y)))
    rep = is_nielsen_redundant(t)
    assert rep.verdict == "NielsenRedundant"
    assert rep.path is not None
    # replay the recorded path from the start tuple
    cur = t
    for mv in rep.path:
        cur = apply_move(cur, mv)
    e = spec.identity()
    items = cur.items
    cheap = (e in items
             or len(set(spec.encode(v) for v in items)) < len(items)
             or any(spec.inv(a) in items[i + 1:]
                    for i, a in enumerate(items)))
    from genrank.redundancy import is_redundant
    assert cheap or any(is_redundant(cur).droppable)


def test_irredundant_pair_has_no_redundant_orbit_member():
    spec = ProjSpecialLinear(2, 5)
    t = GeneratingTuple(spec, tuple(spec.generators()))
    rep = is_nielsen_redundant(t)
    assert rep.verdict == "NielsenIrredundant"
    assert rep.visited > 1


def test_generic_and_indexed_walk_agree():
    rng = random.Random(13)
    spec = ProjSpecialLinear(2, 5)
    for _ in range(6):
        t = random_tuple(spec, 2, rng)
        a = is_nielsen_redundant(t, indexed=True)
        b = is_nielsen_redundant(t, indexed=False)
        assert a.verdict == b.verdict


def test_budget_yields_unknown():
    spec = ProjSpecialLinear(2, 5)
    t = GeneratingTuple(spec, tuple(spec.generators()))
    rep = is_nielsen_redundant(t, limits=SearchLimits(node_budget=2,
                                                      time_budget=600.0))
    assert rep.verdict in ("Unknown", "NielsenRedundant")


def test_klein_four_orbit():
    stats = orbit_statistics(CyclicPower(2, 2), 2)
    assert stats.generating_classes == 6
    assert stats.orbit_count == 1
    assert stats.orbit_sizes == (6,)
    assert stats.orbits_with_redundant == 0
    assert not stats.partial


def test_all_triples_redundant_when_mu_is_two():
    # mu(psl2:5) = 2, so every generating triple walks to a redundant one
    stats = orbit_statistics(ProjSpecialLinear(2, 5), 3)
    assert not stats.partial
    assert stats.generating_classes > 0
    assert stats.orbits_with_redundant == stats.orbit_count
    assert stats.fraction_with_redundant == 1.0
    print("psl2:5 triples:", stats.generating_classes, "classes in",
          stats.orbit_count, "orbits")


def test_pairs_form_irredundant_orbits():
    stats = orbit_statistics(ProjSpecialLinear(2, 5), 2)
    assert not stats.partial
    assert sum(stats.orbit_sizes) == stats.generating_classes
    # no generating pair of a noncyclic group can reach a droppable entry
    assert stats.orbits_with_redundant == 0


def test_mu_values_small_groups():
    res = mu_rank(ProjSpecialLinear(2, 5))
    assert res.value == 2
    assert res.exhaustive
    assert res.witness is not None and len(res.witness) == 2

    assert mu_rank(CyclicPower(6, 1)).value == 1
    assert mu_rank(CyclicPower(6, 2)).value == 2
    assert mu_rank(CyclicPower(2, 3)).value == 3
    assert mu_rank(Integers()).value == 1


def test_mu_cyclic_forced_search_agrees():
    for spec in (CyclicPower(6, 1), CyclicPower(2, 2), CyclicPower(4, 1)):
        fast = mu_rank(spec)
        slow = mu_rank(spec, force_search=True)
        assert fast.value == slow.value, spec.descriptor()


def test_mu_does_not_exceed_m():
    for spec in (ProjSpecialLinear(2, 5), CyclicPower(6, 2),
                 CyclicPower(12, 1)):
        mu = mu_rank(spec).value
        m = max_irredundant_size(spec).value
        assert mu <= m
        print(spec.descriptor(), "mu", mu, "m", m)
