"""Finite field and matrix layer checks against hand-computed values."""

import random

import pytest

from genrank.fp import (FpMatrix, FpScalar, canonical_rep, element_order,
                        is_prime, nonresidue, nth_roots_of_unity,
                        projective_canonicalize, sqrt_table)


def mat(p, rows):
    return FpMatrix.from_rows(p, rows)


def test_is_prime_small():
    primes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29}
    for n in range(2, 30):
        assert is_prime(n) == (n in primes)
    assert not is_prime(1)
    assert not is_prime(0)
    assert is_prime(32003)


def test_scalar_arithmetic_mod_7():
    a = FpScalar(3, 7)
    b = FpScalar(5, 7)
    assert (a + b).value == 1
    assert (a * b).value == 1
    assert (a - b).value == 5
    assert a.inverse().value == 5
    assert (b ** 2).value == 4


def test_scalar_inverse_sweep():
    for p in (5, 7, 13):
        for v in range(1, p):
            s = FpScalar(v, p)
            assert (s * s.inverse()).value == 1


def test_matrix_product_mod_5():
    # S and T, the standard special linear pair
    s = mat(5, [[0, -1], [1, 0]])
    t = mat(5, [[1, 1], [0, 1]])
    st = s * t
    assert st.rows() == ((0, 4), (1, 1))
    assert t.inverse().rows() == ((1, 4), (0, 1))
    assert (t * t.inverse()).is_identity()


def test_matrix_orders_mod_5():
    s = mat(5, [[0, -1], [1, 0]])
    t = mat(5, [[1, 1], [0, 1]])
    assert element_order(s, 200) == 4
    assert element_order(t, 200) == 5
    assert element_order(mat(5, [[1, 0], [0, 1]]), 10) == 1


def test_unipotent_order_equals_p():
    for p in (3, 7, 11, 13):
        t = mat(p, [[1, 1], [0, 1]])
        assert element_order(t, 2 * p) == p


def test_det_and_inverse_random_sweep():
    rng = random.Random(11)
    for p in (7, 13):
        checked = 0
        while checked < 60:
            entries = tuple(rng.randrange(p) for _ in range(4))
            m = FpMatrix(p, 2, entries)
            d = m.det()
            ad_minus_bc = (entries[0] * entries[3] - entries[1] * entries[2]) % p
            assert d == ad_minus_bc
            if d == 0:
                continue
            assert (m * m.inverse()).is_identity()
            checked += 1


def test_associativity_random_sweep():
    rng = random.Random(23)
    for p in (7, 13):
        ms = [FpMatrix(p, 2, tuple(rng.randrange(p) for _ in range(4)))
              for _ in range(30)]
        for _ in range(100):
            a, b, c = rng.choice(ms), rng.choice(ms), rng.choice(ms)
            assert (a * b) * c == a * (b * c)


def test_dim3_matrix_inverse():
    m = mat(7, [[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    assert m.det() == 1
    assert m.inverse().rows() == ((1, 6, 0), (0, 1, 0), (0, 0, 1))
    assert element_order(m, 20) == 7


def test_sqrt_table():
    for p in (5, 7, 11, 13):
        table = sqrt_table(p)
        assert len(table) == (p + 1) // 2
        for r, root in table.items():
            assert (root * root) % p == r
        residues = {(x * x) % p for x in range(p)}
        assert set(table) == residues


def test_nonresidue():
    for p in (5, 7, 11, 13, 17):
        d = nonresidue(p)
        assert pow(d, (p - 1) // 2, p) == p - 1


def test_roots_of_unity():
    assert set(nth_roots_of_unity(5, 2)) == {1, 4}
    assert set(nth_roots_of_unity(7, 3)) == {1, 2, 4}
    assert set(nth_roots_of_unity(7, 2)) == {1, 6}


def test_projective_classes_of_sl2_5():
    # all determinant-one matrices over F_5, bucketed by class
    elements = []
    for a in range(5):
        for b in range(5):
            for c in range(5):
                for d in range(5):
                    if (a * d - b * c) % 5 == 1:
                        elements.append(FpMatrix(5, 2, (a, b, c, d)))
    assert len(elements) == 120
    classes = {projective_canonicalize(m) for m in elements}
    assert len(classes) == 60


def test_canonicalize_idempotent_and_constant_on_cosets():
    for p in (5, 7):
        t = mat(p, [[1, 1], [0, 1]])
        s = mat(p, [[0, -1], [1, 0]])
        for m in (t, s, s * t, t * s * t):
            neg = m.scaled(p - 1)
            assert canonical_rep(m) == canonical_rep(neg)
            assert canonical_rep(canonical_rep(m)) == canonical_rep(m)
            assert projective_canonicalize(m) == projective_canonicalize(neg)


def test_projective_rejects_bad_determinant():
    m = mat(5, [[2, 0], [0, 1]])
    assert m.det() == 2
    with pytest.raises(ValueError):
        projective_canonicalize(m)


def test_encode_is_injective_on_sl2_7():
    seen = {}
    count = 0
    for a in range(7):
        for b in range(7):
            for c in range(7):
                for d in range(7):
                    if (a * d - b * c) % 7 == 1:
                        m = FpMatrix(7, 2, (a, b, c, d))
                        key = m.encode()
                        assert key not in seen
                        seen[key] = m
                        count += 1
    assert count == 7 * (7 * 7 - 1)
