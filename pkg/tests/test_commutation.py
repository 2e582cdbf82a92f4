import numpy as np
import pytest

from spsys.commutation import (
    CellBoundError,
    CommutationRelation,
    RelationUnitarityError,
    big_w,
    exchange,
    flip_relation,
    fock_product,
    lift_m_n,
    lift_one_n,
    scalar_relation,
)
from spsys.tensor_linalg import is_unitary, word_to_flat
from .util import random_relation
from .oracles import exchange_oracle


def test_relation_validation():
    with pytest.raises(RelationUnitarityError):
        CommutationRelation(1, 1, np.array([[2.0]]))
    with pytest.raises(ValueError):
        CommutationRelation(2, 1, np.eye(3))
    degenerate = CommutationRelation(3, 0, np.zeros((0, 0)))
    assert degenerate.u.shape == (0, 0)


def test_flip_coefficients():
    cr = flip_relation(2, 3)
    for k in range(2):
        for l in range(3):
            for i in range(2):
                for j in range(3):
                    expected = 1.0 if (k, l) == (i, j) else 0.0
                    assert cr.coefficient(k, l, i, j) == expected


def test_lift_one_n_scalar_and_base_case():
    cr = scalar_relation(0.6 + 0.8j)
    lam = 0.6 + 0.8j
    np.testing.assert_allclose(lift_one_n(cr, 3), [[lam ** 3]], atol=1e-12)
    cr2 = random_relation(np.random.default_rng(3), 2, 2)
    np.testing.assert_allclose(lift_one_n(cr2, 1), cr2.u, atol=1e-12)


def test_lift_one_n_flip_is_slot_permutation():
    m, n = 2, 3
    cr = flip_relation(m, n)
    e_pow = 2
    lifted = lift_one_n(cr, e_pow)
    # maps f_t (x) e_a (x) e_b to e_a (x) e_b (x) f_t
    for t in range(n):
        for a in range(m):
            for b in range(m):
                src = np.zeros(n * m * m, dtype=complex)
                src[(t * m + a) * m + b] = 1.0
                tgt = lifted @ src
                expected_index = word_to_flat(m, n, (2, 1), (a, b, t))
                assert tgt[expected_index] == pytest.approx(1.0)
                assert np.count_nonzero(np.abs(tgt) > 1e-12) == 1


def test_lift_m_n_scalar_flip_and_base():
    lam = np.exp(0.7j)
    np.testing.assert_allclose(lift_m_n(scalar_relation(lam), 2, 3),
                               [[lam ** 6]], atol=1e-12)
    rng = np.random.default_rng(5)
    cr = random_relation(rng, 2, 2)
    np.testing.assert_allclose(lift_m_n(cr, 1, 1), cr.u, atol=1e-12)


@pytest.mark.parametrize("m,n,f_pow,e_pow", [
    (2, 2, 1, 2), (2, 2, 2, 1), (2, 2, 2, 2), (1, 2, 2, 3), (2, 1, 3, 2),
])
def test_lifts_match_slot_oracle(rng, m, n, f_pow, e_pow):
    cr = random_relation(rng, m, n)
    got = lift_m_n(cr, f_pow, e_pow)
    expected = exchange_oracle(cr.u, m, n, f_pow, e_pow)
    np.testing.assert_allclose(got, expected, atol=1e-10)
    assert is_unitary(got, 1e-9)


def test_big_w_trivial_blocks(rng):
    cr = random_relation(rng, 2, 2)
    np.testing.assert_allclose(big_w(cr, (0, 0), (2, 1)), np.eye(8), atol=1e-12)
    np.testing.assert_allclose(big_w(cr, (1, 2), (0, 0)), np.eye(8), atol=1e-12)
    # no F-factors crossing E-factors: still identity
    np.testing.assert_allclose(big_w(cr, (1, 0), (1, 1)), np.eye(8), atol=1e-12)


def test_big_w_scalar_power():
    lam = np.exp(0.3j)
    cr = scalar_relation(lam)
    got = big_w(cr, (1, 2), (3, 1))
    np.testing.assert_allclose(got, [[lam ** 6]], atol=1e-12)


def test_big_w_flip_swaps_middle_slots():
    cr = flip_relation(2, 2)
    w = big_w(cr, (1, 1), (1, 1))
    # e_a f_b e_c f_d -> e_a e_c f_b f_d
    for word in [(0, 1, 1, 0), (1, 0, 0, 1), (1, 1, 0, 0)]:
        a, b, c, d = word
        src = np.zeros(16, dtype=complex)
        src[((a * 2 + b) * 2 + c) * 2 + d] = 1.0
        tgt = w @ src
        expected = word_to_flat(2, 2, (2, 2), (a, c, b, d))
        assert tgt[expected] == pytest.approx(1.0)


def test_big_w_outputs_unitary(rng):
    for m, n in [(1, 2), (2, 2)]:
        cr = random_relation(rng, m, n)
        for left in [(1, 1), (0, 2), (2, 1)]:
            for right in [(1, 0), (1, 1), (0, 2)]:
                assert is_unitary(big_w(cr, left, right), 1e-9)


def test_fock_product_associativity(rng):
    cr = random_relation(rng, 2, 2)
    for _ in range(10):
        degs = [(1, 0), (0, 1), (1, 1)]
        vecs = []
        for d in degs:
            dim = 2 ** (d[0] + d[1])
            vecs.append(rng.standard_normal(dim) + 1j * rng.standard_normal(dim))
        (dx, x), (dy, y), (dz, z) = zip(degs, vecs)
        d_xy, xy = fock_product(cr, dx, x, dy, y)
        d_left, left = fock_product(cr, d_xy, xy, dz, z)
        d_yz, yz = fock_product(cr, dy, y, dz, z)
        d_right, right = fock_product(cr, dx, x, d_yz, yz)
        assert d_left == d_right
        np.testing.assert_allclose(left, right, atol=1e-9)


def test_cell_bound_enforced():
    cr = flip_relation(4, 4)
    with pytest.raises(CellBoundError):
        big_w(cr, (3, 3), (3, 3), max_cell_dim=4096)
    with pytest.raises(CellBoundError):
        lift_one_n(cr, 7, max_cell_dim=4096)


def test_exchange_degenerate_powers(rng):
    cr = random_relation(rng, 2, 3)
    np.testing.assert_allclose(exchange(cr, 0, 2), np.eye(4), atol=1e-12)
    np.testing.assert_allclose(exchange(cr, 2, 0), np.eye(9), atol=1e-12)
    np.testing.assert_allclose(exchange(cr, 0, 0), np.eye(1), atol=1e-12)
