import numpy as np
import pytest
from numpy.testing import assert_allclose

from opslab import (
    ArgumentError,
    AssumptionError,
    a_m_isometry_defect,
    adjoint,
    ascent,
    defect,
    elementary_operator,
    generalized_derivation,
    is_left_m_inverse,
    kernel_included,
    minimal_defect_order,
    operator_norm,
    power_defect,
    z_inverse,
    z_norm_bound,
)
from opslab.gen import derive_rng, gen_left_m_pair, gen_similar_isometry, haar_unitary

J2 = np.array([[1.0, 1.0], [0.0, 1.0]], dtype=complex)


def random_complex(rng, n):
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(n)


def test_defect_identity_pair_vanishes_for_all_orders():
    eye = np.eye(3, dtype=complex)
    for m in range(1, 6):
        assert_allclose(defect(eye, eye, m), np.zeros((3, 3)), atol=1e-14)


def test_defect_jordan_block_order_two():
    # Hand expansion of S*^2 S^2 - 2 S* S + I for the unit Jordan block.
    assert_allclose(defect(J2, adjoint(J2), 2), np.array([[0, 0], [0, 2]]), atol=1e-13)


def test_defect_jordan_block_order_three_vanishes():
    assert_allclose(defect(J2, adjoint(J2), 3), np.zeros((2, 2)), atol=1e-13)


def test_defect_rejects_mismatched_shapes():
    with pytest.raises(ArgumentError):
        defect(np.eye(2), np.eye(3), 1)
    with pytest.raises(ArgumentError):
        defect(np.eye(2), np.eye(2), 0)


def test_defect_adjoint_symmetry():
    # The identity defect(S,T,m)* = defect(T*,S*,m) holds entrywise; the two
    # evaluation orders associate the matrix powers differently, so agreement
    # is at machine epsilon rather than bit-exact.
    rng = np.random.default_rng(3)
    for _ in range(50):
        n = int(rng.integers(1, 7))
        m = int(rng.integers(1, 6))
        s = random_complex(rng, n)
        t = random_complex(rng, n)
        left = adjoint(defect(s, t, m))
        right = defect(adjoint(t), adjoint(s), m)
        scale = max(1.0, np.abs(left).max())
        assert np.abs(left - right).max() <= 1e-14 * scale


def test_defect_matches_iterated_application():
    rng = np.random.default_rng(9)
    for _ in range(200):
        n = int(rng.integers(1, 7))
        m = int(rng.integers(1, 6))
        s = random_complex(rng, n)
        t = random_complex(rng, n)
        direct = defect(s, t, m)
        iterated = np.eye(n, dtype=complex)
        for _ in range(m):
            iterated = t @ iterated @ s - iterated
        scale = max(1.0, np.abs(direct).max())
        assert np.abs(direct - iterated).max() <= 1e-12 * scale


def test_is_left_m_inverse_unitary():
    u = haar_unitary(4, derive_rng(1))
    ok, residual = is_left_m_inverse(u, adjoint(u), 1)
    assert ok and residual < 1e-12


def test_is_left_m_inverse_metric_pair_all_orders():
    pair = gen_left_m_pair(4, 1, seed=5)
    for m in range(1, 5):
        ok, _ = is_left_m_inverse(pair.s, pair.t, m)
        assert ok


def test_is_left_m_inverse_jordan_strict():
    ok, residual = is_left_m_inverse(J2, adjoint(J2), 2)
    assert not ok
    assert residual == pytest.approx(2.0, rel=1e-12)


def test_minimal_defect_order():
    u = haar_unitary(3, derive_rng(2))
    assert minimal_defect_order(u, adjoint(u), 4) == 1
    assert minimal_defect_order(J2, adjoint(J2), 4) == 3
    half = np.array([[0.5]], dtype=complex)
    assert minimal_defect_order(half, half, 4) is None


def test_power_defect_stability():
    for n in range(1, 7):
        assert np.linalg.norm(power_defect(J2, adjoint(J2), 3, n)) < 1e-10
    pair = gen_left_m_pair(3, 2, seed=11)
    for n in range(1, 7):
        res = np.linalg.norm(power_defect(pair.s, pair.t, 2, n))
        assert res < 1e-8 * max(1.0, np.linalg.norm(pair.s) ** (2 * n))


def test_power_defect_stability_sweep():
    rng = np.random.default_rng(31)
    for trial in range(20):
        n_dim = int(rng.integers(1, 7))
        m = int(rng.integers(1, 4))
        pair = gen_left_m_pair(n_dim, m, seed=500 + trial)
        assert is_left_m_inverse(pair.s, pair.t, m)[0]
        for n in range(1, 7):
            res = np.linalg.norm(power_defect(pair.s, pair.t, m, n))
            scale = max(
                1.0,
                np.linalg.norm(np.linalg.matrix_power(pair.s, n))
                * np.linalg.norm(np.linalg.matrix_power(pair.t, n)),
            )
            assert res <= 1e-8 * scale


def test_z_inverse_first_order_is_power_of_t():
    u = haar_unitary(3, derive_rng(4))
    for n in (1, 2, 3):
        assert_allclose(
            z_inverse(u, adjoint(u), 1, n),
            np.linalg.matrix_power(adjoint(u), n),
            atol=1e-13,
        )


def test_z_inverse_jordan_matches_expansion():
    s, t = J2, adjoint(J2)
    expected = 3 * t - 3 * (t @ t) @ s + np.linalg.matrix_power(t, 3) @ (s @ s)
    z1 = z_inverse(s, t, 3, 1)
    assert_allclose(z1, expected, atol=1e-13)
    assert_allclose(z1 @ s, np.eye(2), atol=1e-12)


def test_z_inverse_metric_pair():
    pair = gen_left_m_pair(4, 2, seed=3)
    s3 = np.linalg.matrix_power(pair.s, 3)
    z3 = z_inverse(pair.s, pair.t, 2, 3)
    assert np.linalg.norm(z3 @ s3 - np.eye(4)) < 1e-9 * max(1.0, np.linalg.norm(s3))


def test_z_inverse_requires_defect_pair():
    with pytest.raises(AssumptionError):
        z_inverse(J2, adjoint(J2), 2, 1)


def test_z_norm_bound_values():
    assert z_norm_bound(1, 1.0) == 2.0
    assert z_norm_bound(3, 2.0) == 32.0
    u = haar_unitary(3, derive_rng(8))
    assert operator_norm(z_inverse(u, adjoint(u), 1, 2)) <= z_norm_bound(1, 1.0)
    with pytest.raises(ArgumentError):
        z_norm_bound(1, 0.0)


def test_a_m_isometry_defect_reduces_to_plain_defect():
    rng = np.random.default_rng(6)
    s = random_complex(rng, 4)
    for m in (1, 2, 3):
        assert_allclose(
            a_m_isometry_defect(np.eye(4), s, m), defect(s, adjoint(s), m), atol=1e-12
        )


def test_a_m_isometry_defect_weighted_metric():
    s, p0, _ = gen_similar_isometry(4, seed=9)
    res = a_m_isometry_defect(p0 @ p0, s, 1)
    assert np.linalg.norm(res) < 1e-9 * np.linalg.norm(p0 @ p0)
    assert np.linalg.norm(a_m_isometry_defect(np.eye(2), J2, 3)) < 1e-12


def test_a_m_isometry_defect_rejects_non_hermitian():
    with pytest.raises(ArgumentError):
        a_m_isometry_defect(np.array([[0, 1], [0, 0]]), np.eye(2), 1)


def test_elementary_operator_matches_definition_on_basis():
    rng = np.random.default_rng(13)
    a = random_complex(rng, 3)
    b = random_complex(rng, 3)
    lin = elementary_operator(a, b)
    for i in range(3):
        for j in range(3):
            e = np.zeros((3, 3), dtype=complex)
            e[i, j] = 1.0
            assert_allclose(lin.apply(e), a @ e @ b - e, atol=1e-13)


def test_generalized_derivation_matches_definition_on_basis():
    rng = np.random.default_rng(14)
    a = random_complex(rng, 3)
    b = random_complex(rng, 3)
    lin = generalized_derivation(a, b)
    for i in range(3):
        for j in range(3):
            e = np.zeros((3, 3), dtype=complex)
            e[i, j] = 1.0
            assert_allclose(lin.apply(e), a @ e - e @ b, atol=1e-13)


def test_elementary_kernel_dimensions():
    # X -> 2X - X is injective.
    assert not elementary_operator(2 * np.eye(2), np.eye(2)).kernel_matrices()
    # X -> X - X is the zero map.
    zero = elementary_operator(np.eye(2), np.eye(2))
    assert len(zero.kernel_matrices()) == 4
    # Unitary with spectrum {e^(i 0.7), e^(-i 0.7)}: U X U = X has the two
    # off-diagonal solutions in the eigenbasis.
    u = np.diag([np.exp(0.7j), np.exp(-0.7j)])
    assert len(elementary_operator(u, u).kernel_matrices()) == 2


def test_derivation_kernel_dimensions():
    assert len(generalized_derivation(np.eye(2), np.eye(2)).kernel_matrices()) == 4
    lin = generalized_derivation(np.diag([1.0, 2.0]), np.diag([3.0, 4.0]))
    assert not lin.kernel_matrices()
    j = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    assert len(generalized_derivation(j, j).kernel_matrices()) == 2


def test_ascent_examples():
    assert ascent(elementary_operator(2 * np.eye(2), np.eye(2))) == 0
    assert ascent(elementary_operator(np.eye(2), np.eye(2))) == 1
    j = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    assert ascent(generalized_derivation(j, j)) == 3


def test_ascent_respects_cap():
    j = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    assert ascent(generalized_derivation(j, j), max_k=2) is None


def test_normal_pair_elementary_ascent_at_most_one():
    rng = np.random.default_rng(21)
    for trial in range(100):
        n = int(rng.integers(2, 5))
        a = haar_unitary(n, derive_rng(trial, 0))
        b = haar_unitary(n, derive_rng(trial, 1))
        asc = ascent(elementary_operator(a, b))
        assert asc is not None and asc <= 1


def test_kernel_included_finds_witness():
    a = np.array([[1.0, 1.0], [0.0, 0.5]], dtype=complex)
    v = np.eye(2, dtype=complex)
    forward = elementary_operator(a, adjoint(v))
    backward = elementary_operator(adjoint(a), v)
    included, witness = kernel_included(forward, backward)
    assert not included
    assert witness is not None
    assert np.linalg.norm(forward.apply(witness)) < 1e-8
    assert np.linalg.norm(backward.apply(witness)) > 1e-4
