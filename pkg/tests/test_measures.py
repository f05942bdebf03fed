"""Tests for concurrences, the 3-tangle, partial tangles, and their identities."""

from __future__ import annotations

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from tritangle.errors import NumericalConsistencyError
from tritangle.measures import (
    concurrence_bipartition,
    concurrence_mixed,
    measure_set,
    partial_tangle,
    partial_tangle_closed_form,
    three_tangle,
    validate_density,
    verify_identities,
)
from tritangle.states import (
    CanonicalCoeffs,
    PureState3,
    from_canonical,
    haar_random,
    named_state,
    permute_qubits,
    reduced_density,
)

INV_SQRT2 = 1.0 / math.sqrt(2.0)
INV_SQRT5 = 1.0 / math.sqrt(5.0)

# landmark values, computed by hand from the closed forms
W_PAIR_CONCURRENCE = 2.0 / 3.0
W_BIPARTITION = 2.0 * math.sqrt(2.0) / 3.0  # 2 sqrt(det diag(2/3, 1/3))
FIVE_TERM_UNIFORM = (
    2.0 * math.sqrt(2.0) / 5.0,  # tau12 = 2 lam0 sqrt(lam3^2 + lam4^2)
    2.0 * math.sqrt(3.0) / 5.0,  # tau23 at theta = pi/2
    2.0 * math.sqrt(2.0) / 5.0,  # tau31 = 2 lam0 sqrt(lam2^2 + lam4^2)
)

RNG = np.random.default_rng(271828)


def random_two_qubit_pure():
    a = RNG.standard_normal(4) + 1j * RNG.standard_normal(4)
    return a / np.linalg.norm(a)


def random_density4():
    a = RNG.standard_normal((4, 4)) + 1j * RNG.standard_normal((4, 4))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def hyperdeterminant_tangle(psi: PureState3) -> float:
    """Independent 3-tangle route: 4 |Cayley hyperdeterminant|.

    Polynomial in the amplitudes only — no density matrices, no
    eigensolves — so it cross-checks the concurrence pipeline.
    """
    a = psi.amps

    def A(q1, q2, q3):
        return a[4 * q1 + 2 * q2 + q3]

    d1 = (
        A(0, 0, 0) ** 2 * A(1, 1, 1) ** 2
        + A(0, 0, 1) ** 2 * A(1, 1, 0) ** 2
        + A(0, 1, 0) ** 2 * A(1, 0, 1) ** 2
        + A(1, 0, 0) ** 2 * A(0, 1, 1) ** 2
    )
    d2 = (
        A(0, 0, 0) * A(1, 1, 1) * A(0, 1, 1) * A(1, 0, 0)
        + A(0, 0, 0) * A(1, 1, 1) * A(1, 0, 1) * A(0, 1, 0)
        + A(0, 0, 0) * A(1, 1, 1) * A(1, 1, 0) * A(0, 0, 1)
        + A(0, 1, 1) * A(1, 0, 0) * A(1, 0, 1) * A(0, 1, 0)
        + A(0, 1, 1) * A(1, 0, 0) * A(1, 1, 0) * A(0, 0, 1)
        + A(1, 0, 1) * A(0, 1, 0) * A(1, 1, 0) * A(0, 0, 1)
    )
    d3 = (
        A(0, 0, 0) * A(1, 1, 0) * A(1, 0, 1) * A(0, 1, 1)
        + A(1, 1, 1) * A(0, 0, 1) * A(0, 1, 0) * A(1, 0, 0)
    )
    return 4.0 * abs(d1 - 2.0 * d2 + 4.0 * d3)


class TestValidateDensity:
    def test_accepts_valid(self):
        validate_density(random_density4(), 4)

    def test_rejects_non_hermitian(self):
        rho = random_density4()
        rho[0, 1] += 1.0
        with pytest.raises(ValueError):
            validate_density(rho, 4)

    def test_rejects_bad_trace(self):
        with pytest.raises(ValueError):
            validate_density(2.0 * random_density4(), 4)

    def test_rejects_negative_eigenvalue(self):
        with pytest.raises(ValueError):
            validate_density(np.diag([1.5, -0.5, 0.0, 0.0]).astype(complex), 4)

    def test_rejects_wrong_shape(self):
        with pytest.raises(ValueError):
            validate_density(np.eye(3) / 3.0, 4)


class TestConcurrenceMixed:
    def test_bell_state(self):
        phi = np.zeros(4)
        phi[[0, 3]] = INV_SQRT2
        assert_allclose(concurrence_mixed(np.outer(phi, phi)), 1.0, atol=1e-12)

    def test_ghz_pair_is_separable(self):
        rho = reduced_density(named_state("GHZ"), {1, 2})
        assert_allclose(concurrence_mixed(rho), 0.0, atol=1e-12)

    def test_w_pair(self):
        rho = reduced_density(named_state("W"), {1, 2})
        assert_allclose(concurrence_mixed(rho), W_PAIR_CONCURRENCE, atol=1e-12)

    def test_pure_states_match_determinant_formula(self):
        # independent oracle: C(|phi>) = 2 |ad - bc|
        for _ in range(50):
            phi = random_two_qubit_pure()
            expected = 2.0 * abs(phi[0] * phi[3] - phi[1] * phi[2])
            got = concurrence_mixed(np.outer(phi, phi.conj()))
            assert_allclose(got, expected, atol=1e-12)

    def test_range(self):
        for _ in range(50):
            c = concurrence_mixed(random_density4())
            assert 0.0 <= c <= 1.0

    def test_maximally_mixed(self):
        assert concurrence_mixed(np.eye(4) / 4.0) == 0.0


class TestConcurrenceBipartition:
    def test_ghz(self):
        assert_allclose(concurrence_bipartition(named_state("GHZ"), 1), 1.0, atol=1e-12)

    def test_product(self):
        for focus in (1, 2, 3):
            assert_allclose(
                concurrence_bipartition(named_state("product"), focus), 0.0, atol=1e-12
            )

    def test_w(self):
        assert_allclose(
            concurrence_bipartition(named_state("W"), 1), W_BIPARTITION, atol=1e-12
        )

    def test_agrees_with_mixed_route_on_pure_pairs(self):
        # C_{i(jk)} via 2 sqrt(det) must match the Schmidt concurrence of
        # the qubit-i vs pair-(jk) split computed from the state directly
        for i in range(25):
            psi = haar_random(41, i)
            t = psi.amps.reshape(2, 4)
            gram = t @ t.conj().T
            expected = 2.0 * math.sqrt(max(np.linalg.det(gram).real, 0.0))
            assert_allclose(concurrence_bipartition(psi, 1), expected, atol=1e-12)

    def test_invalid_focus(self):
        with pytest.raises(ValueError):
            concurrence_bipartition(named_state("GHZ"), 0)


class TestThreeTangle:
    def test_ghz(self):
        assert_allclose(three_tangle(named_state("GHZ")), 1.0, atol=1e-12)

    def test_w(self):
        assert_allclose(three_tangle(named_state("W")), 0.0, atol=1e-9)

    def test_product(self):
        assert_allclose(three_tangle(named_state("product")), 0.0, atol=1e-12)

    def test_focus_invariance(self):
        for i in range(50):
            psi = haar_random(43, i)
            vals = [three_tangle(psi, focus) for focus in (1, 2, 3)]
            assert max(vals) - min(vals) <= 1e-9

    def test_matches_hyperdeterminant(self):
        # dual-route check against the amplitude polynomial
        for i in range(100):
            psi = haar_random(47, i)
            assert_allclose(three_tangle(psi), hyperdeterminant_tangle(psi), atol=1e-12)

    def test_permutation_invariance(self):
        psi = haar_random(53)
        for perm in ((2, 3, 1), (3, 1, 2), (2, 1, 3)):
            assert_allclose(
                three_tangle(permute_qubits(psi, perm)), three_tangle(psi), atol=1e-9
            )


class TestPartialTangle:
    def test_ghz(self):
        assert_allclose(partial_tangle(named_state("GHZ"), 1, 2), 1.0, atol=1e-12)

    def test_w(self):
        for i, j in ((1, 2), (2, 3), (3, 1)):
            assert_allclose(
                partial_tangle(named_state("W"), i, j), 2.0 / 3.0, atol=1e-9
            )

    def test_product(self):
        assert_allclose(partial_tangle(named_state("product"), 1, 2), 0.0, atol=1e-12)

    def test_symmetric(self):
        for i in range(20):
            psi = haar_random(59, i)
            for a, b in ((1, 2), (2, 3), (3, 1)):
                assert partial_tangle(psi, a, b) == partial_tangle(psi, b, a)

    def test_same_qubit_rejected(self):
        with pytest.raises(ValueError):
            partial_tangle(named_state("GHZ"), 2, 2)


class TestPartialTangleClosedForm:
    def test_ghz_coefficients(self):
        c = CanonicalCoeffs((INV_SQRT2, 0, 0, 0, INV_SQRT2), 0.0)
        assert_allclose(partial_tangle_closed_form(c), (1.0, 1.0, 1.0), atol=1e-12)

    def test_uniform_coefficients(self):
        c = CanonicalCoeffs((INV_SQRT5,) * 5, math.pi / 2.0)
        assert_allclose(partial_tangle_closed_form(c), FIVE_TERM_UNIFORM, atol=1e-12)

    def test_product_coefficients(self):
        c = CanonicalCoeffs((1.0, 0, 0, 0, 0), 0.0)
        assert_allclose(partial_tangle_closed_form(c), (0.0, 0.0, 0.0), atol=0)

    def test_matches_pipeline(self):
        for i in range(100):
            lam = RNG.random(5) + 0.05
            lam /= np.linalg.norm(lam)
            theta = RNG.random() * math.pi
            c = CanonicalCoeffs(tuple(lam), theta)
            psi = from_canonical(c)
            expected = (
                partial_tangle(psi, 1, 2),
                partial_tangle(psi, 2, 3),
                partial_tangle(psi, 3, 1),
            )
            assert_allclose(partial_tangle_closed_form(c), expected, atol=1e-8)


class TestMeasureSet:
    def test_fields_in_range(self):
        for i in range(50):
            m = measure_set(haar_random(61, i))
            for value in (
                m.c12, m.c23, m.c31, m.c1_23, m.c2_31, m.c3_12,
                m.tau, m.tau12, m.tau23, m.tau31,
            ):
                assert 0.0 <= value <= 1.0

    def test_ghz_class_flag(self):
        assert measure_set(named_state("GHZ")).ghz_class
        assert not measure_set(named_state("W")).ghz_class
        assert not measure_set(named_state("product")).ghz_class

    def test_ghz_values(self):
        m = measure_set(named_state("GHZ"))
        assert_allclose([m.c12, m.c23, m.c31], [0.0] * 3, atol=1e-9)
        assert_allclose([m.c1_23, m.c2_31, m.c3_12], [1.0] * 3, atol=1e-9)
        assert_allclose([m.tau, m.tau12, m.tau23, m.tau31], [1.0] * 4, atol=1e-9)

    def test_w_values(self):
        m = measure_set(named_state("W"))
        assert_allclose([m.c12, m.c23, m.c31], [2.0 / 3.0] * 3, atol=1e-9)
        assert_allclose(m.tau, 0.0, atol=1e-9)
        assert_allclose([m.tau12, m.tau23, m.tau31], [2.0 / 3.0] * 3, atol=1e-9)


class TestVerifyIdentities:
    def test_ghz(self):
        rep = verify_identities(named_state("GHZ"))
        assert rep.passed
        assert rep.ckw <= 1e-9
        assert rep.tau_invariance <= 1e-9
        assert rep.sum_identity <= 1e-9
        assert rep.pair_identity <= 1e-9

    def test_w_class_branch(self):
        rep = verify_identities(named_state("W"))
        assert rep.passed
        assert rep.w_class  # tau = 0 forces tau_ij = C_ij
        assert rep.w_class_gap <= 1e-5

    def test_haar_states_pass(self):
        for i in range(100):
            rep = verify_identities(haar_random(67, i))
            assert rep.passed
            assert rep.ckw <= 1e-9
            assert rep.tau_invariance <= 1e-9
            assert rep.sum_identity <= 1e-8
            assert rep.pair_identity <= 1e-8

    def test_monogamy_and_ordering(self):
        # tau_ij >= C_ij - 1e-9 follows from tau_ij^2 = tau + C_ij^2
        for i in range(100):
            m = measure_set(haar_random(71, i))
            assert m.tau12 >= m.c12 - 1e-9
            assert m.tau23 >= m.c23 - 1e-9
            assert m.tau31 >= m.c31 - 1e-9


class TestClampPolicy:
    def test_large_negative_radicand_raises(self):
        # a corrupted density matrix trips the loud-failure path
        with pytest.raises((ValueError, NumericalConsistencyError)):
            rho = np.diag([1.2, -0.2, 0.0, 0.0]).astype(complex)
            concurrence_mixed(rho)
