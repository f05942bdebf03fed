"""Entanglement measures for three-qubit pure states.

Pairwise (Wootters) concurrences of the reduced two-qubit states, the
one-vs-rest bipartition concurrences, the 3-tangle, and the partial
tangles, together with the identity checks relating them:

* monogamy: C_ij^2 + C_ik^2 <= C_i(jk)^2,
* 3-tangle focus invariance,
* tau_ij^2 = tau + C_ij^2 and the sum rule
  tau_12^2 + tau_23^2 + tau_31^2 = 3*tau + C_12^2 + C_23^2 + C_31^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalConsistencyError, clamp_nonneg
from .linalg import SPIN_FLIP, det2, require_finite
from .states import CanonicalCoeffs, PureState3, reduced_density

GHZ_CLASS_THRESHOLD = 1e-8
_TAU_INVARIANCE_TOL = 1e-9


@dataclass(frozen=True)
class MeasureSet:
    """Every measure of one state: concurrences, 3-tangle, partial tangles."""

    c12: float
    c23: float
    c31: float
    c1_23: float
    c2_31: float
    c3_12: float
    tau: float
    tau12: float
    tau23: float
    tau31: float
    ghz_class: bool


@dataclass(frozen=True)
class IdentityReport:
    """Residuals of the analytic identities for one state."""

    ckw: float
    tau_invariance: float
    pair_identity: float
    sum_identity: float
    w_class: bool
    w_class_gap: float
    passed: bool


def validate_density(rho: np.ndarray, dim: int) -> tuple[np.ndarray, np.ndarray]:
    """Check the density-matrix contract and return its eigendecomposition.

    Hermitian within 1e-10, unit trace within 1e-10, eigenvalues above
    -1e-10.  Returns ``(w, q)`` from ``eigh`` (ascending eigenvalues) for
    reuse by the caller.
    """
    rho = np.asarray(rho, dtype=complex)
    require_finite(rho, "density matrix")
    if rho.shape != (dim, dim):
        raise ValueError(f"expected a {dim}x{dim} density matrix, got {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > 1e-10:
        raise ValueError("density matrix is not Hermitian within 1e-10")
    if abs(np.trace(rho).real - 1.0) > 1e-10:
        raise ValueError("density matrix trace deviates from 1 beyond 1e-10")
    w, q = np.linalg.eigh(rho)
    if w[0] < -1e-10:
        raise ValueError(f"density matrix has eigenvalue {w[0]:.3e} below -1e-10")
    return w, q


def concurrence_mixed(rho: np.ndarray) -> float:
    """Wootters concurrence of a two-qubit density matrix.

    C = max(0, sqrt(mu1) - sqrt(mu2) - sqrt(mu3) - sqrt(mu4)) where the
    mu are the eigenvalues of rho * (sy(x)sy) rho^* (sy(x)sy), descending.

    The square roots sqrt(mu) are evaluated as the singular values of
    X^T (sy(x)sy) X with X = Q sqrt(W) from the eigendecomposition of rho
    -- the same numbers the textbook formula gives, but exact on the
    rank-deficient matrices that partial traces of pure states produce.
    Eigenvalues of rho below 1e-13 are clamped to zero before the square
    roots are taken.
    """
    w, q = validate_density(rho, 4)
    w = np.where(w < 1e-13, 0.0, w)
    x = q * np.sqrt(w)
    sv = np.linalg.svd(x.T @ SPIN_FLIP @ x, compute_uv=False)
    val = float(sv[0] - sv[1] - sv[2] - sv[3])
    return min(max(val, 0.0), 1.0)


def concurrence_bipartition(psi: PureState3, focus: int) -> float:
    """Concurrence of the split (focus qubit) vs (the other two).

    Equals ``2*sqrt(det rho_focus)`` for pure three-qubit states.
    """
    if focus not in (1, 2, 3):
        raise ValueError(f"focus must be 1, 2 or 3, got {focus!r}")
    det = det2(reduced_density(psi, {focus})).real
    det = clamp_nonneg(det, what=f"det of reduced state of qubit {focus}")
    return min(2.0 * math.sqrt(det), 1.0)


def _pair_concurrences(psi: PureState3) -> tuple[float, float, float]:
    c12 = concurrence_mixed(reduced_density(psi, {1, 2}))
    c23 = concurrence_mixed(reduced_density(psi, {2, 3}))
    c31 = concurrence_mixed(reduced_density(psi, {1, 3}))
    return c12, c23, c31


def _tangle_per_focus(psi: PureState3) -> tuple[float, float, float]:
    """Raw (unclamped) 3-tangle values for the three focus choices."""
    c12, c23, c31 = _pair_concurrences(psi)
    cb = [concurrence_bipartition(psi, k) for k in (1, 2, 3)]
    return (
        cb[0] ** 2 - c12**2 - c31**2,
        cb[1] ** 2 - c12**2 - c23**2,
        cb[2] ** 2 - c31**2 - c23**2,
    )


def three_tangle(psi: PureState3, focus: int = 1) -> float:
    """Residual tripartite entanglement C_i(jk)^2 - C_ij^2 - C_ik^2.

    Invariant under the choice of focus qubit; small negative round-off
    is clamped to zero, anything below -1e-6 raises.
    """
    if focus not in (1, 2, 3):
        raise ValueError(f"focus must be 1, 2 or 3, got {focus!r}")
    raw = _tangle_per_focus(psi)[focus - 1]
    return clamp_nonneg(raw, what="3-tangle")


def _partial_tangle_directed(psi: PureState3, i: int, j: int) -> float:
    """sqrt(C_i(jk)^2 - C_ik^2) computed with qubit ``i`` as the focus."""
    k = ({1, 2, 3} - {i, j}).pop()
    cik = concurrence_mixed(reduced_density(psi, {i, k}))
    radicand = concurrence_bipartition(psi, i) ** 2 - cik**2
    return math.sqrt(clamp_nonneg(radicand, what=f"partial-tangle radicand ({i},{j})"))


def partial_tangle(psi: PureState3, i: int, j: int) -> float:
    """Partial tangle tau_ij = sqrt(C_i(jk)^2 - C_ik^2).

    Symmetric in (i, j) by construction: both orders evaluate the
    canonical orientation min(i,j) -> max(i,j).
    """
    if i not in (1, 2, 3) or j not in (1, 2, 3) or i == j:
        raise ValueError(f"need two distinct qubits from 1..3, got ({i!r}, {j!r})")
    return _partial_tangle_directed(psi, min(i, j), max(i, j))


def partial_tangle_closed_form(c: CanonicalCoeffs) -> tuple[float, float, float]:
    """Partial tangles straight from the canonical coefficients.

    tau12 = 2*lam0*sqrt(lam3^2 + lam4^2)
    tau23 = 2*sqrt(lam0^2 lam4^2 + lam1^2 lam4^2 + lam2^2 lam3^2
                   - 2 lam1 lam2 lam3 lam4 cos(theta))
    tau31 = 2*lam0*sqrt(lam2^2 + lam4^2)
    """
    l0, l1, l2, l3, l4 = c.lambdas
    radicand = (
        l0**2 * l4**2 + l1**2 * l4**2 + l2**2 * l3**2 - 2.0 * l1 * l2 * l3 * l4 * math.cos(c.theta)
    )
    if radicand < -1e-12:
        raise ValueError(f"tau23 radicand {radicand:.3e} is negative; coefficients are invalid")
    tau12 = 2.0 * l0 * math.sqrt(l3**2 + l4**2)
    tau23 = 2.0 * math.sqrt(max(radicand, 0.0))
    tau31 = 2.0 * l0 * math.sqrt(l2**2 + l4**2)
    return tau12, tau23, tau31


def measure_set(psi: PureState3) -> MeasureSet:
    """All measures of one state, cross-checked for focus invariance."""
    c12, c23, c31 = _pair_concurrences(psi)
    cb1 = concurrence_bipartition(psi, 1)
    cb2 = concurrence_bipartition(psi, 2)
    cb3 = concurrence_bipartition(psi, 3)
    taus = (
        cb1**2 - c12**2 - c31**2,
        cb2**2 - c12**2 - c23**2,
        cb3**2 - c31**2 - c23**2,
    )
    spread = max(taus) - min(taus)
    if spread > _TAU_INVARIANCE_TOL:
        raise NumericalConsistencyError(
            f"3-tangle differs across focus choices by {spread:.3e} (> {_TAU_INVARIANCE_TOL})"
        )
    tau = clamp_nonneg(taus[0], what="3-tangle")
    tau12 = math.sqrt(clamp_nonneg(cb1**2 - c31**2, what="tau12 radicand"))
    tau23 = math.sqrt(clamp_nonneg(cb2**2 - c12**2, what="tau23 radicand"))
    tau31 = math.sqrt(clamp_nonneg(cb1**2 - c12**2, what="tau31 radicand"))
    return MeasureSet(
        c12=c12,
        c23=c23,
        c31=c31,
        c1_23=cb1,
        c2_31=cb2,
        c3_12=cb3,
        tau=tau,
        tau12=tau12,
        tau23=tau23,
        tau31=tau31,
        ghz_class=tau > GHZ_CLASS_THRESHOLD,
    )


def verify_identities(psi: PureState3) -> IdentityReport:
    """Residuals of every analytic identity on one state.

    Checks monogamy per focus, focus invariance of the 3-tangle, the pair
    identity tau_ij^2 = tau + C_ij^2 in both orientations, the sum rule,
    and -- when tau vanishes -- that the partial tangles collapse onto the
    pairwise concurrences.
    """
    ms = measure_set(psi)
    taus = _tangle_per_focus(psi)
    tau_invariance = max(taus) - min(taus)
    # Monogamy margin: positive residual means the inequality is violated.
    ckw = max(0.0, -min(taus))

    pair_identity = 0.0
    for (i, j), tau_ij, c_ij in (
        ((1, 2), ms.tau12, ms.c12),
        ((2, 3), ms.tau23, ms.c23),
        ((3, 1), ms.tau31, ms.c31),
    ):
        expected = ms.tau + c_ij**2
        pair_identity = max(
            pair_identity,
            abs(_partial_tangle_directed(psi, i, j) ** 2 - expected),
            abs(_partial_tangle_directed(psi, j, i) ** 2 - expected),
            abs(tau_ij**2 - expected),
        )

    lhs = ms.tau12**2 + ms.tau23**2 + ms.tau31**2
    rhs = 3.0 * ms.tau + ms.c12**2 + ms.c23**2 + ms.c31**2
    sum_identity = abs(lhs - rhs)

    w_class = ms.tau < 1e-10
    w_class_gap = 0.0
    if w_class:
        w_class_gap = max(
            abs(ms.tau12 - ms.c12), abs(ms.tau23 - ms.c23), abs(ms.tau31 - ms.c31)
        )

    passed = (
        ckw <= 1e-9
        and tau_invariance <= 1e-9
        and pair_identity <= 1e-8
        and sum_identity <= 1e-8
        and w_class_gap < 1e-5
    )
    return IdentityReport(
        ckw=ckw,
        tau_invariance=tau_invariance,
        pair_identity=pair_identity,
        sum_identity=sum_identity,
        w_class=w_class,
        w_class_gap=w_class_gap,
        passed=passed,
    )
