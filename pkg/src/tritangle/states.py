"""Three-qubit pure states: construction, sampling, and the five-term canonical form.

A state lives in the computational basis with index convention
``4*q1 + 2*q2 + q3`` (qubit 1 most significant).  Every state admits a
local-unitary normal form

    lam0|000> + lam1*exp(i*theta)|100> + lam2|101> + lam3|110> + lam4|111>

with ``lam_j >= 0`` and ``0 <= theta <= pi``; :func:`to_canonical` finds one
such representative together with the three local unitaries that realize it.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .linalg import det2, partial_trace, require_finite

_NORM_TOL = 1e-10
_COEFF_TOL = 1e-13  # quadratic-coefficient degeneracy threshold
_ZERO_AMP = 1e-12  # below this an amplitude counts as absent for phase fixing


@dataclass(frozen=True)
class PureState3:
    """Normalized 8-component amplitude vector for qubits 1, 2, 3."""

    amps: np.ndarray

    def __post_init__(self) -> None:
        a = np.asarray(self.amps, dtype=complex)
        if a.shape != (8,):
            raise ValueError(f"a three-qubit state needs 8 amplitudes, got shape {a.shape}")
        require_finite(a, "state amplitudes")
        norm = float(np.linalg.norm(a))
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(f"state norm {norm!r} deviates from 1 beyond {_NORM_TOL}")
        a = a.copy()
        a.setflags(write=False)
        object.__setattr__(self, "amps", a)


@dataclass(frozen=True)
class TwoQubitPure:
    """Normalized 4-component amplitude vector for one qubit pair."""

    amps: np.ndarray

    def __post_init__(self) -> None:
        a = np.asarray(self.amps, dtype=complex)
        if a.shape != (4,):
            raise ValueError(f"a two-qubit state needs 4 amplitudes, got shape {a.shape}")
        require_finite(a, "state amplitudes")
        norm = float(np.linalg.norm(a))
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(f"state norm {norm!r} deviates from 1 beyond {_NORM_TOL}")
        a = a.copy()
        a.setflags(write=False)
        object.__setattr__(self, "amps", a)

    @cached_property
    def schmidt(self) -> tuple[float, float]:
        """Squared singular values (alpha, beta) of the amplitude matrix, descending."""
        s = np.linalg.svd(self.amps.reshape(2, 2), compute_uv=False)
        return float(s[0] ** 2), float(s[1] ** 2)


@dataclass(frozen=True)
class CanonicalCoeffs:
    """Coefficients (lam0..lam4, theta) of the five-term canonical form."""

    lambdas: tuple[float, float, float, float, float]
    theta: float

    def __post_init__(self) -> None:
        lam = tuple(float(x) for x in self.lambdas)
        if len(lam) != 5:
            raise ValueError(f"expected 5 coefficients, got {len(lam)}")
        if not all(math.isfinite(x) for x in lam) or not math.isfinite(self.theta):
            raise ValueError("canonical coefficients must be finite")
        if any(x < 0.0 for x in lam):
            raise ValueError(f"canonical coefficients must be nonnegative, got {lam}")
        ssum = sum(x * x for x in lam)
        if abs(ssum - 1.0) > _NORM_TOL:
            raise ValueError(f"sum of squared coefficients {ssum!r} deviates from 1")
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta = {self.theta!r} outside [0, pi]")
        object.__setattr__(self, "lambdas", lam)
        object.__setattr__(self, "theta", float(self.theta))


class CanonicalDecomposition(NamedTuple):
    """Canonical coefficients plus the local unitaries that produce them."""

    coeffs: CanonicalCoeffs
    locals: tuple[np.ndarray, np.ndarray, np.ndarray]


_NAMED = {
    "GHZ": ([0, 7], 1.0 / math.sqrt(2.0)),
    "W": ([1, 2, 4], 1.0 / math.sqrt(3.0)),
    "product": ([0], 1.0),
}


def named_state(name: str) -> PureState3:
    """Return one of the reference states ``GHZ``, ``W`` or ``product``."""
    try:
        idx, value = _NAMED[name]
    except KeyError:
        raise ValueError(f"unknown state name {name!r}; expected one of {sorted(_NAMED)}") from None
    amps = np.zeros(8, dtype=complex)
    amps[idx] = value
    return PureState3(amps)


def haar_random(seed: int, index: int = 0) -> PureState3:
    """Haar-distributed random state, reproducible per (seed, index).

    The generator is counter based: sample ``index`` under a fixed ``seed``
    always yields the same state, independent of how many other samples
    were drawn before it.
    """
    if seed < 0 or index < 0:
        raise ValueError("seed and index must be nonnegative")
    rng = np.random.Generator(np.random.Philox(key=np.array([seed, index], dtype=np.uint64)))
    re, im = rng.standard_normal((2, 8))
    amps = re + 1j * im
    return PureState3(amps / np.linalg.norm(amps))


def permute_qubits(psi: PureState3, perm: tuple[int, int, int]) -> PureState3:
    """Relabel qubits so that new qubit ``i`` carries old qubit ``perm[i-1]``.

    Example: ``perm = (3, 2, 1)`` swaps qubits 1 and 3, sending |001> to |100>.
    """
    if sorted(perm) != [1, 2, 3]:
        raise ValueError(f"perm {perm!r} is not a permutation of (1, 2, 3)")
    tensor = psi.amps.reshape(2, 2, 2)
    return PureState3(np.transpose(tensor, axes=[p - 1 for p in perm]).reshape(8))


def reduced_density(psi: PureState3, keep: set[int]) -> np.ndarray:
    """Reduced density matrix of the kept qubits (ascending order)."""
    rho = np.outer(psi.amps, psi.amps.conj())
    return partial_trace(rho, keep, 3)


def apply_local_unitaries(
    psi: PureState3, unitaries: tuple[np.ndarray, np.ndarray, np.ndarray]
) -> PureState3:
    """Apply ``U1 (x) U2 (x) U3`` to the state."""
    mats = [np.asarray(u, dtype=complex) for u in unitaries]
    for u in mats:
        if u.shape != (2, 2):
            raise ValueError("local unitaries must be 2x2")
        if np.max(np.abs(u @ u.conj().T - np.eye(2))) > 1e-10:
            raise ValueError("local operator is not unitary within 1e-10")
    out = np.einsum("ai,bj,ck,ijk->abc", mats[0], mats[1], mats[2], psi.amps.reshape(2, 2, 2))
    return PureState3(out.reshape(8))


def from_canonical(c: CanonicalCoeffs) -> PureState3:
    """Amplitudes of the five-term canonical form for the given coefficients."""
    lam = c.lambdas
    amps = np.zeros(8, dtype=complex)
    amps[0] = lam[0]
    amps[4] = lam[1] * cmath.exp(1j * c.theta)
    amps[5] = lam[2]
    amps[6] = lam[3]
    amps[7] = lam[4]
    return PureState3(amps)


def reconstruction_residual(psi: PureState3, dec: CanonicalDecomposition) -> float:
    """Max-norm error of ``(L1(x)L2(x)L3)|psi> - from_canonical(coeffs)``."""
    rotated = apply_local_unitaries(psi, dec.locals)
    return float(np.max(np.abs(rotated.amps - from_canonical(dec.coeffs).amps)))


def _root_candidates(t0: np.ndarray, t1: np.ndarray) -> list[tuple[complex, complex]]:
    """Qubit-1 rotations (c, s), with |c|^2+|s|^2 = 1, making c*T0 + s*T1 singular.

    The condition det(c*T0 + s*T1) = 0 is, in x = s/c, the quadratic
    c0 + c1*x + c2*x^2 = 0 with c0 = det(T0), c2 = det(T1) and
    c1 = tr(T0)tr(T1) - tr(T0 T1).  Besides the finite roots this also
    admits the projective root at infinity, (c, s) = (0, 1), whenever the
    leading coefficient vanishes.
    """
    c0 = det2(t0)
    c2 = det2(t1)
    c1 = np.trace(t0) * np.trace(t1) - np.trace(t0 @ t1)

    def polish(x: complex) -> complex:
        # A couple of Newton steps keep det(T0 + x*T1) at round-off level.
        for _ in range(2):
            g = c0 + c1 * x + c2 * x * x
            gp = c1 + 2.0 * c2 * x
            if abs(gp) < 1e-300:
                break
            x = x - g / gp
        return x

    def unit(x: complex) -> tuple[complex, complex]:
        n = math.sqrt(1.0 + abs(x) ** 2)
        return 1.0 / n, x / n

    cands: list[tuple[complex, complex]] = []
    if abs(c2) > _COEFF_TOL:
        disc = np.sqrt(complex(c1 * c1 - 4.0 * c0 * c2))
        # Pick the subtraction-free branch for the first root.
        q = -0.5 * (c1 - disc) if abs(c1 - disc) > abs(c1 + disc) else -0.5 * (c1 + disc)
        if abs(q) > 0.0:
            roots = [q / c2, c0 / q]
        else:
            roots = [0.0 + 0.0j]
        for x in roots:
            x = polish(x)
            if cmath.isfinite(x):
                cands.append(unit(x))
        # The vertex is the exact root location when the discriminant
        # (nearly) vanishes; the quadratic formula only resolves a double
        # root to sqrt(eps), and Newton cannot polish it either.
        vertex = -c1 / (2.0 * c2)
        if cmath.isfinite(vertex):
            cands.append(unit(vertex))
    else:
        cands.append((0.0 + 0.0j, 1.0 + 0.0j))
        if abs(c1) > _COEFF_TOL:
            cands.append(unit(polish(-c0 / c1)))
    if abs(c0) <= _COEFF_TOL:
        cands.append((1.0 + 0.0j, 0.0 + 0.0j))
    return cands


def _fix_phases(
    z0: complex, z4: complex, z5: complex, z6: complex, z7: complex
) -> tuple[float, float, float, float, float]:
    """Choose phases (gamma, phi1, phi2, phi3) zeroing all args except theta.

    The diagonal freedom exp(i*gamma) * diag(1, e^{i phi_q}) per qubit shifts
    the five surviving amplitudes by gamma + phi-sums; four of the five args
    can always be cancelled.  When all of z4..z7 are present the leftover
    phase is the invariant arg(z4) - arg(z5) - arg(z6) + arg(z7); otherwise
    theta itself is removable and set to 0.
    """
    gamma = -cmath.phase(z0) if abs(z0) >= _ZERO_AMP else 0.0
    present = [abs(z) >= _ZERO_AMP for z in (z4, z5, z6, z7)]
    if all(present):
        phi3 = cmath.phase(z6) - cmath.phase(z7)
        phi1 = -cmath.phase(z5) - gamma - phi3
        phi2 = -cmath.phase(z6) - gamma - phi1
        theta = cmath.phase(z4) + gamma + phi1
        return gamma, phi1, phi2, phi3, theta

    # Rows of the phase-shift pattern (phi1, phi2, phi3) for entries
    # 100, 101, 110, 111; any <=3 of them are linearly independent, so the
    # remaining system is solved exactly (minimum-norm for free phases).
    pattern = {0: (1, 0, 0), 1: (1, 0, 1), 2: (1, 1, 0), 3: (1, 1, 1)}
    rows = []
    rhs = []
    for k, z in enumerate((z4, z5, z6, z7)):
        if present[k]:
            rows.append(pattern[k])
            rhs.append(-cmath.phase(z) - gamma)
    if rows:
        sol, *_ = np.linalg.lstsq(np.array(rows, dtype=float), np.array(rhs), rcond=None)
        phi1, phi2, phi3 = (float(v) for v in sol)
    else:
        phi1 = phi2 = phi3 = 0.0
    return gamma, phi1, phi2, phi3, 0.0


def _candidate_decomposition(
    psi: PureState3, c: complex, s: complex
) -> tuple[CanonicalDecomposition, float]:
    """Full decomposition for one qubit-1 rotation.

    A leftover phase outside [0, pi] is snapped to the nearest boundary;
    the reconstruction-residual ranking in ``to_canonical`` then keeps such
    a candidate only when the snap was genuinely a boundary round-off
    (near-degenerate slices collapse theta onto {0, pi} up to noise of the
    degeneracy scale).
    """
    v1 = np.array([[c, s], [-np.conj(s), np.conj(c)]], dtype=complex)
    t0 = psi.amps[:4].reshape(2, 2)
    t1 = psi.amps[4:].reshape(2, 2)
    t0p = c * t0 + s * t1
    t1p = -np.conj(s) * t0 + np.conj(c) * t1

    u, sv, vh = np.linalg.svd(t0p)
    a2 = u.conj().T  # qubit-2 rotation
    a3 = vh.conj()  # qubit-3 rotation; slices map as T -> A2 @ T @ A3.T
    t0n = a2 @ t0p @ a3.T
    t1n = a2 @ t1p @ a3.T

    if sv[0] < 1e-10:
        # First slice is (numerically) gone: the state factors as
        # |1>_1 (x) |pair>, and a Schmidt rotation of the second slice
        # puts everything on the 100/111 entries.
        u2, sv2, vh2 = np.linalg.svd(t1n)
        lam = (0.0, float(sv2[0]), 0.0, 0.0, float(sv2[1]))
        coeffs = CanonicalCoeffs(lam, 0.0)
        locs = (v1, u2.conj().T @ a2, vh2.conj() @ a3)
        return CanonicalDecomposition(coeffs, locs), 0.0

    z0 = t0n[0, 0]
    z4, z5, z6, z7 = t1n[0, 0], t1n[0, 1], t1n[1, 0], t1n[1, 1]
    gamma, phi1, phi2, phi3, theta_raw = _fix_phases(z0, z4, z5, z6, z7)

    # Wrap to (-pi, pi]; -pi and pi give the same phase factor.
    theta = math.atan2(math.sin(theta_raw), math.cos(theta_raw))
    if theta <= -math.pi + 1e-12:
        theta = math.pi
    if theta < 0.0:
        theta = 0.0 if -theta <= math.pi + theta else math.pi
    theta = min(max(theta, 0.0), math.pi)

    lam = (abs(z0), abs(z4), abs(z5), abs(z6), abs(z7))
    if lam[1] < _ZERO_AMP:
        theta = 0.0
    # Entries dropped from the canonical pattern (the 001/010/011 slots)
    # carry at most the second singular value of the singular slice, which
    # the root polish keeps at round-off; renormalize what is left.
    scale = math.sqrt(sum(x * x for x in lam))
    coeffs = CanonicalCoeffs(tuple(x / scale for x in lam), theta)

    d1 = cmath.exp(1j * gamma) * np.array([[1.0, 0.0], [0.0, cmath.exp(1j * phi1)]])
    d2 = np.array([[1.0, 0.0], [0.0, cmath.exp(1j * phi2)]])
    d3 = np.array([[1.0, 0.0], [0.0, cmath.exp(1j * phi3)]])
    locs = (d1 @ v1, d2 @ a2, d3 @ a3)
    return CanonicalDecomposition(coeffs, locs), theta


def to_canonical(psi: PureState3) -> CanonicalDecomposition:
    """Canonical five-term form of ``psi`` and the local unitaries realizing it.

    Among the candidate rotations that make the first qubit-1 slice singular
    (both quadratic roots, their vertex, plus the degenerate fallbacks),
    candidates that fail to reproduce ``psi`` within 1e-10 are discarded
    (falling back to the most accurate one if none qualify); the surviving
    representative with theta in [0, pi] and the largest lam0 is returned,
    ties going to theta <= pi/2.

    Returns
    -------
    CanonicalDecomposition
        ``(coeffs, locals)`` with ``(L1(x)L2(x)L3)|psi>`` equal to
        ``from_canonical(coeffs)`` within 1e-9 componentwise.
    """
    t0 = psi.amps[:4].reshape(2, 2)
    t1 = psi.amps[4:].reshape(2, 2)
    results = []
    for c, s in _root_candidates(t0, t1):
        dec, theta = _candidate_decomposition(psi, c, s)
        results.append((dec, theta, reconstruction_residual(psi, dec)))
    exact = [item for item in results if item[2] <= 1e-10]
    if not exact:
        exact = [min(results, key=lambda item: item[2])]

    def rank(item: tuple[CanonicalDecomposition, float, float]) -> tuple[float, int, float]:
        dec, theta, _ = item
        # Larger lam0 first; among lam0-ties (1e-12), theta <= pi/2 wins,
        # then the smaller theta, keeping the output deterministic.
        return (-round(dec.coeffs.lambdas[0] / 1e-12) * 1e-12, int(theta > math.pi / 2), theta)

    exact.sort(key=rank)
    return exact[0][0]
