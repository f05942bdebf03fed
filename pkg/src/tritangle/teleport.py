"""Measurement-assisted teleportation through a three-qubit resource.

One qubit (the *focus*) is measured in a chosen one-qubit basis, which
leaves the remaining pair in a pure two-qubit channel state; a standard
teleportation then runs over that channel.  The figure of merit is the
split fully entangled fraction

    f = sum_t p_t * fef(post-measurement state_t),

maximized over all measurement settings.  The maximal average fidelity is
F = (2f + 1)/3.  The maximum is found numerically (coarse grid over the
three angles parametrizing U(2) mod phase, then coordinate-wise
golden-section refinement with random restarts); closed forms in the
canonical coefficients provide an independent cross-check.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalConsistencyError
from .linalg import MAGIC_BASIS, det2, require_finite
from .measures import measure_set, partial_tangle, validate_density
from .states import CanonicalCoeffs, PureState3, TwoQubitPure, permute_qubits

# Wire order (focus, j, k) handed to measure_focus for each focus choice.
_FOCUS_ORDER = {1: (1, 2, 3), 2: (2, 3, 1), 3: (3, 1, 2)}
_PARTNER_PAIR = {1: (2, 3), 2: (3, 1), 3: (1, 2)}

_GRID = 24
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
_GOLDEN_TOL = 1e-10
_RESTART_KEY = 982451653  # fixed stream for the optimizer's random restarts
_MC_STREAM = 2**63  # second Philox key word, keeps MC draws off the state stream
_DEGENERATE_P = 1e-14


@dataclass(frozen=True)
class MeasurementSetting:
    """Three angles (t, a, b) fixing a one-qubit measurement basis.

    The measured observable's eigenbasis is the rows of::

        [[ cos(t) e^{ia},  sin(t) e^{ib}],
         [-sin(t) e^{-ib}, cos(t) e^{-ia}]]

    which covers U(2) up to an (irrelevant) global phase.
    """

    t: float
    a: float
    b: float

    def __post_init__(self) -> None:
        for name in ("t", "a", "b"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"angle {name} is not finite")

    @property
    def matrix(self) -> np.ndarray:
        c, s = math.cos(self.t), math.sin(self.t)
        ea, eb = cmath.exp(1j * self.a), cmath.exp(1j * self.b)
        return np.array(
            [[c * ea, s * eb], [-s * eb.conjugate(), c * ea.conjugate()]], dtype=complex
        )

    @classmethod
    def from_matrix(cls, u: np.ndarray) -> "MeasurementSetting":
        """Angles reproducing ``u`` up to a global phase."""
        u = np.asarray(u, dtype=complex)
        if u.shape != (2, 2):
            raise ValueError(f"expected a 2x2 matrix, got shape {u.shape}")
        require_finite(u, "measurement matrix")
        if np.max(np.abs(u @ u.conj().T - np.eye(2))) > 1e-10:
            raise ValueError("measurement matrix is not unitary within 1e-10")
        v = u / cmath.sqrt(det2(u))  # det 1, so v = [[α, β], [-β*, α*]]
        alpha, beta = complex(v[0, 0]), complex(v[0, 1])
        t = math.atan2(abs(beta), abs(alpha))
        a = cmath.phase(alpha) if abs(alpha) > 1e-12 else 0.0
        b = cmath.phase(beta) if abs(beta) > 1e-12 else 0.0
        return cls(t, a, b)


IDENTITY_SETTING = MeasurementSetting(0.0, 0.0, 0.0)
HADAMARD_SETTING = MeasurementSetting(math.pi / 4, math.pi / 2, math.pi / 2)


@dataclass(frozen=True)
class OutcomeRecord:
    """One branch of the focus measurement."""

    t: int
    probability: float
    post_state: TwoQubitPure | None

    @property
    def degenerate(self) -> bool:
        return self.post_state is None


@dataclass(frozen=True)
class TeleportReport:
    """Optimized protocol summary for one focus choice."""

    focus: int
    f: float
    F: float
    setting: MeasurementSetting
    tau_partner: float
    mc_estimate: float | None = None
    mc_stderr: float | None = None
    samples: int = 0


def _focus_slices(psi: PureState3, focus: int) -> tuple[np.ndarray, np.ndarray]:
    """2x2 amplitude slices S_0, S_1 of psi along the focus qubit."""
    if focus not in (1, 2, 3):
        raise ValueError(f"focus must be 1, 2 or 3, got {focus!r}")
    amps = permute_qubits(psi, _FOCUS_ORDER[focus]).amps
    return amps[:4].reshape(2, 2), amps[4:].reshape(2, 2)


def measure_focus(
    psi: PureState3, focus: int, setting: MeasurementSetting
) -> tuple[OutcomeRecord, OutcomeRecord]:
    """Measure the focus qubit; return both outcome branches.

    Outcome ``t`` occurs with probability ``<t|U rho_focus U^dag|t>`` and
    leaves the remaining pair (in cyclic wire order) in a normalized pure
    state.  A branch with probability below 1e-14 is degenerate: its
    post-measurement state is undefined and reported as None.
    """
    s0, s1 = _focus_slices(psi, focus)
    u = setting.matrix
    records = []
    for t in (0, 1):
        omega = u[t, 0] * s0 + u[t, 1] * s1
        p = float(np.sum(omega.real**2 + omega.imag**2))
        if p < _DEGENERATE_P:
            records.append(OutcomeRecord(t=t, probability=p, post_state=None))
        else:
            post = TwoQubitPure(omega.reshape(4) / math.sqrt(p))
            records.append(OutcomeRecord(t=t, probability=p, post_state=post))
    return records[0], records[1]


def fef_pure(phi: TwoQubitPure) -> float:
    """Fully entangled fraction of a pure two-qubit state: 1/2 + sqrt(αβ)."""
    alpha, beta = phi.schmidt
    return 0.5 + math.sqrt(max(alpha * beta, 0.0))


def fef_mixed(rho: np.ndarray) -> float:
    """Fully entangled fraction of a two-qubit density matrix.

    max over maximally entangled |e> of <e|rho|e>.  In the magic basis the
    maximally entangled states are exactly the real unit vectors, so the
    maximum is the largest eigenvalue of Re(M^dag rho M).
    """
    validate_density(rho, 4)
    rho_m = MAGIC_BASIS.conj().T @ np.asarray(rho, dtype=complex) @ MAGIC_BASIS
    sym = 0.5 * (rho_m.real + rho_m.real.T)
    return float(np.linalg.eigvalsh(sym)[-1])


def fidelity_from_fef(f: float) -> float:
    """Maximal average teleportation fidelity (2f + 1)/3 from the FEF."""
    if not 0.25 - 1e-9 <= f <= 1.0 + 1e-9:
        raise ValueError(f"fully entangled fraction {f!r} outside [1/4, 1]")
    return (2.0 * f + 1.0) / 3.0


def split_fidelity_objective(
    psi: PureState3, focus: int, setting: MeasurementSetting
) -> float:
    """Probability-weighted FEF of the two post-measurement branches.

    A degenerate branch contributes p * 1/2 (its concurrence is taken as
    zero), keeping the objective continuous in the setting.
    """
    total = 0.0
    for rec in measure_focus(psi, focus, setting):
        if rec.post_state is None:
            total += rec.probability * 0.5
        else:
            total += rec.probability * fef_pure(rec.post_state)
    return total


def _objective_invariants(psi: PureState3, focus: int) -> tuple[complex, complex, complex]:
    """Cache for the fast objective: dets and the mixed det of the slices.

    det(x S0 + y S1) = x^2 det S0 + y^2 det S1 + x y (tr S0 tr S1 - tr S0 S1)
    for 2x2 slices, so the objective needs only these three complex numbers.
    """
    s0, s1 = _focus_slices(psi, focus)
    mix = np.trace(s0) * np.trace(s1) - np.trace(s0 @ s1)
    return complex(det2(s0)), complex(det2(s1)), complex(mix)


def _objective_angles(
    t: float, a: float, b: float, d0: complex, d1: complex, mix: complex
) -> float:
    # sum_t p_t (1 + C_t)/2 = 1/2 + |det omega_0| + |det omega_1|, and a
    # global phase e^{i(a+b)} drops out of each |det|.
    c, s = math.cos(t), math.sin(t)
    z = cmath.exp(1j * (a - b))
    zc = z.conjugate()
    cc, ss, cs = c * c, s * s, c * s
    return (
        0.5
        + abs(cc * z * d0 + ss * zc * d1 + cs * mix)
        + abs(ss * z * d0 + cc * zc * d1 - cs * mix)
    )


def _golden_max(fun, lo: float, hi: float) -> tuple[float, float]:
    """Golden-section maximization of a unimodal section of ``fun``."""
    x1 = hi - _INVPHI * (hi - lo)
    x2 = lo + _INVPHI * (hi - lo)
    f1, f2 = fun(x1), fun(x2)
    while hi - lo > _GOLDEN_TOL:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INVPHI * (hi - lo)
            f2 = fun(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INVPHI * (hi - lo)
            f1 = fun(x1)
    x = 0.5 * (lo + hi)
    return x, fun(x)


def _refine(
    angles: tuple[float, float, float],
    value: float,
    d0: complex,
    d1: complex,
    mix: complex,
    max_sweeps: int,
) -> tuple[tuple[float, float, float], float]:
    """Coordinate-wise golden-section ascent from a starting point."""
    t, a, b = angles
    span_t = 2.0 * math.pi / _GRID
    span_ab = 4.0 * math.pi / _GRID
    for _ in range(max_sweeps):
        prev = value
        x, fx = _golden_max(lambda v: _objective_angles(v, a, b, d0, d1, mix), t - span_t, t + span_t)
        if fx > value:
            t, value = x, fx
        x, fx = _golden_max(lambda v: _objective_angles(t, v, b, d0, d1, mix), a - span_ab, a + span_ab)
        if fx > value:
            a, value = x, fx
        x, fx = _golden_max(lambda v: _objective_angles(t, a, v, d0, d1, mix), b - span_ab, b + span_ab)
        if fx > value:
            b, value = x, fx
        if value - prev < 1e-13:
            break
    return (t, a, b), value


def optimize_measurement(psi: PureState3, focus: int) -> TeleportReport:
    """Maximize the split fully entangled fraction over all settings.

    Coarse 24x24x24 scan of (t, a, b), golden-section coordinate
    refinement of the best grid point, and four seeded random restarts to
    guard against local maxima.
    """
    d0, d1, mix = _objective_invariants(psi, focus)

    ts = np.linspace(0.0, math.pi, _GRID, endpoint=False)
    ph = np.linspace(0.0, 2.0 * math.pi, _GRID, endpoint=False)
    tg, ag, bg = np.meshgrid(ts, ph, ph, indexing="ij")
    z = np.exp(1j * (ag - bg))
    c, s = np.cos(tg), np.sin(tg)
    cc, ss, cs = c * c, s * s, c * s
    vals = (
        0.5
        + np.abs(cc * z * d0 + ss * z.conj() * d1 + cs * mix)
        + np.abs(ss * z * d0 + cc * z.conj() * d1 - cs * mix)
    )
    i, j, k = np.unravel_index(int(np.argmax(vals)), vals.shape)
    start = (float(ts[i]), float(ph[j]), float(ph[k]))
    best_angles, best_val = _refine(start, float(vals[i, j, k]), d0, d1, mix, max_sweeps=12)

    rng = np.random.Generator(
        np.random.Philox(key=np.array([_RESTART_KEY, 0], dtype=np.uint64))
    )
    for _ in range(4):
        t0 = float(rng.random()) * math.pi
        a0 = float(rng.random()) * 2.0 * math.pi
        b0 = float(rng.random()) * 2.0 * math.pi
        v0 = _objective_angles(t0, a0, b0, d0, d1, mix)
        cand, cval = _refine((t0, a0, b0), v0, d0, d1, mix, max_sweeps=6)
        if cval > best_val:
            best_angles, best_val = _refine(cand, cval, d0, d1, mix, max_sweeps=12)

    t, a, b = best_angles
    setting = MeasurementSetting(t % math.pi, a % (2.0 * math.pi), b % (2.0 * math.pi))
    f = min(best_val, 1.0)
    return TeleportReport(
        focus=focus,
        f=f,
        F=(2.0 * f + 1.0) / 3.0,
        setting=setting,
        tau_partner=partial_tangle(psi, *_PARTNER_PAIR[focus]),
    )


def f_closed_form(c: CanonicalCoeffs) -> tuple[float, float, float]:
    """Split fully entangled fractions straight from canonical coefficients.

    f1 = 1/2 + sqrt(l0^2 l4^2 + l1^2 l4^2 + l2^2 l3^2 - 2 l1 l2 l3 l4 cos(theta))
    f2 = 1/2 + l0 sqrt(l2^2 + l4^2)
    f3 = 1/2 + l0 sqrt(l3^2 + l4^2)
    """
    l0, l1, l2, l3, l4 = c.lambdas
    radicand = (
        l0**2 * l4**2 + l1**2 * l4**2 + l2**2 * l3**2 - 2.0 * l1 * l2 * l3 * l4 * math.cos(c.theta)
    )
    if radicand < -1e-12:
        raise ValueError(f"f1 radicand {radicand:.3e} is negative; coefficients are invalid")
    f1 = 0.5 + math.sqrt(max(radicand, 0.0))
    f2 = 0.5 + l0 * math.sqrt(l2**2 + l4**2)
    f3 = 0.5 + l0 * math.sqrt(l3**2 + l4**2)
    return f1, f2, f3


def main_relation_residual(psi: PureState3) -> tuple[float, float, float]:
    """Residual of tau_ij = 2 f_k - 1 = 3 F_k - 2 for each focus k.

    tau_ij is the partial tangle of the pair complementary to k from the
    measures pipeline; f_k and F_k come from the optimizer.  Each entry is
    the larger of the two route disagreements.
    """
    ms = measure_set(psi)
    partner_tau = {1: ms.tau23, 2: ms.tau31, 3: ms.tau12}
    out = []
    for k in (1, 2, 3):
        rep = optimize_measurement(psi, k)
        tau = partner_tau[k]
        out.append(max(abs(tau - (2.0 * rep.f - 1.0)), abs(tau - (3.0 * rep.F - 2.0))))
    return out[0], out[1], out[2]


def simulate_protocol(
    psi: PureState3,
    focus: int,
    setting: MeasurementSetting,
    input_qubit: np.ndarray,
    rng: np.random.Generator,
) -> tuple[np.ndarray, tuple[int, int, int]]:
    """Run one shot of the protocol and return (output qubit, 3 classical bits).

    Steps: measure the focus qubit (1 bit), Schmidt-diagonalize the
    surviving pair with local unitaries, Bell-measure (input, system j)
    (2 bits), then apply the Pauli correction for the Bell outcome composed
    with the inverse Schmidt unitary on system k.  The returned vector is
    the corrected output state, directly comparable to the input.

    Bell convention: outcomes (Phi+, Phi-, Psi+, Psi-) map to amplitude/
    phase bit pairs (0,0), (0,1), (1,0), (1,1) and corrections I, Z, X, XZ.
    A degenerate focus outcome (p < 1e-14) is resampled.
    """
    xi = np.asarray(input_qubit, dtype=complex)
    if xi.shape != (2,):
        raise ValueError(f"input qubit must be a 2-vector, got shape {xi.shape}")
    require_finite(xi, "input qubit")
    if abs(np.linalg.norm(xi) - 1.0) > 1e-10:
        raise ValueError("input qubit is not normalized within 1e-10")

    records = measure_focus(psi, focus, setting)
    t = 0 if rng.random() < records[0].probability else 1
    if records[t].post_state is None:
        t = 1 - t
    rec = records[t]
    if rec.post_state is None:
        raise NumericalConsistencyError("both focus outcomes are degenerate")

    sv = np.linalg.svd(rec.post_state.amps.reshape(2, 2), compute_uv=False)
    sa, sb = float(sv[0]), float(sv[1])

    # In the Schmidt-corrected frame every branch outputs D xi (Phi+-) or
    # D' xi (Psi+-) with D = diag(sa, sb), D' = diag(sb, sa); the branch
    # probabilities are the squared norms over 2.
    q0, q1 = abs(xi[0]) ** 2, abs(xi[1]) ** 2
    w_d = sa * sa * q0 + sb * sb * q1
    w_dp = sb * sb * q0 + sa * sa * q1
    weights = np.array([w_d, w_d, w_dp, w_dp]) / 2.0
    bell = int(np.searchsorted(np.cumsum(weights), rng.random(), side="right"))
    bell = min(bell, 3)
    if weights[bell] < 1e-28:  # boundary round-off landed on a null branch
        bell = int(np.argmax(weights))

    diag = np.array([sa, sb]) if bell < 2 else np.array([sb, sa])
    out = diag * xi
    out = out / np.linalg.norm(out)
    return out, (rec.t, bell >> 1, bell & 1)


def mc_average_fidelity(
    psi: PureState3,
    focus: int,
    setting: MeasurementSetting,
    samples: int,
    seed: int,
) -> tuple[float, float]:
    """Monte-Carlo estimate of the average teleportation fidelity.

    Input qubits are Haar-sampled; for each sample the eight classical
    branches are averaged exactly (weighted sum over focus and Bell
    outcomes), so the only variance comes from the input distribution.
    Counter-based (Philox) draws make the result bit-identical for a
    fixed seed regardless of evaluation order.

    Returns ``(estimate, stderr)`` with stderr the sample standard
    deviation over sqrt(samples).
    """
    if samples < 100:
        raise ValueError(f"need at least 100 samples, got {samples}")
    branches = []
    for rec in measure_focus(psi, focus, setting):
        if rec.post_state is None:
            # A null branch behaves like a concurrence-zero channel.
            branches.append((rec.probability, 1.0, 0.0))
        else:
            sv = np.linalg.svd(rec.post_state.amps.reshape(2, 2), compute_uv=False)
            branches.append((rec.probability, float(sv[0]), float(sv[1])))

    rng = np.random.Generator(
        np.random.Philox(key=np.array([seed, _MC_STREAM], dtype=np.uint64))
    )
    g = rng.standard_normal((samples, 4))
    n0 = g[:, 0] ** 2 + g[:, 1] ** 2
    n1 = g[:, 2] ** 2 + g[:, 3] ** 2
    q = n0 / (n0 + n1)  # |xi_0|^2 of a Haar-random qubit

    vals = np.zeros(samples)
    for p, sa, sb in branches:
        d = sa * q + sb * (1.0 - q)  # <xi|D|xi>
        dp = sb * q + sa * (1.0 - q)  # <xi|D'|xi>
        vals += p * (d * d + dp * dp)
    estimate = float(np.mean(vals))
    stderr = float(np.std(vals, ddof=1) / math.sqrt(samples))
    return estimate, stderr
