"""Dense complex linear-algebra kernel for dimensions 2, 4 and 8.

Thin, contract-checked wrappers around NumPy plus the handful of exact
constants (Pauli matrices, the two-qubit spin-flip, the magic basis) that
the rest of the package builds on.  Qubit ordering convention throughout:
basis index = 4*q1 + 2*q2 + q3, i.e. qubit 1 is the most significant bit
of the ket |q1 q2 q3>.
"""

from __future__ import annotations

from collections.abc import Iterable

import numpy as np

_SUPPORTED_DIMS = (1, 2, 4, 8)

I2 = np.eye(2, dtype=complex)

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

# sigma_y (x) sigma_y, written out exactly: the two-qubit spin flip is the
# anti-diagonal (-1, 1, 1, -1) with no imaginary parts left over.
SPIN_FLIP = np.array(
    [
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
    ],
    dtype=complex,
)

# Columns are the phase-adjusted Bell states in which every maximally
# entangled two-qubit state is a real unit vector.
_RT2 = 1.0 / np.sqrt(2.0)
MAGIC_BASIS = np.array(
    [
        [_RT2, 1.0j * _RT2, 0.0, 0.0],
        [0.0, 0.0, 1.0j * _RT2, _RT2],
        [0.0, 0.0, 1.0j * _RT2, -_RT2],
        [_RT2, -1.0j * _RT2, 0.0, 0.0],
    ],
    dtype=complex,
)


def require_finite(a: np.ndarray, what: str = "array") -> np.ndarray:
    """Reject NaN/Inf entries; returns the input for chaining."""
    if not np.all(np.isfinite(a.view(float) if np.iscomplexobj(a) else a)):
        raise ValueError(f"{what} contains NaN or Inf entries")
    return a


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tensor product with the dimension cap of this package.

    Parameters
    ----------
    a, b : ndarray
        Complex matrices whose product dimensions stay within 8.

    Returns
    -------
    ndarray
        ``a (x) b`` with ``(a(x)b)[i*rb+k, j*cb+l] = a[i,j] b[k,l]``.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    require_finite(a, "kron operand")
    require_finite(b, "kron operand")
    rows, cols = a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]
    if rows not in _SUPPORTED_DIMS or cols not in _SUPPORTED_DIMS:
        raise ValueError(f"kron result {rows}x{cols} exceeds the supported sizes {_SUPPORTED_DIMS}")
    return np.kron(a, b)


def partial_trace(rho: np.ndarray, keep: Iterable[int], total_qubits: int) -> np.ndarray:
    """Trace out every qubit not listed in ``keep``.

    Parameters
    ----------
    rho : ndarray
        Square matrix of dimension ``2**total_qubits``.
    keep : iterable of int
        1-based qubit labels to retain; nonempty proper subset of
        ``{1, ..., total_qubits}``.  The output orders kept qubits
        ascending.
    total_qubits : int
        Number of qubits ``rho`` acts on.

    Returns
    -------
    ndarray
        Reduced matrix of dimension ``2**len(keep)``; same trace as the
        input, Hermitian whenever the input is.
    """
    rho = np.asarray(rho, dtype=complex)
    require_finite(rho, "partial_trace input")
    dim = 2**total_qubits
    if rho.shape != (dim, dim):
        raise ValueError(f"expected a {dim}x{dim} matrix for {total_qubits} qubits, got {rho.shape}")
    kept = sorted(set(int(q) for q in keep))
    if not kept or any(q < 1 or q > total_qubits for q in kept) or len(kept) >= total_qubits:
        raise ValueError(f"keep={kept!r} must be a nonempty proper subset of 1..{total_qubits}")

    tensor = rho.reshape((2,) * (2 * total_qubits))
    # Row axis of qubit q is q-1, the matching column axis is total_qubits+q-1.
    # Traced qubits get the same einsum label on both axes (contraction);
    # kept qubits get distinct row/column labels that survive to the output.
    row = [q - 1 for q in kept]
    traced = set(range(total_qubits)) - set(row)
    subs_in = list(range(total_qubits)) + [
        q if q in traced else total_qubits + q for q in range(total_qubits)
    ]
    subs_out = row + [total_qubits + r for r in row]
    out = np.einsum(tensor, subs_in, subs_out)
    d = 2 ** len(kept)
    return out.reshape(d, d)


def herm_eigvals(h: np.ndarray) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, descending.

    The input must be Hermitian within 1e-10 in the max norm; the sum of
    the output equals the trace to the same order.
    """
    h = np.asarray(h, dtype=complex)
    require_finite(h, "herm_eigvals input")
    if h.shape[0] != h.shape[1]:
        raise ValueError(f"herm_eigvals needs a square matrix, got {h.shape}")
    if np.max(np.abs(h - h.conj().T)) > 1e-10:
        raise ValueError("herm_eigvals input is not Hermitian within 1e-10")
    return np.linalg.eigvalsh(h)[::-1]


def svd2(m: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Singular value decomposition of a 2x2 complex matrix.

    Returns
    -------
    (u, s, v) : tuple
        ``m = u @ diag(s) @ v.conj().T`` with unitary ``u``, ``v`` and
        ``s[0] >= s[1] >= 0``.  Singular values below 1e-13 are clamped
        to exactly zero to keep downstream square roots clean.
    """
    m = np.asarray(m, dtype=complex)
    require_finite(m, "svd2 input")
    if m.shape != (2, 2):
        raise ValueError(f"svd2 expects a 2x2 matrix, got {m.shape}")
    u, s, vh = np.linalg.svd(m)
    s = np.where(s < 1e-13, 0.0, s)
    return u, s, vh.conj().T


def det2(m: np.ndarray) -> complex:
    """Determinant ``ad - bc`` of a 2x2 matrix."""
    m = np.asarray(m, dtype=complex)
    if m.shape != (2, 2):
        raise ValueError(f"det2 expects a 2x2 matrix, got {m.shape}")
    return m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
