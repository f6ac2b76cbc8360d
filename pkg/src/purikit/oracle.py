"""Brute-force four-qubit simulation of one protocol round.

The two pairs live on qubits ordered ``(A1, B1, A2, B2)``.  Every step is
done on the full 16x16 density matrix: the bilateral projection, the
computational-basis measurement of one pair, the correction gates, and the
sum over all four measurement records.  Nothing here uses the closed-form
map; it exists to check it.
"""
from __future__ import annotations

import numpy as np

from .bell_core import BELL_BASIS, PHI_MINUS, PSI_MINUS, computational_to_bell
from .errors import DegenerateNormalization
from .purification_map import N_THRESHOLD, MapOutcome

A1, B1, A2, B2 = range(4)

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)


def kron(*ops):
    """Kronecker product of square matrices, leftmost factor most significant."""
    out = np.eye(1, dtype=complex)
    for op in ops:
        op = np.asarray(op, dtype=complex)
        if op.ndim != 2 or op.shape[0] != op.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {op.shape}")
        out = np.kron(out, op)
    return out


def _n_qubits(m):
    dim = m.shape[0]
    n = dim.bit_length() - 1
    if m.shape != (dim, dim) or 1 << n != dim:
        raise ValueError(f"shape {m.shape} is not a square power-of-two matrix")
    return n


def permute_qubits(m, perm):
    """Reorder the qubits of an operator.

    Qubit ``perm[i]`` of the input becomes qubit ``i`` of the output.
    """
    m = np.asarray(m, dtype=complex)
    n = _n_qubits(m)
    perm = list(perm)
    if sorted(perm) != list(range(n)):
        raise ValueError(f"{perm} is not a permutation of {n} qubits")
    t = m.reshape([2] * (2 * n))
    t = t.transpose(perm + [p + n for p in perm])
    return t.reshape(m.shape)


def inverse_permutation(perm):
    inv = [0] * len(perm)
    for i, p in enumerate(perm):
        inv[p] = i
    return inv


def partial_trace(m, keep):
    """Trace out every qubit not in ``keep``; kept qubits stay in input order."""
    m = np.asarray(m, dtype=complex)
    n = _n_qubits(m)
    keep = sorted(keep)
    drop = [q for q in range(n) if q not in keep]
    t = m.reshape([2] * (2 * n)).transpose(keep + drop + [q + n for q in keep + drop])
    k, d = 2 ** len(keep), 2 ** len(drop)
    t = t.reshape(k, d, k, d)
    return np.einsum("ajbj->ab", t)


def local_projector():
    """``|Psi-><Psi-| + |Phi-><Phi-|`` on two qubits held at one location."""
    return np.outer(PSI_MINUS, PSI_MINUS.conj()) + np.outer(PHI_MINUS, PHI_MINUS.conj())


def bilateral_projector():
    """``M`` on ``(A1, A2)`` times ``M`` on ``(B1, B2)``, in ``(A1, B1, A2, B2)`` order."""
    m = local_projector()
    # kron(M, M) acts on (A1, A2, B1, B2); move to (A1, B1, A2, B2).
    return permute_qubits(kron(m, m), [0, 2, 1, 3])


def correction_gate(j):
    """``(|1><1| + i|0><0|) sigma_x^j``; the index is taken mod 2."""
    phase = np.diag([1j, 1]).astype(complex)
    return phase @ np.linalg.matrix_power(SIGMA_X, j % 2)


def _measure_and_correct(projected, measured):
    """Sum the four corrected branches left after measuring ``measured`` pair.

    Returns ``(two_qubit_state, branch_traces)``; the state is unnormalized.
    """
    kept = [q for q in range(4) if q not in measured]
    # Bring the layout to (kept_A, kept_B, measured_A, measured_B).
    m = permute_qubits(projected, kept + list(measured)).reshape(4, 4, 4, 4)
    total = np.zeros((4, 4), dtype=complex)
    traces = {}
    for j in (0, 1):
        for k in (0, 1):
            idx = 2 * j + k
            branch = m[:, idx, :, idx]
            traces[(j, k)] = float(np.trace(branch).real)
            gate = kron(correction_gate(j), correction_gate(k + 1))
            total += gate @ branch @ gate.conj().T
    return total, traces


def protocol_branches(rho, measured_pair=(A2, B2)):
    """Run the round and return the intermediate quantities.

    Returns a dict with ``projected`` (16x16, unnormalized), ``success``
    (its trace), ``branch_traces`` and ``output`` (normalized Bell matrix).
    """
    rc = BELL_BASIS @ np.asarray(rho, dtype=complex) @ BELL_BASIS.conj().T
    two_pairs = kron(rc, rc)
    proj = bilateral_projector()
    projected = proj @ two_pairs @ proj.conj().T
    success = float(np.trace(proj.conj().T @ proj @ two_pairs).real)
    if success <= N_THRESHOLD / 2:
        raise DegenerateNormalization(2 * success)
    total, traces = _measure_and_correct(projected, list(measured_pair))
    out = computational_to_bell(total / success)
    return {
        "projected": projected,
        "success": success,
        "branch_traces": traces,
        "output": out,
    }


def run_protocol(rho, measured_pair=(A2, B2)):
    """Literal simulation of one round; same result shape as ``apply_general``."""
    b = protocol_branches(rho, measured_pair)
    return MapOutcome(b["output"], b["success"], 2 * b["success"])
