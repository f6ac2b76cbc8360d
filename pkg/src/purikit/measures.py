"""Concurrence and fidelity measures for two-qubit states.

Pure states are 4-vectors of Bell-basis amplitudes, mixed states Bell
matrices, as elsewhere in the package.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bell_core import BELL_BASIS, bell_to_computational
from .errors import NormError

NORM_TOL = 1e-12
RANK_CUTOFF = 1e-14

SIGMA_Y = np.array([[0, -1j], [1j, 0]])
YY = np.kron(SIGMA_Y, SIGMA_Y)
#: Eigenvalues of sigma_y x sigma_y on (Psi-, Phi-, Phi+, Psi+).
YY_BELL_EIGENVALUES = np.array([-1.0, 1.0, -1.0, 1.0])


def _check_norm(psi):
    psi = np.asarray(psi, dtype=complex)
    norm = np.linalg.norm(psi)
    if abs(norm - 1) > NORM_TOL:
        raise NormError(f"state has norm {norm:.15g}")
    return psi


def concurrence_pure(psi):
    """``|<psi| sigma_y x sigma_y |psi*>|`` evaluated in the computational basis."""
    psi = _check_norm(psi)
    c = BELL_BASIS @ psi
    return float(abs(c @ YY @ c))


def concurrence_pure_bell(psi):
    """Same quantity from the Bell-basis eigenrelations of ``sigma_y x sigma_y``.

    Bell vectors are real in the computational basis, so complex conjugation
    acts on the Bell amplitudes directly.
    """
    psi = _check_norm(psi)
    return float(abs(np.sum(YY_BELL_EIGENVALUES * psi ** 2)))


def concurrence_mixed(rho):
    """Wootters concurrence ``max(0, s1 - s2 - s3 - s4)``.

    The ``s_i`` are square roots of the eigenvalues of
    ``rho (Y x Y) rho* (Y x Y)``.  They are obtained as singular values of
    ``W^T (Y x Y) W`` with ``rho = W W^dagger``.  Eigenvalues of ``rho`` below
    ``RANK_CUTOFF`` are treated as exact zeros; their square roots would
    otherwise inject ~1e-8 noise into rank-deficient states.
    """
    rc = bell_to_computational(rho)
    rc = (rc + rc.conj().T) / 2
    evals, evecs = np.linalg.eigh(rc)
    evals = np.where(evals < RANK_CUTOFF, 0.0, evals)
    w = evecs * np.sqrt(evals)
    s = np.linalg.svd(w.T @ YY @ w, compute_uv=False)
    return float(max(0.0, s[0] - s[1] - s[2] - s[3]))


def bell_fidelities(rho):
    return tuple(float(x) for x in np.asarray(rho).diagonal().real)


@dataclass(frozen=True)
class MaxEntangledVector:
    """Real coordinates of ``a- |Phi-> + i a+ |Phi+> + i b- |Psi-> + b+ |Psi+>``."""

    a_minus: float
    a_plus: float
    b_minus: float
    b_plus: float

    @classmethod
    def from_unit(cls, q):
        """From ``q = (b-, a-, a+, b+)``, fixing the sign so ``a- >= 0``.

        Ties (zero components) fall through to ``a+``, then ``b-``, ``b+``.
        """
        q = np.asarray(q, dtype=float)
        for x in (q[1], q[2], q[0], q[3]):
            if abs(x) > 1e-12:
                if x < 0:
                    q = -q
                break
        return cls(float(q[1]), float(q[2]), float(q[0]), float(q[3]))

    def vector(self):
        """Bell-basis amplitudes in the order (Psi-, Phi-, Phi+, Psi+)."""
        return np.array([1j * self.b_minus, self.a_minus, 1j * self.a_plus, self.b_plus])

    def to_dict(self):
        return {"a_minus": self.a_minus, "a_plus": self.a_plus,
                "b_minus": self.b_minus, "b_plus": self.b_plus}


_PHASES = np.array([1j, 1, 1j, 1])


def _overlap_form(rho):
    # <psi|rho|psi> = q^T A q for psi = phases * q with q real
    d = np.diag(_PHASES)
    return (d.conj().T @ np.asarray(rho, dtype=complex) @ d).real


def max_entangled_fidelity(rho, starts=64, seed=0, tol=1e-10, max_iter=20000):
    """Largest overlap ``<psi|rho|psi>`` over maximally entangled pure states.

    Multi-start projected ascent on the unit 3-sphere of real coordinates:
    each step moves along the gradient ``2 A q`` and renormalizes, which for
    the quadratic form is a shifted power iteration.  A start stops once its
    value changes by less than ``tol * 1e-3`` per step.
    """
    a = _overlap_form(rho)
    a = (a + a.T) / 2
    shifted = a + np.eye(4)
    rng = np.random.default_rng(seed)
    q = rng.standard_normal((starts, 4))
    q /= np.linalg.norm(q, axis=1, keepdims=True)
    value = np.einsum("ni,ij,nj->n", q, a, q)
    active = np.ones(starts, dtype=bool)
    for _ in range(max_iter):
        if not active.any():
            break
        qa = q[active] @ shifted
        qa /= np.linalg.norm(qa, axis=1, keepdims=True)
        new = np.einsum("ni,ij,nj->n", qa, a, qa)
        idx = np.flatnonzero(active)
        active[idx] = np.abs(new - value[idx]) >= tol * 1e-3
        q[idx], value[idx] = qa, new
    best = int(np.argmax(value))
    return float(value[best]), MaxEntangledVector.from_unit(q[best])
