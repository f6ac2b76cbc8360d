"""Bell-basis conventions, X states, validation and random two-qubit states.

Matrices are plain ``numpy`` arrays.  A "Bell matrix" is a 4x4 complex array
expressed in the ordered Bell basis

    |1> = |Psi->,  |2> = |Phi->,  |3> = |Phi+>,  |4> = |Psi+>

and a "computational matrix" uses |00>, |01>, |10>, |11> with qubit A as the
most significant bit.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidStateError

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
COHERENCE_TOL = 1e-10

_S = 1 / np.sqrt(2)

#: Bell vectors in the computational basis.
PSI_MINUS = np.array([0, _S, -_S, 0], dtype=complex)
PHI_MINUS = np.array([_S, 0, 0, -_S], dtype=complex)
PHI_PLUS = np.array([_S, 0, 0, _S], dtype=complex)
PSI_PLUS = np.array([0, _S, _S, 0], dtype=complex)

#: Change of basis; column ``i`` is Bell state ``|i+1>`` in computational coordinates.
BELL_BASIS = np.column_stack([PSI_MINUS, PHI_MINUS, PHI_PLUS, PSI_PLUS])
BELL_BASIS.setflags(write=False)

#: Positions of the X pattern (diagonal plus the 1-4 and 2-3 coherences).
X_MASK = np.eye(4, dtype=bool)
X_MASK[0, 3] = X_MASK[3, 0] = X_MASK[1, 2] = X_MASK[2, 1] = True
X_MASK.setflags(write=False)


def bell_to_computational(m):
    """Return ``U m U^dagger`` with ``U`` the Bell-basis change of basis."""
    m = np.asarray(m, dtype=complex)
    return BELL_BASIS @ m @ BELL_BASIS.conj().T


def computational_to_bell(m):
    """Inverse of :func:`bell_to_computational`."""
    m = np.asarray(m, dtype=complex)
    return BELL_BASIS.conj().T @ m @ BELL_BASIS


def bell_state(index):
    """Projector onto Bell state ``index`` as a Bell matrix.

    ``index`` is 1-based in the order Psi-, Phi-, Phi+, Psi+.
    """
    m = np.zeros((4, 4), dtype=complex)
    m[index - 1, index - 1] = 1.0
    return m


def pure_density(psi):
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


@dataclass(frozen=True)
class XState:
    """Seven-parameter state with the X pattern in the Bell basis.

    ``r1..r4`` are the Bell fidelities; ``r14`` and ``r23`` the two complex
    coherences.  Construction validates the trace, the range of the
    fidelities and the positivity bounds ``|r14| <= sqrt(r1 r4)``,
    ``|r23| <= sqrt(r2 r3)``.
    """

    r1: float
    r2: float
    r3: float
    r4: float
    r14: complex = 0j
    r23: complex = 0j
    check: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        for name in ("r1", "r2", "r3", "r4"):
            object.__setattr__(self, name, float(getattr(self, name)))
        object.__setattr__(self, "r14", complex(self.r14))
        object.__setattr__(self, "r23", complex(self.r23))
        if self.check:
            problems = x_state_violations(self)
            if problems:
                raise InvalidStateError("; ".join(problems))

    @property
    def diagonal(self):
        return np.array([self.r1, self.r2, self.r3, self.r4])

    def to_matrix(self):
        m = np.diag(self.diagonal).astype(complex)
        m[0, 3] = self.r14
        m[3, 0] = self.r14.conjugate()
        m[1, 2] = self.r23
        m[2, 1] = self.r23.conjugate()
        return m

    def to_vector(self):
        """Real 8-vector ``(r1, r2, r3, r4, Re r14, Im r14, Re r23, Im r23)``."""
        return np.array([
            self.r1, self.r2, self.r3, self.r4,
            self.r14.real, self.r14.imag, self.r23.real, self.r23.imag,
        ])

    @classmethod
    def from_vector(cls, v, check=True):
        v = np.asarray(v, dtype=float)
        return cls(v[0], v[1], v[2], v[3], complex(v[4], v[5]), complex(v[6], v[7]),
                   check=check)

    @classmethod
    def from_matrix(cls, m, check=True):
        """Read the X entries of a Bell matrix; off-pattern entries must be zero."""
        m = np.asarray(m, dtype=complex)
        if np.any(m[~X_MASK] != 0):
            raise InvalidStateError("matrix has non-zero entries outside the X pattern")
        d = m.diagonal().real
        return cls(d[0], d[1], d[2], d[3], m[0, 3], m[1, 2], check=check)

    def swapped(self):
        """Relabel ``|1> <-> |4>`` and ``|2> <-> |3>``.

        The relabelling transposes the coherence blocks, so ``r14`` and
        ``r23`` are conjugated.
        """
        return XState(self.r4, self.r3, self.r2, self.r1,
                      self.r14.conjugate(), self.r23.conjugate(), check=self.check)


def x_state_violations(s):
    """List the XState invariants broken by ``s`` (empty when valid)."""
    problems = []
    d = s.diagonal
    if not np.all(np.isfinite(d)) or not (np.isfinite(s.r14) and np.isfinite(s.r23)):
        return ["non-finite parameter"]
    if np.any(d < -TRACE_TOL) or np.any(d > 1 + TRACE_TOL):
        problems.append("fidelity outside [0, 1]")
    if abs(d.sum() - 1) > TRACE_TOL:
        problems.append(f"trace {d.sum():.17g} != 1")
    if abs(s.r14) > np.sqrt(max(s.r1 * s.r4, 0.0)) + COHERENCE_TOL:
        problems.append("|r14| exceeds sqrt(r1 r4)")
    if abs(s.r23) > np.sqrt(max(s.r2 * s.r3, 0.0)) + COHERENCE_TOL:
        problems.append("|r23| exceeds sqrt(r2 r3)")
    return problems


def x_state_eigenvalues(s):
    """Closed-form spectrum ``(l23+, l23-, l14+, l14-)`` of an X state."""
    def pair(a, b, c):
        root = np.sqrt((a - b) ** 2 + 4 * abs(c) ** 2)
        return (a + b + root) / 2, (a + b - root) / 2

    return (*pair(s.r2, s.r3, s.r23), *pair(s.r1, s.r4, s.r14))


@dataclass(frozen=True)
class DensityReport:
    """Outcome of :func:`validate_density`."""

    hermiticity_defect: float
    trace_defect: float
    min_eigenvalue: float
    violations: tuple = ()

    @property
    def ok(self):
        return not self.violations

    def __bool__(self):
        return self.ok


def validate_density(m):
    """Check Hermiticity, unit trace and positivity of a 4x4 matrix.

    Never raises on bad content; the returned report lists every violated
    invariant.  A wrong shape is reported as a violation as well.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape != (4, 4):
        return DensityReport(np.inf, np.inf, -np.inf, (f"shape {m.shape} is not (4, 4)",))
    if not np.all(np.isfinite(m)):
        return DensityReport(np.inf, np.inf, -np.inf, ("non-finite entries",))
    herm = float(np.abs(m - m.conj().T).max())
    trace_defect = float(abs(np.trace(m) - 1))
    min_eig = float(np.linalg.eigvalsh((m + m.conj().T) / 2).min())
    violations = []
    if herm > HERMITIAN_TOL:
        violations.append(f"not Hermitian (defect {herm:.3e})")
    if trace_defect > TRACE_TOL:
        violations.append(f"trace differs from 1 by {trace_defect:.3e}")
    if min_eig < -PSD_TOL:
        violations.append(f"negative eigenvalue {min_eig:.3e}")
    return DensityReport(herm, trace_defect, min_eig, tuple(violations))


def clip_coherences(s, slack=np.inf):
    """Pull ``|r14|``, ``|r23|`` back onto their positivity bounds.

    Excess beyond ``slack`` raises :class:`InvalidStateError` instead of
    being clipped.
    """
    bound14 = np.sqrt(max(s.r1 * s.r4, 0.0))
    bound23 = np.sqrt(max(s.r2 * s.r3, 0.0))
    r14, r23 = s.r14, s.r23
    for name, value, bound in (("r14", r14, bound14), ("r23", r23, bound23)):
        if abs(value) - bound > slack:
            raise InvalidStateError(
                f"|{name}| exceeds its bound by {abs(value) - bound:.3e}")
    if abs(r14) > bound14:
        r14 = r14 / abs(r14) * bound14
    if abs(r23) > bound23:
        r23 = r23 / abs(r23) * bound23
    return XState(s.r1, s.r2, s.r3, s.r4, r14, r23, check=False)


def random_density(seed, kind="general"):
    """Seeded random Bell matrix.

    ``general`` draws a Ginibre matrix ``G`` and returns ``G G^dagger / Tr``.
    ``x_state`` keeps only the X entries of such a draw (the two principal
    2x2 blocks of a positive matrix are positive, so clipping the coherences
    only removes rounding).  ``bell_diagonal`` keeps the diagonal.
    """
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    m = g @ g.conj().T
    m = m / np.trace(m).real
    m = (m + m.conj().T) / 2
    if kind == "general":
        return m
    if kind == "x_state":
        d = m.diagonal().real
        d = d / d.sum()
        s = XState(d[0], d[1], d[2], d[3], m[0, 3], m[1, 2], check=False)
        return clip_coherences(s).to_matrix()
    if kind == "bell_diagonal":
        d = m.diagonal().real
        return np.diag(d / d.sum()).astype(complex)
    raise ValueError(f"unknown kind {kind!r}")


def random_x_state(seed):
    return XState.from_matrix(random_density(seed, "x_state"))
