"""Named states: the worked examples and the dephasing families."""
import numpy as np

from .bell_core import XState, pure_density
from .errors import ParamRange

_S = 1 / np.sqrt(2)

#: (|Psi-> + i|Phi->)/sqrt(2) in Bell amplitudes.
UPSILON_ENT = np.array([_S, 1j * _S, 0, 0])
#: (|Phi+> + |Psi+>)/sqrt(2) in Bell amplitudes.
UPSILON_SEP = np.array([0, 0, _S, _S], dtype=complex)

FAMILIES = ("diagonal", "dephasing1", "dephasing2")


def werner(fidelity):
    rest = (1 - fidelity) / 3
    return XState(fidelity, rest, rest, rest)


def example1(x):
    """``x |Upsilon_ent><Upsilon_ent| + (1 - x) |Phi+><Phi+|`` for ``x`` in (0.5, 1]."""
    if not 0.5 < x <= 1:
        raise ParamRange(f"example 1 needs x in (0.5, 1], got {x}")
    rho = x * pure_density(UPSILON_ENT)
    rho[2, 2] += 1 - x
    return rho


def example2(c):
    """``c |Psi-><Psi-| + (1 - c) |Upsilon_sep><Upsilon_sep|`` for ``c`` in (0, 0.5]."""
    if not 0 < c <= 0.5:
        raise ParamRange(f"example 2 needs c in (0, 0.5], got {c}")
    rho = (1 - c) * pure_density(UPSILON_SEP)
    rho[0, 0] += c
    return rho


def family_state(r, family, eta=(0.0, 0.0)):
    """Bell matrix with diagonal ``r`` and family-dependent ``r12``, ``r34``.

    ``dephasing1``: ``r12 = eta[0] sqrt(r1 r2)``, ``r34 = eta[1] sqrt(r3 r4)``.
    ``dephasing2``: ``r12 = i eta[0] sqrt(r1 r2)``, ``r34 = eta[1] sqrt(r3 r4)``.
    ``diagonal``: no coherences.
    """
    r1, r2, r3, r4 = r
    m = np.diag(np.asarray(r, dtype=float)).astype(complex)
    if family == "diagonal":
        return m
    if family == "dephasing1":
        r12 = eta[0] * np.sqrt(r1 * r2)
    elif family == "dephasing2":
        r12 = 1j * eta[0] * np.sqrt(r1 * r2)
    else:
        raise ValueError(f"unknown family {family!r}")
    r34 = eta[1] * np.sqrt(r3 * r4)
    m[0, 1], m[1, 0] = r12, np.conj(r12)
    m[2, 3], m[3, 2] = r34, np.conj(r34)
    return m
