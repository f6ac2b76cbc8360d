"""Purification conditions and attractor classification."""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .bell_core import XState, clip_coherences
from .purification_map import CLIP_SLACK, apply_x, x_map_params

BOUNDARY_TOL = 1e-12
MIXED_POINT = np.array([0.25, 0.25, 0.25, 0.25, 0, 0, 0, 0])


class Verdict(str, enum.Enum):
    PURIFIES_PSI_MINUS = "PurifiesPsiMinus"
    PURIFIES_PSI_PLUS = "PurifiesPsiPlus"
    NO_PURIFICATION = "NoPurification"
    BOUNDARY = "Boundary"


class Attractor(str, enum.Enum):
    PSI_MINUS = "PsiMinus"
    PSI_PLUS = "PsiPlus"
    MIXED = "Mixed"
    NON_CONVERGENT = "NonConvergent"


@dataclass(frozen=True)
class Margin:
    lhs: float
    rhs: float

    @property
    def value(self):
        return self.lhs - self.rhs


@dataclass(frozen=True)
class Classification:
    verdict: Verdict
    psi_minus: Margin
    psi_plus: Margin

    def to_dict(self):
        return {
            "verdict": self.verdict.value,
            "margins": {
                "psi_minus": {"lhs": self.psi_minus.lhs, "rhs": self.psi_minus.rhs},
                "psi_plus": {"lhs": self.psi_plus.lhs, "rhs": self.psi_plus.rhs},
            },
        }


def quadratic_form_F(r1, r2):
    return (2 * r1 - 1) * (1 - 2 * r2)


def _decide(psi_minus, psi_plus):
    if psi_minus.value > BOUNDARY_TOL:
        verdict = Verdict.PURIFIES_PSI_MINUS
    elif psi_plus.value > BOUNDARY_TOL:
        verdict = Verdict.PURIFIES_PSI_PLUS
    elif abs(psi_minus.value) <= BOUNDARY_TOL or abs(psi_plus.value) <= BOUNDARY_TOL:
        verdict = Verdict.BOUNDARY
    else:
        verdict = Verdict.NO_PURIFICATION
    return Classification(verdict, psi_minus, psi_plus)


def condition_x(s):
    """Purification verdict for an X state from its diagonal alone."""
    return _decide(Margin(quadratic_form_F(s.r1, s.r2), 0.0),
                   Margin(quadratic_form_F(s.r4, s.r3), 0.0))


def condition_general(rho):
    """Purification verdict for an arbitrary Bell matrix.

    The coherences ``r12`` and ``r34`` lower the threshold the diagonal has
    to beat; all other coherences are irrelevant after one round.
    """
    r = np.asarray(rho, dtype=complex)
    r1, r2, r3, r4 = r.diagonal().real
    r12, r34 = r[0, 1], r[2, 3]
    minus = Margin(quadratic_form_F(r1, r2),
                   -(2 * r12.imag) ** 2 - (2 * r34.real) ** 2)
    plus = Margin(quadratic_form_F(r4, r3),
                  -(2 * r34.imag) ** 2 - (2 * r12.real) ** 2)
    return _decide(minus, plus)


@dataclass(frozen=True)
class IterationResult:
    attractor: Attractor
    steps: int
    final: XState
    period_two: bool = False


def classify_by_iteration(s, max_steps=200, tol=1e-6):
    """Iterate the X map and report where the state ends up.

    Stops as soon as ``r1`` or ``r4`` exceeds ``1 - tol`` or the state is
    within ``tol`` (max-norm on the 8-vector) of the maximally mixed state.
    Otherwise the result is ``NonConvergent``; ``period_two`` flags a final
    state that returns to itself after two rounds but not after one.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    current = s
    for step in range(max_steps + 1):
        v = current.to_vector()
        if current.r1 > 1 - tol:
            return IterationResult(Attractor.PSI_MINUS, step, current)
        if current.r4 > 1 - tol:
            return IterationResult(Attractor.PSI_PLUS, step, current)
        if np.abs(v - MIXED_POINT).max() < tol:
            return IterationResult(Attractor.MIXED, step, current)
        if step == max_steps:
            break
        current = clip_coherences(apply_x(current).x, slack=CLIP_SLACK)
    v = current.to_vector()
    once, _ = x_map_params(v)
    twice, _ = x_map_params(once)
    period_two = bool(np.abs(twice - v).max() < tol and np.abs(once - v).max() >= tol)
    return IterationResult(Attractor.NON_CONVERGENT, max_steps, current, period_two)
