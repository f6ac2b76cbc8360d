"""Closed-form one-round map of the recurrence purification protocol.

Two identical pairs in state ``rho`` go in; with probability ``N/2`` one pair
comes out in an X state.  :func:`apply_general` handles an arbitrary Bell
matrix, :func:`apply_x` the seven-parameter X states, and :func:`iterate`
drives the recurrence.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bell_core import XState, clip_coherences
from .errors import DegenerateNormalization, InvalidStateError

N_THRESHOLD = 1e-12
#: Coherence excess that is treated as rounding and clipped during iteration.
CLIP_SLACK = 1e-12


@dataclass(frozen=True)
class MapOutcome:
    """Output of one protocol round."""

    state: np.ndarray
    success_probability: float
    normalization: float

    @property
    def x(self):
        return XState.from_matrix(self.state, check=False)


def apply_general(rho):
    """One round on a general Bell matrix (15 real parameters)."""
    r = np.asarray(rho, dtype=complex)
    r1, r2, r3, r4 = r.diagonal().real
    r12, r21, r34, r43 = r[0, 1], r[1, 0], r[2, 3], r[3, 2]
    n = ((r1 + r2) ** 2 + (r3 + r4) ** 2 - (r12 + r21) ** 2 - (r34 + r43) ** 2).real
    if n <= N_THRESHOLD:
        raise DegenerateNormalization(n)

    out = np.zeros((4, 4), dtype=complex)
    out[0, 0] = (r1 ** 2 + r2 ** 2 - r12 ** 2 - r21 ** 2).real / n
    out[1, 1] = 2 * (r3 * r4 - abs(r34) ** 2) / n
    out[2, 2] = 2 * (r1 * r2 - abs(r12) ** 2) / n
    out[3, 3] = (r3 ** 2 + r4 ** 2 - r34 ** 2 - r43 ** 2).real / n
    out[0, 3] = (r[0, 3] ** 2 + r[1, 2] ** 2 - r[0, 2] ** 2 - r[1, 3] ** 2) / n
    out[1, 2] = 2 * (np.conj(r[1, 2]) * np.conj(r[0, 3])
                     - np.conj(r[0, 2]) * np.conj(r[1, 3])) / n
    out[3, 0] = np.conj(out[0, 3])
    out[2, 1] = np.conj(out[1, 2])
    return MapOutcome(out, n / 2, n)


def x_map_params(v):
    """Apply the X-state map to real 8-vectors; broadcasts over leading axes.

    Returns ``(v', N)``.  ``N = (r1 + r2)^2 + (r3 + r4)^2`` is used instead of
    the trace-one shorthand ``(r1 + r2)^2 + (1 - r1 - r2)^2``; the two agree on
    states and the former keeps the map well defined off the unit-trace plane.
    """
    v = np.asarray(v, dtype=float)
    r1, r2, r3, r4 = v[..., 0], v[..., 1], v[..., 2], v[..., 3]
    r14 = v[..., 4] + 1j * v[..., 5]
    r23 = v[..., 6] + 1j * v[..., 7]
    n = (r1 + r2) ** 2 + (r3 + r4) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        o14 = (r14 ** 2 + r23 ** 2) / n
        o23 = 2 * np.conj(r23) * np.conj(r14) / n
        out = np.stack([
            (r1 ** 2 + r2 ** 2) / n,
            2 * r3 * r4 / n,
            2 * r1 * r2 / n,
            (r3 ** 2 + r4 ** 2) / n,
            o14.real, o14.imag, o23.real, o23.imag,
        ], axis=-1)
    return out, n


def apply_x(s):
    """One round on an :class:`XState`."""
    v, n = x_map_params(s.to_vector())
    if n <= N_THRESHOLD:
        raise DegenerateNormalization(n)
    return MapOutcome(XState.from_vector(v, check=False).to_matrix(), n / 2, float(n))


@dataclass(frozen=True)
class TrajectoryStep:
    step: int
    outcome: MapOutcome
    p_cumulative: float

    @property
    def x(self):
        return self.outcome.x


def iterate(start, steps, stop_tolerance=0.0):
    """Run up to ``steps`` protocol rounds starting from ``start``.

    ``start`` is an :class:`XState` or a Bell matrix.  A general matrix goes
    through :func:`apply_general` once; every later round uses
    :func:`apply_x`.  Iteration stops early once the max-norm change of the
    parameter 8-vector falls below ``stop_tolerance``.

    Raises
    ------
    DegenerateNormalization
        With ``step`` set to the failing round (1-based).
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    trajectory = []
    p_cum = 1.0
    if isinstance(start, XState):
        current = start
        previous = start.to_vector()
    else:
        previous = None
        current = None
    for k in range(1, steps + 1):
        try:
            if current is None:
                outcome = apply_general(start)
            else:
                outcome = apply_x(current)
        except DegenerateNormalization as exc:
            raise DegenerateNormalization(exc.normalization, step=k) from None
        try:
            current = clip_coherences(outcome.x, slack=CLIP_SLACK)
        except InvalidStateError as exc:
            raise InvalidStateError(f"step {k}: {exc}") from None
        if current != outcome.x:
            outcome = MapOutcome(current.to_matrix(), outcome.success_probability,
                                 outcome.normalization)
        p_cum *= outcome.success_probability
        trajectory.append(TrajectoryStep(k, outcome, p_cum))
        v = current.to_vector()
        if previous is not None and np.abs(v - previous).max() < stop_tolerance:
            break
        previous = v
    return trajectory
