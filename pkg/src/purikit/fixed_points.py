"""Fixed points of the X-state map and their linear stability.

The map acts on real 8-vectors ``(r1, r2, r3, r4, Re r14, Im r14, Re r23,
Im r23)``.  Fixed points of ``f`` (or of ``f o f``) are located by damped
Newton iteration from a grid of seeds; stability comes from the eigenvalue
magnitudes of a finite-difference Jacobian.
"""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass

import numpy as np

from .bell_core import COHERENCE_TOL, TRACE_TOL
from .eigen import eigen_magnitudes
from .errors import DegenerateNormalization
from .purification_map import N_THRESHOLD, x_map_params

FD_STEP = 1e-6
RICHARDSON_TOL = 1e-6
STABILITY_BAND = 1e-9
RESIDUAL_TOL = 1e-9
DEDUP_TOL = 1e-6
COHERENCE_SEEDS = (0.0, 0.25, -0.25, 0.5, -0.5)

COMPONENTS = ("r1", "r2", "r3", "r4", "Re r14", "Im r14", "Re r23", "Im r23")


def map_f(v):
    """The X map on an 8-vector (or a stack of them)."""
    out, n = x_map_params(v)
    n = np.asarray(n)
    if np.any(n <= N_THRESHOLD):
        raise DegenerateNormalization(float(n.min()))
    return out


def map_ff(v):
    return map_f(map_f(v))


def _iterate_map(period):
    return map_f if period == 1 else map_ff


def _fd_columns(func, v, h):
    v = np.asarray(v, dtype=float)
    eye = np.eye(8)
    # stack all 16 probes so the map is evaluated once
    probes = np.concatenate([v[..., None, :] + h * eye, v[..., None, :] - h * eye], axis=-2)
    vals = func(probes)
    return np.swapaxes((vals[..., :8, :] - vals[..., 8:, :]) / (2 * h), -1, -2)


def jacobian(v, period=1, h=FD_STEP, check=True):
    """Central-difference Jacobian ``J[i, j] = d f_i / d v_j``.

    With ``check`` the result is compared with the step ``h/2`` estimate and a
    ``RuntimeWarning`` is issued if any entry differs by more than
    ``RICHARDSON_TOL``.
    """
    func = _iterate_map(period)
    jac = _fd_columns(func, v, h)
    if check:
        half = _fd_columns(func, v, h / 2)
        gap = np.abs(jac - half).max()
        if gap > RICHARDSON_TOL:
            warnings.warn(f"finite-difference Jacobian unstable (step gap {gap:.2e})",
                          RuntimeWarning, stacklevel=2)
    return jac


def stability_verdict(magnitudes):
    magnitudes = np.asarray(magnitudes)
    if np.any(magnitudes > 1 + STABILITY_BAND):
        return "unstable"
    if np.all(magnitudes < 1 - STABILITY_BAND):
        return "stable"
    return "marginal"


@dataclass(frozen=True)
class FixedPointRecord:
    v_star: np.ndarray
    residual: float
    eigen_magnitudes: np.ndarray
    verdict: str
    period: int

    def to_dict(self):
        return {
            "v_star": [float(x) for x in self.v_star],
            "residual": float(self.residual),
            "eigen_magnitudes": [float(x) for x in self.eigen_magnitudes],
            "verdict": self.verdict,
            "period": self.period,
        }


def analyse_point(v, period=1):
    """Build a :class:`FixedPointRecord` for a candidate ``v``."""
    v = np.asarray(v, dtype=float)
    residual = float(np.abs(_iterate_map(period)(v) - v).max())
    mags = eigen_magnitudes(jacobian(v, period))
    return FixedPointRecord(v, residual, mags, stability_verdict(mags), period)


def simplex_seeds(grid_density=12, coherences=COHERENCE_SEEDS):
    """Seed vectors: simplex grid of the diagonal times real coherence values.

    Coherence magnitudes are clipped to their positivity bound, and seeds that
    coincide after clipping are dropped.
    """
    if grid_density < 2:
        raise ValueError("grid_density must be >= 2")
    d = grid_density
    seeds = []
    for i, j, k in itertools.product(range(d + 1), repeat=3):
        if i + j + k > d:
            continue
        r = np.array([i, j, k, d - i - j - k]) / d
        b14, b23 = np.sqrt(r[0] * r[3]), np.sqrt(r[1] * r[2])
        for c14, c23 in itertools.product(coherences, repeat=2):
            seeds.append([*r, np.clip(c14, -b14, b14), 0.0, np.clip(c23, -b23, b23), 0.0])
    return np.unique(np.array(seeds), axis=0)


def _residual(func, v):
    with np.errstate(all="ignore"):
        out, n = x_map_params(v)
        if func is map_ff:
            out2, n2 = x_map_params(out)
            n = np.minimum(n, n2)
            out = out2
    g = out - v
    bad = ~(n > N_THRESHOLD) | ~np.all(np.isfinite(g), axis=-1)
    return g, bad


def _composed(period):
    def func(v):
        with np.errstate(all="ignore"):
            out, _ = x_map_params(v)
            if period == 2:
                out, _ = x_map_params(out)
        return out
    return func


def newton_solve(seeds, period=1, max_iter=100, tol=1e-14, max_halvings=30):
    """Damped Newton on ``f^period(v) - v`` for a batch of seeds.

    The Jacobian is numerical; the step is a least-squares solve so that
    singular directions do not blow up.  The step length is halved while the
    residual increases.  Returns ``(points, residuals, converged)``.
    """
    target = map_f if period == 1 else map_ff
    func = _composed(period)
    v = np.array(seeds, dtype=float)
    g, bad = _residual(target, v)
    res = np.where(bad, np.inf, np.abs(g).max(axis=-1))
    active = ~bad & (res > tol)
    for _ in range(max_iter):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        vi, gi, ri = v[idx], g[idx], res[idx]
        jac = _fd_columns(func, vi, FD_STEP) - np.eye(8)
        step = -np.einsum("nij,nj->ni", np.linalg.pinv(jac, rcond=1e-12), gi)
        t = np.ones(len(idx))
        accepted = np.zeros(len(idx), dtype=bool)
        for _ in range(max_halvings):
            todo = ~accepted
            if not todo.any():
                break
            trial = vi[todo] + t[todo, None] * step[todo]
            gt, bt = _residual(target, trial)
            rt = np.where(bt, np.inf, np.abs(gt).max(axis=-1))
            ok = rt < ri[todo]
            sel = np.flatnonzero(todo)[ok]
            vi[sel], gi[sel], ri[sel] = trial[ok], gt[ok], rt[ok]
            accepted[sel] = True
            t[todo & ~accepted] /= 2
        v[idx], g[idx], res[idx] = vi, gi, ri
        # a seed stops when it converges or no damped step reduces the residual
        active[idx] = accepted & (ri > tol)
    return v, res, res <= RESIDUAL_TOL


def is_valid_state(v, tol=COHERENCE_TOL):
    r = v[:4]
    if np.any(r < -tol) or abs(r.sum() - 1) > TRACE_TOL * 1e3:
        return False
    b14 = np.sqrt(max(r[0] * r[3], 0.0))
    b23 = np.sqrt(max(r[1] * r[2], 0.0))
    return np.hypot(v[4], v[5]) <= b14 + tol and np.hypot(v[6], v[7]) <= b23 + tol


def find_fixed_points(grid_density=12, period=1, seeds=None):
    """Locate and classify fixed points inside the set of valid X states.

    For ``period=2`` only genuine period-two points (``f(v) != v``) are kept.
    Results are ordered by verdict (stable first) then lexicographically.
    """
    if seeds is None:
        seeds = simplex_seeds(grid_density)
    points, res, converged = newton_solve(seeds, period)
    found = []
    for v in points[converged]:
        v = np.where(np.abs(v) < 1e-15, 0.0, v)
        if not is_valid_state(v):
            continue
        if period == 2 and np.abs(map_f(v) - v).max() < DEDUP_TOL:
            continue
        if any(np.abs(v - w).max() < DEDUP_TOL for w in found):
            continue
        found.append(v)
    records = [analyse_point(v, period) for v in found]
    order = {"stable": 0, "marginal": 1, "unstable": 2}
    records.sort(key=lambda rec: (order[rec.verdict], tuple(-rec.v_star[:4]),
                                  tuple(rec.v_star[4:])))
    return records


def format_table(records, digits=4):
    """Text table with the columns ``(r1, r2, r3, r4, r14, r23)`` and stability."""
    lines = [f"{'(r1, r2, r3, r4, r14, r23)':<52} {'period':>6}  stability"]
    for rec in records:
        v = rec.v_star
        r14 = complex(v[4], v[5])
        r23 = complex(v[6], v[7])

        def fmt(x):
            if abs(x) < 0.5 * 10 ** -digits:
                return "0"
            return f"{x:.{digits}f}".rstrip("0").rstrip(".")

        def cfmt(z):
            if abs(z.imag) < 10 ** -digits:
                return fmt(z.real)
            return f"{fmt(z.real)}{z.imag:+.{digits}f}i"

        coords = ", ".join([fmt(x) for x in v[:4]] + [cfmt(r14), cfmt(r23)])
        lines.append(f"({coords})".ljust(52) + f" {rec.period:>6}  {rec.verdict}")
    return "\n".join(lines)
