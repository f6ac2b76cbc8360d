"""Purifiability labels over the simplex of Bell fidelities."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bell_core import validate_density
from .convergence import Verdict, condition_general
from .states import FAMILIES, family_state

LABELS = {
    Verdict.PURIFIES_PSI_MINUS: "psi_minus",
    Verdict.PURIFIES_PSI_PLUS: "psi_plus",
    Verdict.NO_PURIFICATION: "none",
    Verdict.BOUNDARY: "boundary",
}


@dataclass(frozen=True)
class RegionScanConfig:
    family: str = "diagonal"
    eta: tuple = (0.0, 0.0)
    grid_points_per_axis: int = 64

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if len(self.eta) != 2 or not all(0 <= e <= 1 for e in self.eta):
            raise ValueError(f"eta must be two values in [0, 1], got {self.eta}")
        if self.grid_points_per_axis < 1:
            raise ValueError("grid_points_per_axis must be positive")


@dataclass
class RegionScan:
    config: RegionScanConfig
    rows: list = field(default_factory=list)
    rejected: list = field(default_factory=list)

    def fraction(self, label):
        if not self.rows:
            return 0.0
        return sum(1 for row in self.rows if row[3] == label) / len(self.rows)

    def counts(self):
        out = dict.fromkeys(LABELS.values(), 0)
        for row in self.rows:
            out[row[3]] += 1
        return out


def grid_points(n):
    """Cell centres ``(k + 1/2)/n`` with ``r1 + r2 + r3 <= 1``, in index order."""
    centres = (np.arange(n) + 0.5) / n
    pts = []
    for r1 in centres:
        for r2 in centres:
            for r3 in centres:
                if r1 + r2 + r3 <= 1:
                    pts.append((r1, r2, r3, 1 - r1 - r2 - r3))
    return pts


def scan(config):
    result = RegionScan(config)
    for r in grid_points(config.grid_points_per_axis):
        rho = family_state(r, config.family, config.eta)
        report = validate_density(rho)
        if not report.ok:
            result.rejected.append((r[:3], report.violations))
            continue
        label = LABELS[condition_general(rho).verdict]
        result.rows.append((float(r[0]), float(r[1]), float(r[2]), label))
    return result


def to_csv(result):
    lines = ["r1,r2,r3,label"]
    lines += [f"{r1!r},{r2!r},{r3!r},{label}" for r1, r2, r3, label in result.rows]
    return "\n".join(lines) + "\n"


def to_json(result):
    return [{"r1": r1, "r2": r2, "r3": r3, "label": label}
            for r1, r2, r3, label in result.rows]
