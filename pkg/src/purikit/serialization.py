"""JSON formats for states, trajectories and run manifests."""
from __future__ import annotations

import datetime
import json
import math

import numpy as np

from . import __version__
from .bell_core import XState, computational_to_bell


class StateParseError(ValueError):
    """Malformed state file; the message names the offending field or line."""


def _complex_to_json(z):
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def _number(obj, where):
    if isinstance(obj, bool) or not isinstance(obj, (int, float)):
        raise StateParseError(f"{where}: expected a number, got {obj!r}")
    if not math.isfinite(obj):
        raise StateParseError(f"{where}: non-finite number")
    return float(obj)


def _complex(obj, where):
    if isinstance(obj, (int, float)) and not isinstance(obj, bool):
        return complex(_number(obj, where))
    if not isinstance(obj, dict):
        raise StateParseError(f"{where}: expected {{\"re\": .., \"im\": ..}}, got {obj!r}")
    unknown = set(obj) - {"re", "im"}
    if unknown:
        raise StateParseError(f"{where}: unexpected keys {sorted(unknown)}")
    return complex(_number(obj.get("re", 0.0), f"{where}.re"),
                   _number(obj.get("im", 0.0), f"{where}.im"))


def matrix_to_json(m, basis="bell"):
    return {"basis": basis,
            "matrix": [[_complex_to_json(z) for z in row] for row in np.asarray(m)]}


def x_to_json(s):
    return {"x": {"r": [s.r1, s.r2, s.r3, s.r4],
                  "r14": _complex_to_json(s.r14),
                  "r23": _complex_to_json(s.r23)}}


def state_from_obj(obj):
    """Decode either state layout.

    Returns an :class:`XState` for the compact ``{"x": ...}`` form and a Bell
    matrix for ``{"basis": ..., "matrix": ...}``.  Content is not validated
    as a density matrix here.
    """
    if not isinstance(obj, dict):
        raise StateParseError("top level: expected a JSON object")
    if "x" in obj:
        x = obj["x"]
        if not isinstance(x, dict):
            raise StateParseError("x: expected an object")
        r = x.get("r")
        if not isinstance(r, list) or len(r) != 4:
            raise StateParseError("x.r: expected a list of four numbers")
        r = [_number(v, f"x.r[{i}]") for i, v in enumerate(r)]
        return XState(*r, _complex(x.get("r14", 0.0), "x.r14"),
                      _complex(x.get("r23", 0.0), "x.r23"), check=False)
    if "matrix" in obj:
        basis = obj.get("basis", "bell")
        if basis not in ("bell", "computational"):
            raise StateParseError(f"basis: unknown basis {basis!r}")
        rows = obj["matrix"]
        if not isinstance(rows, list) or len(rows) != 4:
            raise StateParseError("matrix: expected 4 rows")
        m = np.zeros((4, 4), dtype=complex)
        for i, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != 4:
                raise StateParseError(f"matrix[{i}]: expected 4 entries")
            for j, entry in enumerate(row):
                m[i, j] = _complex(entry, f"matrix[{i}][{j}]")
        return m if basis == "bell" else computational_to_bell(m)
    raise StateParseError("top level: expected key 'x' or 'matrix'")


def loads_state(text):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return state_from_obj(obj)


def load_state(path):
    with open(path, encoding="utf-8") as fh:
        return loads_state(fh.read())


def trajectory_to_json(trajectory):
    return [
        {
            "step": t.step,
            "x": x_to_json(t.x)["x"],
            "N": t.outcome.normalization,
            "p_success": t.outcome.success_probability,
            "p_cumulative": t.p_cumulative,
        }
        for t in trajectory
    ]


def manifest(command, seed, config):
    return {
        "command": command,
        "seed": seed,
        "version": __version__,
        "config": config,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }


def _numpy_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"{type(obj).__name__} is not JSON serializable")


def dumps(obj):
    """JSON text; floats use the shortest repr that round-trips exactly."""
    return json.dumps(obj, indent=2, default=_numpy_default) + "\n"
