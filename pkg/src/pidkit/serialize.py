"""File formats: pair-result CSV, summary JSON, joint-distribution text, manifests.

Output bytes are deterministic: floats are written with ``repr`` (shortest
round-trip form), JSON keys are sorted, and infinities are spelled
``inf`` / ``-inf``.  Unit conversion to bits happens here and only here.
"""

from __future__ import annotations

import json
import math
from typing import Iterable

import numpy as np

from .discrete import DiscreteJoint3
from .extreal import ExtReal

_LN2 = math.log(2.0)

CSV_COLUMNS = (
    "batch",
    "i",
    "j",
    "is_interaction",
    "kind",
    "r",
    "u_x",
    "u_y",
    "s",
    "mi",
    "rank_r",
    "rank_u_x",
    "rank_u_y",
    "rank_s",
    "rank_mi",
)
# columns holding information values (converted when units are bits)
_VALUE_SLICE = slice(5, 10)


class JointFileError(ValueError):
    """A joint-distribution file failed to parse or validate."""

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


def unit_scale(units: str) -> float:
    if units == "nats":
        return 1.0
    if units == "bits":
        return 1.0 / _LN2
    raise ValueError(f"units must be 'nats' or 'bits', got {units!r}")


def format_number(value) -> str:
    value = float(value)
    if value == math.inf:
        return "inf"
    if value == -math.inf:
        return "-inf"
    if math.isnan(value):
        return "indeterminate"
    return repr(value)


def rows_to_csv(rows: Iterable[tuple], units: str = "nats") -> str:
    """Render PairResult rows with the fixed column order."""
    scale = unit_scale(units)
    lines = [",".join(CSV_COLUMNS)]
    for row in rows:
        cells = list(row)
        values = [v * scale if math.isfinite(v) else v for v in cells[_VALUE_SLICE]]
        cells[_VALUE_SLICE] = values
        lines.append(
            ",".join(
                str(c) if isinstance(c, (int, str)) else format_number(c) for c in cells
            )
        )
    return "\n".join(lines) + "\n"


# Summary keys whose numeric leaves carry information units.
_UNITFUL_KEYS = {"atom_values", "mean_mi"}


def _scale_tree(node, scale: float):
    if isinstance(node, dict):
        return {k: _scale_tree(v, scale) for k, v in node.items()}
    if isinstance(node, (list, tuple)):
        return [_scale_tree(v, scale) for v in node]
    if isinstance(node, bool):
        return node
    if isinstance(node, (int, float)):
        return float(node) * scale
    return node


def _convert_units(node, scale: float):
    if isinstance(node, dict):
        return {
            k: _scale_tree(v, scale) if k in _UNITFUL_KEYS else _convert_units(v, scale)
            for k, v in node.items()
        }
    if isinstance(node, (list, tuple)):
        return [_convert_units(v, scale) for v in node]
    return node


def summary_payload(summary: dict, units: str = "nats") -> dict:
    payload = _convert_units(summary, unit_scale(units))
    return {"units": units, **payload}


def summary_to_json(summary: dict, units: str = "nats") -> str:
    return json.dumps(summary_payload(summary, units), sort_keys=True, indent=2, allow_nan=False) + "\n"


def manifest_dict(command: str, seed: int | None, config: dict, version: str) -> dict:
    return {
        "tool": "pidkit",
        "version": version,
        "command": command,
        "seed": seed,
        "config": dict(sorted(config.items())),
    }


def manifest_to_json(manifest: dict) -> str:
    return json.dumps(manifest, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _sort_symbols(symbols: set[str]) -> tuple[str, ...]:
    try:
        return tuple(sorted(symbols, key=lambda s: (float(s), s)))
    except ValueError:
        return tuple(sorted(symbols))


JOINT_HEADER = "alphabet x y t"


def parse_joint_file(text: str) -> DiscreteJoint3:
    """Parse the trivariate joint text format.

    The first non-blank line must be the header ``alphabet x y t``;
    each following non-blank, non-comment line is ``x y t prob``.
    Missing cells default to zero; duplicate cells are rejected.
    """
    lines = text.splitlines()
    entries: dict[tuple[str, str, str], float] = {}
    header_seen = False
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not header_seen:
            if line.split() != JOINT_HEADER.split():
                raise JointFileError(
                    f"expected header {JOINT_HEADER!r}, got {line!r}", line=lineno
                )
            header_seen = True
            continue
        parts = line.split()
        if len(parts) != 4:
            raise JointFileError(
                f"expected 'x y t prob' (4 fields), got {len(parts)}", line=lineno
            )
        x, y, t, prob_text = parts
        try:
            prob = float(prob_text)
        except ValueError:
            raise JointFileError(f"bad probability {prob_text!r}", line=lineno) from None
        if prob < 0:
            raise JointFileError(f"negative probability {prob}", line=lineno)
        if (x, y, t) in entries:
            raise JointFileError(f"duplicate cell ({x}, {y}, {t})", line=lineno)
        entries[(x, y, t)] = prob
    if not header_seen:
        raise JointFileError(f"missing header {JOINT_HEADER!r}")
    if not entries:
        raise JointFileError("no probability cells found")

    ax = _sort_symbols({k[0] for k in entries})
    ay = _sort_symbols({k[1] for k in entries})
    at = _sort_symbols({k[2] for k in entries})
    table = np.zeros((len(ax), len(ay), len(at)))
    for (x, y, t), prob in entries.items():
        table[ax.index(x), ay.index(y), at.index(t)] = prob
    try:
        return DiscreteJoint3(ax, ay, at, table)
    except ValueError as exc:
        raise JointFileError(str(exc)) from exc


def joint_to_file_text(joint: DiscreteJoint3) -> str:
    """Inverse of parse_joint_file (zero cells omitted)."""
    lines = [JOINT_HEADER]
    for ix, x in enumerate(joint.alphabet_x):
        for iy, y in enumerate(joint.alphabet_y):
            for it, t in enumerate(joint.alphabet_t):
                p = joint.table[ix, iy, it]
                if p > 0:
                    lines.append(f"{x} {y} {t} {format_number(p)}")
    return "\n".join(lines) + "\n"


def extreal_to_text(value: ExtReal, units: str = "nats") -> str:
    scaled = value * unit_scale(units)
    return str(scaled)
