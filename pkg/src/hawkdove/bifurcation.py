"""Parameter-plane scans and local bifurcation line detection.

The (v, c) plane is scanned on a rectangular grid; at every node all seven
catalog equilibria are classified.  Classification changes between
adjacent nodes are then attributed to the four destabilization lines
v = c, c = 0, v = 0 and c = 2v.  Nodes landing on a line itself are tagged
Degenerate by the catalog's zero-count upgrade, so a region-to-region
change shows up as two attributable half-transitions when a node sits
exactly on the line.

``linearized_field`` gives the per-point linear systems in their
conventional transcription, including the dangling constant in the first
P6 equation (returned as an affine term); they back the destabilization
tests, while classification always goes through the Jacobian.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

from .errors import UndefinedPointError
from .equilibrium_catalog import (
    CLASS_BY_CODE,
    EquilibriumId,
    classification_codes,
)
from .game_core import Params
from .linear_analysis import Classification

__all__ = [
    "LineId",
    "GridSpec",
    "RegionMap",
    "BifurcationLine",
    "TransitionPair",
    "scan",
    "transition_pairs",
    "detect_transitions",
    "linearized_field",
    "write_region_csv",
]

_EQ_ORDER = tuple(EquilibriumId)


class LineId(enum.Enum):
    VEQC = "VeqC"      # v = c
    CEQ0 = "Ceq0"      # c = 0
    VEQ0 = "Veq0"      # v = 0
    CEQ2V = "Ceq2V"    # c = 2v
    UNEXPLAINED = "Unexplained"

    def __str__(self) -> str:
        return self.value


class GridSpec(NamedTuple):
    v_min: float
    v_max: float
    c_min: float
    c_max: float
    n_v: int
    n_c: int

    def validate(self) -> "GridSpec":
        if not all(math.isfinite(t) for t in (self.v_min, self.v_max, self.c_min, self.c_max)):
            raise ValueError("grid bounds must be finite")
        if self.v_min > self.v_max or self.c_min > self.c_max:
            raise ValueError("grid bounds must be ordered")
        if self.n_v < 1 or self.n_c < 1:
            raise ValueError("grid must have at least one node per axis")
        return self


DEFAULT_GRID = GridSpec(-0.3, 0.3, -0.3, 0.3, 201, 201)


@dataclass(frozen=True)
class RegionMap:
    spec: GridSpec
    v_values: np.ndarray          # (n_v,)
    c_values: np.ndarray          # (n_c,)
    codes: np.ndarray             # (n_v, n_c, 7) int8 indexing CLASS_BY_CODE

    def tag(self, i: int, j: int, eq: EquilibriumId) -> Classification:
        return CLASS_BY_CODE[self.codes[i, j, _EQ_ORDER.index(eq)]]

    def tags(self, i: int, j: int) -> tuple[Classification, ...]:
        return tuple(CLASS_BY_CODE[k] for k in self.codes[i, j])

    def defined(self, i: int, j: int, eq: EquilibriumId) -> bool:
        return self.tag(i, j, eq) is not Classification.UNDEFINED


def _scan_rows(v_slice: np.ndarray, c_values: np.ndarray) -> np.ndarray:
    vv, cc = np.meshgrid(v_slice, c_values, indexing="ij")
    block = np.empty(vv.shape + (7,), dtype=np.int8)
    for k, eq in enumerate(_EQ_ORDER):
        block[..., k] = classification_codes(eq, vv, cc)
    return block


def scan(spec: GridSpec = DEFAULT_GRID, workers: int = 1) -> RegionMap:
    """Classify all seven equilibria at every grid node.

    Pure per-node computation assembled in row order: the output is
    identical for any worker count, and two scans of one grid agree
    bitwise.
    """
    spec = GridSpec(*spec).validate()
    v_values = np.linspace(spec.v_min, spec.v_max, spec.n_v)
    c_values = np.linspace(spec.c_min, spec.c_max, spec.n_c)
    if workers <= 1 or spec.n_v < 2 * workers:
        codes = _scan_rows(v_values, c_values)
    else:
        chunks = np.array_split(np.arange(spec.n_v), workers)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(lambda idx: _scan_rows(v_values[idx], c_values), chunks))
        codes = np.concatenate(blocks, axis=0)
    codes.flags.writeable = False
    return RegionMap(spec=spec, v_values=v_values, c_values=c_values, codes=codes)


# Line geometry: signed value and perpendicular distance at a point.
_LINE_FUNCS = {
    LineId.VEQC: (lambda v, c: v - c, math.sqrt(2.0)),
    LineId.CEQ0: (lambda v, c: c, 1.0),
    LineId.VEQ0: (lambda v, c: v, 1.0),
    LineId.CEQ2V: (lambda v, c: c - 2.0 * v, math.sqrt(5.0)),
}


class TransitionPair(NamedTuple):
    """One adjacent-node classification change, before aggregation."""

    node_a: tuple[float, float]
    node_b: tuple[float, float]
    eq: EquilibriumId
    tags: tuple[Classification, Classification]
    lines: tuple[LineId, ...]     # empty = unexplained


def _crossed_lines(a: tuple[float, float], b: tuple[float, float]) -> tuple[LineId, ...]:
    scale = 1.0 + max(abs(a[0]), abs(a[1]), abs(b[0]), abs(b[1]))
    on_tol = 1e-12 * scale
    crossed = []
    for line, (func, norm) in _LINE_FUNCS.items():
        fa, fb = func(*a), func(*b)
        if fa * fb <= 0.0 or min(abs(fa), abs(fb)) <= on_tol:
            mid_v, mid_c = 0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])
            crossed.append((abs(func(mid_v, mid_c)) / norm, line))
    if not crossed:
        return ()
    dmin = min(d for d, _ in crossed)
    # Tie near the origin: report every line at the minimal distance.
    return tuple(line for d, line in crossed if d <= dmin + on_tol)


def transition_pairs(m: RegionMap) -> Iterator[TransitionPair]:
    """All adjacent-node classification changes with their crossed lines."""
    n_v, n_c = m.spec.n_v, m.spec.n_c
    for i in range(n_v):
        for j in range(n_c):
            a = (float(m.v_values[i]), float(m.c_values[j]))
            for di, dj in ((1, 0), (0, 1)):
                i2, j2 = i + di, j + dj
                if i2 >= n_v or j2 >= n_c:
                    continue
                b = (float(m.v_values[i2]), float(m.c_values[j2]))
                ca = m.codes[i, j]
                cb = m.codes[i2, j2]
                if np.array_equal(ca, cb):
                    continue
                lines = _crossed_lines(a, b)
                for k, eq in enumerate(_EQ_ORDER):
                    if ca[k] != cb[k]:
                        yield TransitionPair(
                            node_a=a, node_b=b, eq=eq,
                            tags=(CLASS_BY_CODE[ca[k]], CLASS_BY_CODE[cb[k]]),
                            lines=lines)


@dataclass(frozen=True)
class BifurcationLine:
    id: LineId
    affected: tuple[tuple[EquilibriumId, str], ...]


def detect_transitions(m: RegionMap) -> list[BifurcationLine]:
    """Aggregate classification changes per destabilization line.

    Each affected entry is (equilibrium, "TagA<->TagB") with the tag pair
    in alphabetical order.  Changes whose node segment crosses none of the
    four lines are collected under UNEXPLAINED for manual review.
    """
    buckets: dict[LineId, set[tuple[EquilibriumId, str]]] = {}
    for pair in transition_pairs(m):
        desc = "<->".join(sorted(t.value for t in pair.tags))
        for line in (pair.lines or (LineId.UNEXPLAINED,)):
            buckets.setdefault(line, set()).add((pair.eq, desc))
    out = []
    for line in LineId:
        if line in buckets:
            affected = tuple(sorted(buckets[line], key=lambda t: (t[0].value, t[1])))
            out.append(BifurcationLine(id=line, affected=affected))
    return out


def linearized_field(p: Params, at: EquilibriumId) -> tuple[np.ndarray, np.ndarray]:
    """The transcribed linear system near ``at``: matrix plus affine terms.

    These systems coincide with the Jacobian in deviation coordinates
    except at P6, whose transcribed first equation ends in a coefficient
    with no variable attached; that term is returned in the affine vector,
    verbatim.
    """
    p = Params(*p).validate()
    v, c = p
    eq = EquilibriumId(at)
    zero3 = np.zeros(3)
    if eq is EquilibriumId.P1:
        mat = np.array([[(v - c) / 4, 0.0, 0.0],
                        [0.0, -c / 4, 0.0],
                        [(c - 2 * v) / 4, (c - v) / 4, -v / 4]])
        return mat, zero3
    if eq is EquilibriumId.P2:
        mat = np.array([[(2 * v - c) / 8, 0.0, 0.0],
                        [(c - 2 * v) / 8, (c - v) / 8, -v / 8],
                        [(c - 2 * v) / 8, -v / 8, (c - v) / 8]])
        return mat, zero3
    if eq is EquilibriumId.P3:
        if c == 0:
            raise UndefinedPointError("P3 is undefined at c = 0")
        mat = np.array([[0.0, 0.0, 0.0],
                        [-v * (c - 2 * v) / (4 * c), v * v / (4 * c), v * (v - c) / (4 * c)],
                        [-v * (c - 2 * v) / (4 * c), v * (v - c) / (4 * c), v * v / (4 * c)]])
        return mat, zero3
    if eq is EquilibriumId.P4:
        mat = np.array([[(v - c) / 4, 0.0, 0.0],
                        [(c - 2 * v) / 4, -v / 4, (c - v) / 4],
                        [0.0, 0.0, -c / 4]])
        return mat, zero3
    if eq is EquilibriumId.P5:
        mat = np.array([[(c - v) / 2, (c - v) / 4, (c - v) / 4],
                        [0.0, (c - v) / 4, 0.0],
                        [0.0, 0.0, (c - v) / 4]])
        return mat, zero3
    if eq is EquilibriumId.P6:
        if c == 0:
            raise UndefinedPointError("P6 is undefined at c = 0")
        mat = np.array([[v * (v - c) / (2 * c), v * (v - c) / (4 * c), 0.0],
                        [0.0, 0.0, 0.0],
                        [0.0, 0.0, 0.0]])
        affine = np.array([v * (v - c) / (4 * c), 0.0, 0.0])
        return mat, affine
    if eq is EquilibriumId.P7:
        mat = np.diag([v / 2, v / 4, v / 4])
        return mat, zero3
    raise ValueError(f"unknown equilibrium {at!r}")


def write_region_csv(m: RegionMap, path) -> None:
    """Region map as CSV: header v,c,P1..P7, row-major in v then c."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("v,c," + ",".join(eq.value for eq in _EQ_ORDER) + "\n")
        for i in range(m.spec.n_v):
            v = m.v_values[i]
            for j in range(m.spec.n_c):
                tags = ",".join(CLASS_BY_CODE[k].value for k in m.codes[i, j])
                fh.write(f"{v:.17g},{m.c_values[j]:.17g},{tags}\n")
