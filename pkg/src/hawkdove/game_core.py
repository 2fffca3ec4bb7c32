"""Payoff structures for the four-strategy asymmetric Hawk-Dove game.

Strategies are role-conditioned: an individual commits to one behaviour as
owner and one as intruder, so the pure strategies are HH, HD, DH, DD (in
that order, frozen everywhere in this package: arrays, CSV columns and CLI
output all follow it).  The game has two parameters, the resource value
``v`` and the contest cost ``c``; both are plain reals with no sign
restriction.

Row-player payoffs::

          HH         HD         DH         DD
    HH  (v-c)/2   (3v-c)/4   (3v-c)/4     v
    HD  (v-c)/4     v/2      (2v-c)/4    3v/4
    DH  (v-c)/4   (2v-c)/4     v/2       3v/4
    DD     0        v/4        v/4       v/2

Only row-player entries are stored; in this symmetric-role construction
the column player's payoff is the transpose read and is never stored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence, Union

import numpy as np

__all__ = [
    "STRATEGIES",
    "HH",
    "HD",
    "DH",
    "DD",
    "TOL_SIMPLEX",
    "Params",
    "PayoffMatrix",
    "SimplexState",
    "build_payoff_matrix",
    "strategy_payoff",
    "average_payoff",
    "on_simplex",
    "require_simplex",
]

STRATEGIES = ("HH", "HD", "DH", "DD")
HH, HD, DH, DD = range(4)

#: Simplex membership tolerance.  Integrator round-off accumulates and the
#: dynamics are polynomial (no sensitivity cliff), so a loose-ish 1e-9 is safe.
TOL_SIMPLEX = 1e-9


class Params(NamedTuple):
    """Game parameters: resource value ``v`` and contest cost ``c``."""

    v: float
    c: float

    def validate(self) -> "Params":
        if not (math.isfinite(self.v) and math.isfinite(self.c)):
            raise ValueError(f"parameters must be finite, got v={self.v!r} c={self.c!r}")
        return self


class SimplexState(NamedTuple):
    """Population shares (x, y, z, w) of strategies (HH, HD, DH, DD)."""

    x: float
    y: float
    z: float
    w: float


StateLike = Union[SimplexState, Sequence[float], np.ndarray]


@dataclass(frozen=True)
class PayoffMatrix:
    """4x4 row-player payoff table in the fixed strategy order."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        e = np.asarray(self.entries, dtype=float)
        if e.shape != (4, 4):
            raise ValueError(f"payoff matrix must be 4x4, got shape {e.shape}")
        e.flags.writeable = False
        object.__setattr__(self, "entries", e)

    def __getitem__(self, key):
        return self.entries[key]


def _strategy_index(i: Union[int, str]) -> int:
    if isinstance(i, str):
        try:
            return STRATEGIES.index(i)
        except ValueError:
            raise ValueError(f"unknown strategy {i!r}; expected one of {STRATEGIES}") from None
    i = int(i)
    if not 0 <= i < 4:
        raise ValueError(f"strategy index out of range: {i}")
    return i


def build_payoff_matrix(p: Params) -> PayoffMatrix:
    """Row-player payoffs of the asymmetric game, generated from (v, c)."""
    v, c = Params(*p).validate()
    return PayoffMatrix(np.array([
        [(v - c) / 2, (3 * v - c) / 4, (3 * v - c) / 4, v],
        [(v - c) / 4, v / 2, (2 * v - c) / 4, 3 * v / 4],
        [(v - c) / 4, (2 * v - c) / 4, v / 2, 3 * v / 4],
        [0.0, v / 4, v / 4, v / 2],
    ]))


def strategy_payoff(m: PayoffMatrix, i: Union[int, str], s: StateLike) -> float:
    """Expected payoff of strategy ``i`` against population state ``s``.

    Linear in ``s``: the contraction of row ``i`` with (x, y, z, w).
    """
    row = m.entries[_strategy_index(i)]
    x, y, z, w = s
    return float(row[0] * x + row[1] * y + row[2] * z + row[3] * w)


def average_payoff(p: Params, s: StateLike) -> float:
    """Population-average payoff, in closed form: (v - c(x+y)(x+z)) / 2.

    Equals sum_i s_i * strategy_payoff(m, i, s) on the simplex; that
    equivalence is enforced by a property test rather than recomputing the
    contraction here.
    """
    v, c = p
    x, y, z, _w = s
    return 0.5 * (v - c * (x + y) * (x + z))


def on_simplex(s: StateLike, tol: float = TOL_SIMPLEX) -> bool:
    """True when all shares are >= -tol and they sum to 1 within tol."""
    vals = [float(t) for t in s]
    if not all(math.isfinite(t) for t in vals):
        return False
    return min(vals) >= -tol and abs(sum(vals) - 1.0) <= tol


def require_simplex(s: StateLike, tol: float = TOL_SIMPLEX) -> SimplexState:
    if not on_simplex(s, tol):
        raise ValueError(f"state {tuple(s)!r} is not on the simplex (tol={tol})")
    return SimplexState(*(float(t) for t in s))
