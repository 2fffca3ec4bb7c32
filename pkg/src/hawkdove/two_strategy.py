"""The standard two-strategy Hawk-Dove game as a low-dimensional oracle.

With z the share of Hawks, the replicator dynamics collapse to a single
ODE, dz/dt = f(z) = z(1-z)(v - cz)/2, with equilibria z = 0, z = 1 and
z = v/c.  The factored form (c/2) z (1-z) (v/c - z) divides by c only in
print; the expanded polynomial used here is total in (v, c) and reduces
to (v/2) z (1-z) at c = 0.

The correspondence mapping to the full four-strategy game is descriptive
metadata: z = 0 matches P7 and z = v/c matches P1 and P4; no counterpart
is documented for z = 1.
"""

from __future__ import annotations

from typing import NamedTuple, Optional

import numpy as np

from .equilibrium_catalog import EquilibriumId
from .game_core import Params

__all__ = [
    "two_strategy_payoff_matrix",
    "f",
    "f_prime",
    "equilibria_1d",
    "classify_1d",
    "CorrespondenceEntry",
    "correspondence",
    "simulate_hawk_share",
]


def two_strategy_payoff_matrix(p: Params) -> np.ndarray:
    """Row-player payoffs of the two-strategy game, order (H, D)."""
    v, c = Params(*p).validate()
    return np.array([[(v - c) / 2, v], [0.0, v / 2]])


def f(p: Params, z: float) -> float:
    """Rate of change of the Hawk share: z(1-z)(v - cz)/2."""
    v, c = p
    z = float(z)
    return 0.5 * z * (1.0 - z) * (v - c * z)


def f_prime(p: Params, z: float) -> float:
    """Analytic derivative: [v - 2vz + cz(-2 + 3z)] / 2."""
    v, c = p
    z = float(z)
    return 0.5 * (v - 2.0 * v * z + c * z * (-2.0 + 3.0 * z))


def equilibria_1d(p: Params) -> list[float]:
    """Equilibrium shares {0, 1, v/c}; the interior one only when c != 0."""
    v, c = p
    eqs = [0.0, 1.0]
    if c != 0:
        eqs.append(v / c)
    return eqs


def _tag(p: Params, z: float) -> str:
    v, c = p
    fp = f_prime(p, z)
    tol = 1e-9 * (1.0 + abs(v) + abs(c))
    if abs(fp) <= tol:
        return "degenerate"
    return "stable" if fp < 0 else "unstable"


def classify_1d(p: Params) -> list[tuple[float, str]]:
    """Each 1D equilibrium with its sign-of-derivative tag.

    Closed forms: f'(0) = v/2, f'(1) = (c-v)/2, f'(v/c) = v(v-c)/(2c).
    """
    p = Params(*p).validate()
    return [(z, _tag(p, z)) for z in equilibria_1d(p)]


class CorrespondenceEntry(NamedTuple):
    label: str
    z: Optional[float]                       # None when v/c is undefined
    matches: tuple[EquilibriumId, ...]       # empty = unmapped


def correspondence(p: Params) -> list[CorrespondenceEntry]:
    """Documented mapping from 1D equilibria to the full-game catalog."""
    v, c = p
    return [
        CorrespondenceEntry("z=0", 0.0, (EquilibriumId.P7,)),
        CorrespondenceEntry("z=v/c", v / c if c != 0 else None,
                            (EquilibriumId.P1, EquilibriumId.P4)),
        CorrespondenceEntry("z=1", 1.0, ()),
    ]


def simulate_hawk_share(p: Params, z0: float, cfg=None) -> list[tuple[float, float]]:
    """Integrate the 1D dynamics from z0; returns (t, z) samples.

    Shares the adaptive stepper with the full-game integrator; the state
    is clamped to [0, 1] the same way simplex shares are.
    """
    from .integrator import IntegrationConfig, adaptive_integrate, clamp_negatives

    p = Params(*p).validate()
    z0 = float(z0)
    if not -1e-9 <= z0 <= 1.0 + 1e-9:
        raise ValueError(f"z0 must lie in [0, 1], got {z0}")
    cfg = cfg or IntegrationConfig()

    def rate(state):
        return (f(p, state[0]),)

    def project(state):
        out, n = clamp_negatives(state)
        if 1.0 < out[0] <= 1.0 + 1e-9:
            out, n = (1.0,), n + 1
        return out, n

    samples, _terminal, _nsteps, _clamps = adaptive_integrate(rate, (z0,), cfg,
                                                              project=project)
    return [(t, y[0]) for t, y in samples]
