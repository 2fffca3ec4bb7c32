"""Adaptive trajectory integration of the reduced replicator field.

A Dormand-Prince 5(4) embedded explicit pair drives the stepping: the
fifth-order solution is propagated and the fourth-order difference gives
the local error estimate, kept below atol + rtol * |state| per step.  The
field is a cubic polynomial with moderate Lipschitz constants at desk
scale, so an explicit pair is ample; the contract is tolerance-based, not
tied to any particular solver brand.

States are tuples of plain floats and every arithmetic step has a fixed
order of operations, so identical inputs produce bitwise-identical
trajectories on a fixed platform.  Because each field component carries
its own share as an exact factor, a share that starts at exactly zero
stays exactly zero: boundary faces are invariant to the last bit, and the
negativity clamp never activates on them.

After each accepted step, shares that went negative by no more than the
simplex tolerance are clamped back to zero (and counted); integration
stops once the field's sup norm falls below the convergence threshold,
at the time limit, or on step-size underflow.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import InvalidStartError
from .equilibrium_catalog import EquilibriumId, catalog
from .game_core import Params, TOL_SIMPLEX
from .replicator_field import Reduced, ReducedState, field_3d, on_reduced_simplex

__all__ = [
    "IntegrationConfig",
    "Terminal",
    "Trajectory",
    "integrate",
    "batch_integrate",
    "adaptive_integrate",
    "clamp_negatives",
    "simplex_project",
    "random_interior_starts",
    "write_trajectory_csv",
    "trajectory_sidecar",
    "write_trajectory_sidecar",
    "DEFAULT_SEED",
]

DEFAULT_SEED = 42

# Dormand-Prince 5(4): seven stages, FSAL (the last stage is the derivative
# at the new point and becomes the first stage of the next step).
_STAGE_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
# Fifth-order minus fourth-order weights: local error coefficients.
_ERR = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)

_H_UNDERFLOW = 1e-14


class Terminal(enum.Enum):
    CONVERGED = "ConvergedToEquilibrium"
    TIME_LIMIT = "TimeLimit"
    STEP_FAILURE = "StepFailure"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class IntegrationConfig:
    rtol: float = 1e-6
    atol: float = 1e-9
    t_end: float = 2000.0
    max_step: float = 10.0
    convergence_eps: float = 1e-10   # on the field's sup norm
    record_stride: Optional[float] = None   # None = record every accepted step

    def validate(self) -> "IntegrationConfig":
        if not (self.rtol > 0 and self.atol > 0):
            raise ValueError("tolerances must be positive")
        if not self.t_end > 0:
            raise ValueError("t_end must be positive")
        if not self.max_step > 0:
            raise ValueError("max_step must be positive")
        if not self.convergence_eps > 0:
            raise ValueError("convergence_eps must be positive")
        if self.record_stride is not None and not self.record_stride > 0:
            raise ValueError("record_stride must be positive")
        return self


@dataclass(frozen=True)
class Trajectory:
    """Recorded samples (t, x, y, z, w), terminal status and bookkeeping."""

    samples: np.ndarray                  # shape (n, 5), t strictly increasing
    terminal: Terminal
    nearest: Optional[EquilibriumId]     # attached when converged, else None
    clamp_count: int
    steps: int
    rejected: int

    def final_state(self) -> ReducedState:
        t, x, y, z, w = self.samples[-1]
        return ReducedState(x, y, z)


def _norm_inf(vec: Sequence[float]) -> float:
    return max(abs(t) for t in vec)


def _stage_state(y, h, ks, coeffs):
    out = []
    for i, yi in enumerate(y):
        acc = 0.0
        for a, k in zip(coeffs, ks):
            acc += a * k[i]
        out.append(yi + h * acc)
    return tuple(out)


def clamp_negatives(y, tol=TOL_SIMPLEX):
    """Zero out components in [-tol, 0); counts how many were touched."""
    clamped = 0
    out = list(y)
    for i, t in enumerate(out):
        if -tol <= t < 0.0:
            out[i] = 0.0
            clamped += 1
    return tuple(out), clamped


def simplex_project(y, tol=TOL_SIMPLEX):
    """Clamp tiny negative shares and rescale a within-tolerance w overshoot."""
    out, clamped = clamp_negatives(y, tol)
    s = out[0] + out[1] + out[2]
    if 1.0 < s <= 1.0 + tol:
        out = (out[0] / s, out[1] / s, out[2] / s)
        clamped += 1
    return out, clamped


def adaptive_integrate(rate: Callable, y0: Sequence[float], cfg: IntegrationConfig,
                       project: Callable = clamp_negatives):
    """Generic adaptive embedded-pair driver shared by the 3D and 1D paths.

    ``project`` is applied after every accepted step to pull round-off
    noise back onto the admissible region; it must return (state, n_fixed).
    Returns (samples, terminal, (accepted, rejected), clamp_count) with
    samples a list of (t, state-tuple).
    """
    cfg = cfg.validate()
    y = tuple(float(t) for t in y0)
    t = 0.0
    k1 = tuple(float(g) for g in rate(y))
    samples = [(t, y)]
    clamps = 0
    accepted = rejected = 0
    if _norm_inf(k1) < cfg.convergence_eps:
        return samples, Terminal.CONVERGED, (0, 0), 0

    h = min(cfg.max_step, cfg.t_end, 0.01 / (1.0 + _norm_inf(k1)))
    last_recorded = 0.0
    while True:
        remaining = cfg.t_end - t
        if remaining <= 1e-13 * max(1.0, cfg.t_end):
            return samples, Terminal.TIME_LIMIT, (accepted, rejected), clamps
        h = min(h, cfg.max_step, remaining)
        if h < _H_UNDERFLOW:
            return samples, Terminal.STEP_FAILURE, (accepted, rejected), clamps

        ks = [k1]
        for stage in range(1, 7):
            ys = _stage_state(y, h, ks, _STAGE_A[stage])
            ks.append(tuple(float(g) for g in rate(ys)))
        y_new = ys  # stage 7 state uses the fifth-order weights
        k7 = ks[6]

        err = 0.0
        for i in range(len(y)):
            acc = 0.0
            for e, k in zip(_ERR, ks):
                acc += e * k[i]
            err = max(err, abs(h * acc))
        scale = cfg.atol + cfg.rtol * max(_norm_inf(y), _norm_inf(y_new))
        ratio = err / scale

        if ratio > 1.0:
            rejected += 1
            h *= max(0.2, 0.9 * ratio ** -0.2)
            continue

        accepted += 1
        t = t + h
        y, n_clamped = project(y_new)
        clamps += n_clamped
        k1 = tuple(float(g) for g in rate(y)) if n_clamped else k7

        if cfg.record_stride is None or t - last_recorded >= cfg.record_stride - 1e-12:
            samples.append((t, y))
            last_recorded = t
        converged = _norm_inf(k1) < cfg.convergence_eps
        if converged or t >= cfg.t_end:
            if samples[-1][0] != t:
                samples.append((t, y))
            status = Terminal.CONVERGED if converged else Terminal.TIME_LIMIT
            return samples, status, (accepted, rejected), clamps

        factor = 5.0 if ratio == 0.0 else min(5.0, max(0.2, 0.9 * ratio ** -0.2))
        h *= factor


def integrate(p: Params, s0: Reduced, cfg: Optional[IntegrationConfig] = None) -> Trajectory:
    """Integrate from s0 until convergence, the time limit, or step failure.

    Convergence means the reduced field's sup norm fell below
    cfg.convergence_eps; the nearest defined catalog point within 1e-3
    (Euclidean, reduced coordinates) is then attached, if any.
    """
    p = Params(*p).validate()
    cfg = (cfg or IntegrationConfig()).validate()
    if not on_reduced_simplex(s0):
        raise InvalidStartError(f"start {tuple(float(t) for t in s0)!r} is off the simplex")
    start = ReducedState(*(float(t) for t in s0))

    def rate(y):
        return field_3d(p, y)

    samples_raw, terminal, (accepted, rejected), clamps = adaptive_integrate(
        rate, start, cfg, project=simplex_project)

    data = np.empty((len(samples_raw), 5))
    for i, (t, (x, y, z)) in enumerate(samples_raw):
        data[i] = (t, x, y, z, 1.0 - x - y - z)
    data.flags.writeable = False

    nearest = None
    if terminal is Terminal.CONVERGED:
        final = np.array(samples_raw[-1][1])
        best_d = math.inf
        for rec in catalog(p):
            if not rec.defined:
                continue
            d = float(np.linalg.norm(final - np.array(rec.coords)))
            if d < best_d:
                best_d, nearest = d, rec.id
        if best_d > 1e-3:
            nearest = None

    return Trajectory(samples=data, terminal=terminal, nearest=nearest,
                      clamp_count=clamps, steps=accepted, rejected=rejected)


def batch_integrate(p: Params, starts: Sequence[Reduced],
                    cfg: Optional[IntegrationConfig] = None) -> list[Trajectory]:
    """Integrate a batch of starts; order-preserving and identical to
    individual ``integrate`` calls."""
    p = Params(*p).validate()
    for idx, s0 in enumerate(starts):
        if not on_reduced_simplex(s0):
            raise InvalidStartError(f"start #{idx} {tuple(float(t) for t in s0)!r} "
                                    "is off the simplex")
    return [integrate(p, s0, cfg) for s0 in starts]


def random_interior_starts(n: int, seed: int = DEFAULT_SEED) -> list[ReducedState]:
    """Uniform interior simplex points via sorted-uniform spacings."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        u = np.sort(rng.random(3))
        parts = (u[0], u[1] - u[0], u[2] - u[1], 1.0 - u[2])
        if min(parts) <= 1e-6:
            continue
        out.append(ReducedState(float(parts[0]), float(parts[1]), float(parts[2])))
    return out


def write_trajectory_csv(traj: Trajectory, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("t,x,y,z,w\n")
        for row in traj.samples:
            fh.write(",".join(f"{t:.17g}" for t in row) + "\n")


def trajectory_sidecar(traj: Trajectory) -> dict:
    return {
        "terminal": traj.terminal.value,
        "nearest_equilibrium": traj.nearest.value if traj.nearest else None,
        "t_final": float(traj.samples[-1, 0]),
        "final_state": [float(t) for t in traj.samples[-1, 1:]],
        "clamp_count": traj.clamp_count,
        "steps": traj.steps,
        "rejected_steps": traj.rejected,
    }


def write_trajectory_sidecar(traj: Trajectory, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(trajectory_sidecar(traj), fh, indent=2)
        fh.write("\n")
