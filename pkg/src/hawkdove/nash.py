"""Symmetric Nash equilibria, found two independent ways.

``nash_via_stability`` lifts every asymptotically stable catalog point
(classification StableNode, so all eigenvalue real parts strictly
negative) to the four-strategy simplex: asymptotic stability of the
replicator dynamics implies the symmetric strategy pair is a Nash
equilibrium.

``best_response_check`` is the independent oracle: a state is a symmetric
Nash equilibrium iff no pure strategy earns more against it than the
population earns against itself.  The margin it reports is the worst-case
payoff slack (>= 0 means Nash).

The pure HD/DH pairs are sometimes quoted as Nash for all v > 0, c > 0,
but the best-response margin shows c >= v is required; report exports
carry a note in the disputed region v > 0, 0 < c < v instead of silently
picking a side.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .equilibrium_catalog import catalog
from .game_core import (
    Params,
    STRATEGIES,
    SimplexState,
    build_payoff_matrix,
    require_simplex,
    strategy_payoff,
)
from .linear_analysis import Classification
from .replicator_field import lift

__all__ = [
    "NashReport",
    "nash_tol",
    "best_response_check",
    "nash_via_stability",
    "discrepancy_notes",
    "reports_to_json",
    "write_reports_json",
]


def nash_tol(p: Params) -> float:
    """Payoffs are exact rational combinations of v and c; only rounding
    noise is tolerated: 1e-10 * (1 + |v| + |c|)."""
    v, c = p
    return 1e-10 * (1.0 + abs(v) + abs(c))


@dataclass(frozen=True)
class NashReport:
    candidate: SimplexState
    via_stability: bool
    via_best_response: bool
    support: tuple[str, ...]
    margin: float


def best_response_check(p: Params, sigma) -> NashReport:
    """Check the symmetric Nash condition for a population state.

    margin = (payoff of sigma against sigma) - max_i (payoff of pure i
    against sigma); Nash iff margin >= -tol.  Support strategies should
    additionally earn within tol of the average; that is reported through
    the support list, not enforced.
    """
    p = Params(*p).validate()
    s = require_simplex(sigma)
    m = build_payoff_matrix(p)
    tol = nash_tol(p)
    u = [strategy_payoff(m, i, s) for i in range(4)]
    u_bar = sum(si * ui for si, ui in zip(s, u))
    margin = u_bar - max(u)
    support = tuple(name for name, si in zip(STRATEGIES, s) if si > tol)
    return NashReport(
        candidate=s,
        via_stability=False,
        via_best_response=margin >= -tol,
        support=support,
        margin=margin,
    )


def nash_via_stability(p: Params) -> list[NashReport]:
    """Every StableNode catalog point, lifted to the 4-simplex.

    Normally hyperbolic points are excluded: a zero eigenvalue denies
    asymptotic stability by linearization.  Each emitted candidate is
    cross-annotated with the best-response oracle.
    """
    p = Params(*p).validate()
    out = []
    for rec in catalog(p):
        if rec.classification is not Classification.STABLE_NODE:
            continue
        candidate = SimplexState(*lift(rec.coords))
        checked = best_response_check(p, candidate)
        out.append(NashReport(
            candidate=candidate,
            via_stability=True,
            via_best_response=checked.via_best_response,
            support=checked.support,
            margin=checked.margin,
        ))
    return out


def discrepancy_notes(p: Params) -> list[str]:
    """Known condition inconsistencies that apply at these parameters."""
    v, c = p
    notes = []
    if v > 0 and 0 < c < v:
        notes.append(
            "Discrepancy: the concluding condition (v > 0, c > 0) would make "
            "the pure HD/DH pairs Nash here, but the stability analysis and "
            "the best-response oracle both require c >= v; HD/DH are not "
            "Nash at these parameters.")
    return notes


def reports_to_json(p: Params, reports: list[NashReport]) -> dict:
    v, c = p
    return {
        "v": v,
        "c": c,
        "reports": [
            {
                "candidate": [t for t in r.candidate],
                "via_stability": r.via_stability,
                "via_best_response": r.via_best_response,
                "margin": r.margin,
                "support": list(r.support),
            }
            for r in reports
        ],
        "notes": discrepancy_notes(p),
    }


def write_reports_json(p: Params, reports: list[NashReport], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(reports_to_json(p, reports), fh, indent=2)
        fh.write("\n")
