"""Command-line surface: equilibria, simulate, bifurcation, nash, two-strategy.

All outputs are file-based (CSV/JSON, optional static SVG projections).
Floats in CSV are printed with 17 significant digits so files re-parse to
the exact in-memory values.  Exit codes: 0 success, 2 usage error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

from . import __version__
from .bifurcation import (
    DEFAULT_GRID,
    GridSpec,
    detect_transitions,
    scan,
    write_region_csv,
)
from .equilibrium_catalog import CLASS_BY_CODE, EquilibriumId, catalog
from .game_core import Params
from .integrator import (
    DEFAULT_SEED,
    IntegrationConfig,
    Terminal,
    batch_integrate,
    random_interior_starts,
    write_trajectory_csv,
    trajectory_sidecar,
)
from .linear_analysis import Classification
from .nash import best_response_check, nash_via_stability, reports_to_json
from .replicator_field import ReducedState, on_reduced_simplex
from .svg import Canvas
from .two_strategy import classify_1d, correspondence, simulate_hawk_share
from .game_core import STRATEGIES, SimplexState

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3


def _out_dir(arg: str | None) -> Path:
    base = arg or os.environ.get("HAWKDOVE_OUTDIR", ".")
    path = Path(base)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _finite(parser: argparse.ArgumentParser, name: str, value: float) -> float:
    if not math.isfinite(value):
        parser.error(f"{name} must be finite, got {value}")
    return value


def _add_params(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--v", type=float, required=True, help="resource value v")
    sub.add_argument("--c", type=float, required=True, help="contest cost c")


def _fmt_eig(lam: complex) -> str:
    if lam.imag == 0:
        return f"{lam.real:.6g}"
    sign = "+" if lam.imag >= 0 else "-"
    return f"{lam.real:.6g}{sign}{abs(lam.imag):.6g}j"


# ---------------------------------------------------------------- equilibria

def cmd_equilibria(args, parser) -> int:
    p = Params(_finite(parser, "--v", args.v), _finite(parser, "--c", args.c))
    records = catalog(p)
    rows = []
    for rec in records:
        eigs = ("-", "-", "-") if rec.eigenvalues is None else tuple(
            _fmt_eig(l) for l in rec.eigenvalues)
        agree = rec.agrees_with_paper
        rows.append({
            "id": rec.id.value,
            "x": rec.coords.x, "y": rec.coords.y, "z": rec.coords.z,
            "defined": rec.defined,
            "in_simplex": rec.in_simplex,
            "eigenvalues": eigs,
            "classification": rec.classification.value,
            "paper_region_class": rec.paper_region_class.value if rec.paper_region_class else "-",
            "paper_agrees": "-" if agree is None else str(agree),
            "coincides_with": ",".join(t.value for t in rec.coincides_with) or "-",
        })

    if args.format == "json":
        payload = {"v": p.v, "c": p.c, "equilibria": rows}
        text = json.dumps(payload, indent=2, default=str) + "\n"
    elif args.format == "csv":
        lines = ["id,x,y,z,defined,in_simplex,eig1,eig2,eig3,"
                 "classification,paper_region_class,paper_agrees,coincides_with"]
        for r in rows:
            lines.append(",".join([
                r["id"], f"{r['x']:.17g}", f"{r['y']:.17g}", f"{r['z']:.17g}",
                str(r["defined"]), str(r["in_simplex"]),
                *[str(e) for e in r["eigenvalues"]],
                r["classification"], r["paper_region_class"], r["paper_agrees"],
                f"\"{r['coincides_with']}\"" if "," in r["coincides_with"] else r["coincides_with"],
            ]))
        text = "\n".join(lines) + "\n"
    else:
        header = (f"{'id':<4}{'x':>10}{'y':>10}{'z':>10}  {'def':<7}{'simplex':<9}"
                  f"{'eigenvalues':<34}{'class':<28}{'paper':<28}{'agree':<6}")
        lines = [f"v={p.v:g} c={p.c:g}", header, "-" * len(header)]
        for r in rows:
            eig = ", ".join(str(e) for e in r["eigenvalues"])
            lines.append(
                f"{r['id']:<4}{r['x']:>10.4g}{r['y']:>10.4g}{r['z']:>10.4g}  "
                f"{str(r['defined']):<7}{str(r['in_simplex']):<9}{eig:<34}"
                f"{r['classification']:<28}{r['paper_region_class']:<28}{r['paper_agrees']:<6}")
        text = "\n".join(lines) + "\n"

    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ----------------------------------------------------------------- simulate

def _parse_starts(args, parser) -> list[ReducedState]:
    starts: list[ReducedState] = []
    for spec in args.start or []:
        try:
            vals = tuple(float(t) for t in spec.split(","))
        except ValueError:
            parser.error(f"bad --start value {spec!r}; expected x,y,z")
        if len(vals) != 3:
            parser.error(f"--start needs three components, got {spec!r}")
        starts.append(ReducedState(*vals))
    if args.starts_file:
        for line in Path(args.starts_file).read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if not line or line.startswith("#") or line.startswith("x"):
                continue
            vals = tuple(float(t) for t in line.split(",")[:3])
            starts.append(ReducedState(*vals))
    if args.random_starts:
        starts.extend(random_interior_starts(args.random_starts, seed=args.seed))
    for s in starts:
        if not on_reduced_simplex(s):
            parser.error(f"start {tuple(s)} is off the simplex")
    return starts


def _project_xy(val_a: float, val_b: float, origin, size):
    # unit square [0,1]^2 to canvas coordinates, y axis flipped
    ox, oy = origin
    return ox + val_a * size, oy + size - val_b * size


def _simulate_svg(p, trajectories, starts, path) -> None:
    panel, margin = 260, 36
    width = 3 * panel + 4 * margin
    height = panel + 2 * margin
    cv = Canvas(width, height)
    pairs = (("x", "y", 0, 1), ("x", "z", 0, 2), ("y", "z", 1, 2))
    records = [r for r in catalog(p) if r.defined and r.in_simplex]
    for k, (na, nb, ia, ib) in enumerate(pairs):
        ox = margin + k * (panel + margin)
        oy = margin
        cv.rect(ox, oy, panel, panel, fill="white", stroke="black", stroke_width=1.0)
        # simplex boundary a + b <= 1
        cv.line(*_project_xy(0, 1, (ox, oy), panel), *_project_xy(1, 0, (ox, oy), panel),
                stroke="gray", width=0.8, dash="4 3")
        for traj in trajectories:
            pts = [_project_xy(row[1 + ia], row[1 + ib], (ox, oy), panel)
                   for row in traj.samples]
            cv.polyline(pts, stroke="steelblue", width=0.9, opacity=0.75)
        for s in starts:
            sx, sy = _project_xy(s[ia], s[ib], (ox, oy), panel)
            cv.circle(sx, sy, 2.2, fill="seagreen")
        for rec in records:
            ex, ey = _project_xy(rec.coords[ia], rec.coords[ib], (ox, oy), panel)
            cv.cross(ex, ey, 8, stroke="red")
            cv.text(ex + 5, ey - 5, rec.id.value, size=10, fill="red")
        cv.text(ox + panel / 2, oy + panel + 16, f"{na}-{nb}", anchor="middle")
    cv.text(margin, height - 6, f"v={p.v:g} c={p.c:g}", size=10)
    cv.write(path)


def cmd_simulate(args, parser) -> int:
    p = Params(_finite(parser, "--v", args.v), _finite(parser, "--c", args.c))
    starts = _parse_starts(args, parser)
    out = _out_dir(args.out_dir)
    cfg = IntegrationConfig(rtol=args.rtol, atol=args.atol, t_end=args.t_end,
                            max_step=args.max_step, record_stride=args.stride)
    trajectories = batch_integrate(p, starts, cfg)

    histogram: dict[str, int] = {}
    for i, traj in enumerate(trajectories):
        write_trajectory_csv(traj, out / f"trajectory_{i:03d}.csv")
        if traj.terminal is Terminal.CONVERGED:
            key = traj.nearest.value if traj.nearest else "unidentified"
        else:
            key = traj.terminal.value
        histogram[key] = histogram.get(key, 0) + 1

    summary = {
        "v": p.v, "c": p.c, "n_trajectories": len(trajectories),
        "seed": args.seed,
        "terminals": dict(sorted(histogram.items())),
        "trajectories": [trajectory_sidecar(t) for t in trajectories],
    }
    (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n",
                                      encoding="utf-8")
    if args.svg:
        _simulate_svg(p, trajectories, starts, out / "portrait.svg")

    sys.stdout.write(json.dumps({"terminals": summary["terminals"],
                                 "out_dir": str(out)}) + "\n")
    if any(t.terminal is Terminal.STEP_FAILURE for t in trajectories):
        return EXIT_NUMERIC
    return EXIT_OK


# --------------------------------------------------------------- bifurcation

_REGION_COLORS = {
    Classification.STABLE_NODE: "#2166ac",
    Classification.UNSTABLE_NODE: "#b2182b",
    Classification.SADDLE: "#fddbc7",
    Classification.NORMALLY_HYPERBOLIC_STABLE: "#67a9cf",
    Classification.NORMALLY_HYPERBOLIC_UNSTABLE: "#ef8a62",
    Classification.NORMALLY_HYPERBOLIC_SADDLE: "#fee0b6",
    Classification.NON_HYPERBOLIC: "#999999",
    Classification.DEGENERATE: "#40004b",
    Classification.UNDEFINED: "#f0f0f0",
}


def _region_svg(m, eq: EquilibriumId, path) -> None:
    size, margin = 420, 40
    cv = Canvas(size + 2 * margin, size + 2 * margin)
    spec = m.spec
    dv = size / spec.n_v
    dc = size / spec.n_c
    k = list(EquilibriumId).index(eq)
    for i in range(spec.n_v):
        for j in range(spec.n_c):
            tag = CLASS_BY_CODE[m.codes[i, j, k]]
            x = margin + i * dv
            y = margin + size - (j + 1) * dc
            cv.rect(x, y, dv + 0.5, dc + 0.5, fill=_REGION_COLORS[tag])

    def to_canvas(v, c):
        fx = (v - spec.v_min) / (spec.v_max - spec.v_min)
        fy = (c - spec.c_min) / (spec.c_max - spec.c_min)
        return margin + fx * size, margin + size - fy * size

    # the four destabilization lines, clipped to the grid box
    for (v1, c1), (v2, c2) in (
            ((spec.v_min, spec.v_min), (spec.v_max, spec.v_max)),          # v = c
            ((spec.v_min, 0.0), (spec.v_max, 0.0)),                        # c = 0
            ((0.0, spec.c_min), (0.0, spec.c_max)),                        # v = 0
            ((spec.c_min / 2, spec.c_min), (spec.c_max / 2, spec.c_max))): # c = 2v
        cv.line(*to_canvas(v1, c1), *to_canvas(v2, c2), stroke="black", width=1.2)
    cv.text(margin, margin - 8, f"{eq.value} classification over (v, c)", size=12)
    cv.write(path)


def cmd_bifurcation(args, parser) -> int:
    try:
        spec = GridSpec(args.v_min, args.v_max, args.c_min, args.c_max,
                        args.nv, args.nc).validate()
    except ValueError as exc:
        parser.error(str(exc))
    m = scan(spec, workers=args.workers)
    out = _out_dir(args.out_dir)
    csv_path = out / (args.out or "region_map.csv")
    write_region_csv(m, csv_path)
    lines = detect_transitions(m)
    report = {
        "grid": spec._asdict(),
        "csv": str(csv_path),
        "transition_lines": [
            {"line": bl.id.value,
             "affected": [[eq.value, desc] for eq, desc in bl.affected]}
            for bl in lines
        ],
    }
    if args.svg:
        eq = EquilibriumId(args.point)
        svg_path = out / f"region_{eq.value}.svg"
        _region_svg(m, eq, svg_path)
        report["svg"] = str(svg_path)
    sys.stdout.write(json.dumps(report, indent=2) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------- nash

def cmd_nash(args, parser) -> int:
    p = Params(_finite(parser, "--v", args.v), _finite(parser, "--c", args.c))
    reports = nash_via_stability(p)
    payload = reports_to_json(p, reports)
    pure_checks = []
    degenerate = True
    for k, name in enumerate(STRATEGIES):
        sigma = SimplexState(*(1.0 if i == k else 0.0 for i in range(4)))
        chk = best_response_check(p, sigma)
        degenerate = degenerate and abs(chk.margin) <= 1e-15 * (1 + abs(p.v) + abs(p.c))
        pure_checks.append({
            "strategy": name,
            "via_best_response": chk.via_best_response,
            "margin": chk.margin,
        })
    payload["pure_strategy_checks"] = pure_checks
    payload["degenerate"] = degenerate
    text = json.dumps(payload, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -------------------------------------------------------------- two-strategy

def cmd_two_strategy(args, parser) -> int:
    p = Params(_finite(parser, "--v", args.v), _finite(parser, "--c", args.c))
    notes = []
    if p.c == 0:
        notes.append("c = 0: interior equilibrium z=v/c undefined; using the "
                     "limit form dz/dt = (v/2) z (1-z).")
    payload = {
        "v": p.v, "c": p.c,
        "equilibria": [{"z": z, "tag": tag} for z, tag in classify_1d(p)],
        "correspondence": [
            {"label": e.label, "z": e.z, "matches": [m.value for m in e.matches],
             "unmapped": not e.matches}
            for e in correspondence(p)
        ],
        "notes": notes,
    }
    out = _out_dir(args.out_dir)
    if args.z0:
        cfg = IntegrationConfig(t_end=args.t_end)
        finals = []
        for i, z0 in enumerate(args.z0):
            if not 0.0 <= z0 <= 1.0:
                parser.error(f"--z0 must lie in [0, 1], got {z0}")
            samples = simulate_hawk_share(p, z0, cfg)
            path = out / f"hawk_share_{i:03d}.csv"
            with open(path, "w", encoding="utf-8") as fh:
                fh.write("t,z\n")
                for t, z in samples:
                    fh.write(f"{t:.17g},{z:.17g}\n")
            finals.append({"z0": z0, "z_final": samples[-1][1], "csv": str(path)})
        payload["simulations"] = finals
    text = json.dumps(payload, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


# --------------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hawkdove",
        description="Replicator dynamics of the four-strategy asymmetric "
                    "Hawk-Dove game: equilibria, stability, bifurcations, "
                    "Nash equilibria and simulations.")
    parser.add_argument("--version", action="version", version=f"hawkdove {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    eq = sub.add_parser("equilibria", help="catalog of the seven equilibria")
    _add_params(eq)
    eq.add_argument("--format", choices=("table", "csv", "json"), default="table")
    eq.add_argument("--out", help="write output to this file instead of stdout")
    eq.set_defaults(func=cmd_equilibria)

    sim = sub.add_parser("simulate", help="integrate trajectories and export them")
    _add_params(sim)
    sim.add_argument("--random-starts", type=int, default=0, metavar="N",
                     help="number of seeded uniform interior starts")
    sim.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sim.add_argument("--start", action="append", metavar="X,Y,Z",
                     help="explicit reduced start (repeatable)")
    sim.add_argument("--starts-file", help="CSV file of x,y,z starts")
    sim.add_argument("--t-end", type=float, default=2000.0)
    sim.add_argument("--rtol", type=float, default=1e-6)
    sim.add_argument("--atol", type=float, default=1e-9)
    sim.add_argument("--max-step", type=float, default=10.0)
    sim.add_argument("--stride", type=float, default=None,
                     help="record samples at least this far apart in time")
    sim.add_argument("--out-dir", help="output directory (default $HAWKDOVE_OUTDIR or .)")
    sim.add_argument("--svg", action="store_true", help="write phase-portrait projections")
    sim.set_defaults(func=cmd_simulate)

    bif = sub.add_parser("bifurcation", help="scan the (v, c) plane")
    bif.add_argument("--v-min", type=float, default=DEFAULT_GRID.v_min)
    bif.add_argument("--v-max", type=float, default=DEFAULT_GRID.v_max)
    bif.add_argument("--c-min", type=float, default=DEFAULT_GRID.c_min)
    bif.add_argument("--c-max", type=float, default=DEFAULT_GRID.c_max)
    bif.add_argument("--nv", type=int, default=DEFAULT_GRID.n_v)
    bif.add_argument("--nc", type=int, default=DEFAULT_GRID.n_c)
    bif.add_argument("--workers", type=int, default=1)
    bif.add_argument("--out", help="CSV filename (default region_map.csv)")
    bif.add_argument("--out-dir", help="output directory (default $HAWKDOVE_OUTDIR or .)")
    bif.add_argument("--svg", action="store_true", help="also write a region heat map")
    bif.add_argument("--point", default="P1", choices=[e.value for e in EquilibriumId],
                     help="equilibrium colored in the heat map")
    bif.set_defaults(func=cmd_bifurcation)

    na = sub.add_parser("nash", help="Nash equilibria via stability + best response")
    _add_params(na)
    na.add_argument("--out", help="write JSON here instead of stdout")
    na.set_defaults(func=cmd_nash)

    two = sub.add_parser("two-strategy", help="two-strategy Hawk-Dove reduction")
    _add_params(two)
    two.add_argument("--z0", type=float, action="append",
                     help="initial Hawk share to simulate (repeatable)")
    two.add_argument("--t-end", type=float, default=2000.0)
    two.add_argument("--out", help="write JSON here instead of stdout")
    two.add_argument("--out-dir", help="output directory for trajectory CSVs")
    two.set_defaults(func=cmd_two_strategy)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args, parser)


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
