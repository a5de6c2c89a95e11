"""Command-line front end.

Every subcommand reads a JSON surface configuration (``--config``) and writes
JSON or CSV to stdout or ``--out``.  Exit codes: 0 success, 1 verification
failure, 2 input error.  The file formats are described in ``docs/formats.md``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from typing import Any

import numpy as np

from . import __version__
from ._numeric import ALL, TAU_DEG, is_zero
from .expr import ExprSyntaxError
from .fundforms import (
    MongeSurface4,
    NotImmersionError,
    NotMongeError,
    adapted_sff,
    coordinate_sff,
)
from .jet import DomainError
from .loci import (
    EllipseKind,
    TangentDirection,
    analyze_point,
    asymptotic_directions_r4,
    bde_coefficients,
    resultant,
    resultant_scale,
    resultant_sign,
)
from .projection import (
    NotCorankOneError,
    ParabolaKind,
    asymptotic_directions_corank,
    binormal_directions_corank,
    classify_point_corank,
    corank_sff,
    curvature_parabola,
    mond_orbit,
    parabola_position,
    project,
)
from .verify import FIXED_DIRECTIONS, OracleDisagreement, check_correspondence_many, fuzz_correspondence

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(ValueError):
    """Bad configuration or a violated precondition."""


# --------------------------------------------------------------------------
# Configuration
# --------------------------------------------------------------------------


@dataclass
class Grid:
    x_range: tuple[float, float]
    y_range: tuple[float, float]
    nx: int
    ny: int

    def points(self):
        xs = np.linspace(*self.x_range, self.nx)
        ys = np.linspace(*self.y_range, self.ny)
        for y in ys:
            for x in xs:
                yield float(x), float(y)


@dataclass
class SurfaceConfig:
    surface: MongeSurface4
    point: tuple[float, float] = (0.0, 0.0)
    direction: TangentDirection | None = None
    grid: Grid | None = None
    tol: float = TAU_DEG
    raw: dict | None = None


def _pair(value, name: str) -> tuple[float, float]:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise InputError(f"{name} must be a pair of numbers")
    try:
        return float(value[0]), float(value[1])
    except (TypeError, ValueError) as exc:
        raise InputError(f"{name} must be a pair of numbers") from exc


def parse_direction(value) -> TangentDirection:
    """A tangent angle in radians or a pair ``[a, b]``."""
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return TangentDirection.from_angle(float(value))
    a, b = _pair(value, "direction")
    if a == 0 and b == 0:
        raise InputError("direction must be nonzero")
    return TangentDirection(a, b)


def _parse_grid(g: dict) -> Grid:
    try:
        grid = Grid(_pair(g["x_range"], "x_range"), _pair(g["y_range"], "y_range"),
                    int(g["nx"]), int(g["ny"]))
    except KeyError as exc:
        raise InputError(f"grid is missing {exc.args[0]!r}") from exc
    if grid.nx < 1 or grid.ny < 1:
        raise InputError("grid counts must be positive")
    for lo, hi in (grid.x_range, grid.y_range):
        if not lo <= hi:
            raise InputError("grid ranges must be nonempty")
    return grid


def parse_config(data: dict, tol: float | None = None) -> SurfaceConfig:
    if not isinstance(data, dict):
        raise InputError("configuration must be a JSON object")
    try:
        surface = MongeSurface4.parse(str(data.get("f1", "0")), str(data.get("f2", "0")))
    except ExprSyntaxError as exc:
        raise InputError(str(exc)) from exc
    cfg = SurfaceConfig(surface=surface, raw=data)
    if "point" in data:
        cfg.point = _pair(data["point"], "point")
    if data.get("direction") is not None:
        cfg.direction = parse_direction(data["direction"])
    if data.get("grid") is not None:
        cfg.grid = _parse_grid(data["grid"])
    overrides = data.get("tolerance") or {}
    if "tau_deg" in overrides:
        cfg.tol = float(overrides["tau_deg"])
    if tol is not None:
        cfg.tol = tol
    if not cfg.tol > 0:
        raise InputError("tolerance must be positive")
    return cfg


def load_config(args) -> SurfaceConfig:
    data: dict[str, Any] = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise InputError(f"cannot read config: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise InputError(f"config is not valid JSON: {exc}") from exc
    if getattr(args, "f1", None) is not None:
        data["f1"] = args.f1
    if getattr(args, "f2", None) is not None:
        data["f2"] = args.f2
    if getattr(args, "point", None) is not None:
        data["point"] = args.point
    if getattr(args, "direction", None) is not None:
        data["direction"] = args.direction
    return parse_config(data, args.tol)


# --------------------------------------------------------------------------
# Output helpers
# --------------------------------------------------------------------------


def _clean(value):
    """JSON-ready copy: integral floats become ints, infinities become strings."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        if math.isnan(v):
            return "nan"
        if v.is_integer() and abs(v) < 2**53:
            return int(v)
        return v
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, np.ndarray):
        return _clean(value.tolist())
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if value is ALL:
        return "all"
    if hasattr(value, "value"):
        return value.value
    return str(value)


def dumps(obj) -> str:
    return json.dumps(_clean(obj), sort_keys=True, separators=(",", ":"))


def fmt(value) -> str:
    """CSV number: 12 significant digits, no negative zero."""
    if value is None:
        return ""
    v = float(value)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    text = format(v, ".12g")
    return "0" if text in ("-0", "0") else text


class Output:
    def __init__(self, path: str | None):
        self.path = path
        self.buffer = io.StringIO()

    def write(self, text: str) -> None:
        self.buffer.write(text)

    def close(self) -> None:
        data = self.buffer.getvalue()
        if self.path:
            with open(self.path, "w", encoding="utf-8", newline="") as fh:
                fh.write(data)
        else:
            sys.stdout.write(data)


def _csv_writer(out: Output):
    return csv.writer(out, lineterminator="\n")


def _pt(p) -> str:
    return f"({fmt(p[0])},{fmt(p[1])})"


# --------------------------------------------------------------------------
# Subcommands
# --------------------------------------------------------------------------


def _directions_json(dirs):
    if dirs is ALL:
        return "all"
    return [[d.a, d.b] for d in dirs]


def _ellipse_json(ell) -> dict:
    d = {"kind": ell.kind.value, "center": ell.center, "matrix": ell.M}
    if ell.kind is EllipseKind.SEGMENT:
        d["endpoints"] = [ell.endpoints[0], ell.endpoints[1]]
        d["direction"] = ell.direction
    return d


def cmd_classify(cfg: SurfaceConfig, args, out: Output) -> int:
    frame, alpha = adapted_sff(cfg.surface, cfg.point)
    rep = analyze_point(alpha, cfg.tol)
    record = {
        "surface": str(cfg.surface),
        "point": cfg.point,
        "alpha": alpha.as_tuple(),
        "delta": rep.delta,
        "det_m": rep.det_m,
        "rank": rep.rank,
        "point_type": rep.point_type.value,
        "ellipse": _ellipse_json(rep.ellipse),
        "asymptotic": _directions_json(rep.asymptotic),
        "n_asymptotic": rep.n_asymptotic,
        "binormal_angles": rep.binormals,
        "g_orbit": rep.g_orbit.value,
        "near_degenerate": rep.near_degenerate,
        "notes": rep.notes,
    }
    out.write(dumps(record) + "\n")
    return EXIT_OK


def _parabola_json(par) -> dict:
    d = {"kind": par.kind.value, "A": par.A, "B": par.B, "C": par.C}
    if par.kind is not ParabolaKind.PARABOLA:
        d["base"] = par.base
    if par.direction is not None:
        d["direction"] = par.direction
    if par.y_vertex is not None:
        d["y_vertex"] = par.y_vertex
    return d


def cmd_loci(cfg: SurfaceConfig, args, out: Output) -> int:
    n = args.samples
    if n < 2:
        raise InputError("samples must be at least 2")
    _, alpha = adapted_sff(cfg.surface, cfg.point)
    ell = analyze_point(alpha, cfg.tol).ellipse
    rows = []
    header = [f"# ellipse kind={ell.kind.value}"]
    if ell.kind is EllipseKind.SEGMENT:
        header[0] += f" endpoints={_pt(ell.endpoints[0])};{_pt(ell.endpoints[1])}"
    elif ell.kind is EllipseKind.POINT:
        header[0] += f" value={_pt(ell.center)}"
    thetas = np.arange(n) * (math.pi / n)
    for t, p in zip(thetas, ell.at(thetas)):
        rows.append(["ellipse", fmt(t), fmt(p[0]), fmt(p[1])])

    if cfg.direction is not None:
        alpha_p = corank_sff(project(cfg.surface, cfg.point, cfg.direction), cfg.tol)
        par = curvature_parabola(alpha_p, cfg.tol)
        line = f"# parabola kind={par.kind.value} direction={cfg.direction}"
        if par.kind is ParabolaKind.POINT:
            line += f" value={_pt(par.base)}"
        elif par.kind is ParabolaKind.HALF_LINE:
            line += f" vertex={_pt(par.base)} ray={_pt(par.direction)}"
        elif par.kind is ParabolaKind.LINE:
            line += f" through={_pt(par.base)} along={_pt(par.direction)}"
        header.append(line)
        ys = np.linspace(-args.y_max, args.y_max, n)
        for y, p in zip(ys, par.at(ys)):
            rows.append(["parabola", fmt(y), fmt(p[0]), fmt(p[1])])

    for line in header:
        out.write(line + "\n")
    w = _csv_writer(out)
    w.writerow(["kind", "param", "u", "v"])
    w.writerows(rows)
    return EXIT_OK


SCAN_COLUMNS = ["x", "y", "delta", "detM", "rank", "point_type", "n_asymptotic",
                "dir1", "dir2", "near_degenerate"]


def _scan_row(S: MongeSurface4, x: float, y: float, tol: float) -> list[str]:
    try:
        _, alpha = adapted_sff(S, (x, y))
        coord = coordinate_sff(S, (x, y))
    except (NotImmersionError, DomainError):
        return [fmt(x), fmt(y), "", "", "", "error", "", "", "", ""]
    rep = analyze_point(alpha, tol)
    # directions reported as coordinate angles dx:dy in [0, pi)
    dirs = asymptotic_directions_r4(coord, tol)
    if dirs is ALL:
        n_asym, angles = "inf", []
    else:
        n_asym, angles = str(len(dirs)), [fmt(d.angle) for d in dirs]
    angles += [""] * (2 - len(angles))
    return [fmt(x), fmt(y), fmt(rep.delta), fmt(rep.det_m), str(rep.rank),
            rep.point_type.value, n_asym, angles[0], angles[1],
            "true" if rep.near_degenerate else "false"]


def cmd_scan(cfg: SurfaceConfig, args, out: Output) -> int:
    if cfg.grid is None:
        raise InputError("scan needs a grid in the configuration")
    w = _csv_writer(out)
    out.write(f"# surface={cfg.surface}\n")
    w.writerow(SCAN_COLUMNS)
    for x, y in cfg.grid.points():
        w.writerow(_scan_row(cfg.surface, x, y, cfg.tol))
    return EXIT_OK


def cmd_project(cfg: SurfaceConfig, args, out: Output) -> int:
    if cfg.direction is None:
        raise InputError("project needs a direction")
    M = project(cfg.surface, cfg.point, cfg.direction)
    alpha_p = corank_sff(M, cfg.tol)
    par = curvature_parabola(alpha_p, cfg.tol)
    asym = asymptotic_directions_corank(alpha_p, cfg.tol)
    record = {
        "direction": [cfg.direction.a, cfg.direction.b],
        "surface": str(M),
        "alpha": alpha_p.as_tuple(),
        "parabola": _parabola_json(par),
        "position": parabola_position(alpha_p, cfg.tol) if par.kind is ParabolaKind.PARABOLA else None,
        "mond_orbit": mond_orbit(alpha_p, cfg.tol).value,
        "asymptotic": "all" if asym is ALL else list(asym),
        "point_type": classify_point_corank(alpha_p, cfg.tol).value,
        "binormal_angles": binormal_directions_corank(alpha_p, cfg.tol),
    }
    out.write(dumps(record) + "\n")
    return EXIT_OK


# --------------------------------------------------------------------------
# Asymptotic curves
# --------------------------------------------------------------------------


def _bde_directions(S: MongeSurface4, q, tol: float):
    """Unit coordinate directions solving the BDE at ``q`` and the resultant there.

    The resultant is taken in the coordinate basis; a change of tangent basis
    multiplies it by a positive factor, so its sign is unaffected.
    """
    coord = coordinate_sff(S, q)
    dirs = asymptotic_directions_r4(coord, tol)
    return dirs, resultant(coord), resultant_scale(coord)


def _follow(S: MongeSurface4, q, prev, tol):
    """BDE root at ``q`` closest to ``prev`` (oriented along it), or None if lost."""
    dirs, delta, s = _bde_directions(S, q, tol)
    if dirs is ALL or not dirs:
        return None
    best = max((d.unit() for d in dirs), key=lambda u: abs(u[0] * prev[0] + u[1] * prev[1]))
    if best[0] * prev[0] + best[1] * prev[1] < 0:
        best = (-best[0], -best[1])
    return best


def integrate_branch(S: MongeSurface4, seed, start, h: float, steps: int, tol: float):
    """Fourth-order fixed-step trace of the BDE branch leaving ``seed`` along ``start``."""
    q = np.array(seed, dtype=float)
    prev = start
    path = [tuple(q)]
    for _ in range(steps):
        try:
            k1 = _follow(S, q, prev, tol)
            if k1 is None:
                break
            k2 = _follow(S, q + 0.5 * h * np.array(k1), k1, tol)
            k3 = k2 and _follow(S, q + 0.5 * h * np.array(k2), k2, tol)
            k4 = k3 and _follow(S, q + h * np.array(k3), k3, tol)
            if k4 is None:
                break
            step = (np.array(k1) + 2 * np.array(k2) + 2 * np.array(k3) + np.array(k4)) / 6
            nq = q + h * step
            _, delta, scale = _bde_directions(S, nq, tol)
        except (NotImmersionError, DomainError):
            break
        if delta > -tol * scale:
            break  # reached the discriminant curve
        q = nq
        prev = k1
        path.append(tuple(q))
    return path


def cmd_asymptotic_curves(cfg: SurfaceConfig, args, out: Output) -> int:
    raw = cfg.raw or {}
    seed = _pair(raw["seed"], "seed") if "seed" in raw else cfg.point
    steps = args.steps if args.steps is not None else int(raw.get("steps", 10_000))
    h = args.h if args.h is not None else float(raw.get("h", 1e-3))
    if steps < 0 or not h > 0:
        raise InputError("steps must be non-negative and h positive")
    _, alpha = adapted_sff(cfg.surface, seed)
    delta = resultant(alpha)
    if resultant_sign(alpha, cfg.tol) > 0:
        raise InputError(f"seed {seed} is elliptic (delta={delta:.12g}); no real asymptotic directions")
    coord = coordinate_sff(cfg.surface, seed)
    A, B, C = bde_coefficients(coord)
    if all(is_zero(v, coord.scale ** 2, cfg.tol) for v in (A, B, C)):
        raise InputError("every direction is asymptotic at the seed; the BDE is identically zero")
    dirs = asymptotic_directions_r4(coord, cfg.tol)

    w = _csv_writer(out)
    out.write(f"# surface={cfg.surface} seed={_pt(seed)} h={fmt(h)} steps={steps}\n")
    w.writerow(["branch", "index", "x", "y"])
    for b, d in enumerate(dirs):
        u = d.unit()
        back = integrate_branch(cfg.surface, seed, (-u[0], -u[1]), h, steps, cfg.tol)
        fwd = integrate_branch(cfg.surface, seed, u, h, steps, cfg.tol)
        polyline = back[::-1] + fwd[1:]
        for i, (x, y) in enumerate(polyline):
            w.writerow([b, i - (len(back) - 1), fmt(x), fmt(y)])
    return EXIT_OK


# --------------------------------------------------------------------------
# Verification
# --------------------------------------------------------------------------


def cmd_verify(cfg: SurfaceConfig | None, args, out: Output) -> int:
    try:
        if args.fuzz is not None:
            if args.fuzz < 1:
                raise InputError("fuzz count must be at least 1")
            summary = fuzz_correspondence(args.fuzz, args.seed, args.tol or TAU_DEG)
            record = summary.to_dict()
            record["failures"] = len(summary.failures)
            record["failed_samples"] = summary.failures
            ok = summary.ok
        else:
            dirs = [cfg.direction] if cfg.direction is not None else list(FIXED_DIRECTIONS)
            reports = check_correspondence_many(cfg.surface, cfg.point, dirs, cfg.tol)
            record = {"surface": str(cfg.surface), "point": cfg.point,
                      "reports": [r.to_dict() for r in reports]}
            ok = all(r.all_ok for r in reports)
            record["failures"] = sum(not r.all_ok for r in reports)
    except OracleDisagreement as exc:
        out.write(dumps({"error": str(exc), "kind": "oracle_disagreement"}) + "\n")
        return EXIT_FAIL
    record["ok"] = ok
    out.write(dumps(record) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


# --------------------------------------------------------------------------
# Entry point
# --------------------------------------------------------------------------


def _direction_arg(text: str):
    parts = [p for p in text.replace(":", ",").split(",") if p.strip()]
    try:
        values = [float(p) for p in parts]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad direction {text!r}") from exc
    if len(values) == 1:
        return values[0]
    if len(values) == 2:
        return values
    raise argparse.ArgumentTypeError(f"bad direction {text!r}")


def _point_arg(text: str):
    try:
        x, y = (float(p) for p in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad point {text!r}") from exc
    return [x, y]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON surface configuration")
    common.add_argument("--tol", type=float, default=None, help="degeneracy tolerance (default 1e-9)")
    common.add_argument("--seed", type=int, default=0, help="random seed")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--f1", help="first height function (overrides the config)")
    common.add_argument("--f2", help="second height function (overrides the config)")
    common.add_argument("--point", type=_point_arg, help="study point as x,y")
    common.add_argument("--direction", type=_direction_arg,
                        help="tangent direction as an angle or a,b")

    parser = argparse.ArgumentParser(prog="curvloci", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("classify", parents=[common], help="classify the point")
    loci = sub.add_parser("loci", parents=[common], help="sample the curvature loci")
    loci.add_argument("--samples", type=int, default=100)
    loci.add_argument("--y-max", type=float, default=10.0, dest="y_max")
    sub.add_parser("scan", parents=[common], help="classify every grid point")
    sub.add_parser("project", parents=[common], help="project along a tangent direction")
    curves = sub.add_parser("asymptotic-curves", parents=[common], help="trace asymptotic curves")
    curves.add_argument("--steps", type=int, default=None)
    curves.add_argument("--h", type=float, default=None)
    verify = sub.add_parser("verify", parents=[common], help="check the ellipse/parabola correspondence")
    verify.add_argument("--fuzz", type=int, default=None, metavar="N",
                        help="fuzz N random samples instead of reading a config")
    return parser


_COMMANDS = {
    "classify": cmd_classify,
    "loci": cmd_loci,
    "scan": cmd_scan,
    "project": cmd_project,
    "asymptotic-curves": cmd_asymptotic_curves,
    "verify": cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    out = Output(args.out)
    try:
        if args.command == "verify" and args.fuzz is not None:
            cfg = None
        else:
            cfg = load_config(args)
        code = _COMMANDS[args.command](cfg, args, out)
    except (InputError, ExprSyntaxError, DomainError, NotImmersionError, NotMongeError,
            NotCorankOneError) as exc:
        print(f"curvloci: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        out.close()
    except OSError as exc:
        print(f"curvloci: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return code


if __name__ == "__main__":
    sys.exit(main())
