"""Command-line surface: analysis, products, norms, synthesis, reports.

Every JSON report embeds the resolved RunConfig, keys are sorted and floats
printed at 17 significant digits, so identical configurations produce
byte-identical output.  Exit codes: 0 success, 2 inconclusive-only results,
1 errors.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

import numpy as np

from . import manifests
from .algebra import local_product
from .coeffs import TestDistribution
from .cones import Cone
from .grid import Grid, bump_window, sample
from .spaces import (
    MEMBERSHIP_LADDER,
    Weight,
    is_nu_moderate,
    membership_estimate,
    polyweight,
    weighted_norm,
)
from .testcases import classical_coeffs
from .wavefront import sobolev_wavefront_scan, wavefront_scan

__all__ = ["RunConfig", "run", "main"]

SCHEMA = "torusfront/report-v1"

KIND_ALIASES = {
    "delta": "delta",
    "square": "square_wave_1d",
    "square_wave_1d": "square_wave_1d",
    "kink": "kink_1d",
    "kink_1d": "kink_1d",
    "gaussian": "gaussian_smooth",
    "gaussian_smooth": "gaussian_smooth",
    "edge": "halfplane_edge_2d",
    "halfplane_edge_2d": "halfplane_edge_2d",
    "line": "line_delta_2d",
    "line_delta_2d": "line_delta_2d",
    "plane": "plane_wave",
    "plane_wave": "plane_wave",
}


@dataclass(frozen=True)
class RunConfig:
    """Everything a run needs; reports embed it and runs replay from it."""

    subcommand: str
    params: dict

    def get(self, key, default=None):
        return self.params.get(key, default)


class _Parser(argparse.ArgumentParser):
    # parameter violations exit 1 (argparse default of 2 is reserved for
    # inconclusive results)
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _weight_from_spec(spec: str, d: int, half_size: int) -> Weight:
    """poly:<s> for <n>^s; exp:<a> tabulates e^{a|n|} on the needed box."""
    try:
        name, _, val = spec.partition(":")
        x = float(val)
    except ValueError:
        raise ValueError(f"weight spec {spec!r} is not poly:<s> or exp:<a>") from None
    if name == "poly":
        return polyweight(x)
    if name == "exp":
        n = np.arange(-half_size, half_size + 1)
        mesh = np.meshgrid(*([n] * d), indexing="ij")
        r = np.sqrt(sum(m.astype(float) ** 2 for m in mesh)).ravel()
        if not np.all(np.isfinite(np.exp(x * r))):
            raise ValueError(
                f"exp:{x:g} overflows on the box of radius {half_size}; "
                "reduce the rate or the box"
            )
        pts = np.stack([m.ravel() for m in mesh], axis=-1)
        table = {
            tuple(int(c) for c in row): float(np.exp(x * rr))
            for row, rr in zip(pts, r)
        }
        return Weight(kind="tabulated", table=table)
    raise ValueError(f"weight spec {spec!r} is not poly:<s> or exp:<a>")


def _dist_from_params(p: dict, location_key: str = "location") -> TestDistribution:
    kind = KIND_ALIASES.get(p["dist"])
    if kind is None:
        raise ValueError(
            f"unknown distribution {p['dist']!r}; expected one of {sorted(set(KIND_ALIASES))}"
        )
    loc = p.get(location_key)
    if loc is None:
        raise ValueError(f"--{location_key.replace('_', '-')} is required with --dist")
    return TestDistribution(
        kind=kind,
        location=tuple(loc),
        direction=tuple(p.get("direction") or ()),
        width=p.get("width", 0.01),
    )


def _load_source(p: dict):
    if (p.get("input") is None) == (p.get("dist") is None):
        raise ValueError("provide exactly one of --input or --dist")
    if p.get("input") is not None:
        return manifests.read_input(p["input"])
    return _dist_from_params(p)


def _emit_json(doc: dict, path: str | None) -> None:
    text = manifests.canonical_json(doc) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _angle_columns(direction) -> tuple[str, str]:
    d = len(direction)
    if d == 1:
        return ("angle_deg", f"{0.0 if direction[0] > 0 else 180.0:.17g}")
    if d == 2:
        ang = np.rad2deg(np.arctan2(direction[1], direction[0])) % 360.0
        return ("angle_deg", f"{ang:.17g}")
    az = np.rad2deg(np.arctan2(direction[1], direction[0])) % 360.0
    el = np.rad2deg(np.arcsin(np.clip(direction[2], -1, 1)))
    return ("azimuth_deg,elevation_deg", f"{az:.17g},{el:.17g}")


def _write_direction_csv(report, path: str) -> None:
    order_name = "t" if report.mode == "decay" else "s_star"
    header_angles = _angle_columns(report.directions[0])[0]
    with open(path, "w") as fh:
        fh.write(f"{header_angles},{order_name},residual,verdict\n")
        for direction, est, verdict in zip(
            report.directions, report.estimates, report.verdicts
        ):
            angles = _angle_columns(direction)[1]
            order = est.t if report.mode == "decay" else est.s_star
            fh.write(f"{angles},{order:.17g},{est.residual:.17g},{verdict}\n")


def _verdict_exit(verdicts) -> int:
    if any(v == "singular" for v in verdicts):
        return 0
    if any(v == "inconclusive" for v in verdicts):
        return 2
    return 0


def _run_analyze(config: RunConfig) -> int:
    p = config.params
    source = _load_source(p)
    x0 = tuple(p["x0"])
    window = bump_window(x0, p["window_in"], p["window_out"])
    common = dict(
        directions=None,
        half_angle=(
            None if p.get("half_angle") is None else np.deg2rad(p["half_angle"])
        ),
        N_max=p["nmax"],
        k_min=p["kmin"],
        k_max=p.get("kmax"),
        eval_shrink=p["eval_shrink"],
    )
    if p.get("directions") is not None:
        from .wavefront import direction_grid

        common["directions"] = direction_grid(len(x0), p["directions"])
    if config.subcommand == "analyze-wf":
        report = wavefront_scan(source, x0, window, N_thr=p["threshold"], **common)
    else:
        report = sobolev_wavefront_scan(
            source, x0, window, s=p["order"], band=p["band"], **common
        )
    doc = {
        "schema": SCHEMA,
        "config": {"subcommand": config.subcommand, "params": p},
        "report": report,
    }
    figures = []
    if p.get("figures"):
        from .figures import render_report_figures

        figures = render_report_figures(report, p["figures"])
        doc["figures"] = figures
    _emit_json(doc, p.get("output"))
    if p.get("csv"):
        _write_direction_csv(report, p["csv"])
    return _verdict_exit(report.verdicts)


def _run_product(config: RunConfig) -> int:
    p = config.params
    f1 = manifests.read_input(p["input1"])
    f2 = manifests.read_input(p["input2"])
    x0 = tuple(p["x0"])
    window = bump_window(x0, p["window_in"], p["window_out"])
    rep = local_product(f1, f2, x0, window, p["nmax"])
    if p.get("output"):
        if p["output"].endswith(".csv"):
            manifests.write_coeffs_csv(rep.coeffs, p["output"])
        else:
            manifests.write_coeffs_binary(rep.coeffs, p["output"])
    doc = {
        "schema": SCHEMA,
        "config": {"subcommand": config.subcommand, "params": p},
        "report": {
            "N_max": rep.coeffs.N_max,
            "d": rep.coeffs.d,
            "reliable_radius": rep.reliable_radius,
            "tail_flagged_entries": int(np.sum(rep.tail_flags)),
        },
    }
    _emit_json(doc, p.get("report"))
    return 0


def _run_norm(config: RunConfig) -> int:
    p = config.params
    coeffs = manifests.read_coeffs(p["input"])
    omega = _weight_from_spec(p["weight"], coeffs.d, coeffs.N_max)
    q = float("inf") if p["q"] == "inf" else float(p["q"])
    cone = None
    if p.get("cone_axis") is not None:
        cone = Cone(
            axis=tuple(p["cone_axis"]),
            half_angle=np.deg2rad(p.get("cone_angle") or 10.0),
        )
    value = weighted_norm(coeffs, omega, q, cone=cone)
    doc = {
        "schema": SCHEMA,
        "config": {"subcommand": config.subcommand, "params": p},
        "report": {"norm": value, "q": q, "weight": p["weight"]},
    }
    code = 0
    if p.get("membership"):
        radii = tuple(r for r in MEMBERSHIP_LADDER if r <= coeffs.N_max)
        if len(radii) < 3:
            raise ValueError(
                f"coefficient box N_max={coeffs.N_max} too small for the "
                f"membership ladder {MEMBERSHIP_LADDER}; need at least "
                f"N_max >= {MEMBERSHIP_LADDER[2]}"
            )
        mem = membership_estimate(coeffs, omega, q, cone=cone, radii=radii)
        doc["report"]["membership"] = mem
        code = 2 if mem.verdict == "inconclusive" else 0
    _emit_json(doc, p.get("output"))
    return code


def _run_moderate(config: RunConfig) -> int:
    p = config.params
    # the ratio scan shifts into the doubled box, so tabulate out to 2R
    omega = _weight_from_spec(p["omega"], p["d"], 2 * p["radius"])
    nu = _weight_from_spec(p["nu"], p["d"], p["radius"])
    rep = is_nu_moderate(omega, nu, p["radius"], d=p["d"])
    doc = {
        "schema": SCHEMA,
        "config": {"subcommand": config.subcommand, "params": p},
        "report": rep,
    }
    _emit_json(doc, p.get("output"))
    return 0


def _run_synth(config: RunConfig) -> int:
    p = config.params
    dist = _dist_from_params({**p, "location": p["x0"]}, location_key="location")
    out = p["output"]
    if p.get("grid") is not None:
        if not dist.is_function():
            raise ValueError(f"{dist.kind} has no pointwise samples; use --nmax")
        fld = sample(dist.evaluate, Grid(d=dist.d, M=p["grid"]))
        manifests.write_field(fld, out)
        return 0
    if p.get("nmax") is None:
        raise ValueError("provide --nmax (coefficients) or --grid (samples)")
    if p.get("window_in") is not None or p.get("window_out") is not None:
        if p.get("window_in") is None or p.get("window_out") is None:
            raise ValueError("windowed synthesis needs both --window-in and --window-out")
        center = p.get("window_center") or p["x0"]
        window = bump_window(tuple(center), p["window_in"], p["window_out"])
        from .coeffs import analytic_coeffs

        coeffs = analytic_coeffs(dist, window, p["nmax"])
    else:
        coeffs = classical_coeffs(dist, p["nmax"])
    if out.endswith(".csv"):
        manifests.write_coeffs_csv(coeffs, out)
    else:
        manifests.write_coeffs_binary(coeffs, out)
    return 0


_HANDLERS = {
    "analyze-wf": _run_analyze,
    "analyze-sobolev": _run_analyze,
    "product": _run_product,
    "norm": _run_norm,
    "moderate-check": _run_moderate,
    "synth": _run_synth,
}


def run(config: RunConfig) -> int:
    """Execute a run; returns the exit status (0 ok, 2 inconclusive-only)."""
    handler = _HANDLERS.get(config.subcommand)
    if handler is None:
        raise ValueError(f"unknown subcommand {config.subcommand!r}")
    return handler(config)


def _add_dist_args(sp, with_input: bool) -> None:
    if with_input:
        sp.add_argument("--input", help="field manifest (.json) or coefficient file")
        sp.add_argument(
            "--dist", help=f"oracle kind instead of --input: {sorted(set(KIND_ALIASES.values()))}"
        )
        sp.add_argument(
            "--location",
            type=float,
            nargs="+",
            help="distribution anchor point (with --dist)",
        )
    sp.add_argument(
        "--direction", type=float, nargs="+", help="distribution normal/frequency"
    )
    sp.add_argument("--width", type=float, default=0.01, help="gaussian width")


def _add_scan_args(sp) -> None:
    sp.add_argument("--x0", type=float, nargs="+", required=True, help="probe point")
    sp.add_argument("--window-in", type=float, default=0.05, dest="window_in")
    sp.add_argument("--window-out", type=float, default=0.25, dest="window_out")
    sp.add_argument("--nmax", type=int, default=256)
    sp.add_argument("--directions", type=int, help="direction count (d-dependent default)")
    sp.add_argument(
        "--half-angle", type=float, dest="half_angle", help="cone half-angle in degrees"
    )
    sp.add_argument("--kmin", type=int, default=3)
    sp.add_argument("--kmax", type=int)
    sp.add_argument("--eval-shrink", type=float, default=0.5, dest="eval_shrink")
    sp.add_argument("--output", help="report JSON path (stdout when omitted)")
    sp.add_argument("--csv", help="per-direction CSV path")
    sp.add_argument("--figures", help="directory for rendered figures")
    sp.add_argument("--seed", type=int, default=0)


def build_parser() -> _Parser:
    parser = _Parser(prog="torusfront")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="wave front / Sobolev wave front scans")
    amode = analyze.add_subparsers(dest="mode", required=True)

    wf = amode.add_parser("wf", help="decay-order scan")
    _add_dist_args(wf, with_input=True)
    _add_scan_args(wf)
    wf.add_argument("--threshold", type=float, default=8.0, help="singular iff t < threshold")

    so = amode.add_parser("sobolev", help="critical-order scan")
    _add_dist_args(so, with_input=True)
    _add_scan_args(so)
    so.add_argument("--order", type=float, required=True, help="Sobolev order s")
    so.add_argument("--band", type=float, default=0.1, help="inconclusive half-width around s*")

    pr = sub.add_parser("product", help="localized product of two inputs")
    pr.add_argument("--input1", required=True)
    pr.add_argument("--input2", required=True)
    pr.add_argument("--x0", type=float, nargs="+", required=True)
    pr.add_argument("--window-in", type=float, default=0.05, dest="window_in")
    pr.add_argument("--window-out", type=float, default=0.25, dest="window_out")
    pr.add_argument("--nmax", type=int, default=128)
    pr.add_argument("--output", help="coefficient file (.csv or binary)")
    pr.add_argument("--report", help="report JSON path (stdout when omitted)")
    pr.add_argument("--seed", type=int, default=0)

    nm = sub.add_parser("norm", help="weighted sequence norm / membership ladder")
    nm.add_argument("--input", required=True, help="coefficient file")
    nm.add_argument("--weight", default="poly:0", help="poly:<s> or exp:<a>")
    nm.add_argument("--q", default="2")
    nm.add_argument("--cone-axis", type=float, nargs="+", dest="cone_axis")
    nm.add_argument("--cone-angle", type=float, dest="cone_angle")
    nm.add_argument("--membership", action="store_true")
    nm.add_argument("--output")
    nm.add_argument("--seed", type=int, default=0)

    mc = sub.add_parser("moderate-check", help="empirical moderate-weight constant")
    mc.add_argument("--omega", required=True, help="poly:<s> or exp:<a>")
    mc.add_argument("--nu", required=True, help="poly:<s> or exp:<a>")
    mc.add_argument("--radius", type=int, default=50)
    mc.add_argument("--d", type=int, default=1)
    mc.add_argument("--output")
    mc.add_argument("--seed", type=int, default=0)

    sy = sub.add_parser("synth", help="emit an oracle as coefficients or samples")
    sy.add_argument("dist", help=f"kind: {sorted(set(KIND_ALIASES))}")
    sy.add_argument("--x0", type=float, nargs="+", required=True, help="anchor point")
    _add_dist_args(sy, with_input=False)
    sy.add_argument("--nmax", type=int, help="coefficient box radius")
    sy.add_argument("--grid", type=int, help="sample on an M-point grid instead")
    sy.add_argument("--window-in", type=float, dest="window_in")
    sy.add_argument("--window-out", type=float, dest="window_out")
    sy.add_argument("--window-center", type=float, nargs="+", dest="window_center")
    sy.add_argument("--output", required=True)
    sy.add_argument("--seed", type=int, default=0)

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    params = {k: v for k, v in vars(args).items() if k not in ("command", "mode")}
    if args.command == "analyze":
        name = f"analyze-{args.mode}"
    else:
        name = args.command
    return RunConfig(subcommand=name, params=params)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = _config_from_args(args)
    try:
        return run(config)
    except (ValueError, RuntimeError, TypeError, OSError) as exc:
        sys.stderr.write(f"torusfront: error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
