"""Experiment driver.

Every subcommand is fully determined by its flags (plus the seed, where
sampling is involved): outputs are written atomically, numbers carry 17
significant digits, the effective config is echoed into every file, and
wall-clock metadata lives in a separate field so payloads stay
byte-identical across reruns.  Sweep subcommands also render a figure next
to the delimited output unless --no-plot is given.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .beurling import default_radii, dimension, upper_density
from .catalog import BUILTIN_SYSTEMS, get_system, list_catalog
from .errors import DomainError, UsageError
from .frames import frame_bounds, lower_bound_decay_certificate
from .ifs import (
    AffineIfs,
    TruncationBudget,
    dual_weights,
    find_complement,
    ft_invariant,
    new_ifs,
)
from .measures import (
    integer_lattice,
    loads as measure_loads,
    make_atomic,
    measure_from_dict,
    measure_to_dict,
    mollify,
    convolve,
    discretize,
)
from .reconstruct import fourier_reconstruct, make_split_system
from .frames import constant_one
from .reporting import render_lines, render_stem, run_meta, write_csv, write_json


# ---------------------------------------------------------------------------
# argument helpers


def parse_ifs(text: str) -> AffineIfs:
    """Accept a catalog name, inline JSON {"R":..,"B":[..]}, or a file path."""
    if text in BUILTIN_SYSTEMS:
        return get_system(text)
    if text.strip().startswith("{"):
        obj = json.loads(text)
    else:
        with open(text) as handle:
            obj = json.load(handle)
    return new_ifs(obj["R"], obj["B"])


def parse_measure(text: str, lam: int):
    """Measure sources: file path, inline JSON, 'lattice', or 'dual:<ifs>'."""
    if text == "lattice":
        return integer_lattice(-lam, lam), f"lattice[-{lam},{lam}]"
    if text.startswith("dual:"):
        comp = parse_ifs(text[5:])
        freqs = np.arange(-lam, lam + 1, dtype=float)
        return dual_weights(comp, freqs), f"dual({comp.descriptor()})[-{lam},{lam}]"
    if text.strip().startswith("{"):
        return measure_loads(text), "inline"
    with open(text) as handle:
        return measure_from_dict(json.load(handle)), text


def parse_grid(text: str) -> np.ndarray:
    """Parse 'lo:hi:count' or 'lo:hi:count-geometric' into a grid."""
    geometric = text.endswith("-geometric")
    if geometric:
        text = text[: -len("-geometric")]
    linear = text.endswith("-linear")
    if linear:
        text = text[: -len("-linear")]
    lo_s, hi_s, count_s = text.split(":")
    lo, hi, count = float(lo_s), float(hi_s), int(count_s)
    if count < 2:
        raise UsageError("grid needs at least 2 points")
    if geometric:
        if lo <= 0:
            raise UsageError("geometric grid needs a positive start")
        return np.geomspace(lo, hi, count)
    return np.linspace(lo, hi, count)


def parse_int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def parse_levels(text: str) -> list[int]:
    if ":" in text:
        a, b = text.split(":")
        return list(range(int(a), int(b) + 1))
    return [int(text)]


def _config_echo(args: argparse.Namespace, command: str) -> dict:
    cfg = {"command": command, "version": __version__}
    skip = {"func", "out", "no_plot"}
    for key, val in sorted(vars(args).items()):
        if key in skip or callable(val):
            continue
        cfg[key] = val
    return cfg


def _emit_json(path: str, config: dict, payload: dict) -> None:
    write_json(path, {"config": config, "meta": run_meta(), **payload})


# ---------------------------------------------------------------------------
# subcommands


def cmd_catalog(args) -> int:
    entries = list_catalog()
    config = _config_echo(args, "catalog")
    path = os.path.join(args.out, "catalog.json")
    _emit_json(path, config, {"systems": entries})
    print(json.dumps(entries, indent=2, sort_keys=True))
    return 0


def cmd_ft(args) -> int:
    system = parse_ifs(args.ifs)
    grid = parse_grid(args.tgrid)
    budget = TruncationBudget(args.tol)
    vals = ft_invariant(system, grid, budget)
    config = _config_echo(args, "ft")
    rows = [
        (float(t), float(v.real), float(v.imag), float(abs(v)))
        for t, v in zip(grid, np.atleast_1d(vals))
    ]
    csv_path = os.path.join(args.out, "ft.csv")
    write_csv(csv_path, ["t", "re", "im", "abs"], rows, comment=json.dumps(config, sort_keys=True))
    _emit_json(os.path.join(args.out, "ft.json"), config, {"files": ["ft.csv"]})
    if not args.no_plot:
        render_lines(
            os.path.join(args.out, "ft.png"),
            [("|ft|", [r[0] for r in rows], [r[3] for r in rows])],
            "frequency t",
            "|ft(t)|",
            f"transform modulus, system {system.descriptor()}",
        )
    return 0


def cmd_frame_bounds(args) -> int:
    system = parse_ifs(args.ifs)
    budget = TruncationBudget(args.tol)
    levels = parse_levels(args.levels)
    lambdas = parse_int_list(args.lambdas) if args.lambdas else [args.lam]
    config = _config_echo(args, "frame-bounds")
    rows = []
    reports = []
    for lam in lambdas:
        nu, ref = parse_measure(args.measure, lam)
        for level in levels:
            rep = frame_bounds(system, level, nu, budget, measure_ref=ref)
            reports.append(rep.to_dict())
            rows.append(
                (
                    level,
                    float(lam),
                    rep.lower,
                    rep.upper,
                    rep.psd_residual,
                    rep.hermitian_residual,
                )
            )
    csv_path = os.path.join(args.out, "frame_bounds.csv")
    write_csv(
        csv_path,
        ["level", "lambda", "A", "B", "psd_residual", "hermitian_residual"],
        rows,
        comment=json.dumps(config, sort_keys=True),
    )
    _emit_json(
        os.path.join(args.out, "frame_bounds.json"),
        config,
        {"reports": reports, "files": ["frame_bounds.csv"]},
    )
    if not args.no_plot:
        series = []
        for level in levels:
            xs = [r[1] for r in rows if r[0] == level]
            series.append((f"A, level {level}", xs, [r[2] for r in rows if r[0] == level]))
            series.append((f"B, level {level}", xs, [r[3] for r in rows if r[0] == level]))
        render_lines(
            os.path.join(args.out, "frame_bounds.png"),
            series,
            "truncation",
            "frame bound",
            f"frame bounds, system {system.descriptor()}",
            logx=True,
        )
    return 0


def cmd_dual(args) -> int:
    system = parse_ifs(args.ifs)
    c_max = args.cmax if args.cmax is not None else system.scale - 1
    complements = find_complement(system, c_max)
    config = _config_echo(args, "dual")
    payload: dict = {"complements": [list(c) for c in complements]}
    files = []
    if complements:
        comp = new_ifs(system.scale, complements[0])
        freqs = np.arange(-args.lam, args.lam + 1, dtype=float)
        nu = dual_weights(comp, freqs, TruncationBudget(args.tol))
        payload["complement_used"] = comp.descriptor()
        payload["measure"] = measure_to_dict(nu)
        measure_path = os.path.join(args.out, "dual_measure.json")
        write_json(measure_path, {"config": config, **{"measure": measure_to_dict(nu)}})
        files.append("dual_measure.json")
        if not args.no_plot:
            render_stem(
                os.path.join(args.out, "dual_weights.png"),
                nu.points,
                nu.weights,
                "frequency",
                "weight",
                f"dual weights from {comp.descriptor()}",
            )
    payload["files"] = files
    _emit_json(os.path.join(args.out, "dual.json"), config, payload)
    return 0


def cmd_beurling(args) -> int:
    nu, ref = parse_measure(args.measure, args.lam)
    radii = parse_grid(args.radii) if args.radii else default_radii()
    scan = upper_density(nu, args.alpha, radii)
    est = dimension(nu, radii)
    config = _config_echo(args, "beurling")
    csv_path = os.path.join(args.out, "beurling_scan.csv")
    write_csv(
        csv_path,
        ["R", "sup_mass", "ratio"],
        scan.to_rows(),
        comment=json.dumps(config, sort_keys=True),
    )
    _emit_json(
        os.path.join(args.out, "beurling.json"),
        config,
        {"measure_ref": ref, "dimension": est.to_dict(), "files": ["beurling_scan.csv"]},
    )
    if not args.no_plot:
        rows = scan.to_rows()
        render_lines(
            os.path.join(args.out, "beurling.png"),
            [("sup mass", [r[0] for r in rows], [r[1] for r in rows])],
            "window length R",
            "sup window mass",
            f"window-mass growth, slope {est.slope:.3f}",
            logx=True,
            logy=True,
        )
    return 0


def cmd_discretize(args) -> int:
    nu, ref = parse_measure(args.measure, args.lam)
    rule = args.rule
    if rule not in ("left", "center"):
        rule = [float(x) for x in rule.split(",")]
    out = discretize(nu, args.r, rule)
    config = _config_echo(args, "discretize")
    _emit_json(
        os.path.join(args.out, "discretized.json"),
        config,
        {"measure_ref": ref, "measure": measure_to_dict(out)},
    )
    return 0


def cmd_convolve(args) -> int:
    nu, ref1 = parse_measure(args.measure, args.lam)
    rho, ref2 = parse_measure(args.measure2, args.lam)
    out = convolve(nu, rho)
    config = _config_echo(args, "convolve")
    _emit_json(
        os.path.join(args.out, "convolved.json"),
        config,
        {"measure_refs": [ref1, ref2], "measure": measure_to_dict(out)},
    )
    return 0


def cmd_reconstruct(args) -> int:
    base = parse_ifs(args.ifs)
    if args.complement:
        comp = parse_ifs(args.complement)
    else:
        found = find_complement(base, base.scale - 1)
        if not found:
            raise DomainError("no digit complement found; pass --complement")
        comp = new_ifs(base.scale, found[0])
    sys_split = make_split_system(base, comp)
    f = constant_one(base)
    budget = TruncationBudget(args.tol)
    results = []
    for t in [float(x) for x in args.t.split(",")]:
        res = fourier_reconstruct(sys_split, f, t, args.cutoff, args.step, budget)
        results.append(res.to_dict())
    config = _config_echo(args, "reconstruct")
    _emit_json(
        os.path.join(args.out, "reconstruct.json"),
        config,
        {"split": sys_split.descriptor(), "results": results},
    )
    return 0


def cmd_counterexample(args) -> int:
    if args.measure:
        nu, ref = parse_measure(args.measure, args.lam)
    else:
        lattice = integer_lattice(-100, 100)
        nu = mollify(lattice, 1.0)
        ref = "mollify(lattice[-100,100], 1)"
    grid = parse_grid(args.T_grid)
    cert = lower_bound_decay_certificate(nu, grid)
    config = _config_echo(args, "counterexample")
    csv_path = os.path.join(args.out, "counterexample.csv")
    write_csv(
        csv_path,
        ["T", "probe"],
        cert.to_rows(),
        comment=json.dumps(config, sort_keys=True),
    )
    _emit_json(
        os.path.join(args.out, "counterexample.json"),
        config,
        {
            "measure_ref": ref,
            "decreasing": cert.is_decreasing,
            "files": ["counterexample.csv"],
        },
    )
    if not args.no_plot:
        rows = cert.to_rows()
        render_lines(
            os.path.join(args.out, "counterexample.png"),
            [("probe", [r[0] for r in rows], [r[1] for r in rows])],
            "modulation T",
            "witness energy",
            "lower-frame-bound decay probe",
            logx=True,
            logy=True,
        )
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ifsframes",
        description="Frame-measure and Beurling-density experiments for affine IFS measures",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--tol", type=float, default=1e-12, help="transform error budget")
        p.add_argument("--seed", type=int, default=0, help="seed for sampling (PCG64)")
        p.add_argument("--lambda", dest="lam", type=int, default=1024,
                       help="frequency truncation for lattice/dual measures")
        p.add_argument("--no-plot", action="store_true", help="skip figure rendering")

    p = sub.add_parser("catalog", help="list built-in systems")
    common(p)
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("ft", help="frequency sweep of the invariant-measure transform")
    common(p)
    p.add_argument("--ifs", required=True, help="catalog name, inline JSON, or file")
    p.add_argument("--tgrid", default="-100:100:201", help="lo:hi:count[-geometric]")
    p.set_defaults(func=cmd_ft)

    p = sub.add_parser("frame-bounds", help="(level, truncation) sweep of frame bounds")
    common(p)
    p.add_argument("--ifs", required=True)
    p.add_argument("--measure", required=True,
                   help="file, inline JSON, 'lattice', or 'dual:<ifs>'")
    p.add_argument("--levels", "--level", default="1:3", help="n or lo:hi")
    p.add_argument("--lambdas", default="", help="comma list of truncations")
    p.set_defaults(func=cmd_frame_bounds)

    p = sub.add_parser("dual", help="digit-complement search and dual weights")
    common(p)
    p.add_argument("--ifs", required=True)
    p.add_argument("--cmax", type=int, default=None, help="largest complement digit")
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("beurling", help="density scan and dimension estimate")
    common(p)
    p.add_argument("--measure", required=True)
    p.add_argument("--alpha", type=float, default=1.0, help="ratio exponent for the scan")
    p.add_argument("--radii", default="", help="lo:hi:count-geometric window grid")
    p.set_defaults(func=cmd_beurling)

    p = sub.add_parser("discretize", help="collapse a measure onto a grid")
    common(p)
    p.add_argument("--measure", required=True)
    p.add_argument("--r", type=float, required=True, help="cell size")
    p.add_argument("--rule", default="left", help="left, center, or offsets o1,o2,...")
    p.set_defaults(func=cmd_discretize)

    p = sub.add_parser("convolve", help="convolve two measures")
    common(p)
    p.add_argument("--measure", required=True)
    p.add_argument("--measure2", required=True)
    p.set_defaults(func=cmd_convolve)

    p = sub.add_parser("reconstruct", help="Fourier reconstruction through a digit split")
    common(p)
    p.add_argument("--ifs", required=True, help="base system")
    p.add_argument("--complement", default="", help="complement system (default: search)")
    p.add_argument("--t", default="0.5", help="comma list of evaluation points")
    p.add_argument("--cutoff", type=float, default=200.0)
    p.add_argument("--step", type=float, default=1.0 / 64.0)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("counterexample", help="lower-frame-bound decay probe sweep")
    common(p)
    p.add_argument("--measure", default="", help="candidate measure (default: mollified lattice)")
    p.add_argument("--T-grid", dest="T_grid", default="100:10000:3-geometric")
    p.set_defaults(func=cmd_counterexample)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, UsageError, KeyError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(
            json.dumps(
                {"error": {"type": type(exc).__name__, "message": str(exc)}},
                sort_keys=True,
            )
        )
        return 2


if __name__ == "__main__":
    sys.exit(main())
