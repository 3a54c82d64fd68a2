"""Command-line front end: geometry reports, distributions, confinement
study and the verification suite, with deterministic CSV/JSON output.

Subcommands
-----------
geom          per-point curvature report of a built-in surface
distribution  momentum-distribution table of Y_l0
confine       thin-shell convergence study of the gradient decomposition
verify        run the identity suites and emit a JSON report

Every output is byte-stable for a fixed invocation: floats are written in
shortest round-trip form, rows follow a fixed order, JSON keys keep
insertion order.  Failure paths print a single machine-parseable line
`error: <tag>: <message>` on stderr and exit nonzero (2 chart/config
errors, 3 quadrature truncation, 4 shell fold, 1 failed verification).

An optional `--config FILE` supplies `key = value` defaults (same names as
the long flags, hyphens and underscores interchangeable); explicit flags
override the file.
"""

import argparse
import json
import sys

import numpy as np

from . import charts as chlib
from . import fields as flib
from . import operators as oplib
from . import spectra as splib
from . import verification as ver
from .errors import (
    ChartSingularityError,
    PoleProximityError,
    QuadratureTruncationError,
    ShellFoldError,
)
from .geometry import evaluate_frame, geometric_potential, shell_frame

GAUSSIAN_REFERENCE_LABEL = "sho_density"


def _fmt(x):
    return repr(float(x) + 0.0)  # +0.0 folds -0.0 into 0.0


def _write_text(path, text):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _csv(rows, header):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(str(v) for v in row))
    return "\n".join(lines) + "\n"


def _parse_point(text):
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"point must be 'q1,q2' (got {text!r})")
    return float(parts[0]), float(parts[1])


def _parse_float_list(text):
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _parse_grid(text):
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise ValueError(f"grid must be 'N1xN2' (got {text!r})")
    n1, n2 = int(parts[0]), int(parts[1])
    if n1 < 1 or n2 < 1:
        raise ValueError("grid counts must be positive")
    return n1, n2


def _make_surface(args):
    params = {}
    if getattr(args, "radius", None) is not None:
        params["radius"] = float(args.radius)
    for entry in getattr(args, "param", None) or []:
        if "=" not in entry:
            raise ValueError(f"--param expects key=value (got {entry!r})")
        key, value = entry.split("=", 1)
        params[key.strip().replace("-", "_")] = float(value)
    return chlib.make_chart(args.surface, **params)


def _geom_points(args, chart):
    points = [_parse_point(p) for p in (args.point or [])]
    if args.grid:
        n1, n2 = _parse_grid(args.grid)
        for axis, n in ((0, n1), (1, n2)):
            lo, hi = chart.domain[axis]
            if not lo < hi:
                raise ValueError("grid bounds must be ordered")
        q1s = np.linspace(*chart.domain[0], n1 + 2)[1:-1]
        q2s = np.linspace(*chart.domain[1], n2 + 2)[1:-1]
        points.extend((float(a), float(b)) for a in q1s for b in q2s)
    if not points:
        raise ValueError("no evaluation points: pass --point and/or --grid")
    return points


def cmd_geom(args):
    chart = _make_surface(args)
    points = _geom_points(args, chart)
    q3_values = _parse_float_list(args.q3) if args.q3 else []
    header = ["q1", "q2", "M", "K", "V_gp", "n_x", "n_y", "n_z", "sqrt_g"]
    header += [f"shell_det_q3_{q3:g}" for q3 in q3_values]
    rows = []
    dicts = []
    for q1, q2 in points:
        frame = evaluate_frame(chart, q1, q2)
        record = {
            "q1": q1,
            "q2": q2,
            "M": frame.mean_curvature,
            "K": frame.gaussian_curvature,
            "V_gp": geometric_potential(frame, args.hbar, args.mu),
            "n_x": frame.normal[0],
            "n_y": frame.normal[1],
            "n_z": frame.normal[2],
            "sqrt_g": frame.sqrt_g,
        }
        for q3 in q3_values:
            record[f"shell_det_q3_{q3:g}"] = shell_frame(frame, q3).det
        dicts.append(record)
        rows.append([_fmt(record[k]) for k in header])
    if args.format == "csv":
        _write_text(args.out, _csv(rows, header))
    else:
        payload = {"surface": chart.name, "params": chart.params, "rows": dicts}
        _write_text(args.out, json.dumps(payload, indent=2) + "\n")
    return 0


def cmd_distribution(args):
    if args.l < 0:
        raise ValueError("l must be nonnegative")
    table = splib.distribution_table(
        args.l,
        p_max=args.pmax,
        dp=args.dp,
        method=args.method,
        Q=args.Q,
        nodes=args.nodes,
        tolerance=args.tolerance,
    )
    header = ["p", "re_amp", "im_amp", "density", "method"]
    extra_closed = bool(args.compare_closed)
    if extra_closed and args.l > 2:
        raise ValueError("--compare-closed requires l <= 2")
    if extra_closed:
        header += ["re_closed", "im_closed", "density_closed"]
    if args.sho_overlay:
        header += [GAUSSIAN_REFERENCE_LABEL]
    rows = []
    dicts = []
    max_density_dev = 0.0
    for s in table.samples:
        record = {
            "p": s.p,
            "re_amp": s.amplitude.real,
            "im_amp": s.amplitude.imag,
            "density": s.density,
            "method": s.method,
        }
        if extra_closed:
            closed = splib.amplitude_closed(args.l, s.p)
            record["re_closed"] = closed.real
            record["im_closed"] = closed.imag
            record["density_closed"] = abs(closed) ** 2
            max_density_dev = max(
                max_density_dev, abs(s.density - record["density_closed"])
            )
        if args.sho_overlay:
            record[GAUSSIAN_REFERENCE_LABEL] = float(
                np.exp(-s.p * s.p) / np.sqrt(np.pi)
            )
        dicts.append(record)
        rows.append(
            [_fmt(record[k]) if k != "method" else record[k] for k in header]
        )
    if args.format == "csv":
        _write_text(args.out, _csv(rows, header))
    else:
        payload = {"l": args.l, "samples": dicts}
        _write_text(args.out, json.dumps(payload, indent=2) + "\n")
    if extra_closed:
        print(f"max_density_deviation={_fmt(max_density_dev)}")
    return 0


def _confine_field(selector):
    text = selector.strip().lower()
    if text.startswith("trig"):
        index = int(text[4:] or 0)
        return flib.trig_library(index + 1)[index]
    if text in ("const", "1"):
        return flib.constant(1.0)
    l, m = (int(tok) for tok in text.split(","))
    return flib.spherical_harmonic(l, m)


def cmd_confine(args):
    chart = _make_surface(args)
    chi = _confine_field(args.chi)
    profile = (
        oplib.gaussian_profile(args.width)
        if args.profile == "gaussian"
        else oplib.flat_profile()
    )
    if args.point:
        q1, q2 = _parse_point(args.point)
    else:
        q1, q2 = (1.0, 0.5) if chart.name == "sphere" else (0.8, 2.0)
    if args.q3:
        q3_values = _parse_float_list(args.q3)
    else:
        q3_values = list(np.logspace(-4, -1, 13))
    slope, rows = oplib.confinement_slope(chart, chi, profile, q1, q2, q3_values)
    if args.format == "csv":
        body = _csv([[_fmt(a), _fmt(b)] for a, b in rows], ["q3", "deviation"])
        body += f"# loglog_slope={_fmt(slope)}\n"
        _write_text(args.out, body)
    else:
        payload = {
            "surface": chart.name,
            "chi": chi.label,
            "profile": profile.label,
            "point": [q1, q2],
            "rows": [{"q3": a, "deviation": b} for a, b in rows],
            "loglog_slope": slope,
        }
        _write_text(args.out, json.dumps(payload, indent=2) + "\n")
    print(f"loglog_slope={_fmt(slope)}")
    return 0


def cmd_verify(args):
    options = ver.VerifyOptions(
        points_per_chart=args.points,
        lmax=args.lmax,
        trig_count=args.trig,
        hermiticity_order=args.order,
        parseval_lmax=args.parseval_lmax,
        tolerance_override=args.tolerance,
        only=tuple(args.only) if args.only else None,
    )
    report = ver.run_verification(options)
    _write_text(args.out, report.to_json())
    if args.out is not None:
        print(f"verify: {report.total - report.failed}/{report.total} checks passed")
    return 0 if report.all_pass else 1


def _add_common(parser):
    parser.add_argument("--config", help="key=value config file with defaults")
    parser.add_argument("--out", help="output path (default: stdout)")
    parser.add_argument(
        "--format", choices=("csv", "json"), default="csv", help="output format"
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="surfquant",
        description="Quantum mechanics on parametric surfaces: curvature "
        "reports, momentum distributions, confinement study, identity "
        "verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_geom = sub.add_parser("geom", help="pointwise curvature report")
    _add_common(p_geom)
    p_geom.add_argument("--surface", required=True, help="sphere|cylinder|torus|plane")
    p_geom.add_argument("--radius", type=float, help="radius shortcut parameter")
    p_geom.add_argument(
        "--param", action="append", help="named surface parameter key=value"
    )
    p_geom.add_argument("--point", action="append", help="evaluation point 'q1,q2'")
    p_geom.add_argument("--grid", help="interior grid 'N1xN2'")
    p_geom.add_argument("--q3", help="comma list of shell offsets")
    p_geom.add_argument("--hbar", type=float, default=1.0)
    p_geom.add_argument("--mu", type=float, default=1.0)
    p_geom.set_defaults(func=cmd_geom)

    p_dist = sub.add_parser("distribution", help="momentum distribution table")
    _add_common(p_dist)
    p_dist.add_argument("--l", type=int, default=0, help="angular quantum number")
    p_dist.add_argument("--pmax", type=float, default=6.0)
    p_dist.add_argument("--dp", type=float, default=0.05)
    p_dist.add_argument("--Q", type=float, default=splib.DEFAULT_Q)
    p_dist.add_argument("--nodes", type=int, default=splib.DEFAULT_NODES)
    p_dist.add_argument(
        "--method", choices=("quadrature", "closed_form"), default="quadrature"
    )
    p_dist.add_argument(
        "--compare-closed",
        action="store_true",
        help="add closed-form columns (l <= 2) and print the max deviation",
    )
    p_dist.add_argument(
        "--sho-overlay",
        action="store_true",
        help="append the oscillator ground-state momentum density column",
    )
    p_dist.add_argument(
        "--tolerance", type=float, default=1e-8, help="truncation tail tolerance"
    )
    p_dist.set_defaults(func=cmd_distribution)

    p_conf = sub.add_parser("confine", help="thin-shell convergence study")
    _add_common(p_conf)
    p_conf.add_argument("--surface", default="sphere")
    p_conf.add_argument("--radius", type=float)
    p_conf.add_argument("--param", action="append")
    p_conf.add_argument(
        "--chi", default="1,0", help="surface factor: 'l,m' harmonic, trigN or const"
    )
    p_conf.add_argument("--profile", choices=("gaussian", "flat"), default="gaussian")
    p_conf.add_argument("--width", type=float, default=1.0)
    p_conf.add_argument("--point", help="evaluation point 'q1,q2'")
    p_conf.add_argument("--q3", help="comma list of shell offsets")
    p_conf.set_defaults(func=cmd_confine)

    p_ver = sub.add_parser("verify", help="run identity suites, emit JSON report")
    _add_common(p_ver)
    p_ver.set_defaults(format="json")
    p_ver.add_argument("--points", type=int, default=25, help="points per chart")
    p_ver.add_argument("--lmax", type=int, default=3, help="harmonic library depth")
    p_ver.add_argument("--trig", type=int, default=3, help="random trig fields")
    p_ver.add_argument("--order", type=int, default=64, help="hermiticity order")
    p_ver.add_argument("--parseval-lmax", type=int, default=8)
    p_ver.add_argument(
        "--tolerance", type=float, default=None, help="override every tolerance"
    )
    p_ver.add_argument(
        "--only",
        action="append",
        help=f"restrict to named identities ({', '.join(ver.IDENTITY_NAMES)})",
    )
    p_ver.set_defaults(func=cmd_verify)
    return parser


def _coerce(text):
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            continue
    lowered = text.lower()
    if lowered in ("true", "false"):
        return lowered == "true"
    return text


def _load_config(path):
    values = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"config line without '=': {raw.strip()!r}")
            key, value = line.split("=", 1)
            values[key.strip().replace("-", "_")] = _coerce(value.strip())
    return values


def _apply_config(parser, argv):
    """Install config-file values as parser defaults (flags still win)."""
    if "--config" not in argv:
        return
    probe = argparse.ArgumentParser(add_help=False)
    probe.add_argument("--config")
    ns, _ = probe.parse_known_args(argv)
    if ns.config:
        values = _load_config(ns.config)
        for action in parser._subparsers._group_actions[0].choices.values():
            known = {a.dest for a in action._actions}
            action.set_defaults(**{k: v for k, v in values.items() if k in known})


_ERROR_TAGS = (
    (ChartSingularityError, "chart-singularity", 2),
    (PoleProximityError, "pole-proximity", 2),
    (QuadratureTruncationError, "quadrature-truncation", 3),
    (ShellFoldError, "shell-fold", 4),
    (ValueError, "config", 2),
)


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
        if getattr(args, "tolerance", None) is not None and args.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        return args.func(args)
    except tuple(exc for exc, _, _ in _ERROR_TAGS) as err:
        for exc_type, tag, code in _ERROR_TAGS:
            if isinstance(err, exc_type):
                print(f"error: {tag}: {err}", file=sys.stderr)
                return code
        raise  # pragma: no cover


if __name__ == "__main__":
    sys.exit(main())
