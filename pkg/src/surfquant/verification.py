"""Named identity suites with tolerances, aggregated into a report.

Each suite evaluates one operator identity (or spectral property) over its
test matrix and emits CheckResult entries: worst residual per (chart,
field) with the offending point, the tolerance it was judged against and
the pass flag.  The CLI `verify` command serializes the entries as JSON;
the acceptance tests run the same suites at the tolerances fixed here.

Aggregation is deterministic: matrices are walked in a fixed order and
reduced with max, so reports are byte-stable across runs.
"""

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import charts as chlib
from . import fields as flib
from . import operators as oplib
from . import spectra as splib
from .geometry import evaluate_frame, geometric_potential, laplace_beltrami, shell_frame

# Default tolerances: 1e-10 for identities evaluated through analytic
# derivatives, 1e-9 where second derivatives enter, 1e-8 for quadrature
# comparisons, 1e-5 for Parseval at high l.
TOLERANCES = {
    "frame_completeness": 1e-12,
    "laplace_beltrami_coordinates": 1e-10,
    "geometric_potential": 1e-12,
    "shell_determinant": 1e-12,
    "position_momentum": 1e-10,
    "position_kinetic": 1e-9,
    "angular_momentum": 1e-10,
    "sphere_component_match": 1e-12,
    "rotation_relation": 1e-10,
    "hermiticity": 1e-10,
    "confined_sum": 1e-10,
    "confinement_slope": 0.05,
    "eigenvalue_residual": 1e-10,
    "dirichlet_kernel": 1e-8,
    "amplitude_closed_density": 1e-8,
    "amplitude_closed_signed": 1e-8,
    "amplitude_surface_match": 1e-7,
    "density_parity": 0.0,
    "parseval": 1e-5,
    "moment_second": 1e-8,
    "uncertainty_product": 1e-8,
    "sho_shape_match": 0.05,
}

IDENTITY_NAMES = tuple(TOLERANCES)


@dataclass(frozen=True)
class CheckResult:
    """One verified identity instance."""

    identity_name: str
    chart: Optional[str]
    field: Optional[str]
    point: Optional[tuple]
    residual: float
    tolerance: float
    passed: bool

    def to_dict(self):
        # Stable key order is part of the report contract.
        return {
            "identity_name": self.identity_name,
            "chart": self.chart,
            "field": self.field,
            "point": list(self.point) if self.point is not None else None,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


@dataclass
class VerifyOptions:
    """Knobs of the verification run (mirrors the CLI flags)."""

    points_per_chart: int = 25
    lmax: int = 3
    trig_count: int = 3
    hermiticity_order: int = 64
    parseval_lmax: int = 8
    tolerance_override: Optional[float] = None
    only: Optional[tuple] = None  # subset of IDENTITY_NAMES

    def wants(self, name):
        return self.only is None or name in self.only

    def tolerance(self, name):
        if self.tolerance_override is not None:
            return float(self.tolerance_override)
        return TOLERANCES[name]


def _result(options, name, chart, field, point, residual):
    tol = options.tolerance(name)
    residual = float(residual)
    return CheckResult(
        identity_name=name,
        chart=chart,
        field=field,
        point=tuple(float(q) for q in point) if point is not None else None,
        residual=residual,
        tolerance=tol,
        passed=residual <= tol,
    )


def _builtin_charts():
    return [chlib.sphere(), chlib.cylinder(), chlib.torus(), chlib.plane()]


def _worst(pairs):
    """Max-reduce (residual, point) pairs deterministically."""
    best_r, best_p = -1.0, None
    for r, p in pairs:
        if r > best_r:
            best_r, best_p = r, p
    return best_r, best_p


def geometry_suite(options):
    wanted = (
        "frame_completeness",
        "laplace_beltrami_coordinates",
        "shell_determinant",
        "geometric_potential",
    )
    if not any(options.wants(name) for name in wanted):
        return []
    out = []
    for chart in _builtin_charts():
        pts = chlib.interior_points(chart, options.points_per_chart)
        if options.wants("frame_completeness"):
            r, p = _worst(
                (
                    float(np.abs(evaluate_frame(chart, *pt).completeness_residual()).max()),
                    pt,
                )
                for pt in pts
            )
            out.append(_result(options, "frame_completeness", chart.name, None, p, r))
        if options.wants("laplace_beltrami_coordinates"):
            def lb_res(pt):
                frame = evaluate_frame(chart, *pt)
                lap = np.array(
                    [
                        laplace_beltrami(chart, flib.coordinate_field(chart, i), *pt)
                        for i in range(3)
                    ]
                )
                return float(
                    np.abs(lap - 2.0 * frame.mean_curvature * frame.normal).max()
                )

            r, p = _worst((lb_res(pt), pt) for pt in pts)
            out.append(
                _result(
                    options, "laplace_beltrami_coordinates", chart.name, "coordinates", p, r
                )
            )
        if options.wants("shell_determinant"):
            def det_res(pt):
                frame = evaluate_frame(chart, *pt)
                worst = 0.0
                for q3 in (-0.2, -0.05, 0.1, 0.2):
                    sf = shell_frame(frame, q3)
                    closed = frame.sqrt_g**2 * sf.fold_factor**2
                    worst = max(worst, abs(sf.det - closed))
                return worst

            r, p = _worst((det_res(pt), pt) for pt in pts)
            out.append(_result(options, "shell_determinant", chart.name, None, p, r))
    if options.wants("geometric_potential"):
        sph = chlib.sphere()
        fr = evaluate_frame(sph, 1.0, 0.5)
        out.append(
            _result(
                options,
                "geometric_potential",
                "sphere",
                None,
                (1.0, 0.5),
                abs(geometric_potential(fr)),
            )
        )
        cyl = chlib.cylinder(radius=2.0)
        fr = evaluate_frame(cyl, 0.3, 0.1)
        out.append(
            _result(
                options,
                "geometric_potential",
                "cylinder",
                None,
                (0.3, 0.1),
                abs(geometric_potential(fr) - (-1.0 / 32.0)),
            )
        )
    return out


def commutator_suite(options):
    wanted = (
        "position_momentum",
        "position_kinetic",
        "angular_momentum",
        "sphere_component_match",
    )
    if not any(options.wants(name) for name in wanted):
        return []
    out = []
    library = flib.field_library(options.lmax, options.trig_count)
    axes = ("x", "y", "z")
    for chart in _builtin_charts():
        pts = chlib.interior_points(chart, options.points_per_chart)
        for fld in library:
            if options.wants("position_momentum"):
                r, p = _worst(
                    (oplib.position_momentum_residual_max(chart, fld, *pt), pt)
                    for pt in pts
                )
                out.append(
                    _result(options, "position_momentum", chart.name, fld.label, p, r)
                )
            if options.wants("position_kinetic"):
                r, p = _worst(
                    (
                        float(
                            np.abs(
                                oplib.commutator_position_kinetic(chart, fld, *pt)
                            ).max()
                        ),
                        pt,
                    )
                    for pt in pts
                )
                out.append(
                    _result(options, "position_kinetic", chart.name, fld.label, p, r)
                )
    sphere = chlib.sphere()
    pts = chlib.interior_points(sphere, options.points_per_chart)
    for fld in library:
        if options.wants("angular_momentum"):
            r, p = _worst(
                (oplib.angular_momentum_residual_max(fld, *pt), pt) for pt in pts
            )
            out.append(_result(options, "angular_momentum", "sphere", fld.label, p, r))
        if options.wants("sphere_component_match"):
            def comp_res(pt):
                general = oplib.apply_geometric_momentum(sphere, fld, *pt)
                return max(
                    abs(oplib.sphere_momentum_component(ax, fld, *pt) - general[k])
                    for k, ax in enumerate(axes)
                )

            r, p = _worst((comp_res(pt), pt) for pt in pts)
            out.append(
                _result(options, "sphere_component_match", "sphere", fld.label, p, r)
            )
    return out


def rotation_suite(options):
    if not options.wants("rotation_relation"):
        return []
    out = []
    grid = oplib.rotation_sample_grid()
    for fld in (
        flib.constant(1.0),
        flib.spherical_harmonic(1, 0),
        flib.spherical_harmonic(2, 2),
    ):
        residual = oplib.rotation_relation_check(fld, grid)
        out.append(
            _result(options, "rotation_relation", "sphere", fld.label, None, residual)
        )
    return out


def hermiticity_suite(options):
    if not options.wants("hermiticity"):
        return []
    out = []
    pool = [
        flib.spherical_harmonic(0, 0),
        flib.spherical_harmonic(1, 0),
        flib.spherical_harmonic(1, 1),
        flib.spherical_harmonic(2, 0),
    ]
    for axis in ("x", "y", "z"):
        worst, label = -1.0, None
        for f in pool:
            for g in pool:
                d = abs(
                    oplib.hermiticity_defect(
                        axis, f, g, order=options.hermiticity_order
                    )
                )
                if d > worst:
                    worst, label = d, f"p_{axis}:{f.label},{g.label}"
        out.append(_result(options, "hermiticity", "sphere", label, None, worst))
    return out


def confinement_suite(options):
    if not (options.wants("confined_sum") or options.wants("confinement_slope")):
        return []
    out = []
    profile = oplib.gaussian_profile()
    chi = flib.spherical_harmonic(1, 0)
    if options.wants("confined_sum"):
        for chart, pt in (
            (chlib.sphere(), (1.0, 0.5)),
            (chlib.torus(), (0.8, 2.0)),
            (chlib.plane(), (0.2, -0.3)),
        ):
            worst = 0.0
            for q3 in (0.0, 0.01, 0.1, 0.15):
                parts = oplib.confined_gradient(chart, chi, profile, pt[0], pt[1], q3)
                direct = oplib.shell_gradient_direct(
                    chart, chi, profile, pt[0], pt[1], q3
                )
                worst = max(worst, float(np.abs(parts.total() - direct).max()))
            out.append(_result(options, "confined_sum", chart.name, chi.label, pt, worst))
    if options.wants("confinement_slope"):
        q3s = np.logspace(-4, -1, 13)
        slope, _ = oplib.confinement_slope(
            chlib.sphere(), chi, profile, 1.0, 0.5, q3s
        )
        out.append(
            _result(
                options,
                "confinement_slope",
                "sphere",
                chi.label,
                (1.0, 0.5),
                abs(slope - 1.0),
            )
        )
    return out


def eigenvalue_suite(options):
    if not options.wants("eigenvalue_residual"):
        return []
    rng = np.random.default_rng(20240502)
    worst, worst_point, worst_label = -1.0, None, None
    for _ in range(100):
        p = rng.uniform(-10.0, 10.0)
        theta = rng.uniform(0.01, np.pi - 0.01)
        eigen = splib.eigenfunction_field(p)
        value = oplib.sphere_momentum_component("z", eigen.field, theta, 0.0)
        residual = abs(value - p * splib.psi(p, theta))
        if residual > worst:
            worst, worst_point, worst_label = residual, (theta, 0.0), eigen.field.label
    return [
        _result(
            options, "eigenvalue_residual", "sphere", worst_label, worst_point, worst
        )
    ]


def spectra_suite(options):
    out = []
    if options.wants("dirichlet_kernel"):
        for theta_min in (1e-3, 1e-5, 1e-7):
            L = -np.log(np.tan(0.5 * theta_min))
            worst = 0.0
            for dp in np.linspace(0.0, 5.0, 21):
                value = splib.overlap_kernel(1.0 + dp, 1.0, theta_min)
                worst = max(worst, abs(value - splib.dirichlet_kernel(dp, L)))
            out.append(
                _result(
                    options,
                    "dirichlet_kernel",
                    "sphere",
                    f"theta_min={theta_min:g}",
                    None,
                    worst,
                )
            )
    p_grid = splib.symmetric_grid(6.0, 0.05)
    if options.wants("amplitude_closed_density") or options.wants(
        "amplitude_closed_signed"
    ):
        for l in (0, 1, 2):
            quad = splib.amplitude_quadrature(l, p_grid)
            closed = splib.amplitude_closed(l, p_grid)
            sign = splib.CLOSED_FORM_COMPARISON_SIGN[l]
            if options.wants("amplitude_closed_density"):
                out.append(
                    _result(
                        options,
                        "amplitude_closed_density",
                        None,
                        f"l={l}",
                        None,
                        float(np.max(np.abs(np.abs(quad) ** 2 - np.abs(closed) ** 2))),
                    )
                )
            if options.wants("amplitude_closed_signed"):
                out.append(
                    _result(
                        options,
                        "amplitude_closed_signed",
                        None,
                        f"l={l}",
                        None,
                        float(np.max(np.abs(quad - sign * closed))),
                    )
                )
    if options.wants("amplitude_surface_match"):
        for l in range(5):
            worst = 0.0
            for p in np.linspace(-4.0, 4.0, 9):
                surf = splib.amplitude_surface_overlap(l, p)
                quad = splib.amplitude_quadrature(l, p)
                worst = max(worst, abs(surf - quad))
            out.append(
                _result(options, "amplitude_surface_match", None, f"l={l}", None, worst)
            )
    if options.wants("density_parity"):
        for l in range(min(options.parseval_lmax, 8) + 1):
            amps = splib.amplitude_quadrature(l, p_grid)
            dens = np.abs(amps) ** 2
            out.append(
                _result(
                    options,
                    "density_parity",
                    None,
                    f"l={l}",
                    None,
                    float(np.max(np.abs(dens - dens[::-1]))),
                )
            )
    if options.wants("parseval"):
        for l in range(options.parseval_lmax + 1):
            out.append(
                _result(
                    options,
                    "parseval",
                    None,
                    f"l={l}",
                    None,
                    abs(splib.parseval_check(l) - 1.0),
                )
            )
    if options.wants("moment_second"):
        mom = splib.moments(0, max_order=2)
        out.append(
            _result(options, "moment_second", None, "l=0", None, abs(mom[2] - 1.0 / 3.0))
        )
    if options.wants("uncertainty_product"):
        report = splib.uncertainty_report(0, 0)
        worst = max(abs(v - 1.0 / 3.0) for v in report.products.values())
        out.append(
            _result(options, "uncertainty_product", None, "Y0+0", None, worst)
        )
    if options.wants("sho_shape_match"):
        comp = splib.sho_comparison(splib.symmetric_grid(4.0, 0.01))
        out.append(
            _result(
                options,
                "sho_shape_match",
                None,
                "l=0",
                None,
                comp.max_diff_shape_matched,
            )
        )
    return out


@dataclass(frozen=True)
class VerificationReport:
    """Every identity instance checked in a run, with the overall verdict."""

    checks: tuple

    @property
    def total(self):
        return len(self.checks)

    @property
    def failed(self):
        return sum(0 if c.passed else 1 for c in self.checks)

    @property
    def all_pass(self):
        return self.failed == 0

    def to_dict(self):
        return {
            "checks": [c.to_dict() for c in self.checks],
            "total": self.total,
            "failed": self.failed,
            "all_pass": self.all_pass,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2) + "\n"


def run_verification(options=None):
    """Run every requested identity suite; returns a VerificationReport."""
    options = options or VerifyOptions()
    if options.only:
        unknown = set(options.only) - set(IDENTITY_NAMES)
        if unknown:
            raise ValueError(
                f"unknown identities: {sorted(unknown)}; "
                f"known: {list(IDENTITY_NAMES)}"
            )
    results = []
    results.extend(geometry_suite(options))
    results.extend(commutator_suite(options))
    results.extend(rotation_suite(options))
    results.extend(hermiticity_suite(options))
    results.extend(confinement_suite(options))
    results.extend(eigenvalue_suite(options))
    results.extend(spectra_suite(options))
    return VerificationReport(checks=tuple(results))
