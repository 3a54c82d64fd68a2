"""Parametric surface charts with exact first and second partial derivatives.

A chart is an immutable bundle of callables: the map r(q1, q2) into 3-space
plus its first partials (shape (2, 3)) and second partials (shape (2, 2, 3)).
Built-in charts (sphere, cylinder, torus, plane) carry hand-written analytic
derivatives; user maps without derivatives get a central-difference adaptor
with one Richardson extrapolation level.

Orientation convention: the unit normal is (d1 r x d2 r)/|d1 r x d2 r| and
the built-in closed surfaces order their parameters so the normal points
outward.  This is the deterministic rule all curvature signs hang off.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.stats import qmc

from .errors import ChartSingularityError

# Degeneracy threshold relative to the tangent scale, |t1 x t2| < tol * scale.
SINGULARITY_RTOL = 1e-10

# Hard exclusion band around coordinate poles of the sphere chart.
POLE_BAND = 1e-3


@dataclass(frozen=True)
class ParametricChart:
    """Surface map r(q1, q2) -> R^3 with exact partials to second order."""

    name: str
    params: dict
    domain: tuple  # ((lo1, hi1), (lo2, hi2))
    periodic: tuple  # (bool, bool)
    _map: Callable
    _d1: Callable
    _d2: Callable
    # Optional analytic gradients of (M, K); None means finite differences.
    curvature_gradient: Optional[Callable] = field(default=None, compare=False)

    def position(self, q1, q2):
        return np.asarray(self._map(q1, q2), dtype=float)

    def tangents(self, q1, q2):
        """First partials d_mu r, shape (2, 3)."""
        return np.asarray(self._d1(q1, q2), dtype=float)

    def second_partials(self, q1, q2):
        """Second partials d_mu d_nu r, shape (2, 2, 3), symmetric in mu, nu."""
        return np.asarray(self._d2(q1, q2), dtype=float)

    def contains(self, q1, q2, margin=0.0):
        for q, (lo, hi), per in zip((q1, q2), self.domain, self.periodic):
            if per:
                continue
            if not (lo + margin <= q <= hi - margin):
                return False
        return True


def from_map(map_fn, domain, periodic=(False, False), name="custom", params=None):
    """Wrap a bare map with finite-difference first/second partials.

    Central differences with one Richardson level (h and h/2 combined as
    (4*D_half - D_h)/3).  Steps scale as (1 + |q|) with the rounding-optimal
    exponent per derivative order: eps^(1/3) for first differences and
    eps^(1/4) for second/mixed ones.  Good to roughly 1e-10 (first) and
    1e-7 (second) relative on smooth maps.
    """
    eps = np.finfo(float).eps
    first_h = float(np.cbrt(eps))
    second_h = float(eps**0.25)

    def d1(q1, q2):
        q = np.array([q1, q2], dtype=float)
        out = np.empty((2, 3))
        for mu in range(2):
            h = first_h * (1.0 + abs(q[mu]))
            out[mu] = _richardson_first(map_fn, q, mu, h)
        return out

    def d2(q1, q2):
        q = np.array([q1, q2], dtype=float)
        out = np.empty((2, 2, 3))
        for mu in range(2):
            h = second_h * (1.0 + abs(q[mu]))
            out[mu, mu] = _richardson_second(map_fn, q, mu, h)
        hmix = second_h * (1.0 + abs(q[0]) + abs(q[1]))
        out[0, 1] = out[1, 0] = _richardson_mixed(map_fn, q, hmix)
        return out

    return ParametricChart(
        name=name,
        params=dict(params or {}),
        domain=tuple(tuple(map(float, ax)) for ax in domain),
        periodic=tuple(bool(p) for p in periodic),
        _map=lambda a, b: np.asarray(map_fn(a, b), dtype=float),
        _d1=d1,
        _d2=d2,
    )


def _shift(q, mu, h):
    out = q.copy()
    out[mu] += h
    return out


def _first_diff(f, q, mu, h):
    fp = np.asarray(f(*_shift(q, mu, h)), dtype=float)
    fm = np.asarray(f(*_shift(q, mu, -h)), dtype=float)
    return (fp - fm) / (2.0 * h)


def _richardson_first(f, q, mu, h):
    d_h = _first_diff(f, q, mu, h)
    d_h2 = _first_diff(f, q, mu, 0.5 * h)
    return (4.0 * d_h2 - d_h) / 3.0


def _second_diff(f, q, mu, h):
    fp = np.asarray(f(*_shift(q, mu, h)), dtype=float)
    f0 = np.asarray(f(*q), dtype=float)
    fm = np.asarray(f(*_shift(q, mu, -h)), dtype=float)
    return (fp - 2.0 * f0 + fm) / (h * h)


def _richardson_second(f, q, mu, h):
    d_h = _second_diff(f, q, mu, h)
    d_h2 = _second_diff(f, q, mu, 0.5 * h)
    return (4.0 * d_h2 - d_h) / 3.0


def _mixed_diff(f, q, h):
    fpp = np.asarray(f(q[0] + h, q[1] + h), dtype=float)
    fpm = np.asarray(f(q[0] + h, q[1] - h), dtype=float)
    fmp = np.asarray(f(q[0] - h, q[1] + h), dtype=float)
    fmm = np.asarray(f(q[0] - h, q[1] - h), dtype=float)
    return (fpp - fpm - fmp + fmm) / (4.0 * h * h)


def _richardson_mixed(f, q, h):
    d_h = _mixed_diff(f, q, h)
    d_h2 = _mixed_diff(f, q, 0.5 * h)
    return (4.0 * d_h2 - d_h) / 3.0


# ---------------------------------------------------------------------------
# Built-in charts.  Parameter order is chosen so d1 x d2 points outward on
# the closed surfaces (sphere, cylinder, torus); the plane normal is +z.
# ---------------------------------------------------------------------------


def sphere(radius=1.0):
    """Sphere of given radius, chart (theta, phi), outward normal."""
    R = float(radius)
    if R <= 0.0:
        raise ValueError("radius must be positive")

    def m(th, ph):
        st, ct = np.sin(th), np.cos(th)
        return np.array([R * st * np.cos(ph), R * st * np.sin(ph), R * ct])

    def d1(th, ph):
        st, ct = np.sin(th), np.cos(th)
        sp, cp = np.sin(ph), np.cos(ph)
        return np.array(
            [
                [R * ct * cp, R * ct * sp, -R * st],
                [-R * st * sp, R * st * cp, 0.0],
            ]
        )

    def d2(th, ph):
        st, ct = np.sin(th), np.cos(th)
        sp, cp = np.sin(ph), np.cos(ph)
        dtt = np.array([-R * st * cp, -R * st * sp, -R * ct])
        dtp = np.array([-R * ct * sp, R * ct * cp, 0.0])
        dpp = np.array([-R * st * cp, -R * st * sp, 0.0])
        return np.array([[dtt, dtp], [dtp, dpp]])

    def curv_grad(th, ph):
        return np.zeros(2), np.zeros(2)

    return ParametricChart(
        name="sphere",
        params={"radius": R},
        domain=((0.0, np.pi), (0.0, 2.0 * np.pi)),
        periodic=(False, True),
        _map=m,
        _d1=d1,
        _d2=d2,
        curvature_gradient=curv_grad,
    )


def cylinder(radius=1.0, half_height=1.0):
    """Cylinder of given radius, chart (phi, v), outward normal."""
    R = float(radius)
    H = float(half_height)
    if R <= 0.0 or H <= 0.0:
        raise ValueError("radius and half_height must be positive")

    def m(ph, v):
        return np.array([R * np.cos(ph), R * np.sin(ph), v])

    def d1(ph, v):
        return np.array(
            [
                [-R * np.sin(ph), R * np.cos(ph), 0.0],
                [0.0, 0.0, 1.0],
            ]
        )

    def d2(ph, v):
        dpp = np.array([-R * np.cos(ph), -R * np.sin(ph), 0.0])
        z = np.zeros(3)
        return np.array([[dpp, z], [z, z]])

    def curv_grad(ph, v):
        return np.zeros(2), np.zeros(2)

    return ParametricChart(
        name="cylinder",
        params={"radius": R, "half_height": H},
        domain=((0.0, 2.0 * np.pi), (-H, H)),
        periodic=(True, False),
        _map=m,
        _d1=d1,
        _d2=d2,
        curvature_gradient=curv_grad,
    )


def torus(major_radius=2.0, minor_radius=0.5):
    """Torus, chart (u around the axis, v around the tube), outward normal."""
    a = float(major_radius)
    b = float(minor_radius)
    if not (a > b > 0.0):
        raise ValueError("need major_radius > minor_radius > 0")

    def m(u, v):
        w = a + b * np.cos(v)
        return np.array([w * np.cos(u), w * np.sin(u), b * np.sin(v)])

    def d1(u, v):
        w = a + b * np.cos(v)
        su, cu = np.sin(u), np.cos(u)
        sv, cv = np.sin(v), np.cos(v)
        return np.array(
            [
                [-w * su, w * cu, 0.0],
                [-b * sv * cu, -b * sv * su, b * cv],
            ]
        )

    def d2(u, v):
        w = a + b * np.cos(v)
        su, cu = np.sin(u), np.cos(u)
        sv, cv = np.sin(v), np.cos(v)
        duu = np.array([-w * cu, -w * su, 0.0])
        duv = np.array([b * sv * su, -b * sv * cu, 0.0])
        dvv = np.array([-b * cv * cu, -b * cv * su, -b * sv])
        return np.array([[duu, duv], [duv, dvv]])

    def curv_grad(u, v):
        w = a + b * np.cos(v)
        dM = np.array([0.0, a * np.sin(v) / (2.0 * w * w)])
        dK = np.array([0.0, -a * np.sin(v) / (b * w * w)])
        return dM, dK

    return ParametricChart(
        name="torus",
        params={"major_radius": a, "minor_radius": b},
        domain=((0.0, 2.0 * np.pi), (0.0, 2.0 * np.pi)),
        periodic=(True, True),
        _map=m,
        _d1=d1,
        _d2=d2,
        curvature_gradient=curv_grad,
    )


def plane(extent=1.0):
    """Flat plane z = 0, chart (u, v), normal +z."""
    L = float(extent)
    if L <= 0.0:
        raise ValueError("extent must be positive")

    def m(u, v):
        return np.array([u, v, 0.0])

    def d1(u, v):
        return np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])

    def d2(u, v):
        return np.zeros((2, 2, 3))

    def curv_grad(u, v):
        return np.zeros(2), np.zeros(2)

    return ParametricChart(
        name="plane",
        params={"extent": L},
        domain=((-L, L), (-L, L)),
        periodic=(False, False),
        _map=m,
        _d1=d1,
        _d2=d2,
        curvature_gradient=curv_grad,
    )


CHART_BUILDERS = {
    "sphere": sphere,
    "cylinder": cylinder,
    "torus": torus,
    "plane": plane,
}


def make_chart(name, **params):
    """Instantiate a built-in chart by name with named numeric parameters."""
    try:
        builder = CHART_BUILDERS[name]
    except KeyError:
        known = ", ".join(sorted(CHART_BUILDERS))
        raise ValueError(f"unknown surface {name!r}; known surfaces: {known}")
    try:
        return builder(**params)
    except TypeError:
        raise ValueError(f"surface {name!r} does not take parameters {sorted(params)}")


def check_regular(chart, q1, q2):
    """Raise ChartSingularityError if the tangents degenerate at the point."""
    t = chart.tangents(q1, q2)
    cross = np.cross(t[0], t[1])
    scale = np.linalg.norm(t[0]) * np.linalg.norm(t[1])
    if np.linalg.norm(cross) < SINGULARITY_RTOL * max(scale, 1e-300):
        raise ChartSingularityError(chart.name, (q1, q2))
    return t, cross


def interior_points(chart, n, margin_fraction=0.05):
    """Deterministic quasi-random interior points (Halton sequence).

    Non-periodic axes are inset by margin_fraction of their span (never less
    than the pole band on the sphere); periodic axes use the full range.
    """
    sampler = qmc.Halton(d=2, scramble=False)
    u = sampler.random(int(n) + 1)[1:]  # drop the degenerate first point (0, 0)
    pts = np.empty_like(u)
    for axis in range(2):
        lo, hi = chart.domain[axis]
        if chart.periodic[axis]:
            a, b = lo, hi
        else:
            pad = max(margin_fraction * (hi - lo), POLE_BAND)
            a, b = lo + pad, hi - pad
        pts[:, axis] = a + (b - a) * u[:, axis]
    return pts
