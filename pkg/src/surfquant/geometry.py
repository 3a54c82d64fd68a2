"""Pointwise differential geometry of a parametric surface and its shell.

Everything here is a pure function of a chart and a parameter point.  The
central object is the GeometryFrame: tangents, metric, normal, second
fundamental form, Weingarten map and the curvature invariants.

Sign conventions (fixed once, relied on by every operator downstream):

* normal n = (d1 r x d2 r) / |d1 r x d2 r|, outward on built-in closed
  surfaces;
* second fundamental form h_{mu nu} = n . d_mu d_nu r;
* Weingarten map alpha = -g^{-1} h, equivalently d_mu n = alpha_mu^nu r_nu;
* mean curvature M = -tr(alpha)/2, Gaussian curvature K = det(alpha).

Under these choices the unit sphere with outward normal has M = -1, K = 1,
and the Laplace-Beltrami image of the coordinate functions satisfies the
identity lap(r) = 2 M n, which the tests use as the curvature oracle.
"""

from dataclasses import dataclass

import numpy as np

from .charts import check_regular
from .errors import ShellFoldError


@dataclass(frozen=True)
class GeometryFrame:
    """Per-point bundle of first- and second-order surface data."""

    chart_name: str
    point: tuple  # (q1, q2)
    position: np.ndarray  # (3,)
    tangents: np.ndarray  # (2, 3) rows d_mu r
    raised: np.ndarray  # (2, 3) rows r^mu = g^{mu nu} r_nu
    metric: np.ndarray  # (2, 2)
    metric_inv: np.ndarray  # (2, 2)
    sqrt_g: float
    normal: np.ndarray  # (3,) unit
    second_form: np.ndarray  # (2, 2), n . d_mu d_nu r
    weingarten: np.ndarray  # (2, 2), alpha = -g^{-1} h
    mean_curvature: float
    gaussian_curvature: float

    def completeness_residual(self):
        """Entrywise residual of sum_mu r^mu (x) r_mu + n (x) n - I."""
        proj = self.raised.T @ self.tangents + np.outer(self.normal, self.normal)
        return proj - np.eye(3)


@dataclass(frozen=True)
class ShellFrame:
    """Shell metric at normal offset q3 above a surface point."""

    base: GeometryFrame
    q3: float
    metric3: np.ndarray  # (3, 3)
    det: float  # direct determinant of metric3

    @property
    def fold_factor(self):
        M = self.base.mean_curvature
        K = self.base.gaussian_curvature
        return 1.0 - 2.0 * M * self.q3 + K * self.q3 * self.q3


def evaluate_frame(chart, q1, q2):
    """Evaluate the full geometric frame of `chart` at (q1, q2).

    Raises ChartSingularityError where the tangents degenerate (for example
    the poles of the sphere chart).
    """
    tangents, cross = check_regular(chart, q1, q2)
    position = chart.position(q1, q2)
    metric = tangents @ tangents.T
    sqrt_g = float(np.linalg.norm(cross))
    metric_inv = np.linalg.inv(metric)
    raised = metric_inv @ tangents
    normal = cross / sqrt_g
    d2 = chart.second_partials(q1, q2)
    second_form = d2 @ normal
    weingarten = -metric_inv @ second_form
    mean_curvature = -0.5 * float(np.trace(weingarten))
    gaussian_curvature = float(np.linalg.det(weingarten))
    return GeometryFrame(
        chart_name=chart.name,
        point=(float(q1), float(q2)),
        position=position,
        tangents=tangents,
        raised=raised,
        metric=metric,
        metric_inv=metric_inv,
        sqrt_g=sqrt_g,
        normal=normal,
        second_form=second_form,
        weingarten=weingarten,
        mean_curvature=mean_curvature,
        gaussian_curvature=gaussian_curvature,
    )


def geometric_potential(frame, hbar=1.0, mu=1.0):
    """Curvature-induced potential -(hbar^2 / 2 mu) (M^2 - K)."""
    if hbar <= 0.0 or mu <= 0.0:
        raise ValueError("hbar and mu must be positive")
    M = frame.mean_curvature
    K = frame.gaussian_curvature
    return -(hbar * hbar) / (2.0 * mu) * (M * M - K)


def shell_frame(frame, q3):
    """Metric of the shell point r + q3 n built on a surface frame.

    The surface block is (I + q3 alpha) g (I + q3 alpha)^T, the normal
    row/column vanish and G_33 = 1.  Degenerates (folds) where
    1 - 2 M q3 + K q3^2 <= 0, i.e. past the focal distance.
    """
    q3 = float(q3)
    M = frame.mean_curvature
    K = frame.gaussian_curvature
    factor = 1.0 - 2.0 * M * q3 + K * q3 * q3
    if factor <= 0.0:
        raise ShellFoldError(q3, factor)
    B = np.eye(2) + q3 * frame.weingarten
    surface_block = B @ frame.metric @ B.T
    metric3 = np.zeros((3, 3))
    metric3[:2, :2] = surface_block
    metric3[2, 2] = 1.0
    det = float(np.linalg.det(metric3))
    return ShellFrame(base=frame, q3=q3, metric3=metric3, det=det)


def metric_derivatives(chart, q1, q2):
    """First derivatives of the metric, inverse metric and sqrt(g).

    Returns (dg, dginv, dsqrt) with dg[mu] = d_mu g_{alpha beta} (2x2),
    assembled from the chart's exact first/second partials.
    """
    t = chart.tangents(q1, q2)
    d2 = chart.second_partials(q1, q2)
    g = t @ t.T
    ginv = np.linalg.inv(g)
    sqrt_g = float(np.sqrt(np.linalg.det(g)))
    dg = np.empty((2, 2, 2))
    for mu in range(2):
        dg[mu] = d2[mu] @ t.T + t @ d2[mu].T
    dginv = np.array([-ginv @ dg[mu] @ ginv for mu in range(2)])
    dsqrt = np.array(
        [0.5 * sqrt_g * np.trace(ginv @ dg[mu]) for mu in range(2)]
    )
    return dg, dginv, dsqrt


def laplace_beltrami(chart, field, q1, q2):
    """Intrinsic Laplacian (1/sqrt g) d_mu (g^{mu nu} sqrt g  d_nu f).

    The field must supply exact partials to second order at the point;
    metric derivatives come from the chart's second partials, so for
    analytic charts and fields the result is accurate to machine precision.
    """
    frame = evaluate_frame(chart, q1, q2)
    _, dginv, dsqrt = metric_derivatives(chart, q1, q2)
    ginv = frame.metric_inv
    sqrt_g = frame.sqrt_g
    grad = field.grad(q1, q2)
    hess = field.hess(q1, q2)
    div_part = 0.0 + 0.0j
    for mu in range(2):
        for nu in range(2):
            coeff = dginv[mu][mu, nu] + ginv[mu, nu] * dsqrt[mu] / sqrt_g
            div_part = div_part + coeff * grad[nu]
    return complex(div_part + np.einsum("mn,mn->", ginv, hess))


def curvature_gradients(chart, q1, q2):
    """Surface gradients (d_mu M, d_mu K) at a point.

    Uses the chart's analytic formula when available (all built-ins carry
    one), otherwise Richardson-extrapolated central differences of the
    frame curvatures.
    """
    if chart.curvature_gradient is not None:
        dM, dK = chart.curvature_gradient(q1, q2)
        return np.asarray(dM, dtype=float), np.asarray(dK, dtype=float)

    def mk(a, b):
        fr = evaluate_frame(chart, a, b)
        return np.array([fr.mean_curvature, fr.gaussian_curvature])

    base_h = float(np.cbrt(np.finfo(float).eps))
    out = np.empty((2, 2))
    q = np.array([q1, q2], dtype=float)
    for mu in range(2):
        h = base_h * (1.0 + abs(q[mu]))

        def diff(step):
            qp = q.copy()
            qm = q.copy()
            qp[mu] += step
            qm[mu] -= step
            return (mk(*qp) - mk(*qm)) / (2.0 * step)

        out[mu] = (4.0 * diff(0.5 * h) - diff(h)) / 3.0
    return out[:, 0], out[:, 1]
