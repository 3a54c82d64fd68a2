"""Exception types shared across the package."""


class SurfquantError(Exception):
    """Base class for all package-specific errors."""


class ChartSingularityError(SurfquantError):
    """Tangent vectors degenerate at a point of a parametric chart."""

    def __init__(self, chart_name, point, detail="tangent degeneracy"):
        self.chart_name = chart_name
        self.point = tuple(float(q) for q in point)
        self.detail = detail
        super().__init__(f"{chart_name} chart singular at {self.point}: {detail}")


class ShellFoldError(SurfquantError):
    """Normal offset reached the focal distance; the shell coordinates fold."""

    def __init__(self, q3, factor):
        self.q3 = float(q3)
        self.factor = float(factor)
        super().__init__(
            f"shell folds at q3={self.q3}: 1 - 2*M*q3 + K*q3^2 = {self.factor} <= 0"
        )


class PoleProximityError(SurfquantError):
    """Spherical chart evaluation requested too close to a pole."""

    def __init__(self, theta, margin):
        self.theta = float(theta)
        self.margin = float(margin)
        super().__init__(
            f"theta={self.theta} within {self.margin} of a coordinate pole"
        )


class QuadratureTruncationError(SurfquantError):
    """Truncation tail bound of an improper integral exceeds the tolerance."""

    def __init__(self, bound, tolerance):
        self.bound = float(bound)
        self.tolerance = float(tolerance)
        super().__init__(
            f"truncation tail bound {self.bound:.3e} exceeds tolerance "
            f"{self.tolerance:.3e}; increase the truncation half-width Q"
        )
