class SpectralError(Exception):
    """Base class for numerical failures in the spectral pipeline."""


class StepUnderflow(SpectralError):
    def __init__(self, lam, steps):
        super().__init__(f"step count {steps} exceeds the configured cap at lambda={lam!r}")
        self.lam = lam
        self.steps = steps


class BoundaryRoot(SpectralError):
    """A root of the characteristic function lies (numerically) on the contour."""

    def __init__(self, disk, clearance):
        super().__init__(f"contour of {disk} too close to a root (clearance {clearance:.3e})")
        self.disk = disk
        self.clearance = clearance


class NonIntegerWinding(SpectralError):
    def __init__(self, disk, value):
        super().__init__(f"winding number on {disk} did not converge (last value {value!r})")
        self.disk = disk
        self.value = value


class ClusterAmbiguity(SpectralError):
    pass


class NoValidR(SpectralError):
    pass


class LayoutError(SpectralError):
    pass


class NotAnEigenvalue(SpectralError):
    pass


class GeometricMultiplicityTwo(SpectralError):
    pass


class ZeroInput(ValueError):
    pass
