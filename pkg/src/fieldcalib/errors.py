"""Exception types shared across the package."""


class FieldCalibError(Exception):
    """Base class for all fieldcalib errors."""


class UnknownLabelError(FieldCalibError):
    """An annotation label is not part of the calibration-object taxonomy."""


class CoordinateRangeError(FieldCalibError):
    """A normalized annotation coordinate falls outside [0, 1]."""


class EmptyObservationError(FieldCalibError):
    """No segment carries a single observed pixel."""


class DegenerateGeometryError(FieldCalibError):
    """Every observed segment projects degenerately (behind camera or collapsed)."""


class NonFiniteGradientError(FieldCalibError):
    """The loss gradient became NaN/inf during optimization."""


class OptimizationFailureError(FieldCalibError):
    """All initialization hypotheses ended with a non-finite loss."""


class FocalEstimationError(FieldCalibError):
    """Plane-homography focal recovery produced a non-positive or non-finite solution."""


class InversionFailureError(FieldCalibError):
    """Lens undistortion did not converge (extreme distortion coefficients)."""


class EmptySceneError(FieldCalibError):
    """A rendered scene contains no visible segment; caller should resample."""
