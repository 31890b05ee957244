"""Pinhole camera model: pose parameterization, NDC/raster projection, radial
lens distortion, and the plane homography induced by a camera.

Conventions (fixed across the package):

* World frame: origin at the field center, x toward the right goal, y toward
  the bottom side line, field plane z = 0; cameras sit on the negative-z side.
* Rotation ``R = Rz(roll) @ Rx(tilt) @ Rz(pan)`` with right-handed elementary
  matrices; tilt = 0 looks straight at the field plane, tilt = 90 deg is
  horizontal.
* Projection ``P = K @ R @ [I | -t]``; points with positive depth after the
  extrinsic transform are in front of the camera.
* NDC: x in [-1, 1] maps affinely onto raster [0, w), y onto [0, h); the
  principal point is the NDC origin. fx_ndc = 1/tan(fov/2) and
  fy_ndc = (w/h) * fx_ndc so the NDC and raster paths agree exactly for
  square pixels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import dual
from .errors import InversionFailureError

AXIS_SYSTEMS = ("soccernet", "wc14", "chen", "jiang")

MIN_DEPTH = 1e-9  # meters of depth below which a projection is tagged invalid

UNDISTORT_ITERATIONS = 20  # fixed count keeps the inverse smooth for autodiff


@dataclass(frozen=True)
class ImageDims:
    width: int
    height: int

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError(f"image dims must be positive, got {self.width}x{self.height}")

    @property
    def aspect(self) -> float:
        return self.width / self.height


@dataclass(frozen=True)
class CameraParams:
    """Pose and intrinsic variables: horizontal angle of view, Euler angles
    (radians), and world position (meters)."""

    fov: float
    pan: float
    tilt: float
    roll: float
    position: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "position", np.asarray(self.position, dtype=np.float64).reshape(3))
        values = (self.fov, self.pan, self.tilt, self.roll, *self.position)
        if not all(math.isfinite(v) for v in values):
            raise ValueError("camera parameters must be finite")
        if not 0.0 < self.fov < math.pi:
            raise ValueError(f"fov must lie in (0, pi), got {self.fov}")

    def as_vector(self) -> np.ndarray:
        """(fov, pan, tilt, roll, tx, ty, tz) packing used by the optimizer."""
        return np.array([self.fov, self.pan, self.tilt, self.roll, *self.position])

    @classmethod
    def from_vector(cls, v) -> "CameraParams":
        v = np.asarray(v, dtype=np.float64).reshape(7)
        return cls(fov=float(v[0]), pan=float(v[1]), tilt=float(v[2]), roll=float(v[3]), position=v[4:7])


@dataclass(frozen=True)
class RadialDistortion:
    """Two-coefficient radial model about the NDC origin; (0, 0) is identity."""

    k1: float = 0.0
    k2: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.k1) and math.isfinite(self.k2)):
            raise ValueError("distortion coefficients must be finite")

    @property
    def is_identity(self) -> bool:
        return self.k1 == 0.0 and self.k2 == 0.0


@dataclass(frozen=True)
class Homography:
    """3x3 plane map with the axis system its world side lives in."""

    h: np.ndarray
    axis_system: str = "soccernet"

    def __post_init__(self):
        h = np.asarray(self.h, dtype=np.float64).reshape(3, 3)
        object.__setattr__(self, "h", h)
        if self.axis_system not in AXIS_SYSTEMS:
            raise ValueError(f"unknown axis system {self.axis_system!r}")
        norm = np.linalg.norm(h)
        if norm == 0.0 or abs(np.linalg.det(h / norm)) < 1e-12:
            raise ValueError("homography is singular")


def rotation_entries(pan, tilt, roll):
    """The nine entries of Rz(roll)@Rx(tilt)@Rz(pan), row major.

    Generic over floats, arrays, and Duals so that the same kernel serves the
    public API and the differentiable loss path.
    """
    sp, cp = dual.sin(pan), dual.cos(pan)
    st, ct = dual.sin(tilt), dual.cos(tilt)
    sr, cr = dual.sin(roll), dual.cos(roll)
    return (
        cr * cp - sr * ct * sp,
        -(cr * sp) - sr * ct * cp,
        sr * st,
        sr * cp + cr * ct * sp,
        -(sr * sp) + cr * ct * cp,
        -(cr * st),
        st * sp,
        st * cp,
        ct,
    )


def rotation_matrix(pan: float, tilt: float, roll: float) -> np.ndarray:
    """Orthonormal rotation composed as Rz(roll)@Rx(tilt)@Rz(pan)."""
    return np.array(rotation_entries(float(pan), float(tilt), float(roll))).reshape(3, 3)


def focal_ndc(fov: float, dims: ImageDims) -> tuple[float, float]:
    """NDC focal pair (fx, fy) for a horizontal angle of view."""
    if not 0.0 < fov < math.pi:
        raise ValueError(f"fov must lie in (0, pi), got {fov}")
    fx = 1.0 / math.tan(0.5 * fov)
    return fx, dims.aspect * fx


def focal_raster(fov: float, dims: ImageDims) -> float:
    """Focal length in pixels; identical for x and y under square pixels."""
    if not 0.0 < fov < math.pi:
        raise ValueError(f"fov must lie in (0, pi), got {fov}")
    return 0.5 * dims.width / math.tan(0.5 * fov)


def fov_from_focal(focal_px: float, dims: ImageDims) -> float:
    """Inverse of :func:`focal_raster`."""
    if focal_px <= 0:
        raise ValueError(f"focal length must be positive, got {focal_px}")
    return 2.0 * math.atan(0.5 * dims.width / focal_px)


def intrinsic_matrix(phi: CameraParams, dims: ImageDims) -> np.ndarray:
    f = focal_raster(phi.fov, dims)
    return np.array([[f, 0.0, dims.width / 2.0], [0.0, f, dims.height / 2.0], [0.0, 0.0, 1.0]])


def projection_matrix(phi: CameraParams, dims: ImageDims) -> np.ndarray:
    """Raster-pixel 3x4 projection K @ R @ [I | -t]."""
    rot = rotation_matrix(phi.pan, phi.tilt, phi.roll)
    ext = np.hstack([np.eye(3), -phi.position.reshape(3, 1)])
    return intrinsic_matrix(phi, dims) @ rot @ ext


def project(phi: CameraParams, points, dims: ImageDims) -> tuple[np.ndarray, np.ndarray]:
    """Project world points to NDC.

    Returns ``(ndc, valid)`` where ``valid`` tags points with positive depth;
    coordinates of invalid points are zeroed, and consumers are expected to
    mask them rather than trust them.
    """
    pts = np.asarray(points, dtype=np.float64)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    rot = rotation_matrix(phi.pan, phi.tilt, phi.roll)
    cam = (pts - phi.position) @ rot.T
    depth = cam[..., 2]
    valid = depth > MIN_DEPTH
    fx, fy = focal_ndc(phi.fov, dims)
    safe = np.where(valid, depth, 1.0)
    ndc = np.stack([fx * cam[..., 0] / safe, fy * cam[..., 1] / safe], axis=-1)
    ndc = np.where(valid[..., None], ndc, 0.0)
    if single:
        return ndc[0], bool(valid[0])
    return ndc, valid


def ndc_from_raster(points, dims: ImageDims) -> np.ndarray:
    p = np.asarray(points, dtype=np.float64)
    return np.stack([2.0 * p[..., 0] / dims.width - 1.0, 2.0 * p[..., 1] / dims.height - 1.0], axis=-1)


def raster_from_ndc(points, dims: ImageDims) -> np.ndarray:
    p = np.asarray(points, dtype=np.float64)
    return np.stack([(p[..., 0] + 1.0) * dims.width / 2.0, (p[..., 1] + 1.0) * dims.height / 2.0], axis=-1)


def homography_from_camera(phi: CameraParams, dims: ImageDims) -> Homography:
    """Columns 1, 2, 4 of the raster projection matrix: the z=0 plane map."""
    p = projection_matrix(phi, dims)
    return Homography(p[:, [0, 1, 3]], axis_system="soccernet")


def apply_homography(h: np.ndarray, points) -> np.ndarray:
    """Map 2-D points through a 3x3 homography and dehomogenize."""
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    hom = np.concatenate([pts, np.ones(pts.shape[:-1] + (1,))], axis=-1) @ np.asarray(h).T
    out = hom[..., :2] / hom[..., 2:3]
    return out[0] if np.asarray(points).ndim == 1 else out


def distort_kernel(k1, k2, x, y):
    """Radial forward model about the NDC origin; generic over Duals."""
    r2 = x * x + y * y
    scale = 1.0 + k1 * r2 + k2 * r2 * r2
    return x * scale, y * scale


def undistort_kernel(k1, k2, x, y, iterations: int = UNDISTORT_ITERATIONS):
    """Fixed-iteration Newton inverse of :func:`distort_kernel`.

    Solves r*(1 + k1 r^2 + k2 r^4) = r_d for the undistorted radius. The
    iteration count is fixed so the map stays smooth in (k1, k2, x, y).
    Returns (x_u, y_u, residual) where residual is the primal Newton defect,
    usable as a divergence signal.
    """
    rd = dual.sqrt(x * x + y * y)
    r = rd
    for _ in range(iterations):
        r2 = r * r
        g = r * (1.0 + k1 * r2 + k2 * r2 * r2) - rd
        gp = 1.0 + 3.0 * k1 * r2 + 5.0 * k2 * r2 * r2
        bad = np.abs(dual.value(gp)) <= 1e-12
        if np.any(bad):
            gp = dual.where(~bad, gp, 1.0)
        r = r - g / gp
    r2 = r * r
    scale = 1.0 + k1 * r2 + k2 * r2 * r2
    residual = np.abs(dual.value(r) * dual.value(scale) - dual.value(rd))
    return x / scale, y / scale, residual


def distort(psi: RadialDistortion, point) -> np.ndarray:
    """Apply radial distortion to NDC points."""
    p = np.asarray(point, dtype=np.float64)
    x, y = distort_kernel(psi.k1, psi.k2, p[..., 0], p[..., 1])
    return np.stack([x, y], axis=-1)


def undistort(psi: RadialDistortion, point, tolerance: float = 1e-8) -> np.ndarray:
    """Invert radial distortion; raises on divergent Newton iterations."""
    p = np.asarray(point, dtype=np.float64)
    x, y, residual = undistort_kernel(psi.k1, psi.k2, p[..., 0], p[..., 1])
    if np.any(residual > tolerance * np.maximum(1.0, np.abs(dual.value(x)))) or not np.all(
        np.isfinite(residual)
    ):
        raise InversionFailureError(
            f"undistort did not converge for k1={psi.k1}, k2={psi.k2} (max residual {np.max(residual):.3e})"
        )
    return np.stack([x, y], axis=-1)


# -- interchange --------------------------------------------------------------


def camera_to_json_dict(phi: CameraParams, psi: RadialDistortion, dims: ImageDims) -> dict:
    """Interchange schema; angles in degrees, focal lengths in raster pixels."""
    f = focal_raster(phi.fov, dims)
    return {
        "pan_degrees": math.degrees(phi.pan),
        "tilt_degrees": math.degrees(phi.tilt),
        "roll_degrees": math.degrees(phi.roll),
        "position_meters": [float(v) for v in phi.position],
        "x_focal_length": f,
        "y_focal_length": f,
        "principal_point": [dims.width / 2.0, dims.height / 2.0],
        "radial_distortion": [psi.k1, psi.k2],
    }


def camera_from_json_dict(data: dict, dims: ImageDims | None = None) -> tuple[CameraParams, RadialDistortion, ImageDims]:
    if dims is None:
        cx, cy = data["principal_point"]
        dims = ImageDims(width=round(2 * cx), height=round(2 * cy))
    phi = CameraParams(
        fov=fov_from_focal(float(data["x_focal_length"]), dims),
        pan=math.radians(float(data["pan_degrees"])),
        tilt=math.radians(float(data["tilt_degrees"])),
        roll=math.radians(float(data["roll_degrees"])),
        position=np.asarray(data["position_meters"], dtype=np.float64),
    )
    rd = list(data.get("radial_distortion", [0.0, 0.0])) + [0.0, 0.0]
    psi = RadialDistortion(k1=float(rd[0]), k2=float(rd[1]))
    return phi, psi, dims
