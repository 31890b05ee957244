"""The calibration object: labeled 3-D segment primitives and the parametric
soccer pitch instance following the SoccerNet-Calibration segment taxonomy.

Pitch geometry: origin at the field center, x toward the right goal, y toward
the bottom side line, markings on z = 0, goal posts rising to positive z.
Feature dimensions (penalty boxes, circles, goals) scale with
``min(length/105, width/68)`` so the standard 105x68 pitch carries exact
IFAB dimensions and every segment stays inside the field box for any
positive dimensions.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

# Standard feature dimensions on a 105x68 pitch (meters).
GOAL_LINE_TO_PENALTY_MARK = 11.0
PENALTY_AREA_WIDTH = 40.32
PENALTY_AREA_LENGTH = 16.5
GOAL_AREA_WIDTH = 18.32
GOAL_AREA_LENGTH = 5.5
CENTER_CIRCLE_RADIUS = 9.15
GOAL_HEIGHT = 2.44
GOAL_WIDTH = 7.32

STANDARD_LENGTH = 105.0
STANDARD_WIDTH = 68.0

# Fitted middle line must lean less than this from the image y-axis to split
# the central circle; otherwise the safe unsplit fallback applies.
SPLIT_MAX_ANGLE_DEG = 25.0

# SoccerNet labels that carry no geometry; loaders accept and drop them.
KNOWN_UNMODELED_LABELS = ("Goal unknown", "Line unknown")


class SegmentCategory(str, enum.Enum):
    POINT = "point"
    LINE = "line"
    POINT_CLOUD = "point_cloud"


@dataclass(frozen=True)
class SegmentLabel:
    name: str
    category: SegmentCategory


@dataclass(frozen=True)
class LineSegment3D:
    """Straight segment between two world points (meters)."""

    x0: np.ndarray
    x1: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x0", np.asarray(self.x0, dtype=np.float64).reshape(3))
        object.__setattr__(self, "x1", np.asarray(self.x1, dtype=np.float64).reshape(3))
        if np.array_equal(self.x0, self.x1):
            raise ValueError("line segment endpoints coincide")

    @property
    def length(self) -> float:
        return float(np.linalg.norm(self.x1 - self.x0))

    def sample(self, n: int) -> np.ndarray:
        t = np.linspace(0.0, 1.0, n)[:, None]
        return self.x0[None, :] * (1.0 - t) + self.x1[None, :] * t


@dataclass(frozen=True)
class CircularArc:
    """Analytic generator for circle/arc point clouds on the z = 0 plane.

    ``include_end`` distinguishes open arcs (both endpoints sampled) from
    half-open spans used for full circles and circle halves, whose sample
    lattices must tile without duplication.
    """

    center_x: float
    center_y: float
    radius: float
    theta0: float
    theta1: float
    include_end: bool = True

    def sample(self, n: int) -> np.ndarray:
        if self.include_end:
            t = np.linspace(self.theta0, self.theta1, n)
        else:
            t = self.theta0 + (self.theta1 - self.theta0) * np.arange(n) / n
        return np.stack(
            [
                self.center_x + self.radius * np.cos(t),
                self.center_y + self.radius * np.sin(t),
                np.zeros(n),
            ],
            axis=-1,
        )

    def radial_residual(self, points) -> np.ndarray:
        p = np.asarray(points, dtype=np.float64)
        return np.abs(np.hypot(p[..., 0] - self.center_x, p[..., 1] - self.center_y) - self.radius)

    @property
    def arc_length(self) -> float:
        return abs(self.theta1 - self.theta0) * self.radius


@dataclass(frozen=True)
class PointCloudSegment3D:
    """Sampled curve; keeps the analytic generator when one exists so any
    sample count can be produced lazily."""

    points: Optional[np.ndarray] = None
    generator: Optional[CircularArc] = None

    def __post_init__(self):
        if self.points is None and self.generator is None:
            raise ValueError("point cloud needs stored points or a generator")
        if self.points is not None:
            pts = np.asarray(self.points, dtype=np.float64).reshape(-1, 3)
            if pts.shape[0] < 2:
                raise ValueError("point cloud needs at least 2 points")
            object.__setattr__(self, "points", pts)
            if self.generator is not None and np.any(self.generator.radial_residual(pts) > 1e-9):
                raise ValueError("stored points do not lie on the generator curve")


@dataclass(frozen=True)
class PointSegment3D:
    x: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, dtype=np.float64).reshape(3))
        if not np.all(np.isfinite(self.x)):
            raise ValueError("point segment must be finite")


Segment = Union[LineSegment3D, PointCloudSegment3D, PointSegment3D]


class CalibrationObject:
    """Ordered, immutable map from segment labels to 3-D segments."""

    def __init__(self, segments: dict[SegmentLabel, Segment], field_length: float, field_width: float):
        names = [label.name for label in segments]
        if len(set(names)) != len(names):
            raise ValueError("segment names must be unique")
        self._segments = dict(segments)
        self._by_name = {label.name: label for label in segments}
        self.field_length = float(field_length)
        self.field_width = float(field_width)

    @property
    def segments(self) -> dict[SegmentLabel, Segment]:
        return dict(self._segments)

    def labels(self, category: SegmentCategory | None = None) -> list[SegmentLabel]:
        if category is None:
            return list(self._segments)
        return [label for label in self._segments if label.category == category]

    def names(self, category: SegmentCategory | None = None) -> list[str]:
        return [label.name for label in self.labels(category)]

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def label(self, name: str) -> SegmentLabel:
        return self._by_name[name]

    def segment(self, name: str) -> Segment:
        return self._segments[self._by_name[name]]


def _line(p0, p1) -> LineSegment3D:
    return LineSegment3D(np.asarray(p0, dtype=np.float64), np.asarray(p1, dtype=np.float64))


def build_soccer_field(length: float = STANDARD_LENGTH, width: float = STANDARD_WIDTH) -> CalibrationObject:
    """Full SoccerNet segment set: 23 line segments (markings, goal frames)
    and 5 circle point clouds (central circle, its left/right halves, two
    penalty arcs)."""
    if length <= 0 or width <= 0:
        raise ValueError(f"field dimensions must be positive, got {length}x{width}")
    s = min(length / STANDARD_LENGTH, width / STANDARD_WIDTH)
    half_l = length / 2.0
    half_w = width / 2.0
    pa_l = PENALTY_AREA_LENGTH * s
    pa_w2 = PENALTY_AREA_WIDTH * s / 2.0
    ga_l = GOAL_AREA_LENGTH * s
    ga_w2 = GOAL_AREA_WIDTH * s / 2.0
    goal_w2 = GOAL_WIDTH * s / 2.0
    goal_h = GOAL_HEIGHT * s
    radius = CENTER_CIRCLE_RADIUS * s
    penalty_x = GOAL_LINE_TO_PENALTY_MARK * s

    lines = {
        "Side line top": ((-half_l, -half_w, 0), (half_l, -half_w, 0)),
        "Side line bottom": ((-half_l, half_w, 0), (half_l, half_w, 0)),
        "Side line left": ((-half_l, -half_w, 0), (-half_l, half_w, 0)),
        "Side line right": ((half_l, -half_w, 0), (half_l, half_w, 0)),
        "Middle line": ((0, -half_w, 0), (0, half_w, 0)),
        "Big rect. left top": ((-half_l, -pa_w2, 0), (-half_l + pa_l, -pa_w2, 0)),
        "Big rect. left main": ((-half_l + pa_l, -pa_w2, 0), (-half_l + pa_l, pa_w2, 0)),
        "Big rect. left bottom": ((-half_l, pa_w2, 0), (-half_l + pa_l, pa_w2, 0)),
        "Big rect. right top": ((half_l - pa_l, -pa_w2, 0), (half_l, -pa_w2, 0)),
        "Big rect. right main": ((half_l - pa_l, -pa_w2, 0), (half_l - pa_l, pa_w2, 0)),
        "Big rect. right bottom": ((half_l - pa_l, pa_w2, 0), (half_l, pa_w2, 0)),
        "Small rect. left top": ((-half_l, -ga_w2, 0), (-half_l + ga_l, -ga_w2, 0)),
        "Small rect. left main": ((-half_l + ga_l, -ga_w2, 0), (-half_l + ga_l, ga_w2, 0)),
        "Small rect. left bottom": ((-half_l, ga_w2, 0), (-half_l + ga_l, ga_w2, 0)),
        "Small rect. right top": ((half_l - ga_l, -ga_w2, 0), (half_l, -ga_w2, 0)),
        "Small rect. right main": ((half_l - ga_l, -ga_w2, 0), (half_l - ga_l, ga_w2, 0)),
        "Small rect. right bottom": ((half_l - ga_l, ga_w2, 0), (half_l, ga_w2, 0)),
        "Goal left crossbar": ((-half_l, -goal_w2, goal_h), (-half_l, goal_w2, goal_h)),
        "Goal left post left ": ((-half_l, goal_w2, goal_h), (-half_l, goal_w2, 0)),
        "Goal left post right": ((-half_l, -goal_w2, goal_h), (-half_l, -goal_w2, 0)),
        "Goal right crossbar": ((half_l, -goal_w2, goal_h), (half_l, goal_w2, goal_h)),
        "Goal right post left": ((half_l, -goal_w2, goal_h), (half_l, -goal_w2, 0)),
        "Goal right post right": ((half_l, goal_w2, goal_h), (half_l, goal_w2, 0)),
    }

    # Penalty arcs span the part of the 9.15 m circle beyond the penalty box;
    # the endpoint window depends on fixed ratios only.
    alpha = math.acos((PENALTY_AREA_LENGTH - GOAL_LINE_TO_PENALTY_MARK) / CENTER_CIRCLE_RADIUS)
    arcs = {
        "Circle central": CircularArc(0.0, 0.0, radius, math.pi / 2, math.pi / 2 + 2 * math.pi, include_end=False),
        "Circle central left": CircularArc(0.0, 0.0, radius, math.pi / 2, 3 * math.pi / 2, include_end=False),
        "Circle central right": CircularArc(0.0, 0.0, radius, 3 * math.pi / 2, 5 * math.pi / 2, include_end=False),
        "Circle left": CircularArc(-half_l + penalty_x, 0.0, radius, -alpha, alpha, include_end=True),
        "Circle right": CircularArc(half_l - penalty_x, 0.0, radius, math.pi + alpha, math.pi - alpha, include_end=True),
    }

    segments: dict[SegmentLabel, Segment] = {}
    for name, (p0, p1) in lines.items():
        segments[SegmentLabel(name, SegmentCategory.LINE)] = _line(p0, p1)
    for name, arc in arcs.items():
        segments[SegmentLabel(name, SegmentCategory.POINT_CLOUD)] = PointCloudSegment3D(generator=arc)
    return CalibrationObject(segments, field_length=length, field_width=width)


def sample_point_cloud(seg: PointCloudSegment3D, n: int) -> np.ndarray:
    """n points uniformly spaced by arc length along the generator, or a
    uniform subsample of the stored points."""
    if n < 2:
        raise ValueError(f"need at least 2 samples, got {n}")
    if seg.generator is not None:
        return seg.generator.sample(n)
    stored = seg.points
    if stored.shape[0] < n:
        raise ValueError(f"cannot draw {n} samples from {stored.shape[0]} stored points")
    idx = np.round(np.linspace(0, stored.shape[0] - 1, n)).astype(int)
    return stored[idx]


def split_central_circle(annotated_points, middle_line_pixels) -> tuple[np.ndarray, np.ndarray]:
    """Assign circle pixels to the left/right of the fitted middle line.

    Falls back to two empty outputs (circle stays unsplit) when the middle
    line is missing, collapsed, or leans more than SPLIT_MAX_ANGLE_DEG from
    the image y-axis.
    """
    circle = np.asarray(annotated_points, dtype=np.float64).reshape(-1, 2)
    middle = np.asarray(middle_line_pixels, dtype=np.float64).reshape(-1, 2)
    empty = (np.empty((0, 2)), np.empty((0, 2)))
    if middle.shape[0] < 2 or circle.shape[0] == 0:
        return empty
    anchor = middle.mean(axis=0)
    centered = middle - anchor
    _, sv, vt = np.linalg.svd(centered, full_matrices=False)
    if sv[0] <= 1e-12:
        return empty
    direction = vt[0]
    angle = math.degrees(math.atan2(abs(direction[0]), abs(direction[1])))
    if angle >= SPLIT_MAX_ANGLE_DEG:
        return empty
    if direction[1] < 0:
        direction = -direction
    normal = np.array([direction[1], -direction[0]])  # points toward image +x
    side = (circle - anchor) @ normal
    return circle[side < 0.0], circle[side >= 0.0]


def field_template_json(obj: CalibrationObject) -> dict:
    """Serializable description of every segment for downstream consumers."""
    entries = []
    for label, seg in obj.segments.items():
        entry: dict = {"name": label.name, "category": label.category.value}
        if isinstance(seg, LineSegment3D):
            entry["endpoints"] = [seg.x0.tolist(), seg.x1.tolist()]
        elif isinstance(seg, PointCloudSegment3D):
            if seg.generator is not None:
                g = seg.generator
                entry["generator"] = {
                    "center": [g.center_x, g.center_y],
                    "radius": g.radius,
                    "theta0": g.theta0,
                    "theta1": g.theta1,
                    "include_end": g.include_end,
                }
            else:
                entry["points"] = seg.points.tolist()
        else:
            entry["point"] = seg.x.tolist()
        entries.append(entry)
    return {
        "field_length": obj.field_length,
        "field_width": obj.field_width,
        "segments": entries,
    }
