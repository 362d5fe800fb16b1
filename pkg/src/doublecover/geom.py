"""Planar primitives: points, unit discs, circular arcs and segment/arc paths.

Everything in this module is an immutable value and every operation is a pure
function, so instances can be shared freely between threads.

Conventions used throughout the package:

* membership and incidence predicates take an explicit tolerance
  (default ``TOL = 1e-9``); discs are closed, so membership means
  ``distance <= radius + tol``,
* angles are normalized to ``(-pi, pi]`` when an arc is constructed,
* intersection discriminants within ``TANGENCY_EPS = 1e-12`` of zero are
  rounded to exact tangency so that envelope breakpoints stay stable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

TOL = 1e-9
TANGENCY_EPS = 1e-12
CHAIN_TOL = 1e-9

TWO_PI = 2.0 * math.pi


class GeometryError(ValueError):
    """Invalid geometric input."""


class DegenerateIntersectionError(GeometryError):
    """Intersection with infinitely many solutions (coincident circles)."""


class BrokenPathError(GeometryError):
    """Path pieces do not chain end-to-start."""


def normalize_angle(a: float) -> float:
    """Map an angle to the interval (-pi, pi]."""
    r = math.remainder(a, TWO_PI)
    if r <= -math.pi:
        r += TWO_PI
    return r


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise GeometryError(f"non-finite point ({self.x}, {self.y})")

    def distance_to(self, other: "Point") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class Disc:
    """Closed disc. Covering families use radius 1; the bound machinery also
    builds smaller discs (chord-diameter normalization), so radius stays a field."""

    center: Point
    radius: float

    def __post_init__(self):
        if not (math.isfinite(self.radius) and self.radius > 0.0):
            raise GeometryError(f"disc radius must be positive, got {self.radius}")

    def contains(self, p: Point, tol: float = TOL) -> bool:
        return self.center.distance_to(p) <= self.radius + tol

    def boundary_point(self, angle: float) -> Point:
        return Point(
            self.center.x + self.radius * math.cos(angle),
            self.center.y + self.radius * math.sin(angle),
        )


class Side(Enum):
    ABOVE = "above"
    BELOW = "below"

    def opposite(self) -> "Side":
        return Side.BELOW if self is Side.ABOVE else Side.ABOVE


class Orientation(Enum):
    CCW = "ccw"
    CW = "cw"


@dataclass(frozen=True)
class Segment:
    start: Point
    end: Point

    def length(self) -> float:
        return self.start.distance_to(self.end)

    def point_at(self, s: float) -> Point:
        """Point at arc length ``s`` from the start (clamped to the segment)."""
        total = self.length()
        if total == 0.0:
            return self.start
        t = min(max(s / total, 0.0), 1.0)
        return Point(
            self.start.x + t * (self.end.x - self.start.x),
            self.start.y + t * (self.end.y - self.start.y),
        )

    def transformed(self, cos_a: float, sin_a: float, dx: float, dy: float) -> "Segment":
        return Segment(
            _rotate_translate(self.start, cos_a, sin_a, dx, dy),
            _rotate_translate(self.end, cos_a, sin_a, dx, dy),
        )

    def mirrored_y(self) -> "Segment":
        return Segment(Point(self.start.x, -self.start.y), Point(self.end.x, -self.end.y))


@dataclass(frozen=True)
class ArcPiece:
    """Circular arc from ``start_angle`` to ``end_angle`` in the given
    orientation. Angles are stored normalized to (-pi, pi]; the sweep is
    implied by the orientation and lies in (0, 2*pi] (equal angles mean a
    full circle)."""

    disc: Disc
    start_angle: float
    end_angle: float
    orientation: Orientation

    def __post_init__(self):
        object.__setattr__(self, "start_angle", normalize_angle(self.start_angle))
        object.__setattr__(self, "end_angle", normalize_angle(self.end_angle))

    @property
    def sweep(self) -> float:
        if self.orientation is Orientation.CCW:
            d = (self.end_angle - self.start_angle) % TWO_PI
        else:
            d = (self.start_angle - self.end_angle) % TWO_PI
        return d if d > 0.0 else TWO_PI

    def length(self) -> float:
        return self.disc.radius * self.sweep

    @property
    def start(self) -> Point:
        return self.disc.boundary_point(self.start_angle)

    @property
    def end(self) -> Point:
        return self.disc.boundary_point(self.end_angle)

    def angle_at(self, s: float) -> float:
        total = self.length()
        frac = 0.0 if total == 0.0 else min(max(s / total, 0.0), 1.0)
        delta = self.sweep * frac
        if self.orientation is Orientation.CW:
            delta = -delta
        return self.start_angle + delta

    def point_at(self, s: float) -> Point:
        return self.disc.boundary_point(self.angle_at(s))

    def transformed(self, cos_a: float, sin_a: float, dx: float, dy: float) -> "ArcPiece":
        theta = math.atan2(sin_a, cos_a)
        return ArcPiece(
            Disc(_rotate_translate(self.disc.center, cos_a, sin_a, dx, dy), self.disc.radius),
            self.start_angle + theta,
            self.end_angle + theta,
            self.orientation,
        )

    def mirrored_y(self) -> "ArcPiece":
        c = self.disc.center
        flipped = Orientation.CW if self.orientation is Orientation.CCW else Orientation.CCW
        return ArcPiece(
            Disc(Point(c.x, -c.y), self.disc.radius),
            -self.start_angle,
            -self.end_angle,
            flipped,
        )


Piece = Segment | ArcPiece


def _rotate_translate(p: Point, cos_a: float, sin_a: float, dx: float, dy: float) -> Point:
    return Point(cos_a * p.x - sin_a * p.y + dx, sin_a * p.x + cos_a * p.y + dy)


@dataclass(frozen=True)
class PathCurve:
    """Chain of segments and arcs. Consecutive pieces must meet within
    ``CHAIN_TOL``; an empty path is allowed and has length 0."""

    pieces: tuple[Piece, ...]

    def __init__(self, pieces=()):
        object.__setattr__(self, "pieces", tuple(pieces))
        prev = None
        for k, piece in enumerate(self.pieces):
            cur = piece.start if isinstance(piece, ArcPiece) else piece.start
            if prev is not None and prev.distance_to(cur) > CHAIN_TOL:
                raise BrokenPathError(
                    f"piece {k} starts at ({cur.x}, {cur.y}) but the previous piece "
                    f"ends at ({prev.x}, {prev.y})"
                )
            prev = piece.end if isinstance(piece, ArcPiece) else piece.end

    def __iter__(self):
        return iter(self.pieces)

    def __len__(self):
        return len(self.pieces)

    @property
    def start(self) -> Point | None:
        if not self.pieces:
            return None
        first = self.pieces[0]
        return first.start

    @property
    def end(self) -> Point | None:
        if not self.pieces:
            return None
        last = self.pieces[-1]
        return last.end

    def length(self) -> float:
        return sum(p.length() for p in self.pieces)

    def concatenated(self, other: "PathCurve") -> "PathCurve":
        return PathCurve(self.pieces + other.pieces)

    def reversed(self) -> "PathCurve":
        out = []
        for piece in reversed(self.pieces):
            if isinstance(piece, Segment):
                out.append(Segment(piece.end, piece.start))
            else:
                flipped = (
                    Orientation.CW
                    if piece.orientation is Orientation.CCW
                    else Orientation.CCW
                )
                out.append(ArcPiece(piece.disc, piece.end_angle, piece.start_angle, flipped))
        return PathCurve(out)

    def transformed(self, cos_a: float, sin_a: float, dx: float, dy: float) -> "PathCurve":
        return PathCurve(p.transformed(cos_a, sin_a, dx, dy) for p in self.pieces)

    def sample_points(self, spacing: float) -> list[Point]:
        """Sample every piece at arc-length pitch <= spacing, endpoints included."""
        if spacing <= 0.0:
            raise GeometryError("sampling pitch must be positive")
        pts: list[Point] = []
        for piece in self.pieces:
            total = piece.length()
            n = max(1, math.ceil(total / spacing))
            for i in range(n + 1):
                pts.append(piece.point_at(total * i / n))
        return pts


def path_length(p: PathCurve) -> float:
    """Exact length: segment lengths plus radius * sweep for each arc."""
    return p.length()


def circle_horizontal_line_intersections(d: Disc, y0: float) -> list[Point]:
    """Intersections of the circle with the line y = y0, sorted by x.

    Near-tangency (discriminant within ``TANGENCY_EPS``) snaps to a single
    tangency point; a line missing the disc yields an empty list.
    """
    dy = y0 - d.center.y
    disc = d.radius * d.radius - dy * dy
    if abs(disc) <= TANGENCY_EPS:
        return [Point(d.center.x, y0)]
    if disc < 0.0:
        return []
    half = math.sqrt(disc)
    return [Point(d.center.x - half, y0), Point(d.center.x + half, y0)]


def circle_circle_intersections(d1: Disc, d2: Disc) -> list[Point]:
    """Common boundary points of two circles, ordered by (y, x) increasing.

    Raises ``DegenerateIntersectionError`` for coincident circles (infinitely
    many solutions); concentric circles of different radii simply miss.
    """
    dx = d2.center.x - d1.center.x
    dy = d2.center.y - d1.center.y
    dist = math.hypot(dx, dy)
    if dist <= TANGENCY_EPS:
        if abs(d1.radius - d2.radius) <= TANGENCY_EPS:
            raise DegenerateIntersectionError("coincident circles intersect everywhere")
        return []
    a = (dist * dist + d1.radius * d1.radius - d2.radius * d2.radius) / (2.0 * dist)
    h2 = d1.radius * d1.radius - a * a
    ux, uy = dx / dist, dy / dist
    mx = d1.center.x + a * ux
    my = d1.center.y + a * uy
    if abs(h2) <= TANGENCY_EPS:
        return [Point(mx, my)]
    if h2 < 0.0:
        return []
    h = math.sqrt(h2)
    p1 = Point(mx - h * uy, my + h * ux)
    p2 = Point(mx + h * uy, my - h * ux)
    return sorted([p1, p2], key=lambda p: (p.y, p.x))


def upper_arc_height(d: Disc, x: float) -> float | None:
    """y-coordinate of the topmost boundary point of ``d`` above abscissa ``x``,
    or None when ``x`` falls outside the disc's horizontal span."""
    dx = x - d.center.x
    if abs(dx) > d.radius:
        return None
    return d.center.y + math.sqrt(max(0.0, d.radius * d.radius - dx * dx))
