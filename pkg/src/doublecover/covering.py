"""Finite families of unit discs over a bounding box.

The plane covering of the problem statement is modeled as a finite family
clipped to a box; every guarantee is asserted inside the box shrunk by a
2-unit margin, where truncation effects cannot reach. Coverage-count queries
go through a spatial hash (cell size 1.0, so a point query touches at most
9 cells); dense grid classification is done by rasterizing one disc at a
time into a count array.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass

import numpy as np

from .geom import TOL, Disc, PathCurve, Point

log = logging.getLogger(__name__)

UNIT_RADIUS = 1.0
DEFAULT_CELL_SIZE = 1.0
DEFAULT_VERIFY_STEP = 0.05
DEFAULT_PATH_SPACING = 0.01
BOX_MARGIN = 2.0

BBox = tuple[float, float, float, float]


class CoveringError(ValueError):
    """Invalid covering data."""


class GenerationFailed(RuntimeError):
    """A randomized generator exhausted its retries without producing a covering."""


@dataclass(frozen=True)
class CoverageReport:
    """Result of a sampled coverage check. ``passed`` means every sample met
    the multiplicity required by the check that produced the report."""

    min_count: int
    worst_point: Point
    samples_checked: int
    passed: bool

    def to_json_dict(self) -> dict:
        return {
            "min_count": self.min_count,
            "worst_point": [self.worst_point.x, self.worst_point.y],
            "samples_checked": self.samples_checked,
            "pass": self.passed,
        }


class Covering:
    """Indexed family of unit discs with a spatial hash for point queries.

    Immutable after construction; all query methods are pure.
    """

    def __init__(self, discs, bbox: BBox, cell_size: float = DEFAULT_CELL_SIZE):
        discs = list(discs)
        if not discs:
            raise CoveringError("a covering needs at least one disc")
        if cell_size <= 0.0:
            raise CoveringError("cell size must be positive")
        xmin, ymin, xmax, ymax = (float(v) for v in bbox)
        if not all(map(math.isfinite, (xmin, ymin, xmax, ymax))) or xmin >= xmax or ymin >= ymax:
            raise CoveringError(f"invalid bbox {bbox}")
        for i, d in enumerate(discs):
            if d.radius != UNIT_RADIUS:
                raise CoveringError(f"disc {i} has radius {d.radius}, expected 1.0")
            c = d.center
            if not (
                xmin - BOX_MARGIN <= c.x <= xmax + BOX_MARGIN
                and ymin - BOX_MARGIN <= c.y <= ymax + BOX_MARGIN
            ):
                raise CoveringError(
                    f"disc {i} center ({c.x}, {c.y}) outside bbox expanded by {BOX_MARGIN}"
                )
        self.discs: tuple[Disc, ...] = tuple(discs)
        self.bbox: BBox = (xmin, ymin, xmax, ymax)
        self.cell_size = float(cell_size)
        self._centers = np.array([[d.center.x, d.center.y] for d in discs], dtype=np.float64)
        self._cells: dict[tuple[int, int], list[int]] = {}
        cs = self.cell_size
        for i, d in enumerate(discs):
            r = d.radius
            ix0 = math.floor((d.center.x - r) / cs)
            ix1 = math.floor((d.center.x + r) / cs)
            iy0 = math.floor((d.center.y - r) / cs)
            iy1 = math.floor((d.center.y + r) / cs)
            for ix in range(ix0, ix1 + 1):
                for iy in range(iy0, iy1 + 1):
                    self._cells.setdefault((ix, iy), []).append(i)

    def __len__(self):
        return len(self.discs)

    def candidate_indices(self, p: Point, tol: float = TOL) -> list[int]:
        """Indices of discs registered in the hash cells within reach of ``p``."""
        cs = self.cell_size
        reach = UNIT_RADIUS + tol
        ix0 = math.floor((p.x - reach) / cs)
        ix1 = math.floor((p.x + reach) / cs)
        iy0 = math.floor((p.y - reach) / cs)
        iy1 = math.floor((p.y + reach) / cs)
        seen: set[int] = set()
        for ix in range(ix0, ix1 + 1):
            for iy in range(iy0, iy1 + 1):
                bucket = self._cells.get((ix, iy))
                if bucket:
                    seen.update(bucket)
        return sorted(seen)

    def coverage_count(self, p: Point, tol: float = TOL) -> int:
        """Number of discs containing ``p`` (closed discs: distance <= 1 + tol)."""
        reach = UNIT_RADIUS + tol
        n = 0
        for i in self.candidate_indices(p, tol):
            cx, cy = self._centers[i]
            if math.hypot(p.x - cx, p.y - cy) <= reach:
                n += 1
        return n

    def coverage_count_brute(self, p: Point, tol: float = TOL) -> int:
        """Reference count over all discs, bypassing the spatial hash."""
        reach = UNIT_RADIUS + tol
        d2 = (self._centers[:, 0] - p.x) ** 2 + (self._centers[:, 1] - p.y) ** 2
        return int(np.count_nonzero(d2 <= reach * reach))

    def count_grid(
        self, origin: tuple[float, float], pitch: float, nx: int, ny: int, tol: float = TOL
    ) -> np.ndarray:
        """Coverage counts on the grid origin + (i, j) * pitch, shape (nx, ny).

        Rasterizes one disc at a time; equivalent to coverage_count at every
        node but vectorized for dense grids.
        """
        if pitch <= 0.0 or nx <= 0 or ny <= 0:
            raise CoveringError("count_grid needs positive pitch and dimensions")
        ox, oy = origin
        reach = UNIT_RADIUS + tol
        r2 = reach * reach
        counts = np.zeros((nx, ny), dtype=np.uint16)
        for cx, cy in self._centers:
            i0 = max(0, math.ceil((cx - reach - ox) / pitch))
            i1 = min(nx - 1, math.floor((cx + reach - ox) / pitch))
            j0 = max(0, math.ceil((cy - reach - oy) / pitch))
            j1 = min(ny - 1, math.floor((cy + reach - oy) / pitch))
            if i0 > i1 or j0 > j1:
                continue
            dx = ox + np.arange(i0, i1 + 1) * pitch - cx
            dy = oy + np.arange(j0, j1 + 1) * pitch - cy
            inside = dx[:, None] ** 2 + dy[None, :] ** 2 <= r2
            counts[i0 : i1 + 1, j0 : j1 + 1] += inside
        return counts


def _sample_axis(lo: float, hi: float, step: float) -> np.ndarray:
    if lo > hi:
        mid = 0.5 * (lo + hi)
        return np.array([mid])
    n = int(math.floor((hi - lo) / step + 1e-12))
    return lo + np.arange(n + 1) * step


def verify_covering(c: Covering, step: float = DEFAULT_VERIFY_STEP) -> CoverageReport:
    """Check that the family covers the bbox shrunk inward by the 2-unit margin.

    Samples a grid of pitch ``step``; passes iff every sample lies in at
    least one disc. The report carries the worst (least covered) sample.
    """
    if step <= 0.0:
        raise CoveringError("step must be positive")
    xmin, ymin, xmax, ymax = c.bbox
    xs = _sample_axis(xmin + BOX_MARGIN, xmax - BOX_MARGIN, step)
    ys = _sample_axis(ymin + BOX_MARGIN, ymax - BOX_MARGIN, step)
    counts = c.count_grid((xs[0], ys[0]), step, len(xs), len(ys), tol=TOL)
    # _sample_axis guarantees at least one sample per axis, so counts is nonempty
    flat = int(np.argmin(counts))
    i, j = divmod(flat, counts.shape[1])
    min_count = int(counts[i, j])
    worst = Point(xs[0] + i * step, ys[0] + j * step)
    return CoverageReport(min_count, worst, counts.size, min_count >= 1)


def verify_doubly_covered_path(
    c: Covering,
    path: PathCurve,
    spacing: float = DEFAULT_PATH_SPACING,
    tol: float = 1e-6,
) -> CoverageReport:
    """Sample the path at arc-length pitch <= spacing (piece endpoints
    included) and require coverage count >= 2 everywhere."""
    pts = path.sample_points(spacing)
    if not pts:
        raise CoveringError("cannot verify an empty path")
    min_count = None
    worst = pts[0]
    for p in pts:
        n = c.coverage_count(p, tol)
        if min_count is None or n < min_count:
            min_count = n
            worst = p
    return CoverageReport(min_count, worst, len(pts), min_count >= 2)


def gen_square_lattice(spacing: float, bbox: BBox) -> Covering:
    """Square lattice of unit discs at pitch ``spacing``, keeping every disc
    that intersects the bbox. Spacing sqrt(2) is the thinnest lattice that
    still covers; larger spacings are allowed but logged."""
    if spacing <= 0.0:
        raise CoveringError("spacing must be positive")
    if spacing > math.sqrt(2.0) + 1e-12:
        log.warning("lattice spacing %g exceeds sqrt(2); the result is not a covering", spacing)
    xmin, ymin, xmax, ymax = bbox
    i0 = math.ceil((xmin - UNIT_RADIUS) / spacing)
    i1 = math.floor((xmax + UNIT_RADIUS) / spacing)
    j0 = math.ceil((ymin - UNIT_RADIUS) / spacing)
    j1 = math.floor((ymax + UNIT_RADIUS) / spacing)
    discs = [
        Disc(Point(i * spacing, j * spacing), UNIT_RADIUS)
        for i in range(i0, i1 + 1)
        for j in range(j0, j1 + 1)
    ]
    return Covering(discs, bbox)


def gen_perturbed_lattice(
    spacing: float,
    jitter: float,
    seed: int,
    bbox: BBox,
    retries: int = 8,
    verify_step: float = DEFAULT_VERIFY_STEP,
) -> Covering:
    """Lattice with centers displaced uniformly in a disc of radius ``jitter``.

    Deterministic in ``seed``. If the perturbed family fails verify_covering,
    the jitter is halved and the attempt re-rolled (fresh sub-seed), at most
    ``retries`` times before GenerationFailed.
    """
    if jitter < 0.0:
        raise CoveringError("jitter must be non-negative")
    base = gen_square_lattice(spacing, bbox)
    n = len(base)
    for attempt in range(retries + 1):
        j = jitter * (0.5**attempt)
        rng = np.random.default_rng([seed, attempt])
        theta = rng.uniform(0.0, 2.0 * math.pi, n)
        rad = j * np.sqrt(rng.uniform(0.0, 1.0, n))
        discs = [
            Disc(Point(d.center.x + r * math.cos(t), d.center.y + r * math.sin(t)), UNIT_RADIUS)
            for d, r, t in zip(base.discs, rad, theta)
        ]
        cov = Covering(discs, bbox)
        if verify_covering(cov, verify_step).passed:
            return cov
    raise GenerationFailed(
        f"no covering after {retries + 1} attempts (spacing {spacing}, jitter {jitter})"
    )


def gen_random(
    density: float,
    seed: int,
    bbox: BBox,
    retries: int = 8,
    verify_step: float = DEFAULT_VERIFY_STEP,
) -> Covering:
    """Uniform random centers at the given expected density (discs per unit
    area), re-rolled with 30% more discs until verify_covering passes."""
    if density <= 0.0:
        raise CoveringError("density must be positive")
    xmin, ymin, xmax, ymax = bbox
    w = xmax - xmin + 2.0 * UNIT_RADIUS
    h = ymax - ymin + 2.0 * UNIT_RADIUS
    for attempt in range(retries + 1):
        lam = density * (1.3**attempt)
        n = max(1, math.ceil(lam * w * h))
        rng = np.random.default_rng([seed, attempt])
        xs = rng.uniform(xmin - UNIT_RADIUS, xmax + UNIT_RADIUS, n)
        ys = rng.uniform(ymin - UNIT_RADIUS, ymax + UNIT_RADIUS, n)
        cov = Covering([Disc(Point(x, y), UNIT_RADIUS) for x, y in zip(xs, ys)], bbox)
        if verify_covering(cov, verify_step).passed:
            return cov
    raise GenerationFailed(f"no covering after {retries + 1} attempts (density {density})")


def to_json_dict(c: Covering) -> dict:
    return {
        "radius": UNIT_RADIUS,
        "discs": [[d.center.x, d.center.y] for d in c.discs],
        "bbox": list(c.bbox),
    }


def from_json_dict(data: dict) -> Covering:
    try:
        radius = data["radius"]
        discs = data["discs"]
        bbox = data["bbox"]
    except (KeyError, TypeError) as exc:
        raise CoveringError(f"malformed covering JSON: missing {exc}") from exc
    if radius != UNIT_RADIUS:
        raise CoveringError(f"covering files must use radius 1.0, got {radius}")
    if not isinstance(discs, list) or len(discs) < 1:
        raise CoveringError("covering files need at least one disc")
    if not isinstance(bbox, list) or len(bbox) != 4:
        raise CoveringError("bbox must be [xmin, ymin, xmax, ymax]")
    centers = []
    for k, entry in enumerate(discs):
        if not isinstance(entry, list) or len(entry) != 2:
            raise CoveringError(f"disc {k} must be an [x, y] pair")
        x, y = float(entry[0]), float(entry[1])
        if not (math.isfinite(x) and math.isfinite(y)):
            raise CoveringError(f"disc {k} has non-finite coordinates")
        centers.append(Point(x, y))
    return Covering([Disc(p, UNIT_RADIUS) for p in centers], tuple(float(v) for v in bbox))


def load_covering(path) -> Covering:
    with open(path, "r", encoding="utf-8") as fh:
        return from_json_dict(json.load(fh))
