"""Sampling and export of the orbit-space geometry.

Three pieces of geometry are produced: the zero-tangle "bubble" surface in
(b1, b2, b3), the boundary of the fixed-b4 deformed tetrahedron, and the
fiber curve of admissible (b5, b6) pairs over an interior (b1, b2, b3)
point.  Root finding uses bisection on bracketed sign changes only, which
stays robust at the tangential double roots that bound these regions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateFiberError, EmptyGeometryError, OutOfRangeError
from .invariants import Beta
from .orbitspace import f_value

_BISECT_TOL = 1e-14
_POINT_RESIDUAL_TOL = 1e-12


@dataclass(frozen=True)
class PointCloud3:
    """Points in (x, y, z) with optional quad faces over a generating grid."""

    points: np.ndarray
    faces: tuple = ()
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float).reshape(-1, 3)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)


@dataclass(frozen=True)
class Curve2:
    """Ordered planar polyline; closed means the last point joins the first."""

    points: np.ndarray
    closed: bool
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float).reshape(-1, 2)
        if pts.shape[0] >= 2 and np.any(np.all(pts[1:] == pts[:-1], axis=1)):
            raise ValueError("consecutive curve points must be distinct")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)


def _bisect(fn, lo: float, hi: float, flo: float, fhi: float) -> float:
    """Root of fn on a bracketing interval by plain bisection."""
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = fn(mid)
        if fm == 0.0 or hi - lo < _BISECT_TOL:
            return mid
        if (flo < 0) != (fm < 0):
            hi, fhi = mid, fm
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def _scan_roots(fn, lo: float, hi: float, steps: int, extra=()):
    """All roots of fn found by a sign-change scan plus bisection.

    extra points are merged into the scan grid; passing the vertex of a
    quadratic keeps tangential double roots (and root pairs closer than the
    scan step) from slipping between scan points.
    """
    xs = np.linspace(lo, hi, steps)
    if extra:
        xs = np.unique(np.concatenate([xs, [x for x in extra if lo <= x <= hi]]))
    vals = np.array([fn(x) for x in xs])
    roots = []
    for a, b, fa, fb in zip(xs[:-1], xs[1:], vals[:-1], vals[1:]):
        if fa == 0.0:
            roots.append(float(a))
        elif (fa < 0) != (fb < 0):
            roots.append(float(_bisect(fn, float(a), float(b), float(fa), float(fb))))
    if vals[-1] == 0.0:
        roots.append(float(xs[-1]))
    # merge near-duplicates from grazing brackets
    merged = []
    for r in sorted(roots):
        if not merged or r - merged[-1] > 1e-10:
            merged.append(r)
    return merged


def _grid_faces(sheet: dict, shape) -> tuple:
    """Quad faces over grid cells whose four corners all produced a vertex."""
    faces = []
    ni, nj = shape
    for gi in range(ni - 1):
        for gj in range(nj - 1):
            corners = [(gi, gj), (gi + 1, gj), (gi + 1, gj + 1), (gi, gj + 1)]
            if all(c in sheet for c in corners):
                faces.append(tuple(sheet[c] for c in corners))
    return tuple(faces)


def sample_bubble_surface(resolution: int) -> PointCloud3:
    """The surface where b1 b2 + b1 b3 + b2 b3 = sqrt(b1 b2 b3) at zero tangle.

    Grids (b1, b2) over (0, 1/4]^2 and solves for b3 > 0; the equation is
    solved in s = sqrt(b3), where both sheets of the closed surface show up
    as bracketed sign changes.  Every emitted point satisfies the equality
    to 1e-12.
    """
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    grid = np.linspace(0.25 / resolution, 0.25, resolution)
    points = []
    sheets = {}
    worst = 0.0
    for gi, b1 in enumerate(grid):
        for gj, b2 in enumerate(grid):
            rootpq = math.sqrt(b1 * b2)

            def h(s, b1=b1, b2=b2, rootpq=rootpq):
                return (b1 + b2) * s * s - rootpq * s + b1 * b2

            vertex = rootpq / (2.0 * (b1 + b2))
            for branch, s in enumerate(_scan_roots(h, 0.0, 0.5, 128, extra=(vertex,))):
                b3 = s * s
                if b3 <= 0.0 or b3 > 0.25 + 1e-15:
                    continue
                residual = abs(b1 * b2 + b1 * b3 + b2 * b3 - math.sqrt(b1 * b2 * b3))
                if residual > _POINT_RESIDUAL_TOL:
                    continue
                worst = max(worst, residual)
                sheets.setdefault(branch, {})[(gi, gj)] = len(points)
                points.append((b1, b2, b3))
    faces = []
    for branch in sorted(sheets):
        faces.extend(_grid_faces(sheets[branch], (resolution, resolution)))
    return PointCloud3(
        points=np.array(points, dtype=float).reshape(-1, 3),
        faces=tuple(faces),
        meta={
            "axes": ("beta1", "beta2", "beta3"),
            "surface": "zero-tangle bubble",
            "resolution": resolution,
            "max_residual": worst,
        },
    )


def sample_tetrahedron(beta4: float, resolution: int) -> PointCloud3:
    """Boundary of the deformed tetrahedron of admissible (b1, b2, b3).

    Emits the curved face F = 0 (root-solved for b3 over a (b1, b2) grid)
    and the three coordinate-plane faces clipped to F >= 0.
    """
    if not 0.0 < beta4 < 0.25:
        raise OutOfRangeError(f"beta4 = {beta4} outside the open interval (0, 1/4)")
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    extent = 0.25 - beta4
    grid = np.linspace(0.0, extent, resolution)
    points = []
    faces = []

    def f_at(b1, b2, b3):
        return f_value(Beta(b1, b2, b3, beta4, 0.0, 0.0))

    # curved face: F(b1, b2, .) = 0, solved in s = sqrt(b3)
    sheets = {}
    worst = 0.0
    for gi, b1 in enumerate(grid):
        for gj, b2 in enumerate(grid):
            const = beta4 * (0.25 - beta4) - b1 * b2 - (b1 + b2) * beta4
            rootpq = math.sqrt(b1 * b2)
            coef = b1 + b2 + beta4

            def fs(s, coef=coef, rootpq=rootpq, const=const):
                return -coef * s * s + rootpq * s + const

            vertex = rootpq / (2.0 * coef)
            for branch, s in enumerate(_scan_roots(fs, 0.0, 0.5, 128, extra=(vertex,))):
                b3 = s * s
                residual = abs(f_at(b1, b2, b3))
                if residual > _POINT_RESIDUAL_TOL:
                    continue
                worst = max(worst, residual)
                sheets.setdefault(branch, {})[(gi, gj)] = len(points)
                points.append((b1, b2, b3))
    for branch in sorted(sheets):
        faces.extend(_grid_faces(sheets[branch], (resolution, resolution)))
    n_curved = len(points)

    # coordinate-plane faces, kept where the region condition F >= 0 holds
    plane_counts = {}
    for plane in (1, 2, 3):
        sheet = {}
        for gi, u in enumerate(grid):
            for gj, v in enumerate(grid):
                b = {1: (0.0, u, v), 2: (u, 0.0, v), 3: (u, v, 0.0)}[plane]
                if f_at(*b) >= 0.0:
                    sheet[(gi, gj)] = len(points)
                    points.append(b)
        plane_counts[f"face_b{plane}"] = len(sheet)
        faces.extend(_grid_faces(sheet, (resolution, resolution)))

    return PointCloud3(
        points=np.array(points, dtype=float).reshape(-1, 3),
        faces=tuple(faces),
        meta={
            "axes": ("beta1", "beta2", "beta3"),
            "surface": "deformed tetrahedron boundary",
            "beta4": float(beta4),
            "resolution": resolution,
            "curved_face_points": n_curved,
            "max_residual": worst,
            **plane_counts,
        },
    )


def fiber_beta5_interval(b1: float, b2: float, b3: float, b4: float):
    """Feasible b5 interval over an interior (b1, b2, b3) point.

    The upper end is always 2 sqrt(b1 b2 b3).  The lower end is whichever
    binds of the root of delta_beta = 0, the linear lower bound on b5, and
    -2 sqrt(b1 b2 b3); the winner is reported for the curve metadata.
    """
    prod = b1 * b2 * b3
    top = 2.0 * math.sqrt(prod)
    fv = f_value(Beta(b1, b2, b3, b4, 0.0, 0.0))
    candidates = {
        "delta_beta_root": math.sqrt(4.0 * (b1 + b4) * (b2 + b4) * (b3 + b4)) - b4,
        "b5_linear_bound": 2.0 * (math.sqrt(prod) - fv),
        "b5_sq_lower": -top,
    }
    binding = max(candidates, key=lambda k: candidates[k])
    return candidates[binding], top, binding


def sample_fiber_circle(b1: float, b2: float, b3: float, b4: float,
                        resolution: int) -> Curve2:
    """The closed curve of admissible (b5, b6) over an interior point.

    b6 = +-(1/2) sqrt(delta_beta(b5) * (4 b1 b2 b3 - b5^2)) over the
    feasible b5 interval; both branches are joined into one closed curve
    whose extreme-b5 points have b6 = 0.  The sweep is uniform in a
    trigonometric parameter, concentrating points near the turning ends.
    """
    if not 0.0 < b4 < 0.25:
        raise OutOfRangeError(f"beta4 = {b4} outside the open interval (0, 1/4)")
    if min(b1, b2, b3) <= 0.0:
        raise OutOfRangeError("fiber base point needs b1, b2, b3 > 0")
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    lo, hi, binding = fiber_beta5_interval(b1, b2, b3, b4)
    if hi - lo <= 1e-12:
        raise DegenerateFiberError(
            f"feasible b5 interval has length {hi - lo:.3e}; boundary points "
            "carry a single entanglement type")
    prod4 = 4.0 * b1 * b2 * b3
    quad = 4.0 * (b1 + b4) * (b2 + b4) * (b3 + b4)
    center = 0.5 * (lo + hi)
    radius = 0.5 * (hi - lo)

    def b6_of(b5: float) -> float:
        db = (b5 + b4) ** 2 - quad
        return 0.5 * math.sqrt(max(db, 0.0) * max(prod4 - b5 * b5, 0.0))

    n_top = resolution // 2 + 1
    theta_top = np.linspace(0.0, math.pi, n_top)
    pts = [(center + radius * math.cos(t), b6_of(center + radius * math.cos(t)))
           for t in theta_top]
    n_bot = resolution - n_top
    theta_bot = np.linspace(math.pi, 2.0 * math.pi, n_bot + 2)[1:-1]
    pts.extend((center + radius * math.cos(t), -b6_of(center + radius * math.cos(t)))
               for t in theta_bot)
    return Curve2(
        points=np.array(pts, dtype=float).reshape(-1, 2),
        closed=True,
        meta={
            "axes": ("beta5", "beta6"),
            "base_point": (float(b1), float(b2), float(b3), float(b4)),
            "beta5_range": (float(lo), float(hi)),
            "binding_lower_bound": binding,
            "resolution": resolution,
        },
    )


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def emit_mesh(geometry, fmt: str) -> bytes:
    """Serialize a point cloud or curve as CSV or Wavefront OBJ bytes.

    CSV carries a header naming the axes and 17 significant digits per
    coordinate, enough to round-trip doubles exactly.  OBJ writes "v"
    vertex lines plus "f" quads for grid surfaces or an "l" polyline for
    curves (wrapping back to the first vertex when the curve is closed).
    """
    pts = geometry.points
    if pts.shape[0] == 0:
        raise EmptyGeometryError("no points to emit")
    if fmt == "csv":
        header = ",".join(geometry.meta.get("axes", ("x", "y", "z")[: pts.shape[1]]))
        lines = [header]
        lines.extend(",".join(_fmt(c) for c in row) for row in pts)
        return ("\n".join(lines) + "\n").encode()
    if fmt == "obj":
        lines = []
        for row in pts:
            coords = list(row) + [0.0] * (3 - len(row))
            lines.append("v " + " ".join(_fmt(c) for c in coords))
        if isinstance(geometry, Curve2):
            seq = list(range(1, pts.shape[0] + 1))
            if geometry.closed:
                seq.append(1)
            lines.append("l " + " ".join(str(i) for i in seq))
        else:
            for face in geometry.faces:
                lines.append("f " + " ".join(str(i + 1) for i in face))
        return ("\n".join(lines) + "\n").encode()
    raise ValueError(f"unknown format {fmt!r}")


def parse_points_csv(data: bytes):
    """Inverse of emit_mesh(.., 'csv'): returns (axis labels, point array)."""
    text = data.decode()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty CSV")
    labels = tuple(lines[0].split(","))
    rows = [[float(v) for v in ln.split(",")] for ln in lines[1:]]
    return labels, np.array(rows, dtype=float)


def default_mesh_filename(kind: str, fmt: str, *, resolution: int = 0,
                          beta4: float = 0.0, base=None) -> str:
    """Conventional output names: bubble_rNNN, tetra_b4_VALUE_rNNN, circle_PARAMS."""
    if kind == "bubble":
        return f"bubble_r{resolution:03d}.{fmt}"
    if kind == "tetra":
        return f"tetra_b4_{beta4:g}_r{resolution:03d}.{fmt}"
    if kind == "circle":
        b1, b2, b3 = base
        return f"circle_b4_{beta4:g}_b_{b1:g}_{b2:g}_{b3:g}.{fmt}"
    raise ValueError(f"unknown mesh kind {kind!r}")
