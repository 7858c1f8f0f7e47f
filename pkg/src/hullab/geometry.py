"""Planar curve pair and the compact sets built over it.

Two smoothly bounded simply connected domains Omega_1, Omega_2 in the
z-plane are realized as closed piecewise-cubic Bezier chains that cross
exactly at +i and -i.  The real intervals I+ = [1, sqrt(3)] and
I- = [-sqrt(3), -1] are sub-paths of the respective boundaries.  On top of
the curves live the compact surfaces in C^2:

    V1 = {(z, w) : z^2 - w real, in [0, 1]}
    V2 = {(z, w) : w real, in [1, 2]}
    X1 = {(z, w) in V1 : z on boundary of Omega_2}
    X2 = {(z, w) in V2 : z on boundary of Omega_1}
    Vt1 = V1 over I+,  Vt2 = V2 over I-
    Y1 = closure(X1 \\ Vt2),  Y2 = closure(X2 \\ Vt1),  Y = Y1 u Y2

X1 and X2 are totally real annuli; Y1 and Y2 are disjoint disks.  This
module constructs, validates, and samples these objects.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy import ndimage
from scipy.spatial import cKDTree

SQRT3 = math.sqrt(3.0)
SQRT2 = math.sqrt(2.0)

MEMBERSHIP_TOL = 1e-9
JOINT_TOL = 1e-9
ISOLATION_RADIUS = 1e-6
DEFAULT_HGRID = 0.02
MIN_SPEED = 0.05


class GeometryError(ValueError):
    """Bad construction input (open chain, malformed overrides)."""


class DegenerateCurveError(GeometryError):
    """A Bezier segment has zero length; carries the segment index."""

    def __init__(self, curve_name, segment_index):
        self.curve_name = curve_name
        self.segment_index = segment_index
        super().__init__(
            f"degenerate segment {segment_index} on {curve_name}: zero length"
        )


class OnBoundaryError(ValueError):
    """Query point sits on the curve; winding number undefined."""


@dataclass(frozen=True)
class ComplexPoint:
    """A point (z, w) in C^2.  Operations on C* x C require z != 0."""

    z: complex
    w: complex

    def __post_init__(self):
        if not (np.isfinite(self.z) and np.isfinite(self.w)):
            raise ValueError("ComplexPoint coordinates must be finite")

    def as_array(self):
        return np.array([self.z, self.w], dtype=complex)


# ---------------------------------------------------------------------------
# Bezier chains
# ---------------------------------------------------------------------------

def _bezier_point(ctrl, u):
    """Evaluate cubic Bezier with control row(s) `ctrl` (..., 4) at local u."""
    c0, c1, c2, c3 = ctrl[..., 0], ctrl[..., 1], ctrl[..., 2], ctrl[..., 3]
    v = 1.0 - u
    return (
        v * v * v * c0
        + 3.0 * v * v * u * c1
        + 3.0 * v * u * u * c2
        + u * u * u * c3
    )


def _bezier_deriv(ctrl, u):
    c0, c1, c2, c3 = ctrl[..., 0], ctrl[..., 1], ctrl[..., 2], ctrl[..., 3]
    v = 1.0 - u
    return 3.0 * (
        v * v * (c1 - c0) + 2.0 * v * u * (c2 - c1) + u * u * (c3 - c2)
    )


def _bezier_split(ctrl, u=0.5):
    """de Casteljau split of one cubic at u; returns (left, right) controls."""
    p0, p1, p2, p3 = ctrl
    q0 = p0 + u * (p1 - p0)
    q1 = p1 + u * (p2 - p1)
    q2 = p2 + u * (p3 - p2)
    r0 = q0 + u * (q1 - q0)
    r1 = q1 + u * (q2 - q1)
    s0 = r0 + u * (r1 - r0)
    left = np.array([p0, q0, r0, s0])
    right = np.array([s0, r1, q2, p3])
    return left, right


@dataclass(frozen=True)
class CurveSpec:
    """Closed chain of cubic Bezier segments in the z-plane.

    segments: (n, 4) complex control points, piece k covers global
    parameter t in [k/n, (k+1)/n].  anchors: (parameter, required point)
    pairs used by the validator.
    """

    segments: np.ndarray
    closed: bool = True
    anchors: tuple = ()

    def __post_init__(self):
        seg = np.asarray(self.segments, dtype=complex)
        if seg.ndim != 2 or seg.shape[1] != 4 or seg.shape[0] < 2:
            raise GeometryError("segments must be an (n>=2, 4) complex array")
        object.__setattr__(self, "segments", seg)
        if not np.isfinite(seg).all():
            raise GeometryError("segment control points must be finite")
        starts = seg[:, 0]
        ends = seg[:, 3]
        gaps = np.abs(ends - np.roll(starts, -1))
        if self.closed and gaps.max() > JOINT_TOL:
            raise GeometryError(
                f"open chain: max joint gap {gaps.max():.3e} exceeds {JOINT_TOL}"
            )

    @property
    def n_segments(self):
        return self.segments.shape[0]

    def _locate(self, t):
        t = np.asarray(t, dtype=float)
        n = self.n_segments
        tt = np.mod(t, 1.0) if self.closed else np.clip(t, 0.0, 1.0)
        k = np.minimum((tt * n).astype(int), n - 1)
        u = tt * n - k
        return k, u

    def point(self, t):
        """Curve point(s) at global parameter t (scalar or array)."""
        k, u = self._locate(t)
        return _bezier_point(self.segments[k], u)

    def deriv(self, t):
        """Derivative w.r.t. the global parameter (piece deriv times n)."""
        k, u = self._locate(t)
        return _bezier_deriv(self.segments[k], u) * self.n_segments

    def joint_deviation(self):
        """Max derivative mismatch across the chain joints (C^1 defect)."""
        din = _bezier_deriv(self.segments, 1.0)
        dout = _bezier_deriv(self.segments, 0.0)
        return float(np.abs(din - np.roll(dout, -1)).max())

    def min_speed(self, n=4096):
        ts = np.arange(n) / n
        return float(np.abs(self.deriv(ts)).min())

    def negated(self):
        return CurveSpec(
            -self.segments,
            closed=self.closed,
            anchors=tuple((t, -p) for t, p in self.anchors),
        )

    def translated(self, delta):
        return CurveSpec(
            self.segments + delta,
            closed=self.closed,
            anchors=tuple((t, p + delta) for t, p in self.anchors),
        )

    def check_degenerate(self, name="curve"):
        spans = np.abs(self.segments - self.segments[:, :1]).max(axis=1)
        bad = np.nonzero(spans == 0.0)[0]
        if bad.size:
            raise DegenerateCurveError(name, int(bad[0]))


def distance_to_curve(curve, qs, coarse=192, refine_iters=60):
    """Distance from query point(s) to the chain, via coarse scan plus
    golden-section refinement on the best bracket.  Accurate to ~1e-12 for
    regular curves."""
    qs = np.atleast_1d(np.asarray(qs, dtype=complex))
    n = curve.n_segments
    ts = np.arange(n * coarse) / (n * coarse)
    pts = curve.point(ts)
    out = np.empty(qs.shape, dtype=float)
    step = 1.0 / (n * coarse)
    chunk = max(1, int(2_000_000 // max(pts.size, 1)))
    for lo in range(0, qs.size, chunk):
        q = qs[lo : lo + chunk, None]
        d = np.abs(pts[None, :] - q)
        best = np.argmin(d, axis=1)
        a = ts[best] - step
        b = ts[best] + step
        gr = (math.sqrt(5.0) - 1.0) / 2.0
        c = b - gr * (b - a)
        e = a + gr * (b - a)
        fc = np.abs(curve.point(c) - qs[lo : lo + chunk])
        fe = np.abs(curve.point(e) - qs[lo : lo + chunk])
        for _ in range(refine_iters):
            take_c = fc < fe
            b = np.where(take_c, e, b)
            a = np.where(take_c, a, c)
            c_new = np.where(take_c, b - gr * (b - a), e)
            e_new = np.where(take_c, c, a + gr * (b - a))
            c, e = c_new, e_new
            fc = np.abs(curve.point(c) - qs[lo : lo + chunk])
            fe = np.abs(curve.point(e) - qs[lo : lo + chunk])
        out[lo : lo + chunk] = np.minimum(fc, fe)
    return out if out.size > 1 else float(out[0])


def winding_number(curve, q):
    """Integer winding number of the chain around q via accumulated
    argument increments.  q must be off the curve (distance > 1e-9)."""
    if distance_to_curve(curve, q) <= 1e-9:
        raise OnBoundaryError(f"point {q} lies on the curve")
    n = 8192
    for _ in range(3):
        ts = np.arange(n + 1) / n
        rel = curve.point(ts) - q
        dphi = np.angle(rel[1:] / rel[:-1])
        total = dphi.sum() / (2.0 * math.pi)
        residual = abs(total - round(total))
        if np.abs(dphi).max() < 0.5 * math.pi and residual < 0.1:
            return int(round(total))
        n *= 4
    raise OnBoundaryError(f"winding number did not stabilize at {q}")


def _curve_intersections(curve_a, curve_b, isolation=ISOLATION_RADIUS):
    """All intersection clusters between two chains, by recursive bounding
    box subdivision.  Boxes closer than `isolation` merge into a single
    reported intersection point."""

    def bbox(ctrl):
        re = ctrl.real
        im = ctrl.imag
        return re.min(), re.max(), im.min(), im.max()

    def overlap(b1, b2):
        return not (
            b1[1] < b2[0] or b2[1] < b1[0] or b1[3] < b2[2] or b2[3] < b1[2]
        )

    hits = []
    stack = []
    for ca in curve_a.segments:
        for cb in curve_b.segments:
            stack.append((ca, cb))
    while stack:
        ca, cb = stack.pop()
        ba, bb = bbox(ca), bbox(cb)
        if not overlap(ba, bb):
            continue
        sa = max(ba[1] - ba[0], ba[3] - ba[2])
        sb = max(bb[1] - bb[0], bb[3] - bb[2])
        if sa < isolation and sb < isolation:
            hits.append(complex((ba[0] + ba[1]) / 2, (ba[2] + ba[3]) / 2))
            continue
        if sa >= sb:
            l, r = _bezier_split(ca)
            stack.append((l, cb))
            stack.append((r, cb))
        else:
            l, r = _bezier_split(cb)
            stack.append((ca, l))
            stack.append((ca, r))

    clusters = []
    for h in hits:
        for cl in clusters:
            if abs(h - cl[0] / cl[1]) < 64 * isolation:
                cl[0] += h
                cl[1] += 1
                break
        else:
            clusters.append([h, 1])
    return [cl[0] / cl[1] for cl in clusters]


# ---------------------------------------------------------------------------
# Scene: the two curves plus intervals
# ---------------------------------------------------------------------------

# Frozen default control points for the boundary of Omega_1.  The chain runs
# 1 -> i -> (-2.45) -> -i -> r -> sqrt(3) -> 1 counterclockwise; the last
# piece is exactly the segment [1, sqrt(3)] traversed right to left, so that
# I+ is a sub-path.  All joints are C^1 by construction (mirrored tangent
# handles).  Tuned until validate_geometry passes, then frozen.
_SIGMA = (SQRT3 - 1.0) / 3.0
_D_I = (-1.0 + 0.35j) / abs(-1.0 + 0.35j)      # tangent direction at +i
_D_MI = (1.0 + 0.75j) / abs(1.0 + 0.75j)       # tangent direction at -i
_M_ANCHOR = -2.45 + 0.0j                       # leftmost point of the sweep
_R_ANCHOR = 1.52 - 0.18j                       # waypoint under I+

DEFAULT_CURVE1_SEGMENTS = np.array([
    # A: 1 -> i, leaving the axis leftward, sagging toward the origin
    [1.0 + 0.0j, 1.0 - _SIGMA, 1j - 0.55 * _D_I, 1j],
    # B (upper half): i -> m, bulging up-left
    [1j, 1j + 0.55 * _D_I, _M_ANCHOR + 0.85j, _M_ANCHOR],
    # B (lower half): m -> -i, dipping below before rising into -i
    [_M_ANCHOR, _M_ANCHOR - 0.85j, -0.4 - 1.3j, -1j],
    # C (first leg): -i -> r, hugging below the real axis
    [-1j, 0.4 - 0.7j, _R_ANCHOR - 0.35, _R_ANCHOR],
    # C (second leg): r -> sqrt(3), overshooting right and landing flat
    [_R_ANCHOR, _R_ANCHOR + 0.35, SQRT3 + _SIGMA, SQRT3 + 0.0j],
    # the segment [1, sqrt(3)] traversed sqrt(3) -> 1 (this is I+)
    [SQRT3 + 0.0j, SQRT3 - _SIGMA, 1.0 + _SIGMA, 1.0 + 0.0j],
], dtype=complex)

DEFAULT_ANCHORS1 = (
    (0.0, 1.0 + 0.0j),
    (1.0 / 6.0, 1j),
    (2.0 / 6.0, _M_ANCHOR),
    (3.0 / 6.0, -1j),
    (5.0 / 6.0, SQRT3 + 0.0j),
)

# Parameter range of the I+ sub-path on curve1 (and of I- on curve2).
SEGMENT_PARAM_RANGE = (5.0 / 6.0, 1.0)


class SetLabel(Enum):
    V1 = "V1"
    V2 = "V2"
    X1 = "X1"
    X2 = "X2"
    Vt1 = "Vt1"
    Vt2 = "Vt2"
    Y1 = "Y1"
    Y2 = "Y2"
    Y = "Y"
    Yplus = "Yplus"
    Yminus = "Yminus"
    X1uX2 = "X1uX2"

    @classmethod
    def parse(cls, name):
        for lab in cls:
            if lab.value.lower() == str(name).lower():
                return lab
        raise ValueError(f"unknown set label {name!r}")


@dataclass(frozen=True)
class SceneGeometry:
    """The two boundary curves plus the intervals I+ and I-.

    Immutable; the arrangement labeling is memoized per grid spacing.
    """

    curve1: CurveSpec
    curve2: CurveSpec
    i_plus: tuple = (1.0, SQRT3)
    i_minus: tuple = (-SQRT3, -1.0)
    _arrangement_cache: dict = field(
        default_factory=dict, repr=False, compare=False
    )

    def arrangement(self, h_grid=DEFAULT_HGRID):
        key = round(h_grid, 12)
        if key not in self._arrangement_cache:
            self._arrangement_cache[key] = _build_arrangement(self, h_grid)
        return self._arrangement_cache[key]


def _chain_from_table(table, fallback_anchors=()):
    seg = np.asarray(table, dtype=complex)
    return CurveSpec(seg, closed=True, anchors=tuple(fallback_anchors))


def build_default_geometry(overrides=None):
    """Construct the scene from the frozen default control points.

    `overrides` may supply replacement control tables {"curve1": ...,
    "curve2": ...}; omitted curves fall back to the defaults (curve2
    defaults to the negation of curve1).  Open chains raise GeometryError.
    """
    overrides = overrides or {}
    unknown = set(overrides) - {"curve1", "curve2"}
    if unknown:
        raise GeometryError(f"unknown geometry overrides: {sorted(unknown)}")
    if "curve1" in overrides:
        curve1 = _chain_from_table(overrides["curve1"], DEFAULT_ANCHORS1)
    else:
        curve1 = CurveSpec(
            DEFAULT_CURVE1_SEGMENTS.copy(), anchors=DEFAULT_ANCHORS1
        )
    if "curve2" in overrides:
        curve2 = _chain_from_table(
            overrides["curve2"], tuple((t, -p) for t, p in DEFAULT_ANCHORS1)
        )
    else:
        curve2 = curve1.negated()
    return SceneGeometry(curve1=curve1, curve2=curve2)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ValidationReport:
    checks: tuple  # of (name, passed, measured)
    overall: bool

    def failed(self):
        return [c for c in self.checks if not c[1]]

    def lines(self):
        out = []
        for name, ok, measured in self.checks:
            out.append(f"[{'PASS' if ok else 'FAIL'}] {name}: {measured}")
        out.append(f"overall: {'PASS' if self.overall else 'FAIL'}")
        return out


def _build_arrangement(geom, h_grid):
    """Label the grid components of the curve-complement on a regular grid.

    Returns (x0, y0, h, labels, unbounded_label, zero_label, boundary_mask).
    """
    pts = np.concatenate([
        geom.curve1.point(np.arange(8192) / 8192.0),
        geom.curve2.point(np.arange(8192) / 8192.0),
    ])
    margin = 6.0 * h_grid
    x0 = pts.real.min() - margin
    x1 = pts.real.max() + margin
    y0 = pts.imag.min() - margin
    y1 = pts.imag.max() + margin
    nx = int(math.ceil((x1 - x0) / h_grid)) + 1
    ny = int(math.ceil((y1 - y0) / h_grid)) + 1

    # rasterize a dense polyline of both curves into the cells
    n_dense = max(20000, 8 * int((x1 - x0 + y1 - y0) / h_grid))
    ts = np.arange(n_dense) / n_dense
    dense = np.concatenate([geom.curve1.point(ts), geom.curve2.point(ts)])
    ix = np.clip(((dense.real - x0) / h_grid).astype(int), 0, nx - 1)
    iy = np.clip(((dense.imag - y0) / h_grid).astype(int), 0, ny - 1)
    boundary = np.zeros((ny, nx), dtype=bool)
    boundary[iy, ix] = True

    labels, _ = ndimage.label(~boundary)
    unbounded = labels[0, 0]
    jx = int(round((0.0 - x0) / h_grid))
    jy = int(round((0.0 - y0) / h_grid))
    zero_label = labels[jy, jx]
    return x0, y0, h_grid, labels, unbounded, zero_label, boundary


def validate_geometry(geom, h_grid=DEFAULT_HGRID):
    """Run the seven scene checks; returns a ValidationReport.

    Raises DegenerateCurveError if either chain contains a zero-length
    segment.  h_grid must lie in (0, 0.1].
    """
    if not (0.0 < h_grid <= 0.1):
        raise ValueError("h_grid must lie in (0, 0.1]")
    geom.curve1.check_degenerate("curve1")
    geom.curve2.check_degenerate("curve2")
    checks = []

    # (1) smooth and regular
    dev = max(geom.curve1.joint_deviation(), geom.curve2.joint_deviation())
    speed = min(geom.curve1.min_speed(), geom.curve2.min_speed())
    checks.append((
        "smooth_regular",
        dev <= JOINT_TOL and speed > MIN_SPEED,
        f"joint_dev={dev:.3e} min_speed={speed:.4f}",
    ))

    # (2) I+ is a sub-path of curve1, I- of curve2
    s0, s1 = SEGMENT_PARAM_RANGE
    ss = np.linspace(s0, s1, 65)
    zp = geom.curve1.point(ss)
    zm = geom.curve2.point(ss)
    a, b = geom.i_plus
    c, d = geom.i_minus
    def_seg = max(
        np.abs(zp.imag).max(),
        max(0.0, zp.real.min() - b, a - zp.real.min()) if zp.size else 0.0,
        abs(zp.real.max() - b),
        abs(zp.real.min() - a),
    )
    def_seg2 = max(
        np.abs(zm.imag).max(),
        abs(zm.real.min() - c),
        abs(zm.real.max() - d),
    )
    measured = max(def_seg, def_seg2)
    checks.append((
        "intervals_on_boundary",
        measured <= JOINT_TOL,
        f"defect={measured:.3e}",
    ))

    # (3) both curves pass through +i and -i
    joints1 = geom.curve1.segments[:, 0]
    joints2 = geom.curve2.segments[:, 0]
    miss = max(
        min(abs(joints1 - 1j).min(), float(distance_to_curve(geom.curve1, 1j))),
        min(abs(joints1 + 1j).min(), float(distance_to_curve(geom.curve1, -1j))),
        min(abs(joints2 - 1j).min(), float(distance_to_curve(geom.curve2, 1j))),
        min(abs(joints2 + 1j).min(), float(distance_to_curve(geom.curve2, -1j))),
    )
    checks.append(("passes_through_pm_i", miss <= JOINT_TOL, f"miss={miss:.3e}"))

    # (4) the two curves intersect exactly at {+i, -i}
    inters = _curve_intersections(geom.curve1, geom.curve2)
    if len(inters) == 2:
        err = max(
            min(abs(p - 1j), abs(p + 1j)) for p in inters
        )
        ok4 = err < 1e-4
        msg4 = f"count=2 anchor_err={err:.2e}"
    else:
        ok4 = False
        msg4 = f"count={len(inters)}"
    checks.append(("curves_meet_only_twice", ok4, msg4))

    # (5) I- inside Omega_1, I+ inside Omega_2 (winding number 1)
    try:
        xs = np.linspace(geom.i_minus[0], geom.i_minus[1], 9)
        w_in1 = [winding_number(geom.curve1, complex(x, 0.0)) for x in xs]
        xs = np.linspace(geom.i_plus[0], geom.i_plus[1], 9)
        w_in2 = [winding_number(geom.curve2, complex(x, 0.0)) for x in xs]
        ok5 = all(w == 1 for w in w_in1) and all(w == 1 for w in w_in2)
        msg5 = f"windings={sorted(set(w_in1 + w_in2))}"
    except OnBoundaryError as exc:
        ok5, msg5 = False, f"on-boundary: {exc}"
    checks.append(("intervals_in_opposite_interiors", ok5, msg5))

    # (6) the origin lies in both interiors
    try:
        w1 = winding_number(geom.curve1, 0.0 + 0.0j)
        w2 = winding_number(geom.curve2, 0.0 + 0.0j)
        ok6 = w1 == 1 and w2 == 1
        msg6 = f"w1={w1} w2={w2}"
    except OnBoundaryError as exc:
        ok6, msg6 = False, f"on-boundary: {exc}"
    checks.append(("origin_in_both_interiors", ok6, msg6))

    # (7) every curve point borders the unbounded face or the origin face
    x0, y0, h, labels, unb, zl, boundary = geom.arrangement(h_grid)
    ny, nx = labels.shape
    good = (labels == unb) | (labels == zl)
    reach = int(math.ceil(2.0))  # cells within 2*h_grid
    near_good = ndimage.binary_dilation(good, iterations=2 * reach)
    ts = np.arange(4096) / 4096.0
    cpts = np.concatenate([geom.curve1.point(ts), geom.curve2.point(ts)])
    ix = np.clip(((cpts.real - x0) / h).astype(int), 0, nx - 1)
    iy = np.clip(((cpts.imag - y0) / h).astype(int), 0, ny - 1)
    bad_frac = float(np.mean(~near_good[iy, ix]))
    checks.append((
        "arrangement_two_faces",
        bad_frac == 0.0,
        f"off_face_fraction={bad_frac:.4f}",
    ))

    overall = all(ok for _, ok, _ in checks)
    return ValidationReport(checks=tuple(checks), overall=overall)


# ---------------------------------------------------------------------------
# Membership
# ---------------------------------------------------------------------------

def _membership_bulk(geom, label, zs, ws, tol=MEMBERSHIP_TOL):
    """Vectorized defining-condition test for a batch of points."""
    zs = np.atleast_1d(np.asarray(zs, dtype=complex))
    ws = np.atleast_1d(np.asarray(ws, dtype=complex))
    u = zs * zs - ws

    def v1():
        return (np.abs(u.imag) <= tol) & (u.real >= -tol) & (u.real <= 1.0 + tol)

    def v2():
        return (np.abs(ws.imag) <= tol) & (ws.real >= 1.0 - tol) & (ws.real <= 2.0 + tol)

    def on_curve(curve):
        return distance_to_curve(curve, zs) <= tol

    def over_iplus():
        a, b = geom.i_plus
        return (np.abs(zs.imag) <= tol) & (zs.real >= a - tol) & (zs.real <= b + tol)

    def over_iminus():
        a, b = geom.i_minus
        return (np.abs(zs.imag) <= tol) & (zs.real >= a - tol) & (zs.real <= b + tol)

    def removed_by_vt2():
        # strict interior of the removed band: w in the open interval (1, 2)
        return (
            over_iminus()
            & (np.abs(ws.imag) <= tol)
            & (ws.real > 1.0 + tol)
            & (ws.real < 2.0 - tol)
        )

    def removed_by_vt1():
        return (
            over_iplus()
            & (np.abs(u.imag) <= tol)
            & (u.real > tol)
            & (u.real < 1.0 - tol)
        )

    if label is SetLabel.V1:
        res = v1()
    elif label is SetLabel.V2:
        res = v2()
    elif label is SetLabel.X1:
        res = v1() & on_curve(geom.curve2)
    elif label is SetLabel.X2:
        res = v2() & on_curve(geom.curve1)
    elif label is SetLabel.Vt1:
        res = v1() & over_iplus()
    elif label is SetLabel.Vt2:
        res = v2() & over_iminus()
    elif label is SetLabel.Y1:
        res = v1() & on_curve(geom.curve2) & ~removed_by_vt2()
    elif label is SetLabel.Y2:
        res = v2() & on_curve(geom.curve1) & ~removed_by_vt1()
    elif label is SetLabel.Y:
        res = _membership_bulk(geom, SetLabel.Y1, zs, ws, tol) | _membership_bulk(
            geom, SetLabel.Y2, zs, ws, tol
        )
    elif label is SetLabel.Yplus:
        res = _membership_bulk(geom, SetLabel.Y, zs, ws, tol) & (zs.real >= -tol)
    elif label is SetLabel.Yminus:
        res = _membership_bulk(geom, SetLabel.Y, zs, ws, tol) & (zs.real <= tol)
    elif label is SetLabel.X1uX2:
        res = (v1() & on_curve(geom.curve2)) | (v2() & on_curve(geom.curve1))
    else:
        raise ValueError(f"unknown label {label}")
    return res


def set_membership(geom, label, p, tol=MEMBERSHIP_TOL):
    """Defining-condition membership for one point, within tolerance tol."""
    if not (0.0 < tol <= 1e-3):
        raise ValueError("tol must lie in (0, 1e-3]")
    if isinstance(label, str):
        label = SetLabel.parse(label)
    return bool(_membership_bulk(geom, label, p.z, p.w, tol)[0])


def retained_w_intervals(x):
    """Closed w-intervals of Y1 over a real abscissa x in I-.

    The fiber of X1 over x is w in [x^2-1, x^2]; the band w in (1, 2) is
    removed.  Exact interval arithmetic."""
    lo, hi = x * x - 1.0, x * x
    out = []
    if lo <= 1.0:
        out.append((lo, min(hi, 1.0)))
    if hi >= 2.0:
        out.append((max(lo, 2.0), hi))
    return out


def retained_w_intervals_y2(x):
    """Closed w-intervals of Y2 over a real abscissa x in I+.

    The fiber of X2 over x is w in [1, 2]; the band z^2 - w in (0, 1),
    i.e. w in (x^2-1, x^2), is removed."""
    lo, hi = x * x - 1.0, x * x
    out = []
    if lo >= 1.0:
        out.append((1.0, min(lo, 2.0)))
    if hi <= 2.0:
        out.append((max(hi, 1.0), 2.0))
    return out


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SetSample:
    """Weighted discretization of one of the compact sets.

    zs, ws: point coordinates; weights: surface-measure proxies; h: the
    mesh parameter (max nearest-neighbor spacing in normalized parameter
    space)."""

    label: SetLabel
    zs: np.ndarray
    ws: np.ndarray
    weights: np.ndarray
    h: float

    def __post_init__(self):
        if not (len(self.zs) == len(self.ws) == len(self.weights)):
            raise ValueError("inconsistent sample arrays")
        if len(self.zs) and self.weights.min() < 0:
            raise ValueError("negative weight")

    def __len__(self):
        return len(self.zs)

    def point(self, i):
        return ComplexPoint(complex(self.zs[i]), complex(self.ws[i]))

    def identity(self):
        """Cheap fingerprint used to tie certificates to their sample."""
        return (
            self.label.value,
            round(self.h, 12),
            len(self.zs),
            float(self.zs.real.sum()),
            float(self.ws.real.sum()),
        )

    def to_csv(self, path):
        with open(path, "w") as fh:
            fh.write("re_z,im_z,re_w,im_w,weight\n")
            for z, w, wt in zip(self.zs, self.ws, self.weights):
                fh.write(
                    f"{z.real:.17g},{z.imag:.17g},{w.real:.17g},{w.imag:.17g},{wt:.17g}\n"
                )

    @staticmethod
    def from_csv(path, label, h):
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        return SetSample(
            label=label,
            zs=data[:, 0] + 1j * data[:, 1],
            ws=data[:, 2] + 1j * data[:, 3],
            weights=data[:, 4],
            h=h,
        )


def _area_element_x1(z, dz):
    """Surface-area density of (z(s), z(s)^2 - t) as a map into R^4."""
    g = (np.abs(dz) ** 2) * (1.0 + 4.0 * np.abs(z) ** 2) - 4.0 * (
        (z * dz).real
    ) ** 2
    return np.sqrt(np.maximum(g, 0.0))


def _interval_grid(a, b, h):
    """Grid on [a, b] with spacing <= h, endpoints included; trapezoid
    weights.  A zero-length interval gives one point of weight zero."""
    if b - a <= 0.0:
        return np.array([a]), np.array([0.0])
    m = max(2, int(math.ceil((b - a) / h)) + 1)
    ts = np.linspace(a, b, m)
    wt = np.full(m, (b - a) / (m - 1))
    wt[0] *= 0.5
    wt[-1] *= 0.5
    return ts, wt


def _sample_fibered(curve, h, fiber_for_x, w_of, jac):
    """Common sampler for the surfaces fibered over a boundary curve.

    fiber_for_x(z) gives the list of closed t-intervals retained over the
    curve point z (t is the normalized fiber coordinate in [0, 1]);
    w_of(z, t) maps to the w coordinate; jac(z, dz) is the area density
    relative to ds dt."""
    n_s = int(math.ceil(1.0 / h))
    ss = np.arange(n_s) / n_s
    zs_curve = curve.point(ss)
    dz_curve = curve.deriv(ss)
    ds = 1.0 / n_s
    zs, ws, wts = [], [], []
    for z, dz in zip(zs_curve, dz_curve):
        for (a, b) in fiber_for_x(z):
            ts, tw = _interval_grid(a, b, h)
            zs.append(np.full(ts.shape, z))
            ws.append(w_of(z, ts))
            wts.append(tw * ds * jac(z, dz))
    return (
        np.concatenate(zs),
        np.concatenate(ws),
        np.concatenate(wts),
    )


def sample_set(geom, label, h):
    """Weighted sample of a compact set with parameter-space mesh <= h.

    Removed bands are excluded up to their boundary; the boundary points
    themselves are retained exactly.  V1 and V2 are unbounded and cannot
    be sampled."""
    if not (0.0 < h <= 0.1):
        raise ValueError("h must lie in (0, 0.1]")
    if isinstance(label, str):
        label = SetLabel.parse(label)
    if label in (SetLabel.V1, SetLabel.V2):
        raise ValueError(f"{label.value} is unbounded; sample X/Y/Vt sets instead")

    imin, imax = geom.i_minus
    pmin, pmax = geom.i_plus

    def full_fiber(_z):
        return [(0.0, 1.0)]

    def _minus_open_band(lo, hi):
        """[0,1] minus the open interval (lo, hi); closed remnants, which
        may be single closure points."""
        if hi <= 0.0 or lo >= 1.0:
            return [(0.0, 1.0)]
        out = []
        if lo >= 0.0:
            out.append((0.0, min(lo, 1.0)))
        if hi <= 1.0:
            out.append((max(hi, 0.0), 1.0))
        return out

    def y1_fiber(z):
        if abs(z.imag) <= MEMBERSHIP_TOL and imin - MEMBERSHIP_TOL <= z.real <= imax + MEMBERSHIP_TOL:
            x = z.real
            # w = x^2 - t removed for w in (1, 2): t in (x^2-2, x^2-1)
            return _minus_open_band(x * x - 2.0, x * x - 1.0)
        return [(0.0, 1.0)]

    def y2_fiber(z):
        if abs(z.imag) <= MEMBERSHIP_TOL and pmin - MEMBERSHIP_TOL <= z.real <= pmax + MEMBERSHIP_TOL:
            x = z.real
            # w = 1 + t removed for z^2 - w in (0, 1): t in (x^2-2, x^2-1)
            return _minus_open_band(x * x - 2.0, x * x - 1.0)
        return [(0.0, 1.0)]

    w_par = lambda z, t: z * z - t
    w_flat = lambda z, t: (1.0 + t).astype(complex)
    j_par = _area_element_x1
    j_flat = lambda z, dz: np.abs(dz)

    if label is SetLabel.X1:
        zs, ws, wts = _sample_fibered(geom.curve2, h, full_fiber, w_par, j_par)
    elif label is SetLabel.X2:
        zs, ws, wts = _sample_fibered(geom.curve1, h, full_fiber, w_flat, j_flat)
    elif label is SetLabel.Y1:
        zs, ws, wts = _sample_fibered(geom.curve2, h, y1_fiber, w_par, j_par)
    elif label is SetLabel.Y2:
        zs, ws, wts = _sample_fibered(geom.curve1, h, y2_fiber, w_flat, j_flat)
    elif label in (SetLabel.Y, SetLabel.Yplus, SetLabel.Yminus):
        s1 = sample_set(geom, SetLabel.Y1, h)
        s2 = sample_set(geom, SetLabel.Y2, h)
        zs = np.concatenate([s1.zs, s2.zs])
        ws = np.concatenate([s1.ws, s2.ws])
        wts = np.concatenate([s1.weights, s2.weights])
        if label is SetLabel.Yplus:
            keep = zs.real >= 0.0
            zs, ws, wts = zs[keep], ws[keep], wts[keep]
        elif label is SetLabel.Yminus:
            keep = zs.real <= 0.0
            zs, ws, wts = zs[keep], ws[keep], wts[keep]
    elif label is SetLabel.X1uX2:
        s1 = sample_set(geom, SetLabel.X1, h)
        s2 = sample_set(geom, SetLabel.X2, h)
        zs = np.concatenate([s1.zs, s2.zs])
        ws = np.concatenate([s1.ws, s2.ws])
        wts = np.concatenate([s1.weights, s2.weights])
    elif label is SetLabel.Vt1:
        a, b = geom.i_plus
        n = int(math.ceil(1.0 / h)) + 1
        xs = np.linspace(a, b, n)
        dx = (b - a) / (n - 1)
        zs, ws, wts = [], [], []
        for i, x in enumerate(xs):
            ts, tw = _interval_grid(0.0, 1.0, h)
            zs.append(np.full(ts.shape, complex(x)))
            ws.append((x * x - ts).astype(complex))
            edge = 0.5 if i in (0, n - 1) else 1.0
            wts.append(tw * dx * edge * 1.0)
        zs, ws, wts = map(np.concatenate, (zs, ws, wts))
    elif label is SetLabel.Vt2:
        a, b = geom.i_minus
        n = int(math.ceil(1.0 / h)) + 1
        xs = np.linspace(a, b, n)
        dx = (b - a) / (n - 1)
        zs, ws, wts = [], [], []
        for i, x in enumerate(xs):
            ts, tw = _interval_grid(0.0, 1.0, h)
            zs.append(np.full(ts.shape, complex(x)))
            ws.append((1.0 + ts).astype(complex))
            edge = 0.5 if i in (0, n - 1) else 1.0
            wts.append(tw * dx * edge * 1.0)
        zs, ws, wts = map(np.concatenate, (zs, ws, wts))
    else:
        raise ValueError(f"cannot sample label {label}")

    return SetSample(label=label, zs=zs, ws=ws, weights=wts, h=h)


def totally_real_defect(geom, label, s, t):
    """|det [u v]| of the two parameterization tangents at (s, t).

    A positive value certifies that the tangent plane contains no complex
    line at that point."""
    if isinstance(label, str):
        label = SetLabel.parse(label)
    if label is SetLabel.X1:
        if not (0.0 <= s <= 1.0 and 0.0 <= t <= 1.0):
            raise ValueError("parameter outside domain")
        z = geom.curve2.point(s)
        dz = geom.curve2.deriv(s)
        u = np.array([dz, 2.0 * z * dz])
        v = np.array([0.0, -1.0], dtype=complex)
    elif label is SetLabel.X2:
        if not (0.0 <= s <= 1.0 and 1.0 <= t <= 2.0):
            raise ValueError("parameter outside domain")
        dz = geom.curve1.deriv(s)
        u = np.array([dz, 0.0], dtype=complex)
        v = np.array([0.0, 1.0], dtype=complex)
    else:
        raise ValueError("totally_real_defect applies to X1 or X2")
    det = u[0] * v[1] - u[1] * v[0]
    return float(abs(det))


def set_separation(a, b):
    """Min Euclidean distance in C^2 ~ R^4 between two samples."""
    if len(a) == 0 or len(b) == 0:
        raise ValueError("set_separation requires nonempty samples")
    pa = np.column_stack([a.zs.real, a.zs.imag, a.ws.real, a.ws.imag])
    pb = np.column_stack([b.zs.real, b.zs.imag, b.ws.real, b.ws.imag])
    tree = cKDTree(pb)
    d, _ = tree.query(pa, k=1)
    return float(d.min())


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def _c2pair(c):
    return [float(np.real(c)), float(np.imag(c))]


def geometry_to_json(geom):
    doc = {
        "curve1": [[_c2pair(c) for c in seg] for seg in geom.curve1.segments],
        "curve2": [[_c2pair(c) for c in seg] for seg in geom.curve2.segments],
        "anchors": [[t, _c2pair(p)] for t, p in geom.curve1.anchors],
        "i_plus": list(geom.i_plus),
        "i_minus": list(geom.i_minus),
    }
    return json.dumps(doc, indent=2, sort_keys=True)


def geometry_from_json(text):
    doc = json.loads(text)

    def decode(rows, anchors=()):
        seg = np.array(
            [[complex(re, im) for re, im in row] for row in rows], dtype=complex
        )
        return CurveSpec(seg, anchors=anchors)

    anchors = tuple(
        (float(t), complex(re, im)) for t, (re, im) in doc.get("anchors", [])
    )
    return SceneGeometry(
        curve1=decode(doc["curve1"], anchors),
        curve2=decode(doc["curve2"]),
        i_plus=tuple(doc.get("i_plus", (1.0, SQRT3))),
        i_minus=tuple(doc.get("i_minus", (-SQRT3, -1.0))),
    )
