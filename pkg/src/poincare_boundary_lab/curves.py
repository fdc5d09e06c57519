"""Boundary-terminating curves, curvilinear angles, and curve distances.

A BoundaryCurve is a simple curve in the open disk ending at a unit-modulus
point e^{i theta}, represented by an ordered sample polyline plus a refinement
rule: refine(k) resamples the curve equidistributed in hyperbolic arclength
(mesh HYP_MESH) out to depth 1 - |last sample| <= 2^{-k}.  Refinement is
prefix-consistent: refine(k+1) extends refine(k).

The module provides the deflection regions Delta_r gamma (unions of closed
pseudo-hyperbolic disks along the curve), the directed truncated Hausdorff
distance between curves, the finite-distance equivalence verdict, the
discrete Frechet distance, and the zigzag construction of a pair of curves
that stay within a fixed deflection of each other while their Frechet
distance grows without bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import (
    ALGEBRAIC_TOL,
    as_complex,
    axis_point,
    hyperbolic_distance_array,
    hyperbolic_from_pseudo_array,
    mobius_translation,
    pseudo_hyperbolic_distance_array,
    radius_convert,
    strip_depth,
    strip_distance,
    strip_to_disk,
    disk_to_strip,
)

HYP_MESH = 0.25       # target hyperbolic gap between consecutive samples
DEFAULT_LEVEL = 8

# verdict thresholds (recorded in every EquivalenceVerdict)
PLATEAU_RATIO = 1.05       # last three levels within 5% => bounded
SMALL_DISTANCE = 0.05      # below this the plateau ratio test is moot
GROWTH_RUN = 5             # strictly increasing levels needed for divergence
GROWTH_FLOOR = 5.0         # and the last value must exceed this


class CurveEndpointMismatch(ValueError):
    """Raised when two curves do not share a boundary endpoint."""


def _depth_target(level: int) -> float:
    return 2.0 ** (-level)


class BoundaryCurve:
    """Base class: subclasses fill _extend_to_depth and _strip_extend."""

    def __init__(self, endpoint_angle: float, label: str = "curve"):
        self.endpoint_angle = float(endpoint_angle)
        self.label = label
        self._levels: dict[int, np.ndarray] = {}
        self._strip_levels: dict[int, tuple[np.ndarray, np.ndarray]] = {}

    # -- public surface ----------------------------------------------------

    def refine(self, level: int) -> np.ndarray:
        """Complex samples out to depth 2^{-level}; memoized and nested."""
        if level < 1:
            raise ValueError("level must be >= 1")
        if level not in self._levels:
            s, t = self.strip_refine(level)
            self._levels[level] = strip_to_disk(s, t, self.endpoint_angle)
        return self._levels[level]

    def strip_refine(self, level: int) -> tuple[np.ndarray, np.ndarray]:
        """Axial-coordinate samples (s, t); exact arbitrarily deep."""
        if level not in self._strip_levels:
            self._strip_levels[level] = self._build_strip(level)
        return self._strip_levels[level]

    @property
    def samples(self) -> np.ndarray:
        return self.refine(DEFAULT_LEVEL)

    @property
    def endpoint(self) -> complex:
        return complex(np.exp(1j * self.endpoint_angle))

    def max_gap(self, level: int) -> float:
        """Max adjacent-sample pseudo-hyperbolic gap (the sampling slack)."""
        s, t = self.strip_refine(level)
        d = strip_distance(s[:-1], t[:-1], s[1:], t[1:])
        return float(np.tanh(np.max(d) / 2.0)) if len(s) > 1 else 0.0

    def max_gap_hyperbolic(self, level: int) -> float:
        s, t = self.strip_refine(level)
        d = strip_distance(s[:-1], t[:-1], s[1:], t[1:])
        return float(np.max(d)) if len(s) > 1 else 0.0

    def _build_strip(self, level):
        raise NotImplementedError


class ParametricCurve(BoundaryCurve):
    """Curve given by a parameter u decreasing to 0 as the point approaches
    the endpoint; samples are stepped in hyperbolic arclength by bisection."""

    def __init__(self, endpoint_angle, point_fn, u_start, label="curve"):
        super().__init__(endpoint_angle, label)
        self._point = point_fn          # u -> complex disk point
        self._u = [float(u_start)]
        self._pts = [complex(point_fn(u_start))]

    def _dh(self, a: complex, b: complex) -> float:
        d = abs((a - b) / (1.0 - a * np.conj(b)))
        return math.log1p(d) - math.log1p(-d)

    def _step(self, u: float) -> float:
        z = self._point(u)
        hi = u
        lo = u * 0.5
        while self._dh(z, self._point(lo)) < HYP_MESH:
            hi = lo
            lo *= 0.5
            if lo < 1e-300:
                raise RuntimeError("curve parametrization does not reach the boundary")
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if self._dh(z, self._point(mid)) < HYP_MESH:
                hi = mid
            else:
                lo = mid
        return lo

    def _build_strip(self, level):
        # extend on local copies and rebind: idempotent and safe under
        # concurrent first-call (last writer wins with identical content)
        target = _depth_target(level)
        us, pts = list(self._u), list(self._pts)
        while 1.0 - abs(pts[-1]) > target:
            u = self._step(us[-1])
            us.append(u)
            pts.append(complex(self._point(u)))
        self._u, self._pts = us, pts
        arr = np.asarray(pts, dtype=complex)
        depth = 1.0 - np.abs(arr)
        n = int(np.argmax(depth <= target)) + 1
        s, t = disk_to_strip(arr[:n], self.endpoint_angle)
        return s, t


class RadiusCurve(BoundaryCurve):
    """The radius from 0 to e^{i theta}; axial samples (j * mesh, 0)."""

    def __init__(self, endpoint_angle: float):
        super().__init__(endpoint_angle, f"radius:{endpoint_angle:g}")

    def _build_strip(self, level):
        target = _depth_target(level)
        s_end = (level + 1) * math.log(2.0)
        n = int(math.ceil(s_end / HYP_MESH)) + 1
        s = HYP_MESH * np.arange(n + 1)
        t = np.zeros_like(s)
        deep = strip_depth(s, t) <= target
        keep = int(np.argmax(deep)) + 1 if np.any(deep) else len(s)
        return s[:keep], t[:keep]


class HypercycleCurve(BoundaryCurve):
    """Constant hyperbolic offset t0 from the diameter geodesic."""

    def __init__(self, endpoint_angle: float, pseudo_offset: float):
        if not -1.0 < pseudo_offset < 1.0:
            raise ValueError("hypercycle offset must be in (-1, 1)")
        super().__init__(endpoint_angle,
                         f"hypercycle:{endpoint_angle:g}:{pseudo_offset:g}")
        self.pseudo_offset = float(pseudo_offset)
        self.t0 = radius_convert(abs(pseudo_offset), "ph_to_h") * (
            1.0 if pseudo_offset >= 0 else -1.0)
        # arclength step producing chordal hyperbolic gaps of HYP_MESH
        c = (math.cosh(HYP_MESH) + math.sinh(self.t0) ** 2) / math.cosh(self.t0) ** 2
        self._ds = math.acosh(max(c, 1.0))

    def _build_strip(self, level):
        target = _depth_target(level)
        # strip_depth(s, t0) decreases in s; find the needed count directly
        s_end = math.log(2.0 / target) + 1.0  # depth <= 2 e^{-s}; slight margin
        n = int(math.ceil(s_end / self._ds)) + 1
        s = self._ds * np.arange(n + 1)
        t = np.full_like(s, self.t0)
        keep = int(np.argmax(strip_depth(s, t) <= target)) + 1
        return s[:keep], t[:keep]


def canonical_curve(kind: str, theta: float, parameter: float | None = None) -> BoundaryCurve:
    """Canonical curve families ending at e^{i theta}.

    kind = "radius"                     parameter unused
    kind = "chord"      parameter = angle to the radius, in (-pi/2, pi/2)
    kind = "hypercycle" parameter = signed pseudo-hyperbolic offset in (-1, 1)
    kind = "horocycle"  parameter = side (+1 upper / -1 lower), default +1
    """
    theta = float(theta)
    if kind == "radius":
        return RadiusCurve(theta)
    if kind == "chord":
        if parameter is None or not -math.pi / 2 < parameter < math.pi / 2:
            raise ValueError("chord angle must be in (-pi/2, pi/2)")
        alpha = float(parameter)
        rot = complex(np.exp(1j * theta))
        fn = lambda u: rot * (1.0 - u * complex(np.exp(-1j * alpha)))
        c = ParametricCurve(theta, fn, math.cos(alpha), f"chord:{theta:g}:{alpha:g}")
        return c
    if kind == "hypercycle":
        if parameter is None:
            raise ValueError("hypercycle needs a pseudo-hyperbolic offset")
        return HypercycleCurve(theta, float(parameter))
    if kind == "horocycle":
        side = 1.0 if parameter is None or parameter >= 0 else -1.0
        rot = complex(np.exp(1j * theta))
        fn = lambda phi: rot * (1.0 + complex(np.exp(1j * side * phi))) / 2.0
        c = ParametricCurve(theta, fn, math.pi, f"horocycle:{theta:g}")
        return c
    raise ValueError(f"unknown curve kind {kind!r}")


# ---------------------------------------------------------------------------
# curvilinear angles


@dataclass(frozen=True)
class CurvilinearAngle:
    """Union of closed pseudo-hyperbolic disks of radius `deflection` centered
    on the curve; deflection 0 degenerates to the curve itself."""

    curve: BoundaryCurve
    deflection: float

    def __post_init__(self):
        if not 0.0 <= self.deflection < 1.0:
            raise ValueError("deflection must be a pseudo-hyperbolic radius in [0, 1)")

    @property
    def hyperbolic_deflection(self) -> float:
        return radius_convert(self.deflection, "ph_to_h")

    @classmethod
    def from_hyperbolic(cls, curve, r_hyp: float) -> "CurvilinearAngle":
        return cls(curve, radius_convert(r_hyp, "h_to_ph"))


def angle_contains(angle: CurvilinearAngle, z, level: int = DEFAULT_LEVEL) -> bool:
    """Sampled membership test: min d_ph(z, samples) <= deflection + slack."""
    if level < 1:
        raise ValueError("level must be >= 1")
    zv = as_complex(z)
    samples = angle.curve.refine(level)
    d = pseudo_hyperbolic_distance_array(zv, samples)
    slack = angle.curve.max_gap(level)
    return bool(np.min(d) <= angle.deflection + slack + ALGEBRAIC_TOL)


def angle_min_distance(angle: CurvilinearAngle, z, level: int = DEFAULT_LEVEL) -> float:
    zv = as_complex(z)
    return float(np.min(pseudo_hyperbolic_distance_array(zv, angle.curve.refine(level))))


# ---------------------------------------------------------------------------
# directed curve distance and equivalence


def _strip_distance_matrix(s1, t1, s2, t2):
    with np.errstate(over="ignore"):
        c = (np.cosh(s1[:, None] - s2[None, :])
             * (np.cosh(t1)[:, None] * np.cosh(t2)[None, :])
             - np.sinh(t1)[:, None] * np.sinh(t2)[None, :])
    return np.arccosh(np.maximum(c, 1.0))


def _check_same_endpoint(c1: BoundaryCurve, c2: BoundaryCurve):
    d = (c1.endpoint_angle - c2.endpoint_angle) % (2.0 * math.pi)
    if min(d, 2.0 * math.pi - d) > 1e-9:
        raise CurveEndpointMismatch(
            f"curves end at different boundary points: "
            f"{c1.endpoint_angle!r} vs {c2.endpoint_angle!r}")


def directed_curve_distance(c1: BoundaryCurve, c2: BoundaryCurve, level: int) -> float:
    """sup over refine(level) samples of c1 of the hyperbolic distance to
    c2's refine(level+2) samples: a directed Hausdorff distance at truncation
    `level`."""
    if level < 1:
        raise ValueError("level must be >= 1")
    _check_same_endpoint(c1, c2)
    s1, t1 = c1.strip_refine(level)
    s2, t2 = c2.strip_refine(level + 2)
    d = _strip_distance_matrix(s1, t1, s2, t2)
    return float(np.max(np.min(d, axis=1)))


@dataclass
class EquivalenceVerdict:
    """Per-level directed distances and the finiteness verdict.

    `values` holds max(forward, backward) per level.  The verdict encodes the
    trend evidence: bounded sequences (last three levels within PLATEAU_RATIO,
    or all below SMALL_DISTANCE) are called equivalent; sequences strictly
    increasing over the last GROWTH_RUN levels and ending above GROWTH_FLOOR
    are called not_equivalent; anything else is inconclusive.
    """

    levels: list[int]
    forward: list[float]
    backward: list[float]
    verdict: str
    thresholds: dict = field(default_factory=lambda: {
        "plateau_ratio": PLATEAU_RATIO,
        "small_distance": SMALL_DISTANCE,
        "growth_run": GROWTH_RUN,
        "growth_floor": GROWTH_FLOOR,
    })

    @property
    def values(self) -> list[float]:
        return [max(f, b) for f, b in zip(self.forward, self.backward)]

    def to_dict(self) -> dict:
        return {
            "levels": self.levels,
            "forward": self.forward,
            "backward": self.backward,
            "values": self.values,
            "verdict": self.verdict,
            "thresholds": self.thresholds,
        }


def _trend_verdict(values: list[float]) -> str:
    if len(values) >= 3:
        last3 = values[-3:]
        if max(last3) <= SMALL_DISTANCE:
            return "equivalent"
        if min(last3) > 0 and max(last3) / min(last3) <= PLATEAU_RATIO:
            return "equivalent"
    if len(values) >= GROWTH_RUN:
        tail = values[-GROWTH_RUN:]
        if all(a < b for a, b in zip(tail, tail[1:])) and tail[-1] > GROWTH_FLOOR:
            return "not_equivalent"
    return "inconclusive"


def are_equivalent(c1: BoundaryCurve, c2: BoundaryCurve,
                   max_level: int = 12) -> EquivalenceVerdict:
    """Run the directed distance both ways over levels 1..max_level and judge
    whether the two curves are at finite distance (same equivalence class)."""
    _check_same_endpoint(c1, c2)
    levels = list(range(1, max_level + 1))
    fwd = [directed_curve_distance(c1, c2, k) for k in levels]
    bwd = [directed_curve_distance(c2, c1, k) for k in levels]
    values = [max(f, b) for f, b in zip(fwd, bwd)]
    return EquivalenceVerdict(levels, fwd, bwd, _trend_verdict(values))


def angle_inclusion_check(c1: BoundaryCurve, c2: BoundaryCurve, r: float,
                          r1: float, samples: int = 1000,
                          level: int = DEFAULT_LEVEL, seed: int = 0,
                          r2: float | None = None) -> bool:
    """Sampled check that the r1-angle over c1 sits inside the (r1+r)-angle
    over c2 (hyperbolic radii): triangle-inequality inflation of curve
    distance to region inclusion.  Pass r2 to test a different target radius.

    Points of Delta_{r1} c1 are drawn by pushing disk samples through the
    automorphisms centered at curve samples (30% of them on the boundary
    circle of the disk, where violations happen first).
    """
    _check_same_endpoint(c1, c2)
    if r2 is None:
        r2 = r1 + r
    rng = np.random.default_rng(seed)
    cs = c1.refine(level)
    s2, t2 = c2.strip_refine(level + 2)
    slack = c2.max_gap_hyperbolic(level + 2) + 1e-9
    idx = rng.integers(0, len(cs), samples)
    rho_ph = math.tanh(r1 / 2.0)
    rad = rho_ph * np.sqrt(rng.uniform(0.0, 1.0, samples))
    boundary = rng.uniform(0.0, 1.0, samples) < 0.3
    rad[boundary] = rho_ph
    u = rad * np.exp(1j * rng.uniform(0.0, 2.0 * math.pi, samples))
    for i in range(samples):
        w = cs[idx[i]]
        z = mobius_translation(w).apply(u[i])
        sz, tz = disk_to_strip(z, c1.endpoint_angle)
        d = np.min(strip_distance(sz, tz, s2, t2))
        if d > r2 + slack:
            return False
    return True


# ---------------------------------------------------------------------------
# discrete Frechet distance


def _frechet_dp(dist: np.ndarray) -> float:
    """Coupled-traversal DP (Eiter-Mannila) over a ready distance matrix."""
    n, m = dist.shape
    prev = dist[0].copy()
    np.maximum.accumulate(prev, out=prev)
    prev = prev.tolist()
    for i in range(1, n):
        di = dist[i].tolist()
        cur = [0.0] * m
        c = max(prev[0], di[0])
        cur[0] = c
        for j in range(1, m):
            mn = prev[j]
            pjm = prev[j - 1]
            if pjm < mn:
                mn = pjm
            if c < mn:
                mn = c
            v = di[j]
            c = v if v > mn else mn
            cur[j] = c
        prev = cur
    return float(prev[-1])


def discrete_frechet(p_samples, q_samples) -> float:
    """Discrete Frechet distance between two sample polylines, with
    hyperbolic leg distance (complex samples)."""
    p = np.atleast_1d(np.asarray(p_samples, dtype=complex))
    q = np.atleast_1d(np.asarray(q_samples, dtype=complex))
    if len(p) == 0 or len(q) == 0:
        raise ValueError("sample lists must be non-empty")
    d = hyperbolic_distance_array(p[:, None], q[None, :])
    return _frechet_dp(d)


def discrete_frechet_strip(s1, t1, s2, t2) -> float:
    """Discrete Frechet distance on axial-coordinate samples (exact deep)."""
    if len(s1) == 0 or len(s2) == 0:
        raise ValueError("sample lists must be non-empty")
    return _frechet_dp(_strip_distance_matrix(
        np.asarray(s1, float), np.asarray(t1, float),
        np.asarray(s2, float), np.asarray(t2, float)))


def curve_frechet(c1: BoundaryCurve, c2: BoundaryCurve, level: int) -> float:
    """Discrete Frechet distance between two curves truncated at `level`."""
    _check_same_endpoint(c1, c2)
    s1, t1 = c1.strip_refine(level)
    s2, t2 = c2.strip_refine(level)
    return discrete_frechet_strip(s1, t1, s2, t2)


def directed_hausdorff(p_samples, q_samples) -> float:
    """max over p of min over q of the hyperbolic distance (complex samples)."""
    p = np.atleast_1d(np.asarray(p_samples, dtype=complex))
    q = np.atleast_1d(np.asarray(q_samples, dtype=complex))
    d = hyperbolic_distance_array(p[:, None], q[None, :])
    return float(np.max(np.min(d, axis=1)))


# ---------------------------------------------------------------------------
# polyline simplicity (at sample resolution)


def polyline_is_simple(points) -> bool:
    """True iff no two non-adjacent segments of the polyline intersect.

    Points may be complex or an (n, 2) array.  O(n^2) sweep, vectorized per
    segment; adequate for the sample counts used here.
    """
    pts = np.asarray(points)
    if pts.ndim == 1:
        xy = np.column_stack([pts.real.astype(float), pts.imag.astype(float)])
    else:
        xy = pts.astype(float)
    n = len(xy) - 1
    if n < 2:
        return True
    a = xy[:-1]
    b = xy[1:]

    def orient(p, q, r):
        return ((q[..., 0] - p[..., 0]) * (r[..., 1] - p[..., 1])
                - (q[..., 1] - p[..., 1]) * (r[..., 0] - p[..., 0]))

    for i in range(n - 2):
        js = np.arange(i + 2, n)
        p, q = a[i], b[i]
        r, s = a[js], b[js]
        d1 = orient(p[None, :], q[None, :], r)
        d2 = orient(p[None, :], q[None, :], s)
        d3 = orient(r, s, p[None, :])
        d4 = orient(r, s, q[None, :])
        crossing = ((d1 * d2) < 0) & ((d3 * d4) < 0)
        if np.any(crossing):
            return False
        # collinear overlap: conservative bounding-box check on degenerate rows
        deg = (d1 == 0) & (d2 == 0) & (d3 == 0) & (d4 == 0)
        if np.any(deg):
            lo1 = np.minimum(p, q)
            hi1 = np.maximum(p, q)
            lo2 = np.minimum(r[deg], s[deg])
            hi2 = np.maximum(r[deg], s[deg])
            overlap = np.all((lo1[None, :] <= hi2) & (lo2 <= hi1[None, :]), axis=1)
            if np.any(overlap):
                return False
    return True


# ---------------------------------------------------------------------------
# zigzag pair: same deflection class, unbounded Frechet distance


class StripPolylineCurve(BoundaryCurve):
    """Curve given by a polyline in axial coordinates plus a straight tail at
    fixed offset; refine(k) densifies edges at HYP_MESH and extends the tail
    until the depth target is met."""

    def __init__(self, endpoint_angle, vertices, tail_offset, label="strip-polyline"):
        super().__init__(endpoint_angle, label)
        self.vertices = [(float(s), float(t)) for s, t in vertices]
        self.tail_offset = float(tail_offset)

    def _densify(self):
        vs = np.asarray(self.vertices, dtype=float)
        out_s, out_t = [vs[0, 0]], [vs[0, 1]]
        for (s0, t0), (s1, t1) in zip(vs[:-1], vs[1:]):
            d = float(strip_distance(s0, t0, s1, t1))
            pieces = max(1, int(math.ceil(d / HYP_MESH)))
            frac = np.arange(1, pieces + 1) / pieces
            out_s.extend(s0 + (s1 - s0) * frac)
            out_t.extend(t0 + (t1 - t0) * frac)
        return np.asarray(out_s), np.asarray(out_t)

    def _build_strip(self, level):
        target = _depth_target(level)
        s, t = self._densify()
        # tail: continue at the final offset until deep enough, then trim at
        # the first sample past the depth target (keeps truncation ends of
        # different curves aligned to within one mesh step)
        s_last, t_last = s[-1], self.tail_offset
        ds = HYP_MESH / math.cosh(t_last)
        s_end = math.log(2.0 * math.cosh(t_last) / target) + 1.0
        if s_end > s_last:
            n = int(math.ceil((s_end - s_last) / ds))
            tail_s = s_last + ds * np.arange(1, n + 1)
            tail_t = np.full(n, t_last)
            deep = strip_depth(tail_s, tail_t) <= target
            keep = int(np.argmax(deep)) + 1 if np.any(deep) else n
            s = np.concatenate([s, tail_s[:keep]])
            t = np.concatenate([t, tail_t[:keep]])
        return s, t


def zigzag_anchor_positions(n_zigzags: int) -> tuple[list[float], list[float]]:
    """Axial positions of the forward anchors (at k^2) and the return anchors
    (each at hyperbolic distance 1 behind the previous forward anchor)."""
    zs = [float(k * k) for k in range(1, n_zigzags + 2)]
    ws = [0.5] + [float(k * k - 1) for k in range(1, n_zigzags)]
    return zs, ws[:n_zigzags]


def build_zigzag_pair(r: float, n_zigzags: int):
    """Construct the radius gamma1 and a simple curve gamma2 inside the
    deflection band Delta_{r/2} gamma1 that revisits anchor points of gamma1
    in the order z1, z2, w1, z3, w2, ...: each return leg forces any
    order-preserving matching to stretch, so the Frechet distance over
    prefixes grows without bound while the band containment stays fixed.

    Returns (gamma1, gamma2, markers).  markers records the anchor schedule,
    visit order, lane offsets and the clearance (r/4) kept by the traveling
    lanes, so tests do not depend on the concrete routing.
    """
    if not 0.0 < r < 1.0:
        raise ValueError("r must be a pseudo-hyperbolic radius in (0, 1)")
    if n_zigzags < 0:
        raise ValueError("n_zigzags must be >= 0")
    theta = 0.0
    gamma1 = RadiusCurve(theta)

    zs, ws = zigzag_anchor_positions(n_zigzags)
    markers = {
        "theta": theta,
        "deflection_band": r / 2.0,
        "clearance": r / 4.0,
        "z_anchors_s": zs,
        "w_anchors_s": ws,
        "z_anchors": [complex(strip_to_disk(s, 0.0)) for s in zs],
        "w_anchors": [complex(strip_to_disk(s, 0.0)) for s in ws],
    }
    if n_zigzags == 0:
        # gamma2 degenerates to a prefix of gamma1 (the radius itself); give
        # it the radius sampling grid so the Frechet distance is exactly 0.
        markers["visit_s"] = zs[:1]
        gamma2 = RadiusCurve(theta)
        gamma2.label = "zigzag:0"
        return gamma1, gamma2, markers

    # visit order: z1, z2, w1, z3, w2, ..., z_{n+1}, w_n
    visit = [zs[0], zs[1]]
    for i in range(1, n_zigzags):
        visit += [ws[i - 1], zs[i + 1]]
    visit.append(ws[n_zigzags - 1])
    markers["visit_s"] = visit

    # lanes travel above the axis at strictly decreasing offsets in
    # [clearance, band); earlier-visited anchors inside a lane's span are
    # cleared by dipping below the axis, at strictly increasing depths, so
    # same-anchor dips nest and never touch.
    eps = 0.2
    n_lanes = len(visit)  # one lane per leg plus the tail lane
    y_lane = [r / 4.0 + (r / 4.0) * 2.0 ** (-(j + 1)) for j in range(n_lanes)]
    y_dip = [r / 2.0 - (r / 8.0) * 2.0 ** (-j) for j in range(n_lanes)]
    t_lane = [radius_convert(y, "ph_to_h") for y in y_lane]
    t_dip = [-radius_convert(y, "ph_to_h") for y in y_dip]

    verts: list[tuple[float, float]] = [(visit[0], 0.0)]
    visited: list[float] = []

    def add_leg(j, s_a, s_b):
        d = 1.0 if s_b > s_a else -1.0
        tj, tdj = t_lane[j], t_dip[j]
        verts.append((s_a + d * eps, tj))
        lo, hi = min(s_a, s_b), max(s_a, s_b)
        inner = sorted((q for q in visited if lo < q < hi), reverse=d < 0)
        for q in inner:
            verts.append((q - d * eps, tj))
            verts.append((q, tdj))
            verts.append((q + d * eps, tj))
        verts.append((s_b - d * eps, tj))
        verts.append((s_b, 0.0))

    for j in range(len(visit) - 1):
        visited.append(visit[j])
        add_leg(j, visit[j], visit[j + 1])
    visited.append(visit[-1])

    # tail lane: forward from the last anchor, clearing remaining anchors
    j = n_lanes - 1
    tj, tdj = t_lane[j], t_dip[j]
    s_a = visit[-1]
    verts.append((s_a + eps, tj))
    for q in sorted(q for q in visited if q > s_a):
        verts.append((q - eps, tj))
        verts.append((q, tdj))
        verts.append((q + eps, tj))
    tail_start = max(max(visited) + eps, s_a + eps) + eps
    verts.append((tail_start, tj))

    markers["lane_offsets"] = y_lane
    markers["dip_offsets"] = y_dip
    gamma2 = StripPolylineCurve(theta, verts, tj, label=f"zigzag:{n_zigzags}")
    return gamma1, gamma2, markers


# ---------------------------------------------------------------------------
# curve exchange format


class SampleBackedCurve(BoundaryCurve):
    """Curve defined by a fixed sample list (the CLI exchange format);
    refine ignores the level beyond truncating at the level's depth."""

    def __init__(self, endpoint_angle, samples, label="imported"):
        super().__init__(endpoint_angle, label)
        self._fixed = np.asarray(samples, dtype=complex)
        if len(self._fixed) == 0:
            raise ValueError("curve needs at least one sample")

    def _build_strip(self, level):
        return disk_to_strip(self._fixed, self.endpoint_angle)


def curve_to_exchange(curve: BoundaryCurve, level: int = DEFAULT_LEVEL) -> dict:
    pts = curve.refine(level)
    return {
        "endpoint_angle": curve.endpoint_angle,
        "samples": [[float(p.real), float(p.imag)] for p in pts],
    }


def curve_from_exchange(payload: dict) -> BoundaryCurve:
    samples = [complex(re, im) for re, im in payload["samples"]]
    return SampleBackedCurve(float(payload["endpoint_angle"]), samples)
