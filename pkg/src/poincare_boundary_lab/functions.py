"""Evaluatable meromorphic functions on the disk and the constructed gallery.

A FunctionHandle packages vectorized evaluation, a derivative (closed form
when known, otherwise a boundary-scaled central difference), and a pole-safe
spherical derivative f# = |f'| / (1 + |f|^2).  Functions built from
exponential towers carry log-scale forms (log|f| and log|f'|) so the
spherical derivative survives |log|f|| far beyond double range; conversion
to ExtendedComplex saturates to 0 / infinity with a flag.

The gallery holds the closed-form probe functions; pole_sequence_function
builds the truncated series  sum_k eps_k^2 / (z - z_k)  over a pole schedule
whose poles march to the boundary point along the two boundary arcs of
deflection regions of growing radius, and damped_pole_sequence_function
multiplies it by (z - e^{i theta}).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import (
    DiskDomainError,
    ExtendedComplex,
    MobiusAutomorphism,
    as_complex,
    gudermann,
    radius_convert,
    strip_depth,
    strip_to_disk,
)

LOG_SATURATION = 700.0        # |log|f|| beyond this: saturate to 0 / infinity
POLE_SNAP = 1e-12             # closer than this to a pole counts as the pole
DERIV_STEP_SCALE = 1e-6       # central-difference step, times (1 - |z|)


class EvaluationError(RuntimeError):
    """Raised when a function value cannot be computed in any scale."""


def _central_diff(eval_array, z):
    z = np.asarray(z, dtype=complex)
    h = DERIV_STEP_SCALE * (1.0 - np.abs(z))
    return (eval_array(z + h) - eval_array(z - h)) / (2.0 * h)


class FunctionHandle:
    """Base class; subclasses provide eval_array and optionally more."""

    label = "function"
    pole_points: np.ndarray | None = None
    pole_residues: np.ndarray | None = None
    has_log = False

    # -- plumbing (numpy complex arrays) ------------------------------------

    def eval_array(self, z):
        raise NotImplementedError

    def deriv_array(self, z):
        return _central_diff(self.eval_array, z)

    def log_abs_array(self, z):
        v = self.eval_array(z)
        with np.errstate(divide="ignore"):
            return np.log(np.abs(v))

    def log_abs_deriv_array(self, z):
        d = self.deriv_array(z)
        with np.errstate(divide="ignore"):
            return np.log(np.abs(d))

    def log_sph_array(self, z):
        """log f#; -inf where f# vanishes, nan where evaluation fails."""
        with np.errstate(divide="ignore"):
            return np.log(self.sph_array(z))

    def sph_array(self, z):
        """Vectorized spherical derivative; nan marks evaluation failure."""
        z = np.asarray(z, dtype=complex)
        if self.has_log:
            with np.errstate(invalid="ignore"):
                return np.exp(self.log_sph_array(z))
        v = self.eval_array(z)
        d = self.deriv_array(z)
        av = np.abs(v)
        out = np.full(z.shape, np.nan)
        small = av <= 1.0
        out[small] = np.abs(d[small]) / (1.0 + av[small] ** 2)
        big = (~small) & np.isfinite(av)
        if np.any(big):
            q = np.abs(d[big] / v[big])
            out[big] = q / (av[big] + 1.0 / av[big])
        if self.pole_points is not None:
            dist = np.abs(z[:, None] - self.pole_points[None, :])
            nearest = np.argmin(dist, axis=1)
            at_pole = dist[np.arange(len(z)), nearest] < POLE_SNAP
            if np.any(at_pole):
                res = self.pole_residues[nearest[at_pole]]
                out[at_pole] = 1.0 / np.abs(res)
        return out

    # -- scalar spec surface -------------------------------------------------

    def eval(self, z) -> ExtendedComplex:
        zv = as_complex(z)
        if self.has_log:
            lm = float(self.log_abs_array(np.array([zv]))[0])
            if lm < -LOG_SATURATION:
                return ExtendedComplex("finite", 0.0, saturated=True)
            if lm > LOG_SATURATION:
                return ExtendedComplex("infinity", saturated=True)
        v = complex(self.eval_array(np.array([zv]))[0])
        if np.isnan(v.real) or np.isnan(v.imag):
            raise EvaluationError(f"{self.label} failed to evaluate at {zv!r}")
        if np.isinf(v.real) or np.isinf(v.imag):
            return ExtendedComplex.infinity()
        return ExtendedComplex.finite(v)

    def deriv(self, z) -> ExtendedComplex:
        zv = as_complex(z)
        v = complex(self.deriv_array(np.array([zv]))[0])
        if np.isnan(v.real) or np.isnan(v.imag):
            raise EvaluationError(f"{self.label} derivative failed at {zv!r}")
        if np.isinf(v.real) or np.isinf(v.imag):
            return ExtendedComplex.infinity()
        return ExtendedComplex.finite(v)

    def __repr__(self):
        return f"<FunctionHandle {self.label}>"


class CallableFunction(FunctionHandle):
    def __init__(self, label, fn, dfn=None, log_abs=None, log_abs_deriv=None):
        self.label = label
        self._fn = fn
        self._dfn = dfn
        self._log_abs = log_abs
        self._log_abs_deriv = log_abs_deriv
        self.has_log = log_abs is not None and log_abs_deriv is not None

    def eval_array(self, z):
        return self._fn(np.asarray(z, dtype=complex))

    def deriv_array(self, z):
        z = np.asarray(z, dtype=complex)
        if self._dfn is not None:
            return self._dfn(z)
        return _central_diff(self._fn, z)

    def log_abs_array(self, z):
        if self._log_abs is None:
            v = self.eval_array(z)
            with np.errstate(divide="ignore"):
                return np.log(np.abs(v))
        return self._log_abs(np.asarray(z, dtype=complex))

    def log_abs_deriv_array(self, z):
        if self._log_abs_deriv is None:
            d = self.deriv_array(z)
            with np.errstate(divide="ignore"):
                return np.log(np.abs(d))
        return self._log_abs_deriv(np.asarray(z, dtype=complex))


def identity_function() -> FunctionHandle:
    return CallableFunction("identity", lambda z: z, lambda z: np.ones_like(z))


def constant_function(c) -> FunctionHandle:
    cv = complex(c)
    return CallableFunction(f"constant:{cv}",
                            lambda z: np.full_like(z, cv),
                            lambda z: np.zeros_like(z))


def automorphism_function(m: MobiusAutomorphism) -> FunctionHandle:
    w = m.center
    tau = m.tau
    scale = complex(np.exp(1j * tau)) * (1.0 - abs(w) ** 2)

    def dfn(z):
        return scale / (1.0 + z * np.conj(w)) ** 2

    return CallableFunction(f"automorphism:{w}", m.apply_array, dfn)


def reciprocal_function(f: FunctionHandle) -> FunctionHandle:
    """1/f, for the reciprocal route of the spherical derivative."""

    def fn(z):
        v = f.eval_array(z)
        out = np.empty_like(v)
        finite = np.isfinite(v)
        with np.errstate(divide="ignore", invalid="ignore"):
            out[finite] = np.where(v[finite] == 0, np.inf + 0j, 1.0 / v[finite])
        out[~finite] = 0.0
        return out

    def dfn(z):
        v = f.eval_array(z)
        d = f.deriv_array(z)
        out = np.empty_like(v)
        finite = np.isfinite(v) & (v != 0)
        with np.errstate(divide="ignore", invalid="ignore"):
            out[finite] = -(d[finite] / v[finite]) / v[finite]
        out[~finite] = np.nan  # caller falls back to central differences
        bad = ~finite
        if np.any(bad):
            out[bad] = _central_diff(fn, np.asarray(z, complex)[bad])
        return out

    return CallableFunction(f"reciprocal({f.label})", fn, dfn)


# ---------------------------------------------------------------------------
# spherical derivative (spec surface)


def spherical_derivative(f: FunctionHandle, z) -> float:
    """f#(z) = |f'| / (1 + |f|^2); near poles computed through 1/f."""
    zv = as_complex(z)
    s = float(f.sph_array(np.array([zv]))[0])
    if math.isfinite(s):
        return s
    s = float(reciprocal_function(f).sph_array(np.array([zv]))[0])
    if math.isfinite(s):
        return s
    raise EvaluationError(f"spherical derivative of {f.label} failed at {zv!r}")


def lehto_virtanen_value(f: FunctionHandle, z) -> float:
    """(1 - |z|^2) f#(z), the normality density."""
    zv = as_complex(z)
    return (1.0 - abs(zv) ** 2) * spherical_derivative(f, zv)


def lehto_virtanen_array(f: FunctionHandle, z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    return (1.0 - np.abs(z) ** 2) * f.sph_array(z)


def log_lehto_virtanen_array(f: FunctionHandle, z) -> np.ndarray:
    """log of the normality density; comparable even where the density
    underflows doubles (the search objective for sup refinement)."""
    z = np.asarray(z, dtype=complex)
    a = np.abs(z)
    with np.errstate(divide="ignore"):
        base = np.log1p(-a) + np.log1p(a)
    return base + f.log_sph_array(z)


# ---------------------------------------------------------------------------
# pole schedules and the constructed series


@dataclass
class PoleSchedule:
    """Pole positions marching to e^{i theta} along the two boundary arcs of
    deflection regions of radius r_m (pseudo-hyperbolic), with disk radii
    eps_k around them.  The construction constraints are checked, not assumed:
    eps strictly decreasing to 0, the disks pairwise disjoint, hyperbolic
    disk diameters shrinking to 0, and sum eps_k finite.
    """

    theta: float
    pole_points: np.ndarray          # complex, pole k at index k-1
    radii: np.ndarray                # eps_k
    deflections: np.ndarray          # r_m, increasing to 1
    pole_strip: np.ndarray           # (k, 2) axial coordinates (s, t)
    hyperbolic_diameters: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.hyperbolic_diameters is None:
            self.hyperbolic_diameters = self._disk_diameters()
        self.validate()

    def _disk_diameters(self):
        # sup of d_h(z, z_k) over the euclidean disk |z - z_k| < eps_k, doubled
        out = []
        for zk, eps in zip(self.pole_points, self.radii):
            phis = np.linspace(0.0, 2.0 * np.pi, 64, endpoint=False)
            ring = zk + eps * np.exp(1j * phis)
            ring = ring[np.abs(ring) < 1.0]
            d = np.abs((ring - zk) / (1.0 - ring * np.conj(zk)))
            out.append(2.0 * float(np.max(np.log1p(d) - np.log1p(-d))))
        return np.asarray(out)

    def validate(self) -> dict:
        eps = self.radii
        checks = {
            "radii_strictly_decreasing": bool(np.all(np.diff(eps) < 0)),
            "radii_vanishing": bool(eps[-1] < eps[0] * 1e-3),
            "radii_summable": bool(np.all(eps[1:] / eps[:-1] <= 0.5)),
            "deflections_increasing": bool(np.all(np.diff(self.deflections) > 0)
                                           and np.all(self.deflections < 1.0)),
            # distances to the endpoint shrink; lag 4 spans the alternation
            # between the two boundary arcs and the deflection growth
            "poles_converge": bool(
                np.all(dist_end[4:] < dist_end[:-4])
                and dist_end[-1] < dist_end[0] * 0.05
                if len(dist_end := np.abs(self.pole_points - np.exp(1j * self.theta))) > 4
                else dist_end[-1] < dist_end[0]),
        }
        z = self.pole_points
        sep = np.abs(z[:, None] - z[None, :])
        need = eps[:, None] + eps[None, :]
        np.fill_diagonal(sep, np.inf)
        checks["disks_disjoint"] = bool(np.all(sep > need))
        dia = self.hyperbolic_diameters
        checks["hyperbolic_diameters_vanishing"] = bool(
            dia[-1] < dia[0] * 1e-2 and dia[-1] < 1e-2)
        if not all(checks.values()):
            bad = [k for k, v in checks.items() if not v]
            raise ValueError(f"pole schedule violates: {bad}")
        return checks

    def to_json_dict(self) -> dict:
        return {
            "theta": self.theta,
            "pole_points": [[z.real, z.imag] for z in self.pole_points],
            "radii": [float(e) for e in self.radii],
            "deflections": [float(r) for r in self.deflections],
            "pole_strip": [[float(s), float(t)] for s, t in self.pole_strip],
        }

    @classmethod
    def from_json_dict(cls, payload: dict) -> "PoleSchedule":
        return cls(
            float(payload["theta"]),
            np.array([complex(re, im) for re, im in payload["pole_points"]]),
            np.asarray(payload["radii"], dtype=float),
            np.asarray(payload["deflections"], dtype=float),
            np.asarray(payload["pole_strip"], dtype=float),
        )

    @classmethod
    def default(cls, theta: float = 0.0, count: int = 20) -> "PoleSchedule":
        """theta-rotated default: r_m = 1 - 2^{-m}, eps_k = 4^{-k}, pole k at
        depth ~2^{-k} on the upper arc for even k, lower for odd k."""
        if count < 4:
            raise ValueError("need at least 4 poles")
        ks = np.arange(1, count + 1)
        ms = (ks + 1) // 2
        r_m = 1.0 - 0.5 ** np.arange(1, ms[-1] + 1)
        eps = 0.25 ** ks
        pts, strip = [], []
        for k, m in zip(ks, ms):
            t = radius_convert(1.0 - 0.5 ** int(m), "ph_to_h")
            t *= 1.0 if k % 2 == 0 else -1.0
            target = 0.5 ** int(k)
            lo, hi = 0.0, 60.0
            for _ in range(80):   # strip_depth decreases in s
                mid = 0.5 * (lo + hi)
                if strip_depth(mid, t) > target:
                    lo = mid
                else:
                    hi = mid
            s = 0.5 * (lo + hi)
            pts.append(complex(strip_to_disk(s, t, theta)))
            strip.append((s, t))
        return cls(theta, np.asarray(pts), eps, r_m, np.asarray(strip))


class RationalPoleFunction(FunctionHandle):
    """Truncated series sum_{k<=K} eps_k^2 / (z - z_k)."""

    def __init__(self, schedule: PoleSchedule, truncation: int):
        if truncation < 1:
            raise ValueError("truncation must be >= 1")
        K = min(truncation, len(schedule.pole_points))
        self.label = f"pole-series:K={K}"
        self.schedule = schedule
        self.truncation = K
        self.pole_points = schedule.pole_points[:K]
        self.coeffs = (schedule.radii[:K] ** 2).astype(float)
        self.pole_residues = self.coeffs.astype(complex)
        self._tail_poles = schedule.pole_points[K:]
        self._tail_coeffs = (schedule.radii[K:] ** 2).astype(float)
        self._endpoint = complex(np.exp(1j * schedule.theta))
        # geometric remainder of sum eps_k^2 beyond the stored schedule
        q = 1.0 / 16.0
        n_total = len(schedule.radii)
        self._beyond_sum = (0.25 ** (n_total + 1)) ** 2 / (1.0 - q)

    def eval_array(self, z):
        z = np.asarray(z, dtype=complex)
        u = z[..., None] - self.pole_points
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = self.coeffs / u
        out = terms.sum(axis=-1)
        hit = np.min(np.abs(u), axis=-1) < POLE_SNAP
        out = np.where(hit, np.inf + 0j, out)
        return out

    def deriv_array(self, z):
        z = np.asarray(z, dtype=complex)
        u = z[..., None] - self.pole_points
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = -self.coeffs / u ** 2
        out = terms.sum(axis=-1)
        hit = np.min(np.abs(u), axis=-1) < POLE_SNAP
        return np.where(hit, np.inf + 0j, out)

    def truncation_bound(self, z) -> np.ndarray:
        """Upper bound for the dropped tail sum_{k>K} eps_k^2 / |z - z_k|."""
        z = np.asarray(z, dtype=complex)
        if len(self._tail_poles):
            u = np.abs(z[..., None] - self._tail_poles)
            stored = (self._tail_coeffs / np.maximum(u, 1e-300)).sum(axis=-1)
        else:
            stored = np.zeros(z.shape)
        gap = np.maximum(np.abs(z - self._endpoint) / 2.0, 1e-300)
        return stored + self._beyond_sum / gap


class DampedPoleFunction(FunctionHandle):
    """The pole series multiplied by (z - e^{i theta}): same poles, boundary
    factor forcing the value 0 along the deflection regions."""

    def __init__(self, base: RationalPoleFunction):
        self.label = f"damped-{base.label}"
        self.base = base
        self._endpoint = base._endpoint
        self.pole_points = base.pole_points
        self.pole_residues = base.coeffs * (base.pole_points - self._endpoint)

    def eval_array(self, z):
        z = np.asarray(z, dtype=complex)
        v = self.base.eval_array(z)
        out = v * (z - self._endpoint)
        out[~np.isfinite(v)] = np.inf + 0j
        return out

    def deriv_array(self, z):
        z = np.asarray(z, dtype=complex)
        v = self.base.eval_array(z)
        d = self.base.deriv_array(z)
        out = d * (z - self._endpoint) + v
        bad = ~(np.isfinite(v) & np.isfinite(d))
        out[bad] = np.inf + 0j
        return out


def pole_sequence_function(schedule: PoleSchedule, truncation: int) -> RationalPoleFunction:
    return RationalPoleFunction(schedule, truncation)


def damped_pole_sequence_function(schedule: PoleSchedule, truncation: int) -> DampedPoleFunction:
    return DampedPoleFunction(RationalPoleFunction(schedule, truncation))


# ---------------------------------------------------------------------------
# gallery of exponential-tower probes (log-scale evaluation)


class LogScaleFunction(FunctionHandle):
    """f = exp(L(z)) with explicit log-magnitude forms; saturating eval.

    log_deriv_factor = log|L'| stays finite even where Re L overflows to
    +-inf, which keeps the spherical derivative computable at any depth:
    log f# = log|L'| + (Re L - log(1 + e^{2 Re L})).
    """

    has_log = True

    def __init__(self, label, log_complex, log_abs, log_deriv_factor, deriv_factor):
        self.label = label
        self._logc = log_complex               # L(z), may overflow to inf parts
        self._log_abs = log_abs                # Re L, computed without overflow
        self._log_deriv_factor = log_deriv_factor   # log |L'|, always finite
        self._deriv_factor = deriv_factor      # L'(z)

    def eval_array(self, z):
        z = np.asarray(z, dtype=complex)
        lm = self._log_abs(z)
        out = np.empty(z.shape, dtype=complex)
        sat_lo = lm < -LOG_SATURATION
        sat_hi = lm > LOG_SATURATION
        ok = ~(sat_lo | sat_hi)
        if np.any(ok):
            out[ok] = np.exp(self._logc(z[ok]))
        out[sat_lo] = 0.0
        out[sat_hi] = np.inf
        return out

    def deriv_array(self, z):
        z = np.asarray(z, dtype=complex)
        v = self.eval_array(z)
        fac = self._deriv_factor(z)
        out = v * fac
        out[~np.isfinite(v)] = np.inf
        return out

    def log_abs_array(self, z):
        return self._log_abs(np.asarray(z, dtype=complex))

    def log_abs_deriv_array(self, z):
        z = np.asarray(z, dtype=complex)
        return self._log_abs(z) + self._log_deriv_factor(z)

    def log_sph_array(self, z):
        z = np.asarray(z, dtype=complex)
        lm = self._log_abs(z)
        lp = self._log_deriv_factor(z)
        # lm - log(1 + e^{2 lm}) -> -|lm| in both tails; finite at any depth
        tail = np.abs(lm) > 350.0
        with np.errstate(invalid="ignore", over="ignore"):
            mid = lm - np.logaddexp(0.0, 2.0 * lm)
        return lp + np.where(tail, -np.abs(lm), mid)


def _gavrilov() -> FunctionHandle:
    # f = exp(-exp(1/(1-z)))
    def E(z):
        return 1.0 / (1.0 - z)

    def log_abs(z):
        e = E(z)
        c = np.cos(e.imag)
        with np.errstate(divide="ignore", over="ignore"):
            mag = np.exp(e.real + np.log(np.abs(c)))
        return -np.sign(c) * mag

    def logc(z):
        return -np.exp(E(z))

    def log_deriv_factor(z):
        e = E(z)
        return e.real - 2.0 * np.log(np.abs(1.0 - z))

    def deriv_factor(z):
        e = E(z)
        return -np.exp(e) * e ** 2

    return LogScaleFunction("gavrilov_g", logc, log_abs, log_deriv_factor, deriv_factor)


def _saginjan() -> FunctionHandle:
    # f = exp(-1/(1-z))
    def logc(z):
        return -1.0 / (1.0 - z)

    def log_abs(z):
        return np.real(-1.0 / (1.0 - z))

    def log_deriv_factor(z):
        return -2.0 * np.log(np.abs(1.0 - z))

    def deriv_factor(z):
        return -1.0 / (1.0 - z) ** 2

    return LogScaleFunction("saginjan_h", logc, log_abs, log_deriv_factor, deriv_factor)


def _square_exp() -> FunctionHandle:
    # f = exp(-(1-z)^{-2})
    def logc(z):
        return -(1.0 - z) ** -2.0

    def log_abs(z):
        return np.real(-(1.0 - z) ** -2.0)

    def log_deriv_factor(z):
        return math.log(2.0) - 3.0 * np.log(np.abs(1.0 - z))

    def deriv_factor(z):
        return -2.0 * (1.0 - z) ** -3.0

    return LogScaleFunction("square_exp", logc, log_abs, log_deriv_factor, deriv_factor)


_GALLERY = {
    "gavrilov_g": _gavrilov,
    "saginjan_h": _saginjan,
    "square_exp": _square_exp,
}


def gallery(name: str) -> FunctionHandle:
    """Closed-form probe functions addressable by name."""
    try:
        return _GALLERY[name]()
    except KeyError:
        raise ValueError(f"unknown gallery function {name!r}; "
                         f"choices: {sorted(_GALLERY)}") from None


def gallery_names() -> list[str]:
    return sorted(_GALLERY)
