"""Lifts of torus homeomorphisms built from vertical/horizontal shears,
their iteration, and rotation-set estimation.

A map expression is a small AST over the generators

    V(x, y) = (x, y + phi(x))      (vertical shear)
    H(x, y) = (x + phi(y), y)      (horizontal shear)
    T(a, b)                        (rigid translation)

where phi is a 1-periodic speed profile with phi(0) = 0 and phi(1/2) = 1,
taking values in [0, 1].  Composition is applied right to left, so
Compose([a, b]) means "a after b".

Arithmetic is double precision with Kahan-compensated accumulation of
per-step displacements; orbit positions are wrapped to [0,1)^2 each step
(wrapping is exact in binary floating point, and the profiles are
1-periodic, so this loses nothing).  The sine-squared profile is evaluated
exactly at half-integers, which makes the distinguished fixed points of
V^n H^n and their displacement vectors exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

import numpy as np

from .geometry import ConvexPolygonQ, dilate_polygon_linf, hausdorff_distance, point


class DynamicsError(ValueError):
    """Bad input to a dynamics operation."""


class ProfileError(DynamicsError):
    """Invalid speed profile."""


# ---------------------------------------------------------------------------
# Speed profiles

class SinSqProfile:
    """phi(x) = sin^2(pi x), evaluated exactly at half-integers."""

    kind = "sinsq"

    def __call__(self, x: float) -> float:
        r = x % 1.0
        if r == 0.0:
            return 0.0
        if r == 0.5:
            return 1.0
        s = math.sin(math.pi * r)
        return s * s

    def array(self, xs: np.ndarray) -> np.ndarray:
        r = np.mod(xs, 1.0)
        out = np.square(np.sin(np.pi * r))
        out = np.where(r == 0.0, 0.0, out)
        out = np.where(r == 0.5, 1.0, out)
        return out

    def lipschitz(self) -> float:
        return math.pi  # sup |d/dx sin^2(pi x)| = pi

    def __repr__(self):
        return "SinSqProfile()"


class PiecewiseLinearProfile:
    """1-periodic piecewise-linear profile through given breakpoints.

    Breakpoints are (t, value) pairs with rational t covering [0, 1];
    the profile must vanish at 0 and 1, stay within [0, 1], and reach 1
    at t = 1/2.
    """

    kind = "pl"

    def __init__(self, breakpoints):
        bps = [(Fraction(t), float(v)) for t, v in breakpoints]
        if len(bps) < 2:
            raise ProfileError("need at least two breakpoints")
        ts = [t for t, _ in bps]
        if ts != sorted(ts) or len(set(ts)) != len(ts):
            raise ProfileError("breakpoint positions must be strictly increasing")
        if ts[0] != 0 or ts[-1] != 1:
            raise ProfileError("breakpoints must start at t=0 and end at t=1")
        vals = [v for _, v in bps]
        if vals[0] != 0.0 or vals[-1] != 0.0:
            raise ProfileError("profile must vanish at 0 and 1")
        if any(v < 0.0 or v > 1.0 for v in vals):
            raise ProfileError("profile values must lie in [0, 1]")
        self.breakpoints = tuple(bps)
        self._xp = np.array([float(t) for t in ts])
        self._fp = np.array(vals)
        if abs(self(0.5) - 1.0) > 1e-12:
            raise ProfileError("profile must equal 1 at t = 1/2")

    def __call__(self, x: float) -> float:
        return float(np.interp(x % 1.0, self._xp, self._fp))

    def array(self, xs: np.ndarray) -> np.ndarray:
        return np.interp(np.mod(xs, 1.0), self._xp, self._fp)

    def lipschitz(self) -> float:
        slopes = np.abs(np.diff(self._fp) / np.diff(self._xp))
        return float(slopes.max())

    def __repr__(self):
        return f"PiecewiseLinearProfile({list(self.breakpoints)!r})"


Profile = Union[SinSqProfile, PiecewiseLinearProfile]

_DEFAULT_PROFILE = SinSqProfile()


def default_profile() -> SinSqProfile:
    return _DEFAULT_PROFILE


def tent_profile() -> PiecewiseLinearProfile:
    """The canonical piecewise-linear profile: a tent peaking at 1/2."""
    return PiecewiseLinearProfile([(0, 0.0), (Fraction(1, 2), 1.0), (1, 0.0)])


def load_piecewise_profile(path) -> PiecewiseLinearProfile:
    """Read a profile file: one "t value" pair per line, '#' comments."""
    bps = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = line.split()
            if len(fields) != 2:
                raise ProfileError(f"{path}: line {lineno}: expected 't value'")
            try:
                bps.append((Fraction(fields[0]), float(fields[1])))
            except (ValueError, ZeroDivisionError) as exc:
                raise ProfileError(f"{path}: line {lineno}: {exc}") from exc
    return PiecewiseLinearProfile(bps)


# ---------------------------------------------------------------------------
# Map expressions

@dataclass(frozen=True)
class VShear:
    profile: Profile
    power: int = 1


@dataclass(frozen=True)
class HShear:
    profile: Profile
    power: int = 1


@dataclass(frozen=True)
class Translate:
    dx: float
    dy: float


@dataclass(frozen=True)
class Compose:
    parts: tuple

    def __post_init__(self):
        if not self.parts:
            raise DynamicsError("empty composition")


@dataclass(frozen=True)
class Power:
    base: "MapExpr"
    exponent: int

    def __post_init__(self):
        if self.exponent < 1:
            raise DynamicsError("group powers must be >= 1")


MapExpr = Union[VShear, HShear, Translate, Compose, Power]


def vnhn(n: int, profile: Profile | None = None) -> Compose:
    """The lift V^n o H^n."""
    p = profile or _DEFAULT_PROFILE
    return Compose((VShear(p, n), HShear(p, n)))


def vh_power(n: int, profile: Profile | None = None) -> Power:
    """The lift (V o H)^n."""
    p = profile or _DEFAULT_PROFILE
    return Power(Compose((VShear(p, 1), HShear(p, 1))), n)


def identity_expr() -> Translate:
    return Translate(0.0, 0.0)


def lift_lipschitz_bound(expr: MapExpr) -> float:
    """Upper bound on the Lipschitz constant of the plane lift.

    A shear of power k is Lipschitz with constant 1 + |k|*L(phi);
    compositions multiply, translations are isometries.  Used to scale
    ulp tolerances in floating-point consistency tests (the wrap error of
    an input propagates with at most this factor).
    """
    if isinstance(expr, (VShear, HShear)):
        return 1.0 + abs(expr.power) * expr.profile.lipschitz()
    if isinstance(expr, Translate):
        return 1.0
    if isinstance(expr, Compose):
        out = 1.0
        for part in expr.parts:
            out *= lift_lipschitz_bound(part)
        return out
    if isinstance(expr, Power):
        return lift_lipschitz_bound(expr.base) ** expr.exponent
    raise TypeError(f"not a map expression: {expr!r}")


def eval_lift(expr: MapExpr, p: tuple[float, float]) -> tuple[float, float]:
    """Apply the plane lift to a single point."""
    x, y = float(p[0]), float(p[1])
    if isinstance(expr, VShear):
        return (x, y + expr.power * expr.profile(x))
    if isinstance(expr, HShear):
        return (x + expr.power * expr.profile(y), y)
    if isinstance(expr, Translate):
        return (x + expr.dx, y + expr.dy)
    if isinstance(expr, Compose):
        q = (x, y)
        for part in reversed(expr.parts):
            q = eval_lift(part, q)
        return q
    if isinstance(expr, Power):
        q = (x, y)
        for _ in range(expr.exponent):
            q = eval_lift(expr.base, q)
        return q
    raise TypeError(f"not a map expression: {expr!r}")


def eval_lift_array(expr: MapExpr, pts: np.ndarray) -> np.ndarray:
    """Apply the plane lift to an (N, 2) array of points."""
    if isinstance(expr, VShear):
        out = pts.copy()
        out[:, 1] += expr.power * expr.profile.array(pts[:, 0])
        return out
    if isinstance(expr, HShear):
        out = pts.copy()
        out[:, 0] += expr.power * expr.profile.array(pts[:, 1])
        return out
    if isinstance(expr, Translate):
        return pts + np.array([expr.dx, expr.dy])
    if isinstance(expr, Compose):
        out = pts
        for part in reversed(expr.parts):
            out = eval_lift_array(part, out)
        return out
    if isinstance(expr, Power):
        out = pts
        for _ in range(expr.exponent):
            out = eval_lift_array(expr.base, out)
        return out
    raise TypeError(f"not a map expression: {expr!r}")


# ---------------------------------------------------------------------------
# Displacements and rotation vectors

@dataclass(frozen=True)
class DisplacementSample:
    base: tuple[float, float]
    n: int
    vector: tuple[float, float]


@dataclass(frozen=True)
class RotationVectorEstimate:
    vector: tuple[float, float]
    tail_spread: float
    n: int


def _orbit_sums(expr: MapExpr, pts: np.ndarray, n: int, *, tail: bool):
    """Iterate the lift n times from `pts`, accumulating per-step
    displacements with Kahan compensation.

    Returns (sums, tail_spread or None, max_step_inf).  The tail spread is
    the per-point coordinate range of the running averages sums/k over the
    trailing 10% of the iterates, a cheap Cauchy-style convergence proxy.

    Base points are wrapped to their torus representatives up front (exact
    in binary floating point), so results do not depend on the lift
    representative supplied by the caller.
    """
    pos = np.array(pts, dtype=float)
    pos -= np.floor(pos)
    sums = np.zeros_like(pos)
    comp = np.zeros_like(pos)
    tail_lo = tail_hi = None
    tail_start = n - max(1, n // 10)
    max_step = 0.0
    for k in range(1, n + 1):
        nxt = eval_lift_array(expr, pos)
        step = nxt - pos
        y = step - comp
        t = sums + y
        comp = (t - sums) - y
        sums = t
        pos = nxt - np.floor(nxt)
        ms = float(np.abs(step).max()) if step.size else 0.0
        if ms > max_step:
            max_step = ms
        if tail and k > tail_start:
            avg = sums / k
            if tail_lo is None:
                tail_lo = avg.copy()
                tail_hi = avg.copy()
            else:
                np.minimum(tail_lo, avg, out=tail_lo)
                np.maximum(tail_hi, avg, out=tail_hi)
    spread = None
    if tail and tail_lo is not None:
        spread = (tail_hi - tail_lo).max(axis=1)
    return sums, spread, max_step


def displacement(expr: MapExpr, x: tuple[float, float], n: int) -> DisplacementSample:
    """Averaged displacement (lift^n(x) - x)/n of a single orbit."""
    if n < 1:
        raise DynamicsError("iterate count must be >= 1")
    pts = np.array([x], dtype=float)
    sums, _, _ = _orbit_sums(expr, pts, n, tail=False)
    v = sums[0] / n
    return DisplacementSample(base=(float(x[0]), float(x[1])), n=n,
                              vector=(float(v[0]), float(v[1])))


def rotation_vector_estimate(expr: MapExpr, x: tuple[float, float], n: int) -> RotationVectorEstimate:
    """Orbit rotation vector with a trailing-window convergence diagnostic."""
    if n < 1:
        raise DynamicsError("iterate count must be >= 1")
    pts = np.array([x], dtype=float)
    sums, spread, _ = _orbit_sums(expr, pts, n, tail=True)
    v = sums[0] / n
    return RotationVectorEstimate(vector=(float(v[0]), float(v[1])),
                                  tail_spread=float(spread[0]), n=n)


# ---------------------------------------------------------------------------
# Rotation-set estimation

@dataclass
class RotationSetEstimate:
    """Inner/outer polygon approximations of a rotation set.

    inner_hull is the hull of orbit rotation vectors passing the
    convergence proxy; outer_hull is the hull of all sampled averages
    dilated by (observed one-step displacement bound)/n.  The outer hull is
    a heuristic proxy, not a certified enclosure: `certified` stays False.
    """

    inner_hull: ConvexPolygonQ
    outer_hull: ConvexPolygonQ
    grid: int
    iterates: int
    sampler: str
    seed: int
    spread_threshold: float
    converged_fraction: float
    max_tail_spread: float
    step_bound: float
    certified: bool = field(default=False)


def _grid_points(grid: int, sampler: str, seed: int) -> np.ndarray:
    if sampler == "uniform":
        side = np.arange(grid) / grid
        xx, yy = np.meshgrid(side, side, indexing="ij")
        return np.column_stack([xx.ravel(), yy.ravel()])
    if sampler == "halton":
        from scipy.stats import qmc

        eng = qmc.Halton(d=2, scramble=True, seed=seed)
        return eng.random(grid * grid)
    raise DynamicsError(f"unknown sampler {sampler!r}")


def _float_hull(pts: np.ndarray) -> list[tuple[float, float]]:
    uniq = sorted(set(map(tuple, pts.tolist())))
    if len(uniq) == 1:
        return uniq
    def half(seq):
        out = []
        for p in seq:
            while len(out) > 1 and (
                (out[-1][0] - out[-2][0]) * (p[1] - out[-2][1])
                - (out[-1][1] - out[-2][1]) * (p[0] - out[-2][0])
            ) <= 0:
                out.pop()
            out.append(p)
        return out
    lower = half(uniq)
    upper = half(reversed(uniq))
    hull = lower[:-1] + upper[:-1]
    return hull if len(hull) >= 2 else uniq[:1]


def _rationalized_hull(pts: np.ndarray) -> ConvexPolygonQ:
    verts = _float_hull(pts)
    return ConvexPolygonQ([point(Fraction(x), Fraction(y)) for x, y in verts])


def rotation_set_estimate(expr: MapExpr, grid: int, iterates: int, *,
                          sampler: str = "uniform", seed: int = 0) -> RotationSetEstimate:
    """Estimate the rotation set of the lift over a grid of base points.

    The convergence proxy accepts an orbit when the trailing-window spread
    of its running averages is below 1% of the estimate cloud's diameter
    (plus a tiny absolute floor so that exactly-converged families such as
    rigid translations pass).  The hull of all grid points is independent
    of any partitioning of the grid, and the run is deterministic given
    (seed, grid, iterates).
    """
    if grid < 2:
        raise DynamicsError("grid must be >= 2")
    if iterates < 1:
        raise DynamicsError("iterate count must be >= 1")
    pts = _grid_points(grid, sampler, seed)
    sums, spread, max_step = _orbit_sums(expr, pts, iterates, tail=True)
    est = sums / iterates

    diam = float(max(np.ptp(est[:, 0]), np.ptp(est[:, 1]))) if len(est) else 0.0
    scale = max(1.0, float(np.abs(est).max())) if len(est) else 1.0
    threshold = 1e-2 * diam + 1e-12 * scale
    mask = spread <= threshold
    converged = est[mask]
    frac = float(mask.mean())
    if converged.size == 0:
        converged = est
        frac = 0.0

    inner = _rationalized_hull(converged)
    outer = _rationalized_hull(est)
    radius = Fraction(max_step) / iterates if max_step > 0 else Fraction(0)
    outer = dilate_polygon_linf(outer, radius)
    return RotationSetEstimate(
        inner_hull=inner, outer_hull=outer, grid=grid, iterates=iterates,
        sampler=sampler, seed=seed, spread_threshold=threshold,
        converged_fraction=frac, max_tail_spread=float(spread.max()),
        step_bound=max_step,
    )


# ---------------------------------------------------------------------------
# Verification helpers

@dataclass(frozen=True)
class BoxCheck:
    passed: bool
    worst_excess: float
    tolerance: float
    samples: int
    n: int


def verify_displacement_box(n: int, *, profile: Profile | None = None,
                            samples: int = 10**6, seed: int = 0,
                            expr: MapExpr | None = None) -> BoxCheck:
    """Check that one-step displacements of V^n H^n lie in [0, n]^2.

    Samples a low-discrepancy point set, applies the lift once, and
    measures the worst excursion outside the box; passes when the excess
    stays within 8 ulp of the box size.  Pass `expr` to test a substitute
    map (e.g. a translated perturbation, which must fail).
    """
    if samples < 1:
        raise DynamicsError("need at least one sample")
    from scipy.stats import qmc

    if expr is None:
        expr = vnhn(n, profile)
    pts = qmc.Halton(d=2, scramble=True, seed=seed).random(samples)
    img = eval_lift_array(expr, pts)
    d = img - pts
    low = float(-d.min()) if d.size else 0.0
    high = float((d - n).max()) if d.size else 0.0
    worst = max(0.0, low, high)
    tol = 8.0 * float(np.spacing(float(max(1, n))))
    return BoxCheck(passed=(worst <= tol), worst_excess=worst, tolerance=tol,
                    samples=samples, n=n)


@dataclass
class PowerScalingReport:
    k: int
    distance: float
    power_estimate: RotationSetEstimate
    scaled_base_hull: ConvexPolygonQ


def power_scaling_check(expr: MapExpr, k: int, grid: int, iterates: int, *,
                        seed: int = 0) -> PowerScalingReport:
    """Compare the rotation set of expr^k with k times that of expr.

    Both estimates run at the same total iterate budget: expr^k for
    `iterates` steps versus expr for k*`iterates` steps.  Reports the
    Hausdorff distance between the inner hulls.
    """
    if k < 1:
        raise DynamicsError("power must be >= 1")
    powered = expr if k == 1 else Power(expr, k)
    est_pow = rotation_set_estimate(powered, grid, iterates, seed=seed)
    est_base = rotation_set_estimate(expr, grid, iterates * k, seed=seed)
    scaled = est_base.inner_hull.scale(k)
    dist = hausdorff_distance(est_pow.inner_hull, scaled)
    return PowerScalingReport(k=k, distance=dist, power_estimate=est_pow,
                              scaled_base_hull=scaled)
