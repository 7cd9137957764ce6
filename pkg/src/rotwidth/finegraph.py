"""Curve crossing counts on the torus, adjacency-chain upper bounds on
the asymptotic translation length, and exact no-root certificates.

Conventions.  An essential simple closed curve on the torus carries a
primitive homotopy class (p, q).  Two curves are adjacent in the fine
graph of curves when they are disjoint or meet in exactly one point.
Realized curves are stored as one lifted period of a closed polyline:
exact rational vertices v_0 .. v_m with v_m = v_0 + (p, q).  Crossing
counts use exact rational segment intersection; tangential or
vertex-touching contacts are rejected rather than guessed at.

The quantitative constants live at the bottom: the width-to-length
constant 1/max(888c, 1110), the imported curve-graph constant 1/222, and
the certificate arithmetic ruling out p/q-th roots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .dynamics import (
    Compose,
    HShear,
    MapExpr,
    Power,
    Profile,
    Translate,
    VShear,
    default_profile,
    eval_lift_array,
)
from .geometry import Point2Q, point, to_rational


class CurveError(ValueError):
    """Invalid curve data."""


class NonSimpleCurveError(CurveError):
    """A realized curve crosses itself."""


class DegenerateIntersectionError(CurveError):
    """Tangential or vertex contact: the crossing count is not transverse."""


class ChainVerificationError(RuntimeError):
    """A step of an adjacency-chain verification failed.

    Carries the failing stage and, for crossing-count failures, the
    offending count.
    """

    def __init__(self, stage: str, detail: str, *, crossing_count: int | None = None,
                 max_deviation: float | None = None):
        super().__init__(f"{stage}: {detail}")
        self.stage = stage
        self.crossing_count = crossing_count
        self.max_deviation = max_deviation


@dataclass(frozen=True)
class CurveClass:
    """Primitive homotopy class (p, q) of an essential simple closed curve."""

    p: int
    q: int

    def __post_init__(self):
        if (self.p, self.q) == (0, 0):
            raise CurveError("(0, 0) is not an essential class")
        if math.gcd(abs(self.p), abs(self.q)) != 1:
            raise CurveError(f"({self.p}, {self.q}) is not primitive")

    def as_point(self) -> Point2Q:
        return point(self.p, self.q)


def intersection_number(c1: CurveClass, c2: CurveClass) -> int:
    """Geometric intersection number of two classes: |p1 q2 - q1 p2|."""
    return abs(c1.p * c2.q - c1.q * c2.p)


# ---------------------------------------------------------------------------
# Realized curves

class RealizedCurve:
    """One lifted period of a closed polyline on the torus.

    `lifted_points` are exact rational plane points v_0 .. v_m whose
    endpoints differ by exactly the class vector (p, q); the torus curve
    is their projection mod 1.  Simplicity is verified on construction
    unless the polyline is monotone in one coordinate with unit span
    (a graph over a base circle, which cannot self-cross).
    """

    __slots__ = ("lifted_points", "curve_class", "provenance")

    def __init__(self, lifted_points: Sequence[Point2Q], curve_class: CurveClass,
                 provenance: str = "", *, check_simple: bool = True):
        pts = list(lifted_points)
        if len(pts) < 2:
            raise CurveError("a curve needs at least two polyline points")
        cleaned = [pts[0]]
        for p in pts[1:]:
            if p != cleaned[-1]:
                cleaned.append(p)
        closure = cleaned[-1] - cleaned[0]
        if closure != curve_class.as_point():
            raise CurveError(
                f"polyline closes up by {closure}, class says ({curve_class.p}, {curve_class.q})"
            )
        self.lifted_points = tuple(cleaned)
        self.curve_class = curve_class
        self.provenance = provenance
        if check_simple and not self._is_monotone_graph():
            self._verify_simple()

    def segments(self):
        pts = self.lifted_points
        return [(pts[i], pts[i + 1]) for i in range(len(pts) - 1)]

    def torus_points(self) -> list[tuple[Fraction, Fraction]]:
        return [(v.x % 1, v.y % 1) for v in self.lifted_points[:-1]]

    def bounding_box(self):
        xs = [v.x for v in self.lifted_points]
        ys = [v.y for v in self.lifted_points]
        return min(xs), min(ys), max(xs), max(ys)

    def _is_monotone_graph(self) -> bool:
        pts = self.lifted_points
        for coord, span in ((0, self.curve_class.p), (1, self.curve_class.q)):
            if abs(span) != 1:
                continue
            vals = [v.x if coord == 0 else v.y for v in pts]
            diffs = [b - a for a, b in zip(vals, vals[1:])]
            if span > 0 and all(d > 0 for d in diffs):
                return True
            if span < 0 and all(d < 0 for d in diffs):
                return True
        return False

    def _chain_shift(self, di: int, dj: int) -> int | None:
        """If (di, dj) = k * (p, q), return k, else None.

        Translating a segment by k periods identifies it with a segment k*m
        places down the bi-infinite chained polyline; only contacts between
        consecutive chained segments are legitimate."""
        p, q = self.curve_class.p, self.curve_class.q
        if di * q != dj * p:
            return None
        k = di // p if p != 0 else dj // q
        return k if (k * p, k * q) == (di, dj) else None

    def _verify_simple(self):
        segs = self.segments()
        m = len(segs)
        xmin, ymin, xmax, ymax = self.bounding_box()
        irange = range(math.floor(xmin - xmax), math.ceil(xmax - xmin) + 1)
        jrange = range(math.floor(ymin - ymax), math.ceil(ymax - ymin) + 1)
        for di in irange:
            for dj in jrange:
                off = point(di, dj)
                central = (di, dj) == (0, 0)
                k = self._chain_shift(di, dj)
                for a in range(m):
                    p1, p2 = segs[a]
                    for b in range(m):
                        if central and b <= a:
                            continue
                        if k is not None and b + k * m == a:
                            continue  # the same chained segment
                        kind = _segment_relation(p1, p2, segs[b][0] + off,
                                                 segs[b][1] + off)
                        if kind == "none":
                            continue
                        if kind == "proper":
                            raise NonSimpleCurveError(
                                f"segments {a} and {b} (offset {di},{dj}) cross"
                            )
                        # endpoint contact: fine only between consecutive
                        # chained segments that do not double back
                        if k is not None and b + k * m in (a - 1, a + 1):
                            da = p2 - p1
                            db = segs[b][1] - segs[b][0]
                            if da.cross(db) != 0 or da.dot(db) > 0:
                                continue
                        raise NonSimpleCurveError(
                            f"segments {a} and {b} (offset {di},{dj}) touch degenerately"
                        )


def _segment_relation(p1: Point2Q, p2: Point2Q, q1: Point2Q, q2: Point2Q) -> str:
    """Classify two closed segments: 'none', 'proper', or 'degenerate'.

    Proper means a transverse crossing interior to both segments.  Any
    contact at an endpoint, and any collinear overlap, is degenerate.
    """
    d1 = p2 - p1
    d2 = q2 - q1
    denom = d1.cross(d2)
    w = q1 - p1
    if denom == 0:
        if d1.cross(w) != 0:
            return "none"  # parallel, distinct lines
        # collinear: overlap iff parameter intervals intersect
        dd = d1.dot(d1)
        t0 = d1.dot(w)
        t1 = d1.dot(q2 - p1)
        lo, hi = min(t0, t1), max(t0, t1)
        return "degenerate" if (hi >= 0 and lo <= dd) else "none"
    t = w.cross(d2) / denom
    u = w.cross(d1) / denom
    if 0 < t < 1 and 0 < u < 1:
        return "proper"
    if 0 <= t <= 1 and 0 <= u <= 1:
        return "degenerate"  # endpoint contact
    return "none"


def _chained_neighbors(curve: RealizedCurve, j: int):
    """Vertices before and after joint j of the bi-infinite chained polyline."""
    pts = curve.lifted_points
    m = len(pts) - 1
    nxt = pts[j + 1]
    prev = pts[j - 1] if j >= 1 else pts[m - 1] - curve.curve_class.as_point()
    return prev, nxt


def _joint_side_crossing(line_a: Point2Q, line_d: Point2Q, prev: Point2Q,
                         nxt: Point2Q) -> bool:
    """Does a polyline pass transversally through the line (a, a + d) at a
    joint with the given neighbors?  Tangential touches are degenerate."""
    s1 = line_d.cross(prev - line_a)
    s2 = line_d.cross(nxt - line_a)
    if s1 == 0 or s2 == 0:
        raise DegenerateIntersectionError("collinear neighbor at a joint contact")
    if (s1 > 0) == (s2 > 0):
        raise DegenerateIntersectionError("tangential touch at a polyline joint")
    return True


def torus_crossing_count(a: RealizedCurve, b: RealizedCurve) -> int:
    """Number of transverse intersection points of two torus curves.

    Counts crossings of one period of `a` against every integer translate
    of one period of `b`; each event is a distinct torus point.  A crossing
    exactly at a polyline joint is attributed to the segment that starts
    there and counted only if the curve genuinely changes sides;
    tangential contacts, joint-on-joint hits, and collinear overlaps raise
    DegenerateIntersectionError.
    """
    axmin, aymin, axmax, aymax = a.bounding_box()
    bxmin, bymin, bxmax, bymax = b.bounding_box()
    irange = range(math.floor(axmin - bxmax), math.ceil(axmax - bxmin) + 1)
    jrange = range(math.floor(aymin - bymax), math.ceil(aymax - bymin) + 1)
    segs_a = a.segments()
    segs_b = b.segments()
    count = 0
    for di in irange:
        for dj in jrange:
            off = point(di, dj)
            for ia, (p1, p2) in enumerate(segs_a):
                d1 = p2 - p1
                for ib, (q1_, q2_) in enumerate(segs_b):
                    q1, q2 = q1_ + off, q2_ + off
                    d2 = q2 - q1
                    denom = d1.cross(d2)
                    w = q1 - p1
                    if denom == 0:
                        if d1.cross(w) == 0:
                            dd = d1.dot(d1)
                            t0 = d1.dot(w)
                            t1 = d1.dot(q2 - p1)
                            if max(t0, t1) >= 0 and min(t0, t1) <= dd:
                                raise DegenerateIntersectionError(
                                    f"collinear overlap at translate ({di}, {dj})"
                                )
                        continue
                    t = w.cross(d2) / denom
                    u = w.cross(d1) / denom
                    if t < 0 or t > 1 or u < 0 or u > 1:
                        continue
                    a_interior = 0 < t < 1
                    b_interior = 0 < u < 1
                    if a_interior and b_interior:
                        count += 1
                    elif (t in (0, 1)) and (u in (0, 1)):
                        raise DegenerateIntersectionError(
                            f"joint-on-joint contact at translate ({di}, {dj})"
                        )
                    elif a_interior and u == 0:
                        prev, nxt = _chained_neighbors(b, ib)
                        if _joint_side_crossing(p1, d1, prev + off, nxt + off):
                            count += 1
                    elif b_interior and t == 0:
                        prev, nxt = _chained_neighbors(a, ia)
                        if _joint_side_crossing(q1, d2, prev, nxt):
                            count += 1
                    # t == 1 or u == 1 contacts are counted at the joint's
                    # starting segment, possibly in another translate
    return count


def crossings_with_vertical_circle(curve: RealizedCurve, x0: Fraction) -> int:
    """Crossings of a curve with the vertical circle {x = x0} (exact).

    The circle lifts to the lines x = x0 + k; a polyline segment crosses
    one of them transversally when x0 + k lies strictly inside its
    x-extent.  A segment endpoint on the line, or a vertical segment at
    the line, is a degenerate contact.
    """
    x0 = to_rational(x0)
    count = 0
    for p1, p2 in curve.segments():
        lo, hi = sorted((p1.x, p2.x))
        k_lo = math.ceil(lo - x0)
        k_hi = math.floor(hi - x0)
        for k in range(k_lo, k_hi + 1):
            xk = x0 + k
            if xk == lo or xk == hi:
                raise DegenerateIntersectionError(
                    f"segment endpoint on the circle x = {x0} + {k}"
                )
            count += 1
    return count


def straight_curve(cls: CurveClass, offset: Point2Q | tuple = (0, 0)) -> RealizedCurve:
    """The straight-line (geodesic) representative through `offset`."""
    if not isinstance(offset, Point2Q):
        offset = point(*offset)
    return RealizedCurve([offset, offset + cls.as_point()], cls,
                         provenance=f"straight ({cls.p},{cls.q})")


def line_image_curve(expr: MapExpr, cls: CurveClass, offset: Point2Q | tuple,
                     samples: int = 256, *, check_simple: bool = True) -> RealizedCurve:
    """Image of a straight representative under a lift, as a sampled
    polyline with vertices snapped to exact rationals.

    The lift commutes with integer translations, so the image closes up by
    exactly the class vector; closure is enforced exactly after snapping.
    """
    if samples < 2:
        raise CurveError("need at least two samples")
    if not isinstance(offset, Point2Q):
        offset = point(*offset)
    ts = np.arange(samples + 1) / samples
    base = np.empty((samples + 1, 2))
    base[:, 0] = float(offset.x) + ts * cls.p
    base[:, 1] = float(offset.y) + ts * cls.q
    img = eval_lift_array(expr, base)
    pts = [point(Fraction(float(x)), Fraction(float(y))) for x, y in img[:-1]]
    pts.append(pts[0] + cls.as_point())
    return RealizedCurve(pts, cls, provenance=f"image of ({cls.p},{cls.q})",
                         check_simple=check_simple)


_GENERIC_OFFSETS = [
    (Fraction(1, 7), Fraction(2, 9), Fraction(3, 11), Fraction(5, 13)),
    (Fraction(2, 17), Fraction(3, 19), Fraction(5, 23), Fraction(7, 29)),
    (Fraction(1, 31), Fraction(4, 37), Fraction(6, 41), Fraction(8, 43)),
]


def _straight_crossings_fast(c1: CurveClass, o1: Point2Q,
                             c2: CurveClass, o2: Point2Q) -> int:
    """Exact crossing count of two straight representatives.

    Clears denominators so every intersection test is an int64 sign check,
    then solves the one-segment-versus-all-translates systems vectorized.
    Semantics match `torus_crossing_count` on the same curves (interior
    crossings only; parameter hits on segment endpoints are degenerate).
    """
    den = math.lcm(o1.x.denominator, o1.y.denominator,
                   o2.x.denominator, o2.y.denominator)
    p1 = np.array([int(o1.x * den), int(o1.y * den)], dtype=np.int64)
    q1 = np.array([int(o2.x * den), int(o2.y * den)], dtype=np.int64)
    d1 = np.array([c1.p * den, c1.q * den], dtype=np.int64)
    d2 = np.array([c2.p * den, c2.q * den], dtype=np.int64)
    denom = int(d1[0] * d2[1] - d1[1] * d2[0])
    i_lo = math.floor(o1.x - o2.x + min(0, c1.p) - max(0, c2.p))
    i_hi = math.ceil(o1.x - o2.x + max(0, c1.p) - min(0, c2.p))
    j_lo = math.floor(o1.y - o2.y + min(0, c1.q) - max(0, c2.q))
    j_hi = math.ceil(o1.y - o2.y + max(0, c1.q) - min(0, c2.q))
    ii, jj = np.meshgrid(np.arange(i_lo, i_hi + 1, dtype=np.int64),
                         np.arange(j_lo, j_hi + 1, dtype=np.int64),
                         indexing="ij")
    wx = q1[0] + ii * den - p1[0]
    wy = q1[1] + jj * den - p1[1]
    if denom == 0:
        if np.any(wx * d1[1] == wy * d1[0]):
            raise DegenerateIntersectionError("collinear straight representatives")
        return 0
    t_num = wx * d2[1] - wy * d2[0]
    u_num = wx * d1[1] - wy * d1[0]
    if denom < 0:
        t_num, u_num, denom = -t_num, -u_num, -denom
    on_edge = ((t_num == 0) | (t_num == denom)) & (u_num >= 0) & (u_num <= denom)
    on_edge |= ((u_num == 0) | (u_num == denom)) & (t_num >= 0) & (t_num <= denom)
    if np.any(on_edge):
        raise DegenerateIntersectionError("crossing on a segment endpoint")
    inside = (t_num > 0) & (t_num < denom) & (u_num > 0) & (u_num < denom)
    return int(np.count_nonzero(inside))


def geometric_intersection_count(c1: CurveClass, c2: CurveClass) -> int:
    """Independent crossing-count oracle via straight representatives.

    Builds geodesic representatives at generic rational offsets and counts
    transverse crossings exactly, retrying with fresh offsets if a contact
    degenerates.  Agrees with `intersection_number` but never uses its
    formula.
    """
    last: Exception | None = None
    for ox1, oy1, ox2, oy2 in _GENERIC_OFFSETS:
        try:
            return _straight_crossings_fast(c1, point(ox1, oy1), c2, point(ox2, oy2))
        except DegenerateIntersectionError as exc:
            last = exc
    raise DegenerateIntersectionError(
        f"all generic offsets degenerate for ({c1.p},{c1.q}) x ({c2.p},{c2.q}): {last}"
    )


def fine_adjacent(a: RealizedCurve, b: RealizedCurve) -> bool:
    """Fine-graph adjacency on the torus: disjoint or meeting once."""
    return torus_crossing_count(a, b) <= 1


# ---------------------------------------------------------------------------
# Translation length bounds

_PROVENANCES = ("adjacency_chain", "width_lower_bound", "curve_graph_constant")


@dataclass(frozen=True)
class TranslationLengthBound:
    """A provenance-carrying one-sided bound on the asymptotic translation
    length of a torus map acting on the fine graph of curves."""

    kind: str  # "upper" | "lower"
    value: Fraction
    provenance: str

    def __post_init__(self):
        if self.kind not in ("upper", "lower"):
            raise ValueError(f"bad bound kind {self.kind!r}")
        if self.provenance not in _PROVENANCES:
            raise ValueError(f"bad provenance {self.provenance!r}")
        object.__setattr__(self, "value", to_rational(self.value))
        if self.value < 0:
            raise ValueError("translation length bounds are nonnegative")


@dataclass
class ChainBoundReport:
    """Verified two-edge chain alpha -- beta -- f(alpha) for f = V^n H^n."""

    n: int
    profile_kind: str
    bound: TranslationLengthBound
    crossing_count: int
    alpha_beta_crossings: int
    alpha_fixed_max_dev: float
    samples: int
    curve_samples: int


def chain_bound_vnhn(n: int, profile: Profile | None = None, *,
                     gn_substitution: bool = False, samples: int = 10**4,
                     curve_samples: int = 256,
                     alpha_height: Fraction = Fraction(1, 3),
                     beta_offset: Fraction = Fraction(1, 3)) -> ChainBoundReport:
    """Verify the adjacency chain giving |V^n H^n| <= 2 in the fine graph.

    Steps, each of which fails loudly:
      1. the inner factor H^n maps the horizontal circle alpha at height
         `alpha_height` into itself (sampled, y-deviation within 4 ulp);
      2. the image of alpha under the full lift meets the vertical circle
         beta exactly once (exact polyline crossing count);
      3. alpha and beta themselves meet exactly once.
    Then d(alpha, f(alpha)) <= d(alpha, beta) + d(beta, f(alpha)) = 2 for
    every iterate, hence the asymptotic translation length is at most 2.

    With `gn_substitution` the inner factor is replaced by (V H)^n, whose
    failure to fix alpha exercises the error path.
    """
    if n < 1:
        raise CurveError("n must be >= 1")
    prof = profile or default_profile()
    if gn_substitution:
        inner: MapExpr = Power(Compose((VShear(prof, 1), HShear(prof, 1))), n)
        outer: MapExpr = Translate(0.0, 0.0)
    else:
        inner = HShear(prof, n)
        outer = VShear(prof, n)
    full = Compose((outer, inner))

    y0 = float(alpha_height)
    xs = np.arange(samples) / samples
    pts = np.column_stack([xs, np.full(samples, y0)])
    img = eval_lift_array(inner, pts)
    dev = float(np.abs(img[:, 1] - y0).max())
    tol = 4.0 * float(np.spacing(max(1.0, float(n))))
    if dev > tol:
        raise ChainVerificationError(
            "inner_fixes_alpha",
            f"inner factor moves the horizontal circle by up to {dev:.3g}",
            max_deviation=dev,
        )

    alpha = straight_curve(CurveClass(1, 0), point(0, alpha_height))
    beta = straight_curve(CurveClass(0, 1), point(beta_offset, 0))
    ab = torus_crossing_count(alpha, beta)
    if ab != 1:
        raise ChainVerificationError(
            "alpha_meets_beta_once", f"crossing count {ab}", crossing_count=ab
        )

    gamma = line_image_curve(full, CurveClass(1, 0), point(0, alpha_height),
                             samples=curve_samples)
    c = crossings_with_vertical_circle(gamma, beta_offset)
    if c != 1:
        raise ChainVerificationError(
            "image_meets_beta_once", f"crossing count {c}", crossing_count=c
        )

    bound = TranslationLengthBound("upper", Fraction(2), "adjacency_chain")
    return ChainBoundReport(
        n=n, profile_kind=prof.kind, bound=bound, crossing_count=c,
        alpha_beta_crossings=ab, alpha_fixed_max_dev=dev, samples=samples,
        curve_samples=curve_samples,
    )


# ---------------------------------------------------------------------------
# Quantitative constants and certificates

def t0_constant() -> Fraction:
    """Imported lower bound 1/222 for the translation length of torus maps
    whose rotation set contains the three unit-triangle lattice points in
    its interior.  Reproducing it would require pseudo-Anosov curve-graph
    machinery; only the downstream arithmetic is checked here."""
    return Fraction(1, 222)


def m_bound(c) -> Fraction:
    """The width-to-length constant 1/max(888c, 1110), exactly."""
    c = to_rational(c)
    if c <= 0:
        raise ValueError("c must be positive")
    return 1 / max(888 * c, Fraction(1110))


def length_lower_bound(ew, c) -> TranslationLengthBound:
    """Lower bound m_c * ew on the translation length, valid when the
    essential width of the rotation set is ew and ew <= c."""
    ew = to_rational(ew)
    c = to_rational(c)
    if ew <= 0:
        raise ValueError("essential width must be positive")
    if ew > c:
        raise ValueError(f"bound requires ew <= c, got {ew} > {c}")
    return TranslationLengthBound("lower", m_bound(c) * ew, "width_lower_bound")


@dataclass
class RootCertificate:
    """Exact-arithmetic verdict on the existence of p/q-th roots.

    A map h is a p/q-th root of f when h^p = f^q.  Given the essential
    width `ew` of f's rotation set and an upper bound `length_upper` on
    |f|, a root with p/q >= ew would have a rotation set of essential
    width (q/p)*ew <= 1 and translation length at most (q/p)*length_upper,
    while the c=1 width-to-length bound forces at least m1*(q/p)*ew.
    Cancelling q/p: m1*ew <= length_upper.  So length_upper < m1*ew rules
    out every p/q-th root with p/q >= ew.

    The verdict is `no_roots_above_threshold` only when every inequality
    in the transcript holds exactly; `recheck()` re-runs them.
    """

    ew: Fraction
    length_upper: Fraction
    threshold: Fraction
    verdict: str
    inequalities: tuple
    transcript: str

    def recheck(self) -> bool:
        ops = {"<": lambda a, b: a < b, "<=": lambda a, b: a <= b,
               "==": lambda a, b: a == b, ">": lambda a, b: a > b}
        return all(ops[op](lhs, rhs) for _, lhs, op, rhs in self.inequalities)

    def verdict_line(self) -> str:
        return f"VERDICT: {self.verdict} THRESHOLD: {self.threshold}"


def parse_verdict_line(text: str) -> tuple[str, Fraction]:
    """Extract (verdict, threshold) from a certificate transcript."""
    for line in text.splitlines():
        if line.startswith("VERDICT: "):
            fields = line.split()
            return fields[1], Fraction(fields[3])
    raise ValueError("no VERDICT line found")


def certify_no_roots(ew, length_upper) -> RootCertificate:
    """Decide whether the pair (ew, length_upper) rules out p/q-th roots
    with p/q >= ew, and produce an exact transcript either way."""
    ew = to_rational(ew)
    length_upper = to_rational(length_upper)
    if ew <= 0:
        raise ValueError("essential width must be positive")
    if length_upper < 0:
        raise ValueError("length upper bound must be nonnegative")

    m1 = m_bound(1)
    conclusive = length_upper < m1 * ew
    checks = [
        ("m1 equals 1/1110", m1, "==", Fraction(1, 1110)),
        ("m1 equals t0/5", m1, "==", t0_constant() / 5),
    ]
    if conclusive:
        checks.append(("length bound beats m1*ew", length_upper, "<", m1 * ew))
    verdict = "no_roots_above_threshold" if conclusive else "inconclusive"

    lines = [
        "no-root certificate",
        f"  essential width of the rotation set: EW = {ew}",
        f"  upper bound on the translation length: L = {length_upper}",
        f"  width-to-length constant at c = 1: m1 = {m1}",
        "  hypothetical p/q-th root g of f (g^p = f^q) with p/q >= EW:",
        f"    EW(rho(g)) = (q/p) * EW <= 1        [powers scale the rotation set]",
        f"    |g| <= (q/p) * L                     [powers scale the length]",
        f"    |g| >= m1 * EW(rho(g))               [width-to-length bound, c = 1]",
        f"    cancelling q/p: m1 * EW <= L, i.e. {m1 * ew} <= {length_upper}",
    ]
    if conclusive:
        lines.append(
            f"  but L = {length_upper} < m1 * EW = {m1 * ew}: contradiction."
        )
        lines.append(f"  no p/q-th root exists with p/q >= {ew}.")
    else:
        lines.append(
            f"  the strict inequality L < m1 * EW fails"
            f" ({length_upper} >= {m1 * ew}): no conclusion."
        )
    cert = RootCertificate(
        ew=ew, length_upper=length_upper, threshold=ew, verdict=verdict,
        inequalities=tuple(checks), transcript="",
    )
    lines.append(cert.verdict_line())
    cert.transcript = "\n".join(lines) + "\n"
    return cert
