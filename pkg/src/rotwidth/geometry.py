"""Exact rational plane geometry: convex polygons, directional widths, and
the lattice ("essential") width.

Every coordinate in this module is a `fractions.Fraction`, and every
predicate, width, and lattice-point query is exact.  Floating point appears
only in `min_geometric_width` (documented as a rounded-down bound) and in
`hausdorff_distance`, which is a diagnostic for the numerical estimators.

The essential width of a compact convex set is the smallest horizontal
width it can be given by a unimodular change of basis of the integer
lattice.  Horizontal width after acting by a unimodular matrix with first
row w equals the directional width along w, and every primitive integer
vector occurs as such a first row, so the essential width is the minimum
of the directional width over primitive integer directions.  That is the
quantity computed here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Fraction
RationalLike = Union[Fraction, int, str, float]


class GeometryError(ValueError):
    """Bad input to a geometric operation."""


class DegeneratePolygonError(GeometryError):
    """Operation requires a full-dimensional polygon."""


class PolygonFormatError(GeometryError):
    """Unparseable polygon text; carries a 1-based line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


def to_rational(value: RationalLike) -> Fraction:
    """Coerce to an exact Fraction.

    Accepts Fractions, ints, floats (exact binary value), and strings in
    the forms "p/q", "n", or a decimal like "1.25" (converted exactly).
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, float)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise GeometryError(f"not a rational: {value!r}") from exc
    raise TypeError(f"cannot interpret {type(value).__name__} as a rational")


@dataclass(frozen=True)
class Point2Q:
    """A point of the plane with exact rational coordinates."""

    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", to_rational(self.x))
        object.__setattr__(self, "y", to_rational(self.y))

    def __add__(self, other: "Point2Q") -> "Point2Q":
        return Point2Q(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Point2Q") -> "Point2Q":
        return Point2Q(self.x - other.x, self.y - other.y)

    def __neg__(self) -> "Point2Q":
        return Point2Q(-self.x, -self.y)

    def __mul__(self, s: RationalLike) -> "Point2Q":
        s = to_rational(s)
        return Point2Q(self.x * s, self.y * s)

    __rmul__ = __mul__

    def dot(self, other: "Point2Q") -> Fraction:
        return self.x * other.x + self.y * other.y

    def cross(self, other: "Point2Q") -> Fraction:
        return self.x * other.y - self.y * other.x

    def as_floats(self) -> tuple[float, float]:
        return (float(self.x), float(self.y))

    def __str__(self):
        return f"({self.x}, {self.y})"


def point(x: RationalLike, y: RationalLike) -> Point2Q:
    """Shorthand constructor accepting anything `to_rational` does."""
    return Point2Q(to_rational(x), to_rational(y))


@dataclass(frozen=True)
class PrimitiveVector:
    """Integer vector with coprime entries; a lattice direction."""

    a: int
    b: int

    def __post_init__(self):
        if not (isinstance(self.a, int) and isinstance(self.b, int)):
            raise GeometryError("primitive vector entries must be integers")
        if (self.a, self.b) == (0, 0):
            raise GeometryError("(0, 0) is not a direction")
        if math.gcd(abs(self.a), abs(self.b)) != 1:
            raise GeometryError(f"({self.a}, {self.b}) is not primitive")

    def as_tuple(self) -> tuple[int, int]:
        return (self.a, self.b)


@dataclass(frozen=True)
class UnimodularMatrix:
    """2x2 integer matrix with determinant one."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise GeometryError("matrix determinant must be 1")

    def apply(self, p: Point2Q) -> Point2Q:
        return Point2Q(self.a * p.x + self.b * p.y, self.c * p.x + self.d * p.y)

    def __matmul__(self, other: "UnimodularMatrix") -> "UnimodularMatrix":
        return UnimodularMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    @staticmethod
    def identity() -> "UnimodularMatrix":
        return UnimodularMatrix(1, 0, 0, 1)


def _hull_vertices(points: Sequence[Point2Q]) -> tuple[Point2Q, ...]:
    pts = sorted(set(points), key=lambda p: (p.x, p.y))
    if not pts:
        raise GeometryError("convex hull of an empty point set")
    if len(pts) == 1:
        return (pts[0],)
    base = pts[0]
    d0 = pts[-1] - base
    if all(d0.cross(p - base) == 0 for p in pts[1:-1]):
        return (pts[0], pts[-1])  # collinear: keep the two extreme points

    def chain(ordered):
        out: list[Point2Q] = []
        for p in ordered:
            # pop while the turn is clockwise or straight (drops collinear)
            while len(out) > 1 and (out[-1] - out[-2]).cross(p - out[-2]) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = chain(pts)
    upper = chain(reversed(pts))
    return tuple(lower[:-1] + upper[:-1])  # CCW, starts at the lex-min vertex


class ConvexPolygonQ:
    """Convex polygon with exact rational vertices.

    The stored vertex tuple is canonical: counter-clockwise, extreme points
    only, starting at the lexicographically smallest vertex.  Degenerate
    inputs are allowed and reported via `dimension` (0 point, 1 segment,
    2 full-dimensional).
    """

    __slots__ = ("vertices",)

    def __init__(self, points: Iterable[Point2Q | tuple]):
        coerced = []
        for p in points:
            if isinstance(p, Point2Q):
                coerced.append(p)
            else:
                x, y = p
                coerced.append(point(x, y))
        self.vertices: tuple[Point2Q, ...] = _hull_vertices(coerced)

    @property
    def dimension(self) -> int:
        n = len(self.vertices)
        return 0 if n == 1 else (1 if n == 2 else 2)

    def edges(self):
        v = self.vertices
        m = len(v)
        for i in range(m):
            yield v[i], v[(i + 1) % m]

    def bounding_box(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        xs = [p.x for p in self.vertices]
        ys = [p.y for p in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)

    def translate(self, v: Point2Q | tuple) -> "ConvexPolygonQ":
        if not isinstance(v, Point2Q):
            v = point(*v)
        return ConvexPolygonQ([p + v for p in self.vertices])

    def scale(self, r: RationalLike) -> "ConvexPolygonQ":
        """Homothety of ratio r > 0 centered at the origin."""
        r = to_rational(r)
        if r <= 0:
            raise GeometryError("scaling ratio must be positive")
        return ConvexPolygonQ([p * r for p in self.vertices])

    def contains(self, p: Point2Q, *, strict: bool = False) -> bool:
        """Exact membership test; `strict` restricts to the interior."""
        if self.dimension == 0:
            return (not strict) and p == self.vertices[0]
        if self.dimension == 1:
            if strict:
                return False
            a, b = self.vertices
            d = b - a
            if d.cross(p - a) != 0:
                return False
            t = d.dot(p - a)
            return 0 <= t <= d.dot(d)
        for a, b in self.edges():
            c = (b - a).cross(p - a)
            if c < 0 or (strict and c == 0):
                return False
        return True

    def contains_polygon(self, other: "ConvexPolygonQ") -> bool:
        return all(self.contains(v) for v in other.vertices)

    def __eq__(self, other):
        return isinstance(other, ConvexPolygonQ) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __repr__(self):
        inner = ", ".join(str(v) for v in self.vertices)
        return f"ConvexPolygonQ[{inner}]"


def convex_hull(points: Iterable[Point2Q | tuple]) -> ConvexPolygonQ:
    """Exact convex hull; errors on an empty input."""
    return ConvexPolygonQ(points)


def _width_int(C: ConvexPolygonQ, a: int, b: int) -> Fraction:
    vals = [a * v.x + b * v.y for v in C.vertices]
    return max(vals) - min(vals)


def directional_width(C: ConvexPolygonQ, w: PrimitiveVector | tuple[int, int]) -> Fraction:
    """Exact width of C along the integer direction w: max<w,x> - min<w,x>."""
    if not isinstance(w, PrimitiveVector):
        w = PrimitiveVector(*w)
    return _width_int(C, w.a, w.b)


def apply_unimodular(A: UnimodularMatrix, C: ConvexPolygonQ) -> ConvexPolygonQ:
    """Image polygon A*C, re-canonicalized."""
    return ConvexPolygonQ([A.apply(v) for v in C.vertices])


def _min_width_sq(C: ConvexPolygonQ) -> Fraction:
    """Exact square of the minimal Euclidean width of a dimension-2 polygon.

    The minimal width of a convex polygon is attained normal to one of its
    edges, so it is min over edges of (max vertex distance to the edge
    line).  Returned as an exact rational to keep enumeration bounds exact.
    """
    if C.dimension < 2:
        raise DegeneratePolygonError("minimal width needs a full-dimensional polygon")
    best: Fraction | None = None
    for a, b in C.edges():
        e = b - a
        length_sq = e.dot(e)
        reach = max(e.cross(v - a) for v in C.vertices)  # >= 0 for CCW order
        cand = reach * reach / length_sq
        if best is None or cand < best:
            best = cand
    return best


def min_geometric_width(C: ConvexPolygonQ) -> float:
    """Minimal Euclidean width over all directions, rounded down.

    The result is a float no larger than the true width (it may under-read
    by a couple of ulps), which keeps it safe to use as an enumeration
    bound denominator.  Raises on degenerate polygons.
    """
    g = math.sqrt(float(_min_width_sq(C)))
    g = math.nextafter(math.nextafter(g, 0.0), 0.0)
    return g


def _primitive_directions(radius_cap: int, norm_sq_cap: Fraction | None):
    """Yield primitive (a, b) with b > 0, plus (1, 0), inside the given caps."""
    if radius_cap >= 1:
        yield (1, 0)
    for b in range(1, radius_cap + 1):
        bb = b * b
        for a in range(-radius_cap, radius_cap + 1):
            if math.gcd(abs(a), b) != 1:
                continue
            if norm_sq_cap is not None and a * a + bb > norm_sq_cap:
                continue
            yield (a, b)


@dataclass
class EWResult:
    """Essential width together with the optimizing direction and the
    enumeration data needed for independent cross-checks."""

    value: Fraction
    direction: tuple[int, int]
    seed_width: Fraction | None
    enum_radius: int
    oracle_radius: int
    reduced_basis: tuple[tuple[int, int], tuple[int, int]] | None


def _argmin_on_line(C: ConvexPolygonQ, v: tuple[int, int], u: tuple[int, int]):
    """Integer k minimizing width along v + k*u (the map is convex in k)."""

    def f(k: int) -> Fraction:
        return _width_int(C, v[0] + k * u[0], v[1] + k * u[1])

    f0 = f(0)
    fp, fm = f(1), f(-1)
    if f0 <= fp and f0 <= fm:
        return 0, f0
    sign = 1 if fp < f0 else -1
    k_prev, f_prev = 0, f0
    k_cur, f_cur = sign, min(fp, fm)
    while True:
        k_next = k_cur * 2 if k_cur != 0 else sign
        f_next = f(k_next)
        if f_next >= f_cur:
            break
        k_prev, f_prev = k_cur, f_cur
        k_cur, f_cur = k_next, f_next
    lo, hi = sorted((k_prev, k_next))
    while hi - lo > 2:
        m1 = lo + (hi - lo) // 3
        m2 = hi - (hi - lo) // 3
        if f(m1) <= f(m2):
            hi = m2
        else:
            lo = m1
    best_k, best_f = lo, f(lo)
    for k in range(lo + 1, hi + 1):
        fk = f(k)
        if fk < best_f:
            best_k, best_f = k, fk
    return best_k, best_f


def _width_reduced_basis(C: ConvexPolygonQ):
    """Gauss-style reduction of the standard basis under the width norm.

    Returns a unimodular pair (u, v) with width(u) <= width(v) and no
    integer shift of v along u improving it.  This only serves to shrink
    the later disk enumeration; correctness never depends on it.
    """
    u, v = (1, 0), (0, 1)
    nu, nv = _width_int(C, *u), _width_int(C, *v)
    for _ in range(64):
        if nu > nv:
            u, v = v, u
            nu, nv = nv, nu
        k, nk = _argmin_on_line(C, v, u)
        if k != 0 and nk < nv:
            v = (v[0] + k * u[0], v[1] + k * u[1])
            nv = nk
        else:
            break
    det = u[0] * v[1] - u[1] * v[0]
    if det == -1:
        v = (-v[0], -v[1])
    return u, v


def _canonical_direction(a: int, b: int) -> tuple[int, int]:
    if b < 0 or (b == 0 and a < 0):
        return (-a, -b)
    return (a, b)


def _ceil_sqrt(q: Fraction) -> int:
    if q <= 0:
        return 0
    r = math.isqrt(q.numerator // q.denominator)
    while Fraction(r * r) < q:
        r += 1
    return r


_SEED_DIRECTIONS = ((1, 0), (0, 1), (1, 1), (1, -1))
_ENUM_PAIR_CAP = 2_000_000


def essential_width_detail(C: ConvexPolygonQ) -> EWResult:
    """Exact essential width with optimizer and enumeration metadata.

    Algorithm for full-dimensional polygons: reduce the lattice basis under
    the width norm, seed a bound W0 from the directions
    {(1,0),(0,1),(1,1),(1,-1)} in the reduced frame, then enumerate every
    primitive direction of Euclidean norm at most W0/g, where g is the
    minimal Euclidean width.  Any direction outside that disk has width at
    least ||w||*g > W0, so the minimum over the disk is the global one.
    Degenerate polygons have essential width zero.
    """
    if C.dimension == 0:
        return EWResult(Fraction(0), (1, 0), None, 0, 1, None)
    if C.dimension == 1:
        a, b = C.vertices
        d = b - a
        den = d.x.denominator * d.y.denominator
        ix, iy = int(d.x * den), int(d.y * den)
        g = math.gcd(abs(ix), abs(iy))
        ix, iy = ix // g, iy // g
        direction = _canonical_direction(iy, -ix)  # annihilates the segment
        return EWResult(Fraction(0), direction, None, 0, max(map(abs, direction)), None)

    u, v = _width_reduced_basis(C)
    A = UnimodularMatrix(u[0], u[1], v[0], v[1])
    Cr = apply_unimodular(A, C)

    w0 = min(_width_int(Cr, a, b) for a, b in _SEED_DIRECTIONS)
    g_sq = _min_width_sq(Cr)
    norm_sq_cap = w0 * w0 / g_sq
    radius = _ceil_sqrt(norm_sq_cap)
    if (2 * radius + 1) * (radius + 1) > _ENUM_PAIR_CAP:
        raise GeometryError(
            f"essential-width enumeration bound too large (radius {radius})"
        )

    best: Fraction | None = None
    best_dir = (1, 0)
    for a, b in _primitive_directions(radius, norm_sq_cap):
        wd = _width_int(Cr, a, b)
        if best is None or wd < best:
            best, best_dir = wd, (a, b)

    a, b = best_dir
    # direction in the original frame: a*u + b*v (rows of A)
    direction = _canonical_direction(a * u[0] + b * v[0], a * u[1] + b * v[1])
    oracle_radius = max(1, _ceil_sqrt(best * best / _min_width_sq(C)))
    return EWResult(best, direction, w0, radius, oracle_radius, (u, v))


def essential_width(C: ConvexPolygonQ) -> Fraction:
    """Exact minimum of directional width over primitive lattice directions."""
    return essential_width_detail(C).value


def ew_oracle(C: ConvexPolygonQ, radius: int) -> Fraction:
    """Brute-force width minimum over primitive directions with sup-norm
    at most `radius`.

    Always an upper bound on the essential width; exact once `radius`
    reaches the enumeration bound reported by `essential_width_detail`.
    """
    if radius < 1:
        raise GeometryError("oracle radius must be >= 1")
    best: Fraction | None = None
    for b in range(0, radius + 1):
        for a in range(-radius, radius + 1):
            if b == 0 and a != 1:
                continue
            if b > 0 and math.gcd(abs(a), b) != 1:
                continue
            wd = _width_int(C, a, b)
            if best is None or wd < best:
                best = wd
    return best


def interior_lattice_points(C: ConvexPolygonQ) -> list[tuple[int, int]]:
    """Integer points strictly inside C (empty for dimension <= 1)."""
    if C.dimension <= 1:
        return []
    xmin, ymin, xmax, ymax = C.bounding_box()
    out = []
    for ix in range(math.floor(xmin) + 1, math.ceil(xmax)):
        for iy in range(math.floor(ymin) + 1, math.ceil(ymax)):
            if C.contains(point(ix, iy), strict=True):
                out.append((ix, iy))
    return out


def closed_lattice_points(C: ConvexPolygonQ) -> list[tuple[int, int]]:
    """Integer points of C including its boundary."""
    xmin, ymin, xmax, ymax = C.bounding_box()
    out = []
    for ix in range(math.ceil(xmin), math.floor(xmax) + 1):
        for iy in range(math.ceil(ymin), math.floor(ymax) + 1):
            if C.contains(point(ix, iy)):
                out.append((ix, iy))
    return out


def _has_three_nonaligned(pts: Sequence[tuple[int, int]]) -> bool:
    if len(pts) < 3:
        return False
    x0, y0 = pts[0]
    base = None
    for x, y in pts[1:]:
        d = (x - x0, y - y0)
        if base is None:
            base = d
        elif base[0] * d[1] - base[1] * d[0] != 0:
            return True
    return False


def has_three_nonaligned_interior(C: ConvexPolygonQ) -> bool:
    """True iff the interior holds three affinely independent integer points."""
    return _has_three_nonaligned(interior_lattice_points(C))


@dataclass(frozen=True)
class CompareWidthVerdict:
    """Joint record of the two width-versus-interior-points implications.

    implication1_ok: three non-aligned interior integer points force
    essential width > 1.  implication2_ok: essential width > 4 forces three
    non-aligned interior integer points.  Both must hold for every polygon.
    """

    ew: Fraction
    has_three: bool
    implication1_ok: bool
    implication2_ok: bool

    @property
    def ok(self) -> bool:
        return self.implication1_ok and self.implication2_ok


def check_compare_width(C: ConvexPolygonQ) -> CompareWidthVerdict:
    ew = essential_width(C)
    has3 = has_three_nonaligned_interior(C)
    return CompareWidthVerdict(
        ew=ew,
        has_three=has3,
        implication1_ok=(not has3) or ew > 1,
        implication2_ok=(ew <= 4) or has3,
    )


def dilate_polygon_linf(C: ConvexPolygonQ, r: RationalLike) -> ConvexPolygonQ:
    """Minkowski sum with the square [-r, r]^2 (exact)."""
    r = to_rational(r)
    if r < 0:
        raise GeometryError("dilation radius must be >= 0")
    if r == 0:
        return C
    offs = [point(sx * r, sy * r) for sx in (-1, 1) for sy in (-1, 1)]
    return ConvexPolygonQ([v + o for v in C.vertices for o in offs])


# ---------------------------------------------------------------------------
# Float diagnostics (Hausdorff distance between convex polygons)

def _point_segment_distance(p, a, b) -> float:
    px, py = p
    ax, ay = a
    bx, by = b
    dx, dy = bx - ax, by - ay
    dd = dx * dx + dy * dy
    if dd == 0.0:
        return math.hypot(px - ax, py - ay)
    t = ((px - ax) * dx + (py - ay) * dy) / dd
    t = min(1.0, max(0.0, t))
    return math.hypot(px - (ax + t * dx), py - (ay + t * dy))


def _point_polygon_distance(p: Point2Q, Q: ConvexPolygonQ) -> float:
    if Q.contains(p):
        return 0.0
    pf = p.as_floats()
    vf = [v.as_floats() for v in Q.vertices]
    if len(vf) == 1:
        return math.hypot(pf[0] - vf[0][0], pf[1] - vf[0][1])
    m = len(vf)
    return min(
        _point_segment_distance(pf, vf[i], vf[(i + 1) % m]) for i in range(m)
    )


def hausdorff_distance(P: ConvexPolygonQ, Q: ConvexPolygonQ) -> float:
    """Hausdorff distance between two convex polygons (float diagnostic).

    For convex sets the directed distance is attained at a vertex of the
    source polygon, so vertex sweeps in both directions suffice.
    """
    d1 = max(_point_polygon_distance(v, Q) for v in P.vertices)
    d2 = max(_point_polygon_distance(v, P) for v in Q.vertices)
    return max(d1, d2)


# ---------------------------------------------------------------------------
# Polygon text format: one vertex per line, two whitespace-separated
# rationals ("p/q", integer, or decimal); '#' starts a comment.

def parse_polygon_text(text: str) -> list[Point2Q]:
    pts = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 2:
            raise PolygonFormatError(
                f"expected two coordinates, got {len(fields)}", lineno
            )
        try:
            pts.append(point(fields[0], fields[1]))
        except (GeometryError, ValueError) as exc:
            raise PolygonFormatError(str(exc), lineno) from exc
    if not pts:
        raise PolygonFormatError("no vertices found", 1)
    return pts


def load_polygon(path) -> ConvexPolygonQ:
    with open(path, "r", encoding="utf-8") as fh:
        return ConvexPolygonQ(parse_polygon_text(fh.read()))


def dump_polygon(C: ConvexPolygonQ) -> str:
    """Canonical text form: reduced fractions, one vertex per line."""
    return "".join(f"{v.x} {v.y}\n" for v in C.vertices)


def save_polygon(path, C: ConvexPolygonQ) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_polygon(C))
