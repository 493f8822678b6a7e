"""Points, exact hypersphere predicates, and inversive transforms.

A hypersphere-or-hyperplane is the zero set of w*|x|^2 + a.x + u.  All
predicates reduce to determinants of rows (1, x, |x|^2): d+2 points lie on
a common hypersphere-or-hyperplane exactly when that determinant vanishes,
and a (d+1)-subset admits a unique such surface exactly when its rows have
full rank.  Working with these rows keeps entries polynomial in the input
coordinates (no denominators) and makes every predicate division-free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .errors import DegeneracyError, DomainError, PoleError
from .scalars import (
    INDETERMINATE,
    CycloElement,
    backend_of,
    is_zero,
    one_like,
    scalar_from_json,
    scalar_to_json,
)

Point = tuple  # d scalars of one backend


def as_point(coords) -> Point:
    return tuple(Fraction(c) if isinstance(c, (int, str)) else c for c in coords)


def point_backend(point: Point) -> str:
    kinds = {backend_of(c) for c in point}
    if len(kinds) != 1:
        raise DomainError(f"point mixes scalar backends: {sorted(kinds)}")
    return kinds.pop()


def _points_distinct(p: Point, q: Point, backend: str):
    """True if certified distinct, False if exactly equal, INDETERMINATE if
    the interval boxes overlap without witnessing separation."""
    if backend == "interval":
        for a, b in zip(p, q):
            if a.hi < b.lo or b.hi < a.lo:
                return True
        return INDETERMINATE
    return any(not is_zero(a - b) for a, b in zip(p, q))


@dataclass(frozen=True)
class PointSet:
    """Validated collection of n distinct points of uniform dimension and
    backend, with generator provenance in ``metadata``."""

    dimension: int
    points: tuple[Point, ...]
    backend: str
    metadata: dict = field(default_factory=dict, compare=False)

    @classmethod
    def build(cls, points, metadata=None) -> "PointSet":
        pts = tuple(tuple(p) for p in points)
        if not pts:
            raise DomainError("empty point set")
        d = len(pts[0])
        if d < 2:
            raise DomainError("dimension must be at least 2")
        if any(len(p) != d for p in pts):
            raise DomainError("points of mixed dimension")
        backends = {point_backend(p) for p in pts}
        if len(backends) != 1:
            raise DomainError(f"point set mixes backends: {sorted(backends)}")
        backend = backends.pop()
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                verdict = _points_distinct(pts[i], pts[j], backend)
                if verdict is INDETERMINATE:
                    raise DomainError(
                        f"points {i} and {j} are not certifiably distinct at this precision"
                    )
                if not verdict:
                    raise DomainError(f"points {i} and {j} coincide")
        return cls(d, pts, backend, dict(metadata or {}))

    @property
    def n(self) -> int:
        return len(self.points)

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "backend": self.backend,
            "points": [[scalar_to_json(c) for c in p] for p in self.points],
            "metadata": self.metadata,
        }

    @classmethod
    def from_json(cls, data: dict) -> "PointSet":
        points = [tuple(scalar_from_json(c) for c in p) for p in data["points"]]
        ps = cls.build(points, metadata=data.get("metadata"))
        if ps.dimension != data.get("dimension", ps.dimension):
            raise DomainError("dimension field disagrees with point data")
        if ps.backend != data.get("backend", ps.backend):
            raise DomainError("backend field disagrees with point data")
        return ps


# ---------------------------------------------------------------------------
# determinants via expansion over column subsets
# ---------------------------------------------------------------------------


def _expand_level(prev, row, columns: int, r: int):
    """Size r+1 minors (keyed by column bitmask) from size r minors and the
    next row, expanding along that row: sign of column position idx in the
    mask is (-1)^(r+idx)."""
    out = {}
    for cols in combinations(range(columns), r + 1):
        mask = 0
        for c in cols:
            mask |= 1 << c
        acc = None
        sign = -1 if r % 2 else 1
        for c in cols:
            entry = row[c]
            if is_zero_fast(entry):
                sign = -sign
                continue
            term = entry * prev[mask & ~(1 << c)]
            if sign < 0:
                term = -term
            acc = term if acc is None else acc + term
            sign = -sign
        if acc is None:
            # every entry of the row on these columns is an exact zero
            acc = row[cols[0]] * prev[mask & ~(1 << cols[0])]
        out[mask] = acc
    return out


def is_zero_fast(value) -> bool:
    """Cheap structural zero check used only to skip known-zero terms."""
    if isinstance(value, (int, Fraction)):
        return value == 0
    if isinstance(value, CycloElement):
        return value.is_zero()
    return False  # intervals: never skip


def det(rows) -> object:
    """Determinant of a square matrix of scalars (division-free expansion)."""
    k = len(rows)
    if any(len(r) != k for r in rows):
        raise ValueError("det requires a square matrix")
    if k == 1:
        return rows[0][0]
    level = {1 << c: rows[0][c] for c in range(k)}
    for r in range(1, k):
        level = _expand_level(level, rows[r], k, r)
    return level[(1 << k) - 1]


def maximal_cofactors(rows) -> tuple:
    """Signed maximal cofactors of a k x (k+1) matrix.

    Returns (c_0, ..., c_k) with c_j = (-1)^j * det(matrix without column j),
    so that for any extra row x: det([x; rows]) = sum_j x[j] * c_j.
    """
    k = len(rows)
    columns = k + 1
    if any(len(r) != columns for r in rows):
        raise ValueError("expected a k x (k+1) matrix")
    level = {1 << c: rows[0][c] for c in range(columns)}
    for r in range(1, k):
        level = _expand_level(level, rows[r], columns, r)
    full = (1 << columns) - 1
    out = []
    for j in range(columns):
        minor = level[full & ~(1 << j)]
        out.append(minor if j % 2 == 0 else -minor)
    return tuple(out)


# ---------------------------------------------------------------------------
# lifted rows
# ---------------------------------------------------------------------------


def squared_norm(point: Point):
    acc = None
    for c in point:
        term = c * c
        acc = term if acc is None else acc + term
    return acc


def lifted_row(point: Point) -> tuple:
    """Row (1, x_1..x_d, |x|^2) whose rank/vanishing behaviour encodes
    cosphericality."""
    return (one_like(point[0]), *point, squared_norm(point))


def affine_row(point: Point) -> tuple:
    return (one_like(point[0]), *point)


# ---------------------------------------------------------------------------
# transforms
# ---------------------------------------------------------------------------


def lift(point: Point) -> Point:
    """Inverse stereographic image (2x, |x|^2 - 1) / (|x|^2 + 1) on the unit
    sphere of R^(d+1); exact on exact backends since |x|^2 + 1 > 0 always."""
    q = squared_norm(point)
    denom = q + 1
    return tuple([(c + c) / denom for c in point] + [(q - 1) / denom])


def project(point: Point) -> Point:
    """Stereographic projection from the north pole back to R^d.

    Rejects off-sphere input on exact backends rather than repairing it.
    """
    q = squared_norm(point)
    offset = q - 1
    z = is_zero(offset)
    if z is INDETERMINATE:
        raise DomainError("cannot certify that the point lies on the unit sphere")
    if not z:
        raise DomainError("point does not lie on the unit sphere")
    last = point[-1]
    denom = one_like(last) - last
    dz = is_zero(denom)
    if dz is INDETERMINATE:
        raise PoleError("point is not certifiably distinct from the north pole")
    if dz:
        raise PoleError("north pole has no stereographic image")
    return tuple(c / denom for c in point[:-1])


def invert(point: Point, center: Point) -> Point:
    """Inversion in the unit sphere centered at ``center``:
    x -> r + (x - r)/|x - r|^2.  An involution away from its pole."""
    if len(point) != len(center):
        raise DomainError("point and center dimensions differ")
    diff = tuple(a - b for a, b in zip(point, center))
    q = squared_norm(diff)
    z = is_zero(q)
    if z is INDETERMINATE:
        raise PoleError("point is not certifiably distinct from the inversion center")
    if z:
        raise PoleError("inversion center has no image")
    return tuple(r + c / q for r, c in zip(center, diff))


def lift_set(ps: PointSet) -> PointSet:
    meta = dict(ps.metadata)
    meta["lifted_from_dimension"] = ps.dimension
    return PointSet.build([lift(p) for p in ps.points], metadata=meta)


def invert_set(ps: PointSet, center: Point) -> PointSet:
    meta = dict(ps.metadata)
    meta["inverted_in"] = [scalar_to_json(c) for c in center]
    return PointSet.build([invert(p, center) for p in ps.points], metadata=meta)


# ---------------------------------------------------------------------------
# predicates
# ---------------------------------------------------------------------------


def cospherical(points) -> object:
    """Do d+2 points lie on one hypersphere-or-hyperplane?

    Exact backends answer definitively; interval inputs may return
    INDETERMINATE, which callers must handle explicitly.
    """
    points = list(points)
    d = len(points[0])
    if len(points) != d + 2:
        raise DomainError(f"cosphericality in dimension {d} needs {d + 2} points")
    verdict = is_zero(det([lifted_row(p) for p in points]))
    if verdict is INDETERMINATE:
        return INDETERMINATE
    return bool(verdict)


def general_position_check(ps: PointSet):
    """First (lexicographic) d+1 subset lying on a common (d-2)-sphere or
    (d-2)-flat, or None if the set is in general position.

    Realized as a rank check: the subset violates general position exactly
    when all maximal minors of its lifted rows vanish.
    """
    if ps.backend == "interval":
        raise DomainError("general position certification requires an exact backend")
    rows = [lifted_row(p) for p in ps.points]
    d = ps.dimension
    for subset in combinations(range(ps.n), d + 1):
        cof = maximal_cofactors([rows[i] for i in subset])
        if all(is_zero_fast(c) for c in cof):
            return subset
    return None


@dataclass(frozen=True)
class Hypersphere:
    """Coefficients (w, a, u) of w*|x|^2 + a.x + u = 0; w = 0 encodes a
    hyperplane.  Exact backends store a canonical form so equal surfaces
    compare and hash equal."""

    w: object
    a: tuple
    u: object

    @classmethod
    def from_coefficients(cls, w, a, u) -> "Hypersphere":
        coeffs = [w, *a, u]
        kinds = {backend_of(c) for c in coeffs}
        if len(kinds) != 1:
            raise DomainError("hypersphere coefficients mix backends")
        backend = kinds.pop()
        if backend != "interval":
            zero = [is_zero_fast(c) for c in coeffs]
            if all(zero):
                raise DegeneracyError("all hypersphere coefficients vanish")
            coeffs = _canonicalize(coeffs, backend)
        return cls(coeffs[0], tuple(coeffs[1:-1]), coeffs[-1])

    @property
    def dimension(self) -> int:
        return len(self.a)

    def is_hyperplane(self):
        return is_zero(self.w)

    def evaluate(self, point: Point):
        acc = self.w * squared_norm(point)
        for coeff, coord in zip(self.a, point):
            acc = acc + coeff * coord
        return acc + self.u

    def coefficients(self) -> tuple:
        return (self.w, *self.a, self.u)

    def to_json(self) -> dict:
        return {
            "w": scalar_to_json(self.w),
            "a": [scalar_to_json(c) for c in self.a],
            "u": scalar_to_json(self.u),
        }

    @classmethod
    def from_json(cls, data: dict) -> "Hypersphere":
        return cls.from_coefficients(
            scalar_from_json(data["w"]),
            [scalar_from_json(c) for c in data["a"]],
            scalar_from_json(data["u"]),
        )


def _canonicalize(coeffs: list, backend: str) -> list:
    """Scale to coprime integer data with the first nonzero entry positive."""
    if backend == "cyclotomic":
        # normalise by the first nonzero field element so that proportional
        # coefficient vectors collapse to one representative
        lead = next(c for c in coeffs if not c.is_zero())
        inv = lead.inverse()
        coeffs = [c * inv for c in coeffs]
        fractions = [f for c in coeffs for f in c.coefficients]
    else:
        fractions = [Fraction(c) for c in coeffs]
        coeffs = fractions
    denom_lcm = 1
    for f in fractions:
        denom_lcm = denom_lcm * f.denominator // math.gcd(denom_lcm, f.denominator)
    numer_gcd = 0
    for f in fractions:
        numer_gcd = math.gcd(numer_gcd, f.numerator * (denom_lcm // f.denominator))
    scale = Fraction(denom_lcm, numer_gcd or 1)
    coeffs = [c * scale for c in coeffs]
    if backend == "rational":
        lead = next(c for c in coeffs if c)
        if lead < 0:
            coeffs = [-c for c in coeffs]
    return coeffs


def hypersphere_through(points) -> Hypersphere:
    """The unique hypersphere-or-hyperplane through d+1 points of full
    lifted rank, solved by cofactor expansion."""
    points = list(points)
    d = len(points[0])
    if len(points) != d + 1:
        raise DomainError(f"need exactly {d + 1} points in dimension {d}")
    cof = maximal_cofactors([lifted_row(p) for p in points])
    if all(is_zero_fast(c) for c in cof):
        raise DegeneracyError("points lie on a common (d-2)-sphere or (d-2)-flat")
    # row layout (1, x, |x|^2) puts u first and w last
    return Hypersphere.from_coefficients(cof[-1], cof[1:-1], cof[0])


def incident(sphere: Hypersphere, point: Point):
    """True/False incidence; INDETERMINATE possible on the interval backend."""
    if len(point) != sphere.dimension:
        raise DomainError(
            f"point dimension {len(point)} != surface dimension {sphere.dimension}"
        )
    verdict = is_zero(sphere.evaluate(point))
    if verdict is INDETERMINATE:
        return INDETERMINATE
    return bool(verdict)
