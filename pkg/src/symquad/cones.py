"""Rational polyhedral cones in rank 2 and 3, and their GKZ chamber fans.

Everything is exact. Rank-3 cones are handled through the affine slice
{l . x = 1} for a functional l positive on the support, which turns cones
into polygons in the plane.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import gcd, lcm
from typing import Sequence

from .errors import ValidationError
from .poly import rat_str


@dataclass(frozen=True)
class DivClass:
    """A divisor class by its coordinates in a named basis.

    A coordinate of ``None`` marks an unknown coefficient.
    """

    basis: tuple[str, ...]
    coords: tuple
    name: str = ""

    def __post_init__(self):
        if len(self.basis) != len(self.coords):
            raise ValidationError("coordinate count does not match the basis")
        object.__setattr__(
            self, "coords", tuple(None if c is None else Fraction(c) for c in self.coords)
        )

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def known(self) -> bool:
        return all(c is not None for c in self.coords)

    def _require_known(self) -> None:
        if not self.known:
            raise ValidationError(f"class {self.name or self.coords} has unknown coefficients")

    def _combine(self, other: "DivClass", sign: int) -> "DivClass":
        if self.basis != other.basis:
            raise ValidationError("classes live in different bases")
        self._require_known()
        other._require_known()
        return DivClass(self.basis, tuple(a + sign * b for a, b in zip(self.coords, other.coords)))

    def __add__(self, other: "DivClass") -> "DivClass":
        return self._combine(other, 1)

    def __sub__(self, other: "DivClass") -> "DivClass":
        return self._combine(other, -1)

    def __mul__(self, c) -> "DivClass":
        self._require_known()
        c = Fraction(c)
        return DivClass(self.basis, tuple(c * x for x in self.coords))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        self._require_known()
        return not any(self.coords)

    def vector(self) -> tuple[Fraction, ...]:
        self._require_known()
        return self.coords

    def as_text(self) -> str:
        parts = []
        for b, c in zip(self.basis, self.coords):
            if c is None:
                parts.append(f"?*{b}")
            elif c:
                parts.append(f"{rat_str(c)}*{b}")
        return " + ".join(parts) if parts else "0"

    def as_dict(self) -> dict:
        return {
            "basis": list(self.basis),
            "coords": [None if c is None else rat_str(c) for c in self.coords],
        }


def primitive(v: Sequence) -> tuple[int, ...]:
    """Primitive integer vector on the ray through v."""
    q = [Fraction(x) for x in v]
    if not any(q):
        raise ValidationError("zero vector has no ray")
    den = reduce(lcm, (x.denominator for x in q), 1)
    ints = [int(x * den) for x in q]
    g = reduce(gcd, (abs(x) for x in ints if x), 0)
    return tuple(x // g for x in ints)


def _dot(a, b):
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def _cross(a, b):
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def _det2(a, b):
    return a[0] * b[1] - a[1] * b[0]


def _inner_normals(rays: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """Primitive inward facet normals of the full-dimensional cone over rays."""
    d = len(rays[0])
    cands = []
    if d == 2:
        for a in rays:
            n = (-a[1], a[0])
            cands.append(n)
    elif d == 3:
        for a, b in combinations(rays, 2):
            n = _cross(a, b)
            if any(n):
                cands.append(n)
    else:
        raise ValidationError("only rank 2 and 3 are supported")
    normals = set()
    for n in cands:
        vals = [_dot(n, g) for g in rays]
        if all(v >= 0 for v in vals):
            m = n
        elif all(v <= 0 for v in vals):
            m = tuple(-x for x in n)
        else:
            continue
        # a facet must contain d-1 independent rays
        on = [g for g, v in zip(rays, vals) if v == 0]
        if d == 2 and not on:
            continue
        if d == 3 and not any(any(_cross(a, b)) for a, b in combinations(on, 2)):
            continue
        normals.add(primitive(m))
    return sorted(normals)


class ConeQ:
    """A pointed full-dimensional rational cone given by generators."""

    def __init__(self, generators: Sequence[Sequence], names: Sequence[str] | None = None):
        rays = sorted({primitive(g) for g in generators})
        if not rays:
            raise ValidationError("a cone needs generators")
        d = len(rays[0])
        if any(len(g) != d for g in rays):
            raise ValidationError("generators of mixed dimension")
        self.dim = d
        self.facets = _inner_normals(rays)
        if not self.facets:
            raise ValidationError("generators do not span a full-dimensional pointed cone")
        # pointed and full-dimensional iff the summed facet normals are positive on every ray
        ell = tuple(sum(n[i] for n in self.facets) for i in range(d))
        if any(_dot(ell, g) <= 0 for g in rays):
            raise ValidationError("generators do not span a full-dimensional pointed cone")
        # keep only extremal rays
        self.rays = [g for g in rays if self._is_extremal(g, rays)]
        if len(self.rays) < d:
            raise ValidationError("cone is not full-dimensional")
        self.names = list(names) if names else []

    def _is_extremal(self, g, rays) -> bool:
        on = [n for n in self.facets if _dot(n, g) == 0]
        if self.dim == 2:
            return len(on) >= 1
        return len(on) >= 2

    def contains(self, v: Sequence) -> bool:
        return all(_dot(n, v) >= 0 for n in self.facets)

    def contains_interior(self, v: Sequence) -> bool:
        return all(_dot(n, v) > 0 for n in self.facets)

    def on_boundary_ray(self, v: Sequence) -> bool:
        """True when v lies on an extremal ray of the cone."""
        p = primitive(v)
        return p in self.rays

    def __eq__(self, other) -> bool:
        if not isinstance(other, ConeQ):
            return NotImplemented
        return self.rays == other.rays

    def __hash__(self) -> int:
        return hash(tuple(self.rays))

    def __repr__(self) -> str:
        return f"ConeQ({self.rays})"

    def as_dict(self) -> dict:
        return {"rays": [list(r) for r in self.rays]}


def cone_of(classes: Sequence[DivClass]) -> ConeQ:
    return ConeQ([c.vector() for c in classes])


# planar helpers for rank-3 slices


def _hull2(points: list[tuple]) -> list[tuple]:
    """Convex hull (counter-clockwise, no collinear vertices)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and _det2(
                (out[-1][0] - out[-2][0], out[-1][1] - out[-2][1]),
                (p[0] - out[-2][0], p[1] - out[-2][1]),
            ) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(reversed(pts))
    return lower[:-1] + upper[:-1]


def _area2(poly: list[tuple]) -> Fraction:
    """Twice the signed area."""
    return sum(
        (_det2(poly[i], poly[(i + 1) % len(poly)]) for i in range(len(poly))), Fraction(0)
    )


def _split(poly: list[tuple], line: tuple) -> list[list[tuple]]:
    """Split a convex polygon by the line a x + b y = c."""
    a, b, c = line
    vals = [a * p[0] + b * p[1] - c for p in poly]
    if all(v >= 0 for v in vals) or all(v <= 0 for v in vals):
        return [poly]
    pos, neg = [], []
    n = len(poly)
    for i in range(n):
        p, q = poly[i], poly[(i + 1) % n]
        vp, vq = vals[i], vals[(i + 1) % n]
        if vp >= 0:
            pos.append(p)
        if vp <= 0:
            neg.append(p)
        if (vp > 0 and vq < 0) or (vp < 0 and vq > 0):
            t = vp / (vp - vq)
            x = (p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]))
            pos.append(x)
            neg.append(x)
    return [pos, neg]


def _in_triangle_strict(p, tri) -> bool:
    a, b, c = tri
    s = _det2((b[0] - a[0], b[1] - a[1]), (c[0] - a[0], c[1] - a[1]))
    d1 = _det2((b[0] - a[0], b[1] - a[1]), (p[0] - a[0], p[1] - a[1]))
    d2 = _det2((c[0] - b[0], c[1] - b[1]), (p[0] - b[0], p[1] - b[1]))
    d3 = _det2((a[0] - c[0], a[1] - c[1]), (p[0] - c[0], p[1] - c[1]))
    if s > 0:
        return d1 > 0 and d2 > 0 and d3 > 0
    return d1 < 0 and d2 < 0 and d3 < 0


class _Slice:
    """Affine slice of a pointed cone by l . x = 1 with a chosen planar chart."""

    def __init__(self, support: ConeQ):
        self.dim = support.dim
        ell = tuple(sum(n[i] for n in support.facets) for i in range(self.dim))
        if any(_dot(ell, g) <= 0 for g in support.rays):
            raise ValidationError("could not find a functional positive on the support")
        self.ell = ell
        self.drop = next(i for i in range(self.dim) if ell[i])

    def project(self, v) -> tuple:
        s = _dot(self.ell, v)
        if s <= 0:
            raise ValidationError("vector is not in the support half-space")
        w = [Fraction(x) / s for x in v]
        return tuple(w[i] for i in range(self.dim) if i != self.drop)

    def lift(self, p) -> tuple[int, ...]:
        coords = list(p)
        rest = Fraction(1) - sum(
            (self.ell[i] * coords[j] for j, i in enumerate(k for k in range(self.dim) if k != self.drop)),
            Fraction(0),
        )
        full = coords[: self.drop] + [rest / self.ell[self.drop]] + coords[self.drop :]
        return primitive(full)

    def measure(self, cone: ConeQ) -> Fraction:
        """Length (rank 2) or twice the area (rank 3) of the cone's slice."""
        pts = [self.project(g) for g in cone.rays]
        if self.dim == 2:
            xs = [p[0] for p in pts]
            return max(xs) - min(xs)
        return abs(_area2(_hull2(pts)))

    def interior_point(self, cone: ConeQ) -> tuple:
        pts = [self.project(g) for g in cone.rays]
        avg = tuple(sum(p[i] for p in pts) / len(pts) for i in range(self.dim - 1))
        return self.lift(avg)


@dataclass
class ChamberFan:
    support: ConeQ
    chambers: list[ConeQ]
    labels: list[list[str]] = field(default_factory=list)

    def __post_init__(self):
        if not self.labels:
            self.labels = [[] for _ in self.chambers]
        self._slice = _Slice(self.support)

    def index_of(self, cone: ConeQ) -> int | None:
        for i, ch in enumerate(self.chambers):
            if ch == cone:
                return i
        return None

    def chambers_in(self, cone: ConeQ) -> list[int]:
        """Indices of chambers whose interior point lies in the cone."""
        return [
            i for i, ch in enumerate(self.chambers) if cone.contains(self._slice.interior_point(ch))
        ]

    def is_union_of_chambers(self, cone: ConeQ) -> bool:
        """True when the cone is exactly a union of chambers."""
        idx = self.chambers_in(cone)
        if not idx:
            return False
        if not all(all(cone.contains(g) for g in self.chambers[i].rays) for i in idx):
            return False
        total = sum((self._slice.measure(self.chambers[i]) for i in idx), Fraction(0))
        return total == self._slice.measure(cone)

    def check(self) -> dict:
        """Full dimension, disjoint interiors and exact covering of the support."""
        sl = self._slice
        sizes = [sl.measure(ch) for ch in self.chambers]
        covering = sum(sizes, Fraction(0)) == sl.measure(self.support)
        full = all(s > 0 for s in sizes)
        disjoint = True
        for i, ch in enumerate(self.chambers):
            p = sl.interior_point(ch)
            for j, other in enumerate(self.chambers):
                if i != j and other.contains_interior(p):
                    disjoint = False
        inside = all(all(self.support.contains(g) for g in ch.rays) for ch in self.chambers)
        return {
            "full_dimensional": full,
            "disjoint_interiors": disjoint,
            "covers_support": covering and inside,
        }

    def as_dict(self) -> dict:
        return {
            "support": [list(r) for r in self.support.rays],
            "chambers": [
                {"rays": [list(r) for r in ch.rays], "labels": list(lbl)}
                for ch, lbl in zip(self.chambers, self.labels)
            ],
        }


def gkz_decomposition(gens: Sequence) -> ChamberFan:
    """Common refinement of all cones spanned by subsets of the generators.

    Accepts DivClass instances or plain vectors, in lattice rank 2 or 3.
    """
    vecs = [g.vector() if isinstance(g, DivClass) else tuple(Fraction(x) for x in g) for g in gens]
    if not vecs:
        raise ValidationError("no generators")
    d = len(vecs[0])
    if d not in (2, 3):
        raise ValidationError("only lattice rank 2 or 3 is supported")
    rays = sorted({primitive(v) for v in vecs})
    support = ConeQ(rays)
    sl = _Slice(support)
    pts = sorted({sl.project(g) for g in rays})
    if d == 2:
        xs = sorted({p[0] for p in pts})
        chambers = [ConeQ([sl.lift((a,)), sl.lift((b,))]) for a, b in zip(xs, xs[1:])]
        return ChamberFan(support, sorted(chambers, key=lambda c: c.rays))
    hull = _hull2(pts)
    lines = set()
    for p, q in combinations(pts, 2):
        a, b = q[1] - p[1], p[0] - q[0]
        c = a * p[0] + b * p[1]
        # normalize so that equal lines compare equal
        lead = a if a else b
        lines.add((a / lead, b / lead, c / lead))
    cells = [hull]
    for line in sorted(lines):
        nxt = []
        for cell in cells:
            for piece in _split(cell, line):
                piece = _hull2(piece)
                if len(piece) >= 3 and _area2(piece) != 0:
                    nxt.append(piece)
        cells = nxt
    triangles = [
        t for t in combinations(pts, 3) if _det2((t[1][0] - t[0][0], t[1][1] - t[0][1]), (t[2][0] - t[0][0], t[2][1] - t[0][1]))
    ]
    groups: dict[frozenset, list] = {}
    for cell in cells:
        cen = (sum(p[0] for p in cell) / len(cell), sum(p[1] for p in cell) / len(cell))
        sig = frozenset(i for i, t in enumerate(triangles) if _in_triangle_strict(cen, t))
        groups.setdefault(sig, []).extend(cell)
    chambers = [ConeQ([sl.lift(p) for p in _hull2(verts)]) for verts in groups.values()]
    return ChamberFan(support, sorted(chambers, key=lambda c: c.rays))
