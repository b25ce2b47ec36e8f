"""Exact lattice-polytope and cone geometry.

Everything here is rational arithmetic: convex hulls with facet
descriptions, faces and normal cones, Minkowski sums, permutation-orbit
(weight) polytopes with their majorization membership test, the dominance
order, and the pair of open cones attached to the extreme diagonal lattice
points of a polytope.

The core engine is a double-description computation for polyhedral cones
{x : r.x >= 0}; polytope facets are obtained from it by homogenization.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

Vec = Tuple[Fraction, ...]


class EmptyInputError(ValueError):
    pass


class GeometryError(ValueError):
    pass


# ---------------------------------------------------------------------------
# exact vector helpers
# ---------------------------------------------------------------------------


def _vec(x) -> Vec:
    return tuple(Fraction(c) for c in x)


def _dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def _sub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def _is_zero(a: Sequence[Fraction]) -> bool:
    return all(x == 0 for x in a)


def primitive(a: Sequence[Fraction]) -> Tuple[int, ...]:
    """Scale a rational vector to coprime integers (empty gcd -> zero)."""
    fr = [Fraction(x) for x in a]
    if all(x == 0 for x in fr):
        return tuple(0 for _ in fr)
    denom = math.lcm(*(x.denominator for x in fr))
    ints = [int(x * denom) for x in fr]
    g = math.gcd(*(abs(v) for v in ints))
    return tuple(v // g for v in ints)


def _rank(rows: List[Vec]) -> int:
    """Rank of a list of rational vectors (Gaussian elimination)."""
    m = [list(r) for r in rows if not _is_zero(r)]
    if not m:
        return 0
    rank = 0
    cols = len(m[0])
    row = 0
    for col in range(cols):
        pivot = next((r for r in range(row, len(m)) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[row], m[pivot] = m[pivot], m[row]
        inv = 1 / m[row][col]
        m[row] = [x * inv for x in m[row]]
        for r in range(len(m)):
            if r != row and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[row])]
        row += 1
        rank += 1
        if row == len(m):
            break
    return rank


# ---------------------------------------------------------------------------
# double description: extreme rays of {x : r.x >= 0}
# ---------------------------------------------------------------------------


def dd_cone(rows: Sequence[Sequence], dim: int) -> Tuple[List[Vec], List[Vec]]:
    """Lineality basis and extreme rays of the cone {x in Q^dim : r.x >= 0}.

    The cone equals span(lineality) + nonnegative span(rays).  Rays are
    returned as primitive integer vectors (as Fractions).
    """
    rows = [_vec(r) for r in rows if not _is_zero(_vec(r))]
    lineality: List[Vec] = [
        tuple(Fraction(1 if i == j else 0) for j in range(dim))
        for i in range(dim)
    ]
    rays: List[Vec] = []
    active: List[Vec] = []  # constraints processed so far

    def tight_rows(v: Vec) -> List[Vec]:
        return [a for a in active if _dot(a, v) == 0]

    def is_extreme(v: Vec) -> bool:
        return _rank(tight_rows(v)) == dim - len(lineality) - 1

    def adjacent(p: Vec, m: Vec) -> bool:
        common = [a for a in active if _dot(a, p) == 0 and _dot(a, m) == 0]
        return _rank(common) == dim - len(lineality) - 2

    for a in rows:
        hit_idx = next(
            (k for k, b in enumerate(lineality) if _dot(a, b) != 0), None)
        if hit_idx is not None:
            b = lineality.pop(hit_idx)
            scale = _dot(a, b)
            if scale < 0:
                b = tuple(-x for x in b)
                scale = -scale
            lineality = [
                tuple(l[i] - _dot(a, l) / scale * b[i] for i in range(dim))
                for l in lineality
            ]
            rays = [
                tuple(r[i] - _dot(a, r) / scale * b[i] for i in range(dim))
                for r in rays
            ]
            rays.append(b)
            active.append(a)
            rays = [_vec(primitive(r)) for r in rays if not _is_zero(r)]
            rays = _dedupe(rays)
            rays = [r for r in rays if is_extreme(r)]
            continue
        plus = [r for r in rays if _dot(a, r) > 0]
        zero = [r for r in rays if _dot(a, r) == 0]
        minus = [r for r in rays if _dot(a, r) < 0]
        active.append(a)
        if not minus:
            rays = plus + zero
            continue
        new_rays = plus + zero
        for p, m in itertools.product(plus, minus):
            if len(rays) > 2:
                common = [c for c in active[:-1]
                          if _dot(c, p) == 0 and _dot(c, m) == 0]
                if _rank(common) != dim - len(lineality) - 2:
                    continue
            combo = tuple(
                _dot(a, p) * m[i] - _dot(a, m) * p[i] for i in range(dim))
            if not _is_zero(combo):
                new_rays.append(_vec(primitive(combo)))
        rays = _dedupe(new_rays)
        rays = [r for r in rays if is_extreme(r)]
    return lineality, [_vec(primitive(r)) for r in rays]


def _dedupe(vecs: List[Vec]) -> List[Vec]:
    seen = set()
    out = []
    for v in vecs:
        key = primitive(v)
        if key not in seen:
            seen.add(key)
            out.append(v)
    return out


# ---------------------------------------------------------------------------
# cones
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Cone:
    """Rational polyhedral cone with matching generator and inequality forms.

    The cone is {x : a.x >= 0 for a in inequalities, b.x = 0 for b in
    equations} = span(lineality) + cone(rays).  `is_open` selects relative
    interior semantics for membership.
    """

    n: int
    rays: Tuple[Tuple[int, ...], ...]
    lineality: Tuple[Tuple[int, ...], ...]
    inequalities: Tuple[Tuple[int, ...], ...]
    equations: Tuple[Tuple[int, ...], ...]
    is_open: bool = False

    @staticmethod
    def from_inequalities(n: int, normals: Iterable[Sequence],
                          equations: Iterable[Sequence] = (),
                          is_open: bool = False) -> "Cone":
        ineqs = [primitive(a) for a in normals]
        ineqs = [a for a in ineqs if any(a)]
        eqs = [primitive(b) for b in equations]
        eqs = [b for b in eqs if any(b)]
        rows = [list(a) for a in ineqs]
        for b in eqs:
            rows.append(list(b))
            rows.append([-x for x in b])
        lin, rays = dd_cone(rows, n)
        gens = [primitive(r) for r in rays] + [primitive(l) for l in lin]
        # inequality rows that vanish on every generator are implicit
        # equations; keep them separate so relative-interior tests work
        implicit, strict_rows = [], []
        for a in ineqs:
            if all(_dot(_vec(a), _vec(g)) == 0 for g in gens):
                implicit.append(a)
            else:
                strict_rows.append(a)
        return Cone(
            n=n,
            rays=tuple(primitive(r) for r in rays),
            lineality=tuple(primitive(l) for l in lin),
            inequalities=tuple(strict_rows),
            equations=tuple(eqs + implicit),
            is_open=is_open,
        )

    @staticmethod
    def from_generators(n: int, generators: Iterable[Sequence],
                        is_open: bool = False) -> "Cone":
        gens = [_vec(g) for g in generators]
        lin, rays = dd_cone(gens, n)  # dual cone of the generators
        return Cone.from_inequalities(
            n, [primitive(r) for r in rays],
            [primitive(l) for l in lin], is_open)

    @property
    def generators(self) -> Tuple[Tuple[int, ...], ...]:
        """Rays plus both orientations of the lineality basis."""
        out = list(self.rays)
        for l in self.lineality:
            out.append(l)
            out.append(tuple(-x for x in l))
        return tuple(out)

    def dim(self) -> int:
        return self.n - _rank([_vec(b) for b in self.equations])

    def contains(self, x, strictly: Optional[bool] = None) -> bool:
        """Membership; strictly=None uses the cone's own openness flag."""
        x = _vec(x)
        if strictly is None:
            strictly = self.is_open
        for b in self.equations:
            if _dot(_vec(b), x) != 0:
                return False
        for a in self.inequalities:
            v = _dot(_vec(a), x)
            if strictly and v <= 0:
                return False
            if not strictly and v < 0:
                return False
        return True

    def is_empty_open(self) -> bool:
        """True when the relative interior is empty as a subset of R^n,
        i.e. the cone is not full-dimensional while flagged open."""
        return self.is_open and self.dim() < self.n

    def negate(self) -> "Cone":
        return Cone(
            self.n,
            tuple(tuple(-x for x in r) for r in self.rays),
            self.lineality,
            tuple(tuple(-x for x in a) for a in self.inequalities),
            self.equations,
            self.is_open,
        )

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "generators": [list(g) for g in self.generators],
            "inequalities": [list(a) for a in self.inequalities],
            "equations": [list(b) for b in self.equations],
            "open": self.is_open,
        }

    @staticmethod
    def from_dict(data: dict) -> "Cone":
        return Cone.from_inequalities(
            data["n"], data["inequalities"], data["equations"],
            is_open=data["open"])


# ---------------------------------------------------------------------------
# lattice polytopes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Face:
    """A face of a polytope, described by the vertices lying on it."""

    vertices: Tuple[Tuple[int, ...], ...]

    def dim(self) -> int:
        if len(self.vertices) <= 1:
            return 0
        v0 = _vec(self.vertices[0])
        return _rank([_sub(_vec(v), v0) for v in self.vertices[1:]])


class LatticePolytope:
    """Convex hull of finitely many points of Z^n, with exact facets.

    Facets are inequalities normal.x <= offset with gcd-reduced integer
    normals; equations cut out the affine hull when the polytope is not
    full-dimensional.
    """

    __slots__ = ("n", "vertices", "facets", "equations")

    def __init__(self, n, vertices, facets, equations):
        self.n = n
        self.vertices = vertices      # tuple of integer tuples
        self.facets = facets          # tuple of (normal, offset)
        self.equations = equations    # tuple of (normal, offset)

    @staticmethod
    def hull(points: Iterable[Sequence[int]]) -> "LatticePolytope":
        pts = sorted({tuple(int(c) for c in p) for p in points})
        if not pts:
            raise EmptyInputError("hull of an empty point set")
        n = len(pts[0])
        if any(len(p) != n for p in pts):
            raise GeometryError("points of mixed dimension")
        # homogenize: the dual cone {(a0, a) : a0 + a.p >= 0 for all p}
        rows = [[1] + list(p) for p in pts]
        lin, rays = dd_cone(rows, n + 1)
        # each extreme ray (a0, a) with a != 0 is a facet a0 + a.x >= 0,
        # stored as (-a).x <= a0 with the offset recomputed after gcd
        # reduction of the normal
        facet_list = []
        for r in rays:
            normal = primitive([-x for x in r[1:]])
            if not any(normal):
                continue  # the trivial inequality 1 >= 0
            off = max(_dot(_vec(normal), _vec(p)) for p in pts)
            facet_list.append((normal, off))
        facet_list = sorted(set(facet_list))
        equations = []
        for l in lin:
            b = primitive(l[1:])
            if not any(b):
                continue
            val = _dot(_vec(b), _vec(pts[0]))
            equations.append((b, val))
        equations = sorted(set(equations))
        eq_rows = [_vec(b) for b, _ in equations]
        verts = []
        for p in pts:
            tight = [
                _vec(normal) for normal, off in facet_list
                if _dot(_vec(normal), _vec(p)) == off
            ]
            if _rank(tight + eq_rows) == n:
                verts.append(p)
        return LatticePolytope(
            n, tuple(sorted(verts)), tuple(facet_list), tuple(equations))

    # -- queries ---------------------------------------------------------

    def contains(self, x) -> bool:
        x = _vec(x)
        return (
            all(_dot(_vec(b), x) == c for b, c in self.equations)
            and all(_dot(_vec(a), x) <= c for a, c in self.facets)
        )

    def dim(self) -> int:
        return self.n - _rank([_vec(b) for b, _ in self.equations])

    def lattice_points(self, guard: int = 2_000_000) -> List[Tuple[int, ...]]:
        """All integer points of the polytope (small boxes only)."""
        lows = [min(v[i] for v in self.vertices) for i in range(self.n)]
        highs = [max(v[i] for v in self.vertices) for i in range(self.n)]
        count = 1
        for lo, hi in zip(lows, highs):
            count *= hi - lo + 1
            if count > guard:
                raise GeometryError("bounding box too large to enumerate")
        out = []
        for p in itertools.product(*(range(lo, hi + 1)
                                     for lo, hi in zip(lows, highs))):
            if self.contains(p):
                out.append(p)
        return out

    def smallest_face(self, m) -> Face:
        """The unique face whose relative interior contains m."""
        m = _vec(m)
        if not self.contains(m):
            raise GeometryError(f"point {tuple(map(str, m))} is not in the polytope")
        tight = [
            (normal, off) for normal, off in self.facets
            if _dot(_vec(normal), m) == off
        ]
        verts = [
            v for v in self.vertices
            if all(_dot(_vec(a), _vec(v)) == c for a, c in tight)
        ]
        return Face(tuple(verts))

    def normal_cone(self, face: Face) -> Cone:
        """Closed normal cone of a face: directions minimized on the face.

        {w : w.x <= w.y for all x in the face, y in the polytope}.
        """
        if not face.vertices:
            raise GeometryError("face has no vertices")
        for u in face.vertices:
            if u not in self.vertices:
                raise GeometryError("face vertices must be polytope vertices")
        u0 = _vec(face.vertices[0])
        ineqs = [
            _sub(_vec(v), u0) for v in self.vertices
            if v not in face.vertices
        ]
        eqs = [_sub(_vec(u), u0) for u in face.vertices[1:]]
        return Cone.from_inequalities(self.n, ineqs, eqs)

    def vertex_tangent_cone(self, vertex, is_open=True) -> Cone:
        """Directions along which `vertex` weakly dominates the polytope:
        {w : w.vertex >= w.y for all y}.  This is the recession cone of the
        amoeba-complement component attached to the vertex."""
        v0 = _vec(vertex)
        if tuple(int(c) for c in vertex) not in self.vertices:
            raise GeometryError("not a vertex of the polytope")
        ineqs = [_sub(v0, _vec(v)) for v in self.vertices
                 if _vec(v) != v0]
        return Cone.from_inequalities(self.n, ineqs, (), is_open=is_open)

    def minkowski(self, other: "LatticePolytope") -> "LatticePolytope":
        if self.n != other.n:
            raise GeometryError("dimension mismatch")
        sums = {
            tuple(x + y for x, y in zip(v, w))
            for v in self.vertices for w in other.vertices
        }
        return LatticePolytope.hull(sums)

    def __eq__(self, other) -> bool:
        return (isinstance(other, LatticePolytope) and self.n == other.n
                and self.vertices == other.vertices)

    def __hash__(self):
        return hash((self.n, self.vertices))

    def __repr__(self):
        return f"LatticePolytope(n={self.n}, vertices={list(self.vertices)})"

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "vertices": [list(v) for v in self.vertices],
            "facets": [
                {"normal": list(a), "offset": int(c)} for a, c in self.facets
            ],
            "equations": [
                {"normal": list(b), "value": int(c)} for b, c in self.equations
            ],
        }

    @staticmethod
    def from_dict(data: dict) -> "LatticePolytope":
        return LatticePolytope.hull(data["vertices"])


# ---------------------------------------------------------------------------
# weight polytopes, majorization, dominance
# ---------------------------------------------------------------------------


def _check_weakly_increasing(lam) -> Tuple[Fraction, ...]:
    lam = _vec(lam)
    if any(lam[i] > lam[i + 1] for i in range(len(lam) - 1)):
        raise GeometryError(f"{tuple(map(str, lam))} is not weakly increasing")
    return lam


def weight_polytope(lam: Sequence[int]) -> LatticePolytope:
    """Convex hull of the permutation orbit of a weakly increasing vector."""
    _check_weakly_increasing(lam)
    pts = set(itertools.permutations(int(x) for x in lam))
    return LatticePolytope.hull(pts)


def majorization_contains(lam, y) -> bool:
    """Membership of y in the orbit hull of lam by partial-sum inequalities.

    y lies in the hull iff for every k the sum of the k largest coordinates
    of y is at most the sum of the k largest of lam, with equality of total
    sums.  (The worst index set of size k picks the k largest coordinates.)
    """
    lam = _check_weakly_increasing(lam)
    y = _vec(y)
    if len(y) != len(lam):
        raise GeometryError("dimension mismatch")
    lam_desc = sorted(lam, reverse=True)
    y_desc = sorted(y, reverse=True)
    sum_l = Fraction(0)
    sum_y = Fraction(0)
    for k in range(len(y)):
        sum_l += lam_desc[k]
        sum_y += y_desc[k]
        if sum_y > sum_l:
            return False
    return sum_y == sum_l


def dominates(x, y) -> bool:
    """Whether y is below x in the dominance order, i.e. C(y) is contained
    in C(x).  Majorization of the sorted vectors is equivalent to checking
    every vertex of C(y), since the partial-sum test is permutation
    invariant."""
    _check_weakly_increasing(x)
    _check_weakly_increasing(y)
    return majorization_contains(x, y)


# ---------------------------------------------------------------------------
# extreme diagonal lattice points and their open cones
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiagExtremes:
    """The extreme integers N with N*(1,..,1) in the polytope, and the open
    cones of directions along which those diagonal vertices dominate.

    A cone is None when the diagonal point is absent or is not a vertex.
    The cones point outward (directions w with w.N1 >= w.y for all y in the
    polytope); they are the recession cones of the matching amoeba
    complement components, hence exactly the regions the rescaled amoeba
    eventually leaves.
    """

    n_minus: Optional[int]
    n_plus: Optional[int]
    cone_minus: Optional[Cone]
    cone_plus: Optional[Cone]


def diag_extremes(poly: LatticePolytope) -> DiagExtremes:
    lo, hi = _diagonal_interval(poly)
    if lo is None:
        return DiagExtremes(None, None, None, None)
    n_minus = math.ceil(lo)
    n_plus = math.floor(hi)
    if n_minus > n_plus:
        return DiagExtremes(None, None, None, None)

    def open_cone(npt: int) -> Optional[Cone]:
        vertex = tuple(npt for _ in range(poly.n))
        if vertex not in poly.vertices:
            return None
        return poly.vertex_tangent_cone(vertex, is_open=True)

    return DiagExtremes(
        n_minus, n_plus, open_cone(n_minus), open_cone(n_plus))


def _diagonal_interval(poly: LatticePolytope):
    """The interval {s : s*(1,...,1) in P} as a pair of Fractions."""
    ones = _vec([1] * poly.n)
    lo = None
    hi = None
    for b, c in poly.equations:
        coeff = _dot(_vec(b), ones)
        if coeff == 0:
            if c != 0:
                return None, None
        else:
            s = Fraction(c) / coeff
            lo = s if lo is None else max(lo, s)
            hi = s if hi is None else min(hi, s)
    for a, c in poly.facets:
        coeff = _dot(_vec(a), ones)
        if coeff > 0:
            bound = Fraction(c) / coeff
            hi = bound if hi is None else min(hi, bound)
        elif coeff < 0:
            bound = Fraction(c) / coeff
            lo = bound if lo is None else max(lo, bound)
        else:
            if c < 0:
                return None, None
    if lo is None or hi is None:
        # polytopes are bounded, so this only happens for empty data
        mins = min(_dot(_vec(v), ones) for v in poly.vertices) / poly.n
        maxs = max(_dot(_vec(v), ones) for v in poly.vertices) / poly.n
        lo = mins if lo is None else lo
        hi = maxs if hi is None else hi
    if lo > hi:
        return None, None
    return lo, hi
