"""Closed-form scaling limit of a hypersurface matrix amoeba.

For a hypersurface f = 0 the rescaled amoeba rho * sA(f) converges (as
rho -> 0+) to the complement of two open cones attached to the extreme
diagonal lattice points of the Newton polytope of f.  The cones returned
here point outward (directions along which the diagonal vertex dominates
the polytope): they are the recession cones of the matching complement
components, hence exactly the directions the rescaled amoeba vacates.
The limit set equals the negated spherical tropical variety; this module
always reports the limit set and obtains the tropical variety itself by
negation.

Special shapes fall out of the same computation: support inside the
diagonal line Z*(1,..,1) gives the hyperplane {sum x = 0} (or the empty
set for a monomial), and absent or non-vertex diagonal points give the
whole space.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .convex import Cone, DiagExtremes, LatticePolytope, diag_extremes
from .glpoly import RegularFunction
from .numerics import GridResult, MembershipOptions, amoeba_grid
from .support import snewt


FULL_SPACE = "full-space"
EMPTY = "empty"
HYPERPLANE = "hyperplane-sum-zero"
COMPLEMENT_OF_CONES = "complement-of-cones"


@dataclass(frozen=True)
class TropicalDescription:
    """The limit set lim rho*sA(f) as a closed subset of R^n.

    kind is one of full-space, empty, hyperplane-sum-zero or
    complement-of-cones; the open cones (when present) are the removed
    regions.  The polytope and extreme diagonal integers are kept as
    provenance.
    """

    kind: str
    n: int
    cone_minus: Optional[Cone]
    cone_plus: Optional[Cone]
    polytope: LatticePolytope
    n_minus: Optional[int]
    n_plus: Optional[int]

    def cones(self) -> List[Cone]:
        return [c for c in (self.cone_minus, self.cone_plus) if c is not None]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "n_minus": self.n_minus,
            "n_plus": self.n_plus,
            "cone_minus": None if self.cone_minus is None
            else self.cone_minus.to_dict(),
            "cone_plus": None if self.cone_plus is None
            else self.cone_plus.to_dict(),
            "polytope": self.polytope.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @staticmethod
    def from_dict(data: dict) -> "TropicalDescription":
        return TropicalDescription(
            kind=data["kind"],
            n=data["n"],
            cone_minus=None if data["cone_minus"] is None
            else Cone.from_dict(data["cone_minus"]),
            cone_plus=None if data["cone_plus"] is None
            else Cone.from_dict(data["cone_plus"]),
            polytope=LatticePolytope.from_dict(data["polytope"]),
            n_minus=data["n_minus"],
            n_plus=data["n_plus"],
        )


def strop_hypersurface(f: RegularFunction, trials: int = 2,
                       seed: int = 2024) -> TropicalDescription:
    """Limit set of the rescaled amoeba of the hypersurface f = 0.

    Equals the negative of the spherical tropical variety of V(f); the
    result depends only on the Newton polytope of f.
    """
    if f.is_zero():
        raise ValueError("the zero function does not cut out a hypersurface")
    poly = snewt(f, trials=trials, seed=seed)
    return describe_polytope(poly)


def describe_polytope(poly: LatticePolytope) -> TropicalDescription:
    """The limit-set description attached to a Newton polytope."""
    d = diag_extremes(poly)
    kind = _classify(poly, d)
    return TropicalDescription(
        kind=kind, n=poly.n, cone_minus=d.cone_minus, cone_plus=d.cone_plus,
        polytope=poly, n_minus=d.n_minus, n_plus=d.n_plus)


def _classify(poly: LatticePolytope, d: DiagExtremes) -> str:
    diagonal_support = all(
        len(set(v)) == 1 for v in poly.vertices)
    if diagonal_support:
        if len(poly.vertices) == 1:
            # monomial c * det^N: the variety is empty
            return EMPTY
        return HYPERPLANE
    if d.cone_minus is None and d.cone_plus is None:
        return FULL_SPACE
    return COMPLEMENT_OF_CONES


def strop_member(d: TropicalDescription, x: Sequence) -> bool:
    """Exact membership of x in the limit set (cones are open, so their
    boundaries belong to the set)."""
    x = [Fraction(c) for c in x]
    if d.kind == EMPTY:
        return False
    if d.kind == FULL_SPACE:
        return True
    if d.kind == HYPERPLANE:
        return sum(x) == 0
    for cone in d.cones():
        if cone.contains(x, strictly=True):
            return False
    return True


# ---------------------------------------------------------------------------
# margins (floating point; used by the scaling experiment and plots)
# ---------------------------------------------------------------------------


def cone_depth(cone: Optional[Cone], w) -> float:
    """Euclidean depth of w inside the open cone: the smallest distance to
    one of its bounding hyperplanes, positive only strictly inside."""
    if cone is None:
        return -math.inf
    if cone.equations:
        return -math.inf  # empty interior
    if not cone.inequalities:
        return math.inf  # the whole space
    depths = []
    for a in cone.inequalities:
        norm = math.sqrt(sum(float(c) ** 2 for c in a))
        depths.append(sum(float(c) * float(v) for c, v in zip(a, w)) / norm)
    return min(depths)


def removal_margin(d: TropicalDescription, w) -> float:
    """Lower bound for the distance from a limit-set point w to the removed
    cones; +inf when nothing full-dimensional is removed (hyperplane and
    full-space kinds, where the description is exact at every scale)."""
    cones = d.cones()
    if d.kind in (HYPERPLANE, FULL_SPACE) or not cones:
        return math.inf
    margins = []
    for cone in cones:
        if cone.equations or not cone.inequalities:
            continue
        worst = 0.0
        for a in cone.inequalities:
            norm = math.sqrt(sum(float(c) ** 2 for c in a))
            val = -sum(float(c) * float(v) for c, v in zip(a, w)) / norm
            worst = max(worst, val)
        margins.append(worst)
    return min(margins) if margins else math.inf


# ---------------------------------------------------------------------------
# the scaling-limit experiment
# ---------------------------------------------------------------------------


@dataclass
class RhoReport:
    rho: float
    violations: int
    coverage_misses: int
    max_margin: float
    members: int
    inconclusive: int


@dataclass
class LimitReport:
    f_text: str
    epsilon: float
    description: Optional[TropicalDescription]
    grid: GridResult
    rows: List[RhoReport]
    exploratory: bool = False

    def to_dict(self) -> dict:
        return {
            "f": self.f_text,
            "epsilon": self.epsilon,
            "exploratory": self.exploratory,
            "description": None if self.description is None
            else self.description.to_dict(),
            "rows": [
                {
                    "rho": r.rho,
                    "violations": r.violations,
                    "coverage_misses": r.coverage_misses,
                    "max_margin": None if math.isnan(r.max_margin)
                    else r.max_margin,
                    "members": r.members,
                    "inconclusive": r.inconclusive,
                }
                for r in self.rows
            ],
            "grid": self.grid.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @staticmethod
    def from_dict(data: dict) -> "LimitReport":
        return LimitReport(
            f_text=data["f"],
            epsilon=data["epsilon"],
            description=None if data["description"] is None
            else TropicalDescription.from_dict(data["description"]),
            grid=GridResult.from_dict(data["grid"]),
            rows=[RhoReport(
                rho=r["rho"], violations=r["violations"],
                coverage_misses=r["coverage_misses"],
                max_margin=math.nan if r["max_margin"] is None
                else r["max_margin"],
                members=r["members"],
                inconclusive=r["inconclusive"]) for r in data["rows"]],
            exploratory=data["exploratory"],
        )


def limit_experiment(f, rho_list: Sequence[float],
                     box: Tuple[float, float], resolution: int,
                     opts: Optional[MembershipOptions] = None,
                     epsilon: float = 0.2,
                     allow_ideal: bool = False,
                     f_text: str = "") -> LimitReport:
    """Compare the rescaled amoeba against its predicted limit set.

    Membership is evaluated once on the grid; per rho the report counts
    (a) members landing deeper than epsilon inside a removed cone after
    scaling, and (b) limit-set grid points at margin > epsilon from the
    removed cones with no member within epsilon/rho (unscaled).
    Inconclusive points are reported separately and never counted as
    violations.  Several generators may be passed only with
    allow_ideal=True, in which case the run is exploratory: members of the
    joint zero set are sampled but no description is asserted.
    """
    if isinstance(f, RegularFunction):
        functions = [f]
    else:
        functions = list(f)
    if len(functions) != 1 and not allow_ideal:
        raise ValueError(
            "the limit description holds for hypersurfaces; pass "
            "allow_ideal=True for an exploratory multi-generator run")
    rho_list = [float(r) for r in rho_list]
    if any(r <= 0 for r in rho_list) or any(
            rho_list[i] < rho_list[i + 1] for i in range(len(rho_list) - 1)):
        raise ValueError("rho values must be positive and descending")
    exploratory = len(functions) != 1
    description = None if exploratory else strop_hypersurface(functions[0])
    grid = amoeba_grid(
        functions[0] if not exploratory else functions,
        box, resolution, opts, f_text=f_text)

    members = [p.x for p in grid.points if p.verdict == "member"]
    inconclusive = sum(
        1 for p in grid.points if p.verdict == "inconclusive")
    rows = []
    for rho in rho_list:
        if exploratory:
            rows.append(RhoReport(
                rho=rho, violations=0, coverage_misses=0,
                max_margin=float("nan"), members=len(members),
                inconclusive=inconclusive))
            continue
        violations = 0
        max_margin = 0.0
        for x in members:
            w = [rho * c for c in x]
            depth = max(
                (cone_depth(c, w) for c in description.cones()),
                default=-math.inf)
            if depth > 0:
                max_margin = max(max_margin, depth)
            if depth > epsilon:
                violations += 1
        coverage_misses = 0
        member_arr = np.array(members, dtype=float) if members else None
        for p in grid.points:
            w = [rho * c for c in p.x]
            if not strop_member(description, [Fraction(c) for c in w]):
                continue
            if removal_margin(description, w) <= epsilon:
                continue
            if member_arr is None:
                coverage_misses += 1
                continue
            dist = np.min(
                np.linalg.norm(member_arr - np.array(p.x), axis=1))
            if dist > epsilon / rho:
                coverage_misses += 1
        rows.append(RhoReport(
            rho=rho, violations=violations, coverage_misses=coverage_misses,
            max_margin=max_margin, members=len(members),
            inconclusive=inconclusive))
    return LimitReport(
        f_text=f_text or grid.f_text, epsilon=epsilon,
        description=description, grid=grid, rows=rows,
        exploratory=exploratory)
