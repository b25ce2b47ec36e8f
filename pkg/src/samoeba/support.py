"""Support sets, Laurent coefficients Q_m and the spherical Newton polytope.

The support of a regular function f is the set of exponents m for which the
coefficient Q_m(A, B) of z^m in f(A diag(z) B^{-1}) is not identically zero.
It is computed by substituting random exact rational matrix pairs: for a
fixed pair the support can only shrink (some Q_m may vanish at that pair),
so the union over independent trials stabilizes at the true support, and
the set of bad pairs has measure zero.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from typing import FrozenSet, Optional, Sequence, Tuple

from .convex import LatticePolytope
from .glpoly import RegularFunction
from .scalar import Matrix, Scalar, random_invertible


@dataclass(frozen=True)
class SupportSet:
    """Exponents with nonvanishing Q_m, with the confidence of the search.

    confidence is "exact" when two consecutive randomized trials agreed
    (or the support was complete after the first trial and confirmed),
    otherwise "randomized".
    """

    n: int
    points: FrozenSet[Tuple[int, ...]]
    confidence: str
    trials: int

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "points": sorted(list(p) for p in self.points),
            "confidence": self.confidence,
            "trials": self.trials,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "SupportSet":
        data = json.loads(text)
        return SupportSet(
            n=data["n"],
            points=frozenset(tuple(p) for p in data["points"]),
            confidence=data["confidence"],
            trials=data.get("trials", 0),
        )


#: entry range for the random matrix pairs: wide and bounded away from
#: zero, so that a fixed nonzero coefficient polynomial vanishing at a
#: sampled pair is Schwartz-Zippel-unlikely (small ranges were observed to
#: produce false negatives)
SUPPORT_SPAN = 9999
SUPPORT_DENOM = 16


def support(f: RegularFunction, trials: int = 2,
            seed: int = 2024) -> SupportSet:
    """Support of f via unions of supports at random exact matrix pairs."""
    if trials < 1:
        raise ValueError("at least one trial is required")
    rng = random.Random(seed)
    points: FrozenSet[Tuple[int, ...]] = frozenset()
    confidence = "randomized"
    previous: Optional[FrozenSet[Tuple[int, ...]]] = None
    done = 0
    for _ in range(trials):
        a = random_invertible(rng, f.n, span=SUPPORT_SPAN,
                              denom=SUPPORT_DENOM, nonzero=True)
        b = random_invertible(rng, f.n, span=SUPPORT_SPAN,
                              denom=SUPPORT_DENOM, nonzero=True)
        current = f.substitute(a, b).support()
        points = points | current
        done += 1
        if previous is not None and points == previous:
            confidence = "exact"
            break
        previous = points
    return SupportSet(f.n, points, confidence, done)


def qm(f: RegularFunction, m: Sequence[int], a: Matrix, b: Matrix):
    """Coefficient of z^m in f(a diag(z) b^{-1}); requires exact matrices."""
    return f.substitute(a, b).coefficient(m)


def snewt(f: RegularFunction, trials: int = 2,
          seed: int = 2024) -> LatticePolytope:
    """Spherical Newton polytope: convex hull of the support."""
    if f.is_zero():
        raise ValueError("the zero function has no Newton polytope")
    s = support(f, trials=trials, seed=seed)
    return LatticePolytope.hull(s.points)


# ---------------------------------------------------------------------------
# minor determinants and the highest-weight family
# ---------------------------------------------------------------------------


def minor_det(n: int, rows: Sequence[int], cols: Sequence[int]) -> RegularFunction:
    """det of the submatrix with the given 1-based row and column sets."""
    rows = sorted(set(rows))
    cols = sorted(set(cols))
    if len(rows) != len(cols):
        raise ValueError("row and column sets must have equal size")
    if not rows:
        return RegularFunction.one(n)
    if rows[0] < 1 or rows[-1] > n or cols[0] < 1 or cols[-1] > n:
        raise ValueError(f"indices out of range 1..{n}")
    k = len(rows)
    terms = {}
    for perm in itertools.permutations(range(k)):
        sign = _perm_sign(perm)
        mono = tuple(sorted(
            (rows[i], cols[perm[i]], 1) for i in range(k)))
        terms[mono] = Scalar(sign)
    return RegularFunction(n, 0, terms)


def trailing_minor(n: int, k: int) -> RegularFunction:
    """det of the trailing k x k block (rows and columns n-k+1 .. n)."""
    if not (0 <= k <= n):
        raise ValueError(f"trailing minor size {k} out of range 0..{n}")
    idx = list(range(n - k + 1, n + 1))
    return minor_det(n, idx, idx)


def v_lambda(lam: Sequence[int]) -> RegularFunction:
    """Product of trailing-minor powers realizing the weight vector of lam.

    lam must be weakly increasing integers; the k-th trailing minor enters
    with exponent lam_{n-k+1} - lam_{n-k} (lam_0 = 0), so the full det
    carries exponent lam_1, which may be negative.
    """
    lam = [int(x) for x in lam]
    n = len(lam)
    if any(lam[i] > lam[i + 1] for i in range(n - 1)):
        raise ValueError(f"{tuple(lam)} is not weakly increasing")
    out = RegularFunction.det(n, lam[0])  # k = n factor as a det power
    for k in range(1, n):
        e = lam[n - k] - lam[n - k - 1]
        if e:
            out = out * trailing_minor(n, k) ** e
    return out


def _perm_sign(perm) -> int:
    sign = 1
    p = list(perm)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign
