"""Numerical side: singular-value logarithm, Haar sampling, amoeba
membership by minimization over U(n) x U(n), Monte-Carlo Ronkin values and
complement-component orders.

Membership at a point x asks whether min over unitary pairs (U, V) of
|f(U diag(e^x) V*)| is zero.  The objective is smooth on a compact
manifold, so multistart projected gradient descent with a matrix
exponential retraction and backtracking line search is used; thresholds
are normalized by the median of |f| over Haar samples at the same x, since
|f| carries no intrinsic scale.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .glpoly import RegularFunction, SingularMatrixError


# ---------------------------------------------------------------------------
# sLog and Haar sampling
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SLogPoint:
    """A point of R^n / S_n: log singular values stored ascending."""

    values: Tuple[float, ...]

    def distance(self, other: "SLogPoint") -> float:
        """max-norm distance between the sorted representatives; this equals
        the min over permutations of the max-norm difference."""
        return max(
            abs(a - b) for a, b in zip(self.values, other.values))

    def __iter__(self):
        return iter(self.values)


def slog(a, floor: float = 1e-128) -> SLogPoint:
    """Log singular values, ascending.  Rejects numerically singular input."""
    arr = np.asarray(a, dtype=complex)
    sv = np.linalg.svd(arr, compute_uv=False)
    if sv[-1] <= floor:
        raise SingularMatrixError(
            f"smallest singular value {sv[-1]:.3e} below floor {floor:.3e}")
    return SLogPoint(tuple(sorted(float(x) for x in np.log(sv))))


def haar_unitary(n: int, seed) -> np.ndarray:
    """Haar-distributed unitary matrix (QR of a complex Gaussian with the
    R-diagonal phase correction).  `seed` is an int or a numpy Generator."""
    rng = np.random.default_rng(seed) if not isinstance(
        seed, np.random.Generator) else seed
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def haar_unitaries(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Stack of `count` independent Haar unitaries, shape (count, n, n)."""
    z = rng.standard_normal((count, n, n)) + 1j * rng.standard_normal(
        (count, n, n))
    q, r = np.linalg.qr(z)
    d = np.einsum("...ii->...i", r)
    return q * (d / np.abs(d))[:, None, :]


# ---------------------------------------------------------------------------
# compiled evaluation of a regular function and its entry gradient
# ---------------------------------------------------------------------------


class CompiledFunction:
    """Flat form of a RegularFunction for fast numeric evaluation."""

    def __init__(self, f: RegularFunction):
        self.n = f.n
        self.det_power = f.det_power
        self.terms = [
            (complex(c.to_complex()),
             tuple(((i - 1) * f.n + (j - 1), e) for i, j, e in mono))
            for mono, c in f.terms.items()
        ]

    def value(self, a: np.ndarray) -> complex:
        flat = a.reshape(-1)
        total = 0j
        for coeff, entries in self.terms:
            term = coeff
            for idx, e in entries:
                term *= flat[idx] ** e
            total += term
        if self.det_power:
            total *= np.linalg.det(a) ** self.det_power
        return total

    def value_batch(self, a: np.ndarray) -> np.ndarray:
        """Values over a stack of matrices, shape (m, n, n) -> (m,)."""
        flat = a.reshape(a.shape[0], -1)
        total = np.zeros(a.shape[0], dtype=complex)
        for coeff, entries in self.terms:
            term = np.full(a.shape[0], coeff, dtype=complex)
            for idx, e in entries:
                term *= flat[:, idx] ** e
            total += term
        if self.det_power:
            total *= np.linalg.det(a) ** self.det_power
        return total

    def value_and_grad(self, a: np.ndarray) -> Tuple[complex, np.ndarray]:
        """Value and the matrix G with G_ij = d f / d a_ij at a."""
        n = self.n
        flat = a.reshape(-1)
        poly = 0j
        grad = np.zeros(n * n, dtype=complex)
        for coeff, entries in self.terms:
            powers = [flat[idx] ** e for idx, e in entries]
            term = coeff
            for p in powers:
                term *= p
            poly += term
            for k, (idx, e) in enumerate(entries):
                partial = coeff * e * flat[idx] ** (e - 1)
                for kk, p in enumerate(powers):
                    if kk != k:
                        partial *= p
                grad[idx] += partial
        grad = grad.reshape(n, n)
        if not self.det_power:
            return poly, grad
        det = np.linalg.det(a)
        det_n = det ** self.det_power
        inv_t = np.linalg.inv(a).T
        value = det_n * poly
        grad = det_n * (grad + self.det_power * poly * inv_t)
        return value, grad


# ---------------------------------------------------------------------------
# membership
# ---------------------------------------------------------------------------


@dataclass
class MembershipOptions:
    seed: int = 0
    restarts: int = 8
    max_iters: int = 400
    member_rtol: float = 1e-8
    nonmember_rtol: float = 1e-4
    scale_samples: int = 64
    grad_tol: float = 1e-14


@dataclass
class MembershipVerdict:
    x: Tuple[float, ...]
    verdict: str                 # "member" | "non-member" | "inconclusive"
    min_abs: float
    argmin: Tuple[np.ndarray, np.ndarray]
    threshold_used: Tuple[float, float]   # (member, non-member) absolute
    restarts: int
    scale: float

    def is_member(self) -> bool:
        return self.verdict == "member"


def _compile_all(f) -> Tuple[int, List[CompiledFunction]]:
    """Compile a single function or a list (treated as a generating system
    whose joint magnitude sqrt(sum |f_k|^2) is minimized)."""
    functions = [f] if isinstance(f, RegularFunction) else list(f)
    if not functions:
        raise ValueError("no functions given")
    n = functions[0].n
    if any(g.n != n for g in functions):
        raise ValueError("all functions must share the same dimension")
    return n, [CompiledFunction(g) for g in functions]


def _system_abs_batch(compiled: List[CompiledFunction],
                      mats: np.ndarray) -> np.ndarray:
    total = np.zeros(mats.shape[0], dtype=float)
    for c in compiled:
        total += np.abs(c.value_batch(mats)) ** 2
    return np.sqrt(total)


def membership(f, x: Sequence[float],
               opts: Optional[MembershipOptions] = None,
               warm_start: Optional[Tuple[np.ndarray, np.ndarray]] = None
               ) -> MembershipVerdict:
    """Decide whether x lies in the matrix amoeba of f.

    Multistart minimization of |f(U diag(e^x) V*)|^2 over U(n) x U(n);
    member when the minimum falls below member_rtol * scale, non-member
    when every restart stays above nonmember_rtol * scale.  A list of
    functions is minimized jointly (membership sampling for the ideal they
    generate).
    """
    opts = opts or MembershipOptions()
    x = tuple(float(c) for c in x)
    if any(not math.isfinite(c) for c in x):
        raise ValueError("membership point must be finite")
    n, compiled = _compile_all(f)
    d = np.diag(np.exp(x)).astype(complex)
    rng = np.random.default_rng(opts.seed)

    samples = haar_unitaries(n, opts.scale_samples, rng)
    samples_v = haar_unitaries(n, opts.scale_samples, rng)
    mats = samples @ d @ np.conj(np.transpose(samples_v, (0, 2, 1)))
    sample_abs = _system_abs_batch(compiled, mats)
    scale = float(np.median(sample_abs))
    if scale == 0.0:
        scale = float(np.mean(sample_abs))
    member_abs = opts.member_rtol * scale
    nonmember_abs = opts.nonmember_rtol * scale

    best = math.inf
    best_uv = None
    idx = np.argmin(sample_abs)
    starts: List[Tuple[np.ndarray, np.ndarray]] = []
    if warm_start is not None:
        starts.append(warm_start)
    starts.append((samples[idx], samples_v[idx]))
    while len(starts) < opts.restarts:
        starts.append((haar_unitary(n, rng), haar_unitary(n, rng)))
    restarts_run = 0
    for u0, v0 in starts[:max(opts.restarts, len(starts))]:
        u, v, val = _minimize_abs(compiled, d, u0, v0, member_abs, opts)
        restarts_run += 1
        if val < best:
            best = val
            best_uv = (u, v)
        if best <= member_abs:
            break
    if best <= member_abs:
        verdict = "member"
    elif best >= nonmember_abs:
        verdict = "non-member"
    else:
        verdict = "inconclusive"
    return MembershipVerdict(
        x=x, verdict=verdict, min_abs=best, argmin=best_uv,
        threshold_used=(member_abs, nonmember_abs),
        restarts=restarts_run, scale=scale)


def _expmi_h(h: np.ndarray) -> np.ndarray:
    """exp(iH) for hermitian H via eigendecomposition."""
    w, q = np.linalg.eigh(h)
    return (q * np.exp(1j * w)) @ np.conj(q.T)


def _system_value_and_grads(compiled: List[CompiledFunction],
                            a: np.ndarray):
    """h = sum |f_k(a)|^2 together with its U/V tangent gradients."""
    h = 0.0
    wu = np.zeros_like(a)
    wv = np.zeros_like(a)
    for c in compiled:
        fval, g = c.value_and_grad(a)
        h += abs(fval) ** 2
        wu += 2j * np.conj(fval) * (a @ g.T)
        wv += -2j * np.conj(fval) * (g.T @ a)
    wu = (wu + np.conj(wu.T)) / 2
    wv = (wv + np.conj(wv.T)) / 2
    return h, wu, wv


def _minimize_abs(compiled: List[CompiledFunction], d: np.ndarray,
                  u: np.ndarray, v: np.ndarray, target: float,
                  opts: MembershipOptions) -> Tuple[np.ndarray, np.ndarray, float]:
    """Projected gradient descent on h = sum |f_k(U D V*)|^2 over the two
    unitary factors: tangent steps exp(-i eta * grad) with Barzilai-Borwein
    trial step sizes and Armijo backtracking.

    The Riemannian gradients are the hermitian parts of
    sum_k 2i conj(f_k) A G_k^T (for U) and -2i conj(f_k) G_k^T A (for V).
    """
    a = u @ d @ np.conj(v.T)
    h, wu, wv = _system_value_and_grads(compiled, a)
    eta = 1.0
    prev = None  # (wu, wv, eta actually taken)
    for _ in range(opts.max_iters):
        if math.sqrt(h) <= target:
            break
        gnorm2 = float(np.sum(np.abs(wu) ** 2) + np.sum(np.abs(wv) ** 2))
        if gnorm2 <= opts.grad_tol * max(h, 1e-300):
            break
        eta_cap = 1e6 / math.sqrt(gnorm2)
        eta_try = min(eta * 2.0, eta_cap)
        if prev is not None:
            pu, pv, peta = prev
            yu = wu - pu
            yv = wv - pv
            sy = -peta * float(
                np.sum(np.real(pu * np.conj(yu)))
                + np.sum(np.real(pv * np.conj(yv))))
            yy = float(np.sum(np.abs(yu) ** 2) + np.sum(np.abs(yv) ** 2))
            if sy > 0 and yy > 0:
                eta_try = min(max(sy / yy, 1e-12), eta_cap)
        improved = False
        eta = eta_try
        while eta * math.sqrt(gnorm2) > 1e-18:
            u_try = _expmi_h(-eta * wu) @ u
            v_try = _expmi_h(-eta * wv) @ v
            a_try = u_try @ d @ np.conj(v_try.T)
            h_try, wu_try, wv_try = _system_value_and_grads(compiled, a_try)
            if h_try <= h - 1e-4 * eta * gnorm2:
                prev = (wu, wv, eta)
                u, v, a = u_try, v_try, a_try
                h, wu, wv = h_try, wu_try, wv_try
                improved = True
                break
            eta *= 0.5
        if not improved:
            break
    return u, v, math.sqrt(h)


# ---------------------------------------------------------------------------
# membership over a grid
# ---------------------------------------------------------------------------


@dataclass
class GridPoint:
    x: Tuple[float, ...]
    verdict: str
    min_abs: float
    restarts: int


@dataclass
class GridResult:
    f_text: str
    n: int
    box: Tuple[float, float]
    resolution: int
    points: List[GridPoint] = field(default_factory=list)

    def members(self) -> List[GridPoint]:
        return [p for p in self.points if p.verdict == "member"]

    def counts(self) -> dict:
        out = {"member": 0, "non-member": 0, "inconclusive": 0}
        for p in self.points:
            out[p.verdict] += 1
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            [f"x{i+1}" for i in range(self.n)]
            + ["verdict", "min_abs", "restarts"])
        for p in self.points:
            writer.writerow(
                [f"{c:.12g}" for c in p.x]
                + [p.verdict, f"{p.min_abs:.12g}", p.restarts])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "f": self.f_text,
            "n": self.n,
            "box": list(self.box),
            "resolution": self.resolution,
            "counts": self.counts(),
            "points": [
                {
                    "x": [float(c) for c in p.x],
                    "verdict": p.verdict,
                    "min_abs": p.min_abs,
                    "restarts": p.restarts,
                }
                for p in self.points
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @staticmethod
    def from_dict(data: dict) -> "GridResult":
        return GridResult(
            f_text=data["f"],
            n=data["n"],
            box=tuple(data["box"]),
            resolution=data["resolution"],
            points=[
                GridPoint(
                    x=tuple(p["x"]), verdict=p["verdict"],
                    min_abs=p["min_abs"], restarts=p["restarts"])
                for p in data["points"]
            ],
        )


def fundamental_domain_grid(box: Tuple[float, float], resolution: int,
                            n: int) -> List[Tuple[float, ...]]:
    """Grid points of [lo, hi]^n with ascending coordinates (x1 <= ... <= xn),
    the fundamental domain of the S_n action."""
    lo, hi = box
    if resolution < 2:
        raise ValueError("resolution must be at least 2 per axis")
    axis = [lo + (hi - lo) * k / (resolution - 1) for k in range(resolution)]
    out = []

    def rec(prefix):
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        start = prefix[-1] if prefix else None
        for val in axis:
            if start is None or val >= start:
                rec(prefix + [val])

    rec([])
    return out


def amoeba_grid(f, box: Tuple[float, float],
                resolution: int, opts: Optional[MembershipOptions] = None,
                f_text: str = "") -> GridResult:
    """Membership verdict on the fundamental-domain grid over the box.

    Consecutive points warm start from the previous argmin, which speeds up
    convergence along the sweep.
    """
    opts = opts or MembershipOptions()
    n = f.n if isinstance(f, RegularFunction) else f[0].n
    result = GridResult(f_text or repr(f), n, tuple(box), resolution)
    warm = None
    for x in fundamental_domain_grid(box, resolution, n):
        verdict = membership(f, x, opts, warm_start=warm)
        if verdict.argmin is not None:
            warm = verdict.argmin
        result.points.append(GridPoint(
            x=verdict.x, verdict=verdict.verdict,
            min_abs=verdict.min_abs, restarts=verdict.restarts))
    return result


# ---------------------------------------------------------------------------
# Ronkin function by Monte Carlo
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RonkinEstimate:
    x: Tuple[float, ...]
    mean: float
    stderr: float
    samples: int
    zeros_hit: int = 0

    def is_minus_infinity(self) -> bool:
        return self.mean == -math.inf


def ronkin_mc(f: RegularFunction, x: Sequence[float], samples: int,
              seed: int, chunk: int = 20000) -> RonkinEstimate:
    """Monte-Carlo average of ln|f(U diag(e^x) V*)| over Haar pairs.

    Samples that hit an exact zero of f are redrawn (and counted); the
    standard error is the sample deviation over sqrt(samples).  When the
    integrand keeps hitting zeros (f vanishing on a positive-measure part
    of the orbit), the estimate is reported as -inf rather than clamped.
    """
    if samples < 100:
        raise ValueError("at least 100 samples are required")
    x = tuple(float(c) for c in x)
    n = f.n
    compiled = CompiledFunction(f)
    d = np.diag(np.exp(x)).astype(complex)
    rng = np.random.default_rng(seed)
    values = np.empty(samples, dtype=float)
    filled = 0
    zeros_hit = 0
    while filled < samples:
        if zeros_hit > 10 * samples:
            return RonkinEstimate(
                x=x, mean=-math.inf, stderr=math.nan, samples=filled,
                zeros_hit=zeros_hit)
        m = min(chunk, samples - filled)
        u = haar_unitaries(n, m, rng)
        v = haar_unitaries(n, m, rng)
        mats = u @ d @ np.conj(np.transpose(v, (0, 2, 1)))
        absf = np.abs(compiled.value_batch(mats))
        good = absf > 0.0
        zeros_hit += int(m - np.count_nonzero(good))
        kept = np.log(absf[good])
        values[filled:filled + kept.size] = kept
        filled += kept.size
    mean = float(np.mean(values))
    stderr = float(np.std(values, ddof=1) / math.sqrt(samples))
    return RonkinEstimate(x=x, mean=mean, stderr=stderr, samples=samples,
                          zeros_hit=zeros_hit)


# ---------------------------------------------------------------------------
# order of a complement component
# ---------------------------------------------------------------------------


class OrderEstimationError(ArithmeticError):
    pass


class OrderOutsidePolytopeError(ArithmeticError):
    pass


@dataclass(frozen=True)
class OrderResult:
    vector: Tuple[int, ...]
    gradient: Tuple[float, ...]
    residual: float
    stderrs: Tuple[float, ...]


def order_of_component(f: RegularFunction, x: Sequence[float],
                       step: float = 0.25, samples: int = 20000,
                       seed: int = 0,
                       residual_tol: float = 0.2,
                       check_polytope: bool = True) -> OrderResult:
    """Integer gradient of the Ronkin function at a complement point.

    Central finite differences of the Monte-Carlo Ronkin value with common
    random numbers (the same Haar pairs at x + step e_i and x - step e_i).
    The caller is responsible for x being a non-member point.  The rounded
    gradient must land in sNewt(f); residuals above residual_tol raise.
    """
    x = tuple(float(c) for c in x)
    n = f.n
    compiled = CompiledFunction(f)
    rng = np.random.default_rng(seed)
    u = haar_unitaries(n, samples, rng)
    v = haar_unitaries(n, samples, rng)
    vh = np.conj(np.transpose(v, (0, 2, 1)))

    def mean_log(point):
        d = np.diag(np.exp(point)).astype(complex)
        vals = np.abs(compiled.value_batch(u @ d @ vh))
        vals = np.where(vals > 0, vals, np.nan)
        logs = np.log(vals)
        return (float(np.nanmean(logs)),
                float(np.nanstd(logs, ddof=1) / math.sqrt(samples)))

    gradient = []
    errs = []
    for i in range(n):
        xp = list(x)
        xm = list(x)
        xp[i] += step
        xm[i] -= step
        mp, ep = mean_log(xp)
        mm, em = mean_log(xm)
        gradient.append((mp - mm) / (2 * step))
        errs.append(math.hypot(ep, em) / (2 * step))
    rounded = tuple(int(round(g)) for g in gradient)
    residual = max(abs(g - r) for g, r in zip(gradient, rounded))
    if residual > residual_tol:
        raise OrderEstimationError(
            f"gradient {gradient} is not within {residual_tol} of an "
            f"integer vector (residual {residual:.3f})")
    if check_polytope:
        from .support import snewt

        poly = snewt(f)
        if not poly.contains(rounded):
            raise OrderOutsidePolytopeError(
                f"rounded order {rounded} lies outside the Newton polytope")
    return OrderResult(
        vector=rounded, gradient=tuple(gradient), residual=residual,
        stderrs=tuple(errs))
