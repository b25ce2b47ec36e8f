"""Truncated Puiseux series, Smith normal form valuations, tropical data.

Series are finitely many exact Gaussian-rational coefficients at rational
exponents, plus a truncation order: exponents strictly below the order are
known exactly, everything at or above it is unknown.  trunc = None means
the series is exact (a Puiseux polynomial).

The Smith-normal-form routine is division free: rows are rescaled by the
unit part of the pivot instead of dividing by it, so exact inputs stay
exact and every multiplier lies in the valuation ring.  The certification
guard is the truncation criterion: a computed valuation vector is certified
when the working truncation order strictly exceeds every computed factor,
since matrices congruent modulo t^q share invariant factors whenever q
dominates them all.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .glpoly import LaurentPoly, RegularFunction
from .scalar import Scalar

#: default working truncation (in exponent units) for unit inversion
DEFAULT_TRUNC_ORDER = Fraction(16)


class TruncationError(ArithmeticError):
    """Raised when a result is not determined by the known coefficients."""


class NotAUnitError(ArithmeticError):
    pass


class SingularSeriesMatrixError(ArithmeticError):
    pass


class PuiseuxSeries:
    __slots__ = ("terms", "trunc")

    def __init__(self, terms: Optional[Dict[Fraction, Scalar]] = None,
                 trunc: Optional[Fraction] = None):
        trunc = Fraction(trunc) if trunc is not None else None
        clean: Dict[Fraction, Scalar] = {}
        for e, c in (terms or {}).items():
            e = Fraction(e)
            c = Scalar.of(c)
            if c.is_zero():
                continue
            if trunc is not None and e >= trunc:
                continue
            clean[e] = c
        self.terms = clean
        self.trunc = trunc

    # -- constructors -----------------------------------------------------

    @staticmethod
    def zero(trunc: Optional[Fraction] = None) -> "PuiseuxSeries":
        return PuiseuxSeries({}, trunc)

    @staticmethod
    def const(value, trunc: Optional[Fraction] = None) -> "PuiseuxSeries":
        return PuiseuxSeries({Fraction(0): Scalar.of(value)}, trunc)

    @staticmethod
    def t_power(exponent, coeff=1) -> "PuiseuxSeries":
        return PuiseuxSeries({Fraction(exponent): Scalar.of(coeff)})

    # -- structure ----------------------------------------------------------

    def is_exact(self) -> bool:
        return self.trunc is None

    def is_zero(self) -> bool:
        """Provably zero: no terms and no unknown tail."""
        return not self.terms and self.trunc is None

    def known_zero_up_to_trunc(self) -> bool:
        return not self.terms

    def ramification(self) -> int:
        denoms = [e.denominator for e in self.terms]
        if self.trunc is not None:
            denoms.append(self.trunc.denominator)
        return math.lcm(*denoms) if denoms else 1

    def val(self) -> Fraction:
        """Least exponent.  Raises TruncationError when the series has no
        known terms but might have hidden ones past the truncation order."""
        if self.terms:
            return min(self.terms)
        if self.trunc is None:
            raise ZeroDivisionError("the zero series has no valuation")
        raise TruncationError(
            f"series is zero up to truncation order {self.trunc}; "
            "its valuation is undetermined")

    def val_or_infinity(self):
        if self.terms:
            return min(self.terms)
        if self.trunc is None:
            return math.inf
        raise TruncationError(
            f"series is zero up to truncation order {self.trunc}; "
            "its valuation is undetermined")

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other) -> "PuiseuxSeries":
        other = _coerce(other)
        trunc = _min_trunc(self.trunc, other.trunc)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, Scalar(0)) + c
            if s.is_zero():
                terms.pop(e, None)
            else:
                terms[e] = s
        return PuiseuxSeries(terms, trunc)

    __radd__ = __add__

    def __neg__(self) -> "PuiseuxSeries":
        return PuiseuxSeries({e: -c for e, c in self.terms.items()}, self.trunc)

    def __sub__(self, other) -> "PuiseuxSeries":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "PuiseuxSeries":
        return _coerce(other) - self

    def __mul__(self, other) -> "PuiseuxSeries":
        other = _coerce(other)
        # truncation propagates by the valuation of the other factor: the
        # first unknown exponent of f*g is min(trunc_f + val_g, trunc_g + val_f)
        trunc = _min_trunc(
            _shift_trunc(self.trunc, _lower_val(other)),
            _shift_trunc(other.trunc, _lower_val(self)),
        )
        terms: Dict[Fraction, Scalar] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                if trunc is not None and e >= trunc:
                    continue
                s = terms.get(e, Scalar(0)) + c1 * c2
                if s.is_zero():
                    terms.pop(e, None)
                else:
                    terms[e] = s
        return PuiseuxSeries(terms, trunc)

    __rmul__ = __mul__

    def scale(self, value) -> "PuiseuxSeries":
        value = Scalar.of(value)
        if value.is_zero():
            return PuiseuxSeries({}, self.trunc)
        return PuiseuxSeries(
            {e: c * value for e, c in self.terms.items()}, self.trunc)

    def shift(self, exponent) -> "PuiseuxSeries":
        """Multiply by t^exponent."""
        q = Fraction(exponent)
        return PuiseuxSeries(
            {e + q: c for e, c in self.terms.items()},
            None if self.trunc is None else self.trunc + q)

    def invert_unit(self, order: Optional[Fraction] = None) -> "PuiseuxSeries":
        """Inverse of a valuation-zero series, by geometric expansion.

        The result is truncated at `order` (strict), defaulting to the
        series' own truncation or DEFAULT_TRUNC_ORDER for exact input.
        """
        if not self.terms or min(self.terms) != 0:
            raise NotAUnitError("invert_unit requires valuation exactly 0")
        if len(self.terms) == 1 and self.is_exact():
            return PuiseuxSeries.const(Scalar(1) / self.terms[Fraction(0)])
        if order is None:
            order = self.trunc if self.trunc is not None else DEFAULT_TRUNC_ORDER
        order = Fraction(order)
        if self.trunc is not None and order > self.trunc:
            raise TruncationError(
                f"cannot invert to order {order}: input known only below "
                f"{self.trunc}")
        c0 = self.terms[Fraction(0)]
        rest = PuiseuxSeries(
            {e: c for e, c in self.terms.items() if e != 0}, order)
        rest = rest.scale(Scalar(1) / c0)
        # 1/(c0 (1 + r)) = c0^{-1} sum (-r)^k; r has positive valuation
        out = PuiseuxSeries.const(1, order)
        power = PuiseuxSeries.const(1, order)
        if rest.terms:
            step = min(rest.terms)
            k = 1
            while step * k < order:
                power = power * (-rest)
                out = out + power
                if not power.terms:
                    break
                k += 1
        return out.scale(Scalar(1) / c0)

    def invert(self, order: Optional[Fraction] = None) -> "PuiseuxSeries":
        """Inverse of any nonzero series: factor out t^val, invert the unit."""
        v = self.val()
        return self.shift(-v).invert_unit(order).shift(-v)

    def truncate(self, q) -> "PuiseuxSeries":
        """Inclusive truncation: keep coefficients with exponent <= q.

        The result is marked unknown past q (the next representable
        exponent in the series' own group); truncating beyond what is known
        raises.
        """
        q = Fraction(q)
        if self.trunc is not None and q >= self.trunc:
            raise TruncationError(
                f"cannot truncate at {q}: series known only below {self.trunc}")
        step = Fraction(1, math.lcm(self.ramification(), q.denominator))
        new_trunc = q + step
        if self.trunc is not None:
            new_trunc = min(new_trunc, self.trunc)
        return PuiseuxSeries(
            {e: c for e, c in self.terms.items() if e <= q}, new_trunc)

    # -- numerics -------------------------------------------------------------

    def eval(self, s: float) -> complex:
        if s <= 0:
            raise ValueError("series are evaluated at real t in (0, 1)")
        total = 0j
        for e, c in self.terms.items():
            total += c.to_complex() * float(s) ** float(e)
        return total

    # -- misc -------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, PuiseuxSeries):
            other = _coerce(other)
        return self.terms == other.terms and self.trunc == other.trunc

    def __hash__(self):
        return hash((frozenset(self.terms.items()), self.trunc))

    def __repr__(self) -> str:
        if not self.terms:
            body = "0"
        else:
            parts = []
            for e in sorted(self.terms):
                c = self.terms[e]
                if e == 0:
                    parts.append(f"{c}")
                elif e == 1:
                    parts.append(f"{c}*t")
                else:
                    parts.append(f"{c}*t^({e})")
            body = " + ".join(parts)
        if self.trunc is not None:
            body += f" + O(t^{self.trunc})"
        return body


def _coerce(x) -> PuiseuxSeries:
    if isinstance(x, PuiseuxSeries):
        return x
    return PuiseuxSeries.const(Scalar.of(x))


def _min_trunc(a: Optional[Fraction], b: Optional[Fraction]) -> Optional[Fraction]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _shift_trunc(trunc: Optional[Fraction], lower) -> Optional[Fraction]:
    if trunc is None:
        return None
    if lower is math.inf:
        return None  # multiplying by provable zero: no unknown tail
    return trunc + lower


def _lower_val(s: PuiseuxSeries):
    """A lower bound for the valuation (the truncation order if termless)."""
    if s.terms:
        return min(s.terms)
    return math.inf if s.trunc is None else s.trunc


# ---------------------------------------------------------------------------
# matrices of series
# ---------------------------------------------------------------------------


class PuiseuxMatrix:
    __slots__ = ("n", "entries")

    def __init__(self, entries: Sequence[Sequence[PuiseuxSeries]]):
        rows = tuple(tuple(_coerce(x) for x in row) for row in entries)
        n = len(rows)
        if any(len(row) != n for row in rows):
            raise ValueError("matrix must be square")
        self.n = n
        self.entries = rows

    def ramification(self) -> int:
        return math.lcm(*(x.ramification()
                          for row in self.entries for x in row))

    def trunc_order(self) -> Optional[Fraction]:
        out = None
        for row in self.entries:
            for x in row:
                out = _min_trunc(out, x.trunc)
        return out

    def truncate(self, q) -> "PuiseuxMatrix":
        return PuiseuxMatrix(
            [[x.truncate(q) for x in row] for row in self.entries])

    def det(self) -> PuiseuxSeries:
        """Leibniz expansion; division free, fine for the small n used here."""
        import itertools

        out = PuiseuxSeries.zero(None)
        for perm in itertools.permutations(range(self.n)):
            sign = _perm_sign(perm)
            term = PuiseuxSeries.const(sign)
            for i in range(self.n):
                term = term * self.entries[i][perm[i]]
            out = out + term
        return out

    def inverse(self, order: Optional[Fraction] = None) -> "PuiseuxMatrix":
        """Adjugate over det; det must have a determinable valuation."""
        import itertools

        d = self.det()
        if d.known_zero_up_to_trunc():
            if d.is_exact():
                raise SingularSeriesMatrixError("matrix of series is singular")
            raise TruncationError("determinant undetermined at this truncation")
        dinv = d.invert(order)
        n = self.n
        if n == 1:
            return PuiseuxMatrix([[dinv]])
        adj = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                minor_rows = [r for r in range(n) if r != i]
                minor_cols = [c for c in range(n) if c != j]
                m = PuiseuxSeries.zero(None)
                for perm in itertools.permutations(range(n - 1)):
                    sign = _perm_sign(perm)
                    term = PuiseuxSeries.const(sign)
                    for a in range(n - 1):
                        term = term * self.entries[minor_rows[a]][minor_cols[perm[a]]]
                    m = m + term
                sign = 1 if (i + j) % 2 == 0 else -1
                adj[j][i] = m.scale(sign) * dinv
        return PuiseuxMatrix(adj)

    def eval(self, s: float) -> List[List[complex]]:
        return [[x.eval(s) for x in row] for row in self.entries]

    def __repr__(self):
        return "PuiseuxMatrix(" + repr([list(r) for r in self.entries]) + ")"


def _perm_sign(perm) -> int:
    sign = 1
    p = list(perm)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


# ---------------------------------------------------------------------------
# Smith normal form valuations
# ---------------------------------------------------------------------------


class SvalResult:
    """Invariant-factor valuations (ascending) and the certification flag."""

    __slots__ = ("factors", "certified")

    def __init__(self, factors: Sequence[Fraction], certified: bool):
        self.factors = tuple(sorted(Fraction(f) for f in factors))
        self.certified = certified

    def __eq__(self, other):
        if isinstance(other, SvalResult):
            return (self.factors == other.factors
                    and self.certified == other.certified)
        return tuple(self.factors) == tuple(Fraction(f) for f in other)

    def __repr__(self):
        tag = "certified" if self.certified else "UNCERTIFIED"
        return f"SvalResult({[str(f) for f in self.factors]}, {tag})"

    def to_dict(self) -> dict:
        return {
            "factors": [[f.numerator, f.denominator] for f in self.factors],
            "certified": self.certified,
        }

    @staticmethod
    def from_dict(data: dict) -> "SvalResult":
        return SvalResult(
            [Fraction(num, den) for num, den in data["factors"]],
            data["certified"])


def smith_sval(matrix: PuiseuxMatrix) -> SvalResult:
    """Valuations of the Smith-normal-form diagonal over the valuation ring.

    Pivots on a minimal-valuation entry (ties broken by position), clears
    its row and column with multipliers in the valuation ring, recurses on
    the rest.  Row rescaling by the pivot's unit part keeps the arithmetic
    division free.
    """
    n = matrix.n
    work = [list(row) for row in matrix.entries]
    factors: List[Fraction] = []
    for step in range(n):
        pivot_pos = _find_pivot(work, step, n)
        if pivot_pos is None:
            raise SingularSeriesMatrixError(
                "matrix is singular over the Puiseux field")
        pi, pj = pivot_pos
        if pi != step:
            work[step], work[pi] = work[pi], work[step]
        if pj != step:
            for row in work:
                row[step], row[pj] = row[pj], row[step]
        pivot = work[step][step]
        v = pivot.val()
        unit = pivot.shift(-v)  # valuation-0 unit part
        for i in range(step + 1, n):
            a = work[i][step]
            if a.known_zero_up_to_trunc():
                continue
            mult = a.shift(-v)  # in the valuation ring: val(a) >= v
            for c in range(step, n):
                work[i][c] = unit * work[i][c] - mult * work[step][c]
        for j in range(step + 1, n):
            b = work[step][j]
            if b.known_zero_up_to_trunc():
                continue
            mult = b.shift(-v)
            for r in range(step, n):
                work[r][j] = unit * work[r][j] - mult * work[r][step]
        factors.append(v)
    max_factor = max(factors)
    certified = True
    for k in range(n):
        t = work[k][k].trunc
        if t is not None and t <= max_factor:
            certified = False
    return SvalResult(factors, certified)


def _find_pivot(work, step: int, n: int):
    """Minimal-valuation entry of the trailing block, ties by position.

    Raises TruncationError when an undetermined entry could undercut the
    chosen pivot's valuation.
    """
    best = None
    best_val = None
    unknown_truncs = []
    for i in range(step, n):
        for j in range(step, n):
            entry = work[i][j]
            if entry.known_zero_up_to_trunc():
                if not entry.is_exact():
                    unknown_truncs.append(entry.trunc)
                continue
            v = entry.val()
            if best_val is None or v < best_val:
                best_val = v
                best = (i, j)
    if best is None:
        if unknown_truncs:
            raise TruncationError(
                "all remaining entries vanish up to truncation; "
                "increase the truncation order")
        return None
    for t in unknown_truncs:
        if t <= best_val:
            raise TruncationError(
                f"an entry undetermined past t^{t} could undercut the "
                f"pivot valuation {best_val}")
    return best


# ---------------------------------------------------------------------------
# tropicalized substitution
# ---------------------------------------------------------------------------


def substitute_series(f: RegularFunction, p: PuiseuxMatrix,
                      q: PuiseuxMatrix) -> LaurentPoly:
    """The Laurent polynomial z -> f(p(t) diag(z) q(t)^{-1}) with
    Puiseux-series coefficients."""
    if p.n != f.n or q.n != f.n:
        raise ValueError("matrix dimension does not match the function")
    n = f.n
    qinv = q.inverse()
    forms = [
        [
            LaurentPoly(n, {
                tuple(1 if t == k else 0 for t in range(n)):
                    p.entries[i][k] * qinv.entries[k][j]
                for k in range(n)
            })
            for j in range(n)
        ]
        for i in range(n)
    ]
    out = LaurentPoly.zero(n)
    for mono, coeff in f.terms.items():
        term = LaurentPoly.const(n, PuiseuxSeries.const(coeff))
        for i, j, e in mono:
            for _ in range(e):
                term = term * forms[i - 1][j - 1]
        out = out + term
    if f.det_power:
        dets = p.det() * qinv.det()
        k = f.det_power
        factor = dets if k > 0 else dets.invert()
        power = PuiseuxSeries.const(1)
        for _ in range(abs(k)):
            power = power * factor
        out = LaurentPoly(n, {
            tuple(m[t] + k for t in range(n)): c * power
            for m, c in out.terms.items()
        })
    return out


def trop_poly(f: RegularFunction, p: PuiseuxMatrix,
              q: PuiseuxMatrix) -> Dict[Tuple[int, ...], Fraction]:
    """Valuation of each Laurent coefficient of f(p diag(z) q^{-1}).

    Exponents whose coefficient is provably zero map to +inf; coefficients
    that vanish only up to truncation raise TruncationError.
    """
    from .support import support

    sub = substitute_series(f, p, q)
    out: Dict[Tuple[int, ...], Fraction] = {}
    for m in support(f).points:
        coeff = sub.terms.get(tuple(m))
        if coeff is None:
            coeff = PuiseuxSeries.zero(None)
        out[tuple(m)] = coeff.val_or_infinity()
    return out


def trop_hypersurface_member(tp: Dict[Tuple[int, ...], Fraction], y) -> bool:
    """Whether the min of val_m + m.y over the support is attained twice."""
    y = [Fraction(c) for c in y]
    finite = {m: v for m, v in tp.items() if v != math.inf}
    if not finite:
        raise ValueError("the tropical polynomial is infinite everywhere")
    values = []
    for m, v in finite.items():
        values.append(v + sum(Fraction(c) * yc for c, yc in zip(m, y)))
    lo = min(values)
    return sum(1 for v in values if v == lo) >= 2


# ---------------------------------------------------------------------------
# numeric limit of sLog along a series
# ---------------------------------------------------------------------------


def eval_series(matrix: PuiseuxMatrix, s: float) -> List[List[complex]]:
    """Numeric evaluation of the (truncated) matrix at t = s in (0, 1)."""
    if not 0 < s < 1:
        raise ValueError("evaluation point must lie in (0, 1)")
    return matrix.eval(s)


def slog_limit_report(matrix: PuiseuxMatrix,
                      s_values: Sequence[float]) -> dict:
    """Table of sLog(A(s))/ln(s) against the Smith valuation of A(t).

    The ratios converge to the invariant-factor valuations as s -> 0+.
    The evaluation is floating point: A(s) has condition number of order
    s^-(spread of factors), so s must not be taken so small that this
    exceeds double precision.
    """
    import numpy as np

    from .numerics import slog

    sval = smith_sval(matrix)
    rows = []
    for s in s_values:
        a = np.array(eval_series(matrix, s), dtype=complex)
        ratios = sorted(v / math.log(s) for v in slog(a).values)
        rows.append({"s": s, "ratios": ratios})
    return {
        "sval": [float(f) for f in sval.factors],
        "certified": sval.certified,
        "rows": rows,
    }


# ---------------------------------------------------------------------------
# series literals
# ---------------------------------------------------------------------------


def parse_series(text: str) -> PuiseuxSeries:
    """Parse a sum of c*t^(p/q) terms, e.g. "1 - 2*t^(1/2) + t^3"."""
    from .glpoly import ParseError, _Lexer

    lex = _Lexer(text)
    total = PuiseuxSeries.zero(None)
    first = True
    while not lex.at_end():
        sign = 1
        c = lex.peek()
        if c == "+":
            lex.take("+")
        elif c == "-":
            lex.take("-")
            sign = -1
        elif not first:
            raise ParseError("expected '+' or '-' between terms", lex.pos,
                             ("'+'", "'-'"))
        first = False
        total = total + _parse_series_term(lex).scale(sign)
    if total.terms or not first:
        return total
    raise ParseError("empty series literal", 0, ("term",))


def _parse_series_term(lex) -> PuiseuxSeries:
    from .glpoly import ParseError

    c = lex.peek()
    coeff = Scalar(1)
    have_coeff = False
    if c.isdigit():
        coeff = lex.take_number()
        have_coeff = True
    elif c == "i":
        lex.take("i")
        coeff = Scalar(0, 1)
        have_coeff = True
    if have_coeff:
        if lex.peek() == "*":
            lex.take("*")
            if lex.peek() != "t":
                raise ParseError("expected 't' after '*'", lex.pos, ("'t'",))
        elif lex.peek() != "t":
            return PuiseuxSeries.const(coeff)
    if lex.peek() != "t":
        raise ParseError("expected a coefficient or 't'", lex.pos,
                         ("number", "'t'"))
    lex.take("t")
    exponent = Fraction(1)
    if lex.peek() == "^":
        lex.take("^")
        if lex.peek() == "(":
            lex.take("(")
            num = lex.take_int()
            if lex.peek() == "/":
                lex.take("/")
                den = lex.take_int()
                exponent = Fraction(num, den)
            else:
                exponent = Fraction(num)
            lex.take(")")
        else:
            exponent = Fraction(lex.take_int())
    return PuiseuxSeries.t_power(exponent, coeff)


def parse_series_matrix(rows: Sequence[Sequence[str]]) -> PuiseuxMatrix:
    """Matrix from nested lists of series literals (the CLI JSON format)."""
    return PuiseuxMatrix([[parse_series(x) for x in row] for row in rows])
