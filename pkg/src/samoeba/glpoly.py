"""Regular functions on GL_n(C) and their torus substitution.

A regular function is det^N * p where p is a polynomial in the n^2 matrix
entries a_ij and N is an integer.  Functions are immutable values with exact
Gaussian-rational coefficients; arithmetic, evaluation and the substitution
z |-> f(A diag(z) B^{-1}) into Laurent polynomials are all exact when the
matrices have exact entries.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Dict, Iterable, Optional, Tuple

from .scalar import (
    ONE,
    ZERO,
    Matrix,
    Scalar,
    mat_det,
    mat_inv,
    random_invertible,
)

# A monomial in the matrix entries: sorted tuple of (i, j, exponent) with
# 1-based indices and positive exponents.  () is the constant monomial.
Monomial = Tuple[Tuple[int, int, int], ...]

#: dimensions above this are refused unless explicitly overridden
#: (dense substitution cost grows exponentially with n)
MAX_DIMENSION = 8


class DimensionError(ValueError):
    pass


class SingularMatrixError(ValueError):
    pass


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    merged: Dict[Tuple[int, int], int] = {}
    for i, j, e in m1:
        merged[(i, j)] = merged.get((i, j), 0) + e
    for i, j, e in m2:
        merged[(i, j)] = merged.get((i, j), 0) + e
    return tuple(sorted((i, j, e) for (i, j), e in merged.items() if e))


def _mono_degree(m: Monomial) -> int:
    return sum(e for _, _, e in m)


def _mono_str(m: Monomial) -> str:
    if not m:
        return "1"
    parts = []
    for i, j, e in m:
        parts.append(f"a{i}{j}" if e == 1 else f"a{i}{j}^{e}")
    return "*".join(parts)


class RegularFunction:
    """An element det^N * sum_m c_m a^m of C[GL_n], with exact coefficients."""

    __slots__ = ("n", "det_power", "terms")

    def __init__(self, n: int, det_power: int = 0,
                 terms: Optional[Dict[Monomial, Scalar]] = None,
                 max_dimension: int = MAX_DIMENSION):
        if n < 1:
            raise DimensionError("dimension must be a positive integer")
        if n > max_dimension:
            raise DimensionError(
                f"dimension {n} exceeds the configured cap {max_dimension}")
        self.n = n
        self.det_power = det_power
        clean = {m: Scalar.of(c) for m, c in (terms or {}).items()
                 if not Scalar.of(c).is_zero()}
        self.terms = clean
        if not clean:
            # the zero function: normalize the det power away
            self.det_power = 0

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero(n: int) -> "RegularFunction":
        return RegularFunction(n)

    @staticmethod
    def const(n: int, value) -> "RegularFunction":
        return RegularFunction(n, 0, {(): Scalar.of(value)})

    @staticmethod
    def one(n: int) -> "RegularFunction":
        return RegularFunction.const(n, 1)

    @staticmethod
    def entry(n: int, i: int, j: int) -> "RegularFunction":
        if not (1 <= i <= n and 1 <= j <= n):
            raise DimensionError(
                f"entry a{i}{j} is outside the valid range 1..{n}")
        return RegularFunction(n, 0, {((i, j, 1),): ONE})

    @staticmethod
    def det(n: int, power: int = 1) -> "RegularFunction":
        return RegularFunction(n, power, {(): ONE})

    # -- ring structure ---------------------------------------------------

    def _check_same_n(self, other: "RegularFunction"):
        if self.n != other.n:
            raise DimensionError(
                f"dimension mismatch: {self.n} vs {other.n}")

    def _with_det_power(self, target: int) -> Dict[Monomial, Scalar]:
        """Terms of self rewritten as det^target * (returned polynomial)."""
        shift = self.det_power - target
        if shift < 0:
            raise ValueError("cannot lower det power without division")
        if shift == 0 or not self.terms:
            return dict(self.terms)
        detpoly = _det_monomials(self.n)
        terms = dict(self.terms)
        for _ in range(shift):
            nxt: Dict[Monomial, Scalar] = {}
            for m1, c1 in terms.items():
                for m2, c2 in detpoly.items():
                    m = _mono_mul(m1, m2)
                    c = nxt.get(m, ZERO) + c1 * c2
                    if c.is_zero():
                        nxt.pop(m, None)
                    else:
                        nxt[m] = c
            terms = nxt
        return terms

    def __add__(self, other) -> "RegularFunction":
        if isinstance(other, (int, Fraction, Scalar)):
            other = RegularFunction.const(self.n, other)
        self._check_same_n(other)
        if not self.terms:
            return other
        if not other.terms:
            return self
        power = min(self.det_power, other.det_power)
        terms = self._with_det_power(power)
        for m, c in other._with_det_power(power).items():
            s = terms.get(m, ZERO) + c
            if s.is_zero():
                terms.pop(m, None)
            else:
                terms[m] = s
        return RegularFunction(self.n, power, terms)

    __radd__ = __add__

    def __neg__(self) -> "RegularFunction":
        return RegularFunction(
            self.n, self.det_power, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "RegularFunction":
        if isinstance(other, (int, Fraction, Scalar)):
            other = RegularFunction.const(self.n, other)
        return self + (-other)

    def __rsub__(self, other) -> "RegularFunction":
        return (-self) + other

    def __mul__(self, other) -> "RegularFunction":
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        self._check_same_n(other)
        terms: Dict[Monomial, Scalar] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                c = terms.get(m, ZERO) + c1 * c2
                if c.is_zero():
                    terms.pop(m, None)
                else:
                    terms[m] = c
        return RegularFunction(
            self.n, self.det_power + other.det_power, terms)

    __rmul__ = __mul__

    def scale(self, value) -> "RegularFunction":
        value = Scalar.of(value)
        return RegularFunction(
            self.n, self.det_power,
            {m: c * value for m, c in self.terms.items()})

    def __pow__(self, k: int) -> "RegularFunction":
        if not isinstance(k, int):
            raise TypeError("exponents must be integers")
        if k < 0:
            inv = self._invert_monomial()
            return inv ** (-k)
        out = RegularFunction.one(self.n)
        for _ in range(k):
            out = out * self
        return out

    def _invert_monomial(self) -> "RegularFunction":
        """Inverse, defined only for c*det^N (the units of C[GL_n])."""
        if len(self.terms) == 1 and () in self.terms:
            c = self.terms[()]
            return RegularFunction(
                self.n, -self.det_power, {(): Scalar(1) / c})
        raise ValueError(
            "negative powers are only defined for det and nonzero constants")

    def is_zero(self) -> bool:
        return not self.terms

    # -- evaluation -------------------------------------------------------

    def evaluate(self, a, det_floor: float = 1e-12):
        """Value of the function at a matrix.

        Exact Scalar matrices give an exact Scalar; anything else is
        evaluated in floating complex arithmetic.  Raises
        SingularMatrixError when det(a) vanishes (or, numerically, falls
        below det_floor in absolute value) and a negative det power needs it.
        """
        exact = _is_exact_matrix(a)
        if exact:
            rows = tuple(tuple(Scalar.of(x) for x in row) for row in a)
            det = mat_det(rows)
            if self.det_power < 0 and det.is_zero():
                raise SingularMatrixError("matrix is singular")
            get = lambda i, j: rows[i - 1][j - 1]
            total = ZERO
            one = ONE
        else:
            rows = [[complex(x) for x in row] for row in a]
            det = _complex_det(rows)
            if self.det_power < 0 and abs(det) < det_floor:
                raise SingularMatrixError(
                    f"|det| = {abs(det):.3e} below floor {det_floor:.3e}")
            get = lambda i, j: rows[i - 1][j - 1]
            total = 0j
            one = 1.0 + 0j
        for mono, coeff in self.terms.items():
            term = coeff if exact else coeff.to_complex()
            for i, j, e in mono:
                term = term * get(i, j) ** e
            total = total + term
        if self.det_power:
            total = total * det ** self.det_power
        return total

    # -- substitution ------------------------------------------------------

    def substitute(self, a: Matrix, b: Matrix) -> "LaurentPoly":
        """The Laurent polynomial z |-> f(a diag(z) b^{-1}).

        Both matrices must be exact (Scalar entries) and invertible; the
        result has exact coefficients and exponents in Z^n.
        """
        if not (_is_exact_matrix(a) and _is_exact_matrix(b)):
            raise TypeError("substitute requires exact Scalar matrices")
        a = tuple(tuple(Scalar.of(x) for x in row) for row in a)
        b = tuple(tuple(Scalar.of(x) for x in row) for row in b)
        if mat_det(a).is_zero():
            raise SingularMatrixError("left matrix is singular")
        try:
            binv = mat_inv(b)
        except ZeroDivisionError:
            raise SingularMatrixError("right matrix is singular") from None
        n = self.n
        # entry (i, j) of a diag(z) binv is the linear form
        # sum_k a_ik binv_kj z_k
        entry_forms = [
            [
                LaurentPoly(n, {
                    _unit_exp(n, k): a[i][k] * binv[k][j]
                    for k in range(n)
                    if not (a[i][k] * binv[k][j]).is_zero()
                })
                for j in range(n)
            ]
            for i in range(n)
        ]
        out = LaurentPoly.zero(n)
        for mono, coeff in self.terms.items():
            term = LaurentPoly.const(n, coeff)
            for i, j, e in mono:
                for _ in range(e):
                    term = term * entry_forms[i - 1][j - 1]
            out = out + term
        if self.det_power:
            scale = (mat_det(a) * mat_det(binv)) ** self.det_power
            shift = tuple(self.det_power for _ in range(n))
            out = out.shift(shift).scale(scale)
        return out

    # -- structure ---------------------------------------------------------

    def homogeneous_components(self) -> Dict[int, "RegularFunction"]:
        """Decomposition f = sum_d f_d with f_d homogeneous of degree d.

        The degree of det^N * a^m is n*N + |m|.
        """
        comps: Dict[int, Dict[Monomial, Scalar]] = {}
        for mono, coeff in self.terms.items():
            d = _mono_degree(mono) + self.n * self.det_power
            comps.setdefault(d, {})[mono] = coeff
        return {
            d: RegularFunction(self.n, self.det_power, terms)
            for d, terms in sorted(comps.items())
        }

    def equals(self, other: "RegularFunction", trials: int = 3,
               seed: int = 7) -> bool:
        """Probabilistic equality: exact evaluation at random rational points.

        Sound with probability 1 (Zariski density of the sample set); a
        false positive would require all sampled matrices to lie on the
        zero set of the difference.
        """
        self._check_same_n(other)
        diff = self - other
        if diff.is_zero():
            return True
        rng = random.Random(seed)
        for _ in range(trials):
            m = random_invertible(rng, self.n, span=9999, denom=16,
                                  nonzero=True)
            if not diff.evaluate(m).is_zero():
                return False
        return True

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        body = " + ".join(
            f"{c}*{_mono_str(m)}" for m, c in sorted(self.terms.items()))
        if self.det_power:
            return f"det^{self.det_power}*({body})"
        return body


def _unit_exp(n: int, k: int) -> Tuple[int, ...]:
    return tuple(1 if i == k else 0 for i in range(n))


_DET_CACHE: Dict[int, Dict[Monomial, Scalar]] = {}


def _det_monomials(n: int) -> Dict[Monomial, Scalar]:
    """The determinant of the generic n x n matrix as a monomial dict."""
    if n not in _DET_CACHE:
        import itertools

        terms: Dict[Monomial, Scalar] = {}
        for perm in itertools.permutations(range(1, n + 1)):
            sign = _perm_sign(perm)
            mono = tuple(sorted((i, j, 1) for i, j in enumerate(perm, 1)))
            terms[mono] = Scalar(sign)
        _DET_CACHE[n] = terms
    return _DET_CACHE[n]


def _perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j] - 1
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _is_exact_matrix(a) -> bool:
    try:
        first = a[0][0]
    except (TypeError, IndexError, KeyError):
        return False
    return isinstance(first, (Scalar, int, Fraction))


def _complex_det(rows) -> complex:
    n = len(rows)
    m = [list(r) for r in rows]
    det = 1.0 + 0j
    for col in range(n):
        pivot = max(range(col, n), key=lambda r: abs(m[r][col]))
        if abs(m[pivot][col]) == 0.0:
            return 0j
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        for r in range(col + 1, n):
            factor = m[r][col] / m[col][col]
            for c in range(col, n):
                m[r][c] -= factor * m[col][c]
    return det


class LaurentPoly:
    """Sparse Laurent polynomial in n torus variables.

    Coefficients may be Scalar (exact) or any ring element supporting
    +, *, unary - and is_zero/zero test (Puiseux series use this).
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Optional[dict] = None):
        self.n = n
        self.terms = {
            tuple(m): c for m, c in (terms or {}).items() if not _cf_is_zero(c)
        }

    @staticmethod
    def zero(n: int) -> "LaurentPoly":
        return LaurentPoly(n)

    @staticmethod
    def const(n: int, value) -> "LaurentPoly":
        return LaurentPoly(n, {tuple(0 for _ in range(n)): value})

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        if self.n != other.n:
            raise DimensionError("dimension mismatch")
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms[m] + c if m in terms else c
            if _cf_is_zero(s):
                terms.pop(m, None)
            else:
                terms[m] = s
        return LaurentPoly(self.n, terms)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        if self.n != other.n:
            raise DimensionError("dimension mismatch")
        terms: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                c = c1 * c2
                if m in terms:
                    c = terms[m] + c
                if _cf_is_zero(c):
                    terms.pop(m, None)
                else:
                    terms[m] = c
        return LaurentPoly(self.n, terms)

    def scale(self, value) -> "LaurentPoly":
        return LaurentPoly(
            self.n, {m: c * value for m, c in self.terms.items()})

    def shift(self, exponent: Tuple[int, ...]) -> "LaurentPoly":
        """Multiply by the monomial z^exponent."""
        return LaurentPoly(
            self.n,
            {tuple(x + y for x, y in zip(m, exponent)): c
             for m, c in self.terms.items()})

    def coefficient(self, exponent: Iterable[int]):
        key = tuple(exponent)
        if key in self.terms:
            return self.terms[key]
        sample = next(iter(self.terms.values()), None)
        if isinstance(sample, Scalar) or sample is None:
            return ZERO
        return 0

    def support(self) -> frozenset:
        return frozenset(self.terms)

    def evaluate(self, z):
        """Value at a point of the torus (complex or exact coordinates)."""
        total = None
        for m, c in self.terms.items():
            term = c
            for zk, e in zip(z, m):
                if e:
                    term = term * zk ** e
            total = term if total is None else total + term
        if total is None:
            sample_exact = all(
                isinstance(zk, (int, Fraction, Scalar)) for zk in z)
            return ZERO if sample_exact else 0j
        return total

    def __eq__(self, other) -> bool:
        return (isinstance(other, LaurentPoly) and self.n == other.n
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items()):
            mono = "*".join(
                f"z{k+1}^{e}" if e != 1 else f"z{k+1}"
                for k, e in enumerate(m) if e)
            parts.append(f"({c!r})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def _cf_is_zero(c) -> bool:
    if isinstance(c, Scalar):
        return c.is_zero()
    if isinstance(c, (int, float, complex, Fraction)):
        return c == 0
    probe = getattr(c, "is_zero", None)
    if probe is not None:
        return probe() if callable(probe) else bool(probe)
    return False


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


class ParseError(ValueError):
    """Syntax error with source position and the tokens that were expected."""

    def __init__(self, message: str, position: int, expected=()):
        self.position = position
        self.expected = tuple(expected)
        detail = f"{message} at position {position}"
        if expected:
            detail += " (expected " + " or ".join(expected) + ")"
        super().__init__(detail)


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def startswith(self, s: str) -> bool:
        self.skip_ws()
        return self.text.startswith(s, self.pos)

    def take(self, s: str):
        if not self.startswith(s):
            raise ParseError(f"unexpected input", self.pos, (repr(s),))
        self.pos += len(s)

    def take_int(self) -> int:
        self.skip_ws()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] == "-":
            self.pos += 1
        digits = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == digits:
            raise ParseError("expected an integer", start, ("integer",))
        return int(self.text[start:self.pos])

    def take_number(self) -> Scalar:
        """decimal, rational p/q, optionally followed by i (imaginary)."""
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise ParseError("expected a number", start, ("number",))
        value = Fraction(int(self.text[start:self.pos]))
        if self.pos < len(self.text) and self.text[self.pos] == ".":
            self.pos += 1
            fstart = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if self.pos == fstart:
                raise ParseError("expected digits after '.'", fstart,
                                 ("digits",))
            frac = self.text[fstart:self.pos]
            value += Fraction(int(frac), 10 ** len(frac))
        elif self.pos < len(self.text) and self.text[self.pos] == "/":
            self.pos += 1
            dstart = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if self.pos == dstart:
                raise ParseError("expected denominator after '/'", dstart,
                                 ("digits",))
            denom = int(self.text[dstart:self.pos])
            if denom == 0:
                raise ParseError("zero denominator", dstart)
            value /= denom
        if self.pos < len(self.text) and self.text[self.pos] == "i":
            self.pos += 1
            return Scalar(0, value)
        return Scalar(value)

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)


def parse(text: str, n: int) -> RegularFunction:
    """Parse a regular-function expression.

    Grammar: expr := term (('+'|'-') term)*; term := factor ('*' factor)*;
    factor := atom ('^' int)?; atom := 'det' | a<digit><digit> |
    'a[' int ',' int ']' | number | '(' expr ')' | 'i'.  A leading '-' on
    the whole expression is accepted.  Numbers are decimal or p/q, with a
    trailing 'i' for imaginary literals.
    """
    lex = _Lexer(text)
    f = _parse_expr(lex, n)
    if not lex.at_end():
        raise ParseError("trailing input", lex.pos,
                         ("'+'", "'-'", "'*'", "end of input"))
    return f


def _parse_expr(lex: _Lexer, n: int) -> RegularFunction:
    negate = False
    if lex.peek() == "-":
        lex.take("-")
        negate = True
    f = _parse_term(lex, n)
    if negate:
        f = -f
    while lex.peek() in ("+", "-"):
        op = lex.peek()
        lex.take(op)
        g = _parse_term(lex, n)
        f = f + g if op == "+" else f - g
    return f


def _parse_term(lex: _Lexer, n: int) -> RegularFunction:
    f = _parse_factor(lex, n)
    while lex.peek() == "*":
        lex.take("*")
        f = f * _parse_factor(lex, n)
    return f


def _parse_factor(lex: _Lexer, n: int) -> RegularFunction:
    f = _parse_atom(lex, n)
    if lex.peek() == "^":
        lex.take("^")
        k = lex.take_int()
        try:
            f = f ** k
        except ValueError as exc:
            raise ParseError(str(exc), lex.pos) from None
    return f


def _parse_atom(lex: _Lexer, n: int) -> RegularFunction:
    c = lex.peek()
    if c == "(":
        lex.take("(")
        f = _parse_expr(lex, n)
        if lex.peek() != ")":
            raise ParseError("unbalanced parenthesis", lex.pos, ("')'",))
        lex.take(")")
        return f
    if lex.startswith("det"):
        lex.take("det")
        return RegularFunction.det(n)
    if c == "a":
        pos = lex.pos
        lex.take("a")
        if lex.peek() == "[":
            lex.take("[")
            i = lex.take_int()
            lex.take(",")
            j = lex.take_int()
            lex.take("]")
        else:
            lex.skip_ws()
            if (lex.pos + 1 >= len(lex.text)
                    or not lex.text[lex.pos].isdigit()
                    or not lex.text[lex.pos + 1].isdigit()):
                raise ParseError("matrix entry needs two digit indices",
                                 pos, ("a<i><j>", "a[i,j]"))
            i = int(lex.text[lex.pos])
            j = int(lex.text[lex.pos + 1])
            lex.pos += 2
        if not (1 <= i <= n and 1 <= j <= n):
            raise ParseError(
                f"entry a[{i},{j}] is out of range for dimension {n}", pos)
        return RegularFunction.entry(n, i, j)
    if c == "i":
        lex.take("i")
        return RegularFunction.const(n, Scalar(0, 1))
    if c.isdigit():
        return RegularFunction.const(n, lex.take_number())
    raise ParseError(
        "expected an atom", lex.pos,
        ("'det'", "a<i><j>", "number", "'i'", "'('"))
