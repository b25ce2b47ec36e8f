"""Exact Gaussian-rational scalars and small exact linear algebra.

All symbolic computations in this package (polynomial coefficients, torus
substitution, support detection, Puiseux coefficients) run over Q(i) so that
zero tests are decidable.  Conversion to floating complex is explicit and
lossy.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable, Sequence


class Scalar:
    """An element of Q(i), stored as an exact real and imaginary Fraction."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    # -- constructors -------------------------------------------------

    @staticmethod
    def of(value) -> "Scalar":
        """Coerce an int, Fraction, Scalar or exact 2-tuple into a Scalar."""
        if isinstance(value, Scalar):
            return value
        if isinstance(value, (int, Fraction)):
            return Scalar(value)
        if isinstance(value, tuple) and len(value) == 2:
            return Scalar(value[0], value[1])
        raise TypeError(f"cannot coerce {value!r} to Scalar")

    # -- ring/field operations ----------------------------------------

    def __add__(self, other) -> "Scalar":
        other = Scalar.of(other)
        return Scalar(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar(-self.re, -self.im)

    def __sub__(self, other) -> "Scalar":
        other = Scalar.of(other)
        return Scalar(self.re - other.re, self.im - other.im)

    def __rsub__(self, other) -> "Scalar":
        return Scalar.of(other) - self

    def __mul__(self, other) -> "Scalar":
        other = Scalar.of(other)
        return Scalar(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Scalar":
        other = Scalar.of(other)
        d = other.re * other.re + other.im * other.im
        if d == 0:
            raise ZeroDivisionError("division by zero Scalar")
        return Scalar(
            (self.re * other.re + self.im * other.im) / d,
            (self.im * other.re - self.re * other.im) / d,
        )

    def __rtruediv__(self, other) -> "Scalar":
        return Scalar.of(other) / self

    def __pow__(self, k: int) -> "Scalar":
        if not isinstance(k, int):
            raise TypeError("Scalar powers must be integers")
        if k < 0:
            return Scalar(1) / self ** (-k)
        out = Scalar(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self) -> "Scalar":
        return Scalar(self.re, -self.im)

    # -- queries -------------------------------------------------------

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, Scalar, tuple)):
            other = Scalar.of(other)
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def to_complex(self) -> complex:
        """Lossy conversion to a floating-point complex number."""
        return complex(self.re) + 1j * complex(self.im)

    def __repr__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


ZERO = Scalar(0)
ONE = Scalar(1)
I = Scalar(0, 1)

Matrix = tuple  # tuple of tuples of Scalar


def mat(rows: Iterable[Iterable]) -> Matrix:
    """Build an exact matrix (tuple of tuples of Scalar) from any nesting."""
    return tuple(tuple(Scalar.of(x) for x in row) for row in rows)


def identity(n: int) -> Matrix:
    return tuple(
        tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)
    )


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, m, p = len(a), len(b), len(b[0])
    return tuple(
        tuple(
            sum((a[i][k] * b[k][j] for k in range(m)), ZERO) for j in range(p)
        )
        for i in range(n)
    )


def mat_det(a: Matrix) -> Scalar:
    """Exact determinant by fraction Gaussian elimination."""
    n = len(a)
    m = [list(row) for row in a]
    det = Scalar(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col]), None)
        if pivot is None:
            return ZERO
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det = det * m[col][col]
        inv = Scalar(1) / m[col][col]
        for r in range(col + 1, n):
            if m[r][col]:
                factor = m[r][col] * inv
                for c in range(col, n):
                    m[r][c] = m[r][c] - factor * m[col][c]
    return det


def mat_inv(a: Matrix) -> Matrix:
    """Exact inverse by Gauss-Jordan; raises ZeroDivisionError if singular."""
    n = len(a)
    m = [list(row) + list(identity(n)[i]) for i, row in enumerate(a)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col]), None)
        if pivot is None:
            raise ZeroDivisionError("matrix is singular")
        m[col], m[pivot] = m[pivot], m[col]
        inv = Scalar(1) / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                factor = m[r][col]
                m[r] = [x - factor * y for x, y in zip(m[r], m[col])]
    return tuple(tuple(row[n:]) for row in m)


def random_rational(rng: random.Random, span: int = 3, denom: int = 3,
                    nonzero: bool = False) -> Fraction:
    num = rng.randint(-span, span)
    while nonzero and num == 0:
        num = rng.randint(-span, span)
    return Fraction(num, rng.randint(1, denom))


def random_scalar(rng: random.Random, span: int = 3, denom: int = 3,
                  complex_parts: bool = True, nonzero: bool = False) -> Scalar:
    re = random_rational(rng, span, denom, nonzero)
    im = random_rational(rng, span, denom) if complex_parts else Fraction(0)
    return Scalar(re, im)


def random_invertible(rng: random.Random, n: int, span: int = 3,
                      denom: int = 3, complex_parts: bool = True,
                      nonzero: bool = False) -> Matrix:
    """Random exact invertible matrix with rational entries.

    nonzero=True keeps every real part away from zero; combined with a
    large span this makes accidental vanishing of a fixed nonzero
    polynomial at the sample Schwartz-Zippel-unlikely.
    """
    while True:
        a = tuple(
            tuple(random_scalar(rng, span, denom, complex_parts, nonzero)
                  for _ in range(n))
            for _ in range(n)
        )
        if mat_det(a):
            return a


def to_complex_matrix(a: Sequence[Sequence]) -> list:
    """Convert a Scalar matrix to a nested list of Python complex numbers."""
    return [[Scalar.of(x).to_complex() for x in row] for row in a]
