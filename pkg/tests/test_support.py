"""Tests for supports, Q_m coefficients and spherical Newton polytopes."""

import itertools
import random
from fractions import Fraction

import pytest

from samoeba.convex import weight_polytope
from samoeba.glpoly import RegularFunction, parse
from samoeba.scalar import Scalar, identity, mat, random_invertible
from samoeba.support import (
    SupportSet,
    minor_det,
    qm,
    snewt,
    support,
    trailing_minor,
    v_lambda,
)


def example2(alpha=(1, 2)):
    return parse(f"{alpha[0]}*a11^2 + {alpha[1]}*det", 2)


def example3(alpha=(1, 1, 10, 1)):
    a1, a2, a3, a4 = alpha
    return parse(f"{a1} + {a2}*a11 + {a3}*det + {a4}*a22*det", 2)


class TestSupport:
    def test_det(self):
        s = support(parse("det", 2))
        assert s.points == {(1, 1)}
        assert s.confidence == "exact"

    def test_example2(self):
        s = support(example2())
        assert s.points == {(2, 0), (1, 1), (0, 2)}

    def test_trailing_minor_size1(self):
        # (A diag(z) B^-1)_{22} = sum_k A_2k z_k (B^-1)_k2
        s = support(trailing_minor(2, 1))
        assert s.points == {(1, 0), (0, 1)}

    def test_example3_has_cubic_terms(self):
        # the a22*det summand is cubic; its exponents are (2,1) and (1,2)
        s = support(example3())
        assert s.points == {(0, 0), (1, 0), (0, 1), (1, 1), (2, 1), (1, 2)}

    def test_permutation_invariance(self):
        rng = random.Random(0)
        for text, n in [("a11 + det^-1", 2), ("a12*a21 + 2*a11", 2),
                        ("a13 + det*a21", 3)]:
            pts = support(parse(text, n)).points
            for perm in itertools.permutations(range(n)):
                assert {tuple(p[i] for i in perm) for p in pts} == pts

    def test_homogeneous_constant_coordinate_sum(self):
        f = example2()  # homogeneous of degree 2
        assert {sum(p) for p in support(f).points} == {2}

    def test_json_roundtrip(self):
        s = support(parse("det^-1", 3))
        assert SupportSet.from_json(s.to_json()) == s


class TestQm:
    def test_det_identity(self):
        assert qm(parse("det", 3), (1, 1, 1), identity(3), identity(3)) == Scalar(1)

    def test_example3_alpha3(self):
        f = example3((1, 2, 3, 4))
        assert qm(f, (1, 1), identity(2), identity(2)) == Scalar(3)

    def test_outside_support_is_zero(self):
        rng = random.Random(9)
        f = example2()
        a = random_invertible(rng, 2)
        b = random_invertible(rng, 2)
        assert qm(f, (5, 5), a, b) == Scalar(0)

    def test_covariance_under_right_torus(self):
        # Q_m(A diag(lam), B) = lam^m Q_m(A, B)
        rng = random.Random(21)
        f = example3((1, 1, 1, 1))
        for _ in range(10):
            a = random_invertible(rng, 2)
            b = random_invertible(rng, 2)
            lam = [Scalar(Fraction(rng.randint(1, 4), rng.randint(1, 3)))
                   for _ in range(2)]
            scaled = mat([[a[i][j] * lam[j] for j in range(2)]
                          for i in range(2)])
            for m in support(f).points:
                factor = lam[0] ** m[0] * lam[1] ** m[1]
                assert qm(f, m, scaled, b) == factor * qm(f, m, a, b)


class TestSnewt:
    def test_example2_segment(self):
        p = snewt(example2())
        assert p.vertices == ((0, 2), (2, 0))

    def test_det_power_point(self):
        assert snewt(parse("det^3", 2)).vertices == ((3, 3),)
        assert snewt(parse("det^-1", 2)).vertices == ((-1, -1),)

    def test_example3_pentagon(self):
        p = snewt(example3())
        assert set(p.vertices) == {(0, 0), (1, 0), (0, 1), (2, 1), (1, 2)}
        assert p.contains((1, 1))
        assert p.smallest_face((1, 1)).dim() == 2  # interior point

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            snewt(RegularFunction.zero(2))

    def test_minkowski_law(self):
        rng = random.Random(31)
        f = parse("a11 + 2*det^-1", 2)
        g = parse("a22^2 - a12", 2)
        assert snewt(f * g) == snewt(f).minkowski(snewt(g))


class TestMinors:
    def test_trailing_minor_examples(self):
        assert trailing_minor(2, 1).equals(parse("a22", 2))
        assert trailing_minor(2, 2).equals(parse("det", 2))

    def test_minor_det_hand_expansion(self):
        f = minor_det(3, [1, 2], [2, 3])
        assert f.equals(parse("a12*a23 - a13*a22", 3))

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            minor_det(3, [1, 2], [1])

    def test_support_is_k_subsets(self):
        for n in (2, 3):
            for k in range(1, n + 1):
                pts = support(trailing_minor(n, k)).points
                expected = {
                    tuple(1 if i in comb else 0 for i in range(n))
                    for comb in itertools.combinations(range(n), k)
                }
                assert pts == expected


class TestVLambda:
    def test_fundamental_weights(self):
        for n in (2, 3):
            for k in range(1, n + 1):
                lam = tuple([0] * (n - k) + [1] * k)
                assert v_lambda(lam).equals(trailing_minor(n, k))

    def test_zero_weight(self):
        assert v_lambda((0, 0, 0)).equals(RegularFunction.one(3))

    def test_negative_det(self):
        assert v_lambda((-1, -1)).equals(parse("det^-1", 2))

    def test_monotonicity_required(self):
        with pytest.raises(ValueError):
            v_lambda((2, 1))

    def test_weight_polytope_match(self):
        rng = random.Random(3)
        for _ in range(8):
            lam = tuple(sorted(rng.randint(-2, 2) for _ in range(2)))
            assert snewt(v_lambda(lam)) == weight_polytope(lam)
