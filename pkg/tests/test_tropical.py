"""Tests for the closed-form scaling limit and the scaling experiment."""

import math
import random
from fractions import Fraction

import pytest

from samoeba.glpoly import RegularFunction, parse
from samoeba.numerics import MembershipOptions
from samoeba.puiseux import PuiseuxMatrix, PuiseuxSeries, smith_sval
from samoeba.support import snewt
from samoeba.tropical import (
    COMPLEMENT_OF_CONES,
    EMPTY,
    FULL_SPACE,
    HYPERPLANE,
    cone_depth,
    describe_polytope,
    limit_experiment,
    removal_margin,
    strop_hypersurface,
    strop_member,
)

HEXAGON_F = "det^-1 + i*(a11+a22)^3*det^-2 - a11*a12*a21*a22 + 2*det^4"


def example3(alpha=(1, 1, 10, 1)):
    a1, a2, a3, a4 = alpha
    return parse(f"{a1} + {a2}*a11 + {a3}*det + {a4}*a22*det", 2)


class TestStropHypersurface:
    def test_det_minus_one_is_hyperplane(self):
        d = strop_hypersurface(parse("det - 1", 2))
        assert d.kind == HYPERPLANE
        assert d.n_minus == 0 and d.n_plus == 1

    def test_monomial_is_empty(self):
        d = strop_hypersurface(parse("3*det^2", 2))
        assert d.kind == EMPTY

    def test_example3_removes_negative_quadrant(self):
        d = strop_hypersurface(example3())
        assert d.kind == COMPLEMENT_OF_CONES
        assert d.n_minus == 0 and d.n_plus == 1
        assert d.cone_plus is None  # (1,1) interior to the polytope
        assert sorted(d.cone_minus.rays) == [(-1, 0), (0, -1)]

    def test_example2_full_space(self):
        d = strop_hypersurface(parse("a11^2 + 2*det", 2))
        assert d.kind == FULL_SPACE
        assert d.n_minus == d.n_plus == 1  # (1,1) is the segment midpoint

    def test_hexagon_function(self):
        f = parse(HEXAGON_F, 2)
        poly = snewt(f)
        assert set(poly.vertices) == {
            (-1, -1), (1, -2), (-2, 1), (4, 0), (0, 4), (4, 4)}
        d = strop_hypersurface(f)
        assert d.kind == COMPLEMENT_OF_CONES
        assert d.n_minus == -1 and d.n_plus == 4
        # outward cones: the positive quadrant at (4,4) and the cone
        # spanned by (-1,-2), (-2,-1) at (-1,-1)
        assert sorted(d.cone_plus.rays) == [(0, 1), (1, 0)]
        assert sorted(d.cone_minus.rays) == [(-2, -1), (-1, -2)]

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            strop_hypersurface(RegularFunction.zero(2))

    def test_depends_only_on_polytope(self):
        # two different functions with the same Newton polytope agree
        f = parse("1 + a11*a22*det", 2)
        g = parse("5 - det^2 + a12*a21*det", 2)
        assert snewt(f) == snewt(g)
        df, dg = strop_hypersurface(f), strop_hypersurface(g)
        assert df.kind == dg.kind
        assert df.cone_minus == dg.cone_minus
        assert df.cone_plus == dg.cone_plus


class TestStropMember:
    def test_hyperplane_members(self):
        d = strop_hypersurface(parse("det - 1", 2))
        assert strop_member(d, (1, -1))
        assert strop_member(d, (Fraction(1, 3), Fraction(-1, 3)))
        assert not strop_member(d, (1, 0))

    def test_example3_members(self):
        d = strop_hypersurface(example3())
        assert not strop_member(d, (-1, -1))  # inside the removed quadrant
        assert strop_member(d, (1, 1))
        assert strop_member(d, (0, -5))  # cone boundary: cones are open
        assert strop_member(d, (3, -2))

    def test_permutation_invariance(self):
        rng = random.Random(1)
        for f in (example3(), parse(HEXAGON_F, 2), parse("det - 1", 2)):
            d = strop_hypersurface(f)
            for _ in range(25):
                x = (Fraction(rng.randint(-12, 12), 3),
                     Fraction(rng.randint(-12, 12), 3))
                assert strop_member(d, x) == strop_member(d, (x[1], x[0]))

    def test_full_space_and_empty(self):
        full = strop_hypersurface(parse("a11^2 + 2*det", 2))
        empty = strop_hypersurface(parse("det^3", 2))
        assert strop_member(full, (7, -9))
        assert not strop_member(empty, (0, 0))


class TestMargins:
    def test_cone_depth_quadrant(self):
        d = strop_hypersurface(example3())
        c = d.cone_minus
        assert cone_depth(c, (-1.0, -1.0)) == pytest.approx(1.0)
        assert cone_depth(c, (-3.0, -0.5)) == pytest.approx(0.5)
        assert cone_depth(c, (1.0, -1.0)) < 0

    def test_removal_margin(self):
        d = strop_hypersurface(example3())
        # the tightest violated tangent row of the removed quadrant is
        # (-2,-1) (and its mirror), giving 0.9 / sqrt(5)
        assert removal_margin(d, (0.3, 0.3)) == pytest.approx(
            0.9 / math.sqrt(5))
        assert removal_margin(d, (2.0, -3.0)) == pytest.approx(2.0)
        assert removal_margin(d, (-0.1, -0.1)) == 0.0

    def test_hyperplane_margin_infinite(self):
        d = strop_hypersurface(parse("det - 1", 2))
        assert removal_margin(d, (1.0, -1.0)) == math.inf


class TestPuiseuxConsistency:
    def test_det_minus_one_witnesses(self):
        # exact Puiseux zeros diag(t^x) with sum x = 0, conjugated by
        # determinant-one unimodular matrices
        rng = random.Random(3)
        f = parse("det - 1", 2)
        d = strop_hypersurface(f)
        t = PuiseuxSeries.t_power
        one = PuiseuxSeries.const(1)
        zero = PuiseuxSeries.const(0)
        for _ in range(10):
            x1 = Fraction(rng.randint(-6, 6), rng.choice([1, 2]))
            diag = PuiseuxMatrix([[t(x1), zero], [zero, t(-x1)]])
            c = PuiseuxSeries({Fraction(rng.randint(0, 2)): rng.randint(-2, 2)})
            conj = PuiseuxMatrix([[one, c], [zero, one]])
            a = _mul(_mul(conj, diag), _inv_transvection(conj))
            assert _apply(f, a).known_zero_up_to_trunc()
            res = smith_sval(a)
            assert res.certified
            assert strop_member(d, [-v for v in res.factors])

    def test_entry_equation_witnesses(self):
        # f = a11 - 1: exact zeros [[1, *], [*, *]]; the limit set removes
        # exactly the open negative quadrant, and every witness has
        # -sval outside it
        rng = random.Random(4)
        f = parse("a11 - 1", 2)
        d = strop_hypersurface(f)
        assert d.kind == COMPLEMENT_OF_CONES
        assert d.n_minus == d.n_plus == 0
        t = PuiseuxSeries.t_power
        one = PuiseuxSeries.const(1)
        count = 0
        for _ in range(40):
            entries = [[one, t(Fraction(rng.randint(-3, 3), 2))],
                       [t(Fraction(rng.randint(-3, 3), 2)),
                        t(Fraction(rng.randint(-3, 3), 2),
                          rng.choice([1, 2, -1]))]]
            m = PuiseuxMatrix(entries)
            if m.det().known_zero_up_to_trunc():
                continue
            assert _apply(f, m).known_zero_up_to_trunc()
            res = smith_sval(m)
            assert res.certified
            assert strop_member(d, [-v for v in res.factors])
            count += 1
        assert count >= 20


def _mul(a: PuiseuxMatrix, b: PuiseuxMatrix) -> PuiseuxMatrix:
    n = a.n
    return PuiseuxMatrix([
        [sum((a.entries[i][k] * b.entries[k][j] for k in range(n)),
             PuiseuxSeries.zero(None)) for j in range(n)]
        for i in range(n)
    ])


def _inv_transvection(m: PuiseuxMatrix) -> PuiseuxMatrix:
    # inverse of [[1, c], [0, 1]]
    one = PuiseuxSeries.const(1)
    zero = PuiseuxSeries.const(0)
    return PuiseuxMatrix([[one, -m.entries[0][1]], [zero, one]])


def _apply(f: RegularFunction, m: PuiseuxMatrix) -> PuiseuxSeries:
    """Evaluate a regular function at a Puiseux matrix (exact)."""
    total = PuiseuxSeries.zero(None)
    for mono, coeff in f.terms.items():
        term = PuiseuxSeries.const(coeff)
        for i, j, e in mono:
            for _ in range(e):
                term = term * m.entries[i - 1][j - 1]
        total = total + term
    if f.det_power:
        det = m.det()
        power = PuiseuxSeries.const(1)
        base = det if f.det_power > 0 else det.invert()
        for _ in range(abs(f.det_power)):
            power = power * base
        total = total * power
    return total


class TestLimitExperiment:
    def test_det_minus_one_exact_at_every_rho(self):
        f = parse("det - 1", 2)
        report = limit_experiment(
            f, [0.2, 0.1, 0.05], (-4, 4), 9,
            MembershipOptions(seed=5), f_text="det - 1")
        for row in report.rows:
            assert row.violations == 0
            assert row.coverage_misses == 0
        # grid membership is exactly the anti-diagonal
        for p in report.grid.points:
            expected = "member" if abs(sum(p.x)) < 1e-9 else "non-member"
            assert p.verdict == expected

    def test_example3_violations_vanish(self):
        f = example3()
        report = limit_experiment(
            f, [0.2, 0.1, 0.05], (-8, 8), 17,
            MembershipOptions(seed=6), f_text="example3")
        assert report.rows[-1].violations == 0
        misses = [r.coverage_misses for r in report.rows]
        assert all(m1 >= m2 for m1, m2 in zip(misses, misses[1:]))

    def test_rho_validation(self):
        f = parse("det - 1", 2)
        with pytest.raises(ValueError):
            limit_experiment(f, [0.1, 0.2], (-1, 1), 3)
        with pytest.raises(ValueError):
            limit_experiment(f, [-0.1], (-1, 1), 3)

    def test_ideal_requires_flag(self):
        fs = [parse("det - 1", 2), parse("a11", 2)]
        with pytest.raises(ValueError):
            limit_experiment(fs, [0.1], (-1, 1), 3)
        report = limit_experiment(
            fs, [0.1], (-1, 1), 3, MembershipOptions(seed=7),
            allow_ideal=True)
        assert report.exploratory
        assert report.description is None

    def test_json_roundtrip(self):
        import json

        f = parse("det - 1", 2)
        report = limit_experiment(
            f, [0.1], (-1, 1), 3, MembershipOptions(seed=8))
        data = json.loads(report.to_json())
        assert data["rows"][0]["violations"] == 0
