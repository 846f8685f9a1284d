import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import EX1_A, EX1_B, EX1_C, EX2_A, EX2_B, EX2_C, M, random_constraints, random_reciprocal
from tropirank import oracle
from tropirank.errors import (
    DegenerateObjective,
    InfeasibleConstraints,
    NoMixedTerms,
    NotOnFrontier,
    OrderLimitExceeded,
    ShapeError,
)
from tropirank.linsys import tr_det
from tropirank.polyfront import (
    POINT,
    SEGMENT,
    TropPoly2,
    eval_G,
    eval_H,
    expand_tr_poly,
    frontier,
    frontier_unconstrained,
    generator_matrix,
    parametric_matrix,
    poly_bounds,
    sigma_theta,
    upper_envelope,
)
from tropirank.tropcore import TropMatrix, TropScalar, trace

TOL = 1e-9
S = TropScalar.of


def coeffs(p):
    return {k: math.exp(v) for k, v in p.terms.items()}


class TestPoly:
    def test_zero_terms_dropped(self):
        p = TropPoly2({(1, 0): 0.0, (0, 1): -math.inf})
        assert len(p) == 1
        assert p.coeff(0, 1).is_zero

    def test_negative_exponent_rejected(self):
        with pytest.raises(ValueError):
            TropPoly2({(-1, 0): 0.0})

    def test_semiring_ops(self):
        a = TropPoly2.monomial(1, 0, S(2)) + TropPoly2.monomial(0, 1, S(3))
        sq = a * a
        assert sq.coeff(2, 0).close(S(4))
        assert sq.coeff(1, 1).close(S(6))
        assert sq.coeff(0, 2).close(S(9))
        assert (a + a) == a

    def test_evaluate(self):
        p = TropPoly2.monomial(1, 1, S(6))
        assert p.evaluate(S(2), S(3)).close(S(1))

    def test_matrix_power_via_poly_objects_matches_dense(self):
        # Build the symbolic matrix entrywise out of TropPoly2 objects and
        # take traces of its powers; must equal the dense expansion.
        A, B, C = M(EX2_A), M(EX2_B), M(EX2_C)
        n = 4
        base = [
            [
                TropPoly2.monomial(1, 0, A[i, j]) + TropPoly2.monomial(0, 1, B[i, j]) + TropPoly2.monomial(0, 0, C[i, j])
                for j in range(n)
            ]
            for i in range(n)
        ]

        def mul(X, Y):
            return [
                [sum((X[i][k] * Y[k][j] for k in range(n)), TropPoly2()) for j in range(n)]
                for i in range(n)
            ]

        P, total = base, TropPoly2()
        for p in range(1, n + 1):
            if p > 1:
                P = mul(P, base)
            for i in range(n):
                total = total + P[i][i]
        dense = expand_tr_poly(A, B, C)
        assert total.terms.keys() == dense.terms.keys()
        for key, c in dense.terms.items():
            assert total.terms[key] == pytest.approx(c, abs=1e-12)


class TestExpansion:
    def test_example1(self):
        p = expand_tr_poly(M(EX1_A), M(EX1_B), M(EX1_C))
        want = {(1, 0): 1, (2, 0): 1, (0, 1): 3, (0, 2): 1, (1, 1): 6}
        got = coeffs(p)
        assert got.keys() == want.keys()
        for k in want:
            assert got[k] == pytest.approx(want[k], rel=1e-12)

    def test_example2_mixed_and_low_order(self):
        p = expand_tr_poly(M(EX2_A), M(EX2_B), M(EX2_C))
        want = {(1, 0): 3, (2, 0): 9, (0, 1): 2, (1, 1): 6, (2, 1): 8, (1, 2): 8, (3, 1): 24, (2, 2): 24, (1, 3): 24}
        got = coeffs(p)
        for k, v in want.items():
            assert got[k] == pytest.approx(v, rel=1e-12)
        mixed = {(m, l) for m, l, _ in p.mixed()}
        assert mixed == {(1, 1), (2, 1), (1, 2), (3, 1), (2, 2), (1, 3)}

    def test_bounds_example2(self):
        ls, mt = poly_bounds(expand_tr_poly(M(EX2_A), M(EX2_B), M(EX2_C)))
        assert ls.close(S(3)) and mt.close(S(2))

    def test_sigma_theta_example2(self):
        A, B, C = M(EX2_A), M(EX2_B), M(EX2_C)
        assert sigma_theta(A, C).close(oracle.enum_sigma_theta(A, C), 1e-12)
        assert sigma_theta(B, C).close(oracle.enum_sigma_theta(B, C), 1e-12)

    def test_mixed_agree_with_word_enumeration(self):
        A, B, C = M(EX2_A), M(EX2_B), M(EX2_C)
        p = expand_tr_poly(A, B, C)
        brute = oracle.enum_mixed_coefficients(A, B, C)
        assert {(m, l) for m, l, _ in p.mixed()} == set(brute)
        for m, l, c in p.mixed():
            assert c == pytest.approx(brute[(m, l)], abs=1e-12)

    def test_order_limit(self):
        Z = TropMatrix.zeros(3)
        with pytest.raises(OrderLimitExceeded):
            expand_tr_poly(Z, Z, Z, max_order=2)

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            expand_tr_poly(M(EX1_A), M(EX2_B), M(EX1_C))


class TestGH:
    def test_example2_H(self):
        p = expand_tr_poly(M(EX2_A), M(EX2_B), M(EX2_C))
        assert eval_H(p, S(2)).close(S(3))

    def test_no_mixed(self):
        p = TropPoly2.monomial(1, 0, S(1))
        with pytest.raises(NoMixedTerms):
            eval_G(p, S(1))
        with pytest.raises(NoMixedTerms):
            eval_H(p, S(1))

    def test_zero_argument(self):
        p = TropPoly2.monomial(1, 1, S(1))
        with pytest.raises(ValueError):
            eval_G(p, TropScalar.zero())


class TestFrontier:
    def test_example1_segment(self):
        f = frontier(M(EX1_A), M(EX1_B), M(EX1_C))
        assert f.kind == SEGMENT
        assert f.alpha_min.close(S(1)) and f.alpha_max.close(S(2))
        assert f.beta_at_alpha_min.close(S(6)) and f.beta_at_alpha_max.close(S(3))
        (piece,) = f.pieces
        assert (piece.m, piece.l, piece.exponent) == (1, 1, F(-1))
        for a in np.linspace(1, 2, 11):
            assert f.beta(TropScalar(math.log(a))).value == pytest.approx(6 / a, rel=1e-12)

    def test_example2_point(self):
        f = frontier(M(EX2_A), M(EX2_B), M(EX2_C))
        assert f.kind == POINT and f.is_point
        assert f.alpha_min.close(S(3)) and f.beta_at_alpha_max.close(S(2))
        assert f.pieces == ()

    def test_example2_unconstrained(self):
        f = frontier_unconstrained(M(EX2_A), M(EX2_B))
        assert f.kind == SEGMENT
        assert f.alpha_min.close(S(2)) and f.alpha_max.close(S(3))
        assert f.beta_at_alpha_min.close(S(3)) and f.beta_at_alpha_max.close(S(2))
        p1, p2 = f.pieces
        assert (p1.m, p1.l, p2.m, p2.l) == (3, 1, 1, 3)
        assert p1.coeff.close(S(24)) and p2.coeff.close(S(24))
        knot = 24 ** 0.25
        assert p1.alpha_hi.value == pytest.approx(knot, rel=1e-12)
        assert p2.alpha_lo.value == pytest.approx(knot, rel=1e-12)

    def test_beta_outside_range(self):
        f = frontier(M(EX1_A), M(EX1_B), M(EX1_C))
        with pytest.raises(NotOnFrontier, match=r"alpha must lie in \[1, 2\]"):
            f.beta(S(5))

    def test_infeasible(self):
        C = M([[0, 2], [1, 0]])
        with pytest.raises(InfeasibleConstraints):
            frontier(M(EX1_A), M(EX1_B), C)

    def test_degenerate(self):
        with pytest.raises(DegenerateObjective):
            frontier(M(EX1_C), M(EX1_B), M(EX1_C))

    def test_sampling(self):
        f = frontier(M(EX1_A), M(EX1_B), M(EX1_C))
        pts = f.sample(3)
        assert [round(a.value, 9) for a, _ in pts] == [1, round(math.sqrt(2), 9), 2]
        assert pts[-1][1].close(S(3))
        point = frontier(M(EX2_A), M(EX2_B), M(EX2_C))
        assert len(point.sample(10)) == 1
        with pytest.raises(ValueError):
            f.sample(0)

    def test_generators_example1(self):
        A, B, C = M(EX1_A), M(EX1_B), M(EX1_C)
        S1 = generator_matrix(A, B, C, S(1), S(6)).star
        S2 = generator_matrix(A, B, C, S(2), S(3)).star
        assert S1.column(0).allclose(S1.column(0).scale(S1[0, 0].inverse()))
        # both columns are multiples of the documented generators
        from tropirank.tropcore import TropVector, collinear
        assert all(collinear(c, TropVector.from_values([1, F(1, 2)])) for c in S1.columns())
        assert all(collinear(c, TropVector.from_values([1, 1])) for c in S2.columns())

    def test_generator_off_frontier(self):
        with pytest.raises(NotOnFrontier):
            generator_matrix(M(EX1_A), M(EX1_B), M(EX1_C), S(1), S(5))


def test_envelope_single_line_tiles_range():
    pieces = upper_envelope([(1, 1, 0.0)], -1.0, 1.0)
    assert pieces == [(-1.0, 1.0, 1, 1, 0.0)]


def test_envelope_drops_tangent_line():
    c = math.log(24)
    lines = [(3, 1, c), (2, 2, c), (1, 3, c)]
    pieces = upper_envelope(lines, math.log(2), math.log(3))
    assert [(m, l) for _, _, m, l, _ in pieces] == [(3, 1), (1, 3)]


# --- invariants on random problems -----------------------------------------

seeds = st.integers(min_value=0, max_value=2**32 - 1)


@settings(max_examples=40, deadline=None)
@given(n=st.integers(2, 5), seed=seeds)
def test_random_frontier_invariants(n, seed):
    rng = np.random.default_rng(seed)
    A, B = random_reciprocal(rng, n), random_reciprocal(rng, n)
    C = random_constraints(rng, n)
    f = frontier(A, B, C)
    assert f.alpha_min.logval <= f.alpha_max.logval + TOL
    # trace polynomial value at frontier points is exactly one
    for a, b in f.sample(7):
        t = tr_det(parametric_matrix(A, B, C, a, b))
        assert abs(t.logval) <= 1e-8
        assert f.poly.evaluate(a, b).close(t, 1e-8)
    if not f.is_point:
        # beta decreases strictly along the curve and G inverts H
        pts = f.sample(9)
        betas = [b.logval for _, b in pts]
        assert all(x > y - TOL for x, y in zip(betas, betas[1:]))
        for a, b in pts:
            assert eval_G(f.poly, a).close(b, 1e-8)
            assert eval_H(f.poly, b).close(a, 1e-8)


@settings(max_examples=40, deadline=None)
@given(n=st.integers(2, 5), seed=seeds)
def test_expansion_matches_direct_trace_evaluation(n, seed):
    rng = np.random.default_rng(seed)
    A, B = random_reciprocal(rng, n), random_reciprocal(rng, n)
    C = random_constraints(rng, n)
    p = expand_tr_poly(A, B, C)
    for _ in range(5):
        a, b = TropScalar(float(rng.uniform(-2, 2))), TropScalar(float(rng.uniform(-2, 2)))
        assert p.evaluate(a, b).close(tr_det(parametric_matrix(A, B, C, a, b)), 1e-9)


@settings(max_examples=30, deadline=None)
@given(n=st.integers(2, 4), seed=seeds)
def test_pure_coefficients_match_powers(n, seed):
    rng = np.random.default_rng(seed)
    A, B = random_reciprocal(rng, n), random_reciprocal(rng, n)
    p = expand_tr_poly(A, B, TropMatrix.zeros(n))
    P = TropMatrix.identity(n)
    for m in range(1, n + 1):
        P = P @ A
        assert p.coeff(m, 0).close(trace(P), 1e-12)
