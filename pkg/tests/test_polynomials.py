"""Unit tests for exact multivariate polynomials and determinants."""

import random
from fractions import Fraction

import pytest

from tropical_heights.polynomials import (MultiPoly, RingMatrix,
                                          det_fraction_free, fraction_det,
                                          poly_add, poly_eval, poly_mul)

VARS = ("e1", "e2", "e3")


def rand_poly(rng, variables=VARS, max_terms=5, max_exp=3, max_coeff=6):
    p = MultiPoly.zero(variables)
    for _ in range(rng.randint(0, max_terms)):
        exps = tuple(rng.randint(0, max_exp) for _ in variables)
        c = Fraction(rng.randint(-max_coeff, max_coeff), rng.randint(1, 4))
        p = p + MultiPoly(variables, {exps: c})
    return p


def test_constructors_and_zero():
    z = MultiPoly.zero(VARS)
    assert z.is_zero()
    assert z.degree() == -1
    one = MultiPoly.constant(VARS, 1)
    assert str(one) == "1"
    y2 = MultiPoly.variable(VARS, "e2")
    assert str(y2) == "Y_e2"
    assert y2.degree() == 1
    with pytest.raises(ValueError):
        MultiPoly.variable(VARS, "e9")


def test_no_zero_terms_stored():
    p = MultiPoly(VARS, {(1, 0, 0): Fraction(1)})
    q = p - p
    assert q.is_zero()
    assert q.terms == {}


def test_arithmetic_matches_reference_eval():
    rng = random.Random(11)
    point = {v: Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for v in VARS}
    for _ in range(60):
        p = rand_poly(rng)
        q = rand_poly(rng)
        assert poly_eval(poly_add(p, q), point) == p.evaluate(point) + q.evaluate(point)
        assert poly_eval(poly_mul(p, q), point) == p.evaluate(point) * q.evaluate(point)
        assert (p - q).evaluate(point) == p.evaluate(point) - q.evaluate(point)
        assert (p ** 2).evaluate(point) == p.evaluate(point) ** 2


def test_pow_and_scalar_ops():
    p = MultiPoly.variable(VARS, "e1") + 2
    assert (p ** 0) == MultiPoly.constant(VARS, 1)
    assert (3 * p) == p * 3
    assert str(2 - p) == "-Y_e1"


def test_homogeneity_and_degree():
    p = MultiPoly(VARS, {(2, 0, 0): Fraction(1), (1, 1, 0): Fraction(-3)})
    assert p.is_homogeneous()
    assert p.is_homogeneous(2)
    assert not (p + 1).is_homogeneous()
    assert p.degree() == 2


def test_canonical_string_order():
    # graded lexicographic, descending; coefficient formatting
    p = MultiPoly(VARS, {
        (0, 0, 0): Fraction(-1, 2),
        (1, 0, 0): Fraction(1),
        (0, 2, 0): Fraction(3),
        (1, 1, 0): Fraction(-1),
    })
    assert str(p) == "-Y_e1*Y_e2 + 3*Y_e2^2 + Y_e1 - 1/2"


def test_parse_roundtrip():
    rng = random.Random(5)
    for _ in range(80):
        p = rand_poly(rng)
        assert MultiPoly.from_string(str(p), VARS) == p


def test_parse_explicit_forms():
    p = MultiPoly.from_string("Y_e1^2*Y_e3 - 5/3*Y_e2 + 7", VARS)
    assert p.coefficient((2, 0, 1)) == 1
    assert p.coefficient((0, 1, 0)) == Fraction(-5, 3)
    assert p.coefficient((0, 0, 0)) == 7
    with pytest.raises(ValueError):
        MultiPoly.from_string("Y_e1 + unknown", VARS)


def test_exact_divide():
    rng = random.Random(23)
    for _ in range(40):
        q = rand_poly(rng)
        d = rand_poly(rng)
        if d.is_zero():
            continue
        prod = q * d
        assert prod.exact_divide(d) == q
    p = MultiPoly.variable(VARS, "e1") + 1
    with pytest.raises(ValueError):
        (p + 1).exact_divide(MultiPoly.variable(VARS, "e2"))


def test_mixed_ring_rejected():
    p = MultiPoly.variable(("a",), "a")
    q = MultiPoly.variable(("b",), "b")
    with pytest.raises(ValueError):
        _ = p + q


def det_reference(rows):
    """Leibniz-formula determinant for small polynomial matrices."""
    import itertools
    n = len(rows)
    variables = rows[0][0].variables
    total = MultiPoly.zero(variables)
    for perm in itertools.permutations(range(n)):
        sign = 1
        seen = list(perm)
        for i in range(n):
            for j in range(i + 1, n):
                if seen[i] > seen[j]:
                    sign = -sign
        term = MultiPoly.constant(variables, sign)
        for i in range(n):
            term = term * rows[i][perm[i]]
        total = total + term
    return total


def test_det_small_matches_leibniz():
    rng = random.Random(7)
    for n in (1, 2, 3, 4):
        for _ in range(8):
            rows = [[rand_poly(rng, max_terms=2, max_exp=1, max_coeff=3)
                     for _ in range(n)] for _ in range(n)]
            m = RingMatrix(rows)
            assert m.det() == det_reference(rows)


def test_det_large_uses_bareiss_and_agrees():
    # 6x6 crosses the Bareiss threshold; compare against the cofactor route
    # via a doubled cross-check on a structured matrix with known value.
    variables = tuple(f"e{i}" for i in range(1, 7))
    ys = [MultiPoly.variable(variables, v) for v in variables]
    rows = [[ys[i] if i == j else MultiPoly.constant(variables, 1)
             for j in range(6)] for i in range(6)]
    m = RingMatrix(rows)
    d = m.det()
    # reference: evaluate at distinct primes and compare with numeric det
    point = {v: Fraction(p) for v, p in zip(variables, (2, 3, 5, 7, 11, 13))}
    num = fraction_det([[rows[i][j].evaluate(point) for j in range(6)]
                        for i in range(6)])
    assert d.evaluate(point) == num


def test_det_fraction_free_zero_and_identity():
    variables = ("e1",)
    zero = MultiPoly.zero(variables)
    one = MultiPoly.constant(variables, 1)
    assert det_fraction_free([[zero]]).is_zero()
    assert det_fraction_free([[one, zero], [zero, one]]) == one


def test_fraction_det_exact():
    rng = random.Random(3)
    for n in (1, 2, 3, 5):
        for _ in range(10):
            rows = [[Fraction(rng.randint(-6, 6), rng.randint(1, 4))
                     for _ in range(n)] for _ in range(n)]
            got = fraction_det(rows)
            import itertools
            ref = Fraction(0)
            for perm in itertools.permutations(range(n)):
                sign = 1
                for i in range(n):
                    for j in range(i + 1, n):
                        if perm[i] > perm[j]:
                            sign = -sign
                term = Fraction(sign)
                for i in range(n):
                    term *= rows[i][perm[i]]
                ref += term
            assert got == ref
