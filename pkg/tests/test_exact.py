import random
from fractions import Fraction as F

import pytest

from oracles import naive_det, naive_rank
from unitcover.errors import FullRank, InputError
from unitcover.exact import (
    LaurentPoly,
    RatMatrix,
    UniPoly,
    det,
    kernel_basis,
    laurent_det,
    laurent_is_zero,
    laurent_matrix_rank,
    parse_rational,
    poly_gcd,
    poly_kernel_vector,
    primitive_integer_vector,
    rank_of,
)

L = LaurentPoly.monomial
lam = UniPoly.variable()
one = UniPoly.const(1)


def test_parse_rational():
    assert parse_rational("-8/9") == F(-8, 9)
    assert parse_rational("−8/9") == F(-8, 9)  # unicode minus
    assert parse_rational(7) == F(7)
    with pytest.raises(InputError):
        parse_rational(0.5)
    with pytest.raises(InputError):
        parse_rational("1.5")
    with pytest.raises(InputError):
        parse_rational("1/0")


class TestRank:
    def test_identity(self):
        assert rank_of(RatMatrix.from_rows([[1, 0], [0, 1]])) == 2

    def test_proportional_rows(self):
        assert rank_of(RatMatrix.from_rows([[1, 1, 1], [2, 2, 2]])) == 1

    def test_full_rank_rational(self):
        rows = [[1, 1, 1], [2, F(1, 2), 1], [4, F(1, 4), 1]]
        # Independent oracle: det = 3/4 by cofactor expansion.
        assert naive_det(rows) == F(3, 4)
        m = RatMatrix.from_rows(rows)
        assert rank_of(m) == 3
        assert det(m) == F(3, 4)

    def test_empty(self):
        assert rank_of(RatMatrix(0, 0, ())) == 0

    def test_random_rank_matches_oracle(self):
        rng = random.Random(0)
        for _ in range(40):
            rows = rng.randint(1, 4)
            cols = rng.randint(1, 4)
            m = [
                [F(rng.randint(-3, 3), rng.choice([1, 1, 2, 3])) for _ in range(cols)]
                for _ in range(rows)
            ]
            assert rank_of(RatMatrix.from_rows(m)) == naive_rank(m)


class TestKernel:
    def test_identity_trivial(self):
        assert kernel_basis(RatMatrix.from_rows([[1, 0, 0], [0, 1, 0], [0, 0, 1]])) == []

    def test_symmetric_pair(self):
        assert kernel_basis(RatMatrix.from_rows([[1, -1]])) == [(F(1), F(1))]

    def test_hand_solved_system(self):
        # x + y = 0, y + z = 0 forces (1, -1, 1) up to scale.
        basis = kernel_basis(RatMatrix.from_rows([[1, 1, 0], [0, 1, 1]]))
        assert basis == [(F(1), F(-1), F(1))]

    def test_rank_nullity_on_random_matrices(self):
        rng = random.Random(1)
        for _ in range(40):
            rows = rng.randint(1, 4)
            cols = rng.randint(1, 5)
            m = RatMatrix.from_rows(
                [[F(rng.randint(-2, 2)) for _ in range(cols)] for _ in range(rows)]
            )
            basis = kernel_basis(m)
            assert rank_of(m) == cols - len(basis)
            for vec in basis:
                for i in range(rows):
                    assert sum(m.at(i, j) * vec[j] for j in range(cols)) == 0


class TestPolyGcd:
    def test_common_factor(self):
        assert poly_gcd(lam * lam - one, lam - one) == lam - one

    def test_coprime(self):
        assert poly_gcd(lam + UniPoly.const(2), lam + UniPoly.const(3)) == one

    def test_zero_zero(self):
        assert poly_gcd(UniPoly(), UniPoly()).is_zero

    def test_gcd_divides_both(self):
        rng = random.Random(2)
        for _ in range(30):
            p = UniPoly([F(rng.randint(-3, 3)) for _ in range(rng.randint(1, 5))])
            q = UniPoly([F(rng.randint(-3, 3)) for _ in range(rng.randint(1, 5))])
            g = poly_gcd(p, q)
            if g.is_zero:
                assert p.is_zero and q.is_zero
                continue
            for r in (p, q):
                quo, rem = divmod(r, g)
                assert rem.is_zero
                assert quo * g == r


def test_exact_field_arithmetic():
    rng = random.Random(3)
    for _ in range(100):
        a = F(rng.randint(-50, 50), rng.randint(1, 50))
        c = F(rng.randint(-50, 50), rng.randint(1, 50))
        assert (a + c) - c == a


class TestLaurent:
    def test_cancellation_is_zero(self):
        assert laurent_is_zero(L(1, 1) - L(1, 1))

    def test_mixed_powers_nonzero(self):
        assert not laurent_is_zero(L(1, -1) + LaurentPoly.const(1))

    def test_product_expansion(self):
        # Expand (t - 1)(t + 1) by hand: t^2 - 1.
        prod = LaurentPoly.from_unipoly(lam - one) * LaurentPoly.from_unipoly(lam + one)
        assert laurent_is_zero(LaurentPoly.from_unipoly(lam * lam - one) - prod)

    def test_eval_consistency(self):
        p = L(F(3, 2), -2) + L(-1, 1) + LaurentPoly.const(5)
        x = F(2, 3)
        expected = F(3, 2) * x ** -2 + (-1) * x + 5
        assert p.eval(x) == expected

    def test_laurent_det_matches_eval(self):
        rng = random.Random(4)
        for _ in range(20):
            k = rng.randint(1, 3)
            rows = [
                [L(F(rng.randint(-2, 2)), rng.randint(-2, 2)) for _ in range(k)]
                for _ in range(k)
            ]
            d = laurent_det(rows)
            x = F(rng.choice([1, -1, 2, 3]), rng.choice([1, 2]))
            num = naive_det([[e.eval(x) for e in row] for row in rows])
            if d.is_zero:
                assert num == 0
            else:
                assert d.eval(x) == num


class TestPolyKernelVector:
    def test_symmetric(self):
        vec = poly_kernel_vector([[L(1, 1), L(1, 1)]])
        assert vec == [one, -one]

    def test_monomial_balance(self):
        # (t, 1) annihilated by (1, -t); verified by substitution.
        vec = poly_kernel_vector([[L(1, 1), LaurentPoly.const(1)]])
        assert vec == [one, -lam]

    def test_dependent_rows(self):
        vec = poly_kernel_vector([[L(1, 1), LaurentPoly.const(1)], [L(1, 2), L(1, 1)]])
        assert vec == [one, -lam]

    def test_full_rank_raises(self):
        with pytest.raises(FullRank):
            poly_kernel_vector([[L(1, 1), LaurentPoly.const(0)], [LaurentPoly.const(0), L(1, 1)]])

    def test_entries_coprime_and_annihilating(self):
        rng = random.Random(5)
        produced = 0
        for _ in range(40):
            rows = rng.randint(1, 3)
            cols = rows + 1  # guarantees a nontrivial kernel
            matrix = [
                [L(F(rng.randint(-2, 2)), rng.randint(-1, 1)) for _ in range(cols)]
                for _ in range(rows)
            ]
            try:
                vec = poly_kernel_vector(matrix)
            except FullRank:
                continue
            produced += 1
            g = UniPoly()
            for p in vec:
                g = poly_gcd(g, p)
            assert g == one or g.degree == 0
            # annihilation is also asserted inside; re-check here
            for row in matrix:
                acc = LaurentPoly()
                for e, p in zip(row, vec):
                    acc = acc + e * LaurentPoly.from_unipoly(p)
                assert acc.is_zero
        assert produced > 10


def test_laurent_matrix_rank_matches_minor_scan():
    rng = random.Random(6)
    for _ in range(20):
        rows = rng.randint(1, 4)
        cols = rng.randint(1, 4)
        matrix = [
            [L(F(rng.randint(-1, 1)), rng.randint(-1, 1)) for _ in range(cols)]
            for _ in range(rows)
        ]
        r = laurent_matrix_rank(matrix)
        # oracle: largest k with a k x k Laurent minor that is not zero
        import itertools

        best = 0
        for k in range(1, min(rows, cols) + 1):
            for rsel in itertools.combinations(range(rows), k):
                for csel in itertools.combinations(range(cols), k):
                    sub = [[matrix[i][j] for j in csel] for i in rsel]
                    if not laurent_det(sub).is_zero:
                        best = max(best, k)
        assert r == best


def test_primitive_integer_vector():
    assert primitive_integer_vector([F(2, 3), F(-4, 3)]) == (1, -2)
    assert primitive_integer_vector([F(0), F(-5)]) == (0, 1)
    with pytest.raises(ValueError):
        primitive_integer_vector([F(0), F(0)])
