from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cremona_links.algebra import CycNum, OMEGA, ONE, ZERO, SIXTH_ROOTS
from cremona_links.exact import (
    BinForm, Poly, cmat, cvec, cyc_univariate_roots, eigenspaces_sixth_roots,
    integer_kernel_saturated, kernel, mat_identity, mat_inverse, mat_mul,
    rational_poly_gcd, rational_roots, smith_normal_form, subspace_intersection,
)


def F(x):
    return Fraction(x)


class TestLinearAlgebra:
    def test_kernel_simple(self):
        m = cmat([[1, 1, 0], [0, 0, 1]])
        (v,) = kernel(m)
        assert v[2] == ZERO and v[0] == -v[1]

    def test_inverse(self):
        m = cmat([[1, 2], [3, 4]])
        inv = mat_inverse(m)
        assert mat_mul(m, inv) == mat_identity(2)

    def test_eigenspaces_of_threecycle(self):
        # 3-cycle on coordinates: eigenvalues 1, w, w^2
        m = cmat([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
        spaces = eigenspaces_sixth_roots(m)
        assert set(spaces) == {ONE, OMEGA, OMEGA * OMEGA}
        assert all(len(b) == 1 for b in spaces.values())

    def test_subspace_intersection(self):
        b1 = [cvec([1, 0, 0]), cvec([0, 1, 0])]
        b2 = [cvec([0, 1, 0]), cvec([0, 0, 1])]
        inter = subspace_intersection(b1, b2)
        assert len(inter) == 1
        v = inter[0]
        assert v[0] == ZERO and v[2] == ZERO

    def test_eigen_requires_finite_order(self):
        m = cmat([[1, 1], [0, 1]])  # unipotent, infinite order
        with pytest.raises(AssertionError):
            eigenspaces_sixth_roots(m)


class TestSmith:
    @given(st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3),
                    min_size=1, max_size=4))
    @settings(max_examples=60)
    def test_snf_decomposition(self, rows):
        u, d, v = smith_normal_form(rows)
        # U * rows * V == D
        def matmul(a, b):
            return [[sum(a[i][k] * b[k][j] for k in range(len(b)))
                     for j in range(len(b[0]))] for i in range(len(a))]
        assert matmul(matmul(u, rows), v) == d
        # diagonal, nonnegative, divisibility chain
        diag = [d[i][i] for i in range(min(len(d), len(d[0])))]
        for i in range(len(d)):
            for j in range(len(d[0])):
                if i != j:
                    assert d[i][j] == 0
        nz = [x for x in diag if x != 0]
        for a, b in zip(nz, nz[1:]):
            assert b % a == 0

    def test_integer_kernel(self):
        # x + y + z = 0 over Z: rank-2 saturated kernel
        k = integer_kernel_saturated([[1, 1, 1]])
        assert len(k) == 2
        for v in k:
            assert sum(v) == 0


class TestPoly:
    def test_eval_and_mul(self):
        x = Poly.variable(2, 0)
        y = Poly.variable(2, 1)
        f = x * x + y.scale(3)
        assert f.eval([2, 5]) == CycNum.of(19)

    def test_compose_linear(self):
        x = Poly.variable(2, 0)
        y = Poly.variable(2, 1)
        f = x * y
        m = cmat([[0, 1], [1, 0]])  # swap
        assert f.compose_linear(m).terms == f.terms

    def test_derivative(self):
        x = Poly.variable(1, 0)
        f = x * x * x
        assert f.derivative(0).eval([2]) == CycNum.of(12)

    def test_restrict_line(self):
        # f = v0^2 - v1^2 on the line s*(1,0) + t*(0,1): s^2 - t^2
        v0, v1 = Poly.variable(2, 0), Poly.variable(2, 1)
        f = v0 * v0 - v1 * v1
        bf = f.restrict_line(cvec([1, 0]), cvec([0, 1]))
        res = bf.roots()
        assert res.complete
        assert set(res.roots) == {(ONE, ONE), (ONE, -ONE)}


class TestRationalRoots:
    def test_gcd(self):
        # gcd((s-1)(s-2), (s-1)(s-3)) = s-1
        a = [F(2), F(-3), F(1)]
        b = [F(3), F(-4), F(1)]
        g = rational_poly_gcd(a, b)
        assert g == [F(-1), F(1)]

    def test_rational_roots(self):
        # 6s^3 - 11s^2 + 6s - 1 = (s-1)(2s-1)(3s-1)
        roots = rational_roots([F(-1), F(6), F(-11), F(6)])
        assert set(roots) == {Fraction(1), Fraction(1, 2), Fraction(1, 3)}


class TestCycRoots:
    def test_linear(self):
        res = cyc_univariate_roots([CycNum.of(3), CycNum.of(-2)])
        assert res.complete and res.roots == ((CycNum.of(Fraction(3, 2)), ONE),)

    def test_quadratic_with_omega_roots(self):
        # s^2 + s + 1 = 0: roots w, w^2
        res = cyc_univariate_roots([ONE, ONE, ONE])
        assert res.complete
        assert {r[0] for r in res.roots} == {OMEGA, OMEGA * OMEGA}

    def test_quadratic_no_roots_certified(self):
        # s^2 - 2 has no roots in Q(w); certified complete, empty
        res = cyc_univariate_roots([CycNum.of(-2), ZERO, ONE])
        assert res.complete and res.roots == ()

    def test_cubic_full_factorization(self):
        # s^3 - s = s(s-1)(s+1)
        res = cyc_univariate_roots([ZERO, CycNum.of(-1), ZERO, ONE])
        assert res.complete
        assert {r[0] for r in res.roots} == {ZERO, ONE, -ONE}

    def test_cubic_unit_roots(self):
        # s^3 - 1 = 0: all three cube roots of unity
        res = cyc_univariate_roots([CycNum.of(-1), ZERO, ZERO, ONE])
        assert res.complete
        assert {r[0] for r in res.roots} == {ONE, OMEGA, OMEGA * OMEGA}

    def test_cubic_unresolved(self):
        # s^3 - 2: no roots in Q(w), but we cannot certify that; unresolved
        res = cyc_univariate_roots([CycNum.of(-2), ZERO, ZERO, ONE])
        assert not res.complete
        assert res.roots == ()

    def test_binform_root_at_infinity(self):
        # s*t: roots (1,0) and (0,1)
        bf = BinForm((ZERO, ONE, ZERO))
        res = bf.roots()
        assert res.complete
        assert set(res.roots) == {(ONE, ZERO), (ZERO, ONE)}

    @given(st.sampled_from(SIXTH_ROOTS), st.fractions(min_value=-5, max_value=5,
                                                      max_denominator=6))
    @settings(max_examples=40)
    def test_cubic_detects_unit_multiples(self, unit, r):
        # (s - unit*r) * (s^2 + 1-ish quadratic): root must be found
        root = unit * CycNum.of(r)
        # p(s) = (s - root)(s^2 + s + 2)
        c = [(-root) * CycNum.of(2),
             CycNum.of(2) - root,
             ONE - root,
             ONE]
        res = cyc_univariate_roots(c)
        assert any(s == root for s, t in res.roots)
