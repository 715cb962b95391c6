"""Recurrence evaluation, Poincare roots, ratios, Christoffel sums."""

import math

import numpy as np
import pytest

from jacobispec import (
    CoefficientSequence,
    FamilySpec,
    InputError,
    christoffel_mass,
    eval_polys,
    make_family,
    poincare_roots,
    ratio_sequence,
    truncate,
    eigen_tridiag,
)

CHEB = FamilySpec("chebyshev", {"a": 1.0, "b": 0.0})


def random_sequence(rng, n_needed=0, compact=False):
    p = rng.uniform(0.5, 1.5)
    sa = rng.uniform(0.3, 1.5)
    sb = rng.uniform(-0.8, 0.8)
    if compact:
        return CoefficientSequence.from_rule(
            lambda n: sb / (n + 2.0) ** p, lambda n: sa / (n + 1.0) ** p,
            declared_limits=(0.0, 0.0))
    return CoefficientSequence.from_rule(
        lambda n: sb + 0.1 / (n + 1.0), lambda n: sa + 0.2 / (n + 1.0),
        declared_limits=(sa, sb))


class TestEvalPolys:
    def test_initial_conditions(self):
        c = make_family(CHEB)
        tr = eval_polys(c, 0.37, 5)
        assert tr.values[0] == 1.0
        assert tr.numerators[0] == 0.0
        assert tr.numerators[1] == 1.0

    def test_chebyshev_at_one(self):
        tr = eval_polys(make_family(CHEB), 1.0, 4)
        # U_n(1) = n + 1
        assert tr.values[2] == pytest.approx(3.0, abs=1e-12)
        assert tr.values[4] == pytest.approx(5.0, abs=1e-12)

    def test_chebyshev_first_degree(self):
        x = math.cos(math.pi / 4)
        tr = eval_polys(make_family(CHEB), x, 2)
        assert tr.values[1] == pytest.approx(math.sqrt(2.0), rel=1e-15)

    def test_recurrence_residual(self):
        rng = np.random.default_rng(11)
        c = random_sequence(rng)
        for x in (0.3, 2.5, 1.2 + 0.7j):
            tr = eval_polys(c, x, 40)
            p = tr.values
            for n in range(1, 39):
                lhs = x * p[n]
                rhs = (c.offdiag(n + 1) * p[n + 1] + c.diag(n) * p[n]
                       + c.offdiag(n) * p[n - 1])
                assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))

    def test_wronskian_constant(self):
        # a_{n+1} (p_{n+1} q_n - p_n q_{n+1}) == -a_1 for every n; under
        # rescaling the whole trace carries a common factor exp(-scale_log),
        # so the identity reads W_n = -a_1 exp(-2 scale_log)
        # the products p_{n+1} q_n cancel to O(1), so rounding noise scales
        # with |p_n q_n| eps; points inside or just off the essential
        # interval keep the solutions O(1) and the check meaningful
        rng = np.random.default_rng(5)
        for _ in range(10):
            c = random_sequence(rng)
            a_lim, b_lim = c.declared_limits
            x_real = b_lim + 2.0 * a_lim * rng.uniform(-0.9, 0.9)
            x_cplx = complex(b_lim + 2.0 * a_lim * rng.uniform(-0.7, 0.7),
                             a_lim * rng.uniform(0.02, 0.1))
            for x in (x_real, x_cplx):
                tr = eval_polys(c, x, 40)
                p, q = tr.values, tr.numerators
                ref = -c.offdiag(1) * math.exp(-2.0 * tr.scale_log)
                for n in range(0, 40):
                    w = c.offdiag(n + 1) * (p[n + 1] * q[n] - p[n] * q[n + 1])
                    assert abs(w - ref) <= 1e-10 * abs(ref)

    def test_rescaling_far_from_spectrum(self):
        tr = eval_polys(make_family(CHEB), 3.0, 4000)
        assert tr.scale_log > 0
        assert np.all(np.isfinite(tr.values))
        # true magnitude log: log|p_n| + scale_log grows linearly in n
        true_log = math.log(abs(tr.values[-1])) + tr.scale_log
        assert true_log == pytest.approx(4000 * math.log(3 + math.sqrt(8)), rel=1e-3)

    def test_csv_rows(self):
        tr = eval_polys(make_family(CHEB), 0.5, 3)
        rows = tr.csv_rows()
        assert len(rows) == 4
        assert rows[0][:2] == (0, 1.0)


class TestPoincareRoots:
    def test_inside_interval_conjugate_roots(self):
        r = poincare_roots(1.0, 0.0, 0.0)
        assert r.equal_modulus
        assert {complex(r.xi1), complex(r.xi2)} == {1j, -1j}

    def test_outside_interval(self):
        r = poincare_roots(1.0, 0.0, 2.0)
        assert r.xi1 == pytest.approx(2.0 + math.sqrt(3.0), rel=1e-14)
        assert r.xi2 == pytest.approx(2.0 - math.sqrt(3.0), rel=1e-14)
        assert not r.equal_modulus

    def test_boundary_double_root(self):
        r = poincare_roots(2.0, 1.0, 3.0)
        assert r.boundary
        assert r.xi1 == pytest.approx(1.0)
        assert r.xi2 == pytest.approx(1.0)

    def test_product_is_one(self):
        rng = np.random.default_rng(9)
        for _ in range(50):
            a = rng.uniform(0.1, 3.0)
            b = rng.uniform(-2.0, 2.0)
            x = rng.uniform(-5.0, 5.0)
            r = poincare_roots(a, b, x)
            assert complex(r.xi1) * complex(r.xi2) == pytest.approx(1.0, abs=1e-12)

    def test_rejects_nonpositive_a(self):
        with pytest.raises(InputError):
            poincare_roots(0.0, 0.0, 1.0)


class TestRatioSequence:
    def test_chebyshev_converges_to_dominant_root(self):
        rep = ratio_sequence(make_family(CHEB), 2.0, 100, tol=1e-12)
        assert rep.status == "converged"
        assert rep.limit == pytest.approx(2.0 + math.sqrt(3.0), abs=1e-10)
        assert rep.residual < 1e-10

    def test_limit_solves_characteristic_equation(self):
        # 2 x xi = a xi^2 + 2 b xi + a, with (a, b) from the declared limits;
        # geometric coefficient convergence makes the ratios converge
        # geometrically too (harmonic perturbations would need huge n)
        rng = np.random.default_rng(21)
        for _ in range(5):
            sa = rng.uniform(0.3, 1.5)
            sb = rng.uniform(-0.8, 0.8)
            c = CoefficientSequence.from_rule(
                lambda n, v=sb: v + 0.1 * 0.9 ** n,
                lambda n, v=sa: v + 0.2 * 0.9 ** n,
                declared_limits=(sa, sb))
            a, b = 2 * sa, sb
            x = b + a + rng.uniform(0.5, 2.0)
            rep = ratio_sequence(c, x, 800, tol=1e-11)
            assert rep.status == "converged"
            xi = rep.limit
            resid = abs(2 * x * xi - (a * xi ** 2 + 2 * b * xi + a))
            assert resid < 1e-8
            assert rep.residual < 1e-8

    def test_oscillation_inside_interval(self):
        rep = ratio_sequence(make_family(CHEB), 0.5, 200, tol=1e-10)
        assert rep.status == "none"
        assert rep.limit is None

    def test_boundary_flag(self):
        rep = ratio_sequence(make_family(CHEB), 1.0, 100)
        assert rep.status == "boundary"

    def test_zero_denominator_flagged(self):
        # p_1(0) = 0 for a zero-diagonal operator
        rep = ratio_sequence(make_family(CHEB), 0.0, 50)
        assert np.isnan(rep.ratios[0])


class TestChristoffelMass:
    def test_initial_sum(self):
        rep = christoffel_mass(make_family(CHEB), 0.3, 0)
        assert rep.sums[0] == 1.0
        assert rep.mass_estimates[0] == 1.0

    def test_monotonicity(self):
        rep = christoffel_mass(make_family(CHEB), 0.77, 200)
        assert np.all(np.diff(rep.log_sums) >= 0)
        assert np.all(np.diff(rep.mass_estimates) <= 1e-15)

    def test_chebyshev_gauss_weight(self):
        # at an eigenvalue of the N-truncation, 1/S_{N-1} is the quadrature
        # weight (2/(N+1)) (1 - x^2)
        n = 30
        c = make_family(CHEB)
        w, _ = eigen_tridiag(truncate(c, n))
        for j in (0, 7, n - 1):
            x = float(w[j])
            rep = christoffel_mass(c, x, n - 1)
            expected = (2.0 / (n + 1)) * (1.0 - x * x)
            assert rep.mass_estimates[-1] == pytest.approx(expected, rel=1e-10)

    def test_divergence_at_accumulation_point(self):
        c = make_family(FamilySpec("natvig", {"lam": 1.0, "mu": 2.0}))
        rep = christoffel_mass(c, 2.0, 4000)
        assert rep.sums[4000] > 1.5 * rep.sums[2000]

    def test_overflow_safe(self):
        rep = christoffel_mass(make_family(CHEB), 10.0, 10000)
        assert np.all(np.isfinite(rep.log_sums))
        assert rep.sums[-1] == math.inf
        assert rep.mass_estimates[-1] == 0.0

    def test_complex_rejected(self):
        with pytest.raises(InputError):
            christoffel_mass(make_family(CHEB), 1 + 1j, 10)

    def test_matches_direct_sum_small_n(self):
        c = make_family(FamilySpec("lommel", {"nu": 1.0}))
        x = 0.3
        tr = eval_polys(c, x, 50)
        direct = np.cumsum(tr.values ** 2)
        rep = christoffel_mass(c, x, 50)
        assert np.allclose(rep.sums, direct, rtol=1e-12)
