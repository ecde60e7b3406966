import cmath
import math

import numpy as np
import pytest

from diospec.errors import SingularConfiguration
from diospec.hermite import PermutationId, hermite_zeros, permuted_polynomial
from diospec.matrices import (
    KIND_M1,
    KIND_M2,
    build_m1,
    build_m2,
    expected_determinant,
    expected_spectrum,
    expected_trace,
    permutation_similarity_check,
    spectrum_check,
    w_table,
)
from diospec.polynomials import MonicPolynomial, poly_from_zeros, roots

SQRT2 = math.sqrt(2.0)
SQRT32 = math.sqrt(1.5)


def closed_form_m1_n2(z1, z2):
    """Hand-expanded 2x2 matrix with spectrum {1, 2} for coefficients from the
    two Hermite zeros +-1/sqrt(2) (so the coefficient-gap square is 2)."""
    d = z1 - z2
    return np.array([
        [1.5 - (1 - z1 * z2) / (2 * d), -(1 - z1 ** 2) / (2 * d)],
        [(1 - z2 ** 2) / (2 * d), 1.5 + (1 - z1 * z2) / (2 * d)],
    ])


def closed_form_m2_n2(z1, z2):
    """Matching 2x2 closed form with spectrum {1, 4} (coefficient-gap fourth
    power is 4, coupling weight 6, hence the 3/2 factors)."""
    d = z1 - z2
    return np.array([
        [2.5 - 1.5 * (1 - z1 * z2) / d, -1.5 * (1 - z1 ** 2) / d],
        [1.5 * (1 - z2 ** 2) / d, 2.5 + 1.5 * (1 - z1 * z2) / d],
    ])


def zeros_n2(mu):
    """Zeros of z^2 + (-1)^mu (1 - z)/sqrt(2), by the closed formula."""
    sign = (-1.0) ** mu
    root = cmath.sqrt(1 - sign * 4 * SQRT2)
    return np.array([(sign + root) / (2 * SQRT2), (sign - root) / (2 * SQRT2)])


def mu_coefficients_n2(mu):
    sign = (-1.0) ** mu
    return np.array([-sign / SQRT2, sign / SQRT2])


class TestWTable:
    def test_first_row_is_minus_one(self):
        rng = np.random.default_rng(0)
        z = rng.standard_normal(5) + 1j * rng.standard_normal(5)
        table = w_table(z).entries
        np.testing.assert_allclose(table[0], -1.0, atol=1e-15)

    def test_n3_cyclic_structure(self):
        rng = np.random.default_rng(1)
        z = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        table = w_table(z).entries
        for m in range(3):
            a, b = z[(m + 1) % 3], z[(m + 2) % 3]
            assert table[1, m] == pytest.approx(a + b, abs=1e-14)
            assert table[2, m] == pytest.approx(-a * b, abs=1e-14)

    def test_n2_entries(self):
        a, b = 0.7 + 0.2j, -1.1
        table = w_table(np.array([a, b])).entries
        assert table[1, 0] == pytest.approx(b)
        assert table[1, 1] == pytest.approx(a)


class TestBuildM1:
    def test_matches_closed_form_n2(self):
        for mu in (1, 2):
            z = zeros_n2(mu)
            built = build_m1(z, mu_coefficients_n2(mu)).entries
            reference = closed_form_m1_n2(z[0], z[1])
            scale = np.abs(reference).max()
            assert np.abs(built - reference).max() <= 1e-12 * scale

    def test_trace_is_three_for_any_zero_pair(self):
        rng = np.random.default_rng(2)
        for _ in range(5):
            z = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            built = build_m1(z, mu_coefficients_n2(1)).entries
            assert np.trace(built) == pytest.approx(3.0, abs=1e-12)

    def test_matches_fd_jacobian_n4(self):
        from diospec.dynamics import fd_jacobian

        h = hermite_zeros(4)
        perm = PermutationId.from_rank(4, 7)
        poly = permuted_polynomial(h, perm)
        z = roots(poly)
        built = build_m1(z, poly.coefficients).entries
        jac = -1j * fd_jacobian("zeta1", z.zeros, 1e-6)
        assert np.abs(built - jac).max() <= 1e-5 * np.abs(built).max()

    def test_separation_metrics_recorded(self):
        z = zeros_n2(1)
        matrix = build_m1(z, mu_coefficients_n2(1))
        assert matrix.zero_separation == pytest.approx(abs(z[0] - z[1]))
        assert matrix.coeff_separation == pytest.approx(SQRT2)
        assert not matrix.conditioning_warning

    def test_singular_configurations_rejected(self):
        with pytest.raises(SingularConfiguration):
            build_m1([1.0, 1.0], [0.5, -0.5])
        with pytest.raises(SingularConfiguration):
            build_m1([1.0, -1.0], [0.5, 0.5])
        with pytest.raises(SingularConfiguration):
            build_m1([1.0, -1.0], [0.5, -0.5, 0.1])


class TestBuildM2:
    def test_matches_closed_form_n2(self):
        for mu in (1, 2):
            z = zeros_n2(mu)
            built = build_m2(z, mu_coefficients_n2(mu)).entries
            reference = closed_form_m2_n2(z[0], z[1])
            scale = np.abs(reference).max()
            assert np.abs(built - reference).max() <= 1e-12 * scale

    def test_trace_is_five_for_any_zero_pair(self):
        rng = np.random.default_rng(3)
        for _ in range(5):
            z = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            built = build_m2(z, mu_coefficients_n2(1)).entries
            assert np.trace(built) == pytest.approx(5.0, abs=1e-12)

    def test_four_decimal_zero_table_still_gives_exact_spectrum(self):
        # mu=1 zeros quoted to 4 decimals; spectrum must come out {1, 4, 9}
        # well inside 1e-3
        z = np.array([0.7090, -0.3545 - 1.2656j, -0.3545 + 1.2656j])
        c = np.array([0.0, SQRT32, -SQRT32])
        report = spectrum_check(build_m2(z, c), tol=1e-3)
        assert report.passed
        assert report.max_deviation < 1e-3
        lam = np.sort(report.eigenvalues.real)
        np.testing.assert_allclose(lam, [1.0, 4.0, 9.0], atol=1e-3)


class TestSpectrumCheck:
    def test_n2_mu1_integer_pair(self):
        z = zeros_n2(1)
        report = spectrum_check(build_m1(z, mu_coefficients_n2(1)))
        assert report.passed
        assert report.expected == (1, 2)
        assert report.max_deviation < 1e-10

    def test_n3_all_orderings_m1(self, ordering_sweep):
        for record in ordering_sweep(3):
            matrix = build_m1(record.zeros, record.poly.coefficients,
                              source_perm=record.perm)
            report = spectrum_check(matrix)
            assert report.passed, f"word {record.perm.word}"
            assert report.expected == (1, 2, 3)

    def test_hand_built_diagonal(self):
        from diospec.matrices import DiophantineMatrix

        matrix = DiophantineMatrix(KIND_M1, 2, np.diag([1.0, 2.0]), None,
                                   1.0, 1.0)
        report = spectrum_check(matrix)
        assert report.passed
        assert report.max_deviation < 1e-14

    def test_tolerance_validation(self):
        matrix = build_m1(zeros_n2(1), mu_coefficients_n2(1))
        with pytest.raises(ValueError):
            spectrum_check(matrix, tol=0.0)


class TestExpectedValues:
    @pytest.mark.parametrize("n", range(2, 8))
    def test_formulas(self, n):
        assert expected_trace(KIND_M1, n) == n * (n + 1) / 2
        assert expected_trace(KIND_M2, n) == n * (n + 1) * (2 * n + 1) / 6
        assert expected_determinant(KIND_M1, n) == math.factorial(n)
        assert expected_determinant(KIND_M2, n) == math.factorial(n) ** 2
        np.testing.assert_array_equal(expected_spectrum(KIND_M2, n),
                                      expected_spectrum(KIND_M1, n) ** 2)


class TestPermutationSimilarity:
    def test_double_swap_is_identity(self):
        rng = np.random.default_rng(4)
        z = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        c = hermite_zeros(4).zeros
        swapped = z.copy()
        swapped[[0, 2]] = swapped[[2, 0]]
        twice = swapped.copy()
        twice[[0, 2]] = twice[[2, 0]]
        np.testing.assert_array_equal(twice, z)
        first = build_m1(z, c).entries
        second = build_m1(twice, c).entries
        assert np.abs(first - second).max() == 0.0

    def test_n2_swap(self):
        z = zeros_n2(1)
        deviation = permutation_similarity_check(z, mu_coefficients_n2(1),
                                                 KIND_M1, (1, 2))
        assert deviation < 1e-12

    def test_n4_random_zeros_both_kinds(self):
        rng = np.random.default_rng(5)
        z = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        c = hermite_zeros(4).zeros
        for kind in (KIND_M1, KIND_M2):
            for swap in ((1, 2), (1, 4), (2, 3), (3, 4)):
                assert permutation_similarity_check(z, c, kind, swap) < 1e-10

    def test_swap_validation(self):
        z = zeros_n2(1)
        with pytest.raises(ValueError):
            permutation_similarity_check(z, mu_coefficients_n2(1), KIND_M1, (2, 1))


class TestMatrixRelations:
    def test_square_of_m1_differs_for_generic_zeros(self):
        # For generic zeros (coefficients from the Vieta map, not Hermite
        # zeros) the fourth-power matrix is not the square of the
        # second-power one, even though it is for Hermite-seeded data.
        rng = np.random.default_rng(6)
        z = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        c = poly_from_zeros(z).coefficients
        m1 = build_m1(z, c).entries
        m2 = build_m2(z, c).entries
        assert np.abs(m2 - m1 @ m1).max() > 1e-3

    def test_square_coincides_for_hermite_seeded_pair(self):
        # Sanity record of the special structure: with Hermite-zero
        # coefficients the two constructions satisfy M2 = M1 @ M1.
        z = zeros_n2(1)
        c = mu_coefficients_n2(1)
        m1 = build_m1(z, c).entries
        m2 = build_m2(z, c).entries
        assert np.abs(m2 - m1 @ m1).max() < 1e-12
