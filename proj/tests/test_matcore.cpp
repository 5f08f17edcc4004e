#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qcomm/matcore.hpp"
#include "test_support.hpp"

namespace qcomm {
namespace {

using test::frob_dist;
using test::random_unitary;

const Complex I(0.0, 1.0);

CMatrix sigma1() { return CMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}}); }
CMatrix sigma2() { return CMatrix::from_rows({{0.0, -I}, {I, 0.0}}); }
CMatrix sigma3() { return CMatrix::from_rows({{1.0, 0.0}, {0.0, -1.0}}); }

TEST(CMatrixTest, RejectsZeroDimensionAndRaggedRows) {
    EXPECT_THROW(CMatrix(0), std::invalid_argument);
    EXPECT_THROW(CMatrix::from_rows({{1.0, 2.0}, {3.0}}), std::invalid_argument);
    EXPECT_THROW(CMatrix::from_rows({{1.0, 2.0}}), std::invalid_argument);
    EXPECT_THROW(CMatrix::from_rows({{NAN}}), std::invalid_argument);
}

TEST(CMatrixTest, ProductMatchesNaive) {
    Rng rng(11);
    for (std::size_t n : {1u, 2u, 5u}) {
        const CMatrix a = random_matrix(n, rng), b = random_matrix(n, rng);
        EXPECT_LT(frob_dist(a * b, test::naive_product(a, b)), 1e-13);
    }
}

// --- q_commutator ---------------------------------------------------------

TEST(QCommutatorTest, SelfCommutatorOfProjector) {
    const CMatrix p = CMatrix::unit(2, 0, 0);
    const CMatrix expected = CMatrix::from_rows({{0.5, 0.0}, {0.0, 0.0}});
    EXPECT_EQ(q_commutator(p, p, 0.5), expected);
}

TEST(QCommutatorTest, PaperPairAtQ2) {
    const CMatrix a = CMatrix::from_rows({{2.0, 8.0}, {0.0, -1.0}});
    const CMatrix b = CMatrix::from_rows({{2.0, 0.0}, {-8.0, -1.0}});
    EXPECT_DOUBLE_EQ(frobenius_norm_sq(q_commutator(a, b, 2.0)), 23953.0);
}

TEST(QCommutatorTest, PauliPair) {
    for (double q : {-2.0, -1.0, 0.0, 0.3, 1.0, 4.5}) {
        CMatrix expected = sigma3();
        expected *= I * (1.0 + q);
        EXPECT_LT(frob_dist(q_commutator(sigma1(), sigma2(), q), expected), 1e-15) << "q=" << q;
    }
}

TEST(QCommutatorTest, DimensionMismatchThrows) {
    EXPECT_THROW(q_commutator(CMatrix(2), CMatrix(3), 1.0), std::invalid_argument);
}

TEST(QCommutatorTest, Bilinearity) {
    Rng rng(5);
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 1 + t % 5;
        const CMatrix a = random_matrix(n, rng), b = random_matrix(n, rng), c = random_matrix(n, rng);
        const double q = rng.uniform(-3.0, 3.0);
        const Complex s = rng.complex_gaussian();
        CMatrix scaled = q_commutator(a, b, q);
        scaled *= s;
        EXPECT_LT(frob_dist(q_commutator(s * a, b, q), scaled), 1e-12);
        EXPECT_LT(frob_dist(q_commutator(a, b + c, q), q_commutator(a, b, q) + q_commutator(a, c, q)), 1e-12);
    }
}

// --- norms ----------------------------------------------------------------

TEST(NormTest, FrobeniusGolden) {
    EXPECT_EQ(frobenius_norm_sq(CMatrix::identity(3)), 3.0);
    EXPECT_EQ(frobenius_norm_sq(CMatrix::from_rows({{2.0, 8.0}, {0.0, -1.0}})), 69.0);
}

TEST(NormTest, FrobeniusMatchesSingularValues) {
    Rng rng(7);
    for (std::size_t n : {1u, 2u, 3u, 5u, 8u}) {
        const CMatrix a = random_matrix(n, rng);
        const auto s = singular_values(a).values;
        const double sum = std::accumulate(s.begin(), s.end(), 0.0, [](double acc, double x) { return acc + x * x; });
        EXPECT_NEAR(sum, frobenius_norm_sq(a), 1e-10 * frobenius_norm_sq(a)) << "n=" << n;
    }
}

TEST(NormTest, SingularValuesOfDiagonal) {
    const std::vector<Complex> d{1.0, -2.0, 0.0};
    const auto s = singular_values(CMatrix::diagonal(d)).values;
    ASSERT_EQ(s.size(), 3u);
    EXPECT_NEAR(s[0], 2.0, 1e-14);
    EXPECT_NEAR(s[1], 1.0, 1e-14);
    EXPECT_NEAR(s[2], 0.0, 1e-14);
}

TEST(NormTest, SingularValuesOfAntiDiagonal) {
    const Complex a(0.3, -1.2), b(2.0, 0.5);
    const auto s = singular_values(CMatrix::from_rows({{0.0, a}, {b, 0.0}})).values;
    EXPECT_NEAR(s[0], std::max(std::abs(a), std::abs(b)), 1e-14);
    EXPECT_NEAR(s[1], std::min(std::abs(a), std::abs(b)), 1e-14);
}

TEST(NormTest, SingularValuesSortedNonnegative) {
    Rng rng(3);
    const auto s = singular_values(random_matrix(6, rng)).values;
    EXPECT_TRUE(std::is_sorted(s.rbegin(), s.rend()));
    EXPECT_GE(s.back(), 0.0);
}

TEST(NormTest, KyFanGolden) {
    for (double q : {0.5, 2.0, 3.0}) {
        std::vector<Complex> d{1.0, -q, 0.0, 0.0};
        EXPECT_NEAR(kyfan22_norm_sq(CMatrix::diagonal(d)), 1.0 + q * q, 1e-12);
    }
    EXPECT_NEAR(kyfan22_norm_sq(CMatrix::identity(4)), 2.0, 1e-14);
    EXPECT_NEAR(kyfan22_norm_sq(CMatrix::from_rows({{Complex(3.0, 4.0)}})), 25.0, 1e-12);
    EXPECT_NEAR(operator_norm(CMatrix::from_rows({{Complex(3.0, 4.0)}})), 5.0, 1e-14);
}

TEST(NormTest, NormOrderingProperty) {
    Rng rng(17);
    for (int t = 0; t < 200; ++t) {
        const CMatrix a = random_matrix(1 + t % 6, rng);
        const double op = operator_norm(a);
        const double kf = kyfan22_norm_sq(a);
        const double fr = frobenius_norm_sq(a);
        EXPECT_LE(op * op, kf * (1 + 1e-12));
        EXPECT_LE(kf, fr * (1 + 1e-12));
    }
}

TEST(NormTest, UnitaryInvariance) {
    Rng rng(23);
    for (std::size_t n : {2u, 3u, 6u}) {
        const CMatrix a = random_matrix(n, rng);
        const CMatrix u = random_unitary(n, rng), v = random_unitary(n, rng);
        EXPECT_NEAR(frobenius_norm_sq(u * a * v), frobenius_norm_sq(a), 1e-10 * frobenius_norm_sq(a));
    }
}

// --- eigensolver ----------------------------------------------------------

TEST(HermitianEigenTest, RecoversKnownSpectrum) {
    Rng rng(29);
    for (std::size_t n : {1u, 2u, 4u, 9u, 16u, 25u}) {
        const CMatrix v = random_unitary(n, rng);
        std::vector<Complex> lambda(n);
        std::vector<double> expected(n);
        for (std::size_t i = 0; i < n; ++i) {
            expected[i] = rng.uniform(-5.0, 5.0);
            lambda[i] = expected[i];
        }
        CMatrix hs = v * CMatrix::diagonal(lambda) * v.adjoint();
        // mirror the upper triangle so the input is exactly Hermitian
        for (std::size_t i = 0; i < n; ++i) {
            hs(i, i) = hs(i, i).real();
            for (std::size_t j = i + 1; j < n; ++j) hs(j, i) = std::conj(hs(i, j));
        }
        const auto eig = hermitian_eigen(hs);
        std::sort(expected.rbegin(), expected.rend());
        for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(eig.values[i], expected[i], 1e-9 * 5.0) << "n=" << n;

        std::vector<Complex> got(eig.values.begin(), eig.values.end());
        const CMatrix rebuilt = eig.vectors * CMatrix::diagonal(got) * eig.vectors.adjoint();
        EXPECT_LE(frob_dist(rebuilt, hs), 1e-9 * std::sqrt(frobenius_norm_sq(hs)));
        EXPECT_LE(frob_dist(eig.vectors.adjoint() * eig.vectors, CMatrix::identity(n)), 1e-12 * n);
    }
}

TEST(HermitianEigenTest, DegenerateAndZero) {
    const auto zero = hermitian_eigen(CMatrix(3));
    for (double v : zero.values) EXPECT_EQ(v, 0.0);
    const auto id = hermitian_eigen(CMatrix::identity(4));
    for (double v : id.values) EXPECT_EQ(v, 1.0);
}

TEST(HermitianEigenTest, RejectsNonHermitian) {
    EXPECT_THROW(hermitian_eigen(CMatrix::from_rows({{1.0, 2.0}, {0.0, 1.0}})), std::invalid_argument);
}

TEST(HermitianEigenTest, NonConvergenceCarriesIterationCount) {
    const CMatrix h = CMatrix::from_rows({{1.0, 0.5}, {0.5, 2.0}});
    try {
        hermitian_eigen(h, {1e-13, 0});
        FAIL() << "expected NumericalError";
    } catch (const NumericalError& e) {
        EXPECT_EQ(e.iterations(), 0);
    }
}

// --- kron / vectorization -------------------------------------------------

TEST(KronTest, BlockConvention) {
    Rng rng(31);
    const CMatrix x = random_matrix(2, rng), y = random_matrix(3, rng);
    const CMatrix k = kron(x, y);
    ASSERT_EQ(k.n(), 6u);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t a = 0; a < 3; ++a)
                for (std::size_t b = 0; b < 3; ++b) EXPECT_EQ(k(i * 3 + a, j * 3 + b), x(i, j) * y(a, b));
}

TEST(VectorizeTest, ColumnStackingGolden) {
    const CVector v = vectorize(CMatrix::from_rows({{1.0, 2.0}, {3.0, 4.0}}));
    const std::vector<Complex> expected{1.0, 3.0, 2.0, 4.0};
    EXPECT_EQ(v.entries, expected);
}

TEST(VectorizeTest, IsometryAndRoundTrip) {
    Rng rng(37);
    for (std::size_t n = 1; n <= 6; ++n) {
        const CMatrix b = random_matrix(n, rng);
        const CVector v = vectorize(b);
        EXPECT_EQ(v.dim(), n * n);
        EXPECT_NEAR(v.norm_sq(), frobenius_norm_sq(b), 1e-15 * frobenius_norm_sq(b));
        EXPECT_EQ(devectorize(v, n), b);
    }
    EXPECT_THROW(devectorize(CVector{std::vector<Complex>(5)}, 2), std::invalid_argument);
}

// --- sampling -------------------------------------------------------------

TEST(SamplingTest, Reproducible) {
    Rng a(99), b(99);
    EXPECT_EQ(random_matrix(4, a), random_matrix(4, b));
    Rng s1 = Rng::stream(5, 3), s2 = Rng::stream(5, 3), s3 = Rng::stream(5, 4);
    const CMatrix m1 = random_matrix(3, s1);
    EXPECT_EQ(m1, random_matrix(3, s2));
    EXPECT_NE(m1, random_matrix(3, s3));
}

TEST(SamplingTest, ClassConstraints) {
    Rng rng(41);
    for (std::size_t n = 1; n <= 6; ++n) {
        const CMatrix t = random_traceless(n, rng);
        EXPECT_LE(std::abs(t.trace()), 1e-14 * std::sqrt(frobenius_norm_sq(t)) + 1e-300);
        EXPECT_TRUE(random_normal_diag(n, rng).is_diagonal());
    }
}

}  // namespace
}  // namespace qcomm
