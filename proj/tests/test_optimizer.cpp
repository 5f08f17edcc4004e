#include <gtest/gtest.h>

#include <cmath>

#include "qcomm/optimizer.hpp"
#include "test_support.hpp"

namespace qcomm {
namespace {

using test::frob_dist;

double vec_dist(const CVector& a, const CVector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += std::norm(a.entries[i] - b.entries[i]);
    return std::sqrt(s);
}

// --- operators ------------------------------------------------------------

TEST(OperatorTest, MAImplementsLeftAction) {
    Rng rng(1);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 1 + t % 5;
        const CMatrix a = random_matrix(n, rng), b = random_matrix(n, rng);
        const double q = rng.uniform(-4.0, 4.0);
        const double resid = vec_dist(build_MA(a, q) * vectorize(b), vectorize(q_commutator(a, b, q)));
        EXPECT_LE(resid, 1e-12 * std::sqrt(frobenius_norm_sq(b)) * std::max(1.0, std::sqrt(frobenius_norm_sq(a))));
    }
}

TEST(OperatorTest, NBImplementsRightAction) {
    Rng rng(2);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 1 + t % 5;
        const CMatrix a = random_matrix(n, rng), b = random_matrix(n, rng);
        const double q = rng.uniform(-4.0, 4.0);
        const double resid = vec_dist(build_NB(b, q) * vectorize(a), vectorize(q_commutator(a, b, q)));
        EXPECT_LE(resid, 1e-12 * std::sqrt(frobenius_norm_sq(a)) * std::max(1.0, std::sqrt(frobenius_norm_sq(b))));
    }
}

TEST(OperatorTest, QZeroIsIdentityKronA) {
    Rng rng(3);
    const CMatrix a = random_matrix(3, rng);
    const CMatrix m = build_MA(a, 0.0);
    EXPECT_EQ(m, kron(CMatrix::identity(3), a));
    EXPECT_NEAR(operator_norm(m), operator_norm(a), 1e-12);
}

// --- half steps -----------------------------------------------------------

TEST(HalfStepTest, BestBMatchesOperatorNorm) {
    Rng rng(4);
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = 2 + t % 3;
        const CMatrix a = random_matrix(n, rng);
        const double q = rng.uniform(-2.0, 2.0);
        const HalfStep hs = best_B_given_A(a, q);
        const double op = operator_norm(build_MA(a, q));
        EXPECT_NEAR(hs.value, op * op / frobenius_norm_sq(a), 1e-10 * hs.value);
        EXPECT_NEAR(frobenius_norm_sq(hs.m), 1.0, 1e-14);
        EXPECT_NEAR(ratio(a, hs.m, q), hs.value, 1e-10 * hs.value);
    }
}

TEST(HalfStepTest, BestBIsFirstOrderStationary) {
    Rng rng(5);
    for (double q : {-1.0, 0.5, 2.0}) {
        const CMatrix a = random_matrix(3, rng);
        const HalfStep hs = best_B_given_A(a, q);
        for (int k = 0; k < 100; ++k) {
            CMatrix dir = random_matrix(3, rng);
            dir *= Complex(1e-4 / std::sqrt(frobenius_norm_sq(dir)));
            EXPECT_LE(ratio(a, hs.m + dir, q), hs.value + 1e-8);
        }
    }
}

TEST(HalfStepTest, BestAGeneralBeatsRandomCandidates) {
    Rng rng(6);
    const CMatrix b = random_matrix(3, rng);
    const double q = 1.7;
    const HalfStep hs = best_A_given_B(b, q, MatrixClass::General);
    EXPECT_NEAR(ratio(hs.m, b, q), hs.value, 1e-10 * hs.value);
    for (int k = 0; k < 300; ++k) EXPECT_LE(ratio(random_matrix(3, rng), b, q), hs.value + 1e-12);
}

TEST(HalfStepTest, BestATracelessStaysTracelessAndIsOptimal) {
    Rng rng(7);
    for (std::size_t n : {2u, 3u, 4u}) {
        const CMatrix b = random_matrix(n, rng);
        const double q = -0.8;
        const HalfStep hs = best_A_given_B(b, q, MatrixClass::TracelessA);
        EXPECT_LE(std::abs(hs.m.trace()), 1e-10);
        EXPECT_NEAR(ratio(hs.m, b, q), hs.value, 1e-10 * hs.value);
        for (int k = 0; k < 300; ++k) EXPECT_LE(ratio(random_traceless(n, rng), b, q), hs.value + 1e-12);
    }
}

TEST(HalfStepTest, BestANormalIsDiagonalAndOptimal) {
    Rng rng(8);
    const CMatrix b = random_matrix(4, rng);
    const double q = 0.6;
    const HalfStep hs = best_A_given_B(b, q, MatrixClass::NormalA);
    EXPECT_TRUE(hs.m.is_diagonal());
    EXPECT_NEAR(ratio(hs.m, b, q), hs.value, 1e-10 * hs.value);
    for (int k = 0; k < 300; ++k) EXPECT_LE(ratio(random_normal_diag(4, rng), b, q), hs.value + 1e-12);
}

TEST(HalfStepTest, DegenerateBIsReported) {
    // B proportional to I commutes with everything: N_B vanishes at q = 1.
    EXPECT_THROW(best_A_given_B(CMatrix::identity(3), 1.0, MatrixClass::General), NumericalError);
    EXPECT_THROW(best_A_given_B(CMatrix::identity(3), 1.0, MatrixClass::TracelessA), NumericalError);
    EXPECT_THROW(best_A_given_B(CMatrix(3), 1.0, MatrixClass::General), std::invalid_argument);
    EXPECT_THROW(best_B_given_A(CMatrix(3), 1.0), std::invalid_argument);
}

// --- ascent ---------------------------------------------------------------

TEST(AscentTest, MonotoneInEveryClass) {
    Rng rng(9);
    for (MatrixClass cls : {MatrixClass::General, MatrixClass::TracelessA, MatrixClass::NormalA}) {
        for (int t = 0; t < 10; ++t) {
            const std::size_t n = 2 + t % 3;
            const double q = rng.uniform(-3.0, 3.0);
            const auto trace = ascend(sample_class(n, cls, rng), q, cls, 200, 1e-11);
            for (std::size_t k = 1; k < trace.history.size(); ++k) {
                EXPECT_GE(trace.history[k], trace.history[k - 1] - 1e-12) << to_string(cls) << " q=" << q;
            }
            EXPECT_NEAR(trace.ratio, trace.history.back(), 1e-10 * trace.ratio);
        }
    }
}

TEST(AscentTest, ClassPreservedAtEveryAlternation) {
    Rng rng(10);
    CMatrix a = project_to_class(random_matrix(4, rng), MatrixClass::TracelessA);
    CMatrix d = random_normal_diag(4, rng);
    for (int k = 0; k < 30; ++k) {
        a = best_A_given_B(best_B_given_A(a, -1.3).m, -1.3, MatrixClass::TracelessA).m;
        EXPECT_LE(std::abs(a.trace()), 1e-10 * std::sqrt(frobenius_norm_sq(a)));
        d = best_A_given_B(best_B_given_A(d, 0.7).m, 0.7, MatrixClass::NormalA).m;
        EXPECT_TRUE(d.is_diagonal());
    }
}

TEST(AscentTest, ScaleInvariance) {
    Rng rng(11);
    const CMatrix a0 = random_matrix(3, rng);
    const double reference = ascend(a0, 1.4, MatrixClass::General, 500, 1e-11).ratio;
    for (double c : {1e-3, -2.0, 1e5}) {
        EXPECT_NEAR(ascend(Complex(c) * a0, 1.4, MatrixClass::General, 500, 1e-11).ratio, reference, 1e-10);
    }
}

// --- maximize -------------------------------------------------------------

OptConfig config(int n, double q, MatrixClass cls, int restarts = 16) {
    OptConfig c;
    c.n = n;
    c.q = q;
    c.matrix_class = cls;
    c.restarts = restarts;
    c.seed = 42;
    return c;
}

TEST(MaximizeTest, AntiCommutatorReachesFour) {
    EXPECT_NEAR(maximize_ratio(config(2, -1.0, MatrixClass::General)).best_ratio, 4.0, 1e-6);
}

TEST(MaximizeTest, CommutatorReachesTwo) {
    EXPECT_NEAR(maximize_ratio(config(2, 1.0, MatrixClass::General)).best_ratio, 2.0, 1e-6);
}

TEST(MaximizeTest, GeneralPositiveQBeatsFFamilyPeak) {
    const auto r = maximize_ratio(config(2, 2.0, MatrixClass::General));
    EXPECT_GE(r.best_ratio, f_at_tmax(2.0) - 1e-6);
    EXPECT_NEAR(ratio(r.a, r.b, 2.0), r.best_ratio, 1e-10 * r.best_ratio);
}

TEST(MaximizeTest, NormalClassMatchesProvedBound) {
    for (double q : {0.5, 2.0}) {
        const auto r = maximize_ratio(config(3, q, MatrixClass::NormalA));
        EXPECT_NEAR(r.best_ratio, 1 + q * q, 1e-8);
        EXPECT_TRUE(r.a.is_diagonal());
    }
}

TEST(MaximizeTest, TracelessANegativeQExceedsDiagonalCounterexample) {
    // The diagonal pair gives g(4)(1-q)^2 = 7/3 at q = -1, but with only A
    // traceless the pair A = diag(3,-1,-1,-1), B = E11 already reaches 3.
    const auto w = diag_counterexample(4, -1.0);
    const double hand = ratio(w.a, CMatrix::unit(4, 0, 0), -1.0);
    EXPECT_NEAR(hand, 3.0, 1e-14);

    const auto r = maximize_ratio(config(4, -1.0, MatrixClass::TracelessA));
    EXPECT_GE(r.best_ratio, 7.0 / 3.0 - 1e-5);
    EXPECT_GE(r.best_ratio, hand - 1e-8);
    EXPECT_LE(std::abs(r.a.trace()), 1e-10);
}

TEST(MaximizeTest, Reproducible) {
    OptConfig c = config(3, 0.7, MatrixClass::TracelessA, 8);
    const auto r1 = maximize_ratio(c);
    const auto r2 = maximize_ratio(c);
    c.threads = 4;
    const auto r3 = maximize_ratio(c);
    for (const auto* r : {&r2, &r3}) {
        EXPECT_EQ(r1.best_ratio, r->best_ratio);
        EXPECT_EQ(r1.a, r->a);
        EXPECT_EQ(r1.b, r->b);
        EXPECT_EQ(r1.restart_index, r->restart_index);
        EXPECT_EQ(r1.alternations_used, r->alternations_used);
        EXPECT_EQ(r1.converged_restarts, r->converged_restarts);
    }
}

TEST(MaximizeTest, ConfigValidation) {
    OptConfig c;
    c.restarts = 0;
    EXPECT_THROW(maximize_ratio(c), std::invalid_argument);
    c = OptConfig{};
    c.max_alternations = 0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = OptConfig{};
    c.ratio_tol = 0.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = OptConfig{};
    c.n = 1;
    c.matrix_class = MatrixClass::TracelessA;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = OptConfig{};
    c.n = 17;
    EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(MaximizeTest, ScalarCaseIsExact) {
    const auto r = maximize_ratio(config(1, 0.3, MatrixClass::General, 3));
    EXPECT_NEAR(r.best_ratio, 0.49, 1e-14);
}

// --- witnesses ------------------------------------------------------------

TEST(WitnessSeedTest, ClassWitnessRespectsClass) {
    for (int n = 2; n <= 5; ++n)
        for (double q : {-2.0, -1.0, -0.2, 0.0, 0.5, 1.0, 2.0}) {
            const auto tw = class_witness(n, q, MatrixClass::TracelessA);
            ASSERT_TRUE(tw);
            EXPECT_LE(std::abs(tw->a.trace()), 1e-14);
            const auto nw = class_witness(n, q, MatrixClass::NormalA);
            ASSERT_TRUE(nw);
            EXPECT_TRUE(nw->a.is_diagonal());
            for (const auto& w : {*tw, *nw, *class_witness(n, q, MatrixClass::General)}) {
                EXPECT_NEAR(ratio(w.a, w.b, q), w.expected_ratio, 1e-10 * w.expected_ratio) << w.label;
            }
        }
    EXPECT_FALSE(class_witness(1, 0.5, MatrixClass::TracelessA));
}

TEST(WitnessSeedTest, NeverBelowWitness) {
    for (MatrixClass cls : {MatrixClass::General, MatrixClass::TracelessA, MatrixClass::NormalA})
        for (int n : {2, 4})
            for (double q : {-2.0, -1.0, 0.5, 2.0}) {
                const auto w = class_witness(n, q, cls);
                const auto r = seed_with_witness(config(n, q, cls, 2));
                EXPECT_GE(r.best_ratio, ratio(w->a, w->b, q) - 1e-10) << to_string(cls) << " n=" << n << " q=" << q;
            }
}

// --- sweeps ---------------------------------------------------------------

TEST(SweepTest, GridInclusive) {
    const auto qs = q_grid(-3.0, 0.0, 31);
    ASSERT_EQ(qs.size(), 31u);
    EXPECT_EQ(qs.front(), -3.0);
    EXPECT_EQ(qs.back(), 0.0);
    EXPECT_NEAR(qs[10], -2.0, 1e-15);
    EXPECT_EQ(q_grid(1.5, 9.0, 1), std::vector<double>{1.5});
    EXPECT_THROW(q_grid(0.0, 1.0, 0), std::invalid_argument);
}

TEST(SweepTest, RowsOrderedAndConsistent) {
    const std::vector<double> qs{0.5, -1.0, -2.0};
    const auto rows = sweep_q(2, qs, MatrixClass::General, config(2, 0.0, MatrixClass::General, 4));
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0].q, -2.0);
    EXPECT_EQ(rows[2].q, 0.5);
    for (const auto& r : rows) {
        EXPECT_EQ(r.gap, r.max_ratio - r.conjectured_bound);
        EXPECT_EQ(r.n, 2);
    }
    EXPECT_NEAR(rows[0].max_ratio, 9.0, 1e-8);
    EXPECT_EQ(rows[0].conjectured_bound, 9.0);
    EXPECT_EQ(rows[2].conjectured_bound, 1.25);
}

TEST(SweepTest, ReferenceBoundPerClass) {
    EXPECT_EQ(reference_bound(3, -1.0, MatrixClass::General).coefficient, 4.0);
    EXPECT_EQ(reference_bound(3, 2.0, MatrixClass::General).regime, BoundRegime::NormalEitherPositiveQ);
    EXPECT_EQ(reference_bound(3, 2.0, MatrixClass::NormalA).coefficient, 5.0);
    EXPECT_NEAR(reference_bound(4, -1.0, MatrixClass::TracelessA).coefficient, 7.0 / 3.0, 1e-15);
}

TEST(ClassNameTest, RoundTrip) {
    for (MatrixClass c : {MatrixClass::General, MatrixClass::TracelessA, MatrixClass::NormalA}) {
        EXPECT_EQ(parse_matrix_class(to_string(c)), c);
    }
    EXPECT_FALSE(parse_matrix_class("hermitian"));
}

}  // namespace
}  // namespace qcomm
