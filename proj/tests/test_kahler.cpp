#include "jetcurv/kahler.hpp"
#include "jetcurv/registry.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace jetcurv;
using testing_support::random_points;

namespace {

/// |z|^2 + 0.2 |z1|^4 + 0.1 |z1|^2 |z2|^2 + 0.05 (z1^3 zb1 + z1 zb1^3), scaled by lambda.
PotentialSpec quartic(double lambda) {
    PotentialSpec s;
    s.kind = PotentialKind::Polynomial;
    s.n = 2;
    s.radius = 1.0;
    s.terms = {{{1, 0}, {1, 0}, lambda},       {{0, 1}, {0, 1}, lambda},
               {{2, 0}, {2, 0}, 0.2 * lambda}, {{1, 1}, {1, 1}, 0.1 * lambda},
               {{3, 0}, {1, 0}, 0.05 * lambda}, {{1, 0}, {3, 0}, 0.05 * lambda}};
    return s;
}

Point pt(Complex a) { return Point::Constant(1, a); }

} // namespace

TEST(Metric, FubiniStudyExamples) {
    const auto m0 = metric_at(eval_jet(fubini_study(1), pt(0.0), 2));
    EXPECT_NEAR(std::abs(m0.g_lower(0, 0) - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(m0.g_upper(0, 0) - 1.0), 0.0, 1e-15);

    const Point z = pt(std::polar(1.0, 0.7));
    PotentialSpec wide = fubini_study(1, 2.0);
    const auto m1 = metric_at(eval_jet(wide, z, 2));
    EXPECT_NEAR(std::abs(m1.g_lower(0, 0) - 0.25), 0.0, 1e-14);
    const auto fd = fd_jet(scalar_function(wide), z, 2);
    EXPECT_NEAR(std::abs(fd.d({0}, {0}) - 0.25), 0.0, 1e-6);
}

TEST(Metric, EuclideanIdentity) {
    for (const auto& z : random_points(3, 0.9, 4, 1)) {
        const auto m = metric_at(eval_jet(euclidean(3), z, 2));
        EXPECT_LT(max_abs(m.g_lower - CMatrix::Identity(3, 3)), 1e-15);
    }
}

TEST(Metric, InverseTransposeAndPositivity) {
    for (const auto& spec : registry(3, 4)) {
        for (const auto& z : random_points(3, testing_support::kSafeRadius, 4, 9)) {
            const auto m = metric_at(eval_jet(spec, z, 2));
            EXPECT_LT(max_abs(m.g_lower - m.g_lower.adjoint()), 1e-15);
            EXPECT_LT(max_abs(m.g_upper.transpose() * m.g_lower - CMatrix::Identity(3, 3)), 1e-12);
            Eigen::SelfAdjointEigenSolver<CMatrix> es(m.g_lower);
            EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
        }
    }
}

TEST(Metric, RejectsIndefinite) {
    PotentialSpec s;
    s.kind = PotentialKind::Polynomial;
    s.n = 1;
    s.terms = {{{1}, {1}, -1.0}};
    try {
        metric_at(eval_jet(s, pt(0.1), 2));
        FAIL() << "expected NotKahler";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotKahler);
    }
}

TEST(Riemann, Examples) {
    const auto flat = riemann_at(eval_jet(euclidean(2), Point::Constant(2, Complex(0.3, -0.1)), 4));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) EXPECT_EQ(flat(i, j, k, l), Complex(0.0));

    const auto fs = riemann_at(eval_jet(fubini_study(1), pt(0.0), 4));
    EXPECT_NEAR(std::abs(fs(0, 0, 0, 0) - 2.0), 0.0, 1e-14);

    Point z(2);
    z << 0.2, Complex(0.0, 0.1);
    const auto jet = eval_jet(hyperbolic(2), z, 4);
    const auto m = metric_at(jet);
    const auto r = riemann_at(jet);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) {
                    const auto& g = m.g_lower;
                    const Complex rhs = -1.0 * (g(i, j) * g(k, l) + g(i, l) * g(k, j));
                    EXPECT_NEAR(std::abs(r(i, j, k, l) - rhs), 0.0, 1e-8);
                }
}

TEST(Riemann, KahlerSymmetries) {
    for (const auto& spec : registry(2, 8)) {
        for (const auto& z : random_points(2, testing_support::kSafeRadius, 5, 77)) {
            const auto r = riemann_at(eval_jet(spec, z, 4));
            EXPECT_LT(r.symmetry_defect(), 1e-10) << to_string(spec.kind);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    for (int k = 0; k < 2; ++k)
                        for (int l = 0; l < 2; ++l) {
                            EXPECT_NEAR(std::abs(r(i, j, k, l) - r(k, j, i, l)), 0.0, 1e-10);
                            EXPECT_NEAR(std::abs(r(i, j, k, l) - r(i, l, k, j)), 0.0, 1e-10);
                            EXPECT_NEAR(std::abs(r(j, i, l, k) - std::conj(r(i, j, k, l))), 0.0, 1e-10);
                        }
        }
    }
}

TEST(Riemann, FiniteDifferenceOfMetricOracle) {
    for (int n : {1, 2}) {
        for (const auto& spec : registry(n, 31)) {
            for (const auto& z : random_points(n, 0.5, 3, 400 + n)) {
                EXPECT_LT(testing_support::riemann_oracle_gap(spec, z), 1e-5) << to_string(spec.kind);
            }
        }
    }
}

TEST(Chsc, ModelsAndEuclidean) {
    for (int n = 1; n <= 3; ++n) {
        for (const auto& z : random_points(n, 0.8, 6, 50 + n)) {
            EXPECT_LT(chsc_residual(eval_jet(fubini_study(n), z, 4), 2.0), 1e-8);
            EXPECT_LT(chsc_residual(eval_jet(hyperbolic(n), z, 4), -2.0), 1e-8);
        }
    }
    EXPECT_EQ(chsc_residual(eval_jet(euclidean(2), Point::Zero(2), 4), 2.0), 2.0);
}

TEST(Chsc, PullbacksInheritModelCurvature) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        for (const auto& z : random_points(2, testing_support::kSafeRadius, 5, seed)) {
            EXPECT_LT(chsc_residual(eval_jet(gl_pullback_fs(2, seed), z, 4), 2.0), 1e-8);
            EXPECT_LT(chsc_residual(eval_jet(u1n_pullback_ch(2, seed), z, 4), -2.0), 1e-8);
        }
    }
    EXPECT_GT(chsc_residual(eval_jet(perturbed_fs(2), Point::Zero(2), 4), 2.0), 1e-2);
}

TEST(Hsc, Examples) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> normal;
    for (const auto& z : random_points(2, 0.9, 5, 12)) {
        CVector v(2);
        v << Complex(normal(rng), normal(rng)), Complex(normal(rng), normal(rng));
        EXPECT_NEAR(hsc_of_direction(eval_jet(fubini_study(2), z, 4), v), 2.0, 1e-8);
        EXPECT_NEAR(hsc_of_direction(eval_jet(euclidean(2), z, 4), v), 0.0, 1e-15);
    }
    Point z(2);
    z << 0.3, 0.0;
    const auto jet = eval_jet(perturbed_fs(2, 0.1), z, 4);
    const double a = hsc_of_direction(jet, CVector::Unit(2, 0));
    const double b = hsc_of_direction(jet, CVector::Unit(2, 1));
    EXPECT_GT(std::abs(a - b), 1e-3);
    EXPECT_THROW(hsc_of_direction(jet, CVector::Zero(2)), Error);
}

TEST(Hsc, ScaleInvariantDirection) {
    std::mt19937_64 rng(19);
    std::normal_distribution<double> normal;
    for (const auto& spec : registry(2, 5)) {
        for (const auto& z : random_points(2, testing_support::kSafeRadius, 3, 91)) {
            const auto jet = eval_jet(spec, z, 4);
            CVector v(2);
            v << Complex(normal(rng), normal(rng)), Complex(normal(rng), normal(rng));
            const Complex lambda(normal(rng), normal(rng));
            EXPECT_NEAR(hsc_of_direction(jet, v), hsc_of_direction(jet, lambda * v), 1e-10);
        }
    }
}

TEST(Scaling, PotentialScaleLaw) {
    const double lambda = 2.0;
    for (const auto& z : random_points(2, 0.5, 5, 44)) {
        const auto j1 = eval_jet(quartic(1.0), z, 4);
        const auto j2 = eval_jet(quartic(lambda), z, 4);
        const auto m1 = metric_at(j1);
        const auto m2 = metric_at(j2);
        EXPECT_LT(max_abs(m2.g_lower - lambda * m1.g_lower), 1e-13);
        const auto r1 = riemann_at(j1);
        const auto r2 = riemann_at(j2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k)
                    for (int l = 0; l < 2; ++l)
                        EXPECT_NEAR(std::abs(r2(i, j, k, l) - lambda * r1(i, j, k, l)), 0.0, 1e-12);
        const CVector v = CVector::Ones(2);
        EXPECT_NEAR(hsc_of_direction(j2, v), hsc_of_direction(j1, v) / lambda, 1e-12);
    }
}

TEST(Kahler, OrderRequirements) {
    const auto jet = eval_jet(fubini_study(1), pt(0.0), 2);
    EXPECT_NO_THROW(metric_at(jet));
    EXPECT_THROW(riemann_at(jet), Error);
    EXPECT_THROW(chsc_residual(jet, 2.0), Error);
}
