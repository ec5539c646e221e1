#include "jetcurv/jet_hermitian.hpp"
#include "jetcurv/registry.hpp"
#include "support.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <gtest/gtest.h>

#include <cmath>

using namespace jetcurv;
using testing_support::random_points;

namespace {

Point pt(Complex a) { return Point::Constant(1, a); }

using Rational = boost::multiprecision::cpp_rational;

/// Minimal exact complex arithmetic over the rationals.
struct QComplex {
    Rational re;
    Rational im;
};

QComplex operator+(const QComplex& a, const QComplex& b) { return {a.re + b.re, a.im + b.im}; }
QComplex operator-(const QComplex& a, const QComplex& b) { return {a.re - b.re, a.im - b.im}; }
QComplex operator*(const QComplex& a, const QComplex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
QComplex conj(const QComplex& a) { return {a.re, -a.im}; }
QComplex scale(const QComplex& a, const Rational& s) { return {a.re * s, a.im * s}; }
QComplex divide(const QComplex& a, const QComplex& b) {
    const Rational d = b.re * b.re + b.im * b.im;
    return scale(a * conj(b), 1 / d);
}
Complex to_double(const QComplex& a) {
    return {static_cast<double>(a.re), static_cast<double>(a.im)};
}

} // namespace

TEST(HMatrix, FubiniStudyIsIdentity) {
    for (const auto& z : random_points(1, 0.95, 10, 2)) {
        EXPECT_LT(max_abs(h_matrix_at(eval_jet(fubini_study(1), z, 2)).m - CMatrix::Identity(2, 2)), 1e-12);
    }
}

TEST(HMatrix, EuclideanHandEvaluation) {
    EXPECT_LT(max_abs(h_matrix_at(eval_jet(euclidean(1), pt(0.0), 2)).m - CMatrix::Identity(2, 2)), 1e-15);

    // z = 1: h = 1/e, nabla 1 = -zb = -1, nabla z = 1 - z zb = 0.
    PotentialSpec wide = euclidean(1, 2.0);
    const CMatrix m = h_matrix_at(eval_jet(wide, pt(1.0), 2)).m;
    const double h = std::exp(-1.0);
    EXPECT_NEAR(std::abs(m(0, 0) - 2.0 * h), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(m(0, 1) - h), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(m(1, 0) - h), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(m(1, 1) - h), 0.0, 1e-15);
}

TEST(KMatrix, HyperbolicIsSignature) {
    for (const auto& z : random_points(1, 0.85, 10, 3)) {
        const CMatrix k = k_matrix_at(eval_jet(hyperbolic(1), z, 2)).m;
        EXPECT_LT(max_abs(k - detail::signature_diag(2)), 1e-12);
    }
    const CMatrix k2 = k_matrix_at(eval_jet(hyperbolic(2), Point::Zero(2), 2)).m;
    EXPECT_LT(max_abs(k2 - detail::signature_diag(3)), 1e-15);
}

TEST(KMatrix, EuclideanHandEvaluation) {
    // z = 0.5: 1/h = e^{1/4}, nabla* 1 = zb = 0.5, nabla* z = 1 + z zb = 1.25.
    const CMatrix k = k_matrix_at(eval_jet(euclidean(1), pt(0.5), 2)).m;
    const double hinv = std::exp(0.25);
    EXPECT_NEAR(std::abs(k(0, 0) - hinv * (1.0 - 0.25)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(k(0, 1) - hinv * (0.5 - 0.5 * 1.25)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(k(1, 0) - hinv * (0.5 - 0.5 * 1.25)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(k(1, 1) - hinv * (0.25 - 1.25 * 1.25)), 0.0, 1e-14);
}

TEST(JetForms, HermitianAndDefinite) {
    for (int n = 1; n <= 3; ++n) {
        for (const auto& spec : registry(n, 17)) {
            for (const auto& z : random_points(n, testing_support::kSafeRadius, 4, 60 + n)) {
                const auto jet = eval_jet(spec, z, 2);
                const CMatrix h = h_matrix_at(jet).m;
                const CMatrix k = k_matrix_at(jet).m;
                EXPECT_EQ(max_abs(h - h.adjoint()), 0.0);
                EXPECT_EQ(max_abs(k - k.adjoint()), 0.0);
                EXPECT_EQ(signature_of(h), std::make_pair(n + 1, 0));
                EXPECT_EQ(signature_of(k), std::make_pair(1, n));
            }
        }
    }
}

TEST(DualQuadratic, Examples) {
    const Complex z(0.3, -0.4);
    CVector v(2);
    v << 1.0, z;
    EXPECT_NEAR(dual_quadratic(CMatrix(CMatrix::Identity(2, 2)), v), 1.0 + std::norm(z), 1e-15);
    EXPECT_NEAR(dual_quadratic(detail::signature_diag(2), v), 1.0 - std::norm(z), 1e-15);
    EXPECT_NEAR(dual_quadratic(CMatrix(2.0 * CMatrix::Identity(2, 2)), CVector::Unit(2, 0)), 0.5, 1e-15);
    try {
        dual_quadratic(CMatrix(CMatrix::Zero(2, 2)), v);
        FAIL() << "expected SingularForm";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::SingularForm);
    }
}

TEST(DualQuadratic, TransposeConventionMatters) {
    // A non-real Hermitian form distinguishes (M^-1)^T from M^-1.
    CMatrix m(2, 2);
    m << 2.0, Complex(0.0, 1.0), Complex(0.0, -1.0), 2.0;
    CVector v(2);
    v << 1.0, Complex(0.0, 1.0);
    const CMatrix inv = m.inverse();
    const double with_transpose = (v.transpose() * inv.transpose() * v.conjugate())(0, 0).real();
    const double without = (v.transpose() * inv * v.conjugate())(0, 0).real();
    ASSERT_GT(std::abs(with_transpose - without), 0.1);
    EXPECT_NEAR(dual_quadratic(m, v), with_transpose, 1e-15);
}

TEST(QuotientIdentity, Examples) {
    EXPECT_LT(quotient_identity_residual(eval_jet(fubini_study(1), pt(0.7), 2)).h_slot, 1e-10);
    Point z(2);
    z << 0.3, 0.4;
    EXPECT_LT(quotient_identity_residual(eval_jet(hyperbolic(2), z, 2)).k_slot, 1e-10);
    EXPECT_LT(quotient_identity_residual(eval_jet(perturbed_fs(1, 0.1), pt(0.2), 2)).h_slot, 1e-9);
}

TEST(QuotientIdentity, HoldsForEveryPotential) {
    for (int n = 1; n <= 3; ++n) {
        for (const auto& spec : registry(n, 123)) {
            for (const auto& z : random_points(n, testing_support::kSafeRadius, 10, 900 + n)) {
                const auto q = quotient_identity_residual(eval_jet(spec, z, 2));
                EXPECT_LT(q.h_slot, 1e-9) << to_string(spec.kind);
                EXPECT_LT(q.k_slot, 1e-9) << to_string(spec.kind);
            }
        }
    }
}

TEST(QuotientIdentity, ExactRationalOracle) {
    // perturbed_fs, eps = 1/10, n = 1, z = 1/5 + i/10. H = h R with R rational:
    //   a = d phi = zb/(1+|z|^2) + 2 eps x^3,   g = (1+|z|^2)^-2 + 3 eps x^2,
    //   R(u, v) = u vb + (nabla u)(conj nabla v)/g,  nabla 1 = -a,  nabla z = 1 - z a.
    // The dual form on (1, z) must equal exactly 1/h, i.e. (1, z) R^{-T} (1, z)^* = 1.
    const Rational eps(1, 10);
    const QComplex z{Rational(1, 5), Rational(1, 10)};
    const QComplex one{1, 0};
    const Rational r2 = z.re * z.re + z.im * z.im;
    const Rational x = z.re;
    const QComplex a = scale(conj(z), 1 / (1 + r2)) + QComplex{2 * eps * x * x * x, 0};
    const Rational g = 1 / ((1 + r2) * (1 + r2)) + 3 * eps * x * x;
    const QComplex s[2] = {one, z};
    const QComplex nab[2] = {QComplex{0, 0} - a, one - z * a};
    QComplex r[2][2];
    for (int u = 0; u < 2; ++u)
        for (int v = 0; v < 2; ++v) r[u][v] = s[u] * conj(s[v]) + scale(nab[u] * conj(nab[v]), 1 / g);

    // R^{-1} = adj(R) / det; the dual form uses its transpose.
    const QComplex det = r[0][0] * r[1][1] - r[0][1] * r[1][0];
    const QComplex adj[2][2] = {{r[1][1], QComplex{0, 0} - r[0][1]}, {QComplex{0, 0} - r[1][0], r[0][0]}};
    QComplex quad{0, 0};
    for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q) quad = quad + s[p] * divide(adj[q][p], det) * conj(s[q]);
    EXPECT_EQ(quad.re, Rational(1));
    EXPECT_EQ(quad.im, Rational(0));

    // The library's H must be h R, and its dual value e^phi.
    const Point zd = pt(to_double(z));
    const auto jet = eval_jet(perturbed_fs(1, 0.1), zd, 2);
    const double h = std::exp(-jet.value());
    const CMatrix m = h_matrix_at(jet).m;
    for (int u = 0; u < 2; ++u)
        for (int v = 0; v < 2; ++v) EXPECT_NEAR(std::abs(m(u, v) - h * to_double(r[u][v])), 0.0, 1e-13);
    EXPECT_LT(quotient_identity_residual(jet).h_slot, 1e-9);
}

TEST(Signature, Examples) {
    EXPECT_EQ(signature_of(CMatrix(CMatrix::Identity(3, 3))), std::make_pair(3, 0));
    EXPECT_EQ(signature_of(detail::signature_diag(3)), std::make_pair(1, 2));
    for (const auto& z : random_points(3, 0.9, 5, 8)) {
        EXPECT_EQ(signature_of(k_matrix_at(eval_jet(hyperbolic(3), z, 2))), std::make_pair(1, 3));
    }
    CMatrix degenerate = CMatrix::Identity(2, 2);
    degenerate(1, 1) = 0.0;
    try {
        signature_of(degenerate);
        FAIL() << "expected DegenerateForm";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DegenerateForm);
    }
}

TEST(CanonicalSection, IsOneZ) {
    Point z(2);
    z << Complex(0.1, 0.2), Complex(-0.3, 0.0);
    const auto s = canonical_section(z);
    ASSERT_EQ(s.v.size(), 3);
    EXPECT_EQ(s.v(0), Complex(1.0));
    EXPECT_EQ(s.v(1), z(0));
    EXPECT_EQ(s.v(2), z(1));
}
