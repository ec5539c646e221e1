/**
 * @file jet_hermitian.hpp
 * @brief The Hermitian metric H on J^1(L) and the signature (1,n) form K on
 *        J^1(L*) in the global jet frame {j(1), j(z^1), ..., j(z^n)}.
 *
 * With h = exp(-phi) and <a, b>_g = g^{pq} a_p conj(b_q):
 *   H(j(u), j(v)) = h u vb + h <du - u dphi, dv - v dphi>_g
 *   K(j(u), j(v)) = h^-1 u vb - h^-1 <du + u dphi, dv + v dphi>_g
 * for u, v in {1, z^1, ..., z^n}. Matrix entries are M(a, b) = form(s^a, s^b).
 */

#pragma once

#include "jetcurv/kahler.hpp"
#include "jetcurv/types.hpp"
#include "jetcurv/wirtinger.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <utility>

namespace jetcurv {

enum class FormKind { H, K };

inline const char* to_string(FormKind k) { return k == FormKind::H ? "H" : "K"; }

struct JetHermitianMatrix {
    Point z;
    FormKind kind = FormKind::H;
    CMatrix m;  // (n+1) x (n+1)
};

/// Components of the evaluation covector j(u) -> u(z) in the dual jet frame: (1, z^1, ..., z^n).
struct DualVectorSample {
    Point z;
    CVector v;
};

inline DualVectorSample canonical_section(const Point& z) {
    return {z, detail::homogeneous(z)};
}

namespace detail {

/**
 * Shared assembly of H and K. `sign` = -1 builds H (connection d + d log h),
 * `sign` = +1 builds K (connection d + d log h^-1 on L*).
 */
inline CMatrix jet_form_matrix(const WirtingerJet& jet, const MetricData& metric, FormKind kind) {
    const int n = jet.n();
    const Point& z = jet.point();
    const double phi = jet.value();
    const double line_weight = kind == FormKind::H ? std::exp(-phi) : std::exp(phi);
    const double conn_sign = kind == FormKind::H ? -1.0 : 1.0;
    const double tangent_sign = kind == FormKind::H ? 1.0 : -1.0;

    CVector dphi(n);
    for (int p = 0; p < n; ++p) dphi(p) = jet.d({p}, {});
    const CVector u = homogeneous(z);

    // nabla u_a as rows: nabla(u_a)_p = d_p u_a + conn_sign * u_a * d_p phi
    CMatrix grad(n + 1, n);
    for (int a = 0; a <= n; ++a)
        for (int p = 0; p < n; ++p) {
            const Complex du = (a > 0 && a - 1 == p) ? Complex(1.0) : Complex(0.0);
            grad(a, p) = du + conn_sign * u(a) * dphi(p);
        }

    // <x, y>_g = sum g^{pq} x_p conj(y_q)  ->  grad * G^ * grad^H
    const CMatrix tangent = grad * metric.g_upper * grad.adjoint();
    CMatrix m(n + 1, n + 1);
    for (int a = 0; a <= n; ++a) {
        for (int b = a; b <= n; ++b) {
            const Complex v = line_weight * (u(a) * std::conj(u(b)) + tangent_sign * tangent(a, b));
            if (a == b) {
                m(a, a) = v.real();
            } else {
                m(a, b) = v;
                m(b, a) = std::conj(v);
            }
        }
    }
    return m;
}

} // namespace detail

inline JetHermitianMatrix h_matrix_at(const WirtingerJet& jet) {
    require_order(jet, 2);
    const MetricData metric = metric_at(jet);
    return {jet.point(), FormKind::H, detail::jet_form_matrix(jet, metric, FormKind::H)};
}

inline JetHermitianMatrix k_matrix_at(const WirtingerJet& jet) {
    require_order(jet, 2);
    const MetricData metric = metric_at(jet);
    return {jet.point(), FormKind::K, detail::jet_form_matrix(jet, metric, FormKind::K)};
}

inline JetHermitianMatrix form_matrix_at(const WirtingerJet& jet, FormKind kind) {
    return kind == FormKind::H ? h_matrix_at(jet) : k_matrix_at(jet);
}

/// (positive, negative) eigenvalue counts of a Hermitian matrix.
inline std::pair<int, int> signature_of(const CMatrix& m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    const double scale = max_abs(m);
    int pos = 0;
    int neg = 0;
    for (int i = 0; i < ev.size(); ++i) {
        if (std::abs(ev(i)) < 1e-10 * scale || scale == 0.0) {
            throw Error(ErrorKind::DegenerateForm, "degenerate form: eigenvalue near zero");
        }
        (ev(i) > 0 ? pos : neg) += 1;
    }
    return {pos, neg};
}

inline std::pair<int, int> signature_of(const JetHermitianMatrix& m) { return signature_of(m.m); }

/**
 * Value of the dual form on v: sum_{a,b} Hv(a, b) v_a conj(v_b) with Hv = (M^-1)^T.
 */
inline double dual_quadratic(const CMatrix& m, const CVector& v) {
    if (m.rows() != v.size()) throw Error(ErrorKind::Argument, "dual vector has wrong dimension");
    Eigen::FullPivLU<CMatrix> lu(m);
    if (!lu.isInvertible()) throw Error(ErrorKind::SingularForm, "singular Hermitian form");
    const CMatrix dual = lu.inverse().transpose();
    return (v.transpose() * dual * v.conjugate())(0, 0).real();
}

inline double dual_quadratic(const JetHermitianMatrix& m, const DualVectorSample& v) {
    return dual_quadratic(m.m, v.v);
}

struct QuotientResidual {
    double h_slot = 0.0;  // |Hv(sigma, sigma) - exp(phi)|
    double k_slot = 0.0;  // |Kv(tau, tau) - exp(-phi)|
};

/**
 * Restriction of the dual forms to the evaluation line: Hv restricts to
 * h^-1 = exp(phi) and Kv to h = exp(-phi), for any Kahler potential.
 */
inline QuotientResidual quotient_identity_residual(const WirtingerJet& jet) {
    const auto sigma = canonical_section(jet.point());
    const double phi = jet.value();
    QuotientResidual out;
    out.h_slot = std::abs(dual_quadratic(h_matrix_at(jet), sigma) - std::exp(phi));
    out.k_slot = std::abs(dual_quadratic(k_matrix_at(jet), sigma) - std::exp(-phi));
    return out;
}

} // namespace jetcurv
