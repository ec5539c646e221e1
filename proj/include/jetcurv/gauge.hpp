/**
 * @file gauge.hpp
 * @brief Normalized coordinates and potential gauge at a point, and the
 *        pointwise identities satisfied by H and K in that gauge.
 *
 * normalize_at(spec, p) returns a spec in coordinates w with z(p) <-> w = 0 such
 * that phi(0) = 0, d phi(0) = 0, d_i d_j phi(0) = 0, g(0) = I and dg(0) = 0.
 * Equivalently h = exp(-phi) has h(0) = 1, dh(0) = 0 and vanishing pure second
 * derivatives.
 */

#pragma once

#include "jetcurv/chern.hpp"
#include "jetcurv/jet_hermitian.hpp"
#include "jetcurv/kahler.hpp"
#include "jetcurv/potential.hpp"
#include "jetcurv/wirtinger.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace jetcurv {

inline PotentialSpec normalize_at(const PotentialSpec& spec, const Point& p) {
    check_domain(spec, p);
    const int n = spec.n;
    const WirtingerJet jet = eval_jet(spec, p, 3);
    const MetricData metric = metric_at(jet);

    // g = C C^H  ->  L = C^{-T} brings g(p) to the identity.
    Eigen::LLT<CMatrix> llt(metric.g_lower);
    const CMatrix c_inv = CMatrix(llt.matrixL()).inverse();
    auto g = std::make_shared<GaugeNormalization>();
    g->base = spec;
    g->base_point = p;
    g->linear = c_inv.transpose();
    g->gamma.assign(static_cast<std::size_t>(n * n * n), Complex{});
    g->a = CVector::Zero(n);
    g->b = CMatrix::Zero(n, n);

    // Gamma_{ik} = -g^{-T} S_{ik},  S_{ik,b} = sum_{a,c} L_{ai} L_{ck} d_c g_{a bb}
    const CMatrix g_inv_t = metric.g_lower.inverse().transpose();
    const CMatrix& lin = g->linear;
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            CVector s = CVector::Zero(n);
            for (int b = 0; b < n; ++b)
                for (int a = 0; a < n; ++a)
                    for (int c = 0; c < n; ++c) s(b) += lin(a, i) * lin(c, k) * jet.d({a, c}, {b});
            const CVector gamma_ik = -(g_inv_t * s);
            for (int a = 0; a < n; ++a) g->gamma[static_cast<std::size_t>((a * n + i) * n + k)] = gamma_ik(a);
        }
    }

    // Holomorphic Taylor part of degree <= 2 of phi(z(w)) at w = 0.
    PotentialSpec unshifted = spec;
    unshifted.gauge = g;
    const Point origin = Point::Zero(n);
    const WirtingerJet psi = eval_jet(unshifted, origin, 2);
    g->c = 0.5 * psi.value();
    for (int i = 0; i < n; ++i) {
        g->a(i) = psi.d({i}, {});
        for (int j = 0; j < n; ++j) g->b(i, j) = psi.d({i, j}, {});
    }

    PotentialSpec out = spec;
    out.gauge = g;
    out.radius = spec.radius;
    return out;
}

struct ClaimCheck {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool finite_difference = false;
    bool pass = false;
};

struct ClaimReport {
    Point base_point;
    bool normalized = true;
    std::vector<ClaimCheck> checks;
    std::map<std::string, double> values;

    bool all_pass() const {
        return std::all_of(checks.begin(), checks.end(), [](const ClaimCheck& c) { return c.pass; });
    }

    const ClaimCheck* find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }

    double max_residual() const {
        double worst = 0.0;
        for (const auto& c : checks) worst = std::max(worst, c.value);
        return worst;
    }
};

struct ClaimOptions {
    bool normalize = true;
    double fd_step = 1e-3;
    double fd_tolerance = 1e-4;
    double algebraic_tolerance = 1e-9;
};

namespace detail {

struct SecondDerivativeChecks {
    double row_col_zero = 0.0;
    double block = 0.0;
    double first_entry = 0.0;
};

/**
 * Compares d_k dbar_l M(0) (from the curvature form, Omega M(0)) against
 * sign * R_{j ib k lb} - (delta_ij delta_kl + delta_ik delta_jl).
 */
inline SecondDerivativeChecks second_derivative_checks(const CurvatureForm& curv, const CMatrix& m0,
                                                       const CurvatureTensor& r, double sign) {
    const int n = curv.n;
    SecondDerivativeChecks out;
    for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
            const CMatrix dd = curv.at(k, l) * m0;
            for (int a = 0; a <= n; ++a) {
                out.row_col_zero = std::max({out.row_col_zero, std::abs(dd(0, a)), std::abs(dd(a, 0))});
            }
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const double delta = (i == j && k == l ? 1.0 : 0.0) + (i == k && j == l ? 1.0 : 0.0);
                    const Complex expected = sign * r(j, i, k, l) - delta;
                    out.block = std::max(out.block, std::abs(dd(i + 1, j + 1) - expected));
                }
            if (k == 0 && l == 0) out.first_entry = dd(1, 1).real();
        }
    }
    return out;
}

} // namespace detail

/**
 * Normalizes at p (unless disabled) and evaluates, at the new origin, the
 * normal-coordinate conditions, H(0) = I, dH(0) = 0, the vanishing of row and
 * column 0 of d dbar H(0), the second-derivative identity against the Riemann
 * tensor, the h identities, and the K analogues.
 */
inline ClaimReport verify_claims(const PotentialSpec& spec, const Point& p, const ClaimOptions& opt = {}) {
    const PotentialSpec target = opt.normalize ? normalize_at(spec, p) : spec;
    const int n = spec.n;
    const Point q = opt.normalize ? Point(Point::Zero(n)) : p;

    ClaimReport report;
    report.base_point = p;
    report.normalized = opt.normalize;
    auto add = [&](std::string name, double value, bool fd) {
        const double tol = fd ? opt.fd_tolerance : opt.algebraic_tolerance;
        report.checks.push_back({std::move(name), value, tol, fd, value < tol});
    };

    const WirtingerJet jet = eval_jet(target, q, 4);
    const MetricData metric = metric_at(jet);
    const CurvatureTensor riemann = riemann_at(jet);

    double dphi = 0.0;
    double ddphi = 0.0;
    double dg = 0.0;
    for (int i = 0; i < n; ++i) {
        dphi = std::max(dphi, std::abs(jet.d({i}, {})));
        for (int j = 0; j < n; ++j) {
            ddphi = std::max(ddphi, std::abs(jet.d({i, j}, {})));
            for (int k = 0; k < n; ++k) dg = std::max(dg, std::abs(jet.d({i, k}, {j})));
        }
    }
    add("gauge.phi0", std::abs(jet.value()), false);
    add("gauge.dphi0", dphi, false);
    add("gauge.pure_second_phi0", ddphi, false);
    add("gauge.g0_minus_identity", max_abs(metric.g_lower - CMatrix::Identity(n, n)), false);
    add("gauge.dg0", dg, false);

    // h = exp(-phi) at the origin.
    const WirtingerJet hjet = jet_from_series(exp(potential_series(target, q, 3) * -1.0), q);
    double h2 = 0.0;
    double h3 = 0.0;
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
            h2 = std::max(h2, std::abs(hjet.d({k}, {l}) + (k == l ? 1.0 : 0.0)));
            for (int s = 0; s < n; ++s) {
                h3 = std::max({h3, std::abs(hjet.d({k, s}, {l})), std::abs(hjet.d({k}, {l, s}))});
            }
        }
    add("h.mixed_second_plus_delta", h2, false);
    add("h.third_order", h3, false);

    const CMatrix h0 = h_matrix_at(jet).m;
    const CMatrix k0 = k_matrix_at(jet).m;
    add("claim1.H0_minus_identity", max_abs(h0 - CMatrix::Identity(n + 1, n + 1)), false);
    add("claim1.K0_minus_signature", max_abs(k0 - detail::signature_diag(n + 1)), false);

    for (FormKind kind : {FormKind::H, FormKind::K}) {
        const MatrixField field = jet_form_field(target, kind);
        const std::string tag = kind == FormKind::H ? "H" : "K";
        const auto derivs = field_derivatives(field, q, opt.fd_step);
        double dm = 0.0;
        for (int k = 0; k < n; ++k) dm = std::max({dm, max_abs(derivs.d[k]), max_abs(derivs.dbar[k])});
        add("claim2.d" + tag + "0", dm, true);

        const CurvatureForm curv = curvature_at(field, q, opt.fd_step);
        const CMatrix& m0 = kind == FormKind::H ? h0 : k0;
        const double sign = kind == FormKind::H ? 1.0 : -1.0;
        const auto sd = detail::second_derivative_checks(curv, m0, riemann, sign);
        add("claim3i.ddbar" + tag + "_row_col_0", sd.row_col_zero, true);
        add("claim3ii.ddbar" + tag + "_vs_riemann", sd.block, true);
        report.values["ddbar" + tag + "_11_11"] = sd.first_entry;
    }
    return report;
}

} // namespace jetcurv
