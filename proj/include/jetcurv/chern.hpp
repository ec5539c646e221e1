/**
 * @file chern.hpp
 * @brief Chern connection theta = (dH) H^-1 and curvature Omega = dbar theta of
 *        a Hermitian matrix field in a holomorphic frame, by finite differences.
 */

#pragma once

#include "jetcurv/jet_hermitian.hpp"
#include "jetcurv/potential.hpp"
#include "jetcurv/types.hpp"
#include "jetcurv/wirtinger.hpp"

#include <algorithm>
#include <functional>
#include <vector>

namespace jetcurv {

using MatrixField = std::function<CMatrix(const Point&)>;

/// z -> matrix of H (or K) for a potential, from order-2 analytic jets.
inline MatrixField jet_form_field(const PotentialSpec& spec, FormKind kind) {
    return [spec, kind](const Point& z) { return form_matrix_at(eval_jet(spec, z, 2), kind).m; };
}

struct ConnectionForm {
    Point z;
    std::vector<CMatrix> theta;  // dz^k components
    CMatrix value;               // field(z)
};

struct CurvatureForm {
    Point z;
    int n = 0;
    std::vector<CMatrix> omega;  // Omega_{k lb} at [k * n + l]

    const CMatrix& at(int k, int l) const { return omega[static_cast<std::size_t>(k * n + l)]; }
};

/// Holomorphic and antiholomorphic partials of a field.
struct FieldDerivatives {
    std::vector<CMatrix> d;     // d_k M
    std::vector<CMatrix> dbar;  // dbar_k M
};

inline double fd_step_at(const Point& z, double step) { return step * std::max(1.0, sup_norm(z)); }

namespace detail {

/// Richardson-extrapolated central difference along direction e of a matrix-valued map.
template <typename F>
auto central_derivative(const F& f, const Point& z, const Point& e, double h) {
    auto diff = [&](double s) { return ((f(Point(z + s * e)) - f(Point(z - s * e))) / (2.0 * s)).eval(); };
    const auto coarse = diff(h);
    const auto fine = diff(h / 2.0);
    return ((4.0 * fine - coarse) / 3.0).eval();
}

/// d_k and dbar_k of a matrix-valued map from derivatives along Re z^k and Im z^k.
template <typename F>
std::pair<std::vector<CMatrix>, std::vector<CMatrix>> wirtinger_partials(const F& f, const Point& z,
                                                                         double h) {
    const int n = static_cast<int>(z.size());
    std::vector<CMatrix> d;
    std::vector<CMatrix> dbar;
    for (int k = 0; k < n; ++k) {
        Point ex = Point::Zero(n);
        ex(k) = 1.0;
        Point ey = Point::Zero(n);
        ey(k) = Complex(0.0, 1.0);
        const CMatrix dx = central_derivative(f, z, ex, h);
        const CMatrix dy = central_derivative(f, z, ey, h);
        d.push_back(0.5 * (dx - Complex(0.0, 1.0) * dy));
        dbar.push_back(0.5 * (dx + Complex(0.0, 1.0) * dy));
    }
    return {std::move(d), std::move(dbar)};
}

inline CMatrix checked_inverse(const CMatrix& m) {
    Eigen::FullPivLU<CMatrix> lu(m);
    if (!lu.isInvertible()) throw Error(ErrorKind::SingularForm, "singular Hermitian form in the field");
    return lu.inverse();
}

} // namespace detail

inline FieldDerivatives field_derivatives(const MatrixField& field, const Point& z, double step = 1e-3) {
    auto [d, dbar] = detail::wirtinger_partials(field, z, fd_step_at(z, step));
    return {std::move(d), std::move(dbar)};
}

inline ConnectionForm connection_at(const MatrixField& field, const Point& z, double step = 1e-3) {
    ConnectionForm out;
    out.z = z;
    out.value = field(z);
    const CMatrix inv = detail::checked_inverse(out.value);
    auto [d, dbar] = detail::wirtinger_partials(field, z, fd_step_at(z, step));
    for (auto& dk : d) out.theta.push_back(dk * inv);
    return out;
}

/// Omega_{k lb} = dbar_l theta_k by central differences of connection_at.
inline CurvatureForm curvature_at(const MatrixField& field, const Point& z, double step = 1e-3) {
    const int n = static_cast<int>(z.size());
    auto theta_stack = [&](const Point& p) {
        const auto conn = connection_at(field, p, step);
        CMatrix stacked(conn.value.rows() * n, conn.value.cols());
        for (int k = 0; k < n; ++k) stacked.middleRows(k * conn.value.rows(), conn.value.rows()) = conn.theta[k];
        return stacked;
    };
    auto [d, dbar] = detail::wirtinger_partials(theta_stack, z, fd_step_at(z, step));
    (void)d;
    CurvatureForm out;
    out.z = z;
    out.n = n;
    const auto rows = dbar.front().rows() / n;
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) out.omega.push_back(dbar[l].middleRows(k * rows, rows));
    return out;
}

/// max_{k,l} max-entry |Omega_{k lb}| / max(1, |field(z)|_max).
inline double flatness_norm(const MatrixField& field, const Point& z, double step = 1e-3) {
    const auto curv = curvature_at(field, z, step);
    double worst = 0.0;
    for (const auto& om : curv.omega) worst = std::max(worst, max_abs(om));
    return worst / std::max(1.0, max_abs(field(z)));
}

enum class Verdict { Pass, Fail, Inconclusive };

inline const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

/// "Flat" below flat_tol, "not flat" above non_flat_tol, otherwise inconclusive.
struct FlatnessThresholds {
    double flat_tol = 1e-4;
    double non_flat_tol = 1e-2;
};

enum class Flatness { Flat, NotFlat, Inconclusive };

inline Flatness classify(double norm, const FlatnessThresholds& t = {}) {
    if (norm < t.flat_tol) return Flatness::Flat;
    if (norm > t.non_flat_tol) return Flatness::NotFlat;
    return Flatness::Inconclusive;
}

} // namespace jetcurv
