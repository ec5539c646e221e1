/**
 * @file develop.hpp
 * @brief Parallel transport of jet frames and the developing map into the
 *        model spaces CP^n (form H) and the complex hyperbolic ball (form K).
 *
 * A frame is a matrix A whose columns hold the jet-frame coordinates of the
 * frame vectors e_a = sum_c A(c, a) s^c. Its Gram matrix is
 *   form(e_a, e_b) = (A^T M conj(A))(a, b),
 * and a parallel frame solves dA/dt = -theta(gamma')^T A, which keeps the Gram
 * matrix constant. The developing map sends z to the evaluation covector (1, z)
 * written in the dual of the parallel frame, w = A^T (1, z).
 */

#pragma once

#include "jetcurv/chern.hpp"
#include "jetcurv/jet_hermitian.hpp"
#include "jetcurv/kahler.hpp"
#include "jetcurv/potential.hpp"
#include "jetcurv/types.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace jetcurv {

/// Polyline in C^n.
struct Path {
    std::vector<Point> vertices;

    double length() const {
        double len = 0.0;
        for (std::size_t i = 1; i < vertices.size(); ++i) len += (vertices[i] - vertices[i - 1]).norm();
        return len;
    }
};

inline Path radial_path(const Point& z) { return {{Point::Zero(z.size()), z}}; }

/// 0 -> Re z -> z.
inline Path real_first_path(const Point& z) {
    Point corner = z.real().cast<Complex>();
    return {{Point::Zero(z.size()), corner, z}};
}

/// 0 -> i Im z -> z.
inline Path imaginary_first_path(const Point& z) {
    Point corner = (Complex(0.0, 1.0) * z.imag().cast<Complex>()).eval();
    return {{Point::Zero(z.size()), corner, z}};
}

struct TransportOptions {
    double steps_per_unit = 200.0;
    /// When positive, every segment uses exactly this many RK4 steps.
    int fixed_steps = 0;
    double rtol = 1e-6;
    double fd_step = 1e-3;
};

struct TransportResult {
    CMatrix a;
    double gram_drift = 0.0;  // sup_t |A^T M A-bar - G(start)|_max / max(1, |G(start)|_max)
    int steps = 0;
};

inline CMatrix gram(const CMatrix& a, const CMatrix& m) { return a.transpose() * m * a.conjugate(); }

/// Transports the frame A0 along `path` with classical RK4.
inline TransportResult transport(const MatrixField& field, const Path& path, const CMatrix& a0,
                                 const TransportOptions& opt = {}) {
    if (path.vertices.empty()) throw Error(ErrorKind::Argument, "empty transport path");
    const int n = static_cast<int>(path.vertices.front().size());

    auto generator = [&](const Point& p, const Point& velocity, CMatrix* value) {
        const auto conn = connection_at(field, p, opt.fd_step);
        CMatrix t = CMatrix::Zero(conn.value.rows(), conn.value.cols());
        for (int k = 0; k < n; ++k) t += conn.theta[k] * velocity(k);
        if (value) *value = conn.value;
        return CMatrix(-t.transpose());
    };

    TransportResult out;
    out.a = a0;
    CMatrix m_start;
    CMatrix g_start;
    double g_scale = 1.0;
    for (std::size_t seg = 1; seg < path.vertices.size(); ++seg) {
        const Point& p = path.vertices[seg - 1];
        const Point& q = path.vertices[seg];
        const Point vel = q - p;
        const double len = vel.norm();
        if (len == 0.0) continue;
        const int steps = opt.fixed_steps > 0
                              ? opt.fixed_steps
                              : std::max(1, static_cast<int>(std::ceil(opt.steps_per_unit * len)));
        const double dt = 1.0 / steps;

        CMatrix m_here;
        CMatrix k_here = generator(p, vel, &m_here);
        if (g_start.size() == 0) {
            g_start = gram(out.a, m_here);
            g_scale = std::max(1.0, max_abs(g_start));
        }
        for (int s = 0; s < steps; ++s) {
            const double t0 = s * dt;
            const CMatrix& a = out.a;
            const CMatrix gen_mid = generator(Point(p + (t0 + 0.5 * dt) * vel), vel, nullptr);
            CMatrix m_next;
            const CMatrix gen_end = generator(Point(p + (t0 + dt) * vel), vel, &m_next);
            const CMatrix k1 = k_here * a;
            const CMatrix k2 = gen_mid * (a + 0.5 * dt * k1);
            const CMatrix k3 = gen_mid * (a + 0.5 * dt * k2);
            const CMatrix k4 = gen_end * (a + dt * k3);
            out.a = a + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            k_here = gen_end;
            out.gram_drift = std::max(out.gram_drift, max_abs(gram(out.a, m_next) - g_start) / g_scale);
            ++out.steps;
        }
    }
    if (out.gram_drift > opt.rtol) {
        std::ostringstream os;
        os << "transport accuracy failure: Gram drift " << out.gram_drift << " exceeds " << opt.rtol
           << "; try steps_per_unit >= " << 2.0 * opt.steps_per_unit;
        throw Error(ErrorKind::TransportAccuracy, os.str());
    }
    return out;
}

/// diag(1, 1, ...) for H, diag(1, -1, ..., -1) for K.
inline CMatrix model_gram(FormKind kind, int size) {
    return kind == FormKind::H ? CMatrix(CMatrix::Identity(size, size)) : detail::signature_diag(size);
}

/**
 * Frame with A^T M conj(A) = model_gram at the origin of the chart. The vectors
 * s^1..s^n are orthonormalized first and e_0 last, so that e_1..e_n span the
 * kernel of the evaluation covector at z = 0 and A(0, 0) > 0.
 */
inline CMatrix initial_frame(const CMatrix& m, FormKind kind) {
    const int size = static_cast<int>(m.rows());
    auto form = [&](const CVector& x, const CVector& y) { return Complex((x.transpose() * m * y.conjugate())(0, 0)); };
    CMatrix a = CMatrix::Zero(size, size);
    std::vector<int> order;
    for (int i = 1; i < size; ++i) order.push_back(i);
    order.push_back(0);
    const CMatrix target = model_gram(kind, size);
    for (int idx : order) {
        CVector x = CVector::Unit(size, idx);
        for (int j : order) {
            if (j == idx) break;
            const CVector e = a.col(j);
            x -= (form(x, e) / form(e, e)) * e;
        }
        const double q = form(x, x).real();
        if (q == 0.0 || (q > 0.0) != (target(idx, idx).real() > 0.0)) {
            throw Error(ErrorKind::DegenerateForm, "form does not have the expected signature at the base point");
        }
        a.col(idx) = x / std::sqrt(std::abs(q));
    }
    return a;
}

struct DevelopOptions {
    double flat_tol = 1e-4;
    TransportOptions transport;
    int local_steps = 6;
    double stencil_step = 1e-2;
};

struct ParallelFrame {
    Point base;
    Point z;
    FormKind kind = FormKind::H;
    CMatrix a;
    double gram_residual = 0.0;  // |A^T M(z) A-bar - G0|_max
    double transport_drift = 0.0;
};

inline void require_flat_segment(const MatrixField& field, const Point& z, const DevelopOptions& opt) {
    const int samples = z.norm() == 0.0 ? 1 : 5;
    for (int s = 0; s < samples; ++s) {
        const double t = samples == 1 ? 0.0 : s / 4.0;
        const double norm = flatness_norm(field, Point(t * z), opt.transport.fd_step);
        if (!(norm < opt.flat_tol)) {
            std::ostringstream os;
            os << "connection not flat: developing map undefined (flatness " << norm << ")";
            throw Error(ErrorKind::NotFlat, os.str());
        }
    }
}

inline ParallelFrame orthonormal_parallel_frame(const PotentialSpec& spec, FormKind kind, const Point& z,
                                                const DevelopOptions& opt = {}) {
    check_domain(spec, z);
    const MatrixField field = jet_form_field(spec, kind);
    require_flat_segment(field, z, opt);
    const Point origin = Point::Zero(spec.n);
    ParallelFrame frame;
    frame.base = origin;
    frame.z = z;
    frame.kind = kind;
    const CMatrix a0 = initial_frame(field(origin), kind);
    const auto moved = transport(field, radial_path(z), a0, opt.transport);
    frame.a = moved.a;
    frame.transport_drift = moved.gram_drift;
    frame.gram_residual = max_abs(gram(frame.a, field(z)) - model_gram(kind, spec.n + 1));
    return frame;
}

struct DevelopingMapSample {
    Point z;
    FormKind kind = FormKind::H;
    CVector w;                       // homogeneous coordinates, w(0) = (1, 0, ..., 0)
    double form_value = 0.0;         // |w|^2 (H) or |w0|^2 - sum |wi|^2 (K)
    double holomorphy_residual = 0.0;
};

inline double model_form(FormKind kind, const CVector& w) {
    return kind == FormKind::H ? w.squaredNorm() : detail::form_1n(w);
}

/**
 * Developing map near a fixed center: frames at nearby points come from short
 * straight transports with a fixed step count, so samples depend smoothly on
 * the point and can be differentiated by finite differences.
 */
class LocalDevelopingMap {
public:
    LocalDevelopingMap(const PotentialSpec& spec, FormKind kind, const Point& center, const DevelopOptions& opt)
        : spec_(spec)
        , kind_(kind)
        , center_(center)
        , opt_(opt)
        , field_(jet_form_field(spec, kind))
    {
        frame_ = orthonormal_parallel_frame(spec, kind, center, opt);
        const CMatrix a0 = initial_frame(field_(Point::Zero(spec.n)), kind);
        scale_ = 1.0 / a0(0, 0).real();
    }

    const ParallelFrame& frame() const { return frame_; }

    CVector w_at(const Point& z) const {
        CMatrix a = frame_.a;
        if ((z - center_).norm() > 0.0) {
            TransportOptions local = opt_.transport;
            local.fixed_steps = opt_.local_steps;
            a = transport(field_, {{center_, z}}, frame_.a, local).a;
        }
        return scale_ * (a.transpose() * detail::homogeneous(z));
    }

    /// Normalized dbar of w at the center, max over directions.
    double holomorphy_residual() const {
        const double h = opt_.stencil_step * std::max(1.0, sup_norm(center_));
        auto f = [&](const Point& z) { return CMatrix(w_at(z)); };
        auto [d, dbar] = detail::wirtinger_partials(f, center_, h);
        (void)d;
        const CVector w0 = w_at(center_);
        double worst = 0.0;
        for (const auto& m : dbar) worst = std::max(worst, max_abs(m));
        return worst / std::max(1e-300, sup_norm(w0));
    }

private:
    PotentialSpec spec_;
    FormKind kind_;
    Point center_;
    DevelopOptions opt_;
    MatrixField field_;
    ParallelFrame frame_;
    double scale_ = 1.0;
};

inline DevelopingMapSample developing_map(const PotentialSpec& spec, FormKind kind, const Point& z,
                                          const DevelopOptions& opt = {}) {
    LocalDevelopingMap local(spec, kind, z, opt);
    DevelopingMapSample out;
    out.z = z;
    out.kind = kind;
    out.w = local.w_at(z);
    out.form_value = model_form(kind, out.w);
    if (kind == FormKind::K && !(out.form_value > 0.0)) {
        throw Error(ErrorKind::LeftPositiveCone, "image left U+: (1,n)-norm of w is not positive");
    }
    out.holomorphy_residual = local.holomorphy_residual();
    return out;
}

namespace detail {

/// d_i dbar_j F for a real function by central second differences with one Richardson halving.
template <typename F>
CMatrix mixed_wirtinger_hessian(const F& f, const Point& z, double h) {
    const int n = static_cast<int>(z.size());
    const int dims = 2 * n;
    auto dir = [&](int a) {
        Point e = Point::Zero(n);
        e(a % n) = a < n ? Complex(1.0, 0.0) : Complex(0.0, 1.0);
        return e;
    };
    const double f0 = f(z);
    auto hessian = [&](double s) {
        Eigen::MatrixXd hr(dims, dims);
        for (int a = 0; a < dims; ++a) {
            const Point ea = dir(a);
            hr(a, a) = (f(Point(z + s * ea)) - 2.0 * f0 + f(Point(z - s * ea))) / (s * s);
            for (int b = a + 1; b < dims; ++b) {
                const Point eb = dir(b);
                const double v = f(Point(z + s * ea + s * eb)) - f(Point(z + s * ea - s * eb)) -
                                 f(Point(z - s * ea + s * eb)) + f(Point(z - s * ea - s * eb));
                hr(a, b) = hr(b, a) = v / (4.0 * s * s);
            }
        }
        return hr;
    };
    const Eigen::MatrixXd hr = (4.0 * hessian(h / 2.0) - hessian(h)) / 3.0;
    CMatrix out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out(i, j) = 0.25 * Complex(hr(i, j) + hr(n + i, n + j), hr(i, n + j) - hr(n + i, j));
    return out;
}

} // namespace detail

/**
 * max-entry |d dbar log |w|^2 - g| (H) or |-d dbar log <w,w>_{1,n} - g| (K) at z:
 * the pulled-back model metric against the input metric.
 */
inline double pullback_residual(const PotentialSpec& spec, FormKind kind, const Point& z,
                                const DevelopOptions& opt = {}) {
    LocalDevelopingMap local(spec, kind, z, opt);
    const double sign = kind == FormKind::H ? 1.0 : -1.0;
    auto potential = [&](const Point& p) {
        const double q = model_form(kind, local.w_at(p));
        if (!(q > 0.0)) throw Error(ErrorKind::LeftPositiveCone, "image left U+: (1,n)-norm of w is not positive");
        return sign * std::log(q);
    };
    const double h = opt.stencil_step * std::max(1.0, sup_norm(z));
    const CMatrix pulled = detail::mixed_wirtinger_hessian(potential, z, h);
    const MetricData metric = metric_at(eval_jet(spec, z, 2));
    return max_abs(pulled - metric.g_lower);
}

/// Affine chart of the developing map: zeta = (w_1, ..., w_n) / w_0.
inline Point model_chart(const CVector& w) {
    return w.tail(w.size() - 1) / w(0);
}

/**
 * Recovers model coordinates zeta(z) through the developing map, pulls back the
 * model chart potential log(1 + |zeta|^2) or -log(1 - |zeta|^2), and compares
 * its metric with the input metric at z.
 */
inline double roundtrip_residual(const PotentialSpec& spec, FormKind kind, const Point& z,
                                 const DevelopOptions& opt = {}) {
    LocalDevelopingMap local(spec, kind, z, opt);
    auto model_potential = [&](const Point& p) {
        const double r2 = model_chart(local.w_at(p)).squaredNorm();
        return kind == FormKind::H ? std::log1p(r2) : -std::log1p(-r2);
    };
    const double h = opt.stencil_step * std::max(1.0, sup_norm(z));
    const CMatrix pulled = detail::mixed_wirtinger_hessian(model_potential, z, h);
    return max_abs(pulled - metric_at(eval_jet(spec, z, 2)).g_lower);
}

/// |A_path1 - A_path2|_max for frames transported from a common start.
inline double path_independence(const PotentialSpec& spec, FormKind kind, const Path& first, const Path& second,
                                 const DevelopOptions& opt = {}) {
    if (first.vertices.empty() || second.vertices.empty() ||
        (first.vertices.front() - second.vertices.front()).norm() > 0.0 ||
        (first.vertices.back() - second.vertices.back()).norm() > 1e-14) {
        throw Error(ErrorKind::Argument, "paths must share start and end points");
    }
    for (const auto& path : {first, second})
        for (const auto& v : path.vertices) check_domain(spec, v);
    const MatrixField field = jet_form_field(spec, kind);
    const CMatrix a0 = initial_frame(field(first.vertices.front()), kind);
    const CMatrix a1 = transport(field, first, a0, opt.transport).a;
    const CMatrix a2 = transport(field, second, a0, opt.transport).a;
    return max_abs(a1 - a2);
}

} // namespace jetcurv
