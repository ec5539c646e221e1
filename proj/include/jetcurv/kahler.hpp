/**
 * @file kahler.hpp
 * @brief Kahler metric, Riemann tensor and holomorphic sectional curvature
 *        from potential jets.
 *
 * Conventions: g_{ij} = d_i dbar_j phi, g^{ij} = (g^{-1})^T, and
 *   R_{i jb k lb} = -d_k dbar_l g_{i jb} + g^{p qb} (dbar_l g_{p jb}) (d_k g_{i qb}).
 * A metric has constant holomorphic sectional curvature kappa iff
 *   R_{i jb k lb} = kappa/2 (g_{i jb} g_{k lb} + g_{i lb} g_{k jb}).
 */

#pragma once

#include "jetcurv/types.hpp"
#include "jetcurv/wirtinger.hpp"

#include <algorithm>
#include <vector>

namespace jetcurv {

struct MetricData {
    Point z;
    CMatrix g_lower;  // g_{i jb}
    CMatrix g_upper;  // g^{i jb} = (g_lower^{-1})^T
};

class CurvatureTensor {
public:
    CurvatureTensor() = default;
    CurvatureTensor(Point z, int n)
        : z_(std::move(z))
        , n_(n)
        , r_(static_cast<std::size_t>(n * n * n * n), Complex{})
    {}

    int n() const { return n_; }
    const Point& point() const { return z_; }

    Complex& operator()(int i, int j, int k, int l) { return r_[index(i, j, k, l)]; }
    Complex operator()(int i, int j, int k, int l) const { return r_[index(i, j, k, l)]; }

    /// Largest violation of the Kahler pair symmetries and of reality.
    double symmetry_defect() const {
        double worst = 0.0;
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                for (int k = 0; k < n_; ++k)
                    for (int l = 0; l < n_; ++l) {
                        const Complex r = (*this)(i, j, k, l);
                        worst = std::max(worst, std::abs(r - (*this)(k, j, i, l)));
                        worst = std::max(worst, std::abs(r - (*this)(i, l, k, j)));
                        worst = std::max(worst, std::abs(std::conj(r) - (*this)(j, i, l, k)));
                    }
        return worst;
    }

private:
    std::size_t index(int i, int j, int k, int l) const {
        return static_cast<std::size_t>(((i * n_ + j) * n_ + k) * n_ + l);
    }

    Point z_;
    int n_ = 0;
    std::vector<Complex> r_;
};

inline void require_order(const WirtingerJet& jet, int order) {
    if (jet.order() < order) {
        throw Error(ErrorKind::UnsupportedOrder, "jet of order " + std::to_string(order) + " required");
    }
}

inline MetricData metric_at(const WirtingerJet& jet) {
    require_order(jet, 2);
    const int n = jet.n();
    MetricData m;
    m.z = jet.point();
    m.g_lower.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m.g_lower(i, j) = jet.d({i}, {j});
    Eigen::LLT<CMatrix> llt(m.g_lower);
    if (llt.info() != Eigen::Success) {
        throw Error(ErrorKind::NotKahler, "not a Kahler metric at z: g is not positive definite");
    }
    m.g_upper = llt.solve(CMatrix::Identity(n, n)).transpose();
    return m;
}

inline CurvatureTensor riemann_at(const WirtingerJet& jet) {
    require_order(jet, 4);
    const MetricData m = metric_at(jet);
    const int n = jet.n();
    CurvatureTensor r(jet.point(), n);
    // dg[(k, i, q)] = d_k g_{i qb};  dbg[(l, p, j)] = dbar_l g_{p jb}
    std::vector<Complex> dg(static_cast<std::size_t>(n * n * n));
    std::vector<Complex> dbg(static_cast<std::size_t>(n * n * n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                dg[(a * n + b) * n + c] = jet.d({a, b}, {c});
                dbg[(a * n + b) * n + c] = jet.d({b}, {a, c});
            }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    Complex v = -jet.d({i, k}, {j, l});
                    for (int p = 0; p < n; ++p)
                        for (int q = 0; q < n; ++q) {
                            v += m.g_upper(p, q) * dbg[(l * n + p) * n + j] * dg[(k * n + i) * n + q];
                        }
                    r(i, j, k, l) = v;
                }
    return r;
}

/// Max over index quadruples of |R - kappa/2 (g g + g g)|, divided by max(1, |g|_max^2).
inline double chsc_residual(const MetricData& m, const CurvatureTensor& r, double kappa) {
    const int n = r.n();
    const auto& g = m.g_lower;
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    const Complex model = 0.5 * kappa * (g(i, j) * g(k, l) + g(i, l) * g(k, j));
                    worst = std::max(worst, std::abs(r(i, j, k, l) - model));
                }
    const double gmax = max_abs(g);
    return worst / std::max(1.0, gmax * gmax);
}

inline double chsc_residual(const WirtingerJet& jet, double kappa) {
    require_order(jet, 4);
    return chsc_residual(metric_at(jet), riemann_at(jet), kappa);
}

/// R(v, vb, v, vb) / g(v, vb)^2.
inline double hsc_of_direction(const WirtingerJet& jet, const CVector& v) {
    require_order(jet, 4);
    if (v.size() != jet.n()) throw Error(ErrorKind::Argument, "direction has wrong dimension");
    if (v.squaredNorm() == 0.0) throw Error(ErrorKind::Argument, "direction must be non-zero");
    const MetricData m = metric_at(jet);
    const CurvatureTensor r = riemann_at(jet);
    const int n = jet.n();
    Complex num{};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    num += r(i, j, k, l) * v(i) * std::conj(v(j)) * v(k) * std::conj(v(l));
    const Complex gvv = (v.transpose() * m.g_lower * v.conjugate())(0, 0);
    return num.real() / (gvv.real() * gvv.real());
}

} // namespace jetcurv
