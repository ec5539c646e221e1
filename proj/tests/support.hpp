// Shared helpers for the test binaries: seeded sample points and an
// independent finite-difference curvature oracle.

#pragma once

#include "jetcurv/kahler.hpp"
#include "jetcurv/potential.hpp"
#include "jetcurv/registry.hpp"
#include "jetcurv/wirtinger.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace testing_support {

using jetcurv::CMatrix;
using jetcurv::Complex;
using jetcurv::Point;

/// Uniform point in the ball of the given radius.
inline Point random_point(int n, double radius, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Point z(n);
    for (int i = 0; i < n; ++i) z(i) = Complex(normal(rng), normal(rng));
    const double r = radius * std::pow(unit(rng), 1.0 / (2.0 * n));
    return z * (r / z.norm());
}

inline std::vector<Point> random_points(int n, double radius, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Point> pts;
    for (int i = 0; i < count; ++i) pts.push_back(random_point(n, radius, rng));
    return pts;
}

/// count x count grid over Re z1 and Im z1 in [-half, half]; other coordinates fixed at `rest`.
inline std::vector<Point> square_grid(int n, double half, int count, Complex rest = {}) {
    std::vector<Point> pts;
    for (int a = 0; a < count; ++a)
        for (int b = 0; b < count; ++b) {
            Point z = Point::Constant(n, rest);
            const double x = count == 1 ? 0.0 : -half + 2.0 * half * a / (count - 1);
            const double y = count == 1 ? 0.0 : -half + 2.0 * half * b / (count - 1);
            z(0) = Complex(x, y);
            pts.push_back(z);
        }
    return pts;
}

inline double max_rel_diff(const jetcurv::WirtingerJet& a, const jetcurv::WirtingerJet& b) {
    double worst = 0.0;
    for (int i = 0; i < a.size(); ++i) {
        const double scale = std::max(1.0, std::abs(b.by_index(i)));
        worst = std::max(worst, std::abs(a.by_index(i) - b.by_index(i)) / scale);
    }
    return worst;
}

/**
 * Riemann tensor from finite differences of the metric field alone:
 * R_{i jb k lb} = -d_k dbar_l g_{i jb} + g^{p qb} (dbar_l g_{p jb}) (d_k g_{i qb}).
 * Real partials use central differences with one Richardson halving.
 * Returned as a flat vector indexed ((i n + j) n + k) n + l.
 */
inline std::vector<Complex> fd_riemann(const jetcurv::PotentialSpec& spec, const Point& z, double h = 1e-2) {
    const int n = spec.n;
    auto metric = [&](const Point& p) { return jetcurv::metric_at(jetcurv::eval_jet(spec, p, 2)).g_lower; };
    auto dir = [&](int a) {
        Point e = Point::Zero(n);
        e(a % n) = a < n ? Complex(1.0, 0.0) : Complex(0.0, 1.0);
        return e;
    };
    auto first = [&](int a, double s) {
        return CMatrix((metric(Point(z + s * dir(a))) - metric(Point(z - s * dir(a)))) / (2.0 * s));
    };
    auto second = [&](int a, int b, double s) {
        if (a == b) {
            return CMatrix((metric(Point(z + s * dir(a))) - 2.0 * metric(z) + metric(Point(z - s * dir(a)))) /
                           (s * s));
        }
        const Point ea = dir(a);
        const Point eb = dir(b);
        return CMatrix((metric(Point(z + s * ea + s * eb)) - metric(Point(z + s * ea - s * eb)) -
                        metric(Point(z - s * ea + s * eb)) + metric(Point(z - s * ea - s * eb))) /
                       (4.0 * s * s));
    };
    auto rich1 = [&](int a) { return CMatrix((4.0 * first(a, h / 2) - first(a, h)) / 3.0); };
    auto rich2 = [&](int a, int b) { return CMatrix((4.0 * second(a, b, h / 2) - second(a, b, h)) / 3.0); };

    const Complex I(0.0, 1.0);
    std::vector<CMatrix> d(n), dbar(n);
    for (int k = 0; k < n; ++k) {
        const CMatrix dx = rich1(k);
        const CMatrix dy = rich1(n + k);
        d[k] = 0.5 * (dx - I * dy);
        dbar[k] = 0.5 * (dx + I * dy);
    }
    const CMatrix g = metric(z);
    const CMatrix g_up = g.inverse().transpose();
    std::vector<Complex> r(static_cast<std::size_t>(n * n * n * n));
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
            const CMatrix ddbar =
                0.25 * (rich2(k, l) + rich2(n + k, n + l) + I * (rich2(k, n + l) - rich2(n + k, l)));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    Complex v = -ddbar(i, j);
                    for (int p = 0; p < n; ++p)
                        for (int q = 0; q < n; ++q) v += g_up(p, q) * dbar[l](p, j) * d[k](i, q);
                    r[static_cast<std::size_t>(((i * n + j) * n + k) * n + l)] = v;
                }
        }
    return r;
}

/// max |R_analytic - R_fd| / max(1, |R_analytic|_max).
inline double riemann_oracle_gap(const jetcurv::PotentialSpec& spec, const Point& z) {
    const int n = spec.n;
    const auto analytic = jetcurv::riemann_at(jetcurv::eval_jet(spec, z, 4));
    const auto fd = fd_riemann(spec, z);
    double gap = 0.0;
    double scale = 1.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    const Complex a = analytic(i, j, k, l);
                    scale = std::max(scale, std::abs(a));
                    gap = std::max(gap, std::abs(a - fd[static_cast<std::size_t>(((i * n + j) * n + k) * n + l)]));
                }
    return gap / scale;
}

/// Sample radius that keeps every registry family well inside its domain.
inline constexpr double kSafeRadius = 0.6;

} // namespace testing_support
