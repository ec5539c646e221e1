/**
 * @file registry.hpp
 * @brief Built-in potentials and seeded random parameters for the pullback families.
 */

#pragma once

#include "jetcurv/potential.hpp"
#include "jetcurv/types.hpp"

#include <Eigen/QR>

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace jetcurv {

inline CMatrix random_complex_gaussian(int rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(2.0));
    CMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = Complex(normal(rng), normal(rng));
    return m;
}

/// I + 0.3 G with G complex Gaussian, redrawn until the condition number is below 4.
inline CMatrix random_well_conditioned(int size, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    while (true) {
        CMatrix a = CMatrix::Identity(size, size) + 0.3 * random_complex_gaussian(size, size, rng);
        Eigen::JacobiSVD<CMatrix> svd(a);
        const auto& s = svd.singularValues();
        if (s(0) / s(s.size() - 1) < 4.0) return a;
    }
}

inline CMatrix random_unitary(int size, std::mt19937_64& rng) {
    Eigen::HouseholderQR<CMatrix> qr(random_complex_gaussian(size, size, rng));
    CMatrix q = qr.householderQ();
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < size; ++j) {
        const Complex d = r(j, j);
        if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
    }
    return q;
}

/**
 * Element of U(1,n): a boost of rapidity t in [0.2, 0.5] mixing coordinates 0 and 1,
 * composed with a random phase on coordinate 0 and a random unitary on 1..n.
 */
inline CMatrix random_u1n(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> rapidity(0.2, 0.5);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    const double t = rapidity(rng);
    CMatrix boost = CMatrix::Identity(n + 1, n + 1);
    boost(0, 0) = boost(1, 1) = std::cosh(t);
    boost(0, 1) = boost(1, 0) = std::sinh(t);
    CMatrix rot = CMatrix::Identity(n + 1, n + 1);
    rot(0, 0) = std::polar(1.0, angle(rng));
    rot.bottomRightCorner(n, n) = random_unitary(n, rng);
    CMatrix a = boost * rot;
    // Re-orthonormalize against the form to push the defect to rounding level.
    const CMatrix j = detail::signature_diag(n + 1);
    for (int iter = 0; iter < 2; ++iter) {
        const CMatrix defect = a.adjoint() * j * a - j;
        a = a - 0.5 * a * j * defect;
    }
    return a;
}

inline PotentialSpec fubini_study(int n, double radius = 1.0) {
    PotentialSpec s;
    s.kind = PotentialKind::FubiniStudy;
    s.n = n;
    s.radius = radius;
    return s;
}

inline PotentialSpec hyperbolic(int n, double radius = 0.9) {
    PotentialSpec s;
    s.kind = PotentialKind::Hyperbolic;
    s.n = n;
    s.radius = radius;
    return s;
}

inline PotentialSpec euclidean(int n, double radius = 1.0) {
    PotentialSpec s;
    s.kind = PotentialKind::Euclidean;
    s.n = n;
    s.radius = radius;
    return s;
}

inline PotentialSpec gl_pullback_fs(int n, const CMatrix& a, double radius = 1.0) {
    PotentialSpec s;
    s.kind = PotentialKind::GlPullbackFs;
    s.n = n;
    s.radius = radius;
    s.matrix = a;
    return s;
}

inline PotentialSpec gl_pullback_fs(int n, std::uint64_t seed) {
    return gl_pullback_fs(n, random_well_conditioned(n + 1, seed));
}

inline PotentialSpec u1n_pullback_ch(int n, const CMatrix& a, double radius = 0.9) {
    PotentialSpec s;
    s.kind = PotentialKind::U1nPullbackCh;
    s.n = n;
    s.radius = radius;
    s.matrix = a;
    return s;
}

inline PotentialSpec u1n_pullback_ch(int n, std::uint64_t seed) {
    return u1n_pullback_ch(n, random_u1n(n, seed));
}

inline PotentialSpec perturbed_fs(int n, double epsilon = 0.1, double radius = 1.0) {
    PotentialSpec s;
    s.kind = PotentialKind::PerturbedFs;
    s.n = n;
    s.radius = radius;
    s.epsilon = epsilon;
    return s;
}

/// The six families used by the equivalence sweeps, pullbacks drawn from `seed`.
inline std::vector<PotentialSpec> registry(int n, std::uint64_t seed) {
    return {fubini_study(n), hyperbolic(n), euclidean(n),
            gl_pullback_fs(n, seed), u1n_pullback_ch(n, seed), perturbed_fs(n)};
}

/// Expected chsc value of a registry family, or NaN when the curvature is not constant.
inline double expected_kappa(PotentialKind kind) {
    switch (kind) {
    case PotentialKind::FubiniStudy:
    case PotentialKind::GlPullbackFs: return 2.0;
    case PotentialKind::Hyperbolic:
    case PotentialKind::U1nPullbackCh: return -2.0;
    default: return std::nan("");
    }
}

inline PotentialSpec builtin(const std::string& name, int n, std::uint64_t seed, double epsilon = 0.1) {
    const auto kind = kind_from_string(name);
    if (!kind) throw Error(ErrorKind::Config, "unknown builtin potential: " + name);
    switch (*kind) {
    case PotentialKind::FubiniStudy: return fubini_study(n);
    case PotentialKind::Hyperbolic: return hyperbolic(n);
    case PotentialKind::Euclidean: return euclidean(n);
    case PotentialKind::GlPullbackFs: return gl_pullback_fs(n, seed);
    case PotentialKind::U1nPullbackCh: return u1n_pullback_ch(n, seed);
    case PotentialKind::PerturbedFs: return perturbed_fs(n, epsilon);
    case PotentialKind::Polynomial: break;
    }
    throw Error(ErrorKind::Config, "polynomial potentials must be loaded from a file");
}

} // namespace jetcurv
