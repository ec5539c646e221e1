/**
 * @file potential.hpp
 * @brief Kahler potential descriptions, domain checks, scalar evaluation and
 *        Taylor expansion in Wirtinger variables.
 *
 * Built-in families:
 *   fubini_study     phi = log(1 + |z|^2)
 *   hyperbolic       phi = -log(1 - |z|^2)
 *   euclidean        phi = |z|^2
 *   gl_pullback_fs   phi = log |A (1, z)|^2                     (A invertible)
 *   u1n_pullback_ch  phi = -log <A(1,z), A(1,z)>_{1,n} + log |(A(1,z))_0|^2
 *                    i.e. -log(1 - |zeta|^2) at zeta = affine chart of A(1,z),
 *                    with A preserving diag(1,-1,...,-1)
 *   perturbed_fs     phi = log(1 + |z|^2) + eps * sum_i (Re z^i)^4
 *   polynomial       phi = sum c_{ab} z^a zbar^b   (c_{ba} = conj c_{ab})
 *
 * A spec may also carry a gauge normalization, in which case it describes the
 * base potential written in normalized coordinates w (see gauge.hpp).
 */

#pragma once

#include "jetcurv/series.hpp"
#include "jetcurv/types.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace jetcurv {

enum class PotentialKind {
    FubiniStudy,
    Hyperbolic,
    Euclidean,
    GlPullbackFs,
    U1nPullbackCh,
    PerturbedFs,
    Polynomial,
};

inline std::string_view to_string(PotentialKind k) {
    switch (k) {
    case PotentialKind::FubiniStudy: return "fubini_study";
    case PotentialKind::Hyperbolic: return "hyperbolic";
    case PotentialKind::Euclidean: return "euclidean";
    case PotentialKind::GlPullbackFs: return "gl_pullback_fs";
    case PotentialKind::U1nPullbackCh: return "u1n_pullback_ch";
    case PotentialKind::PerturbedFs: return "perturbed_fs";
    case PotentialKind::Polynomial: return "polynomial";
    }
    return "unknown";
}

inline std::optional<PotentialKind> kind_from_string(std::string_view s) {
    for (auto k : {PotentialKind::FubiniStudy, PotentialKind::Hyperbolic, PotentialKind::Euclidean,
                   PotentialKind::GlPullbackFs, PotentialKind::U1nPullbackCh,
                   PotentialKind::PerturbedFs, PotentialKind::Polynomial}) {
        if (to_string(k) == s) return k;
    }
    return std::nullopt;
}

struct PolynomialTerm {
    std::vector<int> alpha;
    std::vector<int> beta;
    Complex c;
};

struct GaugeNormalization;

struct PotentialSpec {
    PotentialKind kind = PotentialKind::FubiniStudy;
    int n = 1;
    double radius = 1.0;
    CMatrix matrix;                        // gl_pullback_fs, u1n_pullback_ch
    double epsilon = 0.0;                  // perturbed_fs
    std::vector<PolynomialTerm> terms;     // polynomial
    std::shared_ptr<const GaugeNormalization> gauge;

    bool is_normalized() const { return static_cast<bool>(gauge); }
};

/**
 * Normalized coordinates w around a base point p of `base`:
 *   z(w)    = p + L w + 1/2 Gamma(w, w)
 *   phi'(w) = phi(z(w)) - 2 Re(c + a_i w^i + 1/2 b_ij w^i w^j)
 */
struct GaugeNormalization {
    PotentialSpec base;
    Point base_point;
    CMatrix linear;              // L
    std::vector<Complex> gamma;  // Gamma^a_{ik} at [(a * n + i) * n + k], symmetric in i,k
    double c = 0.0;
    CVector a;
    CMatrix b;

    int n() const { return static_cast<int>(base_point.size()); }

    Complex gamma_at(int a_idx, int i, int k) const {
        const int dim = n();
        return gamma[static_cast<std::size_t>((a_idx * dim + i) * dim + k)];
    }

    Point map(const Point& w) const {
        Point z = base_point + linear * w;
        const int dim = n();
        for (int a_idx = 0; a_idx < dim; ++a_idx) {
            Complex q{};
            for (int i = 0; i < dim; ++i)
                for (int k = 0; k < dim; ++k) q += gamma_at(a_idx, i, k) * w(i) * w(k);
            z(a_idx) += 0.5 * q;
        }
        return z;
    }

    /// c + a.w + 1/2 w^T b w
    Complex holomorphic_shift(const Point& w) const {
        return c + a.cwiseProduct(w).sum() + 0.5 * Complex((w.transpose() * b * w)(0, 0));
    }
};

namespace detail {

/// (1, z) as a column vector.
inline CVector homogeneous(const Point& z) {
    CVector v(z.size() + 1);
    v(0) = 1.0;
    v.tail(z.size()) = z;
    return v;
}

inline double form_1n(const CVector& v) {
    double s = std::norm(v(0));
    for (int i = 1; i < v.size(); ++i) s -= std::norm(v(i));
    return s;
}

inline CMatrix signature_diag(int size) {
    CMatrix j = CMatrix::Identity(size, size);
    for (int i = 1; i < size; ++i) j(i, i) = -1.0;
    return j;
}

} // namespace detail

inline void validate(const PotentialSpec& spec) {
    if (spec.n < 1 || spec.n > kMaxDimension) {
        throw Error(ErrorKind::Argument, "dimension n must lie in 1.." + std::to_string(kMaxDimension));
    }
    if (!(spec.radius > 0.0)) throw Error(ErrorKind::Argument, "domain radius must be positive");
    if (spec.gauge) return;
    switch (spec.kind) {
    case PotentialKind::Hyperbolic:
        if (spec.radius >= 1.0) throw Error(ErrorKind::Argument, "hyperbolic domain radius must be < 1");
        break;
    case PotentialKind::GlPullbackFs:
    case PotentialKind::U1nPullbackCh: {
        if (spec.matrix.rows() != spec.n + 1 || spec.matrix.cols() != spec.n + 1) {
            throw Error(ErrorKind::Argument, "pullback matrix must be (n+1)x(n+1)");
        }
        Eigen::JacobiSVD<CMatrix> svd(spec.matrix);
        const auto& s = svd.singularValues();
        if (s(s.size() - 1) <= 1e-12 * s(0)) throw Error(ErrorKind::Argument, "pullback matrix is singular");
        if (spec.kind == PotentialKind::U1nPullbackCh) {
            if (spec.radius >= 1.0) throw Error(ErrorKind::Argument, "u1n_pullback_ch domain radius must be < 1");
            const CMatrix j = detail::signature_diag(spec.n + 1);
            if (max_abs(spec.matrix.adjoint() * j * spec.matrix - j) > 1e-12) {
                throw Error(ErrorKind::Argument, "u1n_pullback_ch matrix does not preserve diag(1,-1,...,-1)");
            }
        }
        break;
    }
    case PotentialKind::Polynomial: {
        std::map<std::pair<std::vector<int>, std::vector<int>>, Complex> coeff;
        for (const auto& t : spec.terms) {
            if (static_cast<int>(t.alpha.size()) != spec.n || static_cast<int>(t.beta.size()) != spec.n) {
                throw Error(ErrorKind::Argument, "polynomial multi-index length must equal n");
            }
            if (std::any_of(t.alpha.begin(), t.alpha.end(), [](int v) { return v < 0; }) ||
                std::any_of(t.beta.begin(), t.beta.end(), [](int v) { return v < 0; })) {
                throw Error(ErrorKind::Argument, "polynomial exponents must be non-negative");
            }
            coeff[{t.alpha, t.beta}] += t.c;
        }
        for (const auto& [key, c] : coeff) {
            auto it = coeff.find({key.second, key.first});
            const Complex mirror = it == coeff.end() ? Complex{} : it->second;
            if (std::abs(mirror - std::conj(c)) > 1e-12) {
                throw Error(ErrorKind::Argument, "polynomial coefficients violate reality c_ba = conj(c_ab)");
            }
        }
        break;
    }
    default:
        break;
    }
}

inline bool in_domain(const PotentialSpec& spec, const Point& z) {
    if (z.size() != spec.n) return false;
    if (spec.gauge) return in_domain(spec.gauge->base, spec.gauge->map(z));
    if (!(z.norm() < spec.radius)) return false;
    switch (spec.kind) {
    case PotentialKind::Hyperbolic: return 1.0 - norm_sq(z) > 0.0;
    case PotentialKind::U1nPullbackCh: return detail::form_1n(spec.matrix * detail::homogeneous(z)) > 0.0;
    case PotentialKind::GlPullbackFs: return (spec.matrix * detail::homogeneous(z)).squaredNorm() > 0.0;
    default: return true;
    }
}

inline void check_domain(const PotentialSpec& spec, const Point& z) {
    if (z.size() != spec.n) {
        throw Error(ErrorKind::Argument, "point dimension does not match potential dimension");
    }
    if (!in_domain(spec, z)) {
        std::ostringstream os;
        os << "point outside the domain of " << to_string(spec.kind);
        throw Error(ErrorKind::Domain, os.str());
    }
}

/// Direct scalar evaluation of phi(z).
inline double evaluate(const PotentialSpec& spec, const Point& z) {
    check_domain(spec, z);
    if (spec.gauge) {
        const auto& g = *spec.gauge;
        return evaluate(g.base, g.map(z)) - 2.0 * g.holomorphic_shift(z).real();
    }
    const double r2 = norm_sq(z);
    switch (spec.kind) {
    case PotentialKind::FubiniStudy: return std::log1p(r2);
    case PotentialKind::Hyperbolic: return -std::log1p(-r2);
    case PotentialKind::Euclidean: return r2;
    case PotentialKind::GlPullbackFs: return std::log((spec.matrix * detail::homogeneous(z)).squaredNorm());
    case PotentialKind::U1nPullbackCh: {
        const CVector v = spec.matrix * detail::homogeneous(z);
        return -std::log(detail::form_1n(v)) + std::log(std::norm(v(0)));
    }
    case PotentialKind::PerturbedFs: {
        double pert = 0.0;
        for (int i = 0; i < z.size(); ++i) pert += std::pow(z(i).real(), 4);
        return std::log1p(r2) + spec.epsilon * pert;
    }
    case PotentialKind::Polynomial: {
        Complex sum{};
        for (const auto& t : spec.terms) {
            Complex m = t.c;
            for (int i = 0; i < spec.n; ++i) {
                m *= std::pow(z(i), t.alpha[i]) * std::pow(std::conj(z(i)), t.beta[i]);
            }
            sum += m;
        }
        return sum.real();
    }
    }
    return 0.0;
}

namespace detail {

inline std::shared_ptr<const MonomialTable> wirtinger_table(int n, int order) {
    return MonomialTable::get(2 * n, order);
}

/// Series of z^i = z0^i + dz^i.
inline Series holo_coordinate(const std::shared_ptr<const MonomialTable>& t, const Point& z0, int i) {
    return Series::variable(t, i, z0(i));
}

inline Series anti_coordinate(const std::shared_ptr<const MonomialTable>& t, const Point& z0, int i) {
    const int n = static_cast<int>(z0.size());
    return Series::variable(t, n + i, std::conj(z0(i)));
}

/// Holomorphic linear forms l_a(z) = (A (1, z))_a, one series per row.
inline std::vector<Series> linear_forms(const std::shared_ptr<const MonomialTable>& t, const CMatrix& a,
                                        const Point& z0) {
    const int n = static_cast<int>(z0.size());
    std::vector<Series> out;
    for (int row = 0; row <= n; ++row) {
        Series s = Series::constant(t, a(row, 0));
        for (int i = 0; i < n; ++i) s += holo_coordinate(t, z0, i) * a(row, i + 1);
        out.push_back(std::move(s));
    }
    return out;
}

inline Series abs_sq_sum(const std::shared_ptr<const MonomialTable>& t, const Point& z0) {
    Series s = Series::constant(t, 0.0);
    for (int i = 0; i < z0.size(); ++i) s += holo_coordinate(t, z0, i) * anti_coordinate(t, z0, i);
    return s;
}

inline void require_positive(const Series& q, const char* what) {
    if (!(q.constant_term().real() > 0.0)) throw Error(ErrorKind::Domain, what);
}

} // namespace detail

/**
 * Taylor series of phi(z0 + dz) in the 2n Wirtinger variables, truncated at
 * total degree `order`.
 */
inline Series potential_series(const PotentialSpec& spec, const Point& z0, int order) {
    check_domain(spec, z0);
    const int n = spec.n;
    auto t = detail::wirtinger_table(n, order);

    if (spec.gauge) {
        const auto& g = *spec.gauge;
        const Point base_z = g.map(z0);
        const Series base = potential_series(g.base, base_z, order);
        // dz^a = (L + Gamma(w0, .)) dw + 1/2 Gamma(dw, dw)
        std::vector<Series> args;
        for (int a_idx = 0; a_idx < n; ++a_idx) {
            Series s(t);
            for (int i = 0; i < n; ++i) {
                Complex lin = g.linear(a_idx, i);
                for (int k = 0; k < n; ++k) lin += g.gamma_at(a_idx, i, k) * z0(k);
                s += Series::variable(t, i) * lin;
            }
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < n; ++k)
                    s += Series::variable(t, i) * Series::variable(t, k) * (0.5 * g.gamma_at(a_idx, i, k));
            args.push_back(std::move(s));
        }
        for (int a_idx = 0; a_idx < n; ++a_idx) args.push_back(conjugate_swap(args[a_idx]));
        Series out = base.substitute(args);

        Series shift = Series::constant(t, g.c);
        for (int i = 0; i < n; ++i) shift += detail::holo_coordinate(t, z0, i) * g.a(i);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                shift += detail::holo_coordinate(t, z0, i) * detail::holo_coordinate(t, z0, j) * (0.5 * g.b(i, j));
        out -= shift;
        out -= conjugate_swap(shift);
        return out;
    }

    switch (spec.kind) {
    case PotentialKind::FubiniStudy:
        return log(detail::abs_sq_sum(t, z0) + 1.0);
    case PotentialKind::Hyperbolic: {
        Series q = Series::constant(t, 1.0) - detail::abs_sq_sum(t, z0);
        detail::require_positive(q, "point outside the hyperbolic ball");
        return log(q) * -1.0;
    }
    case PotentialKind::Euclidean:
        return detail::abs_sq_sum(t, z0);
    case PotentialKind::GlPullbackFs: {
        Series q(t);
        for (const auto& l : detail::linear_forms(t, spec.matrix, z0)) q += l * conjugate_swap(l);
        return log(q);
    }
    case PotentialKind::U1nPullbackCh: {
        const auto forms = detail::linear_forms(t, spec.matrix, z0);
        const Series lead = forms[0] * conjugate_swap(forms[0]);
        Series q = lead;
        for (int a_idx = 1; a_idx <= n; ++a_idx) q -= forms[a_idx] * conjugate_swap(forms[a_idx]);
        detail::require_positive(q, "image of the point leaves the positive cone");
        return log(lead) - log(q);
    }
    case PotentialKind::PerturbedFs: {
        Series out = log(detail::abs_sq_sum(t, z0) + 1.0);
        for (int i = 0; i < n; ++i) {
            Series x = (detail::holo_coordinate(t, z0, i) + detail::anti_coordinate(t, z0, i)) * 0.5;
            Series x2 = x * x;
            out += x2 * x2 * spec.epsilon;
        }
        return out;
    }
    case PotentialKind::Polynomial: {
        Series out(t);
        for (const auto& term : spec.terms) {
            Series m = Series::constant(t, term.c);
            for (int i = 0; i < n; ++i) {
                for (int p = 0; p < term.alpha[i]; ++p) m = m * detail::holo_coordinate(t, z0, i);
                for (int p = 0; p < term.beta[i]; ++p) m = m * detail::anti_coordinate(t, z0, i);
            }
            out += m;
        }
        return out;
    }
    }
    return Series(t);
}

} // namespace jetcurv
