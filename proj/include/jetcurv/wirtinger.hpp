/**
 * @file wirtinger.hpp
 * @brief Mixed Wirtinger jets D^{alpha,beta} phi of real potentials.
 *
 * Two engines produce the same WirtingerJet:
 *   - eval_jet: exact closed-form derivatives of the built-in families through
 *     truncated Taylor arithmetic (see series.hpp);
 *   - fd_jet: central finite differences of a black-box real function, with one
 *     Richardson halving, for user supplied potentials.
 */

#pragma once

#include "jetcurv/potential.hpp"
#include "jetcurv/series.hpp"
#include "jetcurv/types.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <initializer_list>
#include <map>
#include <vector>

namespace jetcurv {

class WirtingerJet {
public:
    WirtingerJet() = default;

    WirtingerJet(Point z, int order)
        : point_(std::move(z))
        , order_(order)
        , table_(MonomialTable::get(2 * static_cast<int>(point_.size()), order))
        , d_(static_cast<std::size_t>(table_->size()), Complex{})
    {}

    const Point& point() const { return point_; }
    int n() const { return static_cast<int>(point_.size()); }
    int order() const { return order_; }
    int size() const { return table_->size(); }
    const MonomialTable& table() const { return *table_; }

    /// Exponents are (alpha_1..alpha_n, beta_1..beta_n).
    Complex& by_index(int idx) { return d_[idx]; }
    Complex by_index(int idx) const { return d_[idx]; }

    Complex at(std::span<const int> alpha, std::span<const int> beta) const {
        std::array<int, 2 * kMaxDimension> e{};
        for (int i = 0; i < n(); ++i) {
            e[i] = alpha[i];
            e[n() + i] = beta[i];
        }
        const int idx = table_->index_of(std::span<const int>(e.data(), 2 * n()));
        if (idx < 0) throw Error(ErrorKind::UnsupportedOrder, "derivative order exceeds jet order");
        return d_[idx];
    }

    /**
     * Derivative by coordinate lists: d({i, k}, {j}) is d_i d_k dbar_j phi.
     * Indices are 0-based and may repeat.
     */
    Complex d(std::initializer_list<int> holo, std::initializer_list<int> anti) const {
        std::array<int, 2 * kMaxDimension> e{};
        for (int i : holo) ++e[i];
        for (int j : anti) ++e[n() + j];
        const int idx = table_->index_of(std::span<const int>(e.data(), 2 * n()));
        if (idx < 0) throw Error(ErrorKind::UnsupportedOrder, "derivative order exceeds jet order");
        return d_[idx];
    }

    double value() const { return d_[0].real(); }

    /// Replace D^{alpha,beta} and D^{beta,alpha} by their conjugate-symmetric average.
    void symmetrize() {
        std::vector<int> swapped(static_cast<std::size_t>(2 * n()));
        for (int idx = 0; idx < size(); ++idx) {
            auto e = table_->exponents(idx);
            for (int i = 0; i < n(); ++i) {
                swapped[i] = e[n() + i];
                swapped[n() + i] = e[i];
            }
            const int mirror = table_->index_of(swapped);
            if (mirror < idx) continue;
            const Complex avg = 0.5 * (d_[idx] + std::conj(d_[mirror]));
            d_[idx] = avg;
            d_[mirror] = std::conj(avg);
        }
    }

private:
    Point point_;
    int order_ = 0;
    std::shared_ptr<const MonomialTable> table_;
    std::vector<Complex> d_;
};

/// Converts Taylor coefficients to derivatives: D^{alpha,beta} = alpha! beta! c_{alpha,beta}.
inline WirtingerJet jet_from_series(const Series& s, const Point& z) {
    WirtingerJet jet(z, s.table().max_degree());
    for (int idx = 0; idx < s.size(); ++idx) {
        double fact = 1.0;
        for (int e : s.table().exponents(idx))
            for (int k = 2; k <= e; ++k) fact *= k;
        jet.by_index(idx) = s[idx] * fact;
    }
    jet.symmetrize();
    return jet;
}

/// Exact jet of a built-in (or gauge-normalized) potential.
inline WirtingerJet eval_jet(const PotentialSpec& spec, const Point& z, int order) {
    if (order < 0 || order > kMaxAnalyticOrder) {
        throw Error(ErrorKind::UnsupportedOrder, "analytic jets support orders 0.." +
                                                     std::to_string(kMaxAnalyticOrder));
    }
    return jet_from_series(potential_series(spec, z, order), z);
}

using RealFunction = std::function<double(const Point&)>;

struct FdJetOptions {
    /// First-order step; scaled by max(1, |z|_inf).
    double step = 1e-3;
    /// Multipliers applied to `step` for derivatives of total order 1..4, balancing
    /// truncation against the eps / h^k roundoff growth.
    std::array<double, 4> order_scale{1.0, 2.0, 4.0, 8.0};
};

namespace detail {

/// Central stencil for a d-th derivative in one variable: (offset, weight) in units of h.
inline std::vector<std::pair<int, double>> central_stencil(int d) {
    switch (d) {
    case 0: return {{0, 1.0}};
    case 1: return {{-1, -0.5}, {1, 0.5}};
    case 2: return {{-1, 1.0}, {0, -2.0}, {1, 1.0}};
    case 3: return {{-2, -0.5}, {-1, 1.0}, {1, -1.0}, {2, 0.5}};
    case 4: return {{-2, 1.0}, {-1, -4.0}, {0, 6.0}, {1, -4.0}, {2, 1.0}};
    default: throw Error(ErrorKind::UnsupportedOrder, "finite differences support orders up to 4");
    }
}

class FdEvaluator {
public:
    FdEvaluator(const RealFunction& f, const Point& z, double half_step)
        : f_(f)
        , z_(z)
        , half_step_(half_step)
    {}

    /// f at z + half_step * offset, offsets over (Re z^1..Re z^n, Im z^1..Im z^n).
    double at(const std::vector<int>& offset) {
        auto it = cache_.find(offset);
        if (it != cache_.end()) return it->second;
        const int n = static_cast<int>(z_.size());
        Point p = z_;
        for (int i = 0; i < n; ++i) p(i) += half_step_ * Complex(offset[i], offset[n + i]);
        const double v = f_(p);
        if (!std::isfinite(v)) throw Error(ErrorKind::Evaluation, "potential returned a non-finite value");
        cache_.emplace(offset, v);
        return v;
    }

    /// Tensor-product central difference of the real partial with exponents gamma at step 2*scale*half_step.
    double partial(std::span<const int> gamma, int scale) {
        std::vector<std::vector<std::pair<int, double>>> stencils;
        double denom = 1.0;
        for (int g : gamma) {
            stencils.push_back(central_stencil(g));
            denom *= std::pow(half_step_ * scale, g);
        }
        const std::size_t dims = gamma.size();
        std::vector<std::size_t> pos(dims, 0);
        std::vector<int> offset(dims, 0);
        double sum = 0.0;
        while (true) {
            double w = 1.0;
            for (std::size_t v = 0; v < dims; ++v) {
                offset[v] = stencils[v][pos[v]].first * scale;
                w *= stencils[v][pos[v]].second;
            }
            sum += w * at(offset);
            std::size_t v = 0;
            while (v < dims && ++pos[v] == stencils[v].size()) pos[v++] = 0;
            if (v == dims) break;
        }
        return sum / denom;
    }

private:
    const RealFunction& f_;
    Point z_;
    double half_step_;
    std::map<std::vector<int>, double> cache_;
};

} // namespace detail

/**
 * Finite-difference jet of a black-box potential. Wirtinger operators are
 * expanded into real partials via d = (d_x - i d_y)/2, dbar = (d_x + i d_y)/2;
 * each real partial uses a tensor-product central stencil with one Richardson
 * halving.
 */
inline WirtingerJet fd_jet(const RealFunction& phi, const Point& z, int order,
                           const FdJetOptions& options = {}) {
    if (order < 0 || order > kMaxFiniteDifferenceOrder) {
        throw Error(ErrorKind::UnsupportedOrder, "finite-difference jets support orders 0.." +
                                                     std::to_string(kMaxFiniteDifferenceOrder));
    }
    const int n = static_cast<int>(z.size());
    WirtingerJet jet(z, order);
    const double base = options.step * std::max(1.0, sup_norm(z));
    {
        detail::FdEvaluator ev(phi, z, base);
        jet.by_index(0) = ev.at(std::vector<int>(static_cast<std::size_t>(2 * n), 0));
    }

    const auto& table = jet.table();
    for (int k = 1; k <= order; ++k) {
        const double h = base * options.order_scale[k - 1];
        detail::FdEvaluator ev(phi, z, h / 2.0);
        auto real_table = MonomialTable::get(2 * n, k);
        std::map<int, double> partial_cache;
        auto real_partial = [&](int ridx) {
            auto it = partial_cache.find(ridx);
            if (it != partial_cache.end()) return it->second;
            auto gamma = real_table->exponents(ridx);
            const double coarse = ev.partial(gamma, 2);
            const double fine = ev.partial(gamma, 1);
            const double v = (4.0 * fine - coarse) / 3.0;
            partial_cache.emplace(ridx, v);
            return v;
        };

        for (int idx = 0; idx < table.size(); ++idx) {
            if (table.degree(idx) != k) continue;
            auto e = table.exponents(idx);
            // Operator polynomial in (d_x1..d_xn, d_y1..d_yn).
            Series op = Series::constant(real_table, 1.0);
            for (int i = 0; i < n; ++i) {
                const Series dx = Series::variable(real_table, i);
                const Series dy = Series::variable(real_table, n + i);
                const Series holo = (dx + dy * Complex(0.0, -1.0)) * 0.5;
                const Series anti = (dx + dy * Complex(0.0, 1.0)) * 0.5;
                for (int p = 0; p < e[i]; ++p) op = op * holo;
                for (int p = 0; p < e[n + i]; ++p) op = op * anti;
            }
            Complex value{};
            for (int ridx = 0; ridx < op.size(); ++ridx) {
                if (std::abs(op[ridx]) == 0.0) continue;
                value += op[ridx] * real_partial(ridx);
            }
            jet.by_index(idx) = value;
        }
    }
    jet.symmetrize();
    return jet;
}

/// Black-box view of a spec for fd_jet.
inline RealFunction scalar_function(const PotentialSpec& spec) {
    return [spec](const Point& z) { return evaluate(spec, z); };
}

} // namespace jetcurv
