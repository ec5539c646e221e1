/**
 * @file series.hpp
 * @brief Truncated multivariate Taylor series with complex coefficients.
 *
 * A Series is a polynomial in `nvars` independent variables truncated at total
 * degree `max_degree`. For a point z in C^n the potential is expanded in the
 * 2n variables (dz^1..dz^n, dzbar^1..dzbar^n), treated as independent, so that
 * the Wirtinger derivative D^{alpha,beta} phi equals alpha! beta! times the
 * coefficient of dz^alpha dzbar^beta.
 *
 * Monomials are stored in graded lexicographic order: ascending total degree,
 * and inside one degree the exponent vectors sorted lexicographically from the
 * largest power of the first variable downwards. With two variables (x, y) and
 * degree 2 the order is 1, x, y, x^2, xy, y^2.
 */

#pragma once

#include "jetcurv/types.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

namespace jetcurv {

class MonomialTable {
public:
    struct Product {
        int lhs;
        int rhs;
        int out;
    };

    MonomialTable(int nvars, int max_degree)
        : nvars_(nvars)
        , max_degree_(max_degree)
    {
        std::vector<int> e(static_cast<std::size_t>(nvars), 0);
        for (int d = 0; d <= max_degree; ++d) {
            emit_degree(e, 0, d, d);
        }
        for (int a = 0; a < size(); ++a) {
            for (int b = 0; b < size(); ++b) {
                if (degree(a) + degree(b) > max_degree_) continue;
                std::vector<int> sum(static_cast<std::size_t>(nvars_));
                for (int v = 0; v < nvars_; ++v) sum[v] = exponent(a, v) + exponent(b, v);
                products_.push_back({a, b, index_of(sum)});
            }
        }
    }

    int nvars() const { return nvars_; }
    int max_degree() const { return max_degree_; }
    int size() const { return static_cast<int>(degrees_.size()); }
    int degree(int idx) const { return degrees_[idx]; }
    int exponent(int idx, int var) const { return exponents_[idx * nvars_ + var]; }

    std::span<const int> exponents(int idx) const {
        return {exponents_.data() + static_cast<std::ptrdiff_t>(idx) * nvars_,
                static_cast<std::size_t>(nvars_)};
    }

    /// Index of an exponent vector, or -1 when its degree exceeds the truncation.
    int index_of(std::span<const int> e) const {
        auto it = lookup_.find(key(e));
        return it == lookup_.end() ? -1 : it->second;
    }

    const std::vector<Product>& products() const { return products_; }

    /// Shared immutable table; cached per thread.
    static std::shared_ptr<const MonomialTable> get(int nvars, int max_degree) {
        thread_local std::map<std::pair<int, int>, std::shared_ptr<const MonomialTable>> cache;
        auto& slot = cache[{nvars, max_degree}];
        if (!slot) slot = std::make_shared<const MonomialTable>(nvars, max_degree);
        return slot;
    }

private:
    void emit_degree(std::vector<int>& e, int var, int remaining, int total) {
        if (var == nvars_ - 1 || nvars_ == 0) {
            if (nvars_ == 0) {
                if (remaining != 0) return;
            } else {
                e[var] = remaining;
            }
            lookup_.emplace(key(e), size());
            exponents_.insert(exponents_.end(), e.begin(), e.end());
            degrees_.push_back(total);
            return;
        }
        for (int p = remaining; p >= 0; --p) {
            e[var] = p;
            emit_degree(e, var + 1, remaining - p, total);
        }
        e[var] = 0;
    }

    std::uint64_t key(std::span<const int> e) const {
        std::uint64_t k = 0;
        int deg = 0;
        for (int v : e) {
            if (v < 0) return ~std::uint64_t{0};
            deg += v;
            k = k * static_cast<std::uint64_t>(max_degree_ + 1) + static_cast<std::uint64_t>(v);
        }
        return deg > max_degree_ ? ~std::uint64_t{0} : k;
    }

    int nvars_;
    int max_degree_;
    std::vector<int> exponents_;
    std::vector<int> degrees_;
    std::unordered_map<std::uint64_t, int> lookup_;
    std::vector<Product> products_;
};

class Series {
public:
    Series() = default;

    explicit Series(std::shared_ptr<const MonomialTable> table)
        : table_(std::move(table))
        , coeffs_(static_cast<std::size_t>(table_->size()), Complex{})
    {}

    static Series constant(std::shared_ptr<const MonomialTable> table, Complex value) {
        Series s(std::move(table));
        s.coeffs_[0] = value;
        return s;
    }

    /// value + x_var
    static Series variable(std::shared_ptr<const MonomialTable> table, int var, Complex value = {}) {
        Series s = constant(table, value);
        if (table->max_degree() >= 1) {
            std::vector<int> e(static_cast<std::size_t>(table->nvars()), 0);
            e[var] = 1;
            s.coeffs_[table->index_of(e)] = 1.0;
        }
        return s;
    }

    const MonomialTable& table() const { return *table_; }
    const std::shared_ptr<const MonomialTable>& table_ptr() const { return table_; }
    int size() const { return static_cast<int>(coeffs_.size()); }

    Complex constant_term() const { return coeffs_[0]; }
    Complex& operator[](int idx) { return coeffs_[idx]; }
    Complex operator[](int idx) const { return coeffs_[idx]; }

    Series& operator+=(const Series& o) {
        for (int i = 0; i < size(); ++i) coeffs_[i] += o.coeffs_[i];
        return *this;
    }
    Series& operator-=(const Series& o) {
        for (int i = 0; i < size(); ++i) coeffs_[i] -= o.coeffs_[i];
        return *this;
    }
    Series& operator*=(Complex s) {
        for (auto& c : coeffs_) c *= s;
        return *this;
    }
    Series& operator+=(Complex s) {
        coeffs_[0] += s;
        return *this;
    }

    friend Series operator+(Series a, const Series& b) { return a += b; }
    friend Series operator-(Series a, const Series& b) { return a -= b; }
    friend Series operator*(Series a, Complex s) { return a *= s; }
    friend Series operator*(Complex s, Series a) { return a *= s; }
    friend Series operator+(Series a, Complex s) { return a += s; }

    friend Series operator*(const Series& a, const Series& b) {
        Series out(a.table_);
        for (const auto& p : a.table_->products()) {
            out.coeffs_[p.out] += a.coeffs_[p.lhs] * b.coeffs_[p.rhs];
        }
        return out;
    }

    /**
     * Apply a scalar function given by its Taylor coefficients at the constant
     * term: f(c0 + q) = sum_k taylor[k] q^k. The truncation makes the sum finite.
     */
    Series compose(std::span<const Complex> taylor) const {
        Series q = *this;
        q.coeffs_[0] = 0.0;
        Series out = constant(table_, taylor.empty() ? Complex{} : taylor[0]);
        Series power = constant(table_, 1.0);
        const int kmax = std::min<int>(table_->max_degree(), static_cast<int>(taylor.size()) - 1);
        for (int k = 1; k <= kmax; ++k) {
            power = power * q;
            out += power * taylor[k];
        }
        return out;
    }

    /**
     * Substitute a series for every variable. All arguments must share one table
     * (the output table) and have zero constant term.
     */
    Series substitute(std::span<const Series> args) const {
        const auto& out_table = args.front().table_ptr();
        const int deg = out_table->max_degree();
        // powers[v][p] = args[v]^p
        std::vector<std::vector<Series>> powers(args.size());
        for (std::size_t v = 0; v < args.size(); ++v) {
            powers[v].push_back(constant(out_table, 1.0));
            for (int p = 1; p <= deg; ++p) powers[v].push_back(powers[v].back() * args[v]);
        }
        Series out(out_table);
        for (int idx = 0; idx < size(); ++idx) {
            if (coeffs_[idx] == Complex{} || table_->degree(idx) > deg) continue;
            Series term = constant(out_table, coeffs_[idx]);
            for (int v = 0; v < table_->nvars(); ++v) {
                const int p = table_->exponent(idx, v);
                if (p > 0) term = term * powers[v][p];
            }
            out += term;
        }
        return out;
    }

private:
    std::shared_ptr<const MonomialTable> table_;
    std::vector<Complex> coeffs_;
};

/// Taylor coefficients of log at c: log c, 1/c, -1/(2c^2), ...
inline std::vector<Complex> log_taylor(Complex c, int order) {
    std::vector<Complex> t{std::log(c)};
    Complex inv = 1.0 / c;
    Complex p = inv;
    for (int k = 1; k <= order; ++k) {
        t.push_back((k % 2 == 1 ? 1.0 : -1.0) * p / static_cast<double>(k));
        p *= inv;
    }
    return t;
}

inline std::vector<Complex> exp_taylor(Complex c, int order) {
    std::vector<Complex> t;
    Complex v = std::exp(c);
    double fact = 1.0;
    for (int k = 0; k <= order; ++k) {
        if (k > 0) fact *= k;
        t.push_back(v / fact);
    }
    return t;
}

inline Series log(const Series& s) {
    return s.compose(log_taylor(s.constant_term(), s.table().max_degree()));
}

inline Series exp(const Series& s) {
    return s.compose(exp_taylor(s.constant_term(), s.table().max_degree()));
}

/**
 * Complex conjugate of a series in (dz, dzbar) variables: conjugates the
 * coefficients and swaps the holomorphic and antiholomorphic halves.
 */
inline Series conjugate_swap(const Series& s) {
    const auto& t = s.table();
    const int n = t.nvars() / 2;
    Series out(s.table_ptr());
    std::vector<int> e(static_cast<std::size_t>(t.nvars()));
    for (int idx = 0; idx < s.size(); ++idx) {
        auto src = t.exponents(idx);
        for (int i = 0; i < n; ++i) {
            e[i] = src[n + i];
            e[n + i] = src[i];
        }
        out[t.index_of(e)] = std::conj(s[idx]);
    }
    return out;
}

} // namespace jetcurv
