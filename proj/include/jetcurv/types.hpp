/**
 * @file types.hpp
 * @brief Common numeric aliases and the error hierarchy used across jetcurv.
 */

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace jetcurv {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// A point of a coordinate ball in C^n.
using Point = Eigen::VectorXcd;

/// Largest complex dimension handled by the dense tensor code.
inline constexpr int kMaxDimension = 8;

/// Largest jet order supported by the analytic engine.
inline constexpr int kMaxAnalyticOrder = 5;

/// Largest jet order supported by the finite-difference adapter.
inline constexpr int kMaxFiniteDifferenceOrder = 4;

enum class ErrorKind {
    Domain,
    UnsupportedOrder,
    Evaluation,
    NotKahler,
    SingularForm,
    DegenerateForm,
    Argument,
    TransportAccuracy,
    NotFlat,
    LeftPositiveCone,
    Config,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what)
        , kind_(kind)
    {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Max-modulus entry of a complex matrix (the norm used for all residuals).
inline double max_abs(const CMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double sup_norm(const Point& z) {
    return z.size() == 0 ? 0.0 : z.cwiseAbs().maxCoeff();
}

/// Euclidean norm squared |z|^2 = sum |z^i|^2.
inline double norm_sq(const Point& z) { return z.squaredNorm(); }

} // namespace jetcurv
