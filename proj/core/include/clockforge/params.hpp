#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace clockforge {

/// Problem instance for N -> 1 qubit-clock distillation: number of copies N,
/// purity parameter lambda in (0,1], and input/output polar angles in (0,pi).
/// Trigonometric shorthands and the c0/c1 split are cached on construction.
struct ClockParams {
    int n = 1;
    double lambda = 1.0;
    double theta_in = std::numbers::pi / 2;
    double theta_out = std::numbers::pi / 2;

    double c0 = 0.0;        // (1 - lambda) / 2
    double c1 = 1.0;        // (1 + lambda) / 2
    double c_in = 0.0;      // cos(theta_in)
    double s_in = 1.0;      // sin(theta_in)
    double c_out = 0.0;     // cos(theta_out)
    double s_out = 1.0;     // sin(theta_out)
    double lambda_x = 1.0;  // lambda * sin(theta_in)
    double lambda_z = 0.0;  // lambda * cos(theta_in)

    ClockParams(int n_, double lambda_, double theta_in_, double theta_out_)
        : n(n_), lambda(lambda_), theta_in(theta_in_), theta_out(theta_out_) {
        if (n < 1) throw std::invalid_argument("ClockParams: n must be >= 1");
        if (!(lambda > 0.0) || lambda > 1.0)
            throw std::invalid_argument("ClockParams: lambda must be in (0, 1]");
        if (!(theta_in > 0.0) || !(theta_in < std::numbers::pi))
            throw std::invalid_argument("ClockParams: theta_in must be in (0, pi)");
        if (!(theta_out > 0.0) || !(theta_out < std::numbers::pi))
            throw std::invalid_argument("ClockParams: theta_out must be in (0, pi)");
        c0 = (1.0 - lambda) / 2.0;
        c1 = (1.0 + lambda) / 2.0;
        c_in = std::cos(theta_in);
        s_in = std::sin(theta_in);
        c_out = std::cos(theta_out);
        s_out = std::sin(theta_out);
        lambda_x = lambda * s_in;
        lambda_z = lambda * c_in;
    }

    static ClockParams equatorial(int n_, double lambda_) {
        return ClockParams(n_, lambda_, std::numbers::pi / 2, std::numbers::pi / 2);
    }

    bool is_equatorial() const {
        return std::abs(c_in) < 1e-12 && std::abs(c_out) < 1e-12;
    }

    ClockParams with_n(int n_) const { return ClockParams(n_, lambda, theta_in, theta_out); }
};

/// Thrown when an iterative routine fails to reach its tolerance.
struct SolveError : std::runtime_error {
    double last_residual;
    explicit SolveError(const std::string& what, double residual)
        : std::runtime_error(what), last_residual(residual) {}
};

}  // namespace clockforge
