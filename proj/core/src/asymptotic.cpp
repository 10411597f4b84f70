#include "clockforge/asymptotic.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "clockforge/pband.hpp"

namespace clockforge {

namespace {

ProtocolAngles finish(int n_c, std::vector<double> s) {
    for (double& v : s) v = std::clamp(v, 0.0, 1.0);
    s.front() = 0.0;
    s.back() = 1.0;
    return ProtocolAngles{n_c, std::move(s), true};
}

}  // namespace

ProtocolAngles protocol_order1(int n_c, const ClockParams& p) {
    if (n_c < 1) throw std::invalid_argument("protocol_order1: n_c must be >= 1");
    const double slope = p.lambda * (p.s_out * p.s_out) / (p.s_in * p.s_in);
    const double x0 = (1.0 - p.c_in) / 2.0;
    const double b00 = (1.0 - p.c_out) / 2.0;
    std::vector<double> s(static_cast<std::size_t>(n_c) + 1);
    for (int w = 0; w <= n_c; ++w) {
        double x = static_cast<double>(w) / static_cast<double>(n_c);
        s[static_cast<std::size_t>(w)] = b00 + slope * (x - x0);
    }
    return finish(n_c, std::move(s));
}

ProtocolAngles protocol_order2(int n_c, const ClockParams& p) {
    if (n_c < 2) throw std::invalid_argument("protocol_order2: n_c must be >= 2");
    const double l = p.lambda;
    const double so2 = p.s_out * p.s_out;
    const double si2 = p.s_in * p.s_in;
    const double b00 = (1.0 - p.c_out) / 2.0;
    const double b10 = l * so2 / si2;
    const double b01 =
        (so2 / si2) / (4.0 * l) * (l * (3.0 - l * l) * p.c_in - (1.0 + l * l) * p.c_out);
    const double b20 = l * (so2 / (si2 * si2)) * (2.0 * l * p.c_out - (3.0 - l * l) * p.c_in);
    const double mu = mu_series(n_c, p);
    std::vector<double> s(static_cast<std::size_t>(n_c) + 1);
    for (int w = 0; w <= n_c; ++w) {
        double z = static_cast<double>(w) / static_cast<double>(n_c) - mu;
        s[static_cast<std::size_t>(w)] =
            b00 + b01 / static_cast<double>(n_c) + b10 * z + b20 * z * z;
    }
    return finish(n_c, std::move(s));
}

ProtocolAngles protocol_order3_equatorial(int n_c, double lambda) {
    if (n_c < 2) throw std::invalid_argument("protocol_order3_equatorial: n_c must be >= 2");
    if (!(lambda > 0.0) || lambda > 1.0)
        throw std::invalid_argument("protocol_order3_equatorial: lambda must be in (0, 1]");
    const double b11 = -(1.0 - lambda) * (1.0 + 3.0 * lambda) / 2.0;
    const double b30 = 2.0 * lambda * (1.0 - lambda * lambda);
    const double slope = lambda + b11 / static_cast<double>(n_c);
    std::vector<double> s(static_cast<std::size_t>(n_c) + 1);
    for (int w = 0; w <= n_c; ++w) {
        double z = static_cast<double>(w) / static_cast<double>(n_c) - 0.5;
        s[static_cast<std::size_t>(w)] = 0.5 + slope * z + b30 * z * z * z;
    }
    return finish(n_c, std::move(s));
}

InfidelitySeries infidelity_series(const ClockParams& p, int order) {
    if (order < 1 || order > 3)
        throw std::invalid_argument("infidelity_series: order must be in 1..3");
    const bool equatorial = p.is_equatorial();
    if (order == 3 && !equatorial)
        throw std::invalid_argument("infidelity_series: order 3 is equatorial-only");
    const double l = p.lambda;
    const double l2 = l * l;
    const double so2 = p.s_out * p.s_out;
    const double si2 = p.s_in * p.s_in;
    InfidelitySeries out;
    out.order = order;
    out.delta1 = (1.0 - l2) / (4.0 * l2) * so2 / si2;
    if (order >= 2) {
        // Second coefficient from the exact maximization of the quadratic in
        // (b01, b20); validated against solver fits at and off the equator.
        const double ci = p.c_in, co = p.c_out;
        double bracket = 3.0 - 2.0 * ci * ci * l2 - 4.0 * ci * co * l - co * co;
        out.delta2 =
            (1.0 - l2) * (1.0 - l2) * so2 * bracket / (16.0 * l2 * l2 * si2 * si2);
    }
    if (order >= 3) {
        double q = 1.0 - l2;
        out.delta3 = q * q * (15.0 - 7.0 * l2) / (32.0 * l2 * l2 * l2);
    }
    return out;
}

InfidelitySeries equatorial_optimal_infidelity_nc_series(double lambda) {
    const double l = lambda;
    const double q = 1.0 - l;
    InfidelitySeries out;
    out.order = 3;
    out.delta1 = (1.0 - l * l) / (4.0 * l);
    out.delta2 = q * q * (1.0 + l) * (3.0 - l) / (16.0 * l * l);
    out.delta3 = q * q * q * (1.0 + l) * (9.0 + 6.0 * l + 5.0 * l * l) / (32.0 * l * l * l);
    return out;
}

PurityOfCoherence purity_of_coherence_general(const std::vector<std::complex<double>>& rho,
                                              const std::vector<double>& h_diag, int dim) {
    if (dim < 1 || dim > 32)
        throw std::invalid_argument("purity_of_coherence_general: dim must be in 1..32");
    if (rho.size() != static_cast<std::size_t>(dim) * dim ||
        h_diag.size() != static_cast<std::size_t>(dim))
        throw std::invalid_argument("purity_of_coherence_general: size mismatch");

    Eigen::MatrixXcd m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = rho[static_cast<std::size_t>(i) * dim + j];
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("purity_of_coherence_general: rho is not Hermitian");
    if (std::abs(m.trace().real() - 1.0) > 1e-10 || std::abs(m.trace().imag()) > 1e-10)
        throw std::invalid_argument("purity_of_coherence_general: rho is not trace one");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    Eigen::VectorXd evals = es.eigenvalues();
    if (evals.minCoeff() < -1e-10)
        throw std::invalid_argument("purity_of_coherence_general: rho is not PSD");

    // H in the eigenbasis of rho.
    Eigen::MatrixXcd v = es.eigenvectors();
    Eigen::MatrixXcd h_eig =
        v.adjoint() * Eigen::VectorXd::Map(h_diag.data(), dim).asDiagonal() * v;

    constexpr double kRankTol = 1e-12;
    double h_scale = 0.0;
    for (double h : h_diag) h_scale = std::max(h_scale, h * h);
    if (h_scale == 0.0) h_scale = 1.0;

    // Support condition: H must not carry weight from supp(rho) into ker(rho).
    double leak = 0.0;
    for (int k = 0; k < dim; ++k) {
        if (evals(k) > kRankTol) continue;
        for (int i = 0; i < dim; ++i) {
            if (evals(i) <= kRankTol) continue;
            leak += std::norm(h_eig(k, i)) * evals(i);
        }
    }
    PurityOfCoherence out;
    if (leak > kRankTol * h_scale) {
        out.infinite = true;
        return out;
    }

    // P_H = sum_{i,j in supp} (p_i^2 / p_j - p_i) |H_ij|^2.
    double sum = 0.0;
    for (int i = 0; i < dim; ++i) {
        if (evals(i) <= kRankTol) continue;
        for (int j = 0; j < dim; ++j) {
            if (evals(j) <= kRankTol) continue;
            sum += (evals(i) * evals(i) / evals(j) - evals(i)) * std::norm(h_eig(i, j));
        }
    }
    out.value = sum;
    return out;
}

PerQubitResources per_qubit_resources(const ClockParams& p) {
    PerQubitResources out;
    out.vh = p.s_out * p.s_out;
    if (p.lambda >= 1.0) {
        out.ph_infinite = true;
        out.ph = std::numeric_limits<double>::infinity();
    } else {
        out.ph = 4.0 * p.lambda * p.lambda * p.s_in * p.s_in / (1.0 - p.lambda * p.lambda);
    }
    return out;
}

double infidelity_factor_lower_bound(const ClockParams& p) {
    if (p.lambda >= 1.0) return 0.0;  // unbounded input resource
    PerQubitResources r = per_qubit_resources(p);
    return r.vh / r.ph;
}

PurityOfCoherence ph_near_pure_bound(double vh, double delta) {
    if (!(delta >= 0.0) || delta > 1.0)
        throw std::invalid_argument("ph_near_pure_bound: delta must be in [0, 1]");
    PurityOfCoherence out;
    if (delta == 0.0) {
        out.infinite = true;
        return out;
    }
    out.value = std::max(0.0, vh * ((1.0 - delta) * (1.0 - delta) / delta - 1.0));
    return out;
}

double equatorial_symmetry_lower_bound(int n, double lambda) {
    if (n < 1) throw std::invalid_argument("equatorial_symmetry_lower_bound: n must be >= 1");
    double q = (1.0 - lambda * lambda) / (lambda * lambda * static_cast<double>(n));
    return 0.5 * (1.0 - 1.0 / std::sqrt(1.0 + q));
}

}  // namespace clockforge
