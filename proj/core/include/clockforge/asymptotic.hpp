#pragma once

#include <complex>
#include <vector>

#include "clockforge/params.hpp"
#include "clockforge/protocol.hpp"

namespace clockforge {

/// Coefficients of the 1/N infidelity expansion; `order` is the highest
/// coefficient the construction is trusted to, higher ones are zero.
struct InfidelitySeries {
    double delta1 = 0.0;
    double delta2 = 0.0;
    double delta3 = 0.0;
    int order = 0;

    double eval(double n) const {
        return delta1 / n + delta2 / (n * n) + delta3 / (n * n * n);
    }
};

/// First-order optimal protocol: sin^2(theta_w) linear in w/N_C, clamped to
/// [0,1] with endpoints pinned.
ProtocolAngles protocol_order1(int n_c, const ClockParams& params);

/// Second-order optimal protocol: adds the b01/N_C offset and b20 z^2 term,
/// with z centered on the mu series including its 1/N_C correction.
ProtocolAngles protocol_order2(int n_c, const ClockParams& params);

/// Third-order optimal equatorial protocol:
/// s = 1/2 + (lambda + b11/N_C) z + b30 z^3 with z = w/N_C - 1/2.
ProtocolAngles protocol_order3_equatorial(int n_c, double lambda);

/// Infidelity series (in 1/N) of the order-`order` optimal protocol.
/// order = 3 is available only for equatorial parameters.
InfidelitySeries infidelity_series(const ClockParams& params, int order);

/// Equatorial optimal infidelity as a series in 1/N_C (per Schur outcome).
InfidelitySeries equatorial_optimal_infidelity_nc_series(double lambda);

struct PurityOfCoherence {
    double value = 0.0;
    bool infinite = false;
};

/// P_H(rho) = Tr[rho^2 H rho^{-1} H] - Tr[rho H^2] for a density matrix rho
/// (row-major, dim <= 32) and diagonal Hamiltonian h. Returns the infinite
/// flag when H maps the support of rho outside itself (rank test at 1e-12).
PurityOfCoherence purity_of_coherence_general(const std::vector<std::complex<double>>& rho,
                                              const std::vector<double>& h_diag, int dim);

struct PerQubitResources {
    double ph = 0.0;  // purity of coherence of one input qubit
    bool ph_infinite = false;
    double vh = 0.0;  // energy variance of the target state
};

PerQubitResources per_qubit_resources(const ClockParams& params);

/// delta_1 >= (1-lambda^2)/(4 lambda^2) sin^2(theta_out)/sin^2(theta_in);
/// returns 0 at lambda = 1 (unbounded resource).
double infidelity_factor_lower_bound(const ClockParams& params);

/// P_H(sigma) >= V_H [(1-delta)^2/delta - 1] for a state at infidelity delta
/// from a pure state; clamped at zero where vacuous, infinite at delta = 0.
PurityOfCoherence ph_near_pure_bound(double vh, double delta);

/// Exact equatorial lower bound (1/2)[1 - (1 + (1-lambda^2)/(lambda^2 N))^{-1/2}].
double equatorial_symmetry_lower_bound(int n, double lambda);

}  // namespace clockforge
