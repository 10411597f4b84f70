#pragma once

#include "clockforge/asymptotic.hpp"
#include "clockforge/params.hpp"
#include "clockforge/protocol.hpp"

namespace clockforge {

/// Optimal entanglement-breaking (measure-and-prepare) protocol:
/// sin^2(theta_w) = 1/2 for all w, endpoints deliberately unpinned, with
/// Choi off-diagonals A_w = 1/2. Passes the PPT test.
ProtocolAngles eb_optimal_protocol(int n_c);

struct EbInfidelity {
    double value = 0.0;         // exact average over Schur outcomes
    double skipped_mass = 0.0;  // probability mass of skipped (< 1e-16) outcomes
    InfidelitySeries series;    // printed 1/N expansion
};

/// Equatorial only: per-outcome infidelity (1 - sum_w P_{w-1,w})/2 averaged
/// over the Schur distribution, plus the series through 1/N^3.
EbInfidelity eb_infidelity(int n, double lambda, int jobs = 0);

/// Success probability of one-shot perfect conversion between pure coherent
/// states at different latitudes: (1+C_in)/(1+C_out) when theta_out <=
/// theta_in, else (1-C_in)/(1-C_out).
double perfect_conversion_probability(double theta_in, double theta_out);

struct ConversionSample {
    double success_prob = 1.0;
    double conditional_fidelity = 1.0;
};

/// Dense two-qubit simulation of the post-selected conversion circuit at
/// azimuth phi: energy-conserving rotation on the middle Hamming-weight
/// sector, ancilla measurement, fidelity of the conditional state with the
/// azimuth-phi target.
ConversionSample perfect_conversion_oracle(double theta_in, double theta_out, double phi);

/// Optimal equatorial protocol expanded to second order in c0 = (1-lambda)/2.
/// n_c >= 3; at n_c = 4 the quadratic-order term is indeterminate and is
/// omitted (set `second_order_dropped`).
struct PerturbativeProtocol {
    ProtocolAngles proto;
    bool second_order_dropped = false;
};

PerturbativeProtocol perturbative_protocol(int n_c, double c0);

enum class DissipationMode { naive, postselected };

/// Average purity-of-coherence loss of the exactly optimal equatorial
/// protocol over the Schur distribution. naive: eta N - f(E[lambda_tilde]);
/// postselected: eta N - E[f(lambda_tilde)], with f(x) = 4x^2/(1-x^2) and
/// eta = 4 lambda^2/(1-lambda^2). Requires lambda < 1.
double dissipation(int n, double lambda, DissipationMode mode, int jobs = 0);

}  // namespace clockforge
