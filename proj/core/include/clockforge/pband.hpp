#pragma once

#include <vector>

#include "clockforge/params.hpp"

namespace clockforge {

/// The two diagonals of the Schur-sampled state in the Dicke basis that enter
/// the single-qubit-output fidelity: diag[w] = P_{w,w} for w = 0..N_C and
/// off[w-1] = P_{w-1,w} for w = 1..N_C, plus the exact mean mu of w/N_C under
/// diag. Entries are kept both linearly and as logs; linear values below
/// 1e-300 are flushed to zero while the logs keep the true magnitude (band
/// ratios stay meaningful deep in the tails).
struct PBand {
    int n_c = 0;
    std::vector<double> diag;
    std::vector<double> off;
    std::vector<double> log_diag;
    std::vector<double> log_off;
    double mu = 0.0;
};

/// Evaluates the single-summation band formula with log-domain prefactors and
/// the nested coefficient scheme; O(N_C^2) overall.
PBand p_band(int n_c, const ClockParams& params);

/// Ground truth for p_band: builds the 2^{N_C}-dimensional product state and
/// sandwiches it between Dicke states, divided by the probability of the
/// maximal-j sector. Guarded to n_c <= 12.
double p_entry_oracle(int n_c, const ClockParams& params, int w, int w_prime);

/// R_w = P_{w-1,w} / P_{w,w+1} for w = 1..N_C-1. Throws std::domain_error if
/// any off entry involved has underflowed to zero.
std::vector<double> r_ratios(const PBand& band);

/// Centered moment M_p^(alpha) = sum_w ((w - alpha/2)/N_C - mu)^p P_{w-alpha,w},
/// with mu always the offset-0 mean stored in the band.
double centered_moment_exact(const PBand& band, int alpha, int p);

/// Truncated asymptotic series for the centered moments. Supported:
///   alpha = 0, p <= 4              (through order N_C^{-2})
///   alpha = 1, general, p <= 4     (through order N_C^{-2})
///   alpha = 1, equatorial, p <= 6  (even p through order N_C^{-3}; odd p = 0)
/// Throws std::invalid_argument on unsupported combinations.
double centered_moment_series(int n_c, const ClockParams& params, int alpha, int p);

/// Series for the band mean: (1 - C_in)/2 + (1-lambda) C_in / (2 lambda N_C).
double mu_series(int n_c, const ClockParams& params);

}  // namespace clockforge
