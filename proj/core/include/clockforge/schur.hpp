#pragma once

#include <vector>

#include "clockforge/params.hpp"

namespace clockforge {

/// One outcome of the total-angular-momentum measurement on N copies:
/// N_C = 2j qubits survive, with multiplicity d_j and probability prob.
struct SchurOutcome {
    int n_c = 0;
    double d = 1.0;       // d_j = C(N,(N-N_C)/2) - C(N,(N-N_C)/2-1); exp(log_d)
    double log_d = 0.0;
    double prob = 0.0;
    double log_prob = 0.0;
};

/// Exact outcome law of Schur sampling on rho^{(x) N}; outcomes ascend in N_C.
struct SchurDistribution {
    int n = 0;
    std::vector<SchurOutcome> outcomes;
};

SchurDistribution schur_distribution(const ClockParams& params);

enum class MomentSign { positive, negative };

/// Result of an exact moment sum. For negative moments the N_C = 0 outcome
/// (reachable only at even N) is excluded and its mass reported instead of
/// returning infinity.
struct NcMoment {
    double value = 0.0;
    double excluded_mass = 0.0;
};

/// Ground-truth E[N_C^{+-p}] by direct summation over the distribution.
NcMoment nc_moment_exact(const ClockParams& params, int p, MomentSign sign);

/// Closed-form degree-p polynomial for E[N_C^p], p in 1..4, together with the
/// guaranteed error envelope 2^{p-1}((1-lambda)/lambda)(1-lambda^2)^{N/2}.
struct PolyMoment {
    double value = 0.0;
    double error_bound = 0.0;
};

PolyMoment nc_moment_poly(const ClockParams& params, int p);

/// Truncated series for E[N_C^{-p}], p in 1..3. `terms` counts how many of the
/// printed terms to keep (default: all of them). Also reports the order in
/// 1/N of the first dropped term.
struct NegMomentSeries {
    double value = 0.0;
    int first_dropped_order = 0;
};

NegMomentSeries nc_negative_moment_series(const ClockParams& params, int p, int terms = -1);

/// log C(n, k); -inf when k is out of range.
double log_choose(long long n, long long k);

}  // namespace clockforge
