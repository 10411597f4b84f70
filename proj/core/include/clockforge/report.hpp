#pragma once

#include <string>
#include <vector>

#include "clockforge/params.hpp"
#include "clockforge/protocol.hpp"
#include "clockforge/solver.hpp"

namespace clockforge {

/// One evaluated grid point of a family sweep. `series` is the family's
/// predicted 1/N expansion at this point (NaN when none is known) and
/// `lower_bound` the tightest applicable bound on the infidelity itself.
struct SweepRow {
    std::string family;
    int n = 0;
    double lambda = 0.0;
    double theta_in = 0.0;
    double theta_out = 0.0;
    double infid = 0.0;
    double n_times_infid = 0.0;
    double series = 0.0;
    double lower_bound = 0.0;
    double skipped_mass = 0.0;
};

/// Deterministic row order: families in the given order, then n, then lambda.
/// Grid points are evaluated in parallel, reduced in grid order.
std::vector<SweepRow> sweep_rows(const std::vector<Family>& families, const std::vector<int>& ns,
                                 const std::vector<double>& lambdas, double theta_in,
                                 double theta_out, double tol, int jobs);

/// Per-solve summary record of a protocol evaluated against its band.
struct SolveSummary {
    int n_c = 0;
    double fid = 0.0;
    double infid = 0.0;
    double stationarity_residual = 0.0;
    bool ppt = false;
    double lambda_tilde = 0.0;
};

SolveSummary solve_summary(const ProtocolAngles& proto, const ClockParams& params);

/// Fixed-format float for data files: shortest 17-significant-digit form.
std::string fmt17(double value);

}  // namespace clockforge
