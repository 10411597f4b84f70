#pragma once

#include <optional>
#include <vector>

#include "clockforge/params.hpp"
#include "clockforge/pband.hpp"
#include "clockforge/protocol.hpp"

namespace clockforge {

struct SolveOptions {
    double tol = 1e-12;
    long max_sweeps = 100000;
    /// Optional starting protocol; default is the first-order asymptotic one.
    std::optional<ProtocolAngles> start;
    /// When set, receives the fidelity after each coordinate sweep.
    std::vector<double>* track_sweep_fidelity = nullptr;
};

struct SolveInfo {
    long sweeps = 0;
    double last_delta = 0.0;  // max |change in s_w| over the final sweep
    double residual = 0.0;    // max stationarity residual at exit
};

/// Absolutely optimal protocol for a given Schur outcome by cyclic coordinate
/// ascent on the fidelity: each interior angle is maximized with its
/// neighbors fixed (1-D objective a sin^2 + b sin + c cos, solved by
/// safeguarded Newton with a golden-section fallback). Fidelity is
/// non-decreasing across sweeps. Throws SolveError on non-convergence.
ProtocolAngles solve_optimal(int n_c, const ClockParams& params,
                             const SolveOptions& options = {}, SolveInfo* info = nullptr);

/// Closed-form optimal protocol in the equatorial case with odd N_C >= 3:
/// sin(theta_1) from the alternating product of the band ratios R_w, then a
/// stable forward recurrence for the first half and bit-flip mirroring.
ProtocolAngles solve_equatorial_odd_exact(int n_c, double lambda);

/// s_w = w / N_C.
ProtocolAngles discarding_protocol(int n_c);

/// Per-interior-w defect of the three-angle stationarity relation; all
/// entries vanish at the optimum. Equatorial targets use the simplified form
/// tan(theta_w) = cos(theta_{w-1}) R_w / sin(theta_{w+1}).
std::vector<double> three_angle_residual(const ProtocolAngles& proto, const PBand& band,
                                         double theta_out);

enum class Family { exact, exact_odd, order1, order2, order3eq, discarding, eb, perturb };

const char* family_name(Family f);
std::optional<Family> family_from_name(const std::string& name);

/// The protocol a family prescribes at one Schur outcome. Families exact and
/// exact_odd dispatch to the solvers; n_c <= 2 degenerates to the forced
/// protocol.
ProtocolAngles protocol_for_family(Family family, int n_c, const ClockParams& params,
                                   double tol = 1e-12);

struct AvgInfidelity {
    double value = 0.0;
    double skipped_mass = 0.0;  // total probability of outcomes skipped (< 1e-16)
};

/// Infidelity averaged over the Schur distribution of params.n copies, with a
/// per-outcome protocol from the family. Outcome solves fan out over `jobs`
/// workers (0 = hardware concurrency) and reduce in fixed N_C order.
AvgInfidelity average_infidelity(const ClockParams& params, Family family,
                                 double tol = 1e-12, int jobs = 0);

}  // namespace clockforge
