#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "clockforge/params.hpp"
#include "clockforge/pband.hpp"

namespace clockforge {

/// A distillation protocol stored as S_w = sin^2(theta_w), w = 0..N_C.
/// The optimal family pins s_0 = 0 and s_{N_C} = 1 exactly; the flat
/// entanglement-breaking baseline deliberately relaxes the endpoints, and the
/// `pinned` tag keeps the two conventions from mixing.
struct ProtocolAngles {
    int n_c = 1;
    std::vector<double> s;
    bool pinned = true;
};

/// Validates invariants (sizes, 0 <= s_w <= 1, endpoint convention) and
/// returns the protocol. Throws std::invalid_argument on violation.
ProtocolAngles make_protocol(int n_c, std::vector<double> s, bool pinned = true);

/// Choi-matrix blocks of the channel: per-w diagonal pair
/// (cos^2 theta_w, sin^2 theta_w) and the CP-saturating off-diagonal
/// A_w = cos(theta_{w-1}) sin(theta_w).
struct ChoiBlocks {
    int n_c = 1;
    std::vector<std::pair<double, double>> diag_pairs;  // size n_c+1
    std::vector<double> off;                            // size n_c, off[w-1] = A_w
};

ChoiBlocks choi_blocks(const ProtocolAngles& proto);

/// Output qubit of a protocol applied to a band, in the azimuth-0 convention
/// (real nonnegative off-diagonal).
struct OutputQubit {
    double p00 = 1.0;
    double p11 = 0.0;
    double x = 0.0;

    /// Output purity along the Bloch direction at polar angle theta_out.
    double lambda_tilde(double theta_out) const {
        return std::cos(theta_out) * (p00 - p11) + 2.0 * std::sin(theta_out) * x;
    }
};

OutputQubit output_state(const ProtocolAngles& proto, const PBand& band);

/// Infidelity 1 - F evaluated as a sum of nonnegative per-w terms, so small
/// infidelities keep full relative precision.
double infidelity(const ProtocolAngles& proto, const PBand& band, double theta_out);

double fidelity(const ProtocolAngles& proto, const PBand& band, double theta_out);

/// PPT test for the CP-saturating channel: true iff S is non-increasing.
bool is_ppt(const ProtocolAngles& proto);

/// Dense check of time-translation covariance on the (N_C+1)-dimensional
/// symmetric subspace: applies the channel to a random density matrix before
/// and after evolution by t and returns the max-norm mismatch. n_c <= 12.
double ti_covariance_residual(const ProtocolAngles& proto, double t, std::uint64_t seed);

/// Rotation angles theta_w = arcsin(sqrt(s_w)) of the one-ancilla
/// energy-conserving dilation, one per energy sector.
std::vector<double> stinespring_rotations(const ProtocolAngles& proto);

/// JSON object {"n_c": int, "s": [...]} / CSV with columns w,s_w.
/// Round-trips are bit-exact (17 significant digits).
std::string protocol_to_json(const ProtocolAngles& proto);
ProtocolAngles protocol_from_json(const std::string& text, bool pinned = true);
std::string protocol_to_csv(const ProtocolAngles& proto);
ProtocolAngles protocol_from_csv(const std::string& text, bool pinned = true);

}  // namespace clockforge
