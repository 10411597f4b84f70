#include "clockforge/baselines.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "clockforge/parallel.hpp"
#include "clockforge/pband.hpp"
#include "clockforge/schur.hpp"
#include "clockforge/solver.hpp"

namespace clockforge {

ProtocolAngles eb_optimal_protocol(int n_c) {
    if (n_c < 1) throw std::invalid_argument("eb_optimal_protocol: n_c must be >= 1");
    return ProtocolAngles{n_c, std::vector<double>(static_cast<std::size_t>(n_c) + 1, 0.5), false};
}

EbInfidelity eb_infidelity(int n, double lambda, int jobs) {
    ClockParams params = ClockParams::equatorial(n, lambda);
    SchurDistribution dist = schur_distribution(params);
    const std::size_t count = dist.outcomes.size();
    std::vector<double> per_outcome(count, 0.0);
    std::vector<char> skipped(count, 0);

    parallel_for(count, jobs, [&](std::size_t i) {
        const SchurOutcome& o = dist.outcomes[i];
        if (o.prob < 1e-16) {
            skipped[i] = 1;
            return;
        }
        if (o.n_c == 0) {
            per_outcome[i] = o.prob * 0.5;  // flat channel from nothing: F = 1/2
            return;
        }
        PBand band = p_band(o.n_c, params);
        // Flat protocol: infidelity is (1 - sum_w P_{w-1,w}) / 2.
        double sum = 0.0, comp = 0.0;
        for (double v : band.off) {
            double y = v - comp, t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        per_outcome[i] = o.prob * 0.5 * (1.0 - sum);
    });

    EbInfidelity out;
    double sum = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        if (skipped[i]) {
            out.skipped_mass += dist.outcomes[i].prob;
            continue;
        }
        double y = per_outcome[i] - comp, t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    out.value = sum;

    const double l2 = lambda * lambda;
    out.series.order = 3;
    out.series.delta1 = 1.0 / (4.0 * l2);
    out.series.delta2 = (3.0 - 4.0 * l2) / (16.0 * l2 * l2);
    out.series.delta3 = (15.0 - 16.0 * l2 + 8.0 * l2 * l2) / (32.0 * l2 * l2 * l2);
    return out;
}

double perfect_conversion_probability(double theta_in, double theta_out) {
    if (!(theta_in > 0.0) || !(theta_in < std::numbers::pi) || !(theta_out > 0.0) ||
        !(theta_out < std::numbers::pi))
        throw std::invalid_argument("perfect_conversion_probability: angles must be in (0, pi)");
    double ci = std::cos(theta_in), co = std::cos(theta_out);
    if (theta_out <= theta_in) return (1.0 + ci) / (1.0 + co);
    return (1.0 - ci) / (1.0 - co);
}

ConversionSample perfect_conversion_oracle(double theta_in, double theta_out, double phi) {
    if (!(theta_in > 0.0) || !(theta_in < std::numbers::pi) || !(theta_out > 0.0) ||
        !(theta_out < std::numbers::pi))
        throw std::invalid_argument("perfect_conversion_oracle: angles must be in (0, pi)");
    using cd = std::complex<double>;
    const bool northward = theta_out <= theta_in;

    // Joint state |psi_in> (x) |anc>, basis order |00>, |01>, |10>, |11>
    // (system bit first). The ancilla starts in |0> when converting
    // northward, |1> otherwise.
    cd alpha = std::cos(theta_in / 2.0);
    cd beta = std::polar(std::sin(theta_in / 2.0), phi);
    std::array<cd, 4> psi{};
    if (northward) {
        psi[0] = alpha;  // |00>
        psi[2] = beta;   // |10>
    } else {
        psi[1] = alpha;  // |01>
        psi[3] = beta;   // |11>
    }

    // Energy-conserving rotation by eta on the Hamming-weight-1 sector
    // span{|01>, |10>}: |10> -> cos(eta)|10> + sin(eta)|01>.
    double c2;
    double t_out = std::tan(theta_out / 2.0), t_in = std::tan(theta_in / 2.0);
    if (northward)
        c2 = (t_out * t_out) / (t_in * t_in);
    else
        c2 = (t_in * t_in) / (t_out * t_out);
    double eta = std::asin(std::sqrt(std::clamp(1.0 - c2, 0.0, 1.0)));
    double c = std::cos(eta), s = std::sin(eta);
    if (northward) {
        cd v01 = psi[1], v10 = psi[2];
        psi[1] = c * v01 + s * v10;
        psi[2] = -s * v01 + c * v10;
    } else {
        cd v01 = psi[1], v10 = psi[2];
        psi[1] = c * v01 - s * v10;
        psi[2] = s * v01 + c * v10;
    }

    // Measure the ancilla; success is the outcome matching its initial state.
    int keep = northward ? 0 : 1;
    cd a0 = keep == 0 ? psi[0] : psi[1];  // system |0> component
    cd a1 = keep == 0 ? psi[2] : psi[3];  // system |1> component
    double p_succ = std::norm(a0) + std::norm(a1);

    cd target0 = std::cos(theta_out / 2.0);
    cd target1 = std::polar(std::sin(theta_out / 2.0), phi);
    cd overlap = std::conj(target0) * a0 + std::conj(target1) * a1;
    ConversionSample out;
    out.success_prob = p_succ;
    out.conditional_fidelity = std::norm(overlap) / p_succ;
    return out;
}

PerturbativeProtocol perturbative_protocol(int n_c, double c0) {
    if (n_c < 3) throw std::invalid_argument("perturbative_protocol: n_c must be >= 3");
    if (!(c0 >= 0.0) || c0 > 0.1)
        throw std::invalid_argument("perturbative_protocol: c0 must be in [0, 0.1]");
    const double nc = static_cast<double>(n_c);
    PerturbativeProtocol out;
    out.second_order_dropped = n_c == 4;

    double a = 0.0, b = 0.0;
    if (!out.second_order_dropped) {
        a = 16.0 * (3.0 * nc - 4.0) / (nc * nc * nc * (nc - 1.0) * (nc - 2.0) * (nc - 4.0));
        b = (3.0 * nc * nc * nc - 7.0 * nc * nc + 16.0) / (4.0 * (3.0 * nc - 4.0));
    }

    std::vector<double> s(static_cast<std::size_t>(n_c) + 1);
    for (int wi = 0; wi <= n_c; ++wi) {
        double w = static_cast<double>(wi);
        double f0 = w / nc;
        double f1 = 4.0 * w * (nc - w) * (nc - 2.0 * w) / (nc * nc * (nc - 2.0));
        double f2 = out.second_order_dropped
                        ? 0.0
                        : a * w * (nc - w) * (nc - 2.0 * w) * (w * w - nc * w + b);
        s[static_cast<std::size_t>(wi)] = std::clamp(f0 + f1 * c0 + f2 * c0 * c0, 0.0, 1.0);
    }
    s.front() = 0.0;
    s.back() = 1.0;
    out.proto = ProtocolAngles{n_c, std::move(s), true};
    return out;
}

double dissipation(int n, double lambda, DissipationMode mode, int jobs) {
    if (n < 1) throw std::invalid_argument("dissipation: n must be >= 1");
    if (!(lambda > 0.0) || !(lambda < 1.0))
        throw std::invalid_argument("dissipation: lambda must be in (0, 1)");
    ClockParams params = ClockParams::equatorial(n, lambda);
    SchurDistribution dist = schur_distribution(params);
    const std::size_t count = dist.outcomes.size();

    auto f = [](double x) { return 4.0 * x * x / (1.0 - x * x); };
    const double eta = f(lambda);

    std::vector<double> lam_tilde(count, 0.0);
    parallel_for(count, jobs, [&](std::size_t i) {
        const SchurOutcome& o = dist.outcomes[i];
        if (o.prob < 1e-16) return;
        if (o.n_c == 0) return;  // nothing survives; lambda_tilde = 0
        ProtocolAngles proto = protocol_for_family(Family::exact, o.n_c, params);
        PBand band = p_band(o.n_c, params);
        lam_tilde[i] = 1.0 - 2.0 * infidelity(proto, band, params.theta_out);
    });

    double acc = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const SchurOutcome& o = dist.outcomes[i];
        if (o.prob < 1e-16) continue;
        double term =
            mode == DissipationMode::naive ? o.prob * lam_tilde[i] : o.prob * f(lam_tilde[i]);
        double y = term - comp, t = acc + y;
        comp = (t - acc) - y;
        acc = t;
    }
    double output_ph = mode == DissipationMode::naive ? f(acc) : acc;
    return eta * static_cast<double>(n) - output_ph;
}

}  // namespace clockforge
