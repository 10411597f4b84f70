#include "clockforge/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "clockforge/asymptotic.hpp"
#include "clockforge/baselines.hpp"
#include "clockforge/parallel.hpp"
#include "clockforge/schur.hpp"

namespace clockforge {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

// Maximize g(theta) = a sin^2(theta) + b sin(theta) + c cos(theta) over
// [0, pi/2]. g'(theta) = a sin(2 theta) + b cos(theta) - c sin(theta) has
// g'(0) = b >= 0 and g'(pi/2) = -c <= 0 whenever b, c >= 0, so a maximizer is
// bracketed; safeguarded Newton on g' with a golden-section fallback.
double maximize_1d(double a, double b, double c, double theta_init) {
    auto g = [&](double th) {
        double s = std::sin(th);
        return a * s * s + b * s + c * std::cos(th);
    };
    auto dg = [&](double th) { return a * std::sin(2.0 * th) + b * std::cos(th) - c * std::sin(th); };
    auto ddg = [&](double th) {
        return 2.0 * a * std::cos(2.0 * th) - b * std::sin(th) - c * std::cos(th);
    };
    auto golden = [&](double lo, double hi) {
        const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
        double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
        double f1 = g(x1), f2 = g(x2);
        while (hi - lo > 1e-15) {
            if (f1 < f2) {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + inv_phi * (hi - lo);
                f2 = g(x2);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - inv_phi * (hi - lo);
                f1 = g(x1);
            }
        }
        return 0.5 * (lo + hi);
    };

    double lo = 0.0, hi = kHalfPi;
    double glo = dg(lo), ghi = dg(hi);
    if (glo <= 0.0 && ghi >= 0.0) {
        // Descending then ascending: the maximum sits at an endpoint.
        return g(0.0) >= g(kHalfPi) ? 0.0 : kHalfPi;
    }
    if (!(glo >= 0.0 && ghi <= 0.0)) return golden(lo, hi);  // no bracket on g'

    double th = std::clamp(theta_init, lo, hi);
    for (int it = 0; it < 500; ++it) {
        double d1 = dg(th);
        if (d1 > 0.0)
            lo = th;
        else
            hi = th;
        double d2 = ddg(th);
        double next = d2 != 0.0 ? th - d1 / d2 : 0.5 * (lo + hi);
        if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);  // bisect safeguard
        // Relative exit: stationary angles can sit arbitrarily close to 0.
        if (std::abs(next - th) <= 1e-18 + 5e-16 * std::abs(next)) return next;
        th = next;
    }
    return golden(lo, hi);
}

std::vector<double> thetas_of(const ProtocolAngles& proto) {
    std::vector<double> th(proto.s.size());
    for (std::size_t i = 0; i < proto.s.size(); ++i)
        th[i] = std::asin(std::sqrt(std::clamp(proto.s[i], 0.0, 1.0)));
    return th;
}

}  // namespace

ProtocolAngles discarding_protocol(int n_c) {
    if (n_c < 1) throw std::invalid_argument("discarding_protocol: n_c must be >= 1");
    std::vector<double> s(static_cast<std::size_t>(n_c) + 1);
    for (int w = 0; w <= n_c; ++w)
        s[static_cast<std::size_t>(w)] = static_cast<double>(w) / static_cast<double>(n_c);
    s.front() = 0.0;
    s.back() = 1.0;
    return ProtocolAngles{n_c, std::move(s), true};
}

std::vector<double> three_angle_residual(const ProtocolAngles& proto, const PBand& band,
                                         double theta_out) {
    if (proto.n_c != band.n_c)
        throw std::invalid_argument("three_angle_residual: protocol and band sizes differ");
    const int n_c = proto.n_c;
    std::vector<double> res;
    if (n_c < 2) return res;
    res.reserve(static_cast<std::size_t>(n_c - 1));
    std::vector<double> th = thetas_of(proto);
    const double c_out = std::cos(theta_out);
    const double s_out = std::sin(theta_out);
    const bool equatorial_out = std::abs(c_out) < 1e-12;
    for (int w = 1; w <= n_c - 1; ++w) {
        const double off_l = band.off[static_cast<std::size_t>(w - 1)];
        const double off_r = band.off[static_cast<std::size_t>(w)];
        const double diag = band.diag[static_cast<std::size_t>(w)];
        if (off_l <= 0.0 || off_r <= 0.0 || diag <= 0.0) {
            // Underflowed band tail: the fidelity no longer depends on this
            // angle and the relation is vacuous there.
            res.push_back(0.0);
            continue;
        }
        const double c_prev = std::cos(th[static_cast<std::size_t>(w - 1)]);
        const double c_cur = std::cos(th[static_cast<std::size_t>(w)]);
        const double s_cur = std::sin(th[static_cast<std::size_t>(w)]);
        const double s_next = std::sin(th[static_cast<std::size_t>(w + 1)]);
        const double s_w = proto.s[static_cast<std::size_t>(w)];
        const double s_w_next = proto.s[static_cast<std::size_t>(w + 1)];

        // Where the relation form is well conditioned, report the difference
        // of its two sides; otherwise fall back to the fidelity gradient
        // normalized by the angle's largest coupling (one-sided at box
        // corners, where only the KKT inequality applies). The relation form
        // loses meaning when its denominator sits far below that coupling:
        // the angle is then a flat direction of the fidelity and cannot be
        // pinned at double precision.
        const double num_l = c_prev * c_cur * off_l;
        const double num_r = s_cur * s_next * off_r;
        const double den = 2.0 * c_cur * s_cur * diag;
        const double scale =
            s_out * (off_l * c_prev + off_r * s_next) + 2.0 * std::abs(c_out) * diag;
        bool relation_ok;
        if (equatorial_out)
            relation_ok = s_w >= 1e-12 && s_w <= 1.0 - 1e-8 && s_w_next >= 1e-12;
        else
            relation_ok = s_w > 0.0 && s_w < 1.0 && s_out * den >= 1e-3 * scale;

        if (!relation_ok) {
            double grad = s_out * (num_l - num_r) - c_out * den;
            double violation;
            if (s_w == 0.0)
                violation = std::max(0.0, grad);
            else if (s_w == 1.0)
                violation = std::max(0.0, -grad);
            else
                violation = std::abs(grad);
            res.push_back(scale > 0.0 ? violation / scale : 0.0);
        } else if (equatorial_out) {
            // tan(theta_w) = cos(theta_{w-1}) R_w / sin(theta_{w+1})
            double lhs = std::tan(th[static_cast<std::size_t>(w)]);
            double rhs = c_prev * (off_l / off_r) / s_next;
            res.push_back(lhs - rhs);
        } else {
            res.push_back(c_out / s_out - (num_l - num_r) / den);
        }
    }
    return res;
}

ProtocolAngles solve_optimal(int n_c, const ClockParams& params, const SolveOptions& options,
                             SolveInfo* info) {
    if (n_c < 1) throw std::invalid_argument("solve_optimal: n_c must be >= 1");
    if (!(options.tol > 0.0)) throw std::invalid_argument("solve_optimal: tol must be > 0");

    // lambda = 1 with matching angles: discarding is exactly optimal.
    if (params.lambda >= 1.0 && std::abs(params.theta_in - params.theta_out) < 1e-15) {
        if (info) *info = SolveInfo{0, 0.0, 0.0};
        return discarding_protocol(n_c);
    }
    if (n_c == 1) {
        if (info) *info = SolveInfo{0, 0.0, 0.0};
        return ProtocolAngles{1, {0.0, 1.0}, true};
    }

    PBand band = p_band(n_c, params);
    ProtocolAngles proto =
        options.start ? *options.start : protocol_order1(n_c, params);
    if (proto.n_c != n_c) throw std::invalid_argument("solve_optimal: start protocol size");
    std::vector<double> th = thetas_of(proto);
    th.front() = 0.0;
    th.back() = kHalfPi;

    const double c_out = params.c_out;
    const double s_out = params.s_out;
    const bool equatorial_out = std::abs(c_out) < 1e-12;

    // Angles whose band couplings sit more than ~30 decades below the peak
    // cannot be certified in double precision (and alternating sweeps need
    // not even contract there); they stay frozen at the initialization and
    // contribute below resolution to the fidelity.
    double peak = 0.0;
    for (double v : band.diag) peak = std::max(peak, v);
    for (double v : band.off) peak = std::max(peak, v);
    const double active_floor = peak * 1e-30;
    auto coupling = [&](int w) {
        return std::max({std::abs(c_out) * band.diag[static_cast<std::size_t>(w)],
                         band.off[static_cast<std::size_t>(w - 1)],
                         band.off[static_cast<std::size_t>(w)]});
    };
    int w_lo = 1, w_hi = n_c - 1;
    while (w_lo <= w_hi && coupling(w_lo) < active_floor) ++w_lo;
    while (w_hi >= w_lo && coupling(w_hi) < active_floor) --w_hi;

    auto harvest = [&] {
        for (int w = 0; w <= n_c; ++w) {
            double s = std::sin(th[static_cast<std::size_t>(w)]);
            proto.s[static_cast<std::size_t>(w)] = s * s;
        }
        proto.s.front() = 0.0;
        proto.s.back() = 1.0;
        proto.n_c = n_c;
        proto.pinned = true;
    };

    long sweep = 0;
    double delta = std::numeric_limits<double>::infinity();
    double residual = std::numeric_limits<double>::infinity();
    bool converged = false;
    for (; sweep < options.max_sweeps; ++sweep) {
        delta = 0.0;
        bool forward = sweep % 2 == 0;
        for (int k = w_lo; k <= w_hi; ++k) {
            int w = forward ? k : w_lo + w_hi - k;
            double b = s_out * band.off[static_cast<std::size_t>(w - 1)] *
                       std::cos(th[static_cast<std::size_t>(w - 1)]);
            double c = s_out * band.off[static_cast<std::size_t>(w)] *
                       std::sin(th[static_cast<std::size_t>(w + 1)]);
            double next;
            if (equatorial_out) {
                next = std::atan2(b, c);
            } else {
                double a = -c_out * band.diag[static_cast<std::size_t>(w)];
                next = maximize_1d(a, b, c, th[static_cast<std::size_t>(w)]);
            }
            double old_s = std::sin(th[static_cast<std::size_t>(w)]);
            double new_s = std::sin(next);
            delta = std::max(delta, std::abs(new_s * new_s - old_s * old_s));
            th[static_cast<std::size_t>(w)] = next;
        }
        if (options.track_sweep_fidelity) {
            harvest();
            options.track_sweep_fidelity->push_back(
                1.0 - infidelity(proto, band, params.theta_out));
        }
        if (delta < options.tol) {
            harvest();
            residual = 0.0;
            std::vector<double> rel = three_angle_residual(proto, band, params.theta_out);
            for (int w = w_lo; w <= w_hi; ++w)
                residual = std::max(residual, std::abs(rel[static_cast<std::size_t>(w - 1)]));
            if (residual <= 10.0 * options.tol) {
                converged = true;
                ++sweep;
                break;
            }
        }
    }
    if (!converged) harvest();

    if (info) {
        info->sweeps = sweep;
        info->last_delta = delta;
        info->residual = residual;
    }
    if (!converged)
        throw SolveError("solve_optimal: no convergence after max_sweeps (last residual " +
                             std::to_string(residual) + ")",
                         residual);
    return proto;
}

ProtocolAngles solve_equatorial_odd_exact(int n_c, double lambda) {
    if (n_c < 3 || n_c % 2 == 0)
        throw std::invalid_argument("solve_equatorial_odd_exact: n_c must be odd and >= 3");
    ClockParams params(n_c, lambda, kHalfPi, kHalfPi);
    PBand band = p_band(n_c, params);

    // log R_w = log off_w - log off_{w+1}, w = 1..n_c-1.
    const int n = (n_c - 1) / 2;
    std::vector<double> log_r(static_cast<std::size_t>(n_c));  // 1-indexed
    for (int w = 1; w <= n_c - 1; ++w) {
        double la = band.log_off[static_cast<std::size_t>(w - 1)];
        double lb = band.log_off[static_cast<std::size_t>(w)];
        if (!std::isfinite(la) || !std::isfinite(lb))
            throw std::domain_error("solve_equatorial_odd_exact: off-band entry underflowed");
        log_r[static_cast<std::size_t>(w)] = la - lb;
    }

    // The telescoped recurrence gives sin(theta_w) = G_w cos(theta_{w-1}) with
    // G_w = R_w / G_{w+1} and G_n = R_n; in particular sin(theta_1) is the
    // alternating product of the R_w.
    std::vector<double> log_g(static_cast<std::size_t>(n) + 1);
    log_g[static_cast<std::size_t>(n)] = log_r[static_cast<std::size_t>(n)];
    for (int w = n - 1; w >= 1; --w)
        log_g[static_cast<std::size_t>(w)] =
            log_r[static_cast<std::size_t>(w)] - log_g[static_cast<std::size_t>(w + 1)];

    std::vector<double> s(static_cast<std::size_t>(n_c) + 1, 0.0);
    for (int w = 1; w <= n; ++w) {
        double g2 = std::exp(2.0 * log_g[static_cast<std::size_t>(w)]);
        double v = g2 * (1.0 - s[static_cast<std::size_t>(w - 1)]);
        if (!(v >= 0.0) || !(v <= 1.0))
            throw std::domain_error("solve_equatorial_odd_exact: recurrence left [0, 1]");
        s[static_cast<std::size_t>(w)] = v;
    }
    for (int w = n + 1; w <= n_c; ++w)
        s[static_cast<std::size_t>(w)] = 1.0 - s[static_cast<std::size_t>(n_c - w)];
    s.front() = 0.0;
    s.back() = 1.0;
    return ProtocolAngles{n_c, std::move(s), true};
}

const char* family_name(Family f) {
    switch (f) {
        case Family::exact: return "exact";
        case Family::exact_odd: return "exact-odd";
        case Family::order1: return "order1";
        case Family::order2: return "order2";
        case Family::order3eq: return "order3eq";
        case Family::discarding: return "discard";
        case Family::eb: return "eb";
        case Family::perturb: return "perturb";
    }
    return "?";
}

std::optional<Family> family_from_name(const std::string& name) {
    if (name == "exact") return Family::exact;
    if (name == "exact-odd") return Family::exact_odd;
    if (name == "order1") return Family::order1;
    if (name == "order2") return Family::order2;
    if (name == "order3eq") return Family::order3eq;
    if (name == "discard" || name == "discarding") return Family::discarding;
    if (name == "eb") return Family::eb;
    if (name == "perturb") return Family::perturb;
    return std::nullopt;
}

ProtocolAngles protocol_for_family(Family family, int n_c, const ClockParams& params, double tol) {
    if (n_c < 1) throw std::invalid_argument("protocol_for_family: n_c must be >= 1");
    if (family == Family::eb) return eb_optimal_protocol(n_c);
    if (n_c == 1) return ProtocolAngles{1, {0.0, 1.0}, true};
    switch (family) {
        case Family::exact:
            if (params.is_equatorial() && n_c % 2 == 1 && n_c >= 3 && params.lambda < 1.0)
                return solve_equatorial_odd_exact(n_c, params.lambda);
            return solve_optimal(n_c, params, SolveOptions{tol, 100000, std::nullopt});
        case Family::exact_odd:
            return solve_equatorial_odd_exact(n_c, params.lambda);
        case Family::order1:
            return protocol_order1(n_c, params);
        case Family::order2:
            return protocol_order2(n_c, params);
        case Family::order3eq:
            return protocol_order3_equatorial(n_c, params.lambda);
        case Family::discarding:
            return discarding_protocol(n_c);
        case Family::perturb:
            return perturbative_protocol(n_c, params.c0).proto;
        case Family::eb:
            break;
    }
    throw std::invalid_argument("protocol_for_family: unsupported family");
}

AvgInfidelity average_infidelity(const ClockParams& params, Family family, double tol, int jobs) {
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
            // Nothing survives Schur sampling; the best TI preparation is the
            // nearer pole, at infidelity (1 - |cos(theta_out)|) / 2.
            per_outcome[i] = o.prob * (1.0 - std::abs(params.c_out)) / 2.0;
            return;
        }
        ProtocolAngles proto = protocol_for_family(family, o.n_c, params, tol);
        PBand band = p_band(o.n_c, params);
        per_outcome[i] = o.prob * infidelity(proto, band, params.theta_out);
    });

    AvgInfidelity out;
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
    return out;
}

}  // namespace clockforge
