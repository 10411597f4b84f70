#include "clockforge/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "clockforge/asymptotic.hpp"
#include "clockforge/baselines.hpp"
#include "clockforge/parallel.hpp"

namespace clockforge {

namespace {

double family_series_value(Family family, const ClockParams& p) {
    const double n = static_cast<double>(p.n);
    switch (family) {
        case Family::exact:
        case Family::exact_odd: {
            int order = p.is_equatorial() ? 3 : 2;
            return infidelity_series(p, order).eval(n);
        }
        case Family::order1:
            return infidelity_series(p, 1).eval(n);
        case Family::order2:
            return infidelity_series(p, 2).eval(n);
        case Family::order3eq:
            return infidelity_series(p, 3).eval(n);
        case Family::eb: {
            const double l2 = p.lambda * p.lambda;
            InfidelitySeries s;
            s.order = 3;
            s.delta1 = 1.0 / (4.0 * l2);
            s.delta2 = (3.0 - 4.0 * l2) / (16.0 * l2 * l2);
            s.delta3 = (15.0 - 16.0 * l2 + 8.0 * l2 * l2) / (32.0 * l2 * l2 * l2);
            return s.eval(n);
        }
        case Family::discarding:
            // Schur-sample-and-discard with matching angles: only the leading
            // coefficient (1 - lambda) / (2 lambda^2) is known.
            return (1.0 - p.lambda) / (2.0 * p.lambda * p.lambda) / n;
        case Family::perturb:
            return std::numeric_limits<double>::quiet_NaN();
    }
    return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

std::vector<SweepRow> sweep_rows(const std::vector<Family>& families, const std::vector<int>& ns,
                                 const std::vector<double>& lambdas, double theta_in,
                                 double theta_out, double tol, int jobs) {
    struct Point {
        Family family;
        int n;
        double lambda;
    };
    std::vector<Point> grid;
    for (Family f : families)
        for (int n : ns)
            for (double l : lambdas) grid.push_back({f, n, l});

    std::vector<SweepRow> rows(grid.size());
    parallel_for(grid.size(), jobs, [&](std::size_t i) {
        const Point& pt = grid[i];
        ClockParams params(pt.n, pt.lambda, theta_in, theta_out);
        AvgInfidelity avg = average_infidelity(params, pt.family, tol, 1);
        SweepRow row;
        row.family = family_name(pt.family);
        row.n = pt.n;
        row.lambda = pt.lambda;
        row.theta_in = theta_in;
        row.theta_out = theta_out;
        row.infid = avg.value;
        row.n_times_infid = static_cast<double>(pt.n) * avg.value;
        row.series = family_series_value(pt.family, params);
        row.lower_bound = params.is_equatorial()
                              ? equatorial_symmetry_lower_bound(pt.n, pt.lambda)
                              : infidelity_factor_lower_bound(params) / static_cast<double>(pt.n);
        row.skipped_mass = avg.skipped_mass;
        rows[i] = std::move(row);
    });
    return rows;
}

SolveSummary solve_summary(const ProtocolAngles& proto, const ClockParams& params) {
    PBand band = p_band(proto.n_c, params);
    SolveSummary s;
    s.n_c = proto.n_c;
    s.infid = infidelity(proto, band, params.theta_out);
    s.fid = 1.0 - s.infid;
    s.stationarity_residual = 0.0;
    for (double r : three_angle_residual(proto, band, params.theta_out))
        s.stationarity_residual = std::max(s.stationarity_residual, std::abs(r));
    s.ppt = is_ppt(proto);
    s.lambda_tilde = output_state(proto, band).lambda_tilde(params.theta_out);
    return s;
}

std::string fmt17(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

}  // namespace clockforge
