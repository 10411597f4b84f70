#include "clockforge/schur.hpp"

#include <cmath>
#include <limits>

namespace clockforge {

double log_choose(long long n, long long k) {
    if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
    if (k == 0 || k == n) return 0.0;
    return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

namespace {

// log of (1 - r^m) / (1 - r) for 0 <= r < 1, m >= 1, stable as r -> 1.
double log_geom_sum(double log_r, long long m) {
    if (log_r == -std::numeric_limits<double>::infinity()) return 0.0;  // r = 0 -> sum = 1
    double num = std::expm1(static_cast<double>(m) * log_r);   // r^m - 1
    double den = std::expm1(log_r);                            // r - 1
    return std::log(num / den);
}

}  // namespace

SchurDistribution schur_distribution(const ClockParams& params) {
    SchurDistribution dist;
    const int n = params.n;
    dist.n = n;
    dist.outcomes.reserve(static_cast<std::size_t>(n / 2 + 1));

    if (params.lambda >= 1.0) {
        // Pure inputs always land in the maximal-j sector.
        SchurOutcome full;
        full.n_c = n;
        full.d = 1.0;
        full.log_d = 0.0;
        full.prob = 1.0;
        full.log_prob = 0.0;
        for (int n_c = n % 2; n_c < n; n_c += 2) {
            SchurOutcome o;
            o.n_c = n_c;
            long long k = (n - n_c) / 2;
            o.log_d = log_choose(n, k) +
                      std::log(static_cast<double>(n - 2 * k + 1) / static_cast<double>(n - k + 1));
            o.d = std::exp(o.log_d);
            o.prob = 0.0;
            o.log_prob = -std::numeric_limits<double>::infinity();
            dist.outcomes.push_back(o);
        }
        dist.outcomes.push_back(full);
        return dist;
    }

    const double log_c0 = std::log(params.c0);
    const double log_c1 = std::log(params.c1);
    const double log_r = log_c0 - log_c1;

    for (int n_c = n % 2; n_c <= n; n_c += 2) {
        SchurOutcome o;
        o.n_c = n_c;
        long long k = (n - n_c) / 2;  // k = J - j
        // d_j = C(n,k) - C(n,k-1) = C(n,k) (n - 2k + 1)/(n - k + 1), no cancellation.
        o.log_d = log_choose(n, k) +
                  std::log(static_cast<double>(n - 2 * k + 1) / static_cast<double>(n - k + 1));
        o.d = std::exp(o.log_d);
        // p = d_j (c1 c0)^k (c1^{n_c+1} - c0^{n_c+1}) / (c1 - c0)
        o.log_prob = o.log_d + static_cast<double>(k) * (log_c0 + log_c1) +
                     static_cast<double>(n_c) * log_c1 + log_geom_sum(log_r, n_c + 1);
        o.prob = std::exp(o.log_prob);
        dist.outcomes.push_back(o);
    }
    return dist;
}

NcMoment nc_moment_exact(const ClockParams& params, int p, MomentSign sign) {
    if (p < 1) throw std::invalid_argument("nc_moment_exact: p must be >= 1");
    SchurDistribution dist = schur_distribution(params);
    NcMoment result;
    double sum = 0.0, comp = 0.0;  // Kahan
    for (const SchurOutcome& o : dist.outcomes) {
        if (o.n_c == 0) {
            if (sign == MomentSign::negative && o.prob > 1e-300) result.excluded_mass = o.prob;
            continue;  // 0^p contributes nothing; 0^{-p} is excluded with mass reported
        }
        double x = static_cast<double>(o.n_c);
        double term = sign == MomentSign::positive ? std::pow(x, p) : std::pow(x, -p);
        term *= o.prob;
        double y = term - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    result.value = sum;
    return result;
}

PolyMoment nc_moment_poly(const ClockParams& params, int p) {
    const double l = params.lambda;
    const double n = static_cast<double>(params.n);
    const double q = 1.0 - l;
    PolyMoment out;
    switch (p) {
        case 1:
            out.value = l * n + q / l;
            break;
        case 2:
            out.value = l * l * n * n + q * (3.0 + l) * n - 2.0 * q / l;
            break;
        case 3:
            out.value = l * l * l * n * n * n + 3.0 * l * q * (2.0 + l) * n * n +
                        q * (3.0 - 6.0 * l - 5.0 * l * l - 2.0 * l * l * l) / l * n + 4.0 * q / l;
            break;
        case 4: {
            double l2 = l * l;
            out.value = l2 * l2 * n * n * n * n + 2.0 * l2 * q * (5.0 + 3.0 * l) * n * n * n +
                        q * (15.0 - 9.0 * l - 23.0 * l2 - 11.0 * l2 * l) * n * n +
                        2.0 * q * (2.0 + l) * (-3.0 + 3.0 * l + l2 + 3.0 * l2 * l) / l * n -
                        8.0 * q / l;
            break;
        }
        default:
            throw std::invalid_argument("nc_moment_poly: p must be in 1..4");
    }
    out.error_bound =
        std::ldexp(1.0, p - 1) * (q / l) * std::exp(0.5 * n * std::log1p(-(l * l)));
    return out;
}

NegMomentSeries nc_negative_moment_series(const ClockParams& params, int p, int terms) {
    const double l = params.lambda;
    const double n = static_cast<double>(params.n);
    const double q = 1.0 - l;
    NegMomentSeries out;

    auto accumulate = [&](std::initializer_list<double> coeffs, int leading_order) {
        int kept = terms < 0 ? static_cast<int>(coeffs.size())
                             : std::min<int>(terms, static_cast<int>(coeffs.size()));
        if (kept < 1) throw std::invalid_argument("nc_negative_moment_series: need >= 1 term");
        int order = leading_order;
        double npow = std::pow(n, leading_order);
        int i = 0;
        for (double c : coeffs) {
            if (i++ >= kept) break;
            out.value += c / npow;
            npow *= n;
            ++order;
        }
        out.first_dropped_order = order;
    };

    switch (p) {
        case 1:
            accumulate({1.0 / l, q / (l * l), q * (1.0 + 2.0 * l - l * l) / std::pow(l, 4)}, 1);
            break;
        case 2:
            accumulate({1.0 / (l * l), q * (1.0 + 3.0 * l) / std::pow(l, 4)}, 2);
            break;
        case 3:
            accumulate({1.0 / (l * l * l)}, 3);
            break;
        default:
            throw std::invalid_argument("nc_negative_moment_series: p must be in 1..3");
    }
    return out;
}

}  // namespace clockforge
