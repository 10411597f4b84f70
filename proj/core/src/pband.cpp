#include "clockforge/pband.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "clockforge/schur.hpp"

namespace clockforge {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLogFlush = -690.0;  // entries below ~1e-300 are flushed to zero

// The log assembly runs in extended precision: entry logs reach ~1e4 at the
// largest supported N_C, and double-only accumulation would leave ~1e-12
// relative error on the exponentiated band.
long double log_choose_l(long long n, long long k) {
    if (k < 0 || k > n) return -std::numeric_limits<long double>::infinity();
    if (k == 0 || k == n) return 0.0L;
    return std::lgamma(static_cast<long double>(n) + 1.0L) -
           std::lgamma(static_cast<long double>(k) + 1.0L) -
           std::lgamma(static_cast<long double>(n - k) + 1.0L);
}

struct BandScale {
    long double log_prefactor;  // log[(c1 - c0) / (c1^{N_C+1} - c0^{N_C+1})]
    long double log_site;       // log[(1 + lambda_z)/2]
    long double log_ratio_w;    // log[(1 - lambda_z)/(1 + lambda_z)]
    long double log_off_factor; // log[lambda_x / (1 - lambda_z)]
    double x;                   // lambda_x^2 / (1 - lambda_z^2)
};

BandScale band_scale(int n_c, const ClockParams& p) {
    BandScale s{};
    const long double lz = static_cast<long double>(p.lambda_z);
    const long double lx = static_cast<long double>(p.lambda_x);
    const long double c0 = static_cast<long double>(p.c0);
    const long double c1 = static_cast<long double>(p.c1);
    if (p.lambda >= 1.0) {
        s.log_prefactor = -static_cast<long double>(n_c) * std::log(c1);  // c0 = 0
    } else {
        long double r_pow = std::exp(static_cast<long double>(n_c + 1) * (std::log(c0) - std::log(c1)));
        s.log_prefactor = std::log(c1 - c0) -
                          (static_cast<long double>(n_c + 1) * std::log(c1) + std::log1p(-r_pow));
    }
    s.log_site = std::log((1.0L + lz) / 2.0L);
    s.log_ratio_w = std::log1p(-lz) - std::log1p(lz);
    s.log_off_factor = std::log(lx) - std::log1p(-lz);
    s.x = static_cast<double>(lx * lx / (1.0L - lz * lz));
    return s;
}

// log of sum_j C(w, j+alpha) C(n_c - w, j) x^j via the nested scheme
// t0 (1 + r_1 (1 + r_2 (...))) evaluated inside-out with overflow rescaling,
// plus log C(w, alpha) for the leading term.
long double log_nested_sum(int n_c, int w, int alpha, double x) {
    int m = std::min(w - alpha, n_c - w);
    double s = 1.0, unit = 1.0;
    long double log_scale = 0.0L;
    for (int j = m; j >= 1; --j) {
        double r = x * static_cast<double>(w - j + 1 - alpha) *
                   static_cast<double>(n_c - w - j + 1) /
                   (static_cast<double>(j) * static_cast<double>(j + alpha));
        s = unit + r * s;
        if (s > 1e280) {
            log_scale += std::log(static_cast<long double>(s));
            unit /= s;
            s = 1.0;
        }
    }
    return log_scale + std::log(static_cast<long double>(s)) + log_choose_l(w, alpha);
}

double log_band_entry(int n_c, const BandScale& scale, int w, int alpha) {
    if (w < alpha || w > n_c) return kNegInf;
    long double lm = scale.log_prefactor + static_cast<long double>(n_c) * scale.log_site +
                     static_cast<long double>(w) * scale.log_ratio_w +
                     0.5L * (log_choose_l(n_c, w) - log_choose_l(n_c, w - alpha)) +
                     log_nested_sum(n_c, w, alpha, scale.x);
    if (alpha == 1) lm += scale.log_off_factor;
    return static_cast<double>(lm);
}

}  // namespace

PBand p_band(int n_c, const ClockParams& params) {
    if (n_c < 1) throw std::invalid_argument("p_band: n_c must be >= 1");
    PBand band;
    band.n_c = n_c;
    band.diag.resize(static_cast<std::size_t>(n_c) + 1);
    band.log_diag.resize(static_cast<std::size_t>(n_c) + 1);
    band.off.resize(static_cast<std::size_t>(n_c));
    band.log_off.resize(static_cast<std::size_t>(n_c));

    BandScale scale = band_scale(n_c, params);
    for (int w = 0; w <= n_c; ++w) {
        double lm = log_band_entry(n_c, scale, w, 0);
        band.log_diag[static_cast<std::size_t>(w)] = lm;
        band.diag[static_cast<std::size_t>(w)] = lm > kLogFlush ? std::exp(lm) : 0.0;
    }
    for (int w = 1; w <= n_c; ++w) {
        double lm = log_band_entry(n_c, scale, w, 1);
        band.log_off[static_cast<std::size_t>(w - 1)] = lm;
        band.off[static_cast<std::size_t>(w - 1)] = lm > kLogFlush ? std::exp(lm) : 0.0;
    }

    double sum = 0.0, comp = 0.0;
    for (int w = 0; w <= n_c; ++w) {
        double term = static_cast<double>(w) / static_cast<double>(n_c) *
                      band.diag[static_cast<std::size_t>(w)];
        double y = term - comp, t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    band.mu = sum;
    return band;
}

double p_entry_oracle(int n_c, const ClockParams& params, int w, int w_prime) {
    if (n_c < 1 || n_c > 12)
        throw std::invalid_argument("p_entry_oracle: n_c must be in 1..12 (dense construction)");
    if (w < 0 || w > n_c || w_prime < 0 || w_prime > n_c)
        throw std::invalid_argument("p_entry_oracle: Hamming weights out of range");

    const std::size_t dim = std::size_t{1} << n_c;
    const double r00 = (1.0 + params.lambda_z) / 2.0;
    const double r01 = params.lambda_x / 2.0;
    const double r11 = (1.0 - params.lambda_z) / 2.0;

    // |b> = Dicke state of weight w_prime, then apply rho qubit by qubit.
    std::vector<double> vec(dim, 0.0);
    {
        double amp = std::exp(-0.5 * log_choose(n_c, w_prime));
        for (std::size_t b = 0; b < dim; ++b)
            if (std::popcount(b) == w_prime) vec[b] = amp;
    }
    for (int q = 0; q < n_c; ++q) {
        const std::size_t bit = std::size_t{1} << q;
        for (std::size_t b = 0; b < dim; ++b) {
            if (b & bit) continue;
            double v0 = vec[b], v1 = vec[b | bit];
            vec[b] = r00 * v0 + r01 * v1;
            vec[b | bit] = r01 * v0 + r11 * v1;
        }
    }
    double dot = 0.0;
    {
        double amp = std::exp(-0.5 * log_choose(n_c, w));
        for (std::size_t b = 0; b < dim; ++b)
            if (std::popcount(b) == w) dot += amp * vec[b];
    }

    // Divide by p(j = N_C/2) = (c1^{N_C+1} - c0^{N_C+1}) / (c1 - c0).
    double p_top;
    if (params.lambda >= 1.0) {
        p_top = std::pow(params.c1, n_c);
    } else {
        p_top = (std::pow(params.c1, n_c + 1) - std::pow(params.c0, n_c + 1)) /
                (params.c1 - params.c0);
    }
    return dot / p_top;
}

std::vector<double> r_ratios(const PBand& band) {
    std::vector<double> r;
    r.reserve(static_cast<std::size_t>(band.n_c > 0 ? band.n_c - 1 : 0));
    for (int w = 1; w <= band.n_c - 1; ++w) {
        if (band.off[static_cast<std::size_t>(w - 1)] <= 0.0 ||
            band.off[static_cast<std::size_t>(w)] <= 0.0)
            throw std::domain_error(
                "r_ratios: off-band entry underflowed to zero; lambda or N_C outside the "
                "computable range");
        r.push_back(std::exp(band.log_off[static_cast<std::size_t>(w - 1)] -
                             band.log_off[static_cast<std::size_t>(w)]));
    }
    return r;
}

double centered_moment_exact(const PBand& band, int alpha, int p) {
    if (alpha != 0 && alpha != 1)
        throw std::invalid_argument("centered_moment_exact: alpha must be 0 or 1");
    if (p < 0) throw std::invalid_argument("centered_moment_exact: p must be >= 0");
    const double inv_nc = 1.0 / static_cast<double>(band.n_c);
    double sum = 0.0, comp = 0.0;
    for (int w = alpha; w <= band.n_c; ++w) {
        double z = (static_cast<double>(w) - 0.5 * alpha) * inv_nc - band.mu;
        double zp = 1.0;
        for (int k = 0; k < p; ++k) zp *= z;
        double entry = alpha == 0 ? band.diag[static_cast<std::size_t>(w)]
                                  : band.off[static_cast<std::size_t>(w - 1)];
        double term = zp * entry;
        double y = term - comp, t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

double mu_series(int n_c, const ClockParams& p) {
    return (1.0 - p.c_in) / 2.0 +
           (1.0 - p.lambda) * p.c_in / (2.0 * p.lambda * static_cast<double>(n_c));
}

double centered_moment_series(int n_c, const ClockParams& params, int alpha, int p) {
    const double l = params.lambda;
    const double n1 = 1.0 / static_cast<double>(n_c);
    const double n2 = n1 * n1;
    const double n3 = n2 * n1;
    const double C = params.c_in;
    const double S2 = params.s_in * params.s_in;
    const double C2 = C * C;
    const bool equatorial_in = std::abs(C) < 1e-12;

    if (alpha == 0) {
        switch (p) {
            case 0:
                return 1.0;
            case 1:
                return 0.0;
            case 2:
                return S2 / (4.0 * l) * n1 +
                       (1.0 - l) * ((C2 - S2) + C2 * l) / (4.0 * l * l) * n2;
            case 3:
                return C * S2 * (3.0 - l * l) / (8.0 * l * l) * n2;
            case 4:
                return 3.0 * S2 * S2 / (16.0 * l * l) * n2;
            default:
                throw std::invalid_argument("centered_moment_series: alpha=0 supports p <= 4");
        }
    }
    if (alpha != 1) throw std::invalid_argument("centered_moment_series: alpha must be 0 or 1");

    if (equatorial_in) {
        switch (p) {
            case 0:
                return 1.0 - 1.0 / (2.0 * l) * n1 + (-3.0 + 4.0 * l) / (8.0 * l * l) * n2 +
                       (-9.0 + 12.0 * l - 10.0 * l * l) / (16.0 * l * l * l) * n3;
            case 1:
            case 3:
            case 5:
                return 0.0;  // bit-flip symmetry kills odd moments
            case 2:
                return 1.0 / (4.0 * l) * n1 + (-3.0 + 2.0 * l) / (8.0 * l * l) * n2 -
                       (3.0 + 4.0 * l * l) / (32.0 * l * l * l) * n3;
            case 4:
                return 3.0 / (16.0 * l * l) * n2 +
                       (-21.0 + 12.0 * l + 2.0 * l * l) / (32.0 * l * l * l) * n3;
            case 6:
                return 15.0 / (64.0 * l * l * l) * n3;
            default:
                throw std::invalid_argument(
                    "centered_moment_series: alpha=1 equatorial supports p <= 6");
        }
    }

    switch (p) {
        case 0:
            return 1.0 - 1.0 / (2.0 * S2 * l) * n1 +
                   (-C2 / (2.0 * S2 * S2) + 1.0 / (2.0 * S2 * l) -
                    3.0 / (8.0 * S2 * S2 * l * l)) *
                       n2;
        case 1:
            return C * (1.0 + l * l) / (4.0 * S2 * l * l) * n2;
        case 2:
            return S2 / (4.0 * l) * n1 +
                   (-1.0 / 8.0 + (1.0 - l) * (-1.0 + (C2 - S2) * (2.0 + l)) / (8.0 * l * l)) * n2;
        case 3:
            return C * S2 * (3.0 - l * l) / (8.0 * l * l) * n2;
        case 4:
            return 3.0 * S2 * S2 / (16.0 * l * l) * n2;
        default:
            throw std::invalid_argument("centered_moment_series: alpha=1 general supports p <= 4");
    }
}

}  // namespace clockforge
