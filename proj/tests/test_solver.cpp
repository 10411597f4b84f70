#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "clockforge/asymptotic.hpp"
#include "clockforge/baselines.hpp"
#include "clockforge/pband.hpp"
#include "clockforge/solver.hpp"

using namespace clockforge;

namespace {
constexpr double kPi = std::numbers::pi;

double max_residual(const ProtocolAngles& proto, const ClockParams& p) {
    PBand band = p_band(proto.n_c, p);
    double r = 0.0;
    for (double v : three_angle_residual(proto, band, p.theta_out)) r = std::max(r, std::abs(v));
    return r;
}

double max_s_diff(const ProtocolAngles& a, const ProtocolAngles& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.s.size(); ++i) m = std::max(m, std::abs(a.s[i] - b.s[i]));
    return m;
}
}  // namespace

TEST_CASE("pure matching inputs solve to the discarding protocol") {
    for (double theta : {kPi / 6, kPi / 2}) {
        ClockParams p(9, 1.0, theta, theta);
        ProtocolAngles proto = solve_optimal(9, p);
        CHECK(max_s_diff(proto, discarding_protocol(9)) <= 1e-13);
        PBand band = p_band(9, p);
        CHECK(std::abs(fidelity(proto, band, theta) - 1.0) <= 1e-12);
    }
}

TEST_CASE("coordinate ascent agrees with the closed-form odd solution") {
    for (int n_c : {3, 11, 41}) {
        for (double lambda : {0.2, 0.5, 0.95}) {
            ClockParams p = ClockParams::equatorial(n_c, lambda);
            SolveInfo info;
            ProtocolAngles ascent = solve_optimal(n_c, p, {}, &info);
            ProtocolAngles closed = solve_equatorial_odd_exact(n_c, lambda);
            CHECK(max_s_diff(ascent, closed) <= 1e-10);
            CHECK(info.residual <= 1e-10);
            CHECK(max_residual(closed, p) <= 1e-10);
            // Bit-flip symmetry of the optimum.
            for (int w = 0; w <= n_c; ++w)
                CHECK(ascent.s[w] + ascent.s[n_c - w] == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("exact odd closed form: small cases") {
    // N_C = 3: sin(theta_1) = R_1 and theta_2 = pi/2 - theta_1.
    double lambda = 0.6;
    ClockParams p = ClockParams::equatorial(3, lambda);
    PBand band = p_band(3, p);
    std::vector<double> r = r_ratios(band);
    ProtocolAngles proto = solve_equatorial_odd_exact(3, lambda);
    CHECK(proto.s[1] == doctest::Approx(r[0] * r[0]).epsilon(1e-13));
    CHECK(proto.s[2] == doctest::Approx(1.0 - proto.s[1]).epsilon(1e-13));
    // lambda = 1: discarding, s_1 = 1/3.
    ProtocolAngles pure = solve_equatorial_odd_exact(3, 1.0);
    CHECK(pure.s[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    CHECK_THROWS_AS(solve_equatorial_odd_exact(4, 0.5), std::invalid_argument);
}

TEST_CASE("monotone ascent and stationarity at the fixed point") {
    // One target above and one below the equator (opposite signs of the
    // quadratic term in the 1-D angle objective).
    for (double theta_out : {kPi / 2.5, 2 * kPi / 3}) {
        ClockParams p(25, 0.55, kPi / 3, theta_out);
        std::vector<double> history;
        SolveOptions opt;
        opt.track_sweep_fidelity = &history;
        SolveInfo info;
        ProtocolAngles proto = solve_optimal(25, p, opt, &info);
        REQUIRE(history.size() >= 2);
        for (std::size_t i = 1; i < history.size(); ++i)
            CHECK(history[i] >= history[i - 1] - 1e-15);
        CHECK(info.residual <= 10.0 * opt.tol);
        CHECK(max_residual(proto, p) <= 10.0 * opt.tol);
    }
}

TEST_CASE("multi-start lands on the same optimum") {
    ClockParams p(23, 0.45, kPi / 2.5, kPi / 2);
    ProtocolAngles base = solve_optimal(23, p);

    SolveOptions from_discarding;
    from_discarding.start = discarding_protocol(23);
    CHECK(max_s_diff(base, solve_optimal(23, p, from_discarding)) <= 1e-8);

    // Flat interior with pinned endpoints.
    std::vector<double> flat(24, 0.5);
    flat.front() = 0.0;
    flat.back() = 1.0;
    SolveOptions from_flat;
    from_flat.start = make_protocol(23, std::move(flat));
    CHECK(max_s_diff(base, solve_optimal(23, p, from_flat)) <= 1e-8);

    // Even N_C, where no closed form exists: starts must still agree
    // (disagreement here would flag a non-unique stationary point).
    ClockParams pe = ClockParams::equatorial(24, 0.6);
    ProtocolAngles base_even = solve_optimal(24, pe);
    SolveOptions even_start;
    even_start.start = discarding_protocol(24);
    CHECK(max_s_diff(base_even, solve_optimal(24, pe, even_start)) <= 1e-8);
}

TEST_CASE("degenerate sizes") {
    ClockParams p = ClockParams::equatorial(1, 0.6);
    ProtocolAngles one = solve_optimal(1, p);
    CHECK(one.s == std::vector<double>{0.0, 1.0});

    ClockParams p2(2, 0.6, kPi / 3, kPi / 2.2);
    ProtocolAngles two = solve_optimal(2, p2);
    CHECK(max_residual(two, p2) <= 1e-11);
}

TEST_CASE("solver handles near-polar angle combinations") {
    // Extreme latitudes drive band tails into flat directions and box-corner
    // angles; the solve must still converge and certify stationarity.
    struct Case {
        int n_c;
        double lambda, ti, to;
    };
    for (Case c : {Case{29, 0.8515, 0.2262, 0.8675}, Case{98, 0.3501, 2.6918, 1.6605},
                   Case{37, 0.9929, 2.9938, 2.1587}}) {
        CAPTURE(c.n_c);
        ClockParams p(c.n_c, c.lambda, c.ti, c.to);
        SolveInfo info;
        ProtocolAngles proto = solve_optimal(c.n_c, p, {}, &info);
        CHECK(info.residual <= 1e-11);
        PBand band = p_band(c.n_c, p);
        // Sanity: it still beats the first-order protocol.
        CHECK(fidelity(proto, band, c.to) >=
              fidelity(protocol_order1(c.n_c, p), band, c.to) - 1e-13);
    }
}

TEST_CASE("three-angle residual distinguishes optima from arbitrary protocols") {
    ClockParams p(7, 1.0, kPi / 3, kPi / 3);
    CHECK(max_residual(discarding_protocol(7), p) <= 1e-12);

    ClockParams peq = ClockParams::equatorial(7, 0.7);
    ProtocolAngles skew = discarding_protocol(7);
    skew.s[3] = 0.25;
    CHECK(max_residual(skew, peq) > 1e-3);
}

TEST_CASE("optimal fidelity dominates every other family") {
    for (int n_c : {5, 17}) {
        for (double lambda : {0.5, 0.85}) {
            ClockParams p = ClockParams::equatorial(n_c, lambda);
            PBand band = p_band(n_c, p);
            double best = fidelity(protocol_for_family(Family::exact, n_c, p), band, p.theta_out);
            for (Family fam : {Family::order1, Family::order3eq, Family::discarding, Family::eb}) {
                double f = fidelity(protocol_for_family(fam, n_c, p), band, p.theta_out);
                CHECK(best >= f - 1e-12);
            }
        }
    }
}

TEST_CASE("odd equatorial s_w values are low-degree rational functions of lambda") {
    // Sample s_w(lambda), fit a rational function of degree (d, d) by a
    // homogeneous linear solve in long double, and check it reproduces
    // held-out evaluations. Integer-coefficient rationality shows up as exact
    // interpolation consistency at low degree.
    using LMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    using LVec = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
    for (int n_c : {3, 5, 7}) {
        for (int w : {1, (n_c + 1) / 2}) {
            auto sample = [&](double lambda) {
                return solve_equatorial_odd_exact(n_c, lambda).s[static_cast<std::size_t>(w)];
            };
            bool fitted = false;
            for (int d = 2; d <= 16 && !fitted; ++d) {
                int unknowns = 2 * d + 2;           // a_0..a_d, b_0..b_d
                int m = unknowns + 6;               // oversampled
                LMat a = LMat::Zero(m, unknowns);
                for (int i = 0; i < m; ++i) {
                    long double lam = 0.30L + 0.55L * i / static_cast<long double>(m - 1);
                    long double s = static_cast<long double>(sample(static_cast<double>(lam)));
                    long double pow_l = 1.0L;
                    for (int k = 0; k <= d; ++k) {
                        a(i, k) = pow_l;          // numerator
                        a(i, d + 1 + k) = -s * pow_l;  // -s * denominator
                        pow_l *= lam;
                    }
                }
                // Smallest singular direction ~ the rational relation.
                Eigen::JacobiSVD<LMat> svd(a, Eigen::ComputeThinV);
                LVec coef = svd.matrixV().col(unknowns - 1);
                // Validate on held-out points.
                bool ok = true;
                for (double lam : {0.333, 0.666, 0.875}) {
                    long double num = 0.0L, den = 0.0L, pow_l = 1.0L;
                    for (int k = 0; k <= d; ++k) {
                        num += coef(k) * pow_l;
                        den += coef(d + 1 + k) * pow_l;
                        pow_l *= static_cast<long double>(lam);
                    }
                    if (std::abs(static_cast<double>(den)) < 1e-12) {
                        ok = false;
                        break;
                    }
                    double predicted = static_cast<double>(num / den);
                    if (std::abs(predicted - sample(lam)) > 1e-9) ok = false;
                }
                fitted = ok;
            }
            CAPTURE(n_c);
            CAPTURE(w);
            CHECK(fitted);
        }
    }
}

TEST_CASE("average infidelity: trivial point and family ordering") {
    ClockParams p1 = ClockParams::equatorial(1, 0.7);
    CHECK(average_infidelity(p1, Family::exact).value ==
          doctest::Approx((1.0 - 0.7) / 2.0).epsilon(1e-13));

    // Skipped mass is accounted and small.
    ClockParams p = ClockParams::equatorial(64, 0.6);
    AvgInfidelity exact = average_infidelity(p, Family::exact);
    AvgInfidelity order1 = average_infidelity(p, Family::order1);
    AvgInfidelity eb = average_infidelity(p, Family::eb);
    CHECK(exact.skipped_mass <= 1e-12);
    CHECK(exact.value <= order1.value + 1e-14);
    CHECK(order1.value <= eb.value + 1e-14);
}

TEST_CASE("family name round trip") {
    for (Family f : {Family::exact, Family::exact_odd, Family::order1, Family::order2,
                     Family::order3eq, Family::discarding, Family::eb, Family::perturb})
        CHECK(family_from_name(family_name(f)) == f);
    CHECK_FALSE(family_from_name("nonsense").has_value());
}
