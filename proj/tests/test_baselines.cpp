#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "clockforge/baselines.hpp"
#include "clockforge/pband.hpp"
#include "clockforge/solver.hpp"

using namespace clockforge;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("entanglement-breaking optimum is the flat protocol") {
    ProtocolAngles flat = eb_optimal_protocol(7);
    CHECK_FALSE(flat.pinned);
    for (double s : flat.s) CHECK(s == 0.5);
    CHECK(is_ppt(flat));
    ChoiBlocks blocks = choi_blocks(flat);
    for (double a : blocks.off) CHECK(a == doctest::Approx(0.5).epsilon(1e-15));

    // Output purity equals the zeroth off-band moment.
    ClockParams p = ClockParams::equatorial(7, 0.8);
    PBand band = p_band(7, p);
    double off_sum = 0.0;
    for (double v : band.off) off_sum += v;
    OutputQubit q = output_state(flat, band);
    CHECK(q.lambda_tilde(kPi / 2) == doctest::Approx(off_sum).epsilon(1e-13));
}

TEST_CASE("EB infidelity: series factor and dominance") {
    EbInfidelity eb = eb_infidelity(101, 0.8);
    CHECK(eb.series.delta1 == doctest::Approx(1.0 / (4.0 * 0.64)).epsilon(1e-14));
    CHECK(101.0 * eb.value == doctest::Approx(eb.series.delta1).epsilon(0.05));

    AvgInfidelity opt = average_infidelity(ClockParams::equatorial(101, 0.8), Family::exact);
    CHECK(eb.value >= opt.value);
}

TEST_CASE("EB exact value approaches its printed series at rate 1/N^4") {
    const double lambda = 0.75;
    auto resid = [&](int n) {
        EbInfidelity eb = eb_infidelity(n, lambda);
        return std::abs(eb.value - eb.series.eval(static_cast<double>(n)));
    };
    double ratio = resid(200) / resid(400);
    CHECK(ratio >= 16.0 / 2.0);
    CHECK(ratio <= 16.0 * 2.0);
}

TEST_CASE("perfect conversion probabilities") {
    CHECK(perfect_conversion_probability(kPi / 3, kPi / 3) == doctest::Approx(1.0));
    CHECK(perfect_conversion_probability(kPi / 2, kPi / 3) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(perfect_conversion_probability(kPi / 3, kPi / 2) ==
          doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("perfect conversion oracle: dense simulation matches the closed form") {
    CHECK(perfect_conversion_oracle(kPi / 3, kPi / 3, 0.4).success_prob == doctest::Approx(1.0));
    CHECK(perfect_conversion_oracle(kPi / 3, kPi / 3, 0.4).conditional_fidelity ==
          doctest::Approx(1.0));
    ConversionSample c = perfect_conversion_oracle(kPi / 2, kPi / 3, 1.1);
    CHECK(c.success_prob == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
    CHECK(c.conditional_fidelity == doctest::Approx(1.0).epsilon(1e-13));

    // Success probability cannot depend on the unknown azimuth.
    for (int i = 0; i < 10; ++i) {
        double phi = 0.37 + 0.61 * i;
        ConversionSample s = perfect_conversion_oracle(kPi / 2.6, kPi / 1.6, phi);
        CHECK(s.success_prob ==
              doctest::Approx(perfect_conversion_probability(kPi / 2.6, kPi / 1.6))
                  .epsilon(1e-12));
        CHECK(s.conditional_fidelity == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("perturbative protocol structure") {
    CHECK(perturbative_protocol(9, 0.0).proto.s == discarding_protocol(9).s);
    // The midpoint stays at 1/2 for even N_C (all corrections carry N_C - 2w).
    PerturbativeProtocol even = perturbative_protocol(8, 0.01);
    CHECK(even.proto.s[4] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK_FALSE(even.second_order_dropped);
    // Odd symmetry before clamping.
    for (int w = 0; w <= 8; ++w)
        CHECK(even.proto.s[w] + even.proto.s[8 - w] == doctest::Approx(1.0).epsilon(1e-13));

    CHECK(perturbative_protocol(4, 0.01).second_order_dropped);
    CHECK_THROWS_AS(perturbative_protocol(2, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(perturbative_protocol(9, 0.5), std::invalid_argument);
}

TEST_CASE("perturbative protocol tracks the exact optimum to O(c0^3)") {
    const int n_c = 11;
    auto max_diff = [&](double c0) {
        ProtocolAngles exact = solve_equatorial_odd_exact(n_c, 1.0 - 2.0 * c0);
        ProtocolAngles pert = perturbative_protocol(n_c, c0).proto;
        double m = 0.0;
        for (std::size_t i = 0; i < exact.s.size(); ++i)
            m = std::max(m, std::abs(exact.s[i] - pert.s[i]));
        return m;
    };
    double ratio = max_diff(1e-3) / max_diff(5e-4);
    CHECK(ratio >= 5.5);
    CHECK(ratio <= 11.5);
}

TEST_CASE("perturbative protocol beats order-1 in the low-noise regime") {
    for (int n_c : {11, 51}) {
        double c0 = 1e-3;
        ClockParams p = ClockParams::equatorial(n_c, 1.0 - 2.0 * c0);
        PBand band = p_band(n_c, p);
        double f_pert = fidelity(perturbative_protocol(n_c, c0).proto, band, kPi / 2);
        double f_o1 = fidelity(protocol_order1(n_c, p), band, kPi / 2);
        CHECK(f_pert >= f_o1);
    }
}

TEST_CASE("dissipation: post-selection wastes less, both positive") {
    for (int n : {51, 101}) {
        for (double lambda : {0.5, 0.7}) {
            double naive = dissipation(n, lambda, DissipationMode::naive);
            double post = dissipation(n, lambda, DissipationMode::postselected);
            CHECK(post <= naive + 1e-12);
            CHECK(post > 0.0);
            CHECK(naive > 0.0);
        }
    }
    CHECK_THROWS_AS(dissipation(51, 1.0, DissipationMode::naive), std::invalid_argument);
}
