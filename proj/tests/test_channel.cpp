#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "scmaofdm/channel.hpp"
#include "scmaofdm/ofdm.hpp"

using namespace scmaofdm;

TEST_CASE("default PDP normalization") {
    const PowerDelayProfile pdp = PowerDelayProfile::default_profile();
    REQUIRE(pdp.paths() == 8);
    CHECK(pdp.delays == std::vector<int>{1, 2, 4, 6, 9, 11, 15, 20});
    double total = 0.0;
    for (double p : pdp.powers) total += p;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    // Relative shape preserved: .36/.24 = 1.5.
    CHECK(pdp.powers[0] / pdp.powers[1] == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(pdp.max_delay() == 20);

    CHECK_THROWS_AS(PowerDelayProfile({3, 1}, {0.5, 0.5}), ConfigError);
    CHECK_THROWS_AS(PowerDelayProfile({1, 2}, {0.5}), ConfigError);
    CHECK_THROWS_AS(PowerDelayProfile({1, 2}, {0.5, -0.1}), ConfigError);
}

TEST_CASE("draw_channel: lambda is the DFT of the taps; energy statistics") {
    const PowerDelayProfile pdp = PowerDelayProfile::default_profile();
    const int n_sc = 128;
    RngStream rng(5);
    const double pi = std::numbers::pi;

    double mean_energy = 0.0;
    const int trials = 2000;
    for (int t = 0; t < trials; ++t) {
        const ChannelRealization ch = draw_channel(pdp, n_sc, rng);
        REQUIRE(ch.taps.size() == 8);
        REQUIRE(static_cast<int>(ch.lambda.size()) == n_sc);
        mean_energy += ch.tap_energy();
        if (t == 0) {
            for (int n = 0; n < n_sc; ++n) {
                cplx acc(0.0, 0.0);
                for (int p = 0; p < 8; ++p) {
                    acc += ch.taps[p] *
                           std::polar(1.0, -2.0 * pi * n * ch.delays[p] / n_sc);
                }
                CHECK(std::abs(ch.lambda[n] - acc) < 1e-12);
            }
        }
    }
    mean_energy /= trials;
    // E sum |h_p|^2 = sum sigma_p^2 = 1; relative MC tolerance ~ 1/sqrt(trials).
    CHECK(mean_energy == doctest::Approx(1.0).epsilon(0.08));
}

TEST_CASE("freq_covariance closed form and empirical agreement") {
    const PowerDelayProfile pdp = PowerDelayProfile::default_profile();
    const int n_sc = 64;
    const double pi = std::numbers::pi;

    // Closed form vs direct sum.
    for (int d : {0, 1, 5, 33}) {
        cplx expect(0.0, 0.0);
        for (int p = 0; p < pdp.paths(); ++p) {
            expect += pdp.powers[p] * std::polar(1.0, -2.0 * pi * d * pdp.delays[p] / n_sc);
        }
        CHECK(std::abs(freq_covariance_diff(pdp, d, n_sc) - expect) < 1e-14);
        CHECK(std::abs(freq_covariance(pdp, 7 + d, 7, n_sc) - expect) < 1e-14);
    }
    // c(n, n) = total power = 1.
    CHECK(std::abs(freq_covariance_diff(pdp, 0, n_sc) - cplx(1.0, 0.0)) < 1e-14);

    // Empirical covariance over many draws.
    RngStream rng(6);
    const int trials = 20000;
    cplx emp01(0.0, 0.0), emp05(0.0, 0.0);
    double emp00 = 0.0;
    for (int t = 0; t < trials; ++t) {
        const ChannelRealization ch = draw_channel(pdp, n_sc, rng);
        emp00 += std::norm(ch.lambda[0]);
        emp01 += ch.lambda[1] * std::conj(ch.lambda[0]);
        emp05 += ch.lambda[5] * std::conj(ch.lambda[0]);
    }
    emp00 /= trials;
    emp01 /= static_cast<double>(trials);
    emp05 /= static_cast<double>(trials);
    CHECK(emp00 == doctest::Approx(1.0).epsilon(0.05));
    CHECK(std::abs(emp01 - freq_covariance_diff(pdp, 1, n_sc)) < 0.05);
    CHECK(std::abs(emp05 - freq_covariance_diff(pdp, 5, n_sc)) < 0.05);
}

TEST_CASE("apply_channel_time equals per-subcarrier multiplication") {
    // With CP at least as long as the max delay, the payload sees a circular
    // convolution, so FFT(payload) = diag(lambda) FFT(input payload).
    const PowerDelayProfile pdp = PowerDelayProfile::default_profile();
    const int n_sc = 64;
    const int n_cp = 24;
    OfdmConfig cfg{n_sc, n_cp, 4, Allocation::interleaved};
    RngStream rng(7);
    cvec s(n_sc);
    for (auto& v : s) v = cplx(rng.gaussian(), rng.gaussian());
    const ChannelRealization ch = draw_channel(pdp, n_sc, rng);

    const cvec tx = ofdm_modulate(s, cfg);
    const cvec rx = apply_channel_time(tx, ch, n_cp);
    const cvec z = ofdm_demodulate(rx, cfg);
    for (int n = 0; n < n_sc; ++n) {
        CHECK(std::abs(z[n] - ch.lambda[n] * s[n]) < 1e-12);
    }
}

TEST_CASE("add_awgn statistics") {
    RngStream rng(8);
    const double sigma0_sq = 0.5;
    const int n = 200000;
    cvec x(n, cplx(0.0, 0.0));
    const cvec y = add_awgn(x, sigma0_sq, rng);
    double power = 0.0;
    cplx mean(0.0, 0.0);
    for (const auto& v : y) {
        power += std::norm(v);
        mean += v;
    }
    power /= n;
    mean /= static_cast<double>(n);
    CHECK(power == doctest::Approx(sigma0_sq).epsilon(0.02));
    CHECK(std::abs(mean) < 0.01);
}
