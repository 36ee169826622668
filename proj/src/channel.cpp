#include "scmaofdm/channel.hpp"

#include <cmath>
#include <numeric>

namespace scmaofdm {

PowerDelayProfile::PowerDelayProfile(std::vector<int> d, std::vector<double> p)
    : delays(std::move(d)), powers(std::move(p)) {
    if (delays.empty() || delays.size() != powers.size()) {
        throw ConfigError("pdp: need matching, non-empty delay and power lists");
    }
    for (std::size_t i = 0; i < delays.size(); ++i) {
        if (delays[i] < 0) throw ConfigError("pdp: delays must be non-negative");
        if (i > 0 && delays[i] <= delays[i - 1]) {
            throw ConfigError("pdp: delays must be strictly increasing");
        }
        if (!(powers[i] > 0.0)) throw ConfigError("pdp: powers must be positive");
    }
    const double total = std::accumulate(powers.begin(), powers.end(), 0.0);
    normalization_scale = 1.0 / total;
    for (auto& w : powers) w *= normalization_scale;
}

PowerDelayProfile PowerDelayProfile::default_profile() {
    return PowerDelayProfile({1, 2, 4, 6, 9, 11, 15, 20},
                             {0.36, 0.24, 0.15, 0.10, 0.06, 0.04, 0.025, 0.017});
}

double ChannelRealization::tap_energy() const {
    double e = 0.0;
    for (const auto& h : taps) e += std::norm(h);
    return e;
}

ChannelRealization draw_channel(const PowerDelayProfile& pdp, int n_sc, RngStream& rng) {
    ChannelRealization ch;
    ch.delays = pdp.delays;
    ch.taps.resize(pdp.paths());
    for (int p = 0; p < pdp.paths(); ++p) {
        ch.taps[p] = rng.cgaussian(pdp.powers[p]);
    }
    ch.lambda.resize(n_sc);
    const double base = -2.0 * M_PI / static_cast<double>(n_sc);
    for (int n = 0; n < n_sc; ++n) {
        cplx acc(0.0, 0.0);
        for (int p = 0; p < pdp.paths(); ++p) {
            acc += ch.taps[p] * std::polar(1.0, base * n * ch.delays[p]);
        }
        ch.lambda[n] = acc;
    }
    return ch;
}

cvec apply_channel_time(const cvec& x_with_cp, const ChannelRealization& ch, int n_cp) {
    if (!ch.delays.empty() && ch.delays.back() > n_cp) {
        throw ConfigError("channel: maximum delay exceeds the cyclic prefix");
    }
    const int len = static_cast<int>(x_with_cp.size());
    cvec y(len, cplx(0.0, 0.0));
    for (std::size_t p = 0; p < ch.taps.size(); ++p) {
        const int d = ch.delays[p];
        const cplx h = ch.taps[p];
        for (int t = d; t < len; ++t) {
            y[t] += h * x_with_cp[t - d];
        }
    }
    return y;
}

cvec add_awgn(const cvec& x, double sigma0_sq, RngStream& rng) {
    if (sigma0_sq < 0.0) throw InputError("add_awgn: variance must be non-negative");
    cvec y = x;
    if (sigma0_sq == 0.0) return y;
    for (auto& v : y) v += rng.cgaussian(sigma0_sq);
    return y;
}

cplx freq_covariance_diff(const PowerDelayProfile& pdp, int diff, int n_sc) {
    const double base = -2.0 * M_PI * static_cast<double>(diff) / static_cast<double>(n_sc);
    cplx acc(0.0, 0.0);
    for (int p = 0; p < pdp.paths(); ++p) {
        acc += pdp.powers[p] * std::polar(1.0, base * pdp.delays[p]);
    }
    return acc;
}

cplx freq_covariance(const PowerDelayProfile& pdp, int m, int n, int n_sc) {
    return freq_covariance_diff(pdp, m - n, n_sc);
}

}  // namespace scmaofdm
