#pragma once

#include "scmaofdm/common.hpp"
#include "scmaofdm/rng.hpp"

namespace scmaofdm {

/// Multipath power-delay profile. Powers are renormalized to unit total at
/// construction; the applied scale factor is kept for reporting.
struct PowerDelayProfile {
    std::vector<int> delays;     // strictly increasing, in samples
    std::vector<double> powers;  // sums to 1 after normalization
    double normalization_scale = 1.0;

    PowerDelayProfile() = default;
    PowerDelayProfile(std::vector<int> d, std::vector<double> p);

    int paths() const { return static_cast<int>(delays.size()); }
    int max_delay() const { return delays.empty() ? 0 : delays.back(); }

    /// The 8-path profile used throughout: delays [1,2,4,6,9,11,15,20],
    /// powers [.36,.24,.15,.10,.06,.04,.025,.017] (renormalized).
    static PowerDelayProfile default_profile();
};

/// One block-fading realization: sparse taps plus the N-point frequency
/// response lambda_n = sum_p h_p exp(-j*2*pi*n*d_p/N).
struct ChannelRealization {
    std::vector<int> delays;
    cvec taps;
    cvec lambda;

    double tap_energy() const;
};

/// Independent Rayleigh taps, tap p ~ CN(0, sigma_p^2).
ChannelRealization draw_channel(const PowerDelayProfile& pdp, int n_sc, RngStream& rng);

/// Linear convolution of the CP-prefixed signal with the taps, truncated to
/// the input length. Requires max delay <= n_cp so that the payload sees the
/// circular channel matrix.
cvec apply_channel_time(const cvec& x_with_cp, const ChannelRealization& ch, int n_cp);

/// Adds i.i.d. circularly-symmetric complex Gaussian noise of per-sample
/// variance sigma0_sq.
cvec add_awgn(const cvec& x, double sigma0_sq, RngStream& rng);

/// Closed-form frequency covariance c(m,n) = E{lambda_m lambda_n^*}
///                                = sum_p sigma_p^2 exp(-j*2*pi*(m-n)*d_p/N).
cplx freq_covariance(const PowerDelayProfile& pdp, int m, int n, int n_sc);
cplx freq_covariance_diff(const PowerDelayProfile& pdp, int diff, int n_sc);

}  // namespace scmaofdm
