#pragma once

#include <cstdint>
#include <optional>

#include "scmaofdm/channel.hpp"
#include "scmaofdm/common.hpp"
#include "scmaofdm/rng.hpp"
#include "scmaofdm/scma.hpp"

namespace scmaofdm {

/// Per-used-subcarrier superimposed signal power E{|w_k|^2} = J/K.
double superimposed_power(const ScmaConfig& cfg);

/// ICI variance over a Gaussian channel:
/// (J/K) * (1 - sin^2(pi eps) / (N^2 sin^2(pi eps / N))), with the eps -> 0
/// limit returning 0.
double awgn_ici_variance(double eps, int n_sc, int J, int K);

/// Decomposed conditional ICI power about subcarrier n (0-based):
/// sigma_alpha2 scales with |lambda_n|^2, sigma_beta2 does not. Both include
/// the per-interferer power E{|s_m|^2} = J/K.
struct IciStats {
    double sigma_alpha2 = 0.0;
    double sigma_beta2 = 0.0;
    double c_nn = 1.0;
};

IciStats conditional_ici_moments(const PowerDelayProfile& pdp, double eps, int n_sc,
                                 int J, int K, int n = 0);

/// Conditional SINR gamma(lambda_n) for a fading channel.
double conditional_sinr(double lambda_sq, double phi_nn_sq, const IciStats& stats,
                        double sigma0_sq);

/// SINR constant of the Gaussian-channel PEP: 1 / (ICI variance + sigma0^2).
double awgn_sinr(double eps, int n_sc, int J, int K, double sigma0_sq);

/// Conditional PEP given a common SINR: the exact Q form and the
/// two-exponential approximation that feeds the unconditional average.
struct ConditionalPep {
    double exact_q = 0.0;
    double approx = 0.0;
};

ConditionalPep conditional_pep(const std::vector<double>& delta_sq, double gamma);

/// Distance profile of one (w, w_hat) group: sorted |Delta_k|^2 values,
/// the accumulated bit-error weight over all pairs with this profile, and
/// the number of pairs collapsed into it.
struct PairProfile {
    std::vector<double> delta_sq;
    double ne_sum = 0.0;
    std::int64_t pairs = 0;
};

/// Groups all M^J (M^J - 1) ordered codeword pairs by distance profile.
std::vector<PairProfile> group_pair_profiles(const ScmaSystem& sys,
                                             std::int64_t cap = 1 << 20);

struct SeriesOptions {
    double tol = 1e-10;
    int m_max = 20000;           // series truncation; terms peak near mu/(8 upsilon)
    double upsilon_floor = 1e-12;  // below this, the upsilon -> 0 closed form
};

struct SeriesResult {
    double value = 0.0;
    int terms_used = 0;
    bool converged = true;
};

/// Rayleigh-averaged PEP through the Whittaker-function series. The Whittaker
/// table depends on upsilon only, so one evaluator serves every distance
/// profile at a given (eps, sigma0^2) operating point.
class PepSeriesEvaluator {
  public:
    PepSeriesEvaluator(const IciStats& stats, double phi_nn_sq, double sigma0_sq,
                       SeriesOptions opts = {});

    double mu_of(double delta_sq) const { return mu_unit_ * delta_sq; }
    double upsilon() const { return upsilon_; }

    /// Per-RE average E{exp(-gamma(lambda) delta_sq / a)}, a = 8 or 6.
    SeriesResult re_factor(double a, double delta_sq) const;

    /// PEP of a whole profile: (1/12) prod F8 + (1/4) prod F6.
    SeriesResult pep(const std::vector<double>& delta_sq) const;

  private:
    double factor_upsilon_zero(double a, double mu) const;
    double whittaker_s(int m) const;

    double mu_unit_ = 0.0;   // mu per unit |Delta|^2
    double upsilon_ = 0.0;
    SeriesOptions opts_;
    mutable std::vector<double> s_;  // S_m = z^m U(m, m, z) table, built once
};

struct PepMcResult {
    double value = 0.0;
    double std_error = 0.0;
};

/// Monte Carlo average of the approximated conditional PEP over independent
/// Rayleigh |lambda_n|^2 draws (exponential with mean c_nn per RE).
PepMcResult pep_montecarlo(const std::vector<double>& delta_sq, const IciStats& stats,
                           double phi_nn_sq, double sigma0_sq, std::int64_t samples,
                           RngStream& rng);

enum class BerMethod { series, montecarlo, awgn };

BerMethod ber_method_from_string(const std::string& s);
std::string to_string(BerMethod m);

struct UnionBoundOptions {
    BerMethod method = BerMethod::series;
    SeriesOptions series;
    std::int64_t mc_samples = 20000;
    std::uint64_t mc_seed = 1;
    std::int64_t pair_cap = 1 << 20;
};

struct UnionBoundResult {
    double ber = 0.0;
    bool series_converged = true;
    double mc_std_error = 0.0;  // propagated bound on the MC error (mc method)
};

/// Union-bound BER over grouped profiles. `pdp` selects the Rayleigh model;
/// pass nullptr for the Gaussian channel (method must then be awgn).
UnionBoundResult union_bound_ber(const ScmaSystem& sys,
                                 const std::vector<PairProfile>& profiles,
                                 int n_sc, double eps, double sigma0_sq,
                                 const PowerDelayProfile* pdp,
                                 const UnionBoundOptions& opts = {});

/// Convenience overload that groups the pairs itself.
UnionBoundResult union_bound_ber(const ScmaSystem& sys, int n_sc, double eps,
                                 double sigma0_sq, const PowerDelayProfile* pdp,
                                 const UnionBoundOptions& opts = {});

}  // namespace scmaofdm
