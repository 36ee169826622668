#include "scmaofdm/ber.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "scmaofdm/ofdm.hpp"
#include "scmaofdm/specfun.hpp"

namespace scmaofdm {

double superimposed_power(const ScmaConfig& cfg) {
    return static_cast<double>(cfg.users) / static_cast<double>(cfg.res);
}

double awgn_ici_variance(double eps, int n_sc, int J, int K) {
    if (n_sc < 2) throw InputError("awgn_ici_variance: N must be at least 2");
    const double gain = ici_diagonal_gain(eps, n_sc);
    const double load = static_cast<double>(J) / static_cast<double>(K);
    return load * (1.0 - gain * gain);
}

IciStats conditional_ici_moments(const PowerDelayProfile& pdp, double eps, int n_sc,
                                 int J, int K, int n) {
    (void)n;  // phi and the covariance depend on index differences only
    IciStats out;
    out.c_nn = freq_covariance_diff(pdp, 0, n_sc).real();
    const double load = static_cast<double>(J) / static_cast<double>(K);
    double alpha = 0.0;
    double beta = 0.0;
    for (int d = 1; d < n_sc; ++d) {
        const double phi_sq = std::norm(ici_coefficient_diff(d, eps, n_sc));
        const double c_sq = std::norm(freq_covariance_diff(pdp, d, n_sc));
        alpha += phi_sq * c_sq;
        // Diagonal of the conditional covariance: c(m,m) - |c(m,n)|^2 / c(n,n).
        beta += phi_sq * (out.c_nn - c_sq / out.c_nn);
    }
    out.sigma_alpha2 = load * alpha / (out.c_nn * out.c_nn);
    out.sigma_beta2 = load * beta;
    return out;
}

// The pairwise decision variable is a real Gaussian, so only the in-phase
// projection of a circularly-symmetric disturbance contributes: half of its
// complex power enters the SINR feeding Q(sqrt(gamma d^2/4)). On the fading
// channel the conditional ICI is itself Gaussian (it is a linear functional
// of the Gaussian taps), so the projection applies to noise and ICI alike.
// On the Gaussian channel the ICI is a finite sum of rotated codeword
// differences, not Gaussian, so its full complex power is kept there as a
// deliberately conservative effective variance and only the thermal noise is
// projected; this keeps the union bound an upper bound near the
// interference floor.
constexpr double kNoiseProjection = 0.5;

double conditional_sinr(double lambda_sq, double phi_nn_sq, const IciStats& stats,
                        double sigma0_sq) {
    return lambda_sq * phi_nn_sq /
           (kNoiseProjection *
            (lambda_sq * stats.sigma_alpha2 + stats.sigma_beta2 + sigma0_sq));
}

double awgn_sinr(double eps, int n_sc, int J, int K, double sigma0_sq) {
    return 1.0 /
           (awgn_ici_variance(eps, n_sc, J, K) + kNoiseProjection * sigma0_sq);
}

ConditionalPep conditional_pep(const std::vector<double>& delta_sq, double gamma) {
    if (gamma < 0.0) throw InputError("conditional_pep: SINR must be non-negative");
    double sum = 0.0;
    for (double d : delta_sq) {
        if (d < 0.0) throw InputError("conditional_pep: |Delta|^2 must be non-negative");
        sum += d;
    }
    if (sum == 0.0) {
        throw InputError("conditional_pep: identical codewords (all-zero distance)");
    }
    const double arg_sq = 0.25 * gamma * sum;
    ConditionalPep out;
    out.exact_q = q_function(std::sqrt(arg_sq));
    out.approx = std::exp(-0.5 * arg_sq) / 12.0 + std::exp(-2.0 * arg_sq / 3.0) / 4.0;
    return out;
}

// ---------------------------------------------------------------------------
// Pair grouping

namespace {

constexpr double kProfileQuantum = 1e-10;

std::int64_t quantize(double x) { return std::llround(x / kProfileQuantum); }

// Sorted quantized distance profile, padded with int64 min so unused slots
// never collide with a real quantized value.
constexpr int kMaxProfileRes = 8;

struct ProfileKey {
    std::array<std::int64_t, kMaxProfileRes> v;
    bool operator==(const ProfileKey&) const = default;
};

struct ProfileKeyHash {
    std::size_t operator()(const ProfileKey& key) const {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL;
        for (std::int64_t x : key.v) {
            h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

}  // namespace

std::vector<PairProfile> group_pair_profiles(const ScmaSystem& sys, std::int64_t cap) {
    const auto entries = sys.enumerate_superimposed(cap);
    const int k_res = sys.config().res;
    if (k_res > kMaxProfileRes) {
        throw ConfigError("group_pair_profiles: supports at most 8 resources");
    }
    const std::size_t n = entries.size();

    // 2-bits-per-user packed labels make n_E a popcount.
    std::vector<std::uint32_t> packed(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t p = 0;
        for (std::size_t t = 0; t < entries[i].bits.size(); ++t) {
            p |= static_cast<std::uint32_t>(entries[i].bits[t]) << t;
        }
        packed[i] = p;
    }

    std::unordered_map<ProfileKey, PairProfile, ProfileKeyHash> groups;
    groups.reserve(1 << 18);
    ProfileKey key;
    key.v.fill(std::numeric_limits<std::int64_t>::min());
    double dsq[kMaxProfileRes];
    // (i, j) and (j, i) share the profile and the error weight; count each
    // unordered pair twice.
    for (std::size_t i = 0; i < n; ++i) {
        const auto& wi = entries[i].w;
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto& wj = entries[j].w;
            for (int k = 0; k < k_res; ++k) dsq[k] = std::norm(wi[k] - wj[k]);
            // insertion sort: k_res is tiny and the call overhead matters here
            for (int k = 1; k < k_res; ++k) {
                const double x = dsq[k];
                int t = k - 1;
                while (t >= 0 && dsq[t] > x) {
                    dsq[t + 1] = dsq[t];
                    --t;
                }
                dsq[t + 1] = x;
            }
            for (int k = 0; k < k_res; ++k) key.v[k] = quantize(dsq[k]);
            auto& g = groups[key];
            if (g.pairs == 0) g.delta_sq.assign(dsq, dsq + k_res);
            g.pairs += 2;
            g.ne_sum += 2.0 * __builtin_popcount(packed[i] ^ packed[j]);
        }
    }

    std::vector<PairProfile> out;
    out.reserve(groups.size());
    for (auto& [k, v] : groups) out.push_back(std::move(v));
    // Deterministic order for reproducible accumulation.
    std::sort(out.begin(), out.end(), [](const PairProfile& a, const PairProfile& b) {
        return a.delta_sq < b.delta_sq;
    });
    return out;
}

// ---------------------------------------------------------------------------
// Series PEP

PepSeriesEvaluator::PepSeriesEvaluator(const IciStats& stats, double phi_nn_sq,
                                       double sigma0_sq, SeriesOptions opts)
    : opts_(opts) {
    // gamma(lambda) d^2 = mu x / (1 + upsilon x) with x = |lambda|^2 / c_nn;
    // the noise projection (see conditional_sinr) enters through the common
    // denominator sigma_beta^2 + sigma_0^2 / 2.
    const double denom = kNoiseProjection * (stats.sigma_beta2 + sigma0_sq);
    if (!(denom > 0.0)) throw InputError("pep series: sigma_beta^2 + sigma0^2 must be positive");
    mu_unit_ = stats.c_nn * phi_nn_sq / denom;
    upsilon_ = kNoiseProjection * stats.c_nn * stats.sigma_alpha2 / denom;
}

double PepSeriesEvaluator::factor_upsilon_zero(double a, double mu) const {
    // E{exp(-mu x / a)}, x ~ Exp(1).
    return 1.0 / (1.0 + mu / a);
}

double PepSeriesEvaluator::whittaker_s(int m) const {
    if (s_.empty()) {
        // S_m = z^m U(m, m, z) = e^{z/2} z^{m/2} W_{-m/2,(m-1)/2}(z) lies in
        // (0, 1]. The integral z^m/Gamma(m) int t^{m-1}(1+t)^{-1} e^{-zt} dt
        // gives the two-term recurrence S_{m+1} = z(1 - S_m)/m, stable
        // forward for m > z and backward for m < z, so one quadrature seed
        // near m = z fills the whole table in O(1) per entry.
        const double z = 1.0 / upsilon_;
        const double ln_z = std::log(z);
        const int m_top = opts_.m_max;
        const int m_seed = std::clamp(static_cast<int>(std::ceil(z)), 1, m_top);
        s_.assign(m_top + 1, 0.0);
        s_[0] = 1.0;
        const double a_seed = static_cast<double>(m_seed);
        s_[m_seed] = std::exp(ln_kummer_u(a_seed, a_seed, z) + m_seed * ln_z);
        for (int m = m_seed - 1; m >= 1; --m) {
            s_[m] = 1.0 - m * s_[m + 1] / z;
        }
        for (int m = m_seed; m < m_top; ++m) {
            s_[m + 1] = z * (1.0 - s_[m]) / m;
        }
        for (int m = 1; m <= m_top; ++m) {
            if (!(s_[m] > 0.0 && s_[m] <= 1.0)) {
                throw NumericsError("pep series: Whittaker recurrence left (0,1]");
            }
        }
    }
    return s_[m];
}

SeriesResult PepSeriesEvaluator::re_factor(double a, double delta_sq) const {
    SeriesResult res;
    if (delta_sq <= 0.0) {
        res.value = 1.0;
        return res;
    }
    const double mu = mu_of(delta_sq);
    if (upsilon_ < opts_.upsilon_floor) {
        res.value = factor_upsilon_zero(a, mu);
        return res;
    }
    // F_a = E{exp(-mu x / (a (1 + upsilon x)))}, x ~ Exp(1). Writing
    // x/(1+ux) = (1/u)(1 - 1/(1+ux)) and expanding the second exponential
    // gives a Poisson-weighted average of S_m = z^m U(m, m, z):
    //   F_a = e^{-c} sum_m c^m/m! S_m,   c = mu/(a upsilon), z = 1/upsilon.
    // Terms peak near m = c; all are positive and S_m <= 1, so F_a <= 1.
    const double c = mu / (a * upsilon_);
    const double ln_c = std::log(c);

    double sum = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    res.converged = false;
    int m = 0;
    for (; m <= opts_.m_max; ++m) {
        const double term =
            std::exp(-c + m * ln_c - std::lgamma(m + 1.0)) * whittaker_s(m);
        sum += term;
        if (m > 2 && static_cast<double>(m) > c && term < prev &&
            term <= opts_.tol * std::max(sum, 1e-300)) {
            res.converged = true;
            break;
        }
        prev = term;
    }
    res.terms_used = std::min(m + 1, opts_.m_max + 1);
    res.value = std::clamp(sum, 0.0, 1.0);
    return res;
}

SeriesResult PepSeriesEvaluator::pep(const std::vector<double>& delta_sq) const {
    SeriesResult res;
    double prod8 = 1.0;
    double prod6 = 1.0;
    for (double d : delta_sq) {
        const SeriesResult f8 = re_factor(8.0, d);
        const SeriesResult f6 = re_factor(6.0, d);
        prod8 *= f8.value;
        prod6 *= f6.value;
        res.converged = res.converged && f8.converged && f6.converged;
        res.terms_used = std::max({res.terms_used, f8.terms_used, f6.terms_used});
    }
    res.value = prod8 / 12.0 + prod6 / 4.0;
    return res;
}

PepMcResult pep_montecarlo(const std::vector<double>& delta_sq, const IciStats& stats,
                           double phi_nn_sq, double sigma0_sq, std::int64_t samples,
                           RngStream& rng) {
    if (samples < 1) throw InputError("pep_montecarlo: need at least one sample");
    double acc = 0.0;
    double acc_sq = 0.0;
    for (std::int64_t s = 0; s < samples; ++s) {
        double arg = 0.0;
        for (double d : delta_sq) {
            const double lam_sq = rng.exponential(stats.c_nn);
            arg += conditional_sinr(lam_sq, phi_nn_sq, stats, sigma0_sq) * d;
        }
        const double v = std::exp(-arg / 8.0) / 12.0 + std::exp(-arg / 6.0) / 4.0;
        acc += v;
        acc_sq += v * v;
    }
    PepMcResult out;
    const double n = static_cast<double>(samples);
    out.value = acc / n;
    const double var = std::max(0.0, acc_sq / n - out.value * out.value);
    out.std_error = std::sqrt(var / n);
    return out;
}

// ---------------------------------------------------------------------------
// Union bound

BerMethod ber_method_from_string(const std::string& s) {
    if (s == "series") return BerMethod::series;
    if (s == "mc" || s == "montecarlo") return BerMethod::montecarlo;
    if (s == "awgn") return BerMethod::awgn;
    throw InputError("unknown BER method: " + s);
}

std::string to_string(BerMethod m) {
    switch (m) {
        case BerMethod::series: return "series";
        case BerMethod::montecarlo: return "mc";
        case BerMethod::awgn: return "awgn";
    }
    return "?";
}

UnionBoundResult union_bound_ber(const ScmaSystem& sys,
                                 const std::vector<PairProfile>& profiles,
                                 int n_sc, double eps, double sigma0_sq,
                                 const PowerDelayProfile* pdp,
                                 const UnionBoundOptions& opts) {
    const ScmaConfig& cfg = sys.config();
    const double denom = static_cast<double>(sys.combination_count()) * cfg.users *
                         cfg.bits_per_user();
    const double gain = ici_diagonal_gain(eps, n_sc);
    const double phi_nn_sq = gain * gain;

    UnionBoundResult result;
    double acc = 0.0;
    double comp = 0.0;  // Kahan compensation: accumulation order must not matter
    const auto add = [&](double x) {
        const double y = x - comp;
        const double t = acc + y;
        comp = (t - acc) - y;
        acc = t;
    };

    if (opts.method == BerMethod::awgn) {
        // Exact Q keeps the union bound a true upper bound; the two-exponential
        // approximation underestimates Q for small arguments and is only needed
        // where the Rayleigh average must be carried out in closed form.
        const double gamma = awgn_sinr(eps, n_sc, cfg.users, cfg.res, sigma0_sq);
        for (const auto& p : profiles) {
            add(p.ne_sum * conditional_pep(p.delta_sq, gamma).exact_q);
        }
    } else {
        if (pdp == nullptr) {
            throw InputError("union_bound_ber: fading methods need a power-delay profile");
        }
        const IciStats stats =
            conditional_ici_moments(*pdp, eps, n_sc, cfg.users, cfg.res);
        if (opts.method == BerMethod::series) {
            PepSeriesEvaluator eval(stats, phi_nn_sq, sigma0_sq, opts.series);
            // The per-RE factor depends on |Delta_k|^2 only; cache by value.
            std::unordered_map<std::int64_t, SeriesResult> cache8, cache6;
            const auto factor = [&](double a, double d,
                                    std::unordered_map<std::int64_t, SeriesResult>& cache) {
                const std::int64_t key = quantize(d);
                auto it = cache.find(key);
                if (it == cache.end()) {
                    it = cache.emplace(key, eval.re_factor(a, d)).first;
                }
                return it->second;
            };
            for (const auto& p : profiles) {
                double prod8 = 1.0, prod6 = 1.0;
                for (double d : p.delta_sq) {
                    const SeriesResult f8 = factor(8.0, d, cache8);
                    const SeriesResult f6 = factor(6.0, d, cache6);
                    prod8 *= f8.value;
                    prod6 *= f6.value;
                    result.series_converged =
                        result.series_converged && f8.converged && f6.converged;
                }
                add(p.ne_sum * (prod8 / 12.0 + prod6 / 4.0));
            }
        } else {
            // The Rayleigh average factorizes over REs (independent |lambda|^2
            // draws), so it suffices to estimate the per-RE factors
            // E{exp(-gamma d/8)}, E{exp(-gamma d/6)} once per distinct |Delta|^2.
            // Replicated estimates give a standard error that accounts for the
            // reuse of each factor across profiles.
            std::vector<double> dsq_values;
            std::unordered_map<std::int64_t, std::size_t> index_of;
            for (const auto& p : profiles) {
                for (double d : p.delta_sq) {
                    if (d > 0.0 && index_of.emplace(quantize(d), 0).second) {
                        dsq_values.push_back(d);
                    }
                }
            }
            std::sort(dsq_values.begin(), dsq_values.end());
            for (std::size_t i = 0; i < dsq_values.size(); ++i) {
                index_of[quantize(dsq_values[i])] = i;
            }
            constexpr int kReplicates = 10;
            const std::int64_t n_rep = std::max<std::int64_t>(
                opts.mc_samples / kReplicates, 500);
            std::vector<double> ber_rep(kReplicates);
            std::vector<double> f8(dsq_values.size()), f6(dsq_values.size());
            for (int r = 0; r < kReplicates; ++r) {
                RngStream rng(mix64(opts.mc_seed ^ (0x51ed2700ULL + r)));
                std::fill(f8.begin(), f8.end(), 0.0);
                std::fill(f6.begin(), f6.end(), 0.0);
                for (std::int64_t s = 0; s < n_rep; ++s) {
                    const double lam_sq = rng.exponential(stats.c_nn);
                    const double gamma =
                        conditional_sinr(lam_sq, phi_nn_sq, stats, sigma0_sq);
                    for (std::size_t i = 0; i < dsq_values.size(); ++i) {
                        f8[i] += std::exp(-gamma * dsq_values[i] / 8.0);
                        f6[i] += std::exp(-gamma * dsq_values[i] / 6.0);
                    }
                }
                const double inv_n = 1.0 / static_cast<double>(n_rep);
                for (double& v : f8) v *= inv_n;
                for (double& v : f6) v *= inv_n;
                acc = 0.0;
                comp = 0.0;
                for (const auto& p : profiles) {
                    double prod8 = 1.0, prod6 = 1.0;
                    for (double d : p.delta_sq) {
                        if (d <= 0.0) continue;
                        const std::size_t i = index_of.at(quantize(d));
                        prod8 *= f8[i];
                        prod6 *= f6[i];
                    }
                    add(p.ne_sum * (prod8 / 12.0 + prod6 / 4.0));
                }
                ber_rep[r] = acc / denom;
            }
            double mean = 0.0;
            for (double v : ber_rep) mean += v;
            mean /= kReplicates;
            double var = 0.0;
            for (double v : ber_rep) var += (v - mean) * (v - mean);
            var /= (kReplicates - 1);
            result.ber = mean;
            result.mc_std_error = std::sqrt(var / kReplicates);
            return result;
        }
    }
    result.ber = acc / denom;
    return result;
}

UnionBoundResult union_bound_ber(const ScmaSystem& sys, int n_sc, double eps,
                                 double sigma0_sq, const PowerDelayProfile* pdp,
                                 const UnionBoundOptions& opts) {
    return union_bound_ber(sys, group_pair_profiles(sys, opts.pair_cap), n_sc, eps,
                           sigma0_sq, pdp, opts);
}

}  // namespace scmaofdm
