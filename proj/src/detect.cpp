#include "scmaofdm/detect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace scmaofdm {

namespace {

void check_input(const DetectorInput& in, const ScmaSystem& sys) {
    const int k = sys.config().res;
    if (static_cast<int>(in.z.size()) != k || static_cast<int>(in.g.size()) != k) {
        throw InputError("detector: z and g must have K entries");
    }
    if (!(in.sigma_eff_sq > 0.0)) {
        throw InputError("detector: effective noise variance must be positive");
    }
}

}  // namespace

Detection ml_detect(const DetectorInput& in, const ScmaSystem& sys,
                    const std::vector<SuperimposedEntry>& entries) {
    check_input(in, sys);
    const int k_res = sys.config().res;
    double best = std::numeric_limits<double>::infinity();
    const SuperimposedEntry* best_entry = nullptr;
    for (const auto& e : entries) {
        double metric = 0.0;
        for (int k = 0; k < k_res; ++k) {
            metric += std::norm(in.z[k] - in.g[k] * e.w[k]);
        }
        if (metric < best) {  // strict: ties keep the earlier enumeration index
            best = metric;
            best_entry = &e;
        }
    }
    Detection d;
    d.indices = best_entry->indices;
    d.bits = best_entry->bits;
    return d;
}

Detection ml_detect(const DetectorInput& in, const ScmaSystem& sys, std::int64_t cap) {
    return ml_detect(in, sys, sys.enumerate_superimposed(cap));
}

Detection mpa_detect(const DetectorInput& in, const ScmaSystem& sys, int iterations,
                     std::vector<std::vector<std::vector<double>>>* marginal_trace) {
    check_input(in, sys);
    if (iterations < 1) throw InputError("mpa_detect: iterations must be >= 1");

    const ScmaConfig& cfg = sys.config();
    const FactorGraph& fg = sys.graph();
    const int m_size = cfg.cb_size;
    const int k_res = cfg.res;
    const int users = cfg.users;

    // Per-RN likelihood tables over joint hypotheses of the colliding users.
    // Exponents are shifted by the per-RE minimum metric before exp().
    std::vector<int> combos(k_res);
    std::vector<std::vector<double>> like(k_res);
    for (int k = 0; k < k_res; ++k) {
        const auto& ulist = fg.res_to_user[k];
        const int df = static_cast<int>(ulist.size());
        int count = 1;
        for (int i = 0; i < df; ++i) count *= m_size;
        combos[k] = count;
        like[k].resize(count);
        double min_metric = std::numeric_limits<double>::infinity();
        std::vector<double> metric(count);
        for (int c = 0; c < count; ++c) {
            cplx sum(0.0, 0.0);
            int rem = c;
            for (int i = 0; i < df; ++i) {
                const int m = rem % m_size;
                rem /= m_size;
                sum += sys.codeword(ulist[i], m)[k];
            }
            metric[c] = std::norm(in.z[k] - in.g[k] * sum);
            min_metric = std::min(min_metric, metric[c]);
        }
        for (int c = 0; c < count; ++c) {
            like[k][c] = std::exp(-(metric[c] - min_metric) / in.sigma_eff_sq);
        }
    }

    // Messages indexed [k][slot][m], slot = position of the user in
    // res_to_user[k]; and per-user slot positions for the reverse direction.
    const double uniform = 1.0 / m_size;
    std::vector<std::vector<std::vector<double>>> msg_ur(k_res), msg_ru(k_res);
    for (int k = 0; k < k_res; ++k) {
        const int df = static_cast<int>(fg.res_to_user[k].size());
        msg_ur[k].assign(df, std::vector<double>(m_size, uniform));
        msg_ru[k].assign(df, std::vector<double>(m_size, uniform));
    }
    // slot_of[j] lists (k, slot) pairs for user j.
    std::vector<std::vector<std::pair<int, int>>> slot_of(users);
    for (int k = 0; k < k_res; ++k) {
        for (std::size_t i = 0; i < fg.res_to_user[k].size(); ++i) {
            slot_of[fg.res_to_user[k][i]].push_back({k, static_cast<int>(i)});
        }
    }

    const auto normalize = [](std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        if (s > 0.0) {
            for (double& x : v) x /= s;
        } else {
            std::fill(v.begin(), v.end(), 1.0 / v.size());
        }
    };

    std::vector<std::vector<double>> marginals(users, std::vector<double>(m_size));
    const auto compute_marginals = [&]() {
        for (int j = 0; j < users; ++j) {
            std::fill(marginals[j].begin(), marginals[j].end(), 1.0);
            for (const auto& [k, slot] : slot_of[j]) {
                for (int m = 0; m < m_size; ++m) marginals[j][m] *= msg_ru[k][slot][m];
            }
            normalize(marginals[j]);
        }
    };

    for (int it = 0; it < iterations; ++it) {
        // RN -> UN
        for (int k = 0; k < k_res; ++k) {
            const int df = static_cast<int>(fg.res_to_user[k].size());
            for (int slot = 0; slot < df; ++slot) {
                auto& out = msg_ru[k][slot];
                std::fill(out.begin(), out.end(), 0.0);
                for (int c = 0; c < combos[k]; ++c) {
                    double prod = like[k][c];
                    int rem = c;
                    int own_m = 0;
                    for (int i = 0; i < df; ++i) {
                        const int m = rem % m_size;
                        rem /= m_size;
                        if (i == slot) {
                            own_m = m;
                        } else {
                            prod *= msg_ur[k][i][m];
                        }
                    }
                    out[own_m] += prod;
                }
                normalize(out);
            }
        }
        // UN -> RN
        for (int j = 0; j < users; ++j) {
            for (const auto& [k, slot] : slot_of[j]) {
                auto& out = msg_ur[k][slot];
                std::fill(out.begin(), out.end(), 1.0);
                for (const auto& [k2, slot2] : slot_of[j]) {
                    if (k2 == k) continue;
                    for (int m = 0; m < m_size; ++m) out[m] *= msg_ru[k2][slot2][m];
                }
                normalize(out);
            }
        }
        if (marginal_trace) {
            compute_marginals();
            marginal_trace->push_back(marginals);
        }
    }

    compute_marginals();

    const int nbits = cfg.bits_per_user();
    Detection d;
    d.indices.resize(users);
    d.bits.reserve(static_cast<std::size_t>(users) * nbits);
    d.llrs.reserve(static_cast<std::size_t>(users) * nbits);
    constexpr double kProbFloor = 1e-300;
    for (int j = 0; j < users; ++j) {
        int best = 0;
        for (int m = 1; m < m_size; ++m) {
            if (marginals[j][m] > marginals[j][best]) best = m;
        }
        d.indices[j] = best;
        const auto bits = ScmaSystem::index_to_bits(best, nbits);
        d.bits.insert(d.bits.end(), bits.begin(), bits.end());
        for (int t = 0; t < nbits; ++t) {
            double p0 = 0.0, p1 = 0.0;
            for (int m = 0; m < m_size; ++m) {
                if ((m >> (nbits - 1 - t)) & 1) {
                    p1 += marginals[j][m];
                } else {
                    p0 += marginals[j][m];
                }
            }
            d.llrs.push_back(std::log(std::max(p0, kProbFloor)) -
                             std::log(std::max(p1, kProbFloor)));
        }
    }
    return d;
}

Detection mpa_detect(const DetectorInput& in, const ScmaSystem& sys, int iterations) {
    return mpa_detect(in, sys, iterations, nullptr);
}

}  // namespace scmaofdm
