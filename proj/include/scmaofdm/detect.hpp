#pragma once

#include <cstdint>

#include "scmaofdm/common.hpp"
#include "scmaofdm/scma.hpp"

namespace scmaofdm {

/// One SCMA block seen by a detector: K received values, K effective channel
/// gains g_k = phi_nn * lambda_n (or lambda_n in CFO-blind mode), and the
/// effective noise-plus-interference variance used in the likelihoods.
struct DetectorInput {
    cvec z;
    cvec g;
    double sigma_eff_sq = 1.0;
};

struct Detection {
    std::vector<int> indices;          // per-user codeword index
    std::vector<std::uint8_t> bits;    // concatenated per-user bits
    std::vector<double> llrs;          // per-bit log(P(b=0)/P(b=1)); MPA only
};

/// Brute-force joint ML over all M^J user tuples; ties break toward the
/// smallest enumeration index. Throws InputError when M^J exceeds `cap`.
Detection ml_detect(const DetectorInput& in, const ScmaSystem& sys,
                    std::int64_t cap = 1 << 20);

/// Same, over a precomputed superimposed-codeword enumeration (callers that
/// detect many blocks should enumerate once and reuse it).
Detection ml_detect(const DetectorInput& in, const ScmaSystem& sys,
                    const std::vector<SuperimposedEntry>& entries);

/// Sum-product message passing over the factor graph. Resource-node updates
/// marginalize exp(-|z_k - g_k sum x|^2 / sigma_eff_sq) over colliding users;
/// likelihood exponents are shifted by their per-RE minimum and every message
/// is normalized, which keeps high-SNR blocks finite.
Detection mpa_detect(const DetectorInput& in, const ScmaSystem& sys, int iterations);

/// Variant recording the per-user marginals after each iteration
/// (trace[iter][user][m]); used by property tests.
Detection mpa_detect(const DetectorInput& in, const ScmaSystem& sys, int iterations,
                     std::vector<std::vector<std::vector<double>>>* marginal_trace);

}  // namespace scmaofdm
