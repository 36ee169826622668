#include "scmaofdm/ofdm.hpp"

#include <cmath>

#include <unsupported/Eigen/FFT>

namespace scmaofdm {

Allocation allocation_from_string(const std::string& s) {
    if (s == "interleaved") return Allocation::interleaved;
    if (s == "localized") return Allocation::localized;
    throw InputError("unknown allocation scheme: " + s);
}

std::string to_string(Allocation a) {
    return a == Allocation::interleaved ? "interleaved" : "localized";
}

void OfdmConfig::validate() const {
    if (n_sc <= 0 || block_len <= 0) {
        throw ConfigError("ofdm config: N and K must be positive");
    }
    if (n_sc % block_len != 0) {
        throw ConfigError("ofdm config: K must divide N");
    }
    if (n_cp < 0) {
        throw ConfigError("ofdm config: CP length must be non-negative");
    }
}

cvec allocate(const std::vector<cvec>& blocks, const OfdmConfig& cfg) {
    const int q_count = cfg.blocks();
    if (static_cast<int>(blocks.size()) != q_count) {
        throw InputError("allocate: expected Q blocks");
    }
    cvec s(cfg.n_sc);
    for (int q = 0; q < q_count; ++q) {
        if (static_cast<int>(blocks[q].size()) != cfg.block_len) {
            throw InputError("allocate: block length mismatch");
        }
        for (int k = 0; k < cfg.block_len; ++k) {
            // interleaved: paper's n = Q(k-1)+q (1-based) -> Q*k + q (0-based)
            const int n = cfg.scheme == Allocation::interleaved ? q_count * k + q
                                                                : q * cfg.block_len + k;
            s[n] = blocks[q][k];
        }
    }
    return s;
}

std::vector<cvec> deallocate(const cvec& s, const OfdmConfig& cfg) {
    if (static_cast<int>(s.size()) != cfg.n_sc) {
        throw InputError("deallocate: expected an N-length vector");
    }
    const int q_count = cfg.blocks();
    std::vector<cvec> blocks(q_count, cvec(cfg.block_len));
    for (int q = 0; q < q_count; ++q) {
        for (int k = 0; k < cfg.block_len; ++k) {
            const int n = cfg.scheme == Allocation::interleaved ? q_count * k + q
                                                                : q * cfg.block_len + k;
            blocks[q][k] = s[n];
        }
    }
    return blocks;
}

namespace {

Eigen::FFT<double>& fft_engine() {
    thread_local Eigen::FFT<double> fft;
    return fft;
}

}  // namespace

cvec fft_unitary(const cvec& x) {
    cvec out;
    fft_engine().fwd(out, x);
    const double s = 1.0 / std::sqrt(static_cast<double>(x.size()));
    for (auto& v : out) v *= s;
    return out;
}

cvec ifft_unitary(const cvec& x) {
    cvec out;
    fft_engine().inv(out, x);  // Eigen's inv carries 1/N
    const double s = std::sqrt(static_cast<double>(x.size()));
    for (auto& v : out) v *= s;
    return out;
}

cvec ofdm_modulate(const cvec& s, const OfdmConfig& cfg) {
    if (static_cast<int>(s.size()) != cfg.n_sc) {
        throw InputError("ofdm_modulate: expected N frequency symbols");
    }
    const cvec payload = ifft_unitary(s);
    cvec out;
    out.reserve(cfg.n_sc + cfg.n_cp);
    out.insert(out.end(), payload.end() - cfg.n_cp, payload.end());
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

cvec ofdm_demodulate(const cvec& y, const OfdmConfig& cfg) {
    if (static_cast<int>(y.size()) != cfg.n_sc + cfg.n_cp) {
        throw InputError("ofdm_demodulate: expected N + N_cp samples");
    }
    const cvec payload(y.begin() + cfg.n_cp, y.end());
    return fft_unitary(payload);
}

cvec apply_cfo(const cvec& payload, double eps, int phase_offset) {
    const int n = static_cast<int>(payload.size());
    cvec out(n);
    const double base = 2.0 * M_PI * eps / static_cast<double>(n);
    for (int t = 0; t < n; ++t) {
        out[t] = payload[t] * std::polar(1.0, base * (t + phase_offset));
    }
    return out;
}

cplx ici_coefficient_diff(int diff, double eps, int n_sc) {
    const double n = static_cast<double>(n_sc);
    const double t = static_cast<double>(diff) + eps;
    if (t == 0.0) return cplx(1.0, 0.0);
    const double mag = std::sin(M_PI * t) / (n * std::sin(M_PI * t / n));
    return std::polar(mag, M_PI * (n - 1.0) / n * t);
}

cplx ici_coefficient(int n, int m, double eps, int n_sc) {
    if (n < 0 || n >= n_sc || m < 0 || m >= n_sc) {
        throw InputError("ici_coefficient: subcarrier index out of range");
    }
    const int diff = ((m - n) % n_sc + n_sc) % n_sc;
    return ici_coefficient_diff(diff, eps, n_sc);
}

double ici_diagonal_gain(double eps, int n_sc) {
    if (eps == 0.0) return 1.0;
    const double n = static_cast<double>(n_sc);
    return std::sin(M_PI * eps) / (n * std::sin(M_PI * eps / n));
}

}  // namespace scmaofdm
