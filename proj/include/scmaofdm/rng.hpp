#pragma once

#include <cstdint>
#include <random>

#include "scmaofdm/common.hpp"

namespace scmaofdm {

/// splitmix64 finalizer; used to hash stream keys into seeds.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Counter-keyed random stream. Each (master seed, eps index, snr index,
/// frame index) tuple owns an independent stream, so sweep results do not
/// depend on how frames are distributed over workers.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : gen_(seed) {}

    static RngStream for_frame(std::uint64_t master, std::uint64_t eps_idx,
                               std::uint64_t snr_idx, std::uint64_t frame_idx) {
        std::uint64_t s = mix64(master);
        s = mix64(s ^ mix64(eps_idx + 1));
        s = mix64(s ^ mix64(snr_idx + 1));
        s = mix64(s ^ mix64(frame_idx + 1));
        return RngStream(s);
    }

    std::mt19937_64& engine() { return gen_; }

    double uniform() { return unif_(gen_); }

    /// Uniform integer in [0, n).
    int uniform_int(int n) {
        return static_cast<int>(gen_() % static_cast<std::uint64_t>(n));
    }

    double gaussian() { return norm_(gen_); }

    /// Circularly-symmetric complex Gaussian with E{|x|^2} = var.
    cplx cgaussian(double var) {
        const double s = std::sqrt(var / 2.0);
        return {s * gaussian(), s * gaussian()};
    }

    /// Exponential with the given mean (used for |lambda|^2 draws).
    double exponential(double mean) {
        double u = unif_(gen_);
        while (u <= 0.0) u = unif_(gen_);
        return -mean * std::log(u);
    }

  private:
    std::mt19937_64 gen_;
    std::normal_distribution<double> norm_{0.0, 1.0};
    std::uniform_real_distribution<double> unif_{0.0, 1.0};
};

}  // namespace scmaofdm
