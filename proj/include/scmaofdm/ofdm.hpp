#pragma once

#include "scmaofdm/common.hpp"

namespace scmaofdm {

enum class Allocation { interleaved, localized };

Allocation allocation_from_string(const std::string& s);
std::string to_string(Allocation a);

/// OFDM numerology. Subcarrier indices are 0-based everywhere; textbook
/// 1-based subcarrier n corresponds to internal index n-1.
struct OfdmConfig {
    int n_sc = 0;     // N
    int n_cp = 0;     // CP length in samples
    int block_len = 0;  // K, SCMA block length
    Allocation scheme = Allocation::interleaved;

    int blocks() const { return n_sc / block_len; }  // Q
    void validate() const;  // K | N, n_cp >= 0
};

/// Maps Q blocks of K symbols onto N subcarriers.
/// interleaved: s[Q*k + q] = blocks[q][k]; localized: s = [b_0; b_1; ...].
cvec allocate(const std::vector<cvec>& blocks, const OfdmConfig& cfg);

/// Exact inverse of allocate().
std::vector<cvec> deallocate(const cvec& s, const OfdmConfig& cfg);

/// Unitary IFFT (1/sqrt(N) scaling) plus cyclic prefix.
cvec ofdm_modulate(const cvec& s, const OfdmConfig& cfg);

/// CP removal plus unitary FFT.
cvec ofdm_demodulate(const cvec& y, const OfdmConfig& cfg);

/// Unitary transforms on bare length-N vectors (no CP handling).
cvec fft_unitary(const cvec& x);
cvec ifft_unitary(const cvec& x);

/// Multiplies payload sample n by exp(j*2*pi*eps*(n + phase_offset)/N).
/// By default the CFO phase starts at 0 on the first payload sample; pass
/// phase_offset = n_cp for a free-running oscillator that also ran over the CP.
cvec apply_cfo(const cvec& payload, double eps, int phase_offset = 0);

/// ICI coefficient phi_{n,m} of the matrix Phi = F D F^H, 0-based indices.
/// Depends on (m - n) mod N only.
cplx ici_coefficient(int n, int m, double eps, int n_sc);

/// phi as a function of d = (m - n) mod N.
cplx ici_coefficient_diff(int diff, double eps, int n_sc);

/// Diagonal magnitude |phi_{n,n}| = sin(pi*eps) / (N*sin(pi*eps/N)).
double ici_diagonal_gain(double eps, int n_sc);

}  // namespace scmaofdm
