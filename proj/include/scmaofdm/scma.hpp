#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "scmaofdm/common.hpp"

namespace scmaofdm {

/// Sparse-code configuration: J users share K resource elements, each user
/// occupies V of them, with M codewords per codebook. indicator[k][j] marks
/// occupancy of RE k by user j.
struct ScmaConfig {
    int users = 0;      // J
    int res = 0;        // K
    int nonzeros = 0;   // V
    int cb_size = 0;    // M
    std::vector<std::vector<std::uint8_t>> indicator;  // K x J

    int bits_per_user() const;  // log2(M)
    int collisions_per_re() const;  // d_f = J*V/K

    /// Validates column weights, row weights, distinct supports, power-of-two
    /// M and J/K >= 1. Throws ConfigError on violation.
    void validate() const;
};

/// One user's codebook: a K x M complex matrix, column m = codeword m.
/// Stored column-major (entries[m][k]).
struct Codebook {
    std::vector<cvec> columns;  // M columns of length K

    int size() const { return static_cast<int>(columns.size()); }
    int dim() const { return columns.empty() ? 0 : static_cast<int>(columns[0].size()); }
    double average_energy() const;
};

/// Factor-graph adjacency derived from the indicator matrix.
struct FactorGraph {
    std::vector<std::vector<int>> user_to_res;  // J lists (supports of F columns)
    std::vector<std::vector<int>> res_to_user;  // K lists (supports of F rows)

    static FactorGraph from_indicator(const ScmaConfig& cfg);
};

/// One entry of the full superimposed-codeword enumeration.
struct SuperimposedEntry {
    std::vector<int> indices;        // per-user codeword index, user 0 fastest
    cvec w;                          // superimposed K-vector
    std::vector<std::uint8_t> bits;  // concatenated per-user bit labels
};

/// Immutable SCMA system: config + per-user codebooks + factor graph.
/// Codebooks are rescaled at construction to unit average codeword energy.
class ScmaSystem {
  public:
    ScmaSystem(ScmaConfig cfg, std::vector<Codebook> codebooks);

    /// The default J=6/K=4/V=2/M=4 system with a published-style codebook.
    static ScmaSystem default_system();

    /// Parses the text codebook format: header "J K V M", then per user
    /// K lines of M "re,im" pairs; optional explicit "F" block after the
    /// codebooks, cross-checked against the inferred indicator matrix.
    static ScmaSystem load(std::istream& in);
    static ScmaSystem load_file(const std::string& path);

    /// Serializes in the same text format (used for round-trip tests).
    void save(std::ostream& out) const;

    const ScmaConfig& config() const { return cfg_; }
    const FactorGraph& graph() const { return graph_; }
    const Codebook& codebook(int user) const { return codebooks_[user]; }
    double normalization_scale(int user) const { return scales_[user]; }

    /// Natural-binary MSB-first mapping of log2(M) bits to a codeword.
    const cvec& map_bits(const std::vector<std::uint8_t>& bits, int user) const;
    const cvec& codeword(int user, int index) const { return codebooks_[user].columns[index]; }

    static int bits_to_index(const std::vector<std::uint8_t>& bits);
    static std::vector<std::uint8_t> index_to_bits(int index, int nbits);

    /// Elementwise sum of one codeword per user.
    cvec superimpose(const std::vector<cvec>& codewords) const;

    /// All M^J combinations, odometer order with user 0 fastest.
    /// Throws InputError if M^J exceeds `cap`.
    std::vector<SuperimposedEntry> enumerate_superimposed(std::int64_t cap = 1 << 20) const;

    std::int64_t combination_count() const;

  private:
    ScmaConfig cfg_;
    std::vector<Codebook> codebooks_;
    std::vector<double> scales_;
    FactorGraph graph_;
};

}  // namespace scmaofdm
