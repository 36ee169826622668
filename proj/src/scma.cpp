#include "scmaofdm/scma.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace scmaofdm {

namespace {

bool is_power_of_two(int x) { return x > 0 && (x & (x - 1)) == 0; }

constexpr double kZeroTol = 1e-15;

}  // namespace

int ScmaConfig::bits_per_user() const {
    int b = 0;
    while ((1 << b) < cb_size) ++b;
    return b;
}

int ScmaConfig::collisions_per_re() const { return users * nonzeros / res; }

void ScmaConfig::validate() const {
    if (users <= 0 || res <= 0 || nonzeros <= 0 || cb_size <= 0) {
        throw ConfigError("scma config: all dimensions must be positive");
    }
    if (!is_power_of_two(cb_size)) {
        throw ConfigError("scma config: M must be a power of two");
    }
    if (nonzeros >= res) {
        throw ConfigError("scma config: V must be smaller than K");
    }
    if (users < res) {
        throw ConfigError("scma config: J/K must be at least one");
    }
    if ((users * nonzeros) % res != 0) {
        throw ConfigError("scma config: J*V/K must be an integer");
    }
    if (static_cast<int>(indicator.size()) != res) {
        throw ConfigError("scma config: indicator matrix must have K rows");
    }
    const int df = collisions_per_re();
    std::set<std::vector<int>> supports;
    for (int j = 0; j < users; ++j) {
        std::vector<int> support;
        for (int k = 0; k < res; ++k) {
            if (static_cast<int>(indicator[k].size()) != users) {
                throw ConfigError("scma config: indicator matrix must have J columns");
            }
            if (indicator[k][j]) support.push_back(k);
        }
        if (static_cast<int>(support.size()) != nonzeros) {
            throw ConfigError("scma config: every user must occupy exactly V REs");
        }
        if (!supports.insert(support).second) {
            throw ConfigError("scma config: two users share an identical RE support");
        }
    }
    for (int k = 0; k < res; ++k) {
        int weight = 0;
        for (int j = 0; j < users; ++j) weight += indicator[k][j] ? 1 : 0;
        if (weight != df) {
            throw ConfigError("scma config: every RE must carry exactly J*V/K users");
        }
    }
}

double Codebook::average_energy() const {
    double e = 0.0;
    for (const auto& col : columns) {
        for (const auto& v : col) e += std::norm(v);
    }
    return e / static_cast<double>(columns.size());
}

FactorGraph FactorGraph::from_indicator(const ScmaConfig& cfg) {
    FactorGraph g;
    g.user_to_res.resize(cfg.users);
    g.res_to_user.resize(cfg.res);
    for (int k = 0; k < cfg.res; ++k) {
        for (int j = 0; j < cfg.users; ++j) {
            if (cfg.indicator[k][j]) {
                g.user_to_res[j].push_back(k);
                g.res_to_user[k].push_back(j);
            }
        }
    }
    return g;
}

ScmaSystem::ScmaSystem(ScmaConfig cfg, std::vector<Codebook> codebooks)
    : cfg_(std::move(cfg)), codebooks_(std::move(codebooks)) {
    if (static_cast<int>(codebooks_.size()) != cfg_.users) {
        throw ConfigError("scma system: need one codebook per user");
    }
    // Infer the indicator matrix from zero rows when absent, otherwise
    // cross-check it.
    std::vector<std::vector<std::uint8_t>> inferred(
        cfg_.res, std::vector<std::uint8_t>(cfg_.users, 0));
    for (int j = 0; j < cfg_.users; ++j) {
        const Codebook& cb = codebooks_[j];
        if (cb.size() != cfg_.cb_size || cb.dim() != cfg_.res) {
            throw ConfigError("scma system: codebook dimensions disagree with config");
        }
        for (int k = 0; k < cfg_.res; ++k) {
            bool any = false;
            bool all = true;
            for (int m = 0; m < cfg_.cb_size; ++m) {
                const bool nz = std::abs(cb.columns[m][k]) > kZeroTol;
                any = any || nz;
                all = all && nz;
            }
            if (any != all) {
                throw ConfigError("scma system: codeword supports differ within one codebook");
            }
            inferred[k][j] = any ? 1 : 0;
        }
    }
    if (cfg_.indicator.empty()) {
        cfg_.indicator = inferred;
    } else if (cfg_.indicator != inferred) {
        throw ConfigError("scma system: explicit indicator matrix contradicts codebook supports");
    }
    cfg_.validate();

    // Normalize each codebook to unit average codeword energy.
    scales_.resize(cfg_.users, 1.0);
    for (int j = 0; j < cfg_.users; ++j) {
        const double e = codebooks_[j].average_energy();
        if (!(e > 0.0)) throw ConfigError("scma system: zero-energy codebook");
        const double s = 1.0 / std::sqrt(e);
        scales_[j] = s;
        for (auto& col : codebooks_[j].columns) {
            for (auto& v : col) v *= s;
        }
    }
    graph_ = FactorGraph::from_indicator(cfg_);
}

int ScmaSystem::bits_to_index(const std::vector<std::uint8_t>& bits) {
    int idx = 0;
    for (std::uint8_t b : bits) {
        if (b > 1) throw InputError("bits must be 0 or 1");
        idx = (idx << 1) | b;
    }
    return idx;
}

std::vector<std::uint8_t> ScmaSystem::index_to_bits(int index, int nbits) {
    std::vector<std::uint8_t> bits(nbits);
    for (int t = 0; t < nbits; ++t) {
        bits[t] = static_cast<std::uint8_t>((index >> (nbits - 1 - t)) & 1);
    }
    return bits;
}

const cvec& ScmaSystem::map_bits(const std::vector<std::uint8_t>& bits, int user) const {
    if (user < 0 || user >= cfg_.users) {
        throw InputError("map_bits: user index out of range");
    }
    if (static_cast<int>(bits.size()) != cfg_.bits_per_user()) {
        throw InputError("map_bits: expected log2(M) bits");
    }
    return codebooks_[user].columns[bits_to_index(bits)];
}

cvec ScmaSystem::superimpose(const std::vector<cvec>& codewords) const {
    if (static_cast<int>(codewords.size()) != cfg_.users) {
        throw InputError("superimpose: need one codeword per user");
    }
    cvec w(cfg_.res, cplx(0.0, 0.0));
    for (const auto& x : codewords) {
        if (static_cast<int>(x.size()) != cfg_.res) {
            throw InputError("superimpose: codeword length mismatch");
        }
        for (int k = 0; k < cfg_.res; ++k) w[k] += x[k];
    }
    return w;
}

std::int64_t ScmaSystem::combination_count() const {
    std::int64_t n = 1;
    for (int j = 0; j < cfg_.users; ++j) n *= cfg_.cb_size;
    return n;
}

std::vector<SuperimposedEntry> ScmaSystem::enumerate_superimposed(std::int64_t cap) const {
    const std::int64_t count = combination_count();
    if (count > cap) {
        throw InputError("enumerate_superimposed: M^J exceeds the configured cap");
    }
    const int nbits = cfg_.bits_per_user();
    std::vector<SuperimposedEntry> out;
    out.reserve(static_cast<std::size_t>(count));
    std::vector<int> idx(cfg_.users, 0);
    for (std::int64_t t = 0; t < count; ++t) {
        SuperimposedEntry e;
        e.indices = idx;
        e.w.assign(cfg_.res, cplx(0.0, 0.0));
        e.bits.reserve(static_cast<std::size_t>(cfg_.users) * nbits);
        for (int j = 0; j < cfg_.users; ++j) {
            const cvec& x = codebooks_[j].columns[idx[j]];
            for (int k = 0; k < cfg_.res; ++k) e.w[k] += x[k];
            const auto bits = index_to_bits(idx[j], nbits);
            e.bits.insert(e.bits.end(), bits.begin(), bits.end());
        }
        out.push_back(std::move(e));
        // odometer, user 0 fastest
        for (int j = 0; j < cfg_.users; ++j) {
            if (++idx[j] < cfg_.cb_size) break;
            idx[j] = 0;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Default codebook: the widely circulated 4-point, 4-RE, 6-user SCMA codebook
// (rescaled at construction to unit average codeword energy).

namespace {

struct Entry {
    double re, im;
};

// cb_raw[user][k][m]
const Entry kDefaultCodebook[6][4][4] = {
    {{{0, 0}, {0, 0}, {0, 0}, {0, 0}},
     {{-0.1815, -0.1318}, {-0.6351, -0.4615}, {0.6351, 0.4615}, {0.1815, 0.1318}},
     {{0, 0}, {0, 0}, {0, 0}, {0, 0}},
     {{0.7851, 0}, {-0.2243, 0}, {0.2243, 0}, {-0.7851, 0}}},
    {{{0.7851, 0}, {-0.2243, 0}, {0.2243, 0}, {-0.7851, 0}},
     {{0, 0}, {0, 0}, {0, 0}, {0, 0}},
     {{-0.1815, -0.1318}, {-0.6351, -0.4615}, {0.6351, 0.4615}, {0.1815, 0.1318}},
     {{0, 0}, {0, 0}, {0, 0}, {0, 0}}},
    {{{-0.6351, 0.4615}, {0.1815, -0.1318}, {-0.1815, 0.1318}, {0.6351, -0.4615}},
     {{0.1392, -0.1759}, {0.4873, -0.6156}, {-0.4873, 0.6156}, {-0.1392, 0.1759}},
     {{0, 0}, {0, 0}, {0, 0}, {0, 0}},
     {{0, 0}, {0, 0}, {0, 0}, {0, 0}}},
    {{{0, 0}, {0, 0}, {0, 0}, {0, 0}},
     {{0, 0}, {0, 0}, {0, 0}, {0, 0}},
     {{0.7851, 0}, {-0.2243, 0}, {0.2243, 0}, {-0.7851, 0}},
     {{-0.0055, -0.2242}, {-0.0193, -0.7848}, {0.0193, 0.7848}, {0.0055, 0.2242}}},
    {{{-0.0055, -0.2242}, {-0.0193, -0.7848}, {0.0193, 0.7848}, {0.0055, 0.2242}},
     {{0, 0}, {0, 0}, {0, 0}, {0, 0}},
     {{0, 0}, {0, 0}, {0, 0}, {0, 0}},
     {{-0.6351, 0.4615}, {0.1815, -0.1318}, {-0.1815, 0.1318}, {0.6351, -0.4615}}},
    {{{0, 0}, {0, 0}, {0, 0}, {0, 0}},
     {{0.7851, 0}, {-0.2243, 0}, {0.2243, 0}, {-0.7851, 0}},
     {{0.1392, -0.1759}, {0.4873, -0.6156}, {-0.4873, 0.6156}, {-0.1392, 0.1759}},
     {{0, 0}, {0, 0}, {0, 0}, {0, 0}}}};

}  // namespace

ScmaSystem ScmaSystem::default_system() {
    ScmaConfig cfg;
    cfg.users = 6;
    cfg.res = 4;
    cfg.nonzeros = 2;
    cfg.cb_size = 4;
    std::vector<Codebook> cbs(6);
    for (int j = 0; j < 6; ++j) {
        cbs[j].columns.assign(4, cvec(4));
        for (int m = 0; m < 4; ++m) {
            for (int k = 0; k < 4; ++k) {
                const Entry& e = kDefaultCodebook[j][k][m];
                cbs[j].columns[m][k] = cplx(e.re, e.im);
            }
        }
    }
    return ScmaSystem(std::move(cfg), std::move(cbs));
}

// ---------------------------------------------------------------------------
// Text format: header "J K V M"; per user, K lines of M "re,im" pairs;
// optional "F" block of K lines with J binary entries. '#' starts a comment.

namespace {

std::string next_content_line(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream probe(line);
        std::string token;
        if (probe >> token) return line;
    }
    return {};
}

}  // namespace

ScmaSystem ScmaSystem::load(std::istream& in) {
    ScmaConfig cfg;
    {
        std::istringstream header(next_content_line(in));
        if (!(header >> cfg.users >> cfg.res >> cfg.nonzeros >> cfg.cb_size)) {
            throw InputError("codebook file: expected header 'J K V M'");
        }
    }
    std::vector<Codebook> cbs(cfg.users);
    for (int j = 0; j < cfg.users; ++j) {
        cbs[j].columns.assign(cfg.cb_size, cvec(cfg.res));
        for (int k = 0; k < cfg.res; ++k) {
            std::istringstream row(next_content_line(in));
            for (int m = 0; m < cfg.cb_size; ++m) {
                std::string pair;
                if (!(row >> pair)) {
                    throw InputError("codebook file: truncated codebook row");
                }
                const auto comma = pair.find(',');
                if (comma == std::string::npos) {
                    throw InputError("codebook file: entries must be 're,im' pairs");
                }
                try {
                    const double re = std::stod(pair.substr(0, comma));
                    const double im = std::stod(pair.substr(comma + 1));
                    cbs[j].columns[m][k] = cplx(re, im);
                } catch (const std::exception&) {
                    throw InputError("codebook file: malformed complex entry '" + pair + "'");
                }
            }
        }
    }
    // Optional explicit indicator block.
    std::string tail = next_content_line(in);
    if (!tail.empty()) {
        std::istringstream marker(tail);
        std::string token;
        marker >> token;
        if (token != "F") throw InputError("codebook file: unexpected trailing content");
        cfg.indicator.assign(cfg.res, std::vector<std::uint8_t>(cfg.users, 0));
        for (int k = 0; k < cfg.res; ++k) {
            std::istringstream row(next_content_line(in));
            for (int j = 0; j < cfg.users; ++j) {
                int v = 0;
                if (!(row >> v) || (v != 0 && v != 1)) {
                    throw InputError("codebook file: F block entries must be 0 or 1");
                }
                cfg.indicator[k][j] = static_cast<std::uint8_t>(v);
            }
        }
    }
    return ScmaSystem(std::move(cfg), std::move(cbs));
}

ScmaSystem ScmaSystem::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open codebook file: " + path);
    return load(in);
}

void ScmaSystem::save(std::ostream& out) const {
    out << cfg_.users << " " << cfg_.res << " " << cfg_.nonzeros << " " << cfg_.cb_size
        << "\n";
    char buf[64];
    for (int j = 0; j < cfg_.users; ++j) {
        out << "# user " << (j + 1) << "\n";
        for (int k = 0; k < cfg_.res; ++k) {
            for (int m = 0; m < cfg_.cb_size; ++m) {
                const cplx v = codebooks_[j].columns[m][k];
                std::snprintf(buf, sizeof(buf), "%.17g,%.17g", v.real(), v.imag());
                out << buf << (m + 1 == cfg_.cb_size ? "" : " ");
            }
            out << "\n";
        }
    }
    out << "F\n";
    for (int k = 0; k < cfg_.res; ++k) {
        for (int j = 0; j < cfg_.users; ++j) {
            out << int(cfg_.indicator[k][j]) << (j + 1 == cfg_.users ? "" : " ");
        }
        out << "\n";
    }
}

}  // namespace scmaofdm
