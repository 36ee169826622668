#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>

#include "scmaofdm/ber.hpp"
#include "scmaofdm/channel.hpp"
#include "scmaofdm/detect.hpp"
#include "scmaofdm/ofdm.hpp"
#include "scmaofdm/scma.hpp"

namespace scmaofdm {

enum class ChannelKind { awgn, rayleigh };
enum class DetectorKind { mpa, ml };
enum class WaveformKind { scma, qpsk_oma, both };

/// Everything one sweep needs; parsed from a flat key = value scenario file.
struct Scenario {
    ChannelKind channel = ChannelKind::rayleigh;
    PowerDelayProfile pdp = PowerDelayProfile::default_profile();
    int n_sc = 1024;
    int n_cp = 32;
    Allocation scheme = Allocation::interleaved;
    WaveformKind waveform = WaveformKind::scma;
    std::string codebook_file;  // empty -> built-in default codebook

    std::vector<double> eps_list;
    std::vector<double> snr_db;  // strictly increasing

    DetectorKind detector = DetectorKind::mpa;
    int mpa_iterations = 6;
    bool genie_ici_variance = true;  // add analytic ICI power to sigma_eff^2
    bool cfo_blind = false;          // detector gains lambda_n instead of phi_nn*lambda_n

    std::int64_t min_bit_errors = 200;
    std::int64_t max_frames = 100000;
    std::uint64_t master_seed = 1;
    int workers = 0;  // 0 -> SCMAOFDM_WORKERS env var, else hardware default

    bool run_sim = true;
    bool run_series = false;
    bool run_mc = false;
    bool run_awgn_analytic = false;

    std::int64_t pep_mc_samples = 20000;
    SeriesOptions series;
    bool record_timing = true;  // false pins the seconds column to 0 for byte-stable CSVs

    void validate() const;

    static Scenario parse(std::istream& in);
    static Scenario parse_file(const std::string& path);
    void save(std::ostream& out) const;

    /// Built-in presets reproducing the reference experiment setups.
    /// Names: fig3 (Gaussian channel BER vs SNR), fig4 (Rayleigh BER vs SNR),
    /// fig5 (BER vs CFO at fixed SNR, SCMA and QPSK-OMA).
    static Scenario preset(const std::string& name);
};

struct SweepRow {
    double eps = 0.0;
    double snr_db = 0.0;
    std::string method;  // sim | series | mc | awgn | sim-qpsk
    double ber = 0.0;
    std::int64_t errors = 0;
    std::int64_t bits = 0;
    std::string stderr_or_flag;
    double seconds = 0.0;
};

std::string csv_header();
std::string csv_row(const SweepRow& row);

/// Pre-built per-scenario state shared by every frame (read-only).
class SimContext {
  public:
    explicit SimContext(const Scenario& sc);

    const Scenario& scenario() const { return sc_; }
    const ScmaSystem& system() const { return *sys_; }
    double signal_power() const { return signal_power_; }
    double sigma0_for_snr_db(double snr_db) const;

    /// Full transmit/receive chain for one OFDM symbol; returns bit errors
    /// and bits carried. Deterministic in (master seed, eps index, snr index,
    /// frame index).
    std::pair<std::int64_t, std::int64_t> simulate_frame(
        double eps, double sigma0_sq, std::uint64_t eps_idx, std::uint64_t snr_idx,
        std::uint64_t frame_idx, WaveformKind waveform = WaveformKind::scma) const;

  private:
    Scenario sc_;
    std::shared_ptr<const ScmaSystem> sys_;
    std::shared_ptr<const std::vector<SuperimposedEntry>> ml_entries_;
    OfdmConfig ofdm_;
    double signal_power_ = 1.0;
};

/// Runs all requested methods over the (eps, SNR) grid, appending CSV rows to
/// `out` as points complete. Frames are scheduled in deterministic batches so
/// the output is independent of the worker count. Returns the rows.
std::vector<SweepRow> run_sweep(const Scenario& sc, std::ostream& out);

/// Writes the CSV to a file (header + rows).
std::vector<SweepRow> run_sweep_to_file(const Scenario& sc, const std::string& path);

struct PlotSpec {
    enum class Kind { ber_vs_snr, ber_vs_eps } kind = Kind::ber_vs_snr;
    std::optional<double> fixed_snr_db;  // ber_vs_eps: select this SNR row set
    std::string title;
};

/// Renders a deterministic SVG (log-scale BER axis) from sweep CSV rows.
/// Throws InputError when required columns are missing.
std::string render_plot_svg(const std::string& csv_text, const PlotSpec& spec);

}  // namespace scmaofdm
