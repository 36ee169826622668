#include <cmath>
#include <sstream>

#include "doctest.h"
#include "scmaofdm/harness.hpp"
#include "scmaofdm/specfun.hpp"

using namespace scmaofdm;

namespace {

Scenario tiny_scenario() {
    Scenario sc;
    sc.channel = ChannelKind::awgn;
    sc.n_sc = 64;
    sc.n_cp = 24;
    sc.eps_list = {0.0, 0.02};
    sc.snr_db = {8.0};
    sc.detector = DetectorKind::mpa;
    sc.min_bit_errors = 1 << 30;
    sc.max_frames = 64;
    sc.master_seed = 5;
    sc.record_timing = false;
    return sc;
}

std::string sweep_csv(const Scenario& sc) {
    std::ostringstream out;
    run_sweep(sc, out);
    return out.str();
}

}  // namespace

TEST_CASE("scenario text round trip") {
    Scenario sc = tiny_scenario();
    sc.run_series = true;
    sc.waveform = WaveformKind::both;
    sc.cfo_blind = true;
    sc.mpa_iterations = 9;
    sc.pep_mc_samples = 1234;
    std::stringstream ss;
    sc.save(ss);
    const Scenario back = Scenario::parse(ss);
    CHECK(back.channel == sc.channel);
    CHECK(back.n_sc == sc.n_sc);
    CHECK(back.n_cp == sc.n_cp);
    CHECK(back.eps_list == sc.eps_list);
    CHECK(back.snr_db == sc.snr_db);
    CHECK(back.detector == sc.detector);
    CHECK(back.mpa_iterations == 9);
    CHECK(back.cfo_blind == sc.cfo_blind);
    CHECK(back.waveform == sc.waveform);
    CHECK(back.min_bit_errors == sc.min_bit_errors);
    CHECK(back.max_frames == sc.max_frames);
    CHECK(back.master_seed == sc.master_seed);
    CHECK(back.run_series == sc.run_series);
    CHECK(back.pep_mc_samples == 1234);
    CHECK(back.record_timing == sc.record_timing);
}

TEST_CASE("scenario parsing: comments, unknown keys, validation") {
    std::stringstream good(
        "# comment\n"
        "channel = awgn\n"
        "eps_list = 0, 0.01\n"
        "snr_db_list = 4, 8\n");
    const Scenario sc = Scenario::parse(good);
    CHECK(sc.channel == ChannelKind::awgn);
    CHECK(sc.eps_list == std::vector<double>{0.0, 0.01});

    std::stringstream bad_key("nonsense_key = 7\n");
    CHECK_THROWS_AS(Scenario::parse(bad_key), InputError);

    Scenario invalid = tiny_scenario();
    invalid.snr_db = {8.0, 4.0};  // not increasing
    CHECK_THROWS_AS(invalid.validate(), ConfigError);
    invalid = tiny_scenario();
    invalid.eps_list.clear();
    CHECK_THROWS_AS(invalid.validate(), ConfigError);
}

TEST_CASE("presets") {
    const Scenario f3 = Scenario::preset("fig3");
    CHECK(f3.channel == ChannelKind::awgn);
    CHECK(f3.run_awgn_analytic);
    CHECK(f3.detector == DetectorKind::ml);
    CHECK(f3.eps_list == std::vector<double>{0.0, 0.01, 0.02, 0.04});
    CHECK_FALSE(f3.record_timing);

    const Scenario f4 = Scenario::preset("fig4");
    CHECK(f4.channel == ChannelKind::rayleigh);
    CHECK(f4.run_series);
    CHECK(f4.detector == DetectorKind::mpa);

    const Scenario f5 = Scenario::preset("fig5");
    CHECK(f5.waveform == WaveformKind::both);
    CHECK(f5.snr_db.size() == 1);
    CHECK(f5.eps_list == std::vector<double>{0.0, 0.01, 0.02, 0.05, 0.1});

    CHECK_THROWS_AS(Scenario::preset("fig9"), InputError);
}

TEST_CASE("csv schema") {
    CHECK(csv_header() == "eps,snr_db,method,ber,errors,bits,stderr_or_flag,seconds");
    SweepRow row;
    row.eps = 0.02;
    row.snr_db = 12;
    row.method = "sim";
    row.ber = 1.25e-3;
    row.errors = 250;
    row.bits = 200000;
    row.stderr_or_flag = "7.9e-05";
    row.seconds = 0.0;
    CHECK(csv_row(row) == "0.02,12,sim,1.25000000e-03,250,200000,7.9e-05,0.000");
}

TEST_CASE("sweep output is deterministic and worker-independent") {
    Scenario sc = tiny_scenario();
    sc.workers = 1;
    const std::string csv1 = sweep_csv(sc);
    sc.workers = 4;
    const std::string csv4 = sweep_csv(sc);
    CHECK(csv1 == csv4);
    CHECK(csv1.rfind("eps,snr_db,method,", 0) == 0);

    // Row order and method labels.
    std::istringstream lines(csv1);
    std::string line;
    std::getline(lines, line);  // header
    std::getline(lines, line);
    CHECK(line.rfind("0,8,sim,", 0) == 0);
    std::getline(lines, line);
    CHECK(line.rfind("0.02,8,sim,", 0) == 0);
}

TEST_CASE("simulate_frame is a pure function of its seed tuple") {
    const Scenario sc = tiny_scenario();
    const SimContext ctx(sc);
    const double s0 = ctx.sigma0_for_snr_db(8.0);
    const auto a = ctx.simulate_frame(0.02, s0, 0, 0, 7);
    const auto b = ctx.simulate_frame(0.02, s0, 0, 0, 7);
    const auto c = ctx.simulate_frame(0.02, s0, 0, 0, 8);
    CHECK(a == b);
    CHECK(a.second == c.second);
    CHECK(a.second == 64 / 4 * 6 * 2);  // blocks * users * bits
}

TEST_CASE("noiseless frames are error-free") {
    Scenario sc = tiny_scenario();
    sc.detector = DetectorKind::ml;
    const SimContext ctx(sc);
    for (std::uint64_t f = 0; f < 8; ++f) {
        const auto [errors, bits] = ctx.simulate_frame(0.0, 1e-12, 0, 0, f);
        CHECK(errors == 0);
        CHECK(bits == 192);
    }
}

TEST_CASE("qpsk baseline matches the Gaussian-channel oracle") {
    // QPSK over AWGN at eps = 0: BER = Q(sqrt(SNR_lin)) with the unit-energy
    // constellation and total complex noise 1/SNR_lin.
    Scenario sc = tiny_scenario();
    sc.waveform = WaveformKind::qpsk_oma;
    sc.n_sc = 1024;
    sc.n_cp = 32;
    sc.eps_list = {0.0};
    sc.snr_db = {6.0};
    sc.max_frames = 200;
    const std::string csv = sweep_csv(sc);
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    std::getline(lines, line);
    CHECK(line.rfind("0,6,sim-qpsk,", 0) == 0);
    const double ber = std::stod(line.substr(line.find("sim-qpsk,") + 9));
    const double oracle = q_function(std::sqrt(std::pow(10.0, 0.6)));
    CHECK(ber == doctest::Approx(oracle).epsilon(0.05));
}

TEST_CASE("plot rendering is deterministic and structurally sane") {
    const std::string csv =
        "eps,snr_db,method,ber,errors,bits,stderr_or_flag,seconds\n"
        "0,4,sim,1.0e-01,100,1000,1e-3,0.000\n"
        "0,8,sim,1.0e-02,100,10000,1e-4,0.000\n"
        "0,4,awgn,2.0e-01,0,0,converged,0.000\n"
        "0,8,awgn,2.5e-02,0,0,converged,0.000\n";
    PlotSpec spec;
    spec.kind = PlotSpec::Kind::ber_vs_snr;
    spec.title = "test";
    const std::string svg1 = render_plot_svg(csv, spec);
    const std::string svg2 = render_plot_svg(csv, spec);
    CHECK(svg1 == svg2);
    CHECK(svg1.find("<svg") != std::string::npos);
    CHECK(svg1.find("polyline") != std::string::npos);
    CHECK(svg1.find("test") != std::string::npos);

    CHECK_THROWS_AS(render_plot_svg("not,a,csv\n1,2,3\n", spec), InputError);
}

TEST_CASE("run_sweep validates before running") {
    Scenario sc = tiny_scenario();
    sc.eps_list.clear();
    std::ostringstream out;
    CHECK_THROWS_AS(run_sweep(sc, out), ConfigError);
}
