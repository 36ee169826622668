// Command-line front end: scenario presets, Monte Carlo sweeps, analytic
// BER evaluation, and SVG plots over the sweep CSV format.
//
// Exit codes: 0 success, 1 runtime failure, 2 bad usage/input.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "scmaofdm/harness.hpp"

namespace so = scmaofdm;

namespace {

so::Scenario load_scenario(const std::string& scenario_file, const std::string& preset) {
    if (!preset.empty()) {
        so::Scenario sc = so::Scenario::preset(preset);
        if (!scenario_file.empty()) {
            throw so::InputError("give either --scenario or --preset, not both");
        }
        return sc;
    }
    if (scenario_file.empty()) {
        throw so::InputError("one of --scenario or --preset is required");
    }
    return so::Scenario::parse_file(scenario_file);
}

void write_or_stdout(const std::string& out_path, const std::string& text) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw so::InputError("cannot open output file: " + out_path);
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SCMA-OFDM link simulator and analytic BER evaluator"};
    app.require_subcommand(1);

    std::string scenario_file, preset_name, out_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int workers = -1;

    auto add_common = [&](CLI::App* cmd, bool needs_scenario) {
        if (needs_scenario) {
            cmd->add_option("--scenario", scenario_file, "scenario file (key = value)");
            cmd->add_option("--preset", preset_name, "built-in preset: fig3 | fig4 | fig5");
            cmd->add_option("--seed", seed, "master RNG seed override")
                ->each([&](const std::string&) { seed_set = true; });
            cmd->add_option("--workers", workers,
                            "worker thread count (default: SCMAOFDM_WORKERS or hardware)");
        }
        cmd->add_option("--out", out_path, "output file (default: stdout)");
    };

    auto* sim = app.add_subcommand("simulate", "run the Monte Carlo link simulation");
    add_common(sim, true);

    auto* ana = app.add_subcommand("analyze", "evaluate analytic BER bounds only");
    add_common(ana, true);

    auto* plot = app.add_subcommand("plot", "render a sweep CSV as an SVG figure");
    std::string csv_path, plot_kind = "ber_vs_snr", title;
    double fixed_snr = 0.0;
    bool have_fixed_snr = false;
    plot->add_option("--csv", csv_path, "sweep CSV produced by simulate/analyze")
        ->required();
    plot->add_option("--kind", plot_kind, "ber_vs_snr | ber_vs_eps")
        ->check(CLI::IsMember({"ber_vs_snr", "ber_vs_eps"}));
    plot->add_option("--snr", fixed_snr, "for ber_vs_eps: keep only this SNR")
        ->each([&](const std::string&) { have_fixed_snr = true; });
    plot->add_option("--title", title, "plot title");
    add_common(plot, false);

    auto* pre = app.add_subcommand("preset", "print a built-in scenario file");
    std::string pre_name;
    pre->add_option("name", pre_name, "fig3 | fig4 | fig5")->required();
    add_common(pre, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (pre->parsed()) {
            std::ostringstream text;
            so::Scenario::preset(pre_name).save(text);
            write_or_stdout(out_path, text.str());
            return 0;
        }
        if (plot->parsed()) {
            std::ifstream in(csv_path);
            if (!in) throw so::InputError("cannot open CSV file: " + csv_path);
            std::stringstream csv;
            csv << in.rdbuf();
            so::PlotSpec spec;
            spec.kind = plot_kind == "ber_vs_eps" ? so::PlotSpec::Kind::ber_vs_eps
                                                  : so::PlotSpec::Kind::ber_vs_snr;
            if (have_fixed_snr) spec.fixed_snr_db = fixed_snr;
            spec.title = title;
            write_or_stdout(out_path, so::render_plot_svg(csv.str(), spec));
            return 0;
        }

        so::Scenario sc = load_scenario(scenario_file, preset_name);
        if (seed_set) sc.master_seed = seed;
        if (workers >= 0) sc.workers = workers;
        if (ana->parsed()) {
            sc.run_sim = false;
            if (!sc.run_series && !sc.run_mc && !sc.run_awgn_analytic) {
                sc.run_series = sc.channel == so::ChannelKind::rayleigh;
                sc.run_awgn_analytic = sc.channel == so::ChannelKind::awgn;
            }
        }
        if (out_path.empty() || out_path == "-") {
            so::run_sweep(sc, std::cout);
        } else {
            so::run_sweep_to_file(sc, out_path);
        }
        return 0;
    } catch (const so::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const so::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
