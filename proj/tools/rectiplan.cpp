// rectiplan: synthesize, quantize and analyze rectifier switching schemes.
//
//   rectiplan design  <config.json>
//   rectiplan analyze <wave.csv> --desired 1 [--filter]
//   rectiplan oracle  <config.json> --tol 0.02
//
// The RECTIPLAN_OUT environment variable overrides the output directory.

#include <CLI11.hpp>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "rectiplan/error.hpp"
#include "rectiplan/pipeline.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Optimal rectifier switching scheme design and analysis"};
    app.require_subcommand(1);

    std::string design_config;
    CLI::App* design = app.add_subcommand("design", "Solve a scheme design config end to end");
    design->add_option("config", design_config, "JSON run configuration")
        ->required()
        ->check(CLI::ExistingFile);

    std::string wave_path;
    std::vector<int> desired;
    bool with_filter = false;
    CLI::App* analyze = app.add_subcommand("analyze", "Spectrum and THD of a waveform CSV");
    analyze->add_option("wave", wave_path, "waveform CSV (value per line, or index,theta,v)")
        ->required()
        ->check(CLI::ExistingFile);
    analyze->add_option("--desired", desired, "harmonic bins counted as desired (default 1)");
    analyze->add_flag("--filter", with_filter, "also write the RL-filtered waveform");

    std::string oracle_config;
    double tol = 0.02;
    CLI::App* oracle = app.add_subcommand("oracle", "Exhaustive check of the LP relaxation");
    oracle->add_option("config", oracle_config, "JSON run configuration")
        ->required()
        ->check(CLI::ExistingFile);
    oracle->add_option("--tol", tol, "equality tolerance, mean-normalized units");

    CLI11_PARSE(app, argc, argv);

    try {
        if (design->parsed())
            return rectiplan::run_design(rectiplan::RunConfig::from_file(design_config));
        if (analyze->parsed()) {
            std::set<int> bins(desired.begin(), desired.end());
            if (bins.empty()) bins.insert(1);
            std::optional<rectiplan::FilterConfig> filter;
            if (with_filter) filter = rectiplan::FilterConfig{};
            return rectiplan::run_analyze(wave_path, bins, filter,
                                          rectiplan::resolve_output_dir("."));
        }
        return rectiplan::run_oracle(rectiplan::RunConfig::from_file(oracle_config), tol);
    } catch (const rectiplan::Error& e) {
        std::fprintf(stderr, "rectiplan: %s: %s\n", rectiplan::errc_name(e.code()), e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "rectiplan: %s\n", e.what());
        return 1;
    }
}
