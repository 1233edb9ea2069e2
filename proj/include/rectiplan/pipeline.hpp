#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rectiplan/analysis.hpp"
#include "rectiplan/single_phase.hpp"
#include "rectiplan/three_phase.hpp"

namespace rectiplan {

// One design run, deserialized from a JSON config. Unknown keys are
// rejected so typos cannot silently fall back to defaults.
struct RunConfig {
    std::string phase;  // "single" or "three"
    std::size_t n = 0;
    bool free_wheel = true;
    double dc_target = 0.0;
    std::optional<std::pair<double, double>> dc_interval;
    double lambda = 0.0;
    std::set<int> current_zero_harmonics;
    std::map<int, HarmonicBinding> voltage_harmonics;
    double f0_hz = 50.0;
    double load_current = 1.0;
    FilterConfig filter;  // f0_hz mirrored from above
    std::optional<std::string> templates_file;
    bool quantize = true;
    std::string output_dir = ".";

    static RunConfig from_json_text(const std::string& text);  // Errc::ConfigInvalid
    static RunConfig from_file(const std::filesystem::path& path);

    SinglePhaseSpec single_spec() const;  // phase must be "single"
    ThreePhaseSpec three_spec() const;    // phase must be "three"
};

// Output directory resolution: RECTIPLAN_OUT env var wins over the config.
std::filesystem::path resolve_output_dir(const std::string& configured);

// Full design pipeline: solve, optionally quantize, write scheme.csv,
// voltage.csv, spectrum.csv, filtered.csv and report.json. Returns the
// process exit code (0 optimal, 2 infeasible).
int run_design(const RunConfig& cfg);

// Spectrum/THD (and optionally RL-filter) analysis of a waveform file.
// Writes spectrum.csv, thd.json and, when filter is set, filtered.csv.
int run_analyze(const std::filesystem::path& wave_csv, const std::set<int>& desired_bins,
                const std::optional<FilterConfig>& filter,
                const std::filesystem::path& out_dir);

// Brute-force enumeration vs the LP relaxation; writes oracle.json.
int run_oracle(const RunConfig& cfg, double tolerance);

} // namespace rectiplan
