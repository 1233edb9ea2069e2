#include "rectiplan/pipeline.hpp"

#include <cstdlib>
#include <json.hpp>

#include "rectiplan/io.hpp"
#include "rectiplan/oracle.hpp"
#include "rectiplan/quantize.hpp"

namespace rectiplan {

namespace {

using ordered_json = nlohmann::ordered_json;

void check_keys(const ordered_json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* key : allowed)
            if (it.key() == key) known = true;
        if (!known)
            fail(Errc::ConfigInvalid, "unknown key '" + it.key() + "' in " + where);
    }
}

double number_at(const ordered_json& obj, const char* key, double fallback,
                 bool* present = nullptr) {
    if (!obj.contains(key)) {
        if (present) *present = false;
        return fallback;
    }
    if (present) *present = true;
    const auto& v = obj.at(key);
    if (!v.is_number()) fail(Errc::ConfigInvalid, std::string(key) + " must be a number");
    return v.get<double>();
}

bool bool_at(const ordered_json& obj, const char* key, bool fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_boolean()) fail(Errc::ConfigInvalid, std::string(key) + " must be a boolean");
    return v.get<bool>();
}

std::string status_string(LpStatus s) {
    switch (s) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
    }
    return "unknown";
}

ordered_json thd_json(const ThdReport& rep) {
    ordered_json j;
    j["energy_ratio"] = rep.energy_ratio;
    if (rep.conventional_ratio)
        j["conventional_ratio"] = *rep.conventional_ratio;
    else
        j["conventional_ratio"] = nullptr;
    j["desired_bins"] = rep.desired_bins;
    j["total_energy"] = rep.total_energy;
    j["desired_energy"] = rep.desired_energy;
    return j;
}

ordered_json ripple_json(const RippleStats& r) {
    ordered_json j;
    j["mean"] = r.mean;
    j["peak_to_peak"] = r.peak_to_peak;
    j["rms"] = r.rms_ripple;
    j["mean_error"] = r.mean_error;
    return j;
}

ordered_json harmonic_table(const ResidualReport& relaxed, const ResidualReport* quantized) {
    ordered_json j;
    auto fill = [&](const std::map<int, double>& rel, const std::map<int, double>* qu,
                    const char* name) {
        ordered_json arr = ordered_json::array();
        for (const auto& [k, value] : rel) {
            ordered_json row;
            row["k"] = k;
            row["relaxed"] = value;
            if (qu) row["quantized"] = qu->at(k);
            arr.push_back(std::move(row));
        }
        j[name] = std::move(arr);
    };
    fill(relaxed.current_harmonic_amplitudes,
         quantized ? &quantized->current_harmonic_amplitudes : nullptr, "current");
    fill(relaxed.voltage_binding_errors,
         quantized ? &quantized->voltage_binding_errors : nullptr, "voltage");
    return j;
}

std::string csv_waveform(const char* value_name, const TimeGrid& grid,
                         std::span<const double> v) {
    std::string out = "index,theta,";
    out += value_name;
    out += "\n";
    for (std::size_t i = 0; i < v.size(); ++i) {
        out += std::to_string(i);
        out += ",";
        out += format_float(grid.theta[i]);
        out += ",";
        out += format_float(v[i]);
        out += "\n";
    }
    return out;
}

std::string csv_spectrum(const Spectrum& s) {
    std::string out = "k,amplitude\n";
    for (std::size_t k = 0; k < s.amplitudes.size(); ++k) {
        out += std::to_string(k);
        out += ",";
        out += format_float(s.amplitudes[k]);
        out += "\n";
    }
    return out;
}

std::string csv_filtered(std::span<const double> v, const FilterConfig& cfg, std::size_t n) {
    std::string out = "index,t_seconds,v\n";
    const double period = 1.0 / cfg.f0_hz;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double t = (static_cast<double>(cfg.settle_periods - 1) +
                          static_cast<double>(i) / static_cast<double>(n)) *
                         period;
        out += std::to_string(i);
        out += ",";
        out += format_float(t);
        out += ",";
        out += format_float(v[i]);
        out += "\n";
    }
    return out;
}

ordered_json dc_json(const RunConfig& cfg, const ResidualReport& relaxed,
                     const ResidualReport* quantized) {
    ordered_json j;
    if (cfg.dc_interval)
        j["target_interval"] = {cfg.dc_interval->first, cfg.dc_interval->second};
    else
        j["target"] = cfg.dc_target;
    j["relaxed"] = relaxed.dc_value;
    if (quantized) j["quantized"] = quantized->dc_value;
    return j;
}

double ripple_reference(const RunConfig& cfg) {
    if (cfg.dc_interval) return 0.5 * (cfg.dc_interval->first + cfg.dc_interval->second);
    return cfg.dc_target;
}

void write_report(const std::filesystem::path& out_dir, const ordered_json& report) {
    write_text_file(out_dir / "report.json", report.dump(2) + "\n");
}

int design_single(const RunConfig& cfg, const std::filesystem::path& out_dir,
                  const TimeGrid& grid, const FilterConfig& fcfg) {
    const SinglePhaseSpec spec = cfg.single_spec();
    const SinglePhaseSolve solve = solve_single_phase(spec, grid);

    ordered_json report;
    report["status"] = status_string(solve.status);
    report["phase"] = "single";
    report["n"] = cfg.n;
    report["free_wheel"] = cfg.free_wheel;
    report["spec_hash"] = spec.hash();

    if (solve.status != LpStatus::Optimal) {
        const DcRange range = achievable_dc_range_single(spec, grid);
        ordered_json diag;
        ordered_json dc;
        dc["feasible"] = range.feasible;
        if (range.feasible) {
            dc["min"] = range.min_dc;
            dc["max"] = range.max_dc;
            diag["explanation"] =
                "the requested output DC lies outside the achievable range under the "
                "remaining constraints";
        } else {
            diag["explanation"] = "the harmonic constraints alone admit no scheme";
        }
        diag["achievable_dc"] = std::move(dc);
        report["diagnosis"] = std::move(diag);
        write_report(out_dir, report);
        return solve.status == LpStatus::Infeasible ? 2 : 1;
    }

    const RelaxedSchemeSingle& scheme = *solve.scheme;
    const ResidualReport relaxed_rep = waveform_residuals(scheme.x, spec, grid);
    std::optional<QuantizedSingle> q;
    std::optional<ResidualReport> quant_rep;
    if (cfg.quantize) {
        q = quantize_single(scheme, spec);
        quant_rep = residual_report(*q, spec, grid);
    }

    const VoltageTemplate supply = spec.supply_template(grid);
    const std::vector<double>& x_wave = cfg.quantize ? q->levels : scheme.x;
    const std::vector<double> v = output_voltage_single(x_wave, supply);
    const std::vector<double> i_in = input_current_single(x_wave, cfg.load_current);
    const Spectrum spectrum = dft_spectrum(v);
    const std::vector<double> filtered = rl_filter(v, fcfg);
    const RippleStats ripple = ripple_stats(filtered, ripple_reference(cfg));

    if (cfg.quantize) {
        std::string csv = "index,theta,state\n";
        for (std::size_t i = 0; i < grid.n; ++i) {
            csv += std::to_string(i);
            csv += ",";
            csv += format_float(grid.theta[i]);
            csv += ",";
            csv += std::to_string(static_cast<int>(q->levels[i]));
            csv += "\n";
        }
        write_text_file(out_dir / "scheme.csv", csv);
    }
    write_text_file(out_dir / "voltage.csv", csv_waveform("v", grid, v));
    write_text_file(out_dir / "spectrum.csv", csv_spectrum(spectrum));
    write_text_file(out_dir / "filtered.csv", csv_filtered(filtered, fcfg, grid.n));

    report["objective"] = scheme.objective;
    report["analyzed_waveform"] = cfg.quantize ? "quantized" : "relaxed";
    report["dc"] = dc_json(cfg, relaxed_rep, quant_rep ? &*quant_rep : nullptr);
    report["constrained_harmonics"] =
        harmonic_table(relaxed_rep, quant_rep ? &*quant_rep : nullptr);
    {
        ordered_json worst;
        worst["relaxed"] = relaxed_rep.max_harmonic_residual();
        if (quant_rep) worst["quantized"] = quant_rep->max_harmonic_residual();
        report["max_harmonic_residual"] = std::move(worst);
    }
    report["thd"]["output_voltage"] = thd_json(thd(v, {0}));
    report["thd"]["input_current"] = thd_json(thd(i_in, {1}));
    report["ripple"] = ripple_json(ripple);
    report["spectrum"]["output_voltage_amplitudes"] = spectrum.amplitudes;

    write_report(out_dir, report);
    return 0;
}

int design_three(const RunConfig& cfg, const std::filesystem::path& out_dir,
                 const TimeGrid& grid, const FilterConfig& fcfg) {
    const ThreePhaseSpec spec = cfg.three_spec();
    const ThreePhaseSolve solve = solve_three_phase(spec, grid);

    ordered_json report;
    report["status"] = status_string(solve.status);
    report["phase"] = "three";
    report["n"] = cfg.n;
    report["free_wheel"] = cfg.free_wheel;
    report["spec_hash"] = spec.hash();
    report["grid_commensurate"] = spec.grid_commensurate();

    if (solve.status != LpStatus::Optimal) {
        const DcRange range = achievable_dc_range_three(spec, grid);
        ordered_json diag;
        ordered_json dc;
        dc["feasible"] = range.feasible;
        if (range.feasible) {
            dc["min"] = range.min_dc;
            dc["max"] = range.max_dc;
            diag["explanation"] =
                "the requested output DC lies outside the achievable range under the "
                "remaining constraints";
        } else {
            diag["explanation"] = "the harmonic constraints alone admit no scheme";
        }
        diag["achievable_dc"] = std::move(dc);
        report["diagnosis"] = std::move(diag);
        write_report(out_dir, report);
        return solve.status == LpStatus::Infeasible ? 2 : 1;
    }

    const RelaxedSchemeThree& scheme = *solve.scheme;
    const ResidualReport relaxed_rep =
        waveform_residuals(scheme.x1, scheme.x2, scheme.x3, scheme.v_out, spec, grid);
    const ThreeSchemeResiduals relaxed_raw = verify_three_scheme(spec, grid, scheme);
    std::optional<QuantizedThree> q;
    std::optional<ResidualReport> quant_rep;
    if (cfg.quantize) {
        q = quantize_three(scheme, spec);
        quant_rep = residual_report(*q, spec, grid);
    }

    const std::array<VoltageTemplate, 3> lines = spec.line_templates(grid);
    std::vector<double> v;
    std::array<std::vector<double>, 3> currents;
    if (cfg.quantize) {
        v = output_voltage_three(q->states, lines);
        currents = phase_currents(q->states, cfg.load_current);
    } else {
        v = scheme.v_out;
        currents = phase_currents(scheme, cfg.load_current);
    }
    const Spectrum spectrum = dft_spectrum(v);
    const std::vector<double> filtered = rl_filter(v, fcfg);
    const RippleStats ripple = ripple_stats(filtered, ripple_reference(cfg));

    if (cfg.quantize) {
        std::string csv = "index,theta,state\n";
        for (std::size_t i = 0; i < grid.n; ++i) {
            csv += std::to_string(i);
            csv += ",";
            csv += format_float(grid.theta[i]);
            csv += ",";
            csv += leg_state_name(q->states[i]);
            csv += "\n";
        }
        write_text_file(out_dir / "scheme.csv", csv);
    }
    write_text_file(out_dir / "voltage.csv", csv_waveform("v", grid, v));
    write_text_file(out_dir / "spectrum.csv", csv_spectrum(spectrum));
    write_text_file(out_dir / "filtered.csv", csv_filtered(filtered, fcfg, grid.n));

    report["objective"] = scheme.objective;
    report["analyzed_waveform"] = cfg.quantize ? "quantized" : "relaxed";
    report["dc"] = dc_json(cfg, relaxed_rep, quant_rep ? &*quant_rep : nullptr);
    report["constrained_harmonics"] =
        harmonic_table(relaxed_rep, quant_rep ? &*quant_rep : nullptr);
    {
        ordered_json worst;
        worst["relaxed"] = relaxed_rep.max_harmonic_residual();
        if (quant_rep) worst["quantized"] = quant_rep->max_harmonic_residual();
        report["max_harmonic_residual"] = std::move(worst);
    }
    {
        ordered_json bal;
        bal["relaxed"]["kirchhoff_max"] = relaxed_raw.max_kirchhoff;
        bal["relaxed"]["phase_mean_max"] = relaxed_raw.max_phase_mean;
        if (quant_rep) {
            // States route the load through exactly one pair, so the quantized
            // phase currents cancel identically.
            bal["quantized"]["kirchhoff_max"] = 0.0;
            bal["quantized"]["phase_mean_max"] = quant_rep->mean_current;
        }
        report["phase_balance"] = std::move(bal);
    }
    report["thd"]["output_voltage"] = thd_json(thd(v, {0}));
    {
        ordered_json arr = ordered_json::array();
        for (const auto& i_ph : currents) arr.push_back(thd_json(thd(i_ph, {1})));
        report["thd"]["input_currents"] = std::move(arr);
    }
    report["ripple"] = ripple_json(ripple);
    report["spectrum"]["output_voltage_amplitudes"] = spectrum.amplitudes;

    write_report(out_dir, report);
    return 0;
}

} // namespace

RunConfig RunConfig::from_json_text(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail(Errc::ConfigInvalid, std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) fail(Errc::ConfigInvalid, "config root must be a JSON object");

    check_keys(j,
               {"phase", "n", "free_wheel", "dc_target", "dc_interval", "lambda",
                "current_zero_harmonics", "voltage_harmonics", "f0_hz", "load_current",
                "filter", "templates_file", "quantize", "output_dir"},
               "config");

    RunConfig cfg;
    if (!j.contains("phase") || !j.at("phase").is_string())
        fail(Errc::ConfigInvalid, "phase must be \"single\" or \"three\"");
    cfg.phase = j.at("phase").get<std::string>();
    if (cfg.phase != "single" && cfg.phase != "three")
        fail(Errc::ConfigInvalid, "phase must be \"single\" or \"three\"");

    if (!j.contains("n") || !j.at("n").is_number_unsigned())
        fail(Errc::ConfigInvalid, "n must be a positive integer");
    cfg.n = j.at("n").get<std::size_t>();

    cfg.free_wheel = bool_at(j, "free_wheel", true);
    bool has_dc = false;
    cfg.dc_target = number_at(j, "dc_target", 0.0, &has_dc);
    if (j.contains("dc_interval")) {
        const auto& iv = j.at("dc_interval");
        if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() || !iv[1].is_number())
            fail(Errc::ConfigInvalid, "dc_interval must be [lo, hi]");
        cfg.dc_interval = {iv[0].get<double>(), iv[1].get<double>()};
    }
    if (!has_dc && !cfg.dc_interval)
        fail(Errc::ConfigInvalid, "dc_target (or dc_interval) is required");

    cfg.lambda = number_at(j, "lambda", 0.0);

    if (j.contains("current_zero_harmonics")) {
        const auto& arr = j.at("current_zero_harmonics");
        if (!arr.is_array())
            fail(Errc::ConfigInvalid, "current_zero_harmonics must be an array of integers");
        for (const auto& e : arr) {
            if (!e.is_number_integer())
                fail(Errc::ConfigInvalid, "current_zero_harmonics must be an array of integers");
            cfg.current_zero_harmonics.insert(e.get<int>());
        }
    }
    if (j.contains("voltage_harmonics")) {
        const auto& arr = j.at("voltage_harmonics");
        if (!arr.is_array())
            fail(Errc::ConfigInvalid, "voltage_harmonics must be an array of {k, re, im}");
        for (const auto& e : arr) {
            if (!e.is_object() || !e.contains("k") || !e.at("k").is_number_integer())
                fail(Errc::ConfigInvalid, "voltage_harmonics entries need an integer k");
            check_keys(e, {"k", "re", "im"}, "voltage_harmonics entry");
            HarmonicBinding b;
            b.re = number_at(e, "re", 0.0);
            b.im = number_at(e, "im", 0.0);
            cfg.voltage_harmonics[e.at("k").get<int>()] = b;
        }
    }

    cfg.f0_hz = number_at(j, "f0_hz", 50.0);
    if (!(cfg.f0_hz > 0.0)) fail(Errc::ConfigInvalid, "f0_hz must be positive");
    cfg.load_current = number_at(j, "load_current", 1.0);
    if (!(cfg.load_current > 0.0)) fail(Errc::ConfigInvalid, "load_current must be positive");

    cfg.filter.f0_hz = cfg.f0_hz;
    if (j.contains("filter")) {
        const auto& f = j.at("filter");
        if (!f.is_object()) fail(Errc::ConfigInvalid, "filter must be an object");
        check_keys(f, {"r_ohms", "l_henries", "settle_periods"}, "filter");
        cfg.filter.r_ohms = number_at(f, "r_ohms", 1.0);
        cfg.filter.l_henries = number_at(f, "l_henries", 0.02);
        const double settle = number_at(f, "settle_periods", 10.0);
        if (settle < 1.0 || settle != static_cast<double>(static_cast<int>(settle)))
            fail(Errc::ConfigInvalid, "settle_periods must be a positive integer");
        cfg.filter.settle_periods = static_cast<int>(settle);
        if (!(cfg.filter.r_ohms > 0.0) || !(cfg.filter.l_henries > 0.0))
            fail(Errc::ConfigInvalid, "filter r_ohms and l_henries must be positive");
    }

    if (j.contains("templates_file")) {
        if (!j.at("templates_file").is_string())
            fail(Errc::ConfigInvalid, "templates_file must be a path string");
        cfg.templates_file = j.at("templates_file").get<std::string>();
    }
    cfg.quantize = bool_at(j, "quantize", true);
    if (j.contains("output_dir")) {
        if (!j.at("output_dir").is_string())
            fail(Errc::ConfigInvalid, "output_dir must be a path string");
        cfg.output_dir = j.at("output_dir").get<std::string>();
    }
    return cfg;
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
    return from_json_text(read_text_file(path));
}

SinglePhaseSpec RunConfig::single_spec() const {
    if (phase != "single") fail(Errc::ConfigInvalid, "config phase is not \"single\"");
    SinglePhaseSpec spec;
    spec.n = n;
    spec.free_wheel = free_wheel;
    spec.dc_target = dc_target;
    spec.dc_interval = dc_interval;
    spec.lambda = lambda;
    spec.current_zero_harmonics = current_zero_harmonics;
    spec.voltage_harmonics = voltage_harmonics;
    if (templates_file) {
        const auto rows = read_csv_rows(*templates_file);
        std::vector<double> samples;
        samples.reserve(rows.size());
        for (const auto& r : rows) {
            if (r.size() != 1)
                fail(Errc::ConfigInvalid,
                     "single-phase templates_file must hold one sample per line");
            samples.push_back(r[0]);
        }
        spec.supply_samples = std::move(samples);
    }
    return spec;
}

ThreePhaseSpec RunConfig::three_spec() const {
    if (phase != "three") fail(Errc::ConfigInvalid, "config phase is not \"three\"");
    ThreePhaseSpec spec;
    spec.n = n;
    spec.free_wheel = free_wheel;
    spec.dc_target = dc_target;
    spec.dc_interval = dc_interval;
    spec.lambda = lambda;
    spec.current_zero_harmonics = current_zero_harmonics;
    spec.voltage_harmonics = voltage_harmonics;
    if (templates_file) {
        const auto rows = read_csv_rows(*templates_file);
        std::array<std::vector<double>, 3> phases;
        for (const auto& r : rows) {
            if (r.size() != 3)
                fail(Errc::ConfigInvalid,
                     "three-phase templates_file must hold three samples per line "
                     "(phase 1, 2, 3)");
            for (int p = 0; p < 3; ++p)
                phases[static_cast<std::size_t>(p)].push_back(r[static_cast<std::size_t>(p)]);
        }
        spec.phase_samples = std::move(phases);
    }
    return spec;
}

std::filesystem::path resolve_output_dir(const std::string& configured) {
    const char* env = std::getenv("RECTIPLAN_OUT");
    if (env && *env) return env;
    return configured;
}

int run_design(const RunConfig& cfg) {
    const std::filesystem::path out_dir = resolve_output_dir(cfg.output_dir);
    const TimeGrid grid = build_grid(cfg.n, cfg.f0_hz);
    FilterConfig fcfg = cfg.filter;
    fcfg.f0_hz = cfg.f0_hz;
    if (cfg.phase == "single") return design_single(cfg, out_dir, grid, fcfg);
    return design_three(cfg, out_dir, grid, fcfg);
}

int run_analyze(const std::filesystem::path& wave_csv, const std::set<int>& desired_bins,
                const std::optional<FilterConfig>& filter,
                const std::filesystem::path& out_dir) {
    const std::vector<double> v = read_csv_values(wave_csv);
    const Spectrum spectrum = dft_spectrum(v);
    write_text_file(out_dir / "spectrum.csv", csv_spectrum(spectrum));

    const ThdReport rep = thd(v, desired_bins);
    ordered_json j = thd_json(rep);
    j["n"] = v.size();
    j["source"] = wave_csv.string();
    write_text_file(out_dir / "thd.json", j.dump(2) + "\n");

    if (filter) {
        const std::vector<double> filtered = rl_filter(v, *filter);
        write_text_file(out_dir / "filtered.csv", csv_filtered(filtered, *filter, v.size()));
    }
    return 0;
}

int run_oracle(const RunConfig& cfg, double tolerance) {
    const std::filesystem::path out_dir = resolve_output_dir(cfg.output_dir);
    const TimeGrid grid = build_grid(cfg.n, cfg.f0_hz);

    ordered_json j;
    j["phase"] = cfg.phase;
    j["n"] = cfg.n;
    j["tolerance"] = tolerance;

    LpStatus lp_status = LpStatus::Infeasible;
    double lp_objective = 0.0;
    OracleResult oracle;
    if (cfg.phase == "single") {
        const SinglePhaseSpec spec = cfg.single_spec();
        const SinglePhaseSolve solve = solve_single_phase(spec, grid);
        lp_status = solve.status;
        if (solve.scheme) lp_objective = solve.scheme->objective;
        oracle = enumerate_single(spec, grid, tolerance);
        if (oracle.best_single) {
            ordered_json levels = ordered_json::array();
            for (double v : oracle.best_single->levels) levels.push_back(static_cast<int>(v));
            j["best_scheme"] = std::move(levels);
        }
    } else {
        const ThreePhaseSpec spec = cfg.three_spec();
        const ThreePhaseSolve solve = solve_three_phase(spec, grid);
        lp_status = solve.status;
        if (solve.scheme) lp_objective = solve.scheme->objective;
        oracle = enumerate_three(spec, grid, tolerance);
        if (oracle.best_three) {
            ordered_json states = ordered_json::array();
            for (LegState s : oracle.best_three->states) states.push_back(leg_state_name(s));
            j["best_scheme"] = std::move(states);
        }
    }
    if (!j.contains("best_scheme")) j["best_scheme"] = nullptr;

    j["lp_status"] = status_string(lp_status);
    if (lp_status == LpStatus::Optimal)
        j["lp_objective"] = lp_objective;
    else
        j["lp_objective"] = nullptr;
    if (oracle.best_cost)
        j["best_cost"] = *oracle.best_cost;
    else
        j["best_cost"] = nullptr;
    j["num_feasible"] = oracle.num_feasible;
    j["num_enumerated"] = oracle.num_enumerated;

    bool dominance = true;
    if (oracle.num_feasible > 0) {
        dominance = lp_status == LpStatus::Optimal && oracle.best_cost &&
                    lp_objective <= *oracle.best_cost + 1e-9;
    }
    j["dominance"] = dominance;

    write_text_file(out_dir / "oracle.json", j.dump(2) + "\n");
    return 0;
}

} // namespace rectiplan
