#include "rectiplan/single_phase.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace rectiplan {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Shared assembly for the full LP and for the DC-range probes.
LinearProgram assemble(const SinglePhaseSpec& spec, const TimeGrid& grid, bool include_dc,
                       std::vector<double>* dc_row_out) {
    spec.validate(grid);
    const LevelVector levels = LevelVector::for_free_wheel(spec.free_wheel);
    const VoltageTemplate supply = spec.supply_template(grid);
    const std::size_t n = grid.n;
    const std::size_t m = levels.size();
    const double dn = static_cast<double>(n);

    LinearProgram lp(n * m);

    // Cost: per-sample conduction mass weighted by (1 + lambda * supply^2).
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j)
            lp.cost[i * m + j] =
                (1.0 + spec.lambda * supply.samples_sq[i]) * levels.magnitudes[j] / dn;

    // (a) unit row sums.
    for (std::size_t i = 0; i < n; ++i) {
        LinearRow row;
        row.coeffs.assign(n * m, 0.0);
        for (std::size_t j = 0; j < m; ++j) row.coeffs[i * m + j] = 1.0;
        row.rhs = 1.0;
        lp.eq_rows.push_back(std::move(row));
    }

    // (b) zeroed current harmonics, cos and sin projections of x.
    for (int k : spec.current_zero_harmonics) {
        const FourierRow fr = build_fourier_row(grid, k);
        for (const auto* proj : {&fr.cos_row, &fr.sin_row}) {
            LinearRow row;
            row.coeffs.assign(n * m, 0.0);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < m; ++j)
                    row.coeffs[i * m + j] = (*proj)[i] * levels.levels[j];
            row.rhs = 0.0;
            lp.eq_rows.push_back(std::move(row));
        }
    }

    // Optional zero-mean extension on the current.
    if (spec.current_zero_mean) {
        LinearRow row;
        row.coeffs.assign(n * m, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < m; ++j) row.coeffs[i * m + j] = levels.levels[j] / dn;
        row.rhs = 0.0;
        lp.eq_rows.push_back(std::move(row));
    }

    // (c) DC of the output voltage: (1/N) supply . x.
    std::vector<double> dc_row(n * m, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j)
            dc_row[i * m + j] = supply.samples[i] * levels.levels[j] / dn;
    if (dc_row_out) *dc_row_out = dc_row;
    if (include_dc) {
        if (spec.dc_interval) {
            LinearRow hi{dc_row, spec.dc_interval->second};
            lp.ineq_rows.push_back(std::move(hi));
            LinearRow lo;
            lo.coeffs.resize(n * m);
            for (std::size_t i = 0; i < n * m; ++i) lo.coeffs[i] = -dc_row[i];
            lo.rhs = -spec.dc_interval->first;
            lp.ineq_rows.push_back(std::move(lo));
        } else {
            lp.eq_rows.push_back({dc_row, spec.dc_target});
        }
    }

    // (d) bound output-voltage harmonics: projections of supply .* x.
    for (const auto& [l, target] : spec.voltage_harmonics) {
        const FourierRow fr = build_fourier_row(grid, l);
        for (int part = 0; part < 2; ++part) {
            const auto& proj = part == 0 ? fr.cos_row : fr.sin_row;
            LinearRow row;
            row.coeffs.assign(n * m, 0.0);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < m; ++j)
                    row.coeffs[i * m + j] = proj[i] * supply.samples[i] * levels.levels[j];
            row.rhs = part == 0 ? target.re : target.im;
            lp.eq_rows.push_back(std::move(row));
        }
    }

    return lp;
}

} // namespace

void SinglePhaseSpec::validate(const TimeGrid& grid) const {
    if (grid.n != n)
        fail(Errc::SpecInvalid, "grid has " + std::to_string(grid.n) + " samples, spec wants " +
                                    std::to_string(n));
    if (n < 4) fail(Errc::SpecInvalid, "spec needs n >= 4");
    if (!std::isfinite(dc_target)) fail(Errc::SpecInvalid, "dc_target must be finite");
    if (!(lambda >= 0.0)) fail(Errc::SpecInvalid, "lambda must be >= 0");
    auto check_harmonic = [&](int k, const char* what) {
        if (k < 0 || 2 * static_cast<std::size_t>(k) >= n)
            fail(Errc::SpecInvalid, std::string(what) + " harmonic " + std::to_string(k) +
                                        " aliases on a grid of " + std::to_string(n));
    };
    for (int k : current_zero_harmonics) {
        check_harmonic(k, "current");
        if (k == 1)
            fail(Errc::SpecInvalid, "zeroing harmonic 1 would eliminate the fundamental current");
    }
    for (const auto& [l, target] : voltage_harmonics) {
        check_harmonic(l, "voltage");
        if (!std::isfinite(target.re) || !std::isfinite(target.im))
            fail(Errc::SpecInvalid, "voltage harmonic target must be finite");
    }
    if (dc_interval) {
        if (!std::isfinite(dc_interval->first) || !std::isfinite(dc_interval->second) ||
            dc_interval->first > dc_interval->second)
            fail(Errc::SpecInvalid, "dc_interval must be a finite ordered pair");
    }
    if (supply_samples && supply_samples->size() != n)
        fail(Errc::SpecInvalid, "supply_samples must have exactly n entries");
}

VoltageTemplate SinglePhaseSpec::supply_template(const TimeGrid& grid) const {
    if (supply_samples) return template_from_samples("s1", *supply_samples, grid.n);
    return build_sine_template(grid, 0.0, std::nullopt, "s1");
}

std::string SinglePhaseSpec::hash() const {
    std::string s = "single|n=" + std::to_string(n) + "|fw=" + (free_wheel ? "1" : "0") +
                    "|dc=" + fmt(dc_target) + "|lambda=" + fmt(lambda) +
                    "|zm=" + (current_zero_mean ? "1" : "0");
    if (dc_interval) s += "|dci=" + fmt(dc_interval->first) + "," + fmt(dc_interval->second);
    for (int k : current_zero_harmonics) s += "|ch=" + std::to_string(k);
    for (const auto& [l, t] : voltage_harmonics)
        s += "|vh=" + std::to_string(l) + ":" + fmt(t.re) + "," + fmt(t.im);
    if (supply_samples)
        for (double v : *supply_samples) s += "|t=" + fmt(v);
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(s)));
    return buf;
}

LinearProgram build_single_phase_lp(const SinglePhaseSpec& spec, const TimeGrid& grid) {
    return assemble(spec, grid, true, nullptr);
}

SinglePhaseSolve solve_single_phase(const SinglePhaseSpec& spec, const TimeGrid& grid,
                                    const SolveOptions& opts) {
    const LinearProgram lp = build_single_phase_lp(spec, grid);
    LpSolution sol = solve_lp(lp, opts);
    SinglePhaseSolve out;
    out.status = sol.status;
    if (sol.status != LpStatus::Optimal) return out;

    const LevelVector levels = LevelVector::for_free_wheel(spec.free_wheel);
    RelaxedSchemeSingle scheme;
    scheme.m = levels.size();
    scheme.z = std::move(sol.x);
    scheme.objective = sol.objective;
    scheme.x.resize(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < scheme.m; ++j) acc += scheme.z_at(i, j) * levels.levels[j];
        scheme.x[i] = acc;
    }
    out.scheme = std::move(scheme);
    return out;
}

std::vector<double> output_voltage_single(std::span<const double> x,
                                          const VoltageTemplate& supply) {
    if (x.size() != supply.samples.size())
        fail(Errc::LengthMismatch, "switching signal and supply differ in length");
    std::vector<double> v(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) v[i] = supply.samples[i] * x[i];
    return v;
}

std::vector<double> input_current_single(std::span<const double> x, double load_current) {
    if (!(load_current > 0.0)) fail(Errc::NonpositiveLoad, "load current must be positive");
    std::vector<double> i(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) i[k] = load_current * x[k];
    return i;
}

double SingleSchemeResiduals::worst() const {
    return std::max({max_row_sum_residual, std::max(-min_z, 0.0), dc_residual,
                     max_current_harmonic, max_voltage_binding});
}

SingleSchemeResiduals verify_single_scheme(const SinglePhaseSpec& spec, const TimeGrid& grid,
                                           const RelaxedSchemeSingle& scheme) {
    spec.validate(grid);
    const LevelVector levels = LevelVector::for_free_wheel(spec.free_wheel);
    const VoltageTemplate supply = spec.supply_template(grid);
    const std::size_t n = grid.n;
    if (scheme.m != levels.size() || scheme.z.size() != n * scheme.m || scheme.x.size() != n)
        fail(Errc::LengthMismatch, "scheme dimensions do not match the spec");

    SingleSchemeResiduals res;
    res.min_z = scheme.z.empty() ? 0.0 : scheme.z[0];
    for (std::size_t i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (std::size_t j = 0; j < scheme.m; ++j) {
            row_sum += scheme.z_at(i, j);
            res.min_z = std::min(res.min_z, scheme.z_at(i, j));
        }
        res.max_row_sum_residual = std::max(res.max_row_sum_residual, std::abs(row_sum - 1.0));
    }

    double dc = 0.0, mean_x = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        dc += supply.samples[i] * scheme.x[i];
        mean_x += scheme.x[i];
    }
    dc /= static_cast<double>(n);
    res.mean_x = mean_x / static_cast<double>(n);
    if (spec.dc_interval) {
        res.dc_residual =
            std::max({spec.dc_interval->first - dc, dc - spec.dc_interval->second, 0.0});
    } else {
        res.dc_residual = std::abs(dc - spec.dc_target);
    }

    // Fresh trig sums, independent of the LP builder's Fourier rows.
    auto projections = [&](std::span<const double> signal, int k) {
        double c = 0.0, s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double arg = kTwoPi * static_cast<double>(k) * static_cast<double>(i) /
                               static_cast<double>(n);
            c += std::cos(arg) * signal[i];
            s += std::sin(arg) * signal[i];
        }
        return std::pair{c, s};
    };
    for (int k : spec.current_zero_harmonics) {
        auto [c, s] = projections(scheme.x, k);
        res.max_current_harmonic = std::max(res.max_current_harmonic, std::hypot(c, s));
    }
    if (!spec.voltage_harmonics.empty()) {
        const std::vector<double> v = output_voltage_single(scheme.x, supply);
        for (const auto& [l, target] : spec.voltage_harmonics) {
            auto [c, s] = projections(v, l);
            res.max_voltage_binding =
                std::max(res.max_voltage_binding, std::hypot(c - target.re, s - target.im));
        }
    }
    return res;
}

DcRange achievable_dc_range_single(const SinglePhaseSpec& spec, const TimeGrid& grid,
                                   const SolveOptions& opts) {
    std::vector<double> dc_row;
    LinearProgram lp = assemble(spec, grid, false, &dc_row);
    DcRange out;

    lp.cost = dc_row;
    LpSolution lo = solve_lp(lp, opts);
    if (lo.status != LpStatus::Optimal) return out;
    for (auto& c : lp.cost) c = -c;
    LpSolution hi = solve_lp(lp, opts);
    if (hi.status != LpStatus::Optimal) return out;

    out.feasible = true;
    out.min_dc = lo.objective;
    out.max_dc = -hi.objective;
    return out;
}

} // namespace rectiplan
