#include "rectiplan/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

namespace rectiplan {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kRangeSlack = 1e-7;   // 10 * default feasibility tolerance
constexpr double kMassFloor = 1e-6;

// Amplitude per unit raw projection magnitude at harmonic k.
double amplitude_scale(std::size_t n, int k) {
    const double dn = static_cast<double>(n);
    if (k == 0 || 2 * static_cast<std::size_t>(k) == n) return 1.0 / dn;
    return 2.0 / dn;
}

std::pair<double, double> project(std::span<const double> signal, int k) {
    double c = 0.0, s = 0.0;
    const double dn = static_cast<double>(signal.size());
    for (std::size_t i = 0; i < signal.size(); ++i) {
        const double arg = kTwoPi * static_cast<double>(k) * static_cast<double>(i) / dn;
        c += std::cos(arg) * signal[i];
        s += std::sin(arg) * signal[i];
    }
    return {c, s};
}

double dc_error_for(double dc, double target,
                    const std::optional<std::pair<double, double>>& interval) {
    if (interval)
        return std::max({interval->first - dc, dc - interval->second, 0.0});
    return std::abs(dc - target);
}

} // namespace

QuantizedSingle quantize_single(std::span<const double> x, const LevelVector& levels) {
    QuantizedSingle q;
    q.levels.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (std::abs(x[i]) > 1.0 + kRangeSlack)
            fail(Errc::OutOfRange, "sample " + std::to_string(i) + " = " + std::to_string(x[i]) +
                                       " is outside the level range");
        double best = levels.levels[0];
        auto key = [&](double level) {
            return std::tuple{std::abs(x[i] - level), std::abs(level), level};
        };
        for (std::size_t j = 1; j < levels.size(); ++j)
            if (key(levels.levels[j]) < key(best)) best = levels.levels[j];
        q.levels[i] = best;
    }
    return q;
}

QuantizedSingle quantize_single(const RelaxedSchemeSingle& scheme, const SinglePhaseSpec& spec) {
    QuantizedSingle q = quantize_single(scheme.x, LevelVector::for_free_wheel(spec.free_wheel));
    q.spec_hash = spec.hash();
    q.relaxed_objective = scheme.objective;
    return q;
}

QuantizedThree quantize_three(const RelaxedSchemeThree& scheme) {
    const std::size_t m = scheme.m;
    if (m == 0 || scheme.z12.size() % m != 0)
        fail(Errc::LengthMismatch, "scheme matrices are not N x m shaped");
    const std::size_t n = scheme.z12.size() / m;
    const LevelVector levels = LevelVector::for_free_wheel(static_cast<int>(m) == 3);
    const int pos = levels.index_of_sign(+1);
    const int neg = levels.index_of_sign(-1);

    QuantizedThree q;
    q.states.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double masses[7] = {0, 0, 0, 0, 0, 0, 0};
        if (levels.has_free_wheel())
            for (int p = 0; p < 3; ++p)
                masses[0] += scheme.z_at(p, i, static_cast<std::size_t>(levels.zero_index));
        for (int p = 0; p < 3; ++p) {
            masses[1 + 2 * p] = scheme.z_at(p, i, static_cast<std::size_t>(pos));
            masses[2 + 2 * p] = scheme.z_at(p, i, static_cast<std::size_t>(neg));
        }
        int best = 0;
        for (int s = 1; s < 7; ++s)
            if (masses[s] > masses[best]) best = s;
        if (masses[best] < kMassFloor)
            fail(Errc::DegenerateRow,
                 "no state carries mass at index " + std::to_string(i));
        q.states[i] = static_cast<LegState>(best);
    }
    return q;
}

QuantizedThree quantize_three(const RelaxedSchemeThree& scheme, const ThreePhaseSpec& spec) {
    QuantizedThree q = quantize_three(scheme);
    q.spec_hash = spec.hash();
    q.relaxed_objective = scheme.objective;
    return q;
}

double ResidualReport::max_harmonic_residual() const {
    double worst = 0.0;
    for (const auto& [k, v] : current_harmonic_amplitudes) worst = std::max(worst, v);
    for (const auto& [k, v] : voltage_binding_errors) worst = std::max(worst, v);
    return worst;
}

ResidualReport waveform_residuals(std::span<const double> x, const SinglePhaseSpec& spec,
                                  const TimeGrid& grid) {
    spec.validate(grid);
    if (x.size() != grid.n)
        fail(Errc::LengthMismatch, "waveform length does not match the grid");
    const VoltageTemplate supply = spec.supply_template(grid);
    const std::size_t n = grid.n;

    ResidualReport rep;
    double dc = 0.0, mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        dc += supply.samples[i] * x[i];
        mean += x[i];
    }
    rep.dc_value = dc / static_cast<double>(n);
    rep.mean_current = std::abs(mean / static_cast<double>(n));
    rep.dc_error = dc_error_for(rep.dc_value, spec.dc_target, spec.dc_interval);

    for (int k : spec.current_zero_harmonics) {
        auto [c, s] = project(x, k);
        rep.current_harmonic_amplitudes[k] = amplitude_scale(n, k) * std::hypot(c, s);
    }
    if (!spec.voltage_harmonics.empty()) {
        const std::vector<double> v = output_voltage_single(x, supply);
        for (const auto& [l, target] : spec.voltage_harmonics) {
            auto [c, s] = project(v, l);
            rep.voltage_binding_errors[l] =
                amplitude_scale(n, l) * std::hypot(c - target.re, s - target.im);
        }
    }
    return rep;
}

ResidualReport waveform_residuals(std::span<const double> x1, std::span<const double> x2,
                                  std::span<const double> x3, std::span<const double> v,
                                  const ThreePhaseSpec& spec, const TimeGrid& grid) {
    spec.validate(grid);
    const std::size_t n = grid.n;
    if (x1.size() != n || x2.size() != n || x3.size() != n || v.size() != n)
        fail(Errc::LengthMismatch, "waveform length does not match the grid");

    ResidualReport rep;
    double dc = 0.0;
    for (double s : v) dc += s;
    rep.dc_value = dc / static_cast<double>(n);
    rep.dc_error = dc_error_for(rep.dc_value, spec.dc_target, spec.dc_interval);

    const std::array<std::span<const double>, 3> xs{x1, x2, x3};
    for (const auto& x : xs) {
        double mean = 0.0;
        for (double s : x) mean += s;
        rep.mean_current = std::max(rep.mean_current,
                                    std::abs(mean / static_cast<double>(n)));
    }

    for (int k : spec.current_zero_harmonics) {
        double worst = 0.0;
        for (const auto& x : xs) {
            auto [c, s] = project(x, k);
            worst = std::max(worst, std::hypot(c, s));
        }
        rep.current_harmonic_amplitudes[k] = amplitude_scale(n, k) * worst;
    }
    for (const auto& [l, target] : spec.voltage_harmonics) {
        auto [c, s] = project(v, l);
        rep.voltage_binding_errors[l] =
            amplitude_scale(n, l) * std::hypot(c - target.re, s - target.im);
    }
    return rep;
}

ResidualReport residual_report(const QuantizedSingle& q, const SinglePhaseSpec& spec,
                               const TimeGrid& grid) {
    return waveform_residuals(q.levels, spec, grid);
}

ResidualReport residual_report(const QuantizedThree& q, const ThreePhaseSpec& spec,
                               const TimeGrid& grid) {
    if (q.states.size() != grid.n)
        fail(Errc::LengthMismatch, "quantized scheme length does not match the grid");
    const std::array<VoltageTemplate, 3> lines = spec.line_templates(grid);
    const std::vector<double> v = output_voltage_three(q.states, lines);
    const auto currents = phase_currents(q.states, 1.0);
    return waveform_residuals(currents[0], currents[1], currents[2], v, spec, grid);
}

} // namespace rectiplan
