#include "rectiplan/grid.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace rectiplan {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

LevelVector LevelVector::for_free_wheel(bool free_wheel) {
    LevelVector lv;
    if (free_wheel) {
        lv.levels = {-1.0, 0.0, 1.0};
        lv.zero_index = 1;
    } else {
        lv.levels = {-1.0, 1.0};
    }
    lv.magnitudes.reserve(lv.levels.size());
    for (double s : lv.levels) lv.magnitudes.push_back(std::abs(s));
    return lv;
}

int LevelVector::index_of_sign(int sign) const {
    for (std::size_t j = 0; j < levels.size(); ++j)
        if ((sign > 0 && levels[j] > 0.0) || (sign < 0 && levels[j] < 0.0))
            return static_cast<int>(j);
    fail(Errc::SpecInvalid, "level vector lacks the requested sign");
}

TimeGrid build_grid(std::size_t n, double f0_hz) {
    if (n < 4) fail(Errc::BadN, "grid needs at least 4 samples, got " + std::to_string(n));
    if (!(f0_hz > 0.0)) fail(Errc::NonpositiveParams, "fundamental frequency must be positive");
    TimeGrid g;
    g.n = n;
    g.f0_hz = f0_hz;
    g.theta.resize(n);
    for (std::size_t i = 0; i < n; ++i) g.theta[i] = kTwoPi * static_cast<double>(i) / static_cast<double>(n);
    return g;
}

VoltageTemplate build_sine_template(const TimeGrid& grid, double phase_offset,
                                    std::optional<double> minus_offset, std::string label) {
    VoltageTemplate t;
    t.label = label.empty() ? std::string("sine") : std::move(label);
    t.samples.resize(grid.n);
    t.samples_sq.resize(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) {
        double v = std::sin(grid.theta[i] + phase_offset);
        if (minus_offset) v -= std::sin(grid.theta[i] + *minus_offset);
        t.samples[i] = v;
        t.samples_sq[i] = v * v;
    }
    return t;
}

VoltageTemplate template_from_samples(std::string label, std::vector<double> samples,
                                      std::size_t expected_n) {
    if (samples.size() != expected_n)
        fail(Errc::LengthMismatch, "template has " + std::to_string(samples.size()) +
                                       " samples, expected " + std::to_string(expected_n));
    for (double v : samples)
        if (!std::isfinite(v)) fail(Errc::SpecInvalid, "template contains non-finite sample");
    VoltageTemplate t;
    t.label = std::move(label);
    t.samples = std::move(samples);
    t.samples_sq.reserve(expected_n);
    for (double v : t.samples) t.samples_sq.push_back(v * v);
    return t;
}

FourierRow build_fourier_row(const TimeGrid& grid, int k) {
    if (k < 0 || 2 * static_cast<std::size_t>(k) >= grid.n)
        fail(Errc::AliasedHarmonic,
             "harmonic " + std::to_string(k) + " aliases on a grid of " + std::to_string(grid.n));
    FourierRow row;
    row.k = k;
    row.cos_row.resize(grid.n);
    row.sin_row.resize(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) {
        // Reduce the index product modulo N so the trig argument stays small.
        const std::size_t m = (static_cast<std::size_t>(k) * i) % grid.n;
        const double arg = kTwoPi * static_cast<double>(m) / static_cast<double>(grid.n);
        row.cos_row[i] = (k == 0) ? 1.0 : std::cos(arg);
        row.sin_row[i] = (k == 0) ? 0.0 : std::sin(arg);
    }
    return row;
}

std::array<VoltageTemplate, 3> line_voltage_templates(const TimeGrid& grid) {
    const double third = kTwoPi / 3.0;
    return {build_sine_template(grid, 0.0, third, "s12"),
            build_sine_template(grid, third, 2.0 * third, "s23"),
            build_sine_template(grid, 2.0 * third, 0.0, "s31")};
}

std::array<VoltageTemplate, 3> line_voltage_templates(const TimeGrid& grid,
                                                      const std::vector<double>& phase1,
                                                      const std::vector<double>& phase2,
                                                      const std::vector<double>& phase3) {
    auto diff = [&](const std::vector<double>& a, const std::vector<double>& b, const char* label) {
        if (a.size() != grid.n || b.size() != grid.n)
            fail(Errc::LengthMismatch, "phase supply length does not match the grid");
        std::vector<double> d(grid.n);
        for (std::size_t i = 0; i < grid.n; ++i) d[i] = a[i] - b[i];
        return template_from_samples(label, std::move(d), grid.n);
    };
    return {diff(phase1, phase2, "s12"), diff(phase2, phase3, "s23"), diff(phase3, phase1, "s31")};
}

} // namespace rectiplan
