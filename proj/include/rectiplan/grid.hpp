#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rectiplan/error.hpp"

namespace rectiplan {

// Uniform sampling of one fundamental period: theta_n = 2*pi*n/N.
struct TimeGrid {
    std::size_t n = 0;
    std::vector<double> theta;
    double f0_hz = 50.0;  // metadata for time-domain analysis only
};

// Supply voltage samples over one period, kept together with their squares
// (the squares weight the output-energy term of the cost).
struct VoltageTemplate {
    std::string label;
    std::vector<double> samples;
    std::vector<double> samples_sq;
};

// cos/sin projection rows for harmonic k on the grid.
struct FourierRow {
    int k = 0;
    std::vector<double> cos_row;
    std::vector<double> sin_row;
};

// Discrete switch levels. With free-wheeling the levels are {-1, 0, +1};
// without, {-1, +1}. magnitudes[j] = |levels[j]|.
struct LevelVector {
    std::vector<double> levels;
    std::vector<double> magnitudes;
    int zero_index = -1;  // index of the free-wheel level, -1 if absent

    static LevelVector for_free_wheel(bool free_wheel);

    std::size_t size() const { return levels.size(); }
    bool has_free_wheel() const { return zero_index >= 0; }
    int index_of_sign(int sign) const;  // level +1 or -1
};

TimeGrid build_grid(std::size_t n, double f0_hz);

// samples[n] = sin(theta_n + phase_offset) - sin(theta_n + minus_offset);
// the second term is omitted when minus_offset is not given.
VoltageTemplate build_sine_template(const TimeGrid& grid, double phase_offset,
                                    std::optional<double> minus_offset = std::nullopt,
                                    std::string label = {});

// Wraps explicit samples (e.g. a measured or distorted supply).
VoltageTemplate template_from_samples(std::string label, std::vector<double> samples,
                                      std::size_t expected_n);

FourierRow build_fourier_row(const TimeGrid& grid, int k);

// The three line-voltage templates s12, s23, s31 for phase supplies at
// offsets 0, 2pi/3, 4pi/3.
std::array<VoltageTemplate, 3> line_voltage_templates(const TimeGrid& grid);

// Same, but from explicit per-phase supply samples.
std::array<VoltageTemplate, 3> line_voltage_templates(const TimeGrid& grid,
                                                      const std::vector<double>& phase1,
                                                      const std::vector<double>& phase2,
                                                      const std::vector<double>& phase3);

} // namespace rectiplan
