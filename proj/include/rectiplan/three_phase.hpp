#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rectiplan/grid.hpp"
#include "rectiplan/lp.hpp"
#include "rectiplan/single_phase.hpp"

namespace rectiplan {

// Bridge state at one time index. Exactly one of the seven states holds, so a
// quantized scheme can never short two line voltages together. PairXYPos
// means line pair xy conducts with level +1 (current enters phase x, returns
// through phase y).
enum class LegState : int {
    Free = 0,
    P12Pos,
    P12Neg,
    P23Pos,
    P23Neg,
    P31Pos,
    P31Neg,
};

const char* leg_state_name(LegState s);

// Line pair index 0,1,2 for states on pairs 12,23,31; -1 for Free.
int leg_pair(LegState s);
// Conduction level: +1, -1, or 0 for Free.
int leg_level(LegState s);
// Unit phase currents (x1, x2, x3) drawn in state s.
std::array<int, 3> leg_phase_currents(LegState s);

struct ThreePhaseSpec {
    std::size_t n = 0;
    bool free_wheel = true;
    double dc_target = 0.0;
    std::optional<std::pair<double, double>> dc_interval;
    double lambda = 0.0;
    // Applied to each phase current individually.
    std::set<int> current_zero_harmonics;
    std::map<int, HarmonicBinding> voltage_harmonics;
    // Keep the as-published phase-current combinations x1 = (Z12 + Z31) S etc.
    // Those do not conserve current (x1+x2+x3 != 0); the default uses signed
    // combinations that do. For comparison only.
    bool literal_current_signs = false;
    // Custom per-phase supply samples (phase 1, 2, 3); line voltages are the
    // pairwise differences. Each vector must have exactly n entries.
    std::optional<std::array<std::vector<double>, 3>> phase_samples;

    void validate(const TimeGrid& grid) const;
    // s12, s23, s31 in that order.
    std::array<VoltageTemplate, 3> line_templates(const TimeGrid& grid) const;
    // Phase symmetry is only representable when 3 | n; advisory, not an error.
    bool grid_commensurate() const { return n % 3 == 0; }
    std::string hash() const;
};

// Relaxed solution. Each z matrix is N x m row major; only the combined row
// sums (z12 + z23 + z31) equal 1, mass may split across pairs.
struct RelaxedSchemeThree {
    std::size_t m = 0;
    std::vector<double> z12, z23, z31;
    std::vector<double> x1, x2, x3;  // phase currents at unit load
    std::vector<double> v_out;
    double objective = 0.0;

    const std::vector<double>& z(int pair) const;
    double z_at(int pair, std::size_t row, std::size_t col) const {
        return z(pair)[row * m + col];
    }
};

struct ThreePhaseSolve {
    LpStatus status = LpStatus::Infeasible;
    std::optional<RelaxedSchemeThree> scheme;
};

struct ThreeSchemeResiduals {
    double max_row_sum_residual = 0.0;  // combined row sums vs 1
    double min_z = 0.0;
    double max_phase_mean = 0.0;     // max_i |mean(x_i)|
    double max_kirchhoff = 0.0;      // max_n |x1+x2+x3|
    double dc_residual = 0.0;
    double max_current_harmonic = 0.0;
    double max_voltage_binding = 0.0;

    double worst() const;
};

LinearProgram build_three_phase_lp(const ThreePhaseSpec& spec, const TimeGrid& grid);

ThreePhaseSolve solve_three_phase(const ThreePhaseSpec& spec, const TimeGrid& grid,
                                  const SolveOptions& opts = {});

// v[i] = sum over pairs of s_pair[i] * (z_pair row i . levels).
std::vector<double> output_voltage_three(const RelaxedSchemeThree& scheme,
                                         const std::array<VoltageTemplate, 3>& templates);
// Quantized counterpart: the conducting pair's line voltage times the level.
std::vector<double> output_voltage_three(std::span<const LegState> states,
                                         const std::array<VoltageTemplate, 3>& templates);

std::array<std::vector<double>, 3> phase_currents(const RelaxedSchemeThree& scheme,
                                                  double load_current);
std::array<std::vector<double>, 3> phase_currents(std::span<const LegState> states,
                                                  double load_current);

ThreeSchemeResiduals verify_three_scheme(const ThreePhaseSpec& spec, const TimeGrid& grid,
                                         const RelaxedSchemeThree& scheme);

DcRange achievable_dc_range_three(const ThreePhaseSpec& spec, const TimeGrid& grid,
                                  const SolveOptions& opts = {});

} // namespace rectiplan
