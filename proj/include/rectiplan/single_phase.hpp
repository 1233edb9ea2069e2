#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rectiplan/grid.hpp"
#include "rectiplan/lp.hpp"

namespace rectiplan {

// Complex target for one output-voltage harmonic, as raw projection values:
// cos-row . v = re and sin-row . v = im.
struct HarmonicBinding {
    double re = 0.0;
    double im = 0.0;
};

struct SinglePhaseSpec {
    std::size_t n = 0;
    bool free_wheel = true;
    double dc_target = 0.0;
    // When set, replaces the exact DC equality with lo <= DC <= hi.
    std::optional<std::pair<double, double>> dc_interval;
    double lambda = 0.0;
    std::set<int> current_zero_harmonics;
    std::map<int, HarmonicBinding> voltage_harmonics;
    // Extension: force mean(x) = 0. Off by default; the base formulation
    // leaves the current's DC component free.
    bool current_zero_mean = false;
    // Custom supply samples replacing the unit sinusoid (unbalanced or
    // distorted sources). Must have exactly n entries.
    std::optional<std::vector<double>> supply_samples;

    void validate(const TimeGrid& grid) const;  // throws Errc::SpecInvalid
    VoltageTemplate supply_template(const TimeGrid& grid) const;
    std::string hash() const;  // stable fingerprint for provenance
};

// LP relaxation result: Z is N x m row major with unit row sums, and
// x[i] = sum_j Z[i][j] * levels[j].
struct RelaxedSchemeSingle {
    std::vector<double> z;
    std::size_t m = 0;
    std::vector<double> x;
    double objective = 0.0;

    double z_at(std::size_t row, std::size_t col) const { return z[row * m + col]; }
};

struct SinglePhaseSolve {
    LpStatus status = LpStatus::Infeasible;
    std::optional<RelaxedSchemeSingle> scheme;
};

// Raw-row residuals of a scheme, recomputed from scratch (fresh trig sums,
// no reuse of the LP builder's rows).
struct SingleSchemeResiduals {
    double max_row_sum_residual = 0.0;
    double min_z = 0.0;
    double dc_residual = 0.0;  // |DC - target|, or distance outside the interval
    double max_current_harmonic = 0.0;  // raw projection magnitude
    double max_voltage_binding = 0.0;   // raw projection distance to target
    double mean_x = 0.0;

    double worst() const;
};

LinearProgram build_single_phase_lp(const SinglePhaseSpec& spec, const TimeGrid& grid);

SinglePhaseSolve solve_single_phase(const SinglePhaseSpec& spec, const TimeGrid& grid,
                                    const SolveOptions& opts = {});

// v[i] = template.samples[i] * x[i] (the supply gated by the switching signal).
std::vector<double> output_voltage_single(std::span<const double> x, const VoltageTemplate& supply);

// i[k] = load_current * x[k]; the scheme is the grid current up to scale.
std::vector<double> input_current_single(std::span<const double> x, double load_current);

SingleSchemeResiduals verify_single_scheme(const SinglePhaseSpec& spec, const TimeGrid& grid,
                                           const RelaxedSchemeSingle& scheme);

// Range of reachable DC values under the spec's other constraints (the DC
// row is dropped and used as the objective in both directions).
struct DcRange {
    bool feasible = false;
    double min_dc = 0.0;
    double max_dc = 0.0;
};

DcRange achievable_dc_range_single(const SinglePhaseSpec& spec, const TimeGrid& grid,
                                   const SolveOptions& opts = {});

} // namespace rectiplan
