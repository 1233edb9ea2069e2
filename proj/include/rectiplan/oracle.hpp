#pragma once

#include <cstdint>
#include <optional>

#include "rectiplan/quantize.hpp"
#include "rectiplan/single_phase.hpp"
#include "rectiplan/three_phase.hpp"

namespace rectiplan {

// Exhaustive search over discrete schemes. Equality rows are accepted within
// `tolerance` measured in mean-normalized units (each raw projection row is
// divided by N); a dc_interval is honored almost exactly (1e-12 slack), so
// every scheme the oracle accepts is a feasible point of the LP relaxation
// and the LP optimum must lower-bound best_cost.
struct OracleResult {
    std::optional<double> best_cost;
    std::optional<QuantizedSingle> best_single;
    std::optional<QuantizedThree> best_three;
    std::uint64_t num_feasible = 0;
    std::uint64_t num_enumerated = 0;
};

// Caps: 3^14 combinations single phase, 7^8 three phase.
constexpr std::size_t kOracleMaxSingleN = 14;
constexpr std::size_t kOracleMaxThreeN = 8;

OracleResult enumerate_single(const SinglePhaseSpec& spec, const TimeGrid& grid,
                              double tolerance = 0.02);

OracleResult enumerate_three(const ThreePhaseSpec& spec, const TimeGrid& grid,
                             double tolerance = 0.02);

} // namespace rectiplan
