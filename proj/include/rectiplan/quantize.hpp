#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "rectiplan/single_phase.hpp"
#include "rectiplan/three_phase.hpp"

namespace rectiplan {

struct QuantizedSingle {
    std::vector<double> levels;  // one level per time index
    std::string spec_hash;
    double relaxed_objective = 0.0;
};

struct QuantizedThree {
    std::vector<LegState> states;
    std::string spec_hash;
    double relaxed_objective = 0.0;
};

// Nearest level per sample. Ties go to the smaller magnitude, then to the
// smaller level. Throws OutOfRange when |x[i]| > 1 + 1e-7.
QuantizedSingle quantize_single(std::span<const double> x, const LevelVector& levels);
// Same, with provenance filled from the relaxed solve.
QuantizedSingle quantize_single(const RelaxedSchemeSingle& scheme, const SinglePhaseSpec& spec);

// Picks the heaviest of the seven bridge states per index (six without a
// free-wheel level), so exactly one pair conducts and no short circuit can
// appear. Ties go to FREE, then P12+, P12-, P23+, P23-, P31+, P31-.
// Throws DegenerateRow when every mass is below 1e-6.
QuantizedThree quantize_three(const RelaxedSchemeThree& scheme);
QuantizedThree quantize_three(const RelaxedSchemeThree& scheme, const ThreePhaseSpec& spec);

// Constraint expressions re-evaluated exactly on quantized waveforms.
// Harmonic entries use the spectrum amplitude scale (2|X_k|/N inside the
// spectrum, |X_k|/N at k = 0 and k = N/2) so they compare directly against
// amplitude tolerances.
struct ResidualReport {
    double dc_value = 0.0;
    double dc_error = 0.0;  // |dc - target|, or distance outside the interval
    double mean_current = 0.0;  // single phase: |mean x|; three: max_i |mean x_i|
    std::map<int, double> current_harmonic_amplitudes;
    std::map<int, double> voltage_binding_errors;

    double max_harmonic_residual() const;
};

ResidualReport residual_report(const QuantizedSingle& q, const SinglePhaseSpec& spec,
                               const TimeGrid& grid);
ResidualReport residual_report(const QuantizedThree& q, const ThreePhaseSpec& spec,
                               const TimeGrid& grid);

// The same evaluation on arbitrary waveforms (relaxed solutions included).
ResidualReport waveform_residuals(std::span<const double> x, const SinglePhaseSpec& spec,
                                  const TimeGrid& grid);
ResidualReport waveform_residuals(std::span<const double> x1, std::span<const double> x2,
                                  std::span<const double> x3, std::span<const double> v,
                                  const ThreePhaseSpec& spec, const TimeGrid& grid);

} // namespace rectiplan
