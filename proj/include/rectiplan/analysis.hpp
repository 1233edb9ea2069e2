#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "rectiplan/error.hpp"

namespace rectiplan {

// One-sided magnitude spectrum. amplitudes[k] is the amplitude of harmonic k:
//   a_0     = |X(0)|/N
//   a_k     = 2|X(k)|/N          for 0 < k < N/2
//   a_{N/2} = |X(N/2)|/N         when N is even
// The full complex DFT is retained in coeffs.
struct Spectrum {
    std::vector<std::complex<double>> coeffs;  // k = 0 .. N-1
    std::vector<double> amplitudes;            // k = 0 .. floor(N/2)

    std::size_t size() const { return coeffs.size(); }
    // Parseval term of bin k: its share of the mean-square signal energy.
    double energy_at(std::size_t k) const;
};

struct ThdReport {
    double energy_ratio = 0.0;  // undesired energy / total energy, in [0,1]
    std::optional<double> conventional_ratio;  // sqrt(undesired/desired); absent when undefined
    std::set<int> desired_bins;
    double total_energy = 0.0;
    double desired_energy = 0.0;

    // Throws ZeroSignal / ZeroDesired when the conventional ratio is undefined.
    double conventional_or_throw() const;
};

struct FilterConfig {
    double r_ohms = 1.0;
    double l_henries = 0.02;
    double f0_hz = 50.0;
    int settle_periods = 10;
};

struct RippleStats {
    double mean = 0.0;
    double peak_to_peak = 0.0;
    double rms_ripple = 0.0;   // about the waveform's own mean
    double mean_error = 0.0;   // mean - dc_target
};

Spectrum dft_spectrum(std::span<const double> v);

ThdReport thd(std::span<const double> v, const std::set<int>& desired_bins);

// First-order RL low pass driven by a zero-order-hold periodic input. Runs
// settle_periods periods from zero state and returns the last period of the
// resistor voltage.
std::vector<double> rl_filter(std::span<const double> v, const FilterConfig& cfg);

RippleStats ripple_stats(std::span<const double> filtered, double dc_target);

} // namespace rectiplan
