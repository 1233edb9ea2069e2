#include "rectiplan/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rectiplan {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double Spectrum::energy_at(std::size_t k) const {
    const std::size_t n = coeffs.size();
    if (k > n / 2) fail(Errc::OutOfRange, "bin " + std::to_string(k) + " beyond N/2");
    const double a = amplitudes[k];
    if (k == 0 || (n % 2 == 0 && k == n / 2)) return a * a;
    return 0.5 * a * a;
}

double ThdReport::conventional_or_throw() const {
    if (conventional_ratio) return *conventional_ratio;
    if (total_energy <= 0.0) fail(Errc::ZeroSignal, "signal has no energy");
    fail(Errc::ZeroDesired, "desired bins carry no energy");
}

Spectrum dft_spectrum(std::span<const double> v) {
    const std::size_t n = v.size();
    if (n < 2) fail(Errc::EmptySignal, "spectrum needs at least 2 samples");

    // Direct DFT against a table of the N-th roots of unity; the index
    // product is reduced mod N so every twiddle is exact in the table.
    std::vector<std::complex<double>> w(n);
    for (std::size_t m = 0; m < n; ++m)
        w[m] = std::polar(1.0, -kTwoPi * static_cast<double>(m) / static_cast<double>(n));

    Spectrum s;
    s.coeffs.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) acc += v[i] * w[(k * i) % n];
        s.coeffs[k] = acc;
    }

    const std::size_t half = n / 2;
    s.amplitudes.resize(half + 1);
    for (std::size_t k = 0; k <= half; ++k) {
        const double mag = std::abs(s.coeffs[k]);
        const bool shared = (k == 0) || (n % 2 == 0 && k == half);
        s.amplitudes[k] = (shared ? 1.0 : 2.0) * mag / static_cast<double>(n);
    }
    return s;
}

ThdReport thd(std::span<const double> v, const std::set<int>& desired_bins) {
    const std::size_t n = v.size();
    const Spectrum s = dft_spectrum(v);
    for (int k : desired_bins)
        if (k < 0 || static_cast<std::size_t>(k) > n / 2)
            fail(Errc::OutOfRange, "desired bin " + std::to_string(k) + " beyond N/2");

    ThdReport rep;
    rep.desired_bins = desired_bins;
    double total = 0.0;
    for (double x : v) total += x * x;
    total /= static_cast<double>(n);
    rep.total_energy = total;

    double desired = 0.0;
    for (int k : desired_bins) desired += s.energy_at(static_cast<std::size_t>(k));
    desired = std::min(desired, total);
    rep.desired_energy = desired;

    if (total <= 0.0) {
        rep.energy_ratio = 0.0;
        return rep;
    }
    const double undesired = std::max(total - desired, 0.0);
    rep.energy_ratio = std::clamp(undesired / total, 0.0, 1.0);
    // Round-off leaks ~1e-16 of amplitude into every bin; desired energy at
    // that level is indistinguishable from zero and would turn the ratio
    // into meaningless noise of order 1e+16.
    if (desired > total * 1e-12) rep.conventional_ratio = std::sqrt(undesired / desired);
    return rep;
}

std::vector<double> rl_filter(std::span<const double> v, const FilterConfig& cfg) {
    if (v.empty()) fail(Errc::EmptySignal, "filter input is empty");
    if (!(cfg.r_ohms > 0.0) || !(cfg.l_henries > 0.0) || !(cfg.f0_hz > 0.0) ||
        cfg.settle_periods < 1)
        fail(Errc::NonpositiveParams, "filter parameters must be positive");

    const std::size_t n = v.size();
    const double dt = 1.0 / (static_cast<double>(n) * cfg.f0_hz);
    const double alpha = std::exp(-cfg.r_ohms * dt / cfg.l_henries);

    // Exact zero-order-hold update of di/dt = (v - R i)/L.
    double current = 0.0;
    std::vector<double> out(n, 0.0);
    const long total_steps = static_cast<long>(cfg.settle_periods) * static_cast<long>(n);
    const long record_from = total_steps - static_cast<long>(n);
    for (long step = 0; step < total_steps; ++step) {
        const std::size_t i = static_cast<std::size_t>(step % static_cast<long>(n));
        current = alpha * current + (1.0 - alpha) * v[i] / cfg.r_ohms;
        if (step >= record_from) out[static_cast<std::size_t>(step - record_from)] = cfg.r_ohms * current;
    }
    return out;
}

RippleStats ripple_stats(std::span<const double> filtered, double dc_target) {
    if (filtered.empty()) fail(Errc::EmptySignal, "ripple input is empty");
    RippleStats st;
    double sum = 0.0;
    double lo = filtered[0], hi = filtered[0];
    for (double x : filtered) {
        sum += x;
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    st.mean = sum / static_cast<double>(filtered.size());
    st.peak_to_peak = hi - lo;
    double acc = 0.0;
    for (double x : filtered) acc += (x - st.mean) * (x - st.mean);
    st.rms_ripple = std::sqrt(acc / static_cast<double>(filtered.size()));
    st.mean_error = st.mean - dc_target;
    return st;
}

} // namespace rectiplan
