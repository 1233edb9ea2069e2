#include "rectiplan/analysis.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "support.hpp"

using namespace rectiplan;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> sine(std::size_t n, int k, double amp = 1.0, double phase = 0.0) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = amp * std::sin(2.0 * kPi * k * static_cast<double>(i) / static_cast<double>(n) +
                              phase);
    return v;
}

// Ideal square wave: exact half split, so even harmonics vanish identically.
std::vector<double> square(std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = i < n / 2 ? 1.0 : -1.0;
    return v;
}

} // namespace

TEST_SUITE("analysis") {

TEST_CASE("constant signal is pure dc") {
    const std::vector<double> v(32, -2.5);
    const Spectrum s = dft_spectrum(v);
    CHECK(s.amplitudes[0] == doctest::Approx(2.5).epsilon(1e-12));
    for (std::size_t k = 1; k < s.amplitudes.size(); ++k)
        CHECK(s.amplitudes[k] <= 1e-12);
}

TEST_CASE("single-bin sinusoid") {
    const Spectrum s = dft_spectrum(sine(64, 1));
    CHECK(s.amplitudes[1] == doctest::Approx(1.0).epsilon(1e-9));
    for (std::size_t k = 0; k < s.amplitudes.size(); ++k)
        if (k != 1) CHECK(s.amplitudes[k] <= 1e-9);
}

TEST_CASE("square wave odd-harmonic series") {
    const Spectrum s = dft_spectrum(square(1024));
    CHECK(s.amplitudes[1] == doctest::Approx(4.0 / kPi).epsilon(1e-3));
    CHECK(s.amplitudes[2] <= 1e-9);
    CHECK(s.amplitudes[3] == doctest::Approx(4.0 / (3.0 * kPi)).epsilon(1e-3));
    CHECK(s.amplitudes[4] <= 1e-9);
    CHECK(s.amplitudes[5] == doctest::Approx(4.0 / (5.0 * kPi)).epsilon(1e-3));
}

TEST_CASE("spectrum guards and symmetry") {
    CHECK_FAILS(Errc::EmptySignal, dft_spectrum(std::vector<double>{1.0}));
    const Spectrum s = dft_spectrum(sine(48, 5, 0.7, 0.3));
    for (std::size_t k = 1; k < 48; ++k) {
        const auto a = s.coeffs[48 - k];
        const auto b = std::conj(s.coeffs[k]);
        CHECK(std::abs(a - b) <= 1e-9);
    }
}

TEST_CASE("parseval on random vectors") {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 16 + static_cast<std::size_t>(rng() % 48);
        std::vector<double> v(n);
        for (double& u : v) u = dist(rng);
        double mean_sq = 0.0;
        for (double u : v) mean_sq += u * u;
        mean_sq /= static_cast<double>(n);

        const Spectrum s = dft_spectrum(v);
        double sum = 0.0;
        for (std::size_t k = 0; k < s.amplitudes.size(); ++k) sum += s.energy_at(k);
        CHECK(std::abs(sum - mean_sq) <= 1e-9 * std::max(1.0, mean_sq));
    }
}

TEST_CASE("thd of a pure sinusoid is zero") {
    const ThdReport r = thd(sine(64, 1), {1});
    CHECK(r.energy_ratio <= 1e-12);
    CHECK(r.conventional_or_throw() <= 1e-6);
}

TEST_CASE("thd of the square wave matches the series") {
    const ThdReport r = thd(square(1024), {1});
    CHECK(r.energy_ratio == doctest::Approx(1.0 - 8.0 / (kPi * kPi)).epsilon(1e-3));
    // Conventional ratio: sqrt(undesired/desired) with desired = (1/2)(4/pi)^2.
    const double expect = std::sqrt((1.0 - 8.0 / (kPi * kPi)) / (8.0 / (kPi * kPi)));
    CHECK(r.conventional_or_throw() == doctest::Approx(expect).epsilon(1e-3));
}

TEST_CASE("thd edge cases") {
    const std::vector<double> ones(16, 1.0);
    const ThdReport dc = thd(ones, {0});
    CHECK(dc.energy_ratio <= 1e-12);

    const std::vector<double> zeros(16, 0.0);
    const ThdReport silent = thd(zeros, {1});
    CHECK(silent.energy_ratio == 0.0);
    CHECK_FAILS(Errc::ZeroSignal, silent.conventional_or_throw());

    // Energy present but none of it desired: conventional ratio undefined.
    const ThdReport none = thd(sine(64, 2), {5});
    CHECK_FAILS(Errc::ZeroDesired, none.conventional_or_throw());

    CHECK_FAILS(Errc::OutOfRange, thd(ones, {9}));  // bin > N/2

    CHECK(thd(square(256), {1}).energy_ratio >= 0.0);
    CHECK(thd(square(256), {1}).energy_ratio <= 1.0);
}

TEST_CASE("rl filter dc gain is unity") {
    FilterConfig cfg;
    cfg.settle_periods = 25;  // e^{-R T / L} per period leaves ~1e-11 of the start-up transient
    const std::vector<double> v(128, 0.8);
    const std::vector<double> out = rl_filter(v, cfg);
    REQUIRE(out.size() == v.size());
    for (double u : out) CHECK(u == doctest::Approx(0.8).epsilon(1e-6));
}

TEST_CASE("rl filter attenuates the fundamental as 1/|1 + j w L / R|") {
    FilterConfig cfg;
    cfg.settle_periods = 25;
    const std::vector<double> out = rl_filter(sine(256, 1), cfg);
    double amp = 0.0;
    for (double u : out) amp = std::max(amp, std::abs(u));
    const double expect = 1.0 / std::sqrt(1.0 + std::pow(2.0 * kPi * 50.0 * 0.02, 2.0));
    CHECK(amp == doctest::Approx(expect).epsilon(0.01));  // 0.15718 within 1%
}

TEST_CASE("rl filter trivia and guards") {
    FilterConfig cfg;
    const std::vector<double> zeros(64, 0.0);
    for (double u : rl_filter(zeros, cfg)) CHECK(u == 0.0);

    CHECK_FAILS(Errc::EmptySignal, rl_filter(std::vector<double>{}, cfg));
    FilterConfig bad = cfg;
    bad.r_ohms = 0.0;
    CHECK_FAILS(Errc::NonpositiveParams, rl_filter(zeros, bad));
    bad = cfg;
    bad.l_henries = -1.0;
    CHECK_FAILS(Errc::NonpositiveParams, rl_filter(zeros, bad));
    bad = cfg;
    bad.settle_periods = 0;
    CHECK_FAILS(Errc::NonpositiveParams, rl_filter(zeros, bad));
}

TEST_CASE("rl filter is linear in its input") {
    FilterConfig cfg;
    const std::vector<double> a = sine(128, 1);
    const std::vector<double> b = square(128);
    std::vector<double> mix(128);
    for (std::size_t i = 0; i < 128; ++i) mix[i] = 2.0 * a[i] - 0.5 * b[i];

    const std::vector<double> fa = rl_filter(a, cfg);
    const std::vector<double> fb = rl_filter(b, cfg);
    const std::vector<double> fmix = rl_filter(mix, cfg);
    for (std::size_t i = 0; i < 128; ++i)
        CHECK(std::abs(fmix[i] - (2.0 * fa[i] - 0.5 * fb[i])) <= 1e-9);
}

TEST_CASE("ripple statistics") {
    const std::vector<double> flat(32, 0.4);
    const RippleStats rs = ripple_stats(flat, 0.4);
    CHECK(rs.mean == doctest::Approx(0.4));
    CHECK(rs.peak_to_peak == 0.0);
    CHECK(rs.rms_ripple <= 1e-12);  // mean subtraction leaves one ulp per sample
    CHECK(std::abs(rs.mean_error) <= 1e-15);

    const double eps = 0.05;
    std::vector<double> wavy(256);
    for (std::size_t i = 0; i < 256; ++i)
        wavy[i] = 1.0 + eps * std::sin(2.0 * kPi * static_cast<double>(i) / 256.0);
    const RippleStats rw = ripple_stats(wavy, 1.0);
    CHECK(rw.peak_to_peak == doctest::Approx(2.0 * eps).epsilon(1e-6));
    CHECK(rw.rms_ripple == doctest::Approx(eps / std::sqrt(2.0)).epsilon(1e-6));
    CHECK(std::abs(rw.mean_error) <= 1e-12);
}

} // TEST_SUITE
