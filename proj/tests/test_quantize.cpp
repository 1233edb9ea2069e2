#include "rectiplan/quantize.hpp"

#include <cmath>
#include <numbers>

#include "support.hpp"

using namespace rectiplan;

namespace {

// Minimal relaxed three-phase scheme with given per-pair z rows; the current
// and voltage vectors are irrelevant for quantization and left empty.
RelaxedSchemeThree three_rows(std::size_t n, std::size_t m) {
    RelaxedSchemeThree s;
    s.m = m;
    s.z12.assign(n * m, 0.0);
    s.z23.assign(n * m, 0.0);
    s.z31.assign(n * m, 0.0);
    return s;
}

} // namespace

TEST_SUITE("quantize") {

TEST_CASE("nearest level with the stated tie rules") {
    const LevelVector fw = LevelVector::for_free_wheel(true);
    CHECK(quantize_single(std::vector<double>{0.6}, fw).levels[0] == 1.0);
    CHECK(quantize_single(std::vector<double>{-0.6}, fw).levels[0] == -1.0);
    CHECK(quantize_single(std::vector<double>{0.2}, fw).levels[0] == 0.0);
    // Midpoints tie toward the smaller magnitude.
    CHECK(quantize_single(std::vector<double>{0.5}, fw).levels[0] == 0.0);
    CHECK(quantize_single(std::vector<double>{-0.5}, fw).levels[0] == 0.0);

    const LevelVector hard = LevelVector::for_free_wheel(false);
    CHECK(quantize_single(std::vector<double>{0.49}, hard).levels[0] == 1.0);
    // Equidistant between -1 and +1: smaller level wins.
    CHECK(quantize_single(std::vector<double>{0.0}, hard).levels[0] == -1.0);
}

TEST_CASE("values outside the level range are rejected") {
    const LevelVector fw = LevelVector::for_free_wheel(true);
    CHECK_FAILS(Errc::OutOfRange, quantize_single(std::vector<double>{1.2}, fw));
    CHECK_FAILS(Errc::OutOfRange, quantize_single(std::vector<double>{-1.2}, fw));
    // Values within the feasibility slack are clamped, not rejected.
    CHECK(quantize_single(std::vector<double>{1.0 + 5e-8}, fw).levels[0] == 1.0);
}

TEST_CASE("idempotence on already-integral schemes") {
    const LevelVector fw = LevelVector::for_free_wheel(true);
    const std::vector<double> x = {1.0, 0.0, -1.0, 0.0, 1.0};
    const QuantizedSingle q = quantize_single(x, fw);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(q.levels[i] == x[i]);
}

TEST_CASE("three-phase argmax picks the heaviest bridge state") {
    RelaxedSchemeThree s = three_rows(1, 3);
    s.z12[2] = 1.0;  // column 2 is level +1
    CHECK(quantize_three(s).states[0] == LegState::P12Pos);

    s = three_rows(1, 3);
    s.z12[1] = 0.4;  // free-wheel columns pool into FREE
    s.z23[1] = 0.35;
    s.z31[0] = 0.25;
    CHECK(quantize_three(s).states[0] == LegState::Free);

    s = three_rows(1, 3);
    s.z12[2] = 0.5;
    s.z23[2] = 0.5;
    CHECK(quantize_three(s).states[0] == LegState::P12Pos);  // tie order

    s = three_rows(1, 3);
    s.z31[0] = 0.6;  // column 0 is level -1
    s.z12[2] = 0.4;
    CHECK(quantize_three(s).states[0] == LegState::P31Neg);
}

TEST_CASE("free mass ties beat conducting masses") {
    RelaxedSchemeThree s = three_rows(1, 3);
    s.z12[1] = 0.5;  // FREE mass 0.5
    s.z23[2] = 0.5;  // P23+ mass 0.5
    CHECK(quantize_three(s).states[0] == LegState::Free);
}

TEST_CASE("rows with no mass are degenerate") {
    RelaxedSchemeThree s = three_rows(2, 3);
    s.z12[0 * 3 + 2] = 1.0;  // row 0 fine, row 1 all zero
    CHECK_FAILS(Errc::DegenerateRow, quantize_three(s));
}

TEST_CASE("quantization is deterministic") {
    const LevelVector fw = LevelVector::for_free_wheel(true);
    std::vector<double> x(257);
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = std::sin(0.13 * static_cast<double>(i)) * 0.999;
    const QuantizedSingle a = quantize_single(x, fw);
    const QuantizedSingle b = quantize_single(x, fw);
    CHECK(a.levels == b.levels);
}

TEST_CASE("integral relaxed solutions report vanishing residuals") {
    // A scheme that conducts exactly like sign(sin) satisfies the rectified
    // mean spec to grid accuracy; the residual report must see ~0 error when
    // the target is the grid value itself.
    const TimeGrid g = build_grid(64, 50.0);
    const VoltageTemplate supply = build_sine_template(g, 0.0);
    std::vector<double> x(64);
    double dc = 0.0;
    for (std::size_t i = 0; i < 64; ++i) {
        x[i] = supply.samples[i] >= 0.0 ? 1.0 : -1.0;
        dc += supply.samples[i] * x[i];
    }
    dc /= 64.0;

    SinglePhaseSpec spec;
    spec.n = 64;
    spec.dc_target = dc;
    const QuantizedSingle q = quantize_single(x, LevelVector::for_free_wheel(true));
    const ResidualReport r = residual_report(q, spec, g);
    CHECK(r.dc_error <= 1e-12);
    CHECK(r.dc_value == doctest::Approx(dc).epsilon(1e-12));
}

TEST_CASE("full conduction versus the rectified-mean target") {
    const TimeGrid g = build_grid(256, 50.0);
    const VoltageTemplate supply = build_sine_template(g, 0.0);
    std::vector<double> x(256);
    for (std::size_t i = 0; i < 256; ++i) x[i] = supply.samples[i] >= 0.0 ? 1.0 : -1.0;

    SinglePhaseSpec spec;
    spec.n = 256;
    spec.dc_target = 2.0 / std::numbers::pi;
    const QuantizedSingle q = quantize_single(x, LevelVector::for_free_wheel(true));
    const ResidualReport r = residual_report(q, spec, g);
    CHECK(r.dc_error <= 1e-4);  // Riemann error of the grid against 2/pi
}

TEST_CASE("idle three-phase bridge misses the dc target by the target") {
    const TimeGrid g = build_grid(24, 50.0);
    ThreePhaseSpec spec;
    spec.n = 24;
    spec.dc_target = 0.2;

    QuantizedThree q;
    q.states.assign(24, LegState::Free);
    const ResidualReport r = residual_report(q, spec, g);
    CHECK(r.dc_value == doctest::Approx(0.0));
    CHECK(r.dc_error == doctest::Approx(0.2));
    CHECK(r.mean_current <= 1e-12);
}

TEST_CASE("harmonic residuals use the spectrum amplitude scale") {
    // x = cos(2 pi 3 n / N): its bin-3 projection has amplitude exactly 1,
    // so a spec zeroing harmonic 3 must report residual 1 on that bin.
    const std::size_t n = 48;
    const TimeGrid g = build_grid(n, 50.0);
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = std::cos(2.0 * std::numbers::pi * 3.0 * static_cast<double>(i) /
                        static_cast<double>(n));

    SinglePhaseSpec spec;
    spec.n = n;
    spec.dc_target = 0.0;
    spec.current_zero_harmonics = {3, 5};
    const ResidualReport r = waveform_residuals(x, spec, g);
    REQUIRE(r.current_harmonic_amplitudes.count(3) == 1);
    CHECK(r.current_harmonic_amplitudes.at(3) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.current_harmonic_amplitudes.at(5) <= 1e-9);
    CHECK(r.max_harmonic_residual() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("provenance flows through the spec-aware overloads") {
    SinglePhaseSpec spec;
    spec.n = 16;
    spec.dc_target = 0.0;
    const TimeGrid g = build_grid(16, 50.0);
    const SinglePhaseSolve r = solve_single_phase(spec, g);
    REQUIRE(r.status == LpStatus::Optimal);
    const QuantizedSingle q = quantize_single(*r.scheme, spec);
    CHECK(q.spec_hash == spec.hash());
    CHECK(q.relaxed_objective == doctest::Approx(r.scheme->objective));
}

} // TEST_SUITE
