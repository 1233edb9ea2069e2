#include "rectiplan/grid.hpp"

#include <cmath>
#include <numbers>

#include "support.hpp"

using namespace rectiplan;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE("grid") {

TEST_CASE("uniform grid covers one period") {
    const TimeGrid g = build_grid(4, 50.0);
    REQUIRE(g.n == 4);
    CHECK(g.theta[0] == doctest::Approx(0.0));
    CHECK(g.theta[1] == doctest::Approx(kPi / 2));
    CHECK(g.theta[2] == doctest::Approx(kPi));
    CHECK(g.theta[3] == doctest::Approx(3 * kPi / 2));
    CHECK(g.f0_hz == 50.0);
}

TEST_CASE("grid guards") {
    CHECK_FAILS(Errc::BadN, build_grid(3, 50.0));
    CHECK_FAILS(Errc::NonpositiveParams, build_grid(8, 0.0));
    CHECK_FAILS(Errc::NonpositiveParams, build_grid(8, -1.0));
}

TEST_CASE("unit sine template hits the quarter points") {
    const TimeGrid g = build_grid(4, 50.0);
    const VoltageTemplate t = build_sine_template(g, 0.0);
    CHECK(std::abs(t.samples[0] - 0.0) <= 1e-15);
    CHECK(std::abs(t.samples[1] - 1.0) <= 1e-15);
    CHECK(std::abs(t.samples[2] - 0.0) <= 1e-15);
    CHECK(std::abs(t.samples[3] + 1.0) <= 1e-15);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(t.samples_sq[i] == doctest::Approx(t.samples[i] * t.samples[i]));
}

TEST_CASE("explicit samples must match the grid length and be finite") {
    CHECK_FAILS(Errc::LengthMismatch, template_from_samples("t", {1.0, 2.0}, 4));
    CHECK_FAILS(Errc::SpecInvalid,
                template_from_samples("t", {1.0, 2.0, std::nan(""), 0.0}, 4));
    const VoltageTemplate t = template_from_samples("t", {1.0, -2.0, 0.5, 0.0}, 4);
    CHECK(t.samples_sq[1] == doctest::Approx(4.0));
}

TEST_CASE("fourier row at k=0 is the plain sum") {
    const TimeGrid g = build_grid(8, 50.0);
    const FourierRow r = build_fourier_row(g, 0);
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(r.cos_row[i] == 1.0);
        CHECK(r.sin_row[i] == 0.0);
    }
}

TEST_CASE("fourier rows are orthogonal on the grid") {
    const TimeGrid g = build_grid(16, 50.0);
    const FourierRow r1 = build_fourier_row(g, 1);
    const FourierRow r3 = build_fourier_row(g, 3);
    double cc = 0.0, cs = 0.0, c1c1 = 0.0, s1s1 = 0.0;
    for (std::size_t i = 0; i < 16; ++i) {
        cc += r1.cos_row[i] * r3.cos_row[i];
        cs += r1.cos_row[i] * r1.sin_row[i];
        c1c1 += r1.cos_row[i] * r1.cos_row[i];
        s1s1 += r1.sin_row[i] * r1.sin_row[i];
    }
    CHECK(std::abs(cc) <= 1e-12);
    CHECK(std::abs(cs) <= 1e-12);
    CHECK(c1c1 == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(s1s1 == doctest::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("aliased harmonics are rejected") {
    const TimeGrid g = build_grid(8, 50.0);
    CHECK_FAILS(Errc::AliasedHarmonic, build_fourier_row(g, 4));  // 2k = n
    CHECK_FAILS(Errc::AliasedHarmonic, build_fourier_row(g, -1));
    CHECK(build_fourier_row(g, 3).k == 3);
}

TEST_CASE("level vectors") {
    const LevelVector fw = LevelVector::for_free_wheel(true);
    REQUIRE(fw.size() == 3);
    CHECK(fw.levels[0] == -1.0);
    CHECK(fw.levels[1] == 0.0);
    CHECK(fw.levels[2] == 1.0);
    CHECK(fw.zero_index == 1);
    CHECK(fw.has_free_wheel());
    CHECK(fw.magnitudes[0] == 1.0);
    CHECK(fw.magnitudes[1] == 0.0);
    CHECK(fw.index_of_sign(+1) == 2);
    CHECK(fw.index_of_sign(-1) == 0);

    const LevelVector hard = LevelVector::for_free_wheel(false);
    REQUIRE(hard.size() == 2);
    CHECK(!hard.has_free_wheel());
    CHECK(hard.levels[0] == -1.0);
    CHECK(hard.levels[1] == 1.0);
}

TEST_CASE("line voltage templates telescope to zero") {
    const TimeGrid g = build_grid(192, 50.0);
    const auto lines = line_voltage_templates(g);
    CHECK(lines[0].label == "s12");
    double worst = 0.0;
    for (std::size_t i = 0; i < g.n; ++i)
        worst = std::max(worst, std::abs(lines[0].samples[i] + lines[1].samples[i] +
                                         lines[2].samples[i]));
    CHECK(worst <= 1e-12);
    // Line amplitude is sqrt(3) for unit phases.
    double peak = 0.0;
    for (double v : lines[0].samples) peak = std::max(peak, std::abs(v));
    CHECK(peak == doctest::Approx(std::sqrt(3.0)).epsilon(1e-3));
}

TEST_CASE("custom phase supplies feed the line differences") {
    const TimeGrid g = build_grid(4, 50.0);
    const auto lines = line_voltage_templates(g, {1.0, 1.0, 1.0, 1.0}, {0.0, 0.0, 0.0, 0.0},
                                              {0.5, 0.5, 0.5, 0.5});
    CHECK(lines[0].samples[0] == doctest::Approx(1.0));   // s12 = p1 - p2
    CHECK(lines[1].samples[0] == doctest::Approx(-0.5));  // s23 = p2 - p3
    CHECK(lines[2].samples[0] == doctest::Approx(-0.5));  // s31 = p3 - p1
    CHECK_FAILS(Errc::LengthMismatch,
                line_voltage_templates(g, {1.0}, {0.0, 0.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 0.0}));
}

} // TEST_SUITE
