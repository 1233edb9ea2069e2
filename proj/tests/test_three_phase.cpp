#include "rectiplan/three_phase.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "support.hpp"

using namespace rectiplan;

namespace {

ThreePhaseSpec base_spec(std::size_t n) {
    ThreePhaseSpec s;
    s.n = n;
    s.free_wheel = true;
    s.dc_target = 0.8;
    s.lambda = 10.0;
    return s;
}

// Grid mean of the pointwise best (largest) attainable line voltage: at each
// index pick the pair and sign with the largest |s_ij|.
double envelope_mean(const TimeGrid& g) {
    const auto lines = line_voltage_templates(g);
    double acc = 0.0;
    for (std::size_t i = 0; i < g.n; ++i)
        acc += std::max({std::abs(lines[0].samples[i]), std::abs(lines[1].samples[i]),
                         std::abs(lines[2].samples[i])});
    return acc / static_cast<double>(g.n);
}

} // namespace

TEST_SUITE("three_phase") {

TEST_CASE("leg state tables") {
    CHECK(leg_pair(LegState::Free) == -1);
    CHECK(leg_level(LegState::Free) == 0);
    CHECK(leg_pair(LegState::P12Pos) == 0);
    CHECK(leg_pair(LegState::P23Neg) == 1);
    CHECK(leg_pair(LegState::P31Pos) == 2);
    CHECK(leg_level(LegState::P12Pos) == 1);
    CHECK(leg_level(LegState::P23Neg) == -1);

    const auto free_currents = leg_phase_currents(LegState::Free);
    CHECK(free_currents == std::array<int, 3>{0, 0, 0});
    CHECK(leg_phase_currents(LegState::P12Pos) == std::array<int, 3>{1, -1, 0});
    CHECK(leg_phase_currents(LegState::P31Pos) == std::array<int, 3>{-1, 0, 1});
    CHECK(leg_phase_currents(LegState::P23Neg) == std::array<int, 3>{0, -1, 1});
    CHECK(std::string(leg_state_name(LegState::Free)) == "FREE");
    CHECK(std::string(leg_state_name(LegState::P12Pos)) == "P12+");
    CHECK(std::string(leg_state_name(LegState::P31Neg)) == "P31-");
}

TEST_CASE("row and variable counts") {
    ThreePhaseSpec s = base_spec(16);
    s.voltage_harmonics[2] = {};
    s.voltage_harmonics[4] = {};
    s.voltage_harmonics[6] = {};
    const TimeGrid g = build_grid(16, 50.0);
    const LinearProgram lp = build_three_phase_lp(s, g);
    CHECK(lp.num_vars == 144);  // 3 matrices, 16 rows, 3 levels
    CHECK(lp.eq_rows.size() == 26);  // 16 sums + 3 means + 1 DC + 6 bindings
    CHECK(lp.ineq_rows.empty());
}

TEST_CASE("homogeneous spec is satisfied by the idle bridge") {
    ThreePhaseSpec s = base_spec(24);
    s.dc_target = 0.0;
    s.current_zero_harmonics = {5, 7};
    const TimeGrid g = build_grid(24, 50.0);
    const ThreePhaseSolve r = solve_three_phase(s, g);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.scheme->objective == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("unreachable dc is infeasible and matches the envelope bound") {
    ThreePhaseSpec s = base_spec(48);
    s.dc_target = 1.7;
    const TimeGrid g = build_grid(48, 50.0);
    CHECK(solve_three_phase(s, g).status == LpStatus::Infeasible);

    const DcRange range = achievable_dc_range_three(s, g);
    REQUIRE(range.feasible);
    CHECK(range.max_dc == doctest::Approx(envelope_mean(g)).epsilon(1e-9));
    CHECK(range.max_dc < 1.7);
}

TEST_CASE("dc 0.8 without free-wheeling is feasible") {
    ThreePhaseSpec s = base_spec(48);
    s.free_wheel = false;
    const TimeGrid g = build_grid(48, 50.0);
    const ThreePhaseSolve r = solve_three_phase(s, g);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.scheme->m == 2);
    const ThreeSchemeResiduals res = verify_three_scheme(s, g, *r.scheme);
    CHECK(res.worst() <= 1e-7);
}

TEST_CASE("solved schemes satisfy kirchhoff and zero phase means") {
    ThreePhaseSpec s = base_spec(48);
    s.voltage_harmonics[2] = {};
    const TimeGrid g = build_grid(48, 50.0);
    const ThreePhaseSolve r = solve_three_phase(s, g);
    REQUIRE(r.status == LpStatus::Optimal);
    const ThreeSchemeResiduals res = verify_three_scheme(s, g, *r.scheme);
    CHECK(res.max_kirchhoff <= 1e-9);
    CHECK(res.max_phase_mean <= 1e-8);
    CHECK(res.dc_residual <= 1e-6);
    CHECK(res.max_voltage_binding <= 1e-6);
    CHECK(res.max_row_sum_residual <= 1e-8);
    CHECK(res.min_z >= -1e-8);
}

TEST_CASE("output voltage of hand-built schemes") {
    const TimeGrid g = build_grid(12, 50.0);
    const auto lines = line_voltage_templates(g);

    std::vector<LegState> idle(12, LegState::Free);
    for (double v : output_voltage_three(idle, lines)) CHECK(v == 0.0);

    // Conduct pair 12 positively at one index; the output picks up s12 there.
    std::vector<LegState> one = idle;
    one[2] = LegState::P12Pos;
    const std::vector<double> v = output_voltage_three(one, lines);
    CHECK(v[2] == doctest::Approx(lines[0].samples[2]).epsilon(1e-12));
    CHECK(v[3] == 0.0);

    // Against explicit samples the gated value is exactly the sample.
    const TimeGrid g4 = build_grid(4, 50.0);
    const auto custom = line_voltage_templates(g4, {1.4, 0.0, 0.0, 0.0}, {0.2, 0.0, 0.0, 0.0},
                                               {0.0, 0.0, 0.0, 0.0});
    std::vector<LegState> pick(4, LegState::Free);
    pick[0] = LegState::P12Pos;
    CHECK(output_voltage_three(pick, custom)[0] == doctest::Approx(1.2));
}

TEST_CASE("envelope-following scheme averages to the six-pulse dc") {
    const TimeGrid g = build_grid(192, 50.0);
    const auto lines = line_voltage_templates(g);
    std::vector<LegState> states(192);
    const LegState pos[3] = {LegState::P12Pos, LegState::P23Pos, LegState::P31Pos};
    const LegState neg[3] = {LegState::P12Neg, LegState::P23Neg, LegState::P31Neg};
    for (std::size_t i = 0; i < 192; ++i) {
        int best = 0;
        for (int p = 1; p < 3; ++p)
            if (std::abs(lines[p].samples[i]) > std::abs(lines[best].samples[i])) best = p;
        states[i] = lines[best].samples[i] >= 0.0 ? pos[best] : neg[best];
    }
    const std::vector<double> v = output_voltage_three(states, lines);
    double mean = 0.0;
    for (double u : v) mean += u;
    mean /= 192.0;
    CHECK(mean == doctest::Approx(1.65399).epsilon(2e-3));
}

TEST_CASE("phase currents of quantized states") {
    std::vector<LegState> states = {LegState::Free, LegState::P12Pos, LegState::P31Pos,
                                    LegState::P23Neg};
    const auto i = phase_currents(states, 2.5);
    CHECK(i[0][0] == 0.0);
    CHECK(i[0][1] == 2.5);
    CHECK(i[1][1] == -2.5);
    CHECK(i[2][1] == 0.0);
    CHECK(i[0][2] == -2.5);
    CHECK(i[2][2] == 2.5);
    CHECK(i[1][3] == -2.5);
    CHECK(i[2][3] == 2.5);
    for (std::size_t nidx = 0; nidx < states.size(); ++nidx)
        CHECK(std::abs(i[0][nidx] + i[1][nidx] + i[2][nidx]) <= 1e-12);
    CHECK_FAILS(Errc::NonpositiveLoad, phase_currents(states, 0.0));
}

TEST_CASE("objective is invariant under cyclic phase relabeling") {
    const TimeGrid g = build_grid(48, 50.0);
    // Rotate phases by feeding the solver phase samples shifted one slot:
    // (p1,p2,p3) -> (p2,p3,p1) leaves the attainable set unchanged.
    std::array<std::vector<double>, 3> phases;
    for (int p = 0; p < 3; ++p) {
        phases[p].resize(48);
        for (std::size_t i = 0; i < 48; ++i)
            phases[p][i] = std::sin(g.theta[i] + 2.0 * std::numbers::pi * p / 3.0);
    }

    ThreePhaseSpec plain = base_spec(48);
    ThreePhaseSpec rotated = base_spec(48);
    rotated.phase_samples = {{phases[1], phases[2], phases[0]}};

    const auto ra = solve_three_phase(plain, g);
    const auto rb = solve_three_phase(rotated, g);
    REQUIRE(ra.status == LpStatus::Optimal);
    REQUIRE(rb.status == LpStatus::Optimal);
    CHECK(ra.scheme->objective == doctest::Approx(rb.scheme->objective).epsilon(1e-7));
}

TEST_CASE("literal sign mode changes the constraint matrix and the hash") {
    const TimeGrid g = build_grid(12, 50.0);
    ThreePhaseSpec phys = base_spec(12);
    ThreePhaseSpec lit = base_spec(12);
    lit.literal_current_signs = true;
    CHECK(phys.hash() != lit.hash());

    const LinearProgram a = build_three_phase_lp(phys, g);
    const LinearProgram b = build_three_phase_lp(lit, g);
    REQUIRE(a.eq_rows.size() == b.eq_rows.size());
    // The three zero-mean rows (right after the 12 row sums) must differ:
    // the physical form subtracts the returning pair, the literal form adds.
    bool differs = false;
    for (std::size_t r = 12; r < 15; ++r)
        if (a.eq_rows[r].coeffs != b.eq_rows[r].coeffs) differs = true;
    CHECK(differs);
}

TEST_CASE("grid commensurability advisory") {
    CHECK(base_spec(48).grid_commensurate());
    CHECK(!base_spec(16).grid_commensurate());
}

} // TEST_SUITE
