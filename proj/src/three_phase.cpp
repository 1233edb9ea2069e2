#include "rectiplan/three_phase.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace rectiplan {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// sign[phase][pair]: contribution of pair current x_pair to phase current
// x_phase. x12 enters phase 1 and leaves phase 2, x23 enters 2 leaves 3,
// x31 enters 3 leaves 1, which conserves the load current. The literal
// variant keeps every sign positive.
std::array<std::array<double, 3>, 3> phase_signs(bool literal) {
    if (literal)
        return {{{1.0, 0.0, 1.0}, {1.0, 1.0, 0.0}, {0.0, 1.0, 1.0}}};
    return {{{1.0, 0.0, -1.0}, {-1.0, 1.0, 0.0}, {0.0, -1.0, 1.0}}};
}

std::size_t var_index(int pair, std::size_t i, std::size_t j, std::size_t n, std::size_t m) {
    return (static_cast<std::size_t>(pair) * n + i) * m + j;
}

LinearProgram assemble(const ThreePhaseSpec& spec, const TimeGrid& grid, bool include_dc,
                       std::vector<double>* dc_row_out) {
    spec.validate(grid);
    const LevelVector levels = LevelVector::for_free_wheel(spec.free_wheel);
    const std::array<VoltageTemplate, 3> lines = spec.line_templates(grid);
    const auto sgn = phase_signs(spec.literal_current_signs);
    const std::size_t n = grid.n;
    const std::size_t m = levels.size();
    const double dn = static_cast<double>(n);

    LinearProgram lp(3 * n * m);

    for (int p = 0; p < 3; ++p)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < m; ++j)
                lp.cost[var_index(p, i, j, n, m)] =
                    levels.magnitudes[j] *
                    (1.0 + 0.5 * spec.lambda * lines[p].samples_sq[i]) / dn;

    // (a) combined row sums: mass across the three pairs totals 1 per index.
    for (std::size_t i = 0; i < n; ++i) {
        LinearRow row;
        row.coeffs.assign(3 * n * m, 0.0);
        for (int p = 0; p < 3; ++p)
            for (std::size_t j = 0; j < m; ++j) row.coeffs[var_index(p, i, j, n, m)] = 1.0;
        row.rhs = 1.0;
        lp.eq_rows.push_back(std::move(row));
    }

    // (b) zero mean of each phase current. The three rows sum to zero when
    // the signed combinations are used; the solver drops the redundancy.
    for (int phase = 0; phase < 3; ++phase) {
        LinearRow row;
        row.coeffs.assign(3 * n * m, 0.0);
        for (int p = 0; p < 3; ++p) {
            if (sgn[phase][p] == 0.0) continue;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < m; ++j)
                    row.coeffs[var_index(p, i, j, n, m)] =
                        sgn[phase][p] * levels.levels[j] / dn;
        }
        row.rhs = 0.0;
        lp.eq_rows.push_back(std::move(row));
    }

    // (c) zeroed harmonics of each phase current.
    for (int k : spec.current_zero_harmonics) {
        const FourierRow fr = build_fourier_row(grid, k);
        for (int phase = 0; phase < 3; ++phase) {
            for (const auto* proj : {&fr.cos_row, &fr.sin_row}) {
                LinearRow row;
                row.coeffs.assign(3 * n * m, 0.0);
                for (int p = 0; p < 3; ++p) {
                    if (sgn[phase][p] == 0.0) continue;
                    for (std::size_t i = 0; i < n; ++i)
                        for (std::size_t j = 0; j < m; ++j)
                            row.coeffs[var_index(p, i, j, n, m)] =
                                (*proj)[i] * sgn[phase][p] * levels.levels[j];
                }
                row.rhs = 0.0;
                lp.eq_rows.push_back(std::move(row));
            }
        }
    }

    // (d) DC of the output voltage.
    std::vector<double> dc_row(3 * n * m, 0.0);
    for (int p = 0; p < 3; ++p)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < m; ++j)
                dc_row[var_index(p, i, j, n, m)] = lines[p].samples[i] * levels.levels[j] / dn;
    if (dc_row_out) *dc_row_out = dc_row;
    if (include_dc) {
        if (spec.dc_interval) {
            lp.ineq_rows.push_back({dc_row, spec.dc_interval->second});
            LinearRow lo;
            lo.coeffs.resize(3 * n * m);
            for (std::size_t i = 0; i < 3 * n * m; ++i) lo.coeffs[i] = -dc_row[i];
            lo.rhs = -spec.dc_interval->first;
            lp.ineq_rows.push_back(std::move(lo));
        } else {
            lp.eq_rows.push_back({dc_row, spec.dc_target});
        }
    }

    // (e) bound output-voltage harmonics.
    for (const auto& [l, target] : spec.voltage_harmonics) {
        const FourierRow fr = build_fourier_row(grid, l);
        for (int part = 0; part < 2; ++part) {
            const auto& proj = part == 0 ? fr.cos_row : fr.sin_row;
            LinearRow row;
            row.coeffs.assign(3 * n * m, 0.0);
            for (int p = 0; p < 3; ++p)
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < m; ++j)
                        row.coeffs[var_index(p, i, j, n, m)] =
                            proj[i] * lines[p].samples[i] * levels.levels[j];
            row.rhs = part == 0 ? target.re : target.im;
            lp.eq_rows.push_back(std::move(row));
        }
    }

    return lp;
}

} // namespace

const char* leg_state_name(LegState s) {
    switch (s) {
        case LegState::Free: return "FREE";
        case LegState::P12Pos: return "P12+";
        case LegState::P12Neg: return "P12-";
        case LegState::P23Pos: return "P23+";
        case LegState::P23Neg: return "P23-";
        case LegState::P31Pos: return "P31+";
        case LegState::P31Neg: return "P31-";
    }
    return "?";
}

int leg_pair(LegState s) {
    switch (s) {
        case LegState::Free: return -1;
        case LegState::P12Pos:
        case LegState::P12Neg: return 0;
        case LegState::P23Pos:
        case LegState::P23Neg: return 1;
        case LegState::P31Pos:
        case LegState::P31Neg: return 2;
    }
    return -1;
}

int leg_level(LegState s) {
    switch (s) {
        case LegState::Free: return 0;
        case LegState::P12Pos:
        case LegState::P23Pos:
        case LegState::P31Pos: return 1;
        case LegState::P12Neg:
        case LegState::P23Neg:
        case LegState::P31Neg: return -1;
    }
    return 0;
}

std::array<int, 3> leg_phase_currents(LegState s) {
    const int pair = leg_pair(s);
    const int level = leg_level(s);
    std::array<int, 3> x{0, 0, 0};
    if (pair < 0) return x;
    // Pair 12 enters phase 1 and leaves phase 2, etc. cyclically.
    x[pair] += level;
    x[(pair + 1) % 3] -= level;
    return x;
}

void ThreePhaseSpec::validate(const TimeGrid& grid) const {
    if (grid.n != n)
        fail(Errc::SpecInvalid, "grid has " + std::to_string(grid.n) + " samples, spec wants " +
                                    std::to_string(n));
    if (n < 4) fail(Errc::SpecInvalid, "spec needs n >= 4");
    if (!std::isfinite(dc_target)) fail(Errc::SpecInvalid, "dc_target must be finite");
    if (!(lambda >= 0.0)) fail(Errc::SpecInvalid, "lambda must be >= 0");
    auto check_harmonic = [&](int k, const char* what) {
        if (k < 0 || 2 * static_cast<std::size_t>(k) >= n)
            fail(Errc::SpecInvalid, std::string(what) + " harmonic " + std::to_string(k) +
                                        " aliases on a grid of " + std::to_string(n));
    };
    for (int k : current_zero_harmonics) {
        check_harmonic(k, "current");
        if (k == 1)
            fail(Errc::SpecInvalid, "zeroing harmonic 1 would eliminate the fundamental current");
    }
    for (const auto& [l, target] : voltage_harmonics) {
        check_harmonic(l, "voltage");
        if (!std::isfinite(target.re) || !std::isfinite(target.im))
            fail(Errc::SpecInvalid, "voltage harmonic target must be finite");
    }
    if (dc_interval) {
        if (!std::isfinite(dc_interval->first) || !std::isfinite(dc_interval->second) ||
            dc_interval->first > dc_interval->second)
            fail(Errc::SpecInvalid, "dc_interval must be a finite ordered pair");
    }
    if (phase_samples)
        for (const auto& ph : *phase_samples)
            if (ph.size() != n)
                fail(Errc::SpecInvalid, "each phase sample vector must have exactly n entries");
}

std::array<VoltageTemplate, 3> ThreePhaseSpec::line_templates(const TimeGrid& grid) const {
    if (phase_samples)
        return line_voltage_templates(grid, (*phase_samples)[0], (*phase_samples)[1],
                                      (*phase_samples)[2]);
    return line_voltage_templates(grid);
}

std::string ThreePhaseSpec::hash() const {
    std::string s = "three|n=" + std::to_string(n) + "|fw=" + (free_wheel ? "1" : "0") +
                    "|dc=" + fmt(dc_target) + "|lambda=" + fmt(lambda) +
                    "|lit=" + (literal_current_signs ? "1" : "0");
    if (dc_interval) s += "|dci=" + fmt(dc_interval->first) + "," + fmt(dc_interval->second);
    for (int k : current_zero_harmonics) s += "|ch=" + std::to_string(k);
    for (const auto& [l, t] : voltage_harmonics)
        s += "|vh=" + std::to_string(l) + ":" + fmt(t.re) + "," + fmt(t.im);
    if (phase_samples)
        for (const auto& ph : *phase_samples) {
            s += "|t:";
            for (double v : ph) s += fmt(v) + ",";
        }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(s)));
    return buf;
}

const std::vector<double>& RelaxedSchemeThree::z(int pair) const {
    switch (pair) {
        case 0: return z12;
        case 1: return z23;
        default: return z31;
    }
}

LinearProgram build_three_phase_lp(const ThreePhaseSpec& spec, const TimeGrid& grid) {
    return assemble(spec, grid, true, nullptr);
}

ThreePhaseSolve solve_three_phase(const ThreePhaseSpec& spec, const TimeGrid& grid,
                                  const SolveOptions& opts) {
    const LinearProgram lp = build_three_phase_lp(spec, grid);
    LpSolution sol = solve_lp(lp, opts);
    ThreePhaseSolve out;
    out.status = sol.status;
    if (sol.status != LpStatus::Optimal) return out;

    const LevelVector levels = LevelVector::for_free_wheel(spec.free_wheel);
    const std::array<VoltageTemplate, 3> lines = spec.line_templates(grid);
    const auto sgn = phase_signs(spec.literal_current_signs);
    const std::size_t n = grid.n;
    const std::size_t m = levels.size();

    RelaxedSchemeThree scheme;
    scheme.m = m;
    scheme.objective = sol.objective;
    scheme.z12.assign(sol.x.begin(), sol.x.begin() + static_cast<long>(n * m));
    scheme.z23.assign(sol.x.begin() + static_cast<long>(n * m),
                      sol.x.begin() + static_cast<long>(2 * n * m));
    scheme.z31.assign(sol.x.begin() + static_cast<long>(2 * n * m), sol.x.end());

    // Pair currents, then phase currents and output voltage from them.
    std::array<std::vector<double>, 3> pair_x;
    for (int p = 0; p < 3; ++p) {
        pair_x[p].resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < m; ++j) acc += scheme.z_at(p, i, j) * levels.levels[j];
            pair_x[p][i] = acc;
        }
    }
    auto combine = [&](int phase) {
        std::vector<double> x(n, 0.0);
        for (int p = 0; p < 3; ++p) {
            if (sgn[phase][p] == 0.0) continue;
            for (std::size_t i = 0; i < n; ++i) x[i] += sgn[phase][p] * pair_x[p][i];
        }
        return x;
    };
    scheme.x1 = combine(0);
    scheme.x2 = combine(1);
    scheme.x3 = combine(2);
    scheme.v_out.assign(n, 0.0);
    for (int p = 0; p < 3; ++p)
        for (std::size_t i = 0; i < n; ++i)
            scheme.v_out[i] += lines[p].samples[i] * pair_x[p][i];

    out.scheme = std::move(scheme);
    return out;
}

std::vector<double> output_voltage_three(const RelaxedSchemeThree& scheme,
                                         const std::array<VoltageTemplate, 3>& templates) {
    const std::size_t m = scheme.m;
    if (m == 0 || scheme.z12.size() % m != 0)
        fail(Errc::LengthMismatch, "scheme matrices are not N x m shaped");
    const std::size_t n = scheme.z12.size() / m;
    for (const auto& t : templates)
        if (t.samples.size() != n)
            fail(Errc::LengthMismatch, "template length does not match the scheme");
    if (scheme.z23.size() != n * m || scheme.z31.size() != n * m)
        fail(Errc::LengthMismatch, "scheme matrices differ in size");

    const LevelVector levels = LevelVector::for_free_wheel(static_cast<int>(m) == 3);
    std::vector<double> v(n, 0.0);
    for (int p = 0; p < 3; ++p)
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < m; ++j) acc += scheme.z_at(p, i, j) * levels.levels[j];
            v[i] += templates[static_cast<std::size_t>(p)].samples[i] * acc;
        }
    return v;
}

std::vector<double> output_voltage_three(std::span<const LegState> states,
                                         const std::array<VoltageTemplate, 3>& templates) {
    for (const auto& t : templates)
        if (t.samples.size() != states.size())
            fail(Errc::LengthMismatch, "template length does not match the scheme");
    std::vector<double> v(states.size(), 0.0);
    for (std::size_t i = 0; i < states.size(); ++i) {
        const int p = leg_pair(states[i]);
        if (p >= 0)
            v[i] = templates[static_cast<std::size_t>(p)].samples[i] *
                   static_cast<double>(leg_level(states[i]));
    }
    return v;
}

std::array<std::vector<double>, 3> phase_currents(const RelaxedSchemeThree& scheme,
                                                  double load_current) {
    if (!(load_current > 0.0)) fail(Errc::NonpositiveLoad, "load current must be positive");
    std::array<std::vector<double>, 3> out;
    const std::array<const std::vector<double>*, 3> xs{&scheme.x1, &scheme.x2, &scheme.x3};
    for (int p = 0; p < 3; ++p) {
        out[p].resize(xs[p]->size());
        for (std::size_t i = 0; i < out[p].size(); ++i)
            out[p][i] = load_current * (*xs[p])[i];
    }
    return out;
}

std::array<std::vector<double>, 3> phase_currents(std::span<const LegState> states,
                                                  double load_current) {
    if (!(load_current > 0.0)) fail(Errc::NonpositiveLoad, "load current must be positive");
    std::array<std::vector<double>, 3> out;
    for (auto& v : out) v.assign(states.size(), 0.0);
    for (std::size_t i = 0; i < states.size(); ++i) {
        const auto x = leg_phase_currents(states[i]);
        for (int p = 0; p < 3; ++p) out[p][i] = load_current * static_cast<double>(x[p]);
    }
    return out;
}

double ThreeSchemeResiduals::worst() const {
    return std::max({max_row_sum_residual, std::max(-min_z, 0.0), max_phase_mean, max_kirchhoff,
                     dc_residual, max_current_harmonic, max_voltage_binding});
}

ThreeSchemeResiduals verify_three_scheme(const ThreePhaseSpec& spec, const TimeGrid& grid,
                                         const RelaxedSchemeThree& scheme) {
    spec.validate(grid);
    const LevelVector levels = LevelVector::for_free_wheel(spec.free_wheel);
    const std::array<VoltageTemplate, 3> lines = spec.line_templates(grid);
    const std::size_t n = grid.n;
    const std::size_t m = levels.size();
    if (scheme.m != m || scheme.z12.size() != n * m || scheme.z23.size() != n * m ||
        scheme.z31.size() != n * m || scheme.x1.size() != n || scheme.x2.size() != n ||
        scheme.x3.size() != n)
        fail(Errc::LengthMismatch, "scheme dimensions do not match the spec");

    ThreeSchemeResiduals res;
    res.min_z = scheme.z12.empty() ? 0.0 : scheme.z12[0];
    for (std::size_t i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (int p = 0; p < 3; ++p)
            for (std::size_t j = 0; j < m; ++j) {
                row_sum += scheme.z_at(p, i, j);
                res.min_z = std::min(res.min_z, scheme.z_at(p, i, j));
            }
        res.max_row_sum_residual = std::max(res.max_row_sum_residual, std::abs(row_sum - 1.0));
    }

    const std::array<const std::vector<double>*, 3> xs{&scheme.x1, &scheme.x2, &scheme.x3};
    for (int p = 0; p < 3; ++p) {
        double mean = 0.0;
        for (double v : *xs[p]) mean += v;
        res.max_phase_mean = std::max(res.max_phase_mean,
                                      std::abs(mean / static_cast<double>(n)));
    }
    for (std::size_t i = 0; i < n; ++i)
        res.max_kirchhoff = std::max(res.max_kirchhoff,
                                     std::abs(scheme.x1[i] + scheme.x2[i] + scheme.x3[i]));

    const std::vector<double> v = output_voltage_three(scheme, lines);
    double dc = 0.0;
    for (double s : v) dc += s;
    dc /= static_cast<double>(n);
    if (spec.dc_interval) {
        res.dc_residual =
            std::max({spec.dc_interval->first - dc, dc - spec.dc_interval->second, 0.0});
    } else {
        res.dc_residual = std::abs(dc - spec.dc_target);
    }

    auto projections = [&](std::span<const double> signal, int k) {
        double c = 0.0, s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double arg = kTwoPi * static_cast<double>(k) * static_cast<double>(i) /
                               static_cast<double>(n);
            c += std::cos(arg) * signal[i];
            s += std::sin(arg) * signal[i];
        }
        return std::pair{c, s};
    };
    for (int k : spec.current_zero_harmonics)
        for (const auto* x : xs) {
            auto [c, s] = projections(*x, k);
            res.max_current_harmonic = std::max(res.max_current_harmonic, std::hypot(c, s));
        }
    for (const auto& [l, target] : spec.voltage_harmonics) {
        auto [c, s] = projections(v, l);
        res.max_voltage_binding =
            std::max(res.max_voltage_binding, std::hypot(c - target.re, s - target.im));
    }
    return res;
}

DcRange achievable_dc_range_three(const ThreePhaseSpec& spec, const TimeGrid& grid,
                                  const SolveOptions& opts) {
    std::vector<double> dc_row;
    LinearProgram lp = assemble(spec, grid, false, &dc_row);
    DcRange out;

    lp.cost = dc_row;
    LpSolution lo = solve_lp(lp, opts);
    if (lo.status != LpStatus::Optimal) return out;
    for (auto& c : lp.cost) c = -c;
    LpSolution hi = solve_lp(lp, opts);
    if (hi.status != LpStatus::Optimal) return out;

    out.feasible = true;
    out.min_dc = lo.objective;
    out.max_dc = -hi.objective;
    return out;
}

} // namespace rectiplan
