#include "rectiplan/oracle.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace rectiplan {

namespace {

constexpr double kIntervalSlack = 1e-12;

// One linear feasibility row over (position, state) choices: the scheme value
// is sum_i w[i*states + d_i] and must land in [lo, hi].
struct OracleRow {
    std::vector<double> w;
    double lo = 0.0;
    double hi = 0.0;
};

struct OracleProblem {
    std::size_t n = 0;
    std::size_t states = 0;
    std::vector<OracleRow> rows;
    std::vector<double> cost;  // same (position, state) layout
};

// Lexicographic odometer over states^n with prefix accumulators, so one step
// normally touches only the last digit. The first strict cost improvement is
// kept, which on ties leaves the lexicographically smallest scheme in place.
struct EnumerationOutcome {
    std::optional<double> best_cost;
    std::vector<int> best_digits;
    std::uint64_t num_feasible = 0;
    std::uint64_t num_enumerated = 0;
};

EnumerationOutcome run_enumeration(const OracleProblem& prob) {
    const std::size_t n = prob.n;
    const std::size_t states = prob.states;
    const std::size_t rows = prob.rows.size();

    std::vector<int> digits(n, 0);
    // acc[(i)*(rows+1) + r] = contribution of digits[0..i-1] to row r;
    // slot `rows` carries the cost.
    std::vector<double> acc((n + 1) * (rows + 1), 0.0);
    auto refresh_from = [&](std::size_t pos) {
        for (std::size_t i = pos; i < n; ++i) {
            const double* base = &acc[i * (rows + 1)];
            double* next = &acc[(i + 1) * (rows + 1)];
            const std::size_t cell = i * states + static_cast<std::size_t>(digits[i]);
            for (std::size_t r = 0; r < rows; ++r) next[r] = base[r] + prob.rows[r].w[cell];
            next[rows] = base[rows] + prob.cost[cell];
        }
    };
    refresh_from(0);

    EnumerationOutcome out;
    for (;;) {
        ++out.num_enumerated;
        const double* total = &acc[n * (rows + 1)];
        bool feasible = true;
        for (std::size_t r = 0; r < rows; ++r)
            if (total[r] < prob.rows[r].lo || total[r] > prob.rows[r].hi) {
                feasible = false;
                break;
            }
        if (feasible) {
            ++out.num_feasible;
            if (!out.best_cost || total[rows] < *out.best_cost + 1e-12) {
                // Recompute the candidate's cost from scratch; the running sum
                // carries rounding from millions of incremental updates.
                double exact = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    exact += prob.cost[i * states + static_cast<std::size_t>(digits[i])];
                if (!out.best_cost || exact < *out.best_cost) {
                    out.best_cost = exact;
                    out.best_digits = digits;
                }
            }
        }

        std::size_t pos = n;
        while (pos > 0 && digits[pos - 1] == static_cast<int>(states) - 1) {
            digits[pos - 1] = 0;
            --pos;
        }
        if (pos == 0) break;
        ++digits[pos - 1];
        refresh_from(pos - 1);
    }
    return out;
}

void push_projection_rows(OracleProblem& prob, const std::vector<double>& signal_weight,
                          const TimeGrid& grid, int k, double target_re, double target_im,
                          double tol) {
    // signal_weight[(i, s)] is the signal value whose harmonic k is pinned.
    const FourierRow fr = build_fourier_row(grid, k);
    const double dn = static_cast<double>(grid.n);
    for (int part = 0; part < 2; ++part) {
        const auto& proj = part == 0 ? fr.cos_row : fr.sin_row;
        OracleRow row;
        row.w.resize(signal_weight.size());
        for (std::size_t i = 0; i < grid.n; ++i)
            for (std::size_t s = 0; s < prob.states; ++s)
                row.w[i * prob.states + s] = proj[i] * signal_weight[i * prob.states + s] / dn;
        const double target = (part == 0 ? target_re : target_im) / dn;
        row.lo = target - tol;
        row.hi = target + tol;
        prob.rows.push_back(std::move(row));
    }
}

void push_dc_row(OracleProblem& prob, std::vector<double> w, double dc_target,
                 const std::optional<std::pair<double, double>>& interval, double tol) {
    OracleRow row;
    row.w = std::move(w);
    if (interval) {
        row.lo = interval->first - kIntervalSlack;
        row.hi = interval->second + kIntervalSlack;
    } else {
        row.lo = dc_target - tol;
        row.hi = dc_target + tol;
    }
    prob.rows.push_back(std::move(row));
}

} // namespace

OracleResult enumerate_single(const SinglePhaseSpec& spec, const TimeGrid& grid,
                              double tolerance) {
    spec.validate(grid);
    if (grid.n > kOracleMaxSingleN)
        fail(Errc::TooLarge, "single-phase enumeration is capped at n = " +
                                 std::to_string(kOracleMaxSingleN));
    const LevelVector levels = LevelVector::for_free_wheel(spec.free_wheel);
    const VoltageTemplate supply = spec.supply_template(grid);
    const std::size_t n = grid.n;
    const std::size_t states = levels.size();
    const double dn = static_cast<double>(n);

    OracleProblem prob;
    prob.n = n;
    prob.states = states;
    prob.cost.resize(n * states);
    std::vector<double> current_w(n * states), voltage_w(n * states), dc_w(n * states);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t s = 0; s < states; ++s) {
            const std::size_t cell = i * states + s;
            prob.cost[cell] =
                (1.0 + spec.lambda * supply.samples_sq[i]) * levels.magnitudes[s] / dn;
            current_w[cell] = levels.levels[s];
            voltage_w[cell] = supply.samples[i] * levels.levels[s];
            dc_w[cell] = voltage_w[cell] / dn;
        }

    for (int k : spec.current_zero_harmonics)
        push_projection_rows(prob, current_w, grid, k, 0.0, 0.0, tolerance);
    if (spec.current_zero_mean) {
        OracleRow row;
        row.w.resize(n * states);
        for (std::size_t cell = 0; cell < n * states; ++cell)
            row.w[cell] = current_w[cell] / dn;
        row.lo = -tolerance;
        row.hi = tolerance;
        prob.rows.push_back(std::move(row));
    }
    push_dc_row(prob, dc_w, spec.dc_target, spec.dc_interval, tolerance);
    for (const auto& [l, target] : spec.voltage_harmonics)
        push_projection_rows(prob, voltage_w, grid, l, target.re, target.im, tolerance);

    const EnumerationOutcome got = run_enumeration(prob);
    OracleResult out;
    out.num_feasible = got.num_feasible;
    out.num_enumerated = got.num_enumerated;
    if (got.best_cost) {
        out.best_cost = got.best_cost;
        QuantizedSingle q;
        q.levels.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            q.levels[i] = levels.levels[static_cast<std::size_t>(got.best_digits[i])];
        q.spec_hash = spec.hash();
        q.relaxed_objective = *got.best_cost;
        out.best_single = std::move(q);
    }
    return out;
}

OracleResult enumerate_three(const ThreePhaseSpec& spec, const TimeGrid& grid,
                             double tolerance) {
    spec.validate(grid);
    if (grid.n > kOracleMaxThreeN)
        fail(Errc::TooLarge, "three-phase enumeration is capped at n = " +
                                 std::to_string(kOracleMaxThreeN));
    if (spec.literal_current_signs)
        fail(Errc::SpecInvalid,
             "enumeration models physical bridge states; only the conserving sign "
             "convention is supported");
    const std::array<VoltageTemplate, 3> lines = spec.line_templates(grid);
    const std::size_t n = grid.n;

    std::vector<LegState> state_list;
    if (spec.free_wheel) state_list.push_back(LegState::Free);
    for (int s = 1; s < 7; ++s) state_list.push_back(static_cast<LegState>(s));
    const std::size_t states = state_list.size();
    const double dn = static_cast<double>(n);

    OracleProblem prob;
    prob.n = n;
    prob.states = states;
    prob.cost.resize(n * states);
    std::array<std::vector<double>, 3> phase_w;  // unit phase currents
    for (auto& w : phase_w) w.resize(n * states);
    std::vector<double> voltage_w(n * states), dc_w(n * states);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t s = 0; s < states; ++s) {
            const LegState st = state_list[s];
            const std::size_t cell = i * states + s;
            const int pair = leg_pair(st);
            const int level = leg_level(st);
            const auto x = leg_phase_currents(st);
            for (int p = 0; p < 3; ++p) phase_w[p][cell] = x[static_cast<std::size_t>(p)];
            if (pair >= 0) {
                const auto& line = lines[static_cast<std::size_t>(pair)];
                voltage_w[cell] = line.samples[i] * level;
                prob.cost[cell] =
                    (1.0 + 0.5 * spec.lambda * line.samples_sq[i]) * std::abs(level) / dn;
            }
            dc_w[cell] = voltage_w[cell] / dn;
        }

    for (int p = 0; p < 3; ++p) {
        OracleRow row;
        row.w.resize(n * states);
        for (std::size_t cell = 0; cell < n * states; ++cell)
            row.w[cell] = phase_w[static_cast<std::size_t>(p)][cell] / dn;
        row.lo = -tolerance;
        row.hi = tolerance;
        prob.rows.push_back(std::move(row));
    }
    for (int k : spec.current_zero_harmonics)
        for (int p = 0; p < 3; ++p)
            push_projection_rows(prob, phase_w[static_cast<std::size_t>(p)], grid, k, 0.0, 0.0,
                                 tolerance);
    {
        OracleRow row;
        row.w = dc_w;
        if (spec.dc_interval) {
            row.lo = spec.dc_interval->first - kIntervalSlack;
            row.hi = spec.dc_interval->second + kIntervalSlack;
        } else {
            row.lo = spec.dc_target - tolerance;
            row.hi = spec.dc_target + tolerance;
        }
        prob.rows.push_back(std::move(row));
    }
    for (const auto& [l, target] : spec.voltage_harmonics)
        push_projection_rows(prob, voltage_w, grid, l, target.re, target.im, tolerance);

    const EnumerationOutcome got = run_enumeration(prob);
    OracleResult out;
    out.num_feasible = got.num_feasible;
    out.num_enumerated = got.num_enumerated;
    if (got.best_cost) {
        out.best_cost = got.best_cost;
        QuantizedThree q;
        q.states.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            q.states[i] = state_list[static_cast<std::size_t>(got.best_digits[i])];
        q.spec_hash = spec.hash();
        q.relaxed_objective = *got.best_cost;
        out.best_three = std::move(q);
    }
    return out;
}

} // namespace rectiplan
