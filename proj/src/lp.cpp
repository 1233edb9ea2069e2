#include "rectiplan/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace rectiplan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-11;  // smallest pivot accepted by the ratio test
constexpr double kZeroTol = 1e-12;   // column entries below this count as zero
constexpr double kDualTol = 1e-10;   // reduced-cost threshold for optimality
constexpr double kDegenTol = 1e-11;  // step sizes below this count as degenerate
constexpr int kStallLimit = 64;      // degenerate pivots before switching to Bland
constexpr long kMaxIterations = 200000;

struct Tableau {
    std::size_t nrows = 0;
    std::size_t ncols = 0;  // structural + slack + artificial columns
    std::size_t nstruct = 0;
    std::size_t art_begin = 0;  // first artificial column
    std::vector<double> a;      // nrows x ncols, row major
    std::vector<double> rhs;
    std::vector<int> basis;     // basic column of each row, -1 for dropped rows
    std::vector<char> live;     // rows still participating
    std::vector<char> banned;   // columns excluded from pricing
    std::vector<double> d1;     // phase-1 reduced costs
    std::vector<double> d2;     // phase-2 reduced costs

    double* row(std::size_t r) { return a.data() + r * ncols; }
    const double* row(std::size_t r) const { return a.data() + r * ncols; }
};

// Pivot on (pr, pc): normalizes the pivot row, eliminates the column from all
// other live rows and from the active reduced-cost rows. Entries in the pivot
// column are set to exact zeros so basic columns stay exact unit vectors.
void pivot(Tableau& t, std::size_t pr, std::size_t pc, bool update_d1) {
    double* prow = t.row(pr);
    const double inv = 1.0 / prow[pc];
    for (std::size_t j = 0; j < t.ncols; ++j) prow[j] *= inv;
    prow[pc] = 1.0;
    t.rhs[pr] *= inv;

    for (std::size_t r = 0; r < t.nrows; ++r) {
        if (r == pr || !t.live[r]) continue;
        double* arow = t.row(r);
        const double f = arow[pc];
        if (f == 0.0) continue;
        for (std::size_t j = 0; j < t.ncols; ++j) arow[j] -= f * prow[j];
        arow[pc] = 0.0;
        t.rhs[r] -= f * t.rhs[pr];
    }

    auto eliminate = [&](std::vector<double>& d) {
        const double f = d[pc];
        if (f == 0.0) return;
        for (std::size_t j = 0; j < t.ncols; ++j) d[j] -= f * prow[j];
        d[pc] = 0.0;
    };
    if (update_d1) eliminate(t.d1);
    eliminate(t.d2);

    const int leaving = t.basis[pr];
    t.basis[pr] = static_cast<int>(pc);
    if (leaving >= static_cast<int>(t.art_begin)) t.banned[leaving] = 1;
}

enum class LoopExit { Optimal, Unbounded };

// Core pivoting loop over the reduced-cost row d.
LoopExit simplex_loop(Tableau& t, std::vector<double>& d, bool phase1, long& budget) {
    bool bland = false;
    int stall = 0;
    for (;;) {
        if (--budget < 0) fail(Errc::NumericalFailure, "simplex iteration limit exceeded");

        int pc = -1;
        if (bland) {
            for (std::size_t j = 0; j < t.ncols; ++j) {
                if (!t.banned[j] && d[j] < -kDualTol) {
                    pc = static_cast<int>(j);
                    break;
                }
            }
        } else {
            double best = -kDualTol;
            for (std::size_t j = 0; j < t.ncols; ++j) {
                if (!t.banned[j] && d[j] < best) {
                    best = d[j];
                    pc = static_cast<int>(j);
                }
            }
        }
        if (pc < 0) return LoopExit::Optimal;

        // Ratio test: min rhs/a over rows with a usable pivot entry.
        double min_ratio = kInf;
        double max_entry = 0.0;
        for (std::size_t r = 0; r < t.nrows; ++r) {
            if (!t.live[r]) continue;
            const double v = t.row(r)[pc];
            max_entry = std::max(max_entry, v);
            if (v > kPivotTol) {
                const double num = t.rhs[r] < 0.0 ? 0.0 : t.rhs[r];
                min_ratio = std::min(min_ratio, num / v);
            }
        }
        if (min_ratio == kInf) {
            if (max_entry <= kZeroTol) {
                if (phase1) fail(Errc::NumericalFailure, "phase-1 objective unbounded");
                return LoopExit::Unbounded;
            }
            fail(Errc::NumericalFailure, "pivot candidates below tolerance");
        }

        // Among the minimum-ratio rows pick the one whose basic variable has
        // the smallest index (Bland-compatible, deterministic).
        const double tie = min_ratio + 1e-12 * (1.0 + min_ratio);
        int pr = -1;
        for (std::size_t r = 0; r < t.nrows; ++r) {
            if (!t.live[r]) continue;
            const double v = t.row(r)[pc];
            if (v <= kPivotTol) continue;
            const double num = t.rhs[r] < 0.0 ? 0.0 : t.rhs[r];
            if (num / v <= tie && (pr < 0 || t.basis[r] < t.basis[pr])) pr = static_cast<int>(r);
        }

        const double step = t.rhs[pr] < 0.0 ? 0.0 : t.rhs[pr] / t.row(pr)[pc];
        if (step <= kDegenTol) {
            if (++stall >= kStallLimit) bland = true;
        } else {
            stall = 0;
            bland = false;
        }

        pivot(t, static_cast<std::size_t>(pr), static_cast<std::size_t>(pc), phase1);
    }
}

std::string describe(std::size_t r, const char* what) {
    return std::string(what) + " at row " + std::to_string(r);
}

} // namespace

const char* lp_status_name(LpStatus status) {
    switch (status) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
    }
    return "unknown";
}

LinearProgram::LinearProgram(std::size_t vars)
    : num_vars(vars),
      cost(vars, 0.0),
      lower_bounds(vars, 0.0),
      upper_bounds(vars, kInf) {}

void LinearProgram::validate() const {
    auto check_len = [&](std::size_t len, const char* what) {
        if (len != num_vars)
            fail(Errc::MalformedProgram,
                 std::string(what) + " has length " + std::to_string(len) + ", expected " +
                     std::to_string(num_vars));
    };
    check_len(cost.size(), "cost");
    check_len(lower_bounds.size(), "lower_bounds");
    check_len(upper_bounds.size(), "upper_bounds");
    for (double c : cost)
        if (!std::isfinite(c)) fail(Errc::MalformedProgram, "non-finite cost coefficient");
    for (std::size_t i = 0; i < num_vars; ++i) {
        if (!std::isfinite(lower_bounds[i]))
            fail(Errc::MalformedProgram, "lower bound must be finite");
        if (std::isnan(upper_bounds[i]) || upper_bounds[i] == -kInf)
            fail(Errc::MalformedProgram, "invalid upper bound");
        if (lower_bounds[i] > upper_bounds[i])
            fail(Errc::MalformedProgram, "lower bound exceeds upper bound");
    }
    auto check_rows = [&](const std::vector<LinearRow>& rows, const char* what) {
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].coeffs.size() != num_vars)
                fail(Errc::MalformedProgram, describe(r, what));
            if (!std::isfinite(rows[r].rhs)) fail(Errc::MalformedProgram, describe(r, what));
            for (double c : rows[r].coeffs)
                if (!std::isfinite(c)) fail(Errc::MalformedProgram, describe(r, what));
        }
    };
    check_rows(eq_rows, "malformed equality row");
    check_rows(ineq_rows, "malformed inequality row");
}

PointCheck check_point(const LinearProgram& lp, std::span<const double> x) {
    lp.validate();
    if (x.size() != lp.num_vars)
        fail(Errc::MalformedProgram, "point length does not match num_vars");
    PointCheck out;
    auto dot = [&](const std::vector<double>& c) {
        double s = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) s += c[i] * x[i];
        return s;
    };
    for (const auto& row : lp.eq_rows)
        out.max_eq_residual = std::max(out.max_eq_residual, std::abs(dot(row.coeffs) - row.rhs));
    for (const auto& row : lp.ineq_rows)
        out.max_ineq_violation = std::max(out.max_ineq_violation, dot(row.coeffs) - row.rhs);
    out.max_ineq_violation = std::max(out.max_ineq_violation, 0.0);
    for (std::size_t i = 0; i < lp.num_vars; ++i) {
        out.max_bound_violation = std::max(out.max_bound_violation, lp.lower_bounds[i] - x[i]);
        if (lp.upper_bounds[i] < kInf)
            out.max_bound_violation = std::max(out.max_bound_violation, x[i] - lp.upper_bounds[i]);
    }
    out.max_bound_violation = std::max(out.max_bound_violation, 0.0);
    out.objective = dot(lp.cost);
    return out;
}

LpSolution solve_lp(const LinearProgram& lp, const SolveOptions& opts) {
    lp.validate();
    const std::size_t nstruct = lp.num_vars;

    // Shift x = lower + y so all variables start at zero; finite upper bounds
    // become extra inequality rows on y.
    struct WorkRow {
        std::vector<double> coeffs;  // structural part only
        double rhs = 0.0;
        bool is_eq = false;
    };
    std::vector<WorkRow> work;
    work.reserve(lp.eq_rows.size() + lp.ineq_rows.size() + nstruct);
    auto shifted_rhs = [&](const LinearRow& row) {
        double s = row.rhs;
        for (std::size_t i = 0; i < nstruct; ++i) s -= row.coeffs[i] * lp.lower_bounds[i];
        return s;
    };
    for (const auto& row : lp.eq_rows) work.push_back({row.coeffs, shifted_rhs(row), true});
    for (const auto& row : lp.ineq_rows) work.push_back({row.coeffs, shifted_rhs(row), false});
    for (std::size_t i = 0; i < nstruct; ++i) {
        if (lp.upper_bounds[i] < kInf) {
            WorkRow r;
            r.coeffs.assign(nstruct, 0.0);
            r.coeffs[i] = 1.0;
            r.rhs = lp.upper_bounds[i] - lp.lower_bounds[i];
            work.push_back(std::move(r));
        }
    }

    const std::size_t nrows = work.size();
    std::size_t nslack = 0;
    for (const auto& r : work)
        if (!r.is_eq) ++nslack;

    double rhs_scale = 1.0;
    for (const auto& r : work) rhs_scale = std::max(rhs_scale, std::abs(r.rhs));
    const double infeas_threshold = opts.feas_tol * rhs_scale;

    // Count artificial columns: every equality row gets one, and every
    // inequality row whose rhs is negative (its slack flips sign).
    std::size_t nart = 0;
    for (const auto& r : work)
        if (r.is_eq || r.rhs < 0.0) ++nart;

    Tableau t;
    t.nrows = nrows;
    t.nstruct = nstruct;
    t.art_begin = nstruct + nslack;
    t.ncols = t.art_begin + nart;
    t.a.assign(t.nrows * t.ncols, 0.0);
    t.rhs.assign(t.nrows, 0.0);
    t.basis.assign(t.nrows, -1);
    t.live.assign(t.nrows, 1);
    t.banned.assign(t.ncols, 0);
    t.d1.assign(t.ncols, 0.0);
    t.d2.assign(t.ncols, 0.0);

    std::size_t slack_idx = 0;
    std::size_t art_idx = 0;
    for (std::size_t r = 0; r < nrows; ++r) {
        double* arow = t.row(r);
        const double sign = work[r].rhs < 0.0 ? -1.0 : 1.0;
        for (std::size_t i = 0; i < nstruct; ++i) arow[i] = sign * work[r].coeffs[i];
        t.rhs[r] = sign * work[r].rhs;
        bool needs_artificial = work[r].is_eq;
        if (!work[r].is_eq) {
            arow[nstruct + slack_idx] = sign;  // slack (or surplus when negated)
            if (sign > 0.0) {
                t.basis[r] = static_cast<int>(nstruct + slack_idx);
            } else {
                needs_artificial = true;
            }
            ++slack_idx;
        }
        if (needs_artificial) {
            const std::size_t c = t.art_begin + art_idx++;
            arow[c] = 1.0;
            t.basis[r] = static_cast<int>(c);
        }
    }

    // Phase-1 reduced costs: unit cost on artificials, folded through the
    // artificial-basic rows.
    for (std::size_t c = t.art_begin; c < t.ncols; ++c) t.d1[c] = 1.0;
    for (std::size_t r = 0; r < nrows; ++r) {
        if (t.basis[r] >= static_cast<int>(t.art_begin)) {
            const double* arow = t.row(r);
            for (std::size_t j = 0; j < t.ncols; ++j) t.d1[j] -= arow[j];
        }
    }
    for (std::size_t i = 0; i < nstruct; ++i) t.d2[i] = lp.cost[i];

    long budget = kMaxIterations;

    if (nart > 0) {
        simplex_loop(t, t.d1, true, budget);

        double infeas = 0.0;
        for (std::size_t r = 0; r < nrows; ++r)
            if (t.live[r] && t.basis[r] >= static_cast<int>(t.art_begin)) infeas += t.rhs[r];
        if (infeas > infeas_threshold) return {LpStatus::Infeasible, {}, 0.0};

        // Drive remaining artificials out of the basis; rows with no usable
        // entry are redundant constraints and get dropped.
        for (std::size_t r = 0; r < nrows; ++r) {
            if (!t.live[r] || t.basis[r] < static_cast<int>(t.art_begin)) continue;
            const double* arow = t.row(r);
            std::size_t best_col = 0;
            double best_mag = 0.0;
            for (std::size_t j = 0; j < t.art_begin; ++j) {
                const double mag = std::abs(arow[j]);
                if (mag > best_mag) {
                    best_mag = mag;
                    best_col = j;
                }
            }
            if (best_mag > 1e-9) {
                pivot(t, r, best_col, true);
            } else if (std::abs(t.rhs[r]) <= infeas_threshold) {
                t.live[r] = 0;
                t.basis[r] = -1;
            } else {
                fail(Errc::NumericalFailure, describe(r, "cannot eliminate artificial"));
            }
        }
    }

    // Compact: drop artificial columns and dead rows before phase 2.
    {
        const std::size_t ncols2 = t.art_begin;
        std::size_t live_rows = 0;
        for (std::size_t r = 0; r < nrows; ++r)
            if (t.live[r]) ++live_rows;
        std::vector<double> a2;
        a2.reserve(live_rows * ncols2);
        std::vector<double> rhs2;
        std::vector<int> basis2;
        for (std::size_t r = 0; r < nrows; ++r) {
            if (!t.live[r]) continue;
            const double* arow = t.row(r);
            a2.insert(a2.end(), arow, arow + ncols2);
            rhs2.push_back(t.rhs[r]);
            basis2.push_back(t.basis[r]);
        }
        t.a = std::move(a2);
        t.rhs = std::move(rhs2);
        t.basis = std::move(basis2);
        t.nrows = live_rows;
        t.ncols = ncols2;
        t.live.assign(live_rows, 1);
        t.banned.resize(ncols2);
        t.d1.clear();
        t.d2.resize(ncols2);
    }

    if (simplex_loop(t, t.d2, false, budget) == LoopExit::Unbounded)
        return {LpStatus::Unbounded, {}, 0.0};

    std::vector<double> x(nstruct, 0.0);
    for (std::size_t r = 0; r < t.nrows; ++r) {
        const int b = t.basis[r];
        if (b >= 0 && b < static_cast<int>(nstruct)) x[b] = t.rhs[r];
    }
    for (std::size_t i = 0; i < nstruct; ++i) x[i] += lp.lower_bounds[i];

    // Never hand back an unverified point.
    const PointCheck pc = check_point(lp, x);
    const double worst =
        std::max({pc.max_eq_residual, pc.max_ineq_violation, pc.max_bound_violation});
    if (worst > opts.feas_tol)
        fail(Errc::NumericalFailure,
             "solution failed verification, residual " + std::to_string(worst));

    return {LpStatus::Optimal, std::move(x), pc.objective};
}

} // namespace rectiplan
