#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rectiplan/error.hpp"

namespace rectiplan {

enum class LpStatus { Optimal, Infeasible, Unbounded };

const char* lp_status_name(LpStatus status);

// One linear row: coeffs . x (= or <=) rhs.
struct LinearRow {
    std::vector<double> coeffs;
    double rhs = 0.0;
};

// Dense linear program
//
//   min  cost . x
//   s.t. eq_rows:   coeffs . x  = rhs
//        ineq_rows: coeffs . x <= rhs
//        lower_bounds <= x <= upper_bounds
//
// Lower bounds default to 0 and must be finite; upper bounds default to +inf.
struct LinearProgram {
    std::size_t num_vars = 0;
    std::vector<double> cost;
    std::vector<LinearRow> eq_rows;
    std::vector<LinearRow> ineq_rows;
    std::vector<double> lower_bounds;
    std::vector<double> upper_bounds;

    explicit LinearProgram(std::size_t vars = 0);

    // Throws Errc::MalformedProgram on dimension mismatch or non-finite data.
    void validate() const;
};

struct SolveOptions {
    double feas_tol = 1e-8;
    double opt_tol = 1e-7;
};

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    std::vector<double> x;   // present iff Optimal
    double objective = 0.0;  // valid iff Optimal
};

// Residuals of a candidate point, evaluated with plain floating arithmetic
// and no tolerances applied.
struct PointCheck {
    double max_eq_residual = 0.0;
    double max_ineq_violation = 0.0;
    double max_bound_violation = 0.0;
    double objective = 0.0;
};

// Two-phase dense tableau simplex. Dantzig pricing with a switch to Bland's
// rule after a degenerate stall, which guarantees termination. Fully
// deterministic: the same program yields the same solution bit for bit.
// Throws Errc::NumericalFailure instead of returning an unverified point.
LpSolution solve_lp(const LinearProgram& lp, const SolveOptions& opts = {});

PointCheck check_point(const LinearProgram& lp, std::span<const double> x);

} // namespace rectiplan
