#pragma once

/**
 * @file ratlp.hpp
 * @brief Dense two-phase tableau simplex, exact over the rationals.
 *
 * Problems are small (tens of variables and rows), so the tableau is dense
 * and Bland's rule is always on. The same code runs over doubles for the
 * sweep's floating-point pre-screen; only the exact solve() is authoritative.
 */

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zmtile/rational.hpp"

namespace zmtile {

enum class Relation { le, ge, eq };

struct LpConstraint {
    std::vector<Rational> coeffs;
    Relation rel = Relation::le;
    Rational rhs;
};

/// maximize objective . x + objective_offset subject to constraints and bounds.
/// Variables without bounds are free.
struct LpProblem {
    std::size_t num_vars = 0;
    std::vector<std::string> names;
    std::vector<Rational> objective;
    Rational objective_offset;
    std::vector<LpConstraint> constraints;
    std::vector<std::optional<Rational>> lower;
    std::vector<std::optional<Rational>> upper;

    explicit LpProblem(std::size_t n = 0);

    std::size_t add_variable(std::string name, std::optional<Rational> lo = std::nullopt,
                             std::optional<Rational> hi = std::nullopt);
    void add_constraint(std::vector<Rational> coeffs, Relation rel, Rational rhs);

    /// Throws InvalidInput on length mismatches or an empty problem.
    void validate() const;
};

enum class LpStatus { optimal, infeasible, unbounded };

std::string to_string(LpStatus s);

struct LpResult {
    LpStatus status = LpStatus::infeasible;
    Rational value;                 ///< objective value when optimal
    std::vector<Rational> witness;  ///< optimal point when optimal
    std::size_t pivots = 0;
};

struct FloatLpResult {
    LpStatus status = LpStatus::infeasible;
    double value = 0.0;
    std::vector<double> witness;
    std::size_t pivots = 0;
};

struct SolveOptions {
    /// 0 means "use ZMTILE_MAX_LP_PIVOTS or the built-in default".
    std::size_t max_pivots = 0;
};

/// Exact optimum. Throws ResourceLimit if the pivot ceiling is hit.
LpResult solve(const LpProblem& problem, const SolveOptions& options = {});

/// Same algorithm in double precision with absolute tolerance 1e-9.
FloatLpResult solve_float(const LpProblem& problem, const SolveOptions& options = {});

/// True iff x satisfies every constraint and bound exactly.
bool is_feasible_point(const LpProblem& problem, const std::vector<Rational>& x);
Rational objective_at(const LpProblem& problem, const std::vector<Rational>& x);

/// Pivot ceiling from the environment (ZMTILE_MAX_LP_PIVOTS), default 100000.
std::size_t default_max_pivots();

}  // namespace zmtile
