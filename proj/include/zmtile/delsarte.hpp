#pragma once

/**
 * @file delsarte.hpp
 * @brief Delsarte-type LP bounds for cliques of the Cayley graph Gamma_H.
 *
 * Gamma_H has vertex set Z_M and joins x, y when x - y lies in H. All three
 * bounds are LPs over step functions h with h(0) = 1, maximizing
 * sum_z h(z) = sum_m c_m |R_m| subject to h^ >= 0 and:
 *   plus        c_m >= 0 on H, c_m = 0 off H
 *   minus       c_m free on H, c_m <= 0 off H
 *   delta_plus  c_m >= delta on H, c_m = 0 off H
 */

#include <cstdint>
#include <optional>

#include "zmtile/class_set.hpp"
#include "zmtile/fourier.hpp"
#include "zmtile/rational.hpp"
#include "zmtile/ratlp.hpp"
#include "zmtile/step_fn.hpp"

namespace zmtile {

enum class BoundKind { plus, minus, delta_plus };

std::string to_string(BoundKind kind);

/// H' = (classes not in H) + {M}.
ClassSet standard_complement(const ClassSet& H);

/// Product of p over prime powers p^a with R_{M/p^a} in H.
int64_t k_of(const ClassSet& H);

/// 1 / (M phi(M)).
Rational delta_M(const Modulus& mod);
/// 1 / (M^2 phi(M)).
Rational delta_screen(const Modulus& mod);

/// The LP behind a bound. Variables are c_m for m != M, in divisor order.
LpProblem delsarte_lp(const ClassSet& H, BoundKind kind, const Rational& delta, const StepFourierMatrix& T);

struct BoundResult {
    bool feasible = false;
    Rational value;
    std::optional<StepFunction> extremal;
};

/// delta is only read for delta_plus (and must then be positive).
BoundResult delsarte_bound(const ClassSet& H, BoundKind kind, const Rational& delta = Rational());
BoundResult delsarte_bound(const ClassSet& H, BoundKind kind, const Rational& delta, const StepFourierMatrix& T);

/// Float optimum of the same LP, nullopt when infeasible.
std::optional<double> delsarte_bound_float(const ClassSet& H, BoundKind kind, const Rational& delta,
                                           const StepFourierMatrix& T);

/// Largest M accepted by clique_number (ZMTILE_MAX_CLIQUE_M, default 512).
int64_t max_clique_modulus();

/// Exact clique number of Gamma_H. Throws ResourceLimit above the bound.
int64_t clique_number(const ClassSet& H);
/// A maximum clique containing 0, ascending.
std::vector<int64_t> maximum_clique(const ClassSet& H);

struct ScreenReport {
    Rational delta_used;
    int64_t k_H = 1;
    /// nullopt: infeasible (delta too large).
    std::optional<Rational> d_delta_plus;
    std::optional<Rational> d_minus;
    std::optional<Rational> d_plus;
    /// False when d_plus was inferred from d_delta_plus <= d_plus <= d_minus.
    bool d_plus_solved = false;
    bool passes = false;
};

/// Cheapest first: D^{delta+}, then D^-, stopping at the first value that
/// differs from k_H. D^+ is solved only when solve_plus is set.
ScreenReport screen(const ClassSet& H, const Rational& delta, bool solve_plus = false);
ScreenReport screen(const ClassSet& H, const Rational& delta, const StepFourierMatrix& T, bool solve_plus = false);

}  // namespace zmtile
