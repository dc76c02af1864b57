#pragma once

/**
 * @file cyclotomic.hpp
 * @brief Cyclotomic divisibility of mask polynomials F(X) = sum f(z) X^z.
 *
 * Two independent routes decide whether Phi_d divides F (exponents taken
 * mod M):
 *  - the cuboid route: fold f to Z_d and take a single d-cuboid evaluation
 *    with a vertex at 0. Valid for step functions only.
 *  - the remainder route: exact long division by the monic Phi_d.
 *
 * On top of that sit the Coven-Meyerowitz conditions (T1)/(T2) for a
 * nonnegative function and the support-level (T2) test for a class set H
 * read as supp |1_A^|^2.
 */

#include <cstdint>
#include <optional>
#include <vector>

#include "zmtile/class_set.hpp"
#include "zmtile/modulus.hpp"
#include "zmtile/rational.hpp"
#include "zmtile/step_fn.hpp"

namespace zmtile {

/// Integer coefficients of Phi_d, constant term first.
std::vector<int64_t> cyclotomic_poly(int64_t d);

/// Phi_d for every divisor d of a modulus, built on construction.
class CyclotomicTable {
public:
    explicit CyclotomicTable(Modulus mod);
    const Modulus& modulus() const noexcept { return mod_; }
    const std::vector<int64_t>& poly(int64_t d) const { return polys_[mod_.index_of(d)]; }

private:
    Modulus mod_;
    std::vector<std::vector<int64_t>> polys_;
};

/// X^c prod_i (1 - X^{d_i}) with d_i = rho_i N / p_i, living in Z_N.
struct Cuboid {
    Modulus level;
    int64_t base = 0;
    /// One entry per distinct prime of N (ascending primes), 1 <= rho_i < p_i.
    std::vector<int64_t> rho;

    /// Throws InvalidInput on out-of-range rho or a wrong count.
    Cuboid(Modulus level, int64_t base, std::vector<int64_t> rho);
    /// Vertex 0, all rho_i = 1.
    static Cuboid canonical(const Modulus& level);

    std::vector<int64_t> offsets() const;
    /// Vertices with their signs (+1 / -1), in binary-counter order of epsilon.
    std::vector<std::pair<int64_t, int>> vertices() const;
};

/// F[Delta] = sum_eps (-1)^{|eps|} f(c + sum eps_j d_j).
Rational cuboid_eval(const DenseFunction& f, const Cuboid& cuboid);

/// Phi_d | F for a step function, via fold and a single canonical cuboid.
bool divides(const StepFunction& f, int64_t d);
/// Phi_d | F for an arbitrary function, via fold and exact remainder.
bool divides(const DenseFunction& f, int64_t d);

/// F(X) mod Phi_d(X), coefficients of X^0 .. X^{phi(d)-1}.
std::vector<Rational> remainder_oracle(const DenseFunction& f, int64_t d);

/// Divisors d > 1 of M with Phi_d | F, ascending.
std::vector<int64_t> spectrum(const StepFunction& f);
std::vector<int64_t> spectrum(const DenseFunction& f);

struct CycloReport {
    std::vector<int64_t> spectrum;
    std::vector<int64_t> S_F;
    bool t1 = false;
    bool t2 = false;
    std::optional<int64_t> t2_witness;
};

/// Requires nonnegative values and positive total weight.
CycloReport t1t2_report(const StepFunction& f);
CycloReport t1t2_report(const DenseFunction& f);

/// Products s_1...s_k (k >= 2) of prime powers from `prime_powers` taken
/// from pairwise distinct primes, ascending and without repeats.
std::vector<int64_t> distinct_prime_products(const Modulus& mod, const std::vector<int64_t>& prime_powers);

/// (T2) read off H = supp |1_A^|^2: with S = {s : M/s not in H}, every
/// distinct-prime product P of S needs M/P not in H.
bool support_T2(const ClassSet& H);
/// The first offending product P in ascending order, if any.
std::optional<int64_t> support_T2_witness(const ClassSet& H);

}  // namespace zmtile
