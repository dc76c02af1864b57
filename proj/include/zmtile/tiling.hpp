#pragma once

/**
 * @file tiling.hpp
 * @brief Tilings A (+) B = Z_M, pd-tilings and functional pd-tilings.
 *
 * pd_tile_feasible() decides whether some f >= 0 with f(0) = 1 and f^ >= 0
 * satisfies 1_A * f = 1. Such an f may be dense, but averaging it over the
 * unit group (z -> r z, r coprime to M) keeps every constraint and yields a
 * step function, and a step solution is in particular a dense one. So the
 * question is an LP over step functions:
 *
 *   c_M = 1, c_m >= 0, f^ >= 0, f^(0) = M / |A|,
 *   f^ = 0 on every nonzero frequency class where 1_A^ does not vanish.
 *
 * The last two rows are 1_A^ f^ = M delta_0, i.e. 1_A * f = 1.
 */

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "zmtile/class_set.hpp"
#include "zmtile/cyclotomic.hpp"
#include "zmtile/modulus.hpp"
#include "zmtile/step_fn.hpp"

namespace zmtile {

/// A subset of Z_M containing 0, stored sorted.
class TileSet {
public:
    /// Throws InvalidInput on out-of-range or repeated elements or a missing 0.
    TileSet(Modulus mod, std::vector<int64_t> elements);

    static TileSet whole(const Modulus& mod);

    const Modulus& modulus() const noexcept { return mod_; }
    std::span<const int64_t> elements() const noexcept { return elements_; }
    std::size_t size() const noexcept { return elements_.size(); }
    bool contains(int64_t z) const;

    DenseFunction indicator() const { return DenseFunction::indicator(mod_, elements_); }

    friend bool operator==(const TileSet& a, const TileSet& b) {
        return a.mod_ == b.mod_ && a.elements_ == b.elements_;
    }

private:
    Modulus mod_;
    std::vector<int64_t> elements_;
};

/// Classes gcd(a - a', M) over all pairs (the class of 0 included).
ClassSet div_star(const TileSet& A);

/// |A||B| = M and Div*(A), Div*(B) share only the class of 0.
bool sands_check(const TileSet& A, const TileSet& B);

/// Every x in Z_M is a + b in exactly one way.
bool tiles_directly(const TileSet& A, const TileSet& B);

/// Every B containing 0 with A (+) B = Z_M, in lexicographic order of the
/// sorted element lists. Stops after `limit` complements when limit > 0.
std::vector<TileSet> tiling_complements(const TileSet& A, std::size_t limit = 0);

/// Some complement exists.
bool tiles(const TileSet& A);

struct PdTileResult {
    bool feasible = false;
    std::optional<StepFunction> witness;
};

PdTileResult pd_tile_feasible(const TileSet& A);

struct PdTilingChecks {
    bool nonnegative = false;       ///< f >= 0 and g >= 0
    bool unit_at_zero = false;      ///< f(0) = g(0) = 1
    bool positive_definite = false; ///< f^ >= 0 and g^ >= 0
    bool convolution_one = false;   ///< f^ g^ vanishes off 0, i.e. f * g is constant
    bool weight_product = false;    ///< sum f * sum g = M
};

struct PdTilingReport {
    bool valid = false;
    PdTilingChecks checks;
    /// (T1)/(T2) for each factor; false when the report is undefined
    /// (negative values or zero weight).
    bool t1_f = false, t2_f = false, t1_g = false, t2_g = false;
    std::optional<CycloReport> cyclo_f, cyclo_g;
};

/// Exact check of f * g = 1_{Z_M} with both factors nonnegative, positive
/// definite and equal to 1 at 0. Throws InvalidInput on a modulus mismatch.
PdTilingReport verify_functional_pd_tiling(const StepFunction& f, const StepFunction& g);

/// The pair (f, g) on M = p^4 q^2 for primes p < q < p^2. Both are Fourier
/// eigenfunctions with eigenvalue p^2 q and f * g = 1, while (T2) fails.
std::pair<StepFunction, StepFunction> counterexample_pair(int64_t p, int64_t q);

/// Digit tiling of Z_{p^alpha}: C uses the base-p digits at positions J
/// (1-based), D the remaining ones.
std::pair<TileSet, TileSet> standard_prime_power_tiling(int64_t p, int alpha, const std::vector<int>& J);

struct PdPair {
    StepFunction f;
    StepFunction g;
    /// false: f^ supported in H and g^ in H'. true: the roles of H and H'
    /// on the transform side are swapped.
    bool swapped = false;
};

/// Builds a functional pd-tiling with supp f in H and supp g in H' for an
/// H that passes screen() with delta = 1/(M^2 phi(M)). Throws InvalidInput
/// if H does not pass; nullopt if neither LP formulation is feasible.
std::optional<PdPair> construct_pd_pair(const ClassSet& H);

}  // namespace zmtile
