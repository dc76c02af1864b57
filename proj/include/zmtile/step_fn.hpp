#pragma once

/**
 * @file step_fn.hpp
 * @brief Rational-valued functions on Z_M and the step-function subalgebra.
 *
 * A DenseFunction stores one value per residue. A StepFunction stores one
 * value per divisor class R_m = {z : gcd(z, M) = m}, indexed in the canonical
 * divisor order of its Modulus.
 */

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "zmtile/modulus.hpp"
#include "zmtile/rational.hpp"

namespace zmtile {

class DenseFunction {
public:
    /// values.size() must equal M.
    DenseFunction(Modulus mod, std::vector<Rational> values);

    static DenseFunction zero(const Modulus& mod);
    static DenseFunction delta(const Modulus& mod, int64_t at);
    /// Indicator of a set of residues (reduced mod M; repeats rejected).
    static DenseFunction indicator(const Modulus& mod, std::span<const int64_t> elements);

    const Modulus& modulus() const noexcept { return mod_; }
    std::span<const Rational> values() const noexcept { return values_; }
    /// f(z) with z reduced mod M.
    const Rational& operator()(int64_t z) const;

    friend bool operator==(const DenseFunction& a, const DenseFunction& b) {
        return a.mod_ == b.mod_ && a.values_ == b.values_;
    }

private:
    Modulus mod_;
    std::vector<Rational> values_;
};

class StepFunction {
public:
    /// coeffs.size() must equal the number of divisors of M.
    StepFunction(Modulus mod, std::vector<Rational> coeffs);

    static StepFunction zero(const Modulus& mod);
    /// delta_0, i.e. c_M = 1 and every other class 0.
    static StepFunction delta(const Modulus& mod);
    static StepFunction constant(const Modulus& mod, const Rational& value);
    /// Builds from (divisor, value) pairs; unlisted classes are 0.
    static StepFunction from_pairs(const Modulus& mod,
                                   std::span<const std::pair<int64_t, Rational>> pairs);

    const Modulus& modulus() const noexcept { return mod_; }
    std::span<const Rational> coeffs() const noexcept { return coeffs_; }
    const Rational& coeff_at(std::size_t index) const { return coeffs_[index]; }
    /// c_m for divisor m.
    const Rational& coeff(int64_t m) const { return coeffs_[mod_.index_of(m)]; }
    /// f(z) = c_{gcd(z, M)}.
    const Rational& value(int64_t z) const;

    bool is_zero() const;
    bool is_nonnegative() const;
    StepFunction scaled(const Rational& factor) const;
    DenseFunction to_dense() const;

    friend bool operator==(const StepFunction& a, const StepFunction& b) {
        return a.mod_ == b.mod_ && a.coeffs_ == b.coeffs_;
    }

private:
    Modulus mod_;
    std::vector<Rational> coeffs_;
};

/// c_m = mean of f over R_m. Agrees with averaging f(rz) over the units r,
/// because the unit group acts transitively on each class.
StepFunction average_to_step(const DenseFunction& f);

/// Returns the step function if f is constant on every class.
std::optional<StepFunction> as_step(const DenseFunction& f);

/// h_A: the class average of (1/|A|) 1_A * 1_{-A}. A must contain 0.
StepFunction autocorrelation_step(const Modulus& mod, std::span<const int64_t> A);

/// f_N(z) = sum of f(y) over y = z (mod N). N must divide M.
DenseFunction fold(const DenseFunction& f, int64_t N);
/// Folding a step function yields a step function on Z_N.
StepFunction fold(const StepFunction& f, int64_t N);

/// (f*g)(x) = sum_y f(y) g(x - y). Naive O(M^2).
DenseFunction convolve(const DenseFunction& f, const DenseFunction& g);

Rational total_weight(const DenseFunction& f);
/// sum_m c_m phi(M/m).
Rational total_weight(const StepFunction& f);

}  // namespace zmtile
