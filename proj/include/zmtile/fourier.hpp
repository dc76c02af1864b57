#pragma once

/**
 * @file fourier.hpp
 * @brief Exact Fourier transform of step functions at class resolution.
 *
 * Convention: f^(xi) = sum_z f(z) exp(-2 pi i z xi / M). The transform of a
 * step function depends on xi only through gcd(xi, M), so frequencies are
 * indexed by divisor classes exactly like the spatial side. The transform of
 * the class indicator 1_{R_m} is the Ramanujan-type sum
 *
 *     T[e, m] = sum_{d | gcd(M/m, e)} mu(M / (m d)) d
 *
 * evaluated at any xi with gcd(xi, M) = e.
 */

#include <cstdint>
#include <optional>
#include <vector>

#include "zmtile/class_set.hpp"
#include "zmtile/modulus.hpp"
#include "zmtile/step_fn.hpp"

namespace zmtile {

class StepFourierMatrix {
public:
    explicit StepFourierMatrix(Modulus mod);

    const Modulus& modulus() const noexcept { return mod_; }
    std::size_t size() const noexcept { return n_; }
    /// Entry by canonical indices (frequency class e, spatial class m).
    int64_t at(std::size_t e, std::size_t m) const { return entries_[e * n_ + m]; }
    /// Entry by divisor values.
    int64_t entry(int64_t e, int64_t m) const { return at(mod_.index_of(e), mod_.index_of(m)); }

private:
    Modulus mod_;
    std::size_t n_;
    std::vector<int64_t> entries_;
};

StepFourierMatrix ft_class_matrix(const Modulus& mod);

/// (f^)_e = sum_m c_m T[e, m].
StepFunction ft_step(const StepFunction& f);
StepFunction ft_step(const StepFunction& f, const StepFourierMatrix& T);

/// lambda with ft_step(f) == lambda * f, if any. Throws InvalidInput for f == 0.
std::optional<Rational> eigen_check(const StepFunction& f);

/// Frequency classes e with (f^)_e != 0.
ClassSet ft_support(const StepFunction& f);

}  // namespace zmtile
