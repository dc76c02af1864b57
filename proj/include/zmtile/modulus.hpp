#pragma once

/**
 * @file modulus.hpp
 * @brief The cyclic group Z_M: factorization, divisor lattice, phi and mu.
 *
 * Every function and class set in this library lives over a Modulus. The
 * divisors are kept sorted ascending; every divisor-indexed vector in the
 * library uses this canonical order.
 */

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace zmtile {

struct PrimePower {
    int64_t prime;
    int exponent;

    int64_t value() const;
    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Largest modulus accepted. Factorization is plain trial division, which
/// stays instantaneous well past this bound; the limit guards the dense
/// (length-M) algorithms built on top.
inline constexpr int64_t kMaxModulus = 1'000'000'000;

class Modulus {
public:
    /// Throws InvalidInput for M < 2 and ResourceLimit for M > kMaxModulus.
    explicit Modulus(int64_t M);

    int64_t M() const noexcept { return data_->M; }
    std::span<const PrimePower> factors() const noexcept { return data_->factors; }
    std::span<const int64_t> divisors() const noexcept { return data_->divisors; }
    std::size_t num_divisors() const noexcept { return data_->divisors.size(); }

    int64_t divisor(std::size_t index) const { return data_->divisors[index]; }
    /// Canonical index of divisor d; throws InvalidInput if d does not divide M.
    std::size_t index_of(int64_t d) const;
    bool divides(int64_t d) const noexcept { return d > 0 && M() % d == 0; }

    /// Euler phi / Moebius mu of divisor(index).
    int64_t phi(std::size_t index) const { return data_->phi[index]; }
    int mu(std::size_t index) const { return data_->mu[index]; }
    int64_t phi_of(int64_t d) const { return phi(index_of(d)); }
    int mu_of(int64_t d) const { return mu(index_of(d)); }

    /// |R_m| = phi(M/m).
    int64_t class_size(std::size_t index) const { return phi(complement_index(index)); }

    /// Index of M / divisor(index).
    std::size_t complement_index(std::size_t index) const { return data_->complement[index]; }

    std::size_t top_index() const noexcept { return data_->divisors.size() - 1; }

    /// Prime powers p^a with 1 <= a <= n_p, ascending.
    std::vector<int64_t> prime_powers() const;
    bool is_prime_power(int64_t d) const;

    friend bool operator==(const Modulus& a, const Modulus& b) noexcept { return a.M() == b.M(); }

private:
    struct Data {
        int64_t M;
        std::vector<PrimePower> factors;
        std::vector<int64_t> divisors;
        std::vector<int64_t> phi;
        std::vector<int> mu;
        std::vector<std::size_t> complement;
    };
    std::shared_ptr<const Data> data_;
};

Modulus build_modulus(int64_t M);

/// gcd(z, M), the divisor m with z in R_m. class_of(0) = M.
int64_t class_of(int64_t z, const Modulus& mod);

/// Canonical divisor index of class_of(z).
std::size_t class_index_of(int64_t z, const Modulus& mod);

std::vector<PrimePower> factorize(int64_t n);
bool is_prime(int64_t n);

}  // namespace zmtile
