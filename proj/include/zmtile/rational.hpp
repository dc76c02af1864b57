#pragma once

/**
 * @file rational.hpp
 * @brief Exact rational numbers with an inline 64-bit fast path.
 *
 * Values whose numerator and denominator both fit in a signed 64-bit word
 * are stored inline and operated on with 128-bit intermediates. Anything
 * larger spills to a GMP rational. The representation is canonical: a value
 * that fits inline is always stored inline, so equality never needs to
 * compare across representations.
 */

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace zmtile {

class Rational {
public:
    Rational() noexcept = default;
    Rational(int64_t n);  // NOLINT(google-explicit-constructor)
    Rational(int n) : Rational(static_cast<int64_t>(n)) {}  // NOLINT
    Rational(int64_t num, int64_t den);
    explicit Rational(const mpq_class& q);

    Rational(const Rational& other);
    Rational(Rational&& other) noexcept = default;
    Rational& operator=(const Rational& other);
    Rational& operator=(Rational&& other) noexcept = default;
    ~Rational() = default;

    /// Parses "n", "-n" or "n/d" (d != 0).
    static Rational parse(std::string_view text);

    bool is_zero() const noexcept { return !big_ && num_ == 0; }
    bool is_integer() const;
    int sign() const noexcept;

    /// Canonical "n/d" form; integers render without a denominator.
    std::string str() const;
    /// Always "n/d", including "n/1" for integers (wire format).
    std::string fraction_str() const;

    mpq_class to_mpq() const;
    double to_double() const;

    Rational operator-() const;
    Rational& operator+=(const Rational& rhs);
    Rational& operator-=(const Rational& rhs);
    Rational& operator*=(const Rational& rhs);
    Rational& operator/=(const Rational& rhs);

    friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
    friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
    friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
    friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }

    friend bool operator==(const Rational& a, const Rational& b);
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

    /// this += a * b, the tableau inner loop.
    void add_product(const Rational& a, const Rational& b);

    bool is_small() const noexcept { return !big_; }

private:
    void set_from_mpq(mpq_class q);
    void set_from_i128(__int128 num, __int128 den);

    int64_t num_ = 0;
    int64_t den_ = 1;
    std::unique_ptr<mpq_class> big_;
};

std::ostream& operator<<(std::ostream& os, const Rational& q);

Rational abs(const Rational& q);

}  // namespace zmtile
