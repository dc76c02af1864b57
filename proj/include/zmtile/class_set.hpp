#pragma once

/**
 * @file class_set.hpp
 * @brief A union of step classes that always contains R_M = {0}.
 *
 * Stored as a bitset over the canonical divisor order; the element-level set
 * is never materialized.
 */

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zmtile/modulus.hpp"

namespace zmtile {

class ClassSet {
public:
    /// Just {M}.
    explicit ClassSet(Modulus mod);
    /// Throws InvalidInput if a member does not divide M or M is missing.
    ClassSet(Modulus mod, std::span<const int64_t> members);

    static ClassSet all(const Modulus& mod);
    /// Bit i set <=> divisor(i) is a member.
    static ClassSet from_bits(const Modulus& mod, std::vector<bool> bits);
    /// Parses a comma separated divisor list ("36,6,1") or a hex bitmask
    /// over the canonical divisor order ("0x...", bit 0 = divisor 1).
    static ClassSet parse(const Modulus& mod, std::string_view text);

    const Modulus& modulus() const noexcept { return mod_; }
    bool contains(int64_t m) const;
    bool contains_index(std::size_t i) const { return bits_[i]; }
    std::size_t size() const;
    std::vector<int64_t> members() const;
    const std::vector<bool>& bits() const noexcept { return bits_; }

    std::string to_hex() const;
    std::string to_list() const;

    friend bool operator==(const ClassSet& a, const ClassSet& b) { return a.mod_ == b.mod_ && a.bits_ == b.bits_; }

private:
    ClassSet(Modulus mod, std::vector<bool> bits);

    Modulus mod_;
    std::vector<bool> bits_;
};

}  // namespace zmtile
