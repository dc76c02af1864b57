#include "zmtile/class_set.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "zmtile/error.hpp"

namespace zmtile {

ClassSet::ClassSet(Modulus mod) : mod_(std::move(mod)), bits_(mod_.num_divisors(), false) {
    bits_[mod_.top_index()] = true;
}

ClassSet::ClassSet(Modulus mod, std::span<const int64_t> members) : ClassSet(std::move(mod)) {
    bits_[mod_.top_index()] = false;
    for (int64_t m : members) bits_[mod_.index_of(m)] = true;
    if (!bits_[mod_.top_index()]) {
        throw InvalidInput("class set must contain the class of 0 (divisor " + std::to_string(mod_.M()) + ")");
    }
}

ClassSet::ClassSet(Modulus mod, std::vector<bool> bits) : mod_(std::move(mod)), bits_(std::move(bits)) {}

ClassSet ClassSet::all(const Modulus& mod) { return ClassSet(mod, std::vector<bool>(mod.num_divisors(), true)); }

ClassSet ClassSet::from_bits(const Modulus& mod, std::vector<bool> bits) {
    if (bits.size() != mod.num_divisors()) throw InvalidInput("class set bitmask has the wrong length");
    if (!bits[mod.top_index()]) {
        throw InvalidInput("class set must contain the class of 0 (divisor " + std::to_string(mod.M()) + ")");
    }
    return ClassSet(mod, std::move(bits));
}

ClassSet ClassSet::parse(const Modulus& mod, std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
        std::vector<bool> bits(mod.num_divisors(), false);
        std::size_t bit = 0;
        for (auto it = text.rbegin(); it != text.rend() - 2; ++it, bit += 4) {
            const char ch = static_cast<char>(std::tolower(static_cast<unsigned char>(*it)));
            int nib;
            if (ch >= '0' && ch <= '9') nib = ch - '0';
            else if (ch >= 'a' && ch <= 'f') nib = ch - 'a' + 10;
            else throw InvalidInput("bad hex digit in class set '" + std::string(text) + "'");
            for (int k = 0; k < 4; ++k) {
                if (!(nib >> k & 1)) continue;
                if (bit + k >= bits.size()) throw InvalidInput("class set bitmask longer than the divisor count");
                bits[bit + k] = true;
            }
        }
        return from_bits(mod, std::move(bits));
    }
    std::vector<int64_t> members;
    while (!text.empty()) {
        const auto comma = text.find(',');
        auto tok = text.substr(0, comma);
        while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.front()))) tok.remove_prefix(1);
        while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.back()))) tok.remove_suffix(1);
        int64_t v = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc{} || ptr != tok.data() + tok.size() || tok.empty()) {
            throw InvalidInput("bad divisor '" + std::string(tok) + "' in class set");
        }
        members.push_back(v);
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return ClassSet(mod, members);
}

bool ClassSet::contains(int64_t m) const { return mod_.divides(m) && bits_[mod_.index_of(m)]; }

std::size_t ClassSet::size() const { return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), true)); }

std::vector<int64_t> ClassSet::members() const {
    std::vector<int64_t> out;
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        if (bits_[i]) out.push_back(mod_.divisor(i));
    }
    return out;
}

std::string ClassSet::to_hex() const {
    std::string digits;
    for (std::size_t base = 0; base < bits_.size(); base += 4) {
        int nib = 0;
        for (std::size_t k = 0; k < 4 && base + k < bits_.size(); ++k) nib |= bits_[base + k] ? 1 << k : 0;
        digits.push_back("0123456789abcdef"[nib]);
    }
    while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
    std::reverse(digits.begin(), digits.end());
    return "0x" + digits;
}

std::string ClassSet::to_list() const {
    std::string out;
    for (int64_t m : members()) {
        if (!out.empty()) out += ',';
        out += std::to_string(m);
    }
    return out;
}

}  // namespace zmtile
