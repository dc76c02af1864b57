#include "zmtile/rational.hpp"

#include <cctype>
#include <climits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "zmtile/error.hpp"

namespace zmtile {

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

constexpr i128 kSmallMax = INT64_MAX;

bool fits(i128 v) { return v <= kSmallMax && v >= -kSmallMax; }

u128 uabs(i128 v) { return v < 0 ? static_cast<u128>(-v) : static_cast<u128>(v); }

uint64_t uabs64(int64_t v) { return v < 0 ? static_cast<uint64_t>(-(v + 1)) + 1 : static_cast<uint64_t>(v); }

u128 gcd128(u128 a, u128 b) {
    while (b != 0) {
        if ((a >> 64) == 0 && (b >> 64) == 0) {
            return std::gcd(static_cast<uint64_t>(a), static_cast<uint64_t>(b));
        }
        u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

mpz_class mpz_from_i128(i128 v) {
    const bool neg = v < 0;
    u128 u = uabs(v);
    mpz_class hi(static_cast<unsigned long>(static_cast<uint64_t>(u >> 64)));
    mpz_class lo(static_cast<unsigned long>(static_cast<uint64_t>(u)));
    mpz_class r = (hi << 64) + lo;
    return neg ? mpz_class(-r) : r;
}

mpq_class mpq_from_small(int64_t n, int64_t d) {
    mpq_class q;
    q.get_num() = static_cast<long>(n);
    q.get_den() = static_cast<long>(d);
    return q;  // already canonical
}

bool mpz_fits_small(const mpz_class& z) {
    return mpz_fits_slong_p(z.get_mpz_t()) != 0 && z != LONG_MIN;
}

}  // namespace

Rational::Rational(int64_t n) : num_(n), den_(1) {
    if (n == INT64_MIN) {
        // Only value outside the symmetric inline range.
        big_ = std::make_unique<mpq_class>();
        big_->get_num() = static_cast<long>(n);
        num_ = 0;
    }
}

Rational::Rational(int64_t num, int64_t den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    set_from_i128(num, den);
}

Rational::Rational(const mpq_class& q) { set_from_mpq(q); }

Rational::Rational(const Rational& other) : num_(other.num_), den_(other.den_) {
    if (other.big_) big_ = std::make_unique<mpq_class>(*other.big_);
}

Rational& Rational::operator=(const Rational& other) {
    if (this == &other) return *this;
    num_ = other.num_;
    den_ = other.den_;
    if (other.big_) {
        if (big_) *big_ = *other.big_;
        else big_ = std::make_unique<mpq_class>(*other.big_);
    } else {
        big_.reset();
    }
    return *this;
}

void Rational::set_from_mpq(mpq_class q) {
    if (mpz_fits_small(q.get_num()) && mpz_fits_small(q.get_den())) {
        num_ = q.get_num().get_si();
        den_ = q.get_den().get_si();
        big_.reset();
    } else {
        num_ = 0;
        den_ = 1;
        if (big_) *big_ = std::move(q);
        else big_ = std::make_unique<mpq_class>(std::move(q));
    }
}

void Rational::set_from_i128(i128 num, i128 den) {
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const u128 g = gcd128(uabs(num), static_cast<u128>(den));
    if (g > 1) {
        num /= static_cast<i128>(g);
        den /= static_cast<i128>(g);
    }
    if (num == 0) den = 1;
    if (fits(num) && den <= kSmallMax) {
        num_ = static_cast<int64_t>(num);
        den_ = static_cast<int64_t>(den);
        big_.reset();
        return;
    }
    mpq_class q;
    q.get_num() = mpz_from_i128(num);
    q.get_den() = mpz_from_i128(den);
    num_ = 0;
    den_ = 1;
    big_ = std::make_unique<mpq_class>(std::move(q));
}

Rational Rational::parse(std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };
    auto parse_int = [&](std::string_view s) {
        s = trim(s);
        std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
        if (i == s.size()) throw InvalidInput("malformed rational: '" + std::string(text) + "'");
        for (std::size_t j = i; j < s.size(); ++j) {
            if (!std::isdigit(static_cast<unsigned char>(s[j]))) {
                throw InvalidInput("malformed rational: '" + std::string(text) + "'");
            }
        }
        std::string digits(s[0] == '+' ? s.substr(1) : s);
        return mpz_class(digits, 10);
    };
    const auto slash = text.find('/');
    mpq_class q;
    if (slash == std::string_view::npos) {
        q.get_num() = parse_int(text);
        q.get_den() = 1;
    } else {
        q.get_num() = parse_int(text.substr(0, slash));
        q.get_den() = parse_int(text.substr(slash + 1));
        if (q.get_den() == 0) throw InvalidInput("rational with zero denominator: '" + std::string(text) + "'");
        q.canonicalize();
    }
    return Rational(q);
}

bool Rational::is_integer() const { return big_ ? big_->get_den() == 1 : den_ == 1; }

int Rational::sign() const noexcept {
    if (big_) return sgn(*big_);
    return (num_ > 0) - (num_ < 0);
}

std::string Rational::str() const {
    if (big_) return big_->get_str();
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

std::string Rational::fraction_str() const {
    if (big_) return big_->get_num().get_str() + "/" + big_->get_den().get_str();
    return std::to_string(num_) + "/" + std::to_string(den_);
}

mpq_class Rational::to_mpq() const { return big_ ? *big_ : mpq_from_small(num_, den_); }

double Rational::to_double() const {
    if (big_) return big_->get_d();
    return static_cast<double>(num_) / static_cast<double>(den_);
}

Rational Rational::operator-() const {
    if (big_) return Rational(mpq_class(-*big_));
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
}

Rational& Rational::operator+=(const Rational& rhs) {
    if (!big_ && !rhs.big_) {
        const int64_t n1 = num_, d1 = den_, n2 = rhs.num_, d2 = rhs.den_;
        if (d1 == 1 && d2 == 1) {
            const i128 s = static_cast<i128>(n1) + n2;
            if (fits(s)) {
                num_ = static_cast<int64_t>(s);
                return *this;
            }
            set_from_i128(s, 1);
            return *this;
        }
        const uint64_t g = std::gcd(static_cast<uint64_t>(d1), static_cast<uint64_t>(d2));
        if (g == 1) {
            const i128 t = static_cast<i128>(n1) * d2 + static_cast<i128>(n2) * d1;
            const i128 d = static_cast<i128>(d1) * d2;
            if (t == 0) {
                num_ = 0;
                den_ = 1;
            } else if (fits(t) && d <= kSmallMax) {
                num_ = static_cast<int64_t>(t);
                den_ = static_cast<int64_t>(d);
            } else {
                set_from_i128(t, d);
            }
            return *this;
        }
        const int64_t s1 = d1 / static_cast<int64_t>(g);
        const i128 t = static_cast<i128>(n1) * (d2 / static_cast<int64_t>(g)) + static_cast<i128>(n2) * s1;
        if (t == 0) {
            num_ = 0;
            den_ = 1;
            return *this;
        }
        const uint64_t g2 = std::gcd(static_cast<uint64_t>(uabs(t) % g), g);
        const i128 n = t / static_cast<i128>(g2);
        const i128 d = static_cast<i128>(s1) * (d2 / static_cast<int64_t>(g2));
        if (fits(n) && d <= kSmallMax) {
            num_ = static_cast<int64_t>(n);
            den_ = static_cast<int64_t>(d);
        } else {
            set_from_i128(n, d);
        }
        return *this;
    }
    set_from_mpq(to_mpq() + rhs.to_mpq());
    return *this;
}

Rational& Rational::operator-=(const Rational& rhs) {
    if (!rhs.big_) {
        Rational neg;
        neg.num_ = -rhs.num_;
        neg.den_ = rhs.den_;
        return *this += neg;
    }
    set_from_mpq(to_mpq() - rhs.to_mpq());
    return *this;
}

Rational& Rational::operator*=(const Rational& rhs) {
    if (!big_ && !rhs.big_) {
        if (num_ == 0) return *this;
        if (rhs.num_ == 0) {
            num_ = 0;
            den_ = 1;
            return *this;
        }
        const int64_t g1 = static_cast<int64_t>(std::gcd(uabs64(num_), static_cast<uint64_t>(rhs.den_)));
        const int64_t g2 = static_cast<int64_t>(std::gcd(uabs64(rhs.num_), static_cast<uint64_t>(den_)));
        const i128 n = static_cast<i128>(num_ / g1) * (rhs.num_ / g2);
        const i128 d = static_cast<i128>(den_ / g2) * (rhs.den_ / g1);
        if (fits(n) && d <= kSmallMax) {
            num_ = static_cast<int64_t>(n);
            den_ = static_cast<int64_t>(d);
        } else {
            set_from_i128(n, d);
        }
        return *this;
    }
    set_from_mpq(to_mpq() * rhs.to_mpq());
    return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
    if (rhs.is_zero()) throw std::domain_error("rational division by zero");
    if (!rhs.big_) {
        Rational inv;
        inv.num_ = rhs.num_ < 0 ? -rhs.den_ : rhs.den_;
        inv.den_ = rhs.num_ < 0 ? -rhs.num_ : rhs.num_;
        return *this *= inv;
    }
    set_from_mpq(to_mpq() / rhs.to_mpq());
    return *this;
}

void Rational::add_product(const Rational& a, const Rational& b) {
    if (a.is_zero() || b.is_zero()) return;
    Rational p(a);
    p *= b;
    *this += p;
}

bool operator==(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
    if (a.big_ && b.big_) return *a.big_ == *b.big_;
    return false;  // canonical representation
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
        const i128 l = static_cast<i128>(a.num_) * b.den_;
        const i128 r = static_cast<i128>(b.num_) * a.den_;
        return l <=> r;
    }
    const int c = cmp(a.to_mpq(), b.to_mpq());
    return c <=> 0;
}

std::ostream& operator<<(std::ostream& os, const Rational& q) { return os << q.str(); }

Rational abs(const Rational& q) { return q.sign() < 0 ? -q : q; }

}  // namespace zmtile
