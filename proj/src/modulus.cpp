#include "zmtile/modulus.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "zmtile/error.hpp"

namespace zmtile {

int64_t PrimePower::value() const {
    int64_t v = 1;
    for (int i = 0; i < exponent; ++i) v *= prime;
    return v;
}

std::vector<PrimePower> factorize(int64_t n) {
    std::vector<PrimePower> out;
    for (int64_t p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.push_back({p, e});
    }
    if (n > 1) out.push_back({n, 1});
    return out;
}

bool is_prime(int64_t n) {
    if (n < 2) return false;
    for (int64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) return false;
    }
    return true;
}

Modulus::Modulus(int64_t M) {
    if (M < 2) throw InvalidInput("modulus must be at least 2, got " + std::to_string(M));
    if (M > kMaxModulus) {
        throw ResourceLimit("modulus " + std::to_string(M) + " exceeds the supported bound " +
                            std::to_string(kMaxModulus));
    }
    auto data = std::make_shared<Data>();
    data->M = M;
    data->factors = factorize(M);

    // Each divisor carries its exponent vector so phi and mu come for free.
    struct Entry {
        int64_t d;
        int64_t phi;
        int mu;
    };
    std::vector<Entry> entries{{1, 1, 1}};
    for (const auto& [p, n] : data->factors) {
        const std::size_t base = entries.size();
        for (std::size_t i = 0; i < base; ++i) {
            int64_t pk = 1;
            for (int k = 1; k <= n; ++k) {
                pk *= p;
                const auto& e = entries[i];
                entries.push_back({e.d * pk, e.phi * (pk / p) * (p - 1), k == 1 ? -e.mu : 0});
            }
        }
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.d < b.d; });
    for (const auto& e : entries) {
        data->divisors.push_back(e.d);
        data->phi.push_back(e.phi);
        data->mu.push_back(e.mu);
    }
    const std::size_t n = data->divisors.size();
    data->complement.resize(n);
    for (std::size_t i = 0; i < n; ++i) data->complement[i] = n - 1 - i;  // d <-> M/d reverses the order
    data_ = std::move(data);
}

std::size_t Modulus::index_of(int64_t d) const {
    const auto& divs = data_->divisors;
    auto it = std::lower_bound(divs.begin(), divs.end(), d);
    if (it == divs.end() || *it != d) {
        throw InvalidInput(std::to_string(d) + " does not divide " + std::to_string(M()));
    }
    return static_cast<std::size_t>(it - divs.begin());
}

std::vector<int64_t> Modulus::prime_powers() const {
    std::vector<int64_t> out;
    for (const auto& [p, n] : data_->factors) {
        int64_t pk = 1;
        for (int k = 1; k <= n; ++k) out.push_back(pk *= p);
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool Modulus::is_prime_power(int64_t d) const {
    if (d < 2 || !divides(d)) return false;
    for (const auto& f : data_->factors) {
        if (d % f.prime == 0) {
            while (d % f.prime == 0) d /= f.prime;
            return d == 1;
        }
    }
    return false;
}

Modulus build_modulus(int64_t M) { return Modulus(M); }

int64_t class_of(int64_t z, const Modulus& mod) {
    const int64_t M = mod.M();
    int64_t r = z % M;
    if (r < 0) r += M;
    return std::gcd(r, M);
}

std::size_t class_index_of(int64_t z, const Modulus& mod) { return mod.index_of(class_of(z, mod)); }

}  // namespace zmtile
