#include "zmtile/cyclotomic.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <string>

#include "zmtile/error.hpp"

namespace zmtile {

namespace {

std::vector<int64_t> prime_list(const Modulus& mod) {
    std::vector<int64_t> out;
    for (const auto& f : mod.factors()) out.push_back(f.prime);
    return out;
}

void require_level(const Modulus& mod, int64_t d) {
    if (d <= 1 || !mod.divides(d)) {
        throw InvalidInput("cyclotomic level " + std::to_string(d) + " must be a divisor > 1 of " +
                           std::to_string(mod.M()));
    }
}

// Remainder of sum_k coeffs[k] X^k modulo the monic polynomial phi.
std::vector<Rational> reduce_by(std::vector<Rational> coeffs, const std::vector<int64_t>& phi) {
    const std::size_t deg = phi.size() - 1;
    std::vector<std::size_t> nonzero;
    for (std::size_t j = 0; j < deg; ++j) {
        if (phi[j] != 0) nonzero.push_back(j);
    }
    for (std::size_t i = coeffs.size(); i-- > deg;) {
        if (coeffs[i].is_zero()) continue;
        const Rational lead = coeffs[i];
        const std::size_t shift = i - deg;
        for (std::size_t j : nonzero) coeffs[shift + j] -= lead * Rational(phi[j]);
        coeffs[i] = Rational();
    }
    coeffs.resize(deg);
    return coeffs;
}

}  // namespace

namespace {

std::vector<int64_t> compute_cyclotomic(int64_t d) {
    Modulus mod(d);
    std::vector<int64_t> poly{1};
    // Phi_d = prod_{e | d} (X^{d/e} - 1)^{mu(e)}: multiply the numerator
    // factors first so every division below is exact.
    for (std::size_t i = 0; i < mod.num_divisors(); ++i) {
        if (mod.mu(i) != 1) continue;
        const auto k = static_cast<std::size_t>(d / mod.divisor(i));
        std::vector<int64_t> next(poly.size() + k, 0);
        for (std::size_t j = 0; j < poly.size(); ++j) {
            next[j + k] += poly[j];
            next[j] -= poly[j];
        }
        poly = std::move(next);
    }
    for (std::size_t i = 0; i < mod.num_divisors(); ++i) {
        if (mod.mu(i) != -1) continue;
        const auto k = static_cast<std::size_t>(d / mod.divisor(i));
        // p = q (X^k - 1)  =>  q[j] = q[j-k] - p[j]
        std::vector<int64_t> q(poly.size() - k, 0);
        for (std::size_t j = 0; j < q.size(); ++j) q[j] = (j >= k ? q[j - k] : 0) - poly[j];
        poly = std::move(q);
    }
    return poly;
}

// Phi_d is needed over and over for the same few d.
const std::vector<int64_t>& cached_cyclotomic(int64_t d) {
    static std::mutex lock;
    static std::map<int64_t, std::vector<int64_t>> cache;
    std::lock_guard guard(lock);
    auto it = cache.find(d);
    if (it == cache.end()) it = cache.emplace(d, compute_cyclotomic(d)).first;
    return it->second;
}

}  // namespace

std::vector<int64_t> cyclotomic_poly(int64_t d) {
    if (d < 1) throw InvalidInput("cyclotomic index must be positive");
    if (d == 1) return {-1, 1};
    return cached_cyclotomic(d);
}

CyclotomicTable::CyclotomicTable(Modulus mod) : mod_(std::move(mod)) {
    polys_.reserve(mod_.num_divisors());
    for (int64_t d : mod_.divisors()) polys_.push_back(cyclotomic_poly(d));
}

Cuboid::Cuboid(Modulus lvl, int64_t b, std::vector<int64_t> r) : level(std::move(lvl)), base(b), rho(std::move(r)) {
    const auto primes = prime_list(level);
    if (rho.size() != primes.size()) {
        throw InvalidInput("cuboid needs " + std::to_string(primes.size()) + " rho values, got " +
                           std::to_string(rho.size()));
    }
    for (std::size_t i = 0; i < rho.size(); ++i) {
        if (rho[i] < 1 || rho[i] >= primes[i]) {
            throw InvalidInput("rho_" + std::to_string(i) + " = " + std::to_string(rho[i]) + " outside [1, " +
                               std::to_string(primes[i] - 1) + "]");
        }
    }
    base %= level.M();
    if (base < 0) base += level.M();
}

Cuboid Cuboid::canonical(const Modulus& lvl) { return Cuboid(lvl, 0, std::vector<int64_t>(lvl.factors().size(), 1)); }

std::vector<int64_t> Cuboid::offsets() const {
    std::vector<int64_t> out;
    const auto primes = prime_list(level);
    for (std::size_t i = 0; i < primes.size(); ++i) out.push_back(rho[i] * (level.M() / primes[i]));
    return out;
}

std::vector<std::pair<int64_t, int>> Cuboid::vertices() const {
    const auto d = offsets();
    const int64_t N = level.M();
    std::vector<std::pair<int64_t, int>> out;
    for (uint64_t eps = 0; eps < (uint64_t{1} << d.size()); ++eps) {
        int64_t x = base;
        int sign = 1;
        for (std::size_t j = 0; j < d.size(); ++j) {
            if (eps >> j & 1) {
                x = (x + d[j]) % N;
                sign = -sign;
            }
        }
        out.emplace_back(x, sign);
    }
    return out;
}

Rational cuboid_eval(const DenseFunction& f, const Cuboid& cuboid) {
    if (!(f.modulus() == cuboid.level)) {
        throw InvalidInput("cuboid lives in Z_" + std::to_string(cuboid.level.M()) + ", function in Z_" +
                           std::to_string(f.modulus().M()));
    }
    Rational sum;
    for (const auto& [x, sign] : cuboid.vertices()) {
        if (sign > 0) sum += f(x);
        else sum -= f(x);
    }
    return sum;
}

bool divides(const StepFunction& f, int64_t d) {
    const auto& mod = f.modulus();
    require_level(mod, d);
    // Canonical cuboid in Z_d: vertex 0, offsets d / p for each prime p | d.
    std::vector<int64_t> offsets;
    for (const auto& pp : mod.factors()) {
        if (d % pp.prime == 0) offsets.push_back(d / pp.prime);
    }
    const int64_t copies = mod.M() / d;
    Rational sum;
    for (uint64_t eps = 0; eps < (uint64_t{1} << offsets.size()); ++eps) {
        int64_t x = 0;
        int sign = 1;
        for (std::size_t j = 0; j < offsets.size(); ++j) {
            if (eps >> j & 1) {
                x += offsets[j];
                sign = -sign;
            }
        }
        x %= d;
        // f_d(x) = sum_k f(x + k d)
        Rational folded;
        for (int64_t k = 0; k < copies; ++k) folded += f.value(x + k * d);
        if (sign > 0) sum += folded;
        else sum -= folded;
    }
    return sum.is_zero();
}

std::vector<Rational> remainder_oracle(const DenseFunction& f, int64_t d) {
    const auto& mod = f.modulus();
    if (!mod.divides(d)) throw InvalidInput(std::to_string(d) + " does not divide " + std::to_string(mod.M()));
    // X^d = 1 modulo Phi_d, so first reduce exponents mod d.
    std::vector<Rational> coeffs(static_cast<std::size_t>(d));
    for (int64_t z = 0; z < mod.M(); ++z) {
        const auto& v = f.values()[static_cast<std::size_t>(z)];
        if (!v.is_zero()) coeffs[static_cast<std::size_t>(z % d)] += v;
    }
    return reduce_by(std::move(coeffs), cyclotomic_poly(d));
}

bool divides(const DenseFunction& f, int64_t d) {
    require_level(f.modulus(), d);
    // Fold to Z_d in place; building a DenseFunction would factor d again.
    std::vector<Rational> coeffs(static_cast<std::size_t>(d));
    for (int64_t z = 0; z < f.modulus().M(); ++z) {
        const auto& v = f.values()[static_cast<std::size_t>(z)];
        if (!v.is_zero()) coeffs[static_cast<std::size_t>(z % d)] += v;
    }
    const auto rem = reduce_by(std::move(coeffs), cached_cyclotomic(d));
    return std::all_of(rem.begin(), rem.end(), [](const Rational& r) { return r.is_zero(); });
}

std::vector<int64_t> spectrum(const StepFunction& f) {
    std::vector<int64_t> out;
    for (int64_t d : f.modulus().divisors()) {
        if (d > 1 && divides(f, d)) out.push_back(d);
    }
    return out;
}

std::vector<int64_t> spectrum(const DenseFunction& f) {
    std::vector<int64_t> out;
    for (int64_t d : f.modulus().divisors()) {
        if (d > 1 && divides(f, d)) out.push_back(d);
    }
    return out;
}

std::vector<int64_t> distinct_prime_products(const Modulus& mod, const std::vector<int64_t>& prime_powers) {
    // Group by prime; pick at most one power per prime.
    std::vector<std::vector<int64_t>> groups;
    for (const auto& f : mod.factors()) {
        std::vector<int64_t> g;
        for (int64_t s : prime_powers) {
            if (s % f.prime == 0) g.push_back(s);
        }
        if (!g.empty()) groups.push_back(std::move(g));
    }
    std::set<int64_t> products;
    // Mixed-radix walk: choice 0 means "skip this prime".
    std::vector<std::size_t> choice(groups.size(), 0);
    while (true) {
        std::size_t i = 0;
        while (i < groups.size() && ++choice[i] > groups[i].size()) choice[i++] = 0;
        if (i == groups.size()) break;
        int64_t prod = 1;
        int picked = 0;
        for (std::size_t j = 0; j < groups.size(); ++j) {
            if (choice[j] > 0) {
                prod *= groups[j][choice[j] - 1];
                ++picked;
            }
        }
        if (picked >= 2) products.insert(prod);
    }
    return {products.begin(), products.end()};
}

namespace {

CycloReport build_report(const Modulus& mod, const Rational& weight, const std::vector<int64_t>& divs) {
    CycloReport r;
    r.spectrum = divs;
    for (int64_t d : divs) {
        if (mod.is_prime_power(d)) r.S_F.push_back(d);
    }
    Rational prod = 1;
    for (int64_t s : r.S_F) prod *= Rational(factorize(s).front().prime);
    r.t1 = weight == prod;
    r.t2 = true;
    for (int64_t P : distinct_prime_products(mod, r.S_F)) {
        if (!std::binary_search(divs.begin(), divs.end(), P)) {
            r.t2 = false;
            r.t2_witness = P;
            break;
        }
    }
    return r;
}

void require_report_input(const Rational& weight, bool nonnegative) {
    if (!nonnegative) throw InvalidInput("(T1)/(T2) report needs a nonnegative function");
    if (weight.sign() <= 0) throw InvalidInput("(T1)/(T2) report needs positive total weight");
}

}  // namespace

CycloReport t1t2_report(const StepFunction& f) {
    const auto w = total_weight(f);
    require_report_input(w, f.is_nonnegative());
    return build_report(f.modulus(), w, spectrum(f));
}

CycloReport t1t2_report(const DenseFunction& f) {
    const auto w = total_weight(f);
    const bool nonneg =
        std::all_of(f.values().begin(), f.values().end(), [](const Rational& v) { return v.sign() >= 0; });
    require_report_input(w, nonneg);
    return build_report(f.modulus(), w, spectrum(f));
}

std::optional<int64_t> support_T2_witness(const ClassSet& H) {
    const auto& mod = H.modulus();
    if (!H.contains(mod.M())) throw InvalidInput("class set must contain the class of 0");
    std::vector<int64_t> S;
    for (int64_t s : mod.prime_powers()) {
        if (!H.contains(mod.M() / s)) S.push_back(s);
    }
    for (int64_t P : distinct_prime_products(mod, S)) {
        if (H.contains(mod.M() / P)) return P;
    }
    return std::nullopt;
}

bool support_T2(const ClassSet& H) { return !support_T2_witness(H).has_value(); }

}  // namespace zmtile
