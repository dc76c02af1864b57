#include "zmtile/step_fn.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "zmtile/error.hpp"

namespace zmtile {

namespace {

int64_t reduce(int64_t z, int64_t M) {
    int64_t r = z % M;
    return r < 0 ? r + M : r;
}

}  // namespace

DenseFunction::DenseFunction(Modulus mod, std::vector<Rational> values)
    : mod_(std::move(mod)), values_(std::move(values)) {
    if (static_cast<int64_t>(values_.size()) != mod_.M()) {
        throw InvalidInput("dense function has " + std::to_string(values_.size()) + " values, expected " +
                           std::to_string(mod_.M()));
    }
}

DenseFunction DenseFunction::zero(const Modulus& mod) {
    return DenseFunction(mod, std::vector<Rational>(static_cast<std::size_t>(mod.M())));
}

DenseFunction DenseFunction::delta(const Modulus& mod, int64_t at) {
    std::vector<Rational> v(static_cast<std::size_t>(mod.M()));
    v[static_cast<std::size_t>(reduce(at, mod.M()))] = 1;
    return DenseFunction(mod, std::move(v));
}

DenseFunction DenseFunction::indicator(const Modulus& mod, std::span<const int64_t> elements) {
    std::vector<Rational> v(static_cast<std::size_t>(mod.M()));
    for (int64_t a : elements) {
        auto& slot = v[static_cast<std::size_t>(reduce(a, mod.M()))];
        if (!slot.is_zero()) throw InvalidInput("repeated element " + std::to_string(a) + " in set");
        slot = 1;
    }
    return DenseFunction(mod, std::move(v));
}

const Rational& DenseFunction::operator()(int64_t z) const {
    return values_[static_cast<std::size_t>(reduce(z, mod_.M()))];
}

StepFunction::StepFunction(Modulus mod, std::vector<Rational> coeffs)
    : mod_(std::move(mod)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != mod_.num_divisors()) {
        throw InvalidInput("step function has " + std::to_string(coeffs_.size()) + " coefficients, expected " +
                           std::to_string(mod_.num_divisors()));
    }
}

StepFunction StepFunction::zero(const Modulus& mod) {
    return StepFunction(mod, std::vector<Rational>(mod.num_divisors()));
}

StepFunction StepFunction::delta(const Modulus& mod) {
    std::vector<Rational> c(mod.num_divisors());
    c[mod.top_index()] = 1;
    return StepFunction(mod, std::move(c));
}

StepFunction StepFunction::constant(const Modulus& mod, const Rational& value) {
    return StepFunction(mod, std::vector<Rational>(mod.num_divisors(), value));
}

StepFunction StepFunction::from_pairs(const Modulus& mod, std::span<const std::pair<int64_t, Rational>> pairs) {
    std::vector<Rational> c(mod.num_divisors());
    for (const auto& [m, v] : pairs) c[mod.index_of(m)] = v;
    return StepFunction(mod, std::move(c));
}

const Rational& StepFunction::value(int64_t z) const { return coeffs_[class_index_of(z, mod_)]; }

bool StepFunction::is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& c) { return c.is_zero(); });
}

bool StepFunction::is_nonnegative() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& c) { return c.sign() >= 0; });
}

StepFunction StepFunction::scaled(const Rational& factor) const {
    std::vector<Rational> c(coeffs_);
    for (auto& x : c) x *= factor;
    return StepFunction(mod_, std::move(c));
}

DenseFunction StepFunction::to_dense() const {
    const int64_t M = mod_.M();
    std::vector<Rational> v(static_cast<std::size_t>(M));
    for (int64_t z = 0; z < M; ++z) v[static_cast<std::size_t>(z)] = value(z);
    return DenseFunction(mod_, std::move(v));
}

StepFunction average_to_step(const DenseFunction& f) {
    const auto& mod = f.modulus();
    std::vector<Rational> sums(mod.num_divisors());
    for (int64_t z = 0; z < mod.M(); ++z) sums[class_index_of(z, mod)] += f.values()[static_cast<std::size_t>(z)];
    for (std::size_t i = 0; i < sums.size(); ++i) sums[i] /= Rational(mod.class_size(i));
    return StepFunction(mod, std::move(sums));
}

std::optional<StepFunction> as_step(const DenseFunction& f) {
    const auto& mod = f.modulus();
    std::vector<std::optional<Rational>> seen(mod.num_divisors());
    for (int64_t z = 0; z < mod.M(); ++z) {
        auto& slot = seen[class_index_of(z, mod)];
        const auto& v = f.values()[static_cast<std::size_t>(z)];
        if (!slot) slot = v;
        else if (*slot != v) return std::nullopt;
    }
    std::vector<Rational> c;
    c.reserve(seen.size());
    for (auto& s : seen) c.push_back(std::move(*s));
    return StepFunction(mod, std::move(c));
}

StepFunction autocorrelation_step(const Modulus& mod, std::span<const int64_t> A) {
    if (A.empty()) throw InvalidInput("autocorrelation of an empty set");
    const int64_t M = mod.M();
    std::vector<char> member(static_cast<std::size_t>(M), 0);
    for (int64_t a : A) {
        if (a < 0 || a >= M) throw InvalidInput("element " + std::to_string(a) + " outside Z_" + std::to_string(M));
        if (member[static_cast<std::size_t>(a)]) throw InvalidInput("repeated element " + std::to_string(a));
        member[static_cast<std::size_t>(a)] = 1;
    }
    if (!member[0]) throw InvalidInput("set must contain 0");

    // Pair counts per difference class; the average over R_m of 1_A * 1_{-A}
    // is count_m / |R_m|.
    std::vector<int64_t> counts(mod.num_divisors(), 0);
    for (int64_t a : A) {
        for (int64_t b : A) ++counts[class_index_of(a - b, mod)];
    }
    const auto size = static_cast<int64_t>(A.size());
    std::vector<Rational> c(mod.num_divisors());
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (counts[i] != 0) c[i] = Rational(counts[i], size * mod.class_size(i));
    }
    return StepFunction(mod, std::move(c));
}

DenseFunction fold(const DenseFunction& f, int64_t N) {
    const auto& mod = f.modulus();
    if (!mod.divides(N)) throw InvalidInput(std::to_string(N) + " does not divide " + std::to_string(mod.M()));
    if (N < 2) throw InvalidInput("fold level must be at least 2");
    std::vector<Rational> v(static_cast<std::size_t>(N));
    for (int64_t y = 0; y < mod.M(); ++y) v[static_cast<std::size_t>(y % N)] += f.values()[static_cast<std::size_t>(y)];
    return DenseFunction(Modulus(N), std::move(v));
}

StepFunction fold(const StepFunction& f, int64_t N) {
    const auto& mod = f.modulus();
    if (!mod.divides(N)) throw InvalidInput(std::to_string(N) + " does not divide " + std::to_string(mod.M()));
    if (N < 2) throw InvalidInput("fold level must be at least 2");
    Modulus low(N);
    const int64_t copies = mod.M() / N;
    std::vector<Rational> c(low.num_divisors());
    for (std::size_t i = 0; i < c.size(); ++i) {
        const int64_t rep = low.divisor(i) % N;  // representative of R_m in Z_N (0 for m = N)
        for (int64_t k = 0; k < copies; ++k) c[i] += f.value(rep + k * N);
    }
    return StepFunction(low, std::move(c));
}

DenseFunction convolve(const DenseFunction& f, const DenseFunction& g) {
    if (!(f.modulus() == g.modulus())) throw InvalidInput("convolution of functions on different moduli");
    const int64_t M = f.modulus().M();
    std::vector<Rational> out(static_cast<std::size_t>(M));
    for (int64_t y = 0; y < M; ++y) {
        const auto& fy = f.values()[static_cast<std::size_t>(y)];
        if (fy.is_zero()) continue;
        for (int64_t w = 0; w < M; ++w) {
            const auto& gw = g.values()[static_cast<std::size_t>(w)];
            if (gw.is_zero()) continue;
            const int64_t x = (y + w) % M;
            out[static_cast<std::size_t>(x)].add_product(fy, gw);
        }
    }
    return DenseFunction(f.modulus(), std::move(out));
}

Rational total_weight(const DenseFunction& f) {
    Rational s;
    for (const auto& v : f.values()) s += v;
    return s;
}

Rational total_weight(const StepFunction& f) {
    const auto& mod = f.modulus();
    Rational s;
    for (std::size_t i = 0; i < mod.num_divisors(); ++i) s.add_product(f.coeff_at(i), Rational(mod.class_size(i)));
    return s;
}

}  // namespace zmtile
