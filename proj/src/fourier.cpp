#include "zmtile/fourier.hpp"

#include <numeric>

#include "zmtile/error.hpp"

namespace zmtile {

StepFourierMatrix::StepFourierMatrix(Modulus mod) : mod_(std::move(mod)), n_(mod_.num_divisors()), entries_(n_ * n_) {
    const int64_t M = mod_.M();
    for (std::size_t ei = 0; ei < n_; ++ei) {
        const int64_t e = mod_.divisor(ei);
        for (std::size_t mi = 0; mi < n_; ++mi) {
            const int64_t m = mod_.divisor(mi);
            const int64_t g = std::gcd(M / m, e);
            int64_t sum = 0;
            for (std::size_t di = 0; di < n_; ++di) {
                const int64_t d = mod_.divisor(di);
                if (d > g) break;
                if (g % d != 0) continue;
                sum += mod_.mu_of(M / (m * d)) * d;
            }
            entries_[ei * n_ + mi] = sum;
        }
    }
}

StepFourierMatrix ft_class_matrix(const Modulus& mod) { return StepFourierMatrix(mod); }

StepFunction ft_step(const StepFunction& f, const StepFourierMatrix& T) {
    if (!(f.modulus() == T.modulus())) throw InvalidInput("Fourier matrix built for a different modulus");
    const std::size_t n = T.size();
    std::vector<Rational> out(n);
    for (std::size_t e = 0; e < n; ++e) {
        for (std::size_t m = 0; m < n; ++m) {
            const auto& c = f.coeff_at(m);
            if (!c.is_zero()) out[e].add_product(c, Rational(T.at(e, m)));
        }
    }
    return StepFunction(f.modulus(), std::move(out));
}

StepFunction ft_step(const StepFunction& f) { return ft_step(f, StepFourierMatrix(f.modulus())); }

std::optional<Rational> eigen_check(const StepFunction& f) {
    if (f.is_zero()) throw InvalidInput("eigenvalue of the zero function is undefined");
    const auto fh = ft_step(f);
    std::optional<Rational> lambda;
    for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
        if (!f.coeff_at(i).is_zero()) {
            lambda = fh.coeff_at(i) / f.coeff_at(i);
            break;
        }
    }
    for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
        if (fh.coeff_at(i) != *lambda * f.coeff_at(i)) return std::nullopt;
    }
    return lambda;
}

ClassSet ft_support(const StepFunction& f) {
    const auto fh = ft_step(f);
    std::vector<bool> bits(fh.coeffs().size());
    for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = !fh.coeff_at(i).is_zero();
    if (!bits[f.modulus().top_index()]) {
        // Zero total weight: the support misses the class of 0, which a
        // ClassSet cannot represent.
        throw InvalidInput("transform vanishes at 0; support is not a class set");
    }
    return ClassSet::from_bits(f.modulus(), std::move(bits));
}

}  // namespace zmtile
