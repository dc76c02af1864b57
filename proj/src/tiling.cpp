#include "zmtile/tiling.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "zmtile/delsarte.hpp"
#include "zmtile/error.hpp"
#include "zmtile/fourier.hpp"
#include "zmtile/ratlp.hpp"

namespace zmtile {

TileSet::TileSet(Modulus mod, std::vector<int64_t> elements) : mod_(std::move(mod)), elements_(std::move(elements)) {
    std::sort(elements_.begin(), elements_.end());
    if (std::adjacent_find(elements_.begin(), elements_.end()) != elements_.end()) {
        throw InvalidInput("tile set has a repeated element");
    }
    if (elements_.empty() || elements_.front() != 0) throw InvalidInput("tile set must contain 0");
    if (elements_.back() >= mod_.M()) {
        throw InvalidInput("tile element " + std::to_string(elements_.back()) + " outside Z_" +
                           std::to_string(mod_.M()));
    }
}

TileSet TileSet::whole(const Modulus& mod) {
    std::vector<int64_t> all(static_cast<std::size_t>(mod.M()));
    std::iota(all.begin(), all.end(), 0);
    return TileSet(mod, std::move(all));
}

bool TileSet::contains(int64_t z) const { return std::binary_search(elements_.begin(), elements_.end(), z); }

ClassSet div_star(const TileSet& A) {
    const auto& mod = A.modulus();
    std::vector<bool> bits(mod.num_divisors(), false);
    for (int64_t a : A.elements()) {
        for (int64_t b : A.elements()) bits[class_index_of(((a - b) % mod.M() + mod.M()) % mod.M(), mod)] = true;
    }
    return ClassSet::from_bits(mod, std::move(bits));
}

namespace {

void require_same(const Modulus& a, const Modulus& b) {
    if (!(a == b)) {
        throw InvalidInput("modulus mismatch: Z_" + std::to_string(a.M()) + " vs Z_" + std::to_string(b.M()));
    }
}

}  // namespace

bool sands_check(const TileSet& A, const TileSet& B) {
    require_same(A.modulus(), B.modulus());
    if (static_cast<int64_t>(A.size() * B.size()) != A.modulus().M()) return false;
    const auto da = div_star(A);
    const auto db = div_star(B);
    for (std::size_t i = 0; i < A.modulus().top_index(); ++i) {
        if (da.contains_index(i) && db.contains_index(i)) return false;
    }
    return true;
}

bool tiles_directly(const TileSet& A, const TileSet& B) {
    require_same(A.modulus(), B.modulus());
    const int64_t M = A.modulus().M();
    std::vector<int> hits(static_cast<std::size_t>(M), 0);
    for (int64_t a : A.elements()) {
        for (int64_t b : B.elements()) ++hits[static_cast<std::size_t>((a + b) % M)];
    }
    return std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; });
}

namespace {

// Exact cover of Z_M by translates A + b; the smallest uncovered point
// decides which translate comes next, so each complement appears once.
class ComplementSearch {
public:
    ComplementSearch(const TileSet& A, std::size_t limit)
        : A_(A), M_(A.modulus().M()), covered_(static_cast<std::size_t>(M_), false), limit_(limit) {}

    std::vector<TileSet> run() {
        if (M_ % static_cast<int64_t>(A_.size()) != 0) return {};
        place(0);
        recurse();
        return std::move(found_);
    }

private:
    bool fits(int64_t b) const {
        for (int64_t a : A_.elements()) {
            if (covered_[static_cast<std::size_t>((a + b) % M_)]) return false;
        }
        return true;
    }

    void place(int64_t b) {
        for (int64_t a : A_.elements()) covered_[static_cast<std::size_t>((a + b) % M_)] = true;
        B_.push_back(b);
    }

    void unplace() {
        const int64_t b = B_.back();
        for (int64_t a : A_.elements()) covered_[static_cast<std::size_t>((a + b) % M_)] = false;
        B_.pop_back();
    }

    void recurse() {
        if (limit_ && found_.size() >= limit_) return;
        const auto it = std::find(covered_.begin(), covered_.end(), false);
        if (it == covered_.end()) {
            found_.emplace_back(A_.modulus(), B_);
            return;
        }
        const int64_t x = it - covered_.begin();
        std::vector<int64_t> shifts;
        for (int64_t a : A_.elements()) shifts.push_back(((x - a) % M_ + M_) % M_);
        std::sort(shifts.begin(), shifts.end());
        for (int64_t b : shifts) {
            if (!fits(b)) continue;
            place(b);
            recurse();
            unplace();
        }
    }

    const TileSet& A_;
    int64_t M_;
    std::vector<bool> covered_;
    std::vector<int64_t> B_;
    std::vector<TileSet> found_;
    std::size_t limit_;
};

}  // namespace

std::vector<TileSet> tiling_complements(const TileSet& A, std::size_t limit) {
    auto out = ComplementSearch(A, limit).run();
    std::sort(out.begin(), out.end(), [](const TileSet& a, const TileSet& b) {
        return std::lexicographical_compare(a.elements().begin(), a.elements().end(), b.elements().begin(),
                                            b.elements().end());
    });
    return out;
}

bool tiles(const TileSet& A) { return !tiling_complements(A, 1).empty(); }

namespace {

// Step function f with c_M = 1, c_m >= lower on `support` (zero elsewhere),
// f^ >= 0 on `transform_support`, f^ = 0 off it, f^(0) = weight. If
// `target` is set, f^ on that class is maximized.
std::optional<StepFunction> solve_step_lp(const StepFourierMatrix& T, const std::vector<bool>& support,
                                          const Rational& lower, const std::vector<bool>& transform_support,
                                          const Rational& weight, std::optional<std::size_t> target) {
    const auto& mod = T.modulus();
    const std::size_t n = mod.num_divisors();
    const std::size_t top = mod.top_index();
    LpProblem lp;
    std::vector<std::size_t> cols;
    for (std::size_t i = 0; i < top; ++i) {
        if (!support[i]) continue;
        cols.push_back(i);
        lp.add_variable("c_" + std::to_string(mod.divisor(i)), lower);
    }
    for (std::size_t e = 0; e < n; ++e) {
        std::vector<Rational> row(cols.size());
        for (std::size_t v = 0; v < cols.size(); ++v) row[v] = T.at(e, cols[v]);
        const Rational constant = T.at(e, top);
        if (e == top) lp.add_constraint(std::move(row), Relation::eq, weight - constant);
        else if (transform_support[e]) lp.add_constraint(std::move(row), Relation::ge, -constant);
        else lp.add_constraint(std::move(row), Relation::eq, -constant);
    }
    if (target) {
        for (std::size_t v = 0; v < cols.size(); ++v) lp.objective[v] = T.at(*target, cols[v]);
    }
    const auto res = solve(lp);
    if (res.status != LpStatus::optimal) return std::nullopt;
    std::vector<Rational> coeffs(n);
    coeffs[top] = 1;
    for (std::size_t v = 0; v < cols.size(); ++v) coeffs[cols[v]] = res.witness[v];
    return StepFunction(mod, std::move(coeffs));
}

}  // namespace

PdTileResult pd_tile_feasible(const TileSet& A) {
    const auto& mod = A.modulus();
    const int64_t M = mod.M();
    PdTileResult out;
    if (M % static_cast<int64_t>(A.size()) != 0) return out;
    const auto indicator = A.indicator();
    // Frequency class e sees primitive (M/e)-th roots of unity.
    std::vector<bool> zero_of_a(mod.num_divisors(), false);
    zero_of_a[mod.top_index()] = true;
    for (std::size_t e = 0; e < mod.top_index(); ++e) zero_of_a[e] = divides(indicator, M / mod.divisor(e));
    const StepFourierMatrix T(mod);
    out.witness = solve_step_lp(T, std::vector<bool>(mod.num_divisors(), true), Rational(), zero_of_a,
                                Rational(M / static_cast<int64_t>(A.size())), std::nullopt);
    out.feasible = out.witness.has_value();
    return out;
}

PdTilingReport verify_functional_pd_tiling(const StepFunction& f, const StepFunction& g) {
    require_same(f.modulus(), g.modulus());
    const auto& mod = f.modulus();
    const StepFourierMatrix T(mod);
    const auto fh = ft_step(f, T);
    const auto gh = ft_step(g, T);
    const std::size_t top = mod.top_index();

    PdTilingReport r;
    auto& c = r.checks;
    c.nonnegative = f.is_nonnegative() && g.is_nonnegative();
    c.unit_at_zero = f.coeff_at(top) == Rational(1) && g.coeff_at(top) == Rational(1);
    c.positive_definite = fh.is_nonnegative() && gh.is_nonnegative();
    c.convolution_one = true;
    for (std::size_t e = 0; e < top; ++e) {
        if (!fh.coeff_at(e).is_zero() && !gh.coeff_at(e).is_zero()) c.convolution_one = false;
    }
    c.weight_product = total_weight(f) * total_weight(g) == Rational(mod.M());
    r.valid = c.nonnegative && c.unit_at_zero && c.positive_definite && c.convolution_one && c.weight_product;

    auto cm = [](const StepFunction& h) -> std::optional<CycloReport> {
        if (!h.is_nonnegative() || total_weight(h).sign() <= 0) return std::nullopt;
        return t1t2_report(h);
    };
    r.cyclo_f = cm(f);
    r.cyclo_g = cm(g);
    if (r.cyclo_f) {
        r.t1_f = r.cyclo_f->t1;
        r.t2_f = r.cyclo_f->t2;
    }
    if (r.cyclo_g) {
        r.t1_g = r.cyclo_g->t1;
        r.t2_g = r.cyclo_g->t2;
    }
    return r;
}

std::pair<StepFunction, StepFunction> counterexample_pair(int64_t p, int64_t q) {
    if (!is_prime(p)) throw InvalidInput("p = " + std::to_string(p) + " is not prime");
    if (!is_prime(q)) throw InvalidInput("q = " + std::to_string(q) + " is not prime");
    if (!(p < q)) throw InvalidInput("need p < q, got p = " + std::to_string(p) + ", q = " + std::to_string(q));
    if (!(q < p * p)) {
        throw InvalidInput("need q < p^2, got q = " + std::to_string(q) + " >= p^2 = " + std::to_string(p * p));
    }
    const int64_t p2 = p * p;
    const int64_t M = p2 * p2 * q * q;
    const Modulus mod(M);
    const int64_t phi_p = p - 1;
    const int64_t phi_q = q - 1;
    const int64_t phi_q2 = q * (q - 1);
    const int64_t d = 2 * p * q - p2 - q;

    // Table entry (M/p^a, M/q^b) is the value on R_{M / (p^a q^b)}.
    auto cls = [&](int a, int b) {
        int64_t m = M;
        for (int i = 0; i < a; ++i) m /= p;
        for (int i = 0; i < b; ++i) m /= q;
        return m;
    };
    std::vector<std::pair<int64_t, Rational>> f{
        {cls(0, 0), 1},
        {cls(0, 2), Rational(q - p, phi_q2)},
        {cls(1, 1), Rational(1, phi_q)},
        {cls(1, 2), Rational(q - p, phi_q2)},
        {cls(2, 0), Rational(q * q - p * q + p2 - q, p * phi_q2)},
        {cls(2, 1), Rational(p2 - q, p * phi_q2)},
        {cls(3, 0), Rational(q - p, p * phi_q)},
        {cls(4, 2), Rational(1, p2 * phi_q)},
    };
    std::vector<std::pair<int64_t, Rational>> g{
        {cls(0, 0), 1},
        {cls(0, 1), Rational(p * (q - p), d)},
        {cls(1, 0), Rational(q * phi_p, d)},
        {cls(2, 2), Rational(1, d)},
        {cls(3, 1), Rational(q, p * d)},
        {cls(3, 2), Rational(phi_p, p * d)},
        {cls(4, 0), Rational(q - p, p * d)},
        {cls(4, 1), Rational(q - p, p * d)},
    };
    return {StepFunction::from_pairs(mod, f), StepFunction::from_pairs(mod, g)};
}

std::pair<TileSet, TileSet> standard_prime_power_tiling(int64_t p, int alpha, const std::vector<int>& J) {
    if (!is_prime(p)) throw InvalidInput("p = " + std::to_string(p) + " is not prime");
    if (alpha < 1) throw InvalidInput("exponent must be at least 1");
    int64_t M = 1;
    for (int i = 0; i < alpha; ++i) {
        if (M > kMaxModulus / p) throw ResourceLimit("p^alpha exceeds the modulus bound");
        M *= p;
    }
    std::vector<bool> in_j(static_cast<std::size_t>(alpha) + 1, false);
    for (int j : J) {
        if (j < 1 || j > alpha) throw InvalidInput("digit position " + std::to_string(j) + " outside [1, alpha]");
        if (in_j[static_cast<std::size_t>(j)]) throw InvalidInput("digit position repeated");
        in_j[static_cast<std::size_t>(j)] = true;
    }
    auto digits = [&](bool want) {
        std::vector<int64_t> out{0};
        int64_t place = 1;
        for (int j = 1; j <= alpha; ++j, place *= p) {
            if (in_j[static_cast<std::size_t>(j)] != want) continue;
            std::vector<int64_t> next;
            for (int64_t a = 0; a < p; ++a) {
                for (int64_t x : out) next.push_back(x + a * place);
            }
            out = std::move(next);
        }
        return out;
    };
    const Modulus mod(M);
    TileSet C(mod, digits(true));
    TileSet D(mod, digits(false));
    if (!tiles_directly(C, D)) throw std::logic_error("digit construction failed to tile");
    return {std::move(C), std::move(D)};
}

std::optional<PdPair> construct_pd_pair(const ClassSet& H) {
    const auto& mod = H.modulus();
    const Rational delta = delta_screen(mod);
    const StepFourierMatrix T(mod);
    if (!screen(H, delta, T).passes) {
        throw InvalidInput("class set " + H.to_list() + " does not pass the Delsarte screen");
    }
    const auto Hc = standard_complement(H);
    const int64_t k = k_of(H);
    std::optional<std::size_t> target;
    if (auto P = support_T2_witness(H)) target = mod.index_of(mod.M() / *P);

    for (bool swapped : {false, true}) {
        const auto& f_hat_support = swapped ? Hc.bits() : H.bits();
        const auto& g_hat_support = swapped ? H.bits() : Hc.bits();
        auto f = solve_step_lp(T, H.bits(), delta, f_hat_support, Rational(k), target);
        if (!f) continue;
        auto g = solve_step_lp(T, Hc.bits(), Rational(), g_hat_support, Rational(mod.M() / k), std::nullopt);
        if (!g) continue;
        if (!verify_functional_pd_tiling(*f, *g).valid) {
            throw std::logic_error("constructed pair failed verification");
        }
        return PdPair{std::move(*f), std::move(*g), swapped};
    }
    return std::nullopt;
}

}  // namespace zmtile
