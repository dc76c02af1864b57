#include "zmtile/delsarte.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>

#include "zmtile/error.hpp"

namespace zmtile {

std::string to_string(BoundKind kind) {
    switch (kind) {
        case BoundKind::plus: return "plus";
        case BoundKind::minus: return "minus";
        case BoundKind::delta_plus: return "delta_plus";
    }
    return "?";
}

ClassSet standard_complement(const ClassSet& H) {
    std::vector<bool> bits(H.bits().size());
    for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = !H.contains_index(i);
    bits[H.modulus().top_index()] = true;
    return ClassSet::from_bits(H.modulus(), std::move(bits));
}

int64_t k_of(const ClassSet& H) {
    const auto& mod = H.modulus();
    int64_t k = 1;
    for (const auto& f : mod.factors()) {
        int64_t s = 1;
        for (int a = 1; a <= f.exponent; ++a) {
            s *= f.prime;
            if (H.contains(mod.M() / s)) k *= f.prime;
        }
    }
    return k;
}

Rational delta_M(const Modulus& mod) { return Rational(1, mod.M() * mod.phi_of(mod.M())); }

Rational delta_screen(const Modulus& mod) {
    return Rational(1, mod.M()) * Rational(1, mod.M() * mod.phi_of(mod.M()));
}

namespace {

// cols[v] is the divisor index behind LP variable v.
LpProblem build_lp(const ClassSet& H, BoundKind kind, const Rational& delta, const StepFourierMatrix& T,
                   std::vector<std::size_t>& cols) {
    const auto& mod = H.modulus();
    if (!(T.modulus() == mod)) throw InvalidInput("Fourier matrix built for a different modulus");
    if (kind == BoundKind::delta_plus && delta.sign() <= 0) throw InvalidInput("delta must be positive");
    const std::size_t n = mod.num_divisors();
    const std::size_t top = mod.top_index();

    LpProblem lp;
    lp.objective_offset = 1;  // c_M |R_M| with c_M = 1
    std::vector<std::size_t> var_of(n, n);
    for (std::size_t i = 0; i < top; ++i) {
        const bool in_h = H.contains_index(i);
        std::optional<Rational> lo, hi;
        switch (kind) {
            case BoundKind::plus:
                if (!in_h) continue;
                lo = Rational();
                break;
            case BoundKind::minus:
                if (!in_h) hi = Rational();
                break;
            case BoundKind::delta_plus:
                if (!in_h) continue;
                lo = delta;
                break;
        }
        cols.push_back(i);
        var_of[i] = lp.add_variable("c_" + std::to_string(mod.divisor(i)), lo, hi);
        lp.objective[var_of[i]] = mod.class_size(i);
    }
    // h^(e) >= 0; the c_M = 1 term moves to the right-hand side.
    for (std::size_t e = 0; e < n; ++e) {
        std::vector<Rational> row(lp.num_vars);
        for (std::size_t i = 0; i < top; ++i) {
            if (var_of[i] != n) row[var_of[i]] = T.at(e, i);
        }
        lp.add_constraint(std::move(row), Relation::ge, -T.at(e, top));
    }
    return lp;
}

StepFunction lift(const Modulus& mod, const std::vector<std::size_t>& cols, const std::vector<Rational>& x) {
    std::vector<Rational> coeffs(mod.num_divisors());
    coeffs[mod.top_index()] = 1;
    for (std::size_t v = 0; v < cols.size(); ++v) coeffs[cols[v]] = x[v];
    return StepFunction(mod, std::move(coeffs));
}

}  // namespace

LpProblem delsarte_lp(const ClassSet& H, BoundKind kind, const Rational& delta, const StepFourierMatrix& T) {
    std::vector<std::size_t> cols;
    return build_lp(H, kind, delta, T, cols);
}

BoundResult delsarte_bound(const ClassSet& H, BoundKind kind, const Rational& delta, const StepFourierMatrix& T) {
    std::vector<std::size_t> cols;
    const auto lp = build_lp(H, kind, delta, T, cols);
    BoundResult out;
    if (lp.num_vars == 0) {
        // Only h = delta_0 is admissible.
        out.feasible = true;
        out.value = 1;
        out.extremal = StepFunction::delta(H.modulus());
        return out;
    }
    const auto res = solve(lp);
    if (res.status == LpStatus::unbounded) throw std::logic_error("Delsarte LP reported unbounded");
    if (res.status == LpStatus::infeasible) return out;
    out.feasible = true;
    out.value = res.value;
    out.extremal = lift(H.modulus(), cols, res.witness);
    return out;
}

BoundResult delsarte_bound(const ClassSet& H, BoundKind kind, const Rational& delta) {
    return delsarte_bound(H, kind, delta, StepFourierMatrix(H.modulus()));
}

std::optional<double> delsarte_bound_float(const ClassSet& H, BoundKind kind, const Rational& delta,
                                           const StepFourierMatrix& T) {
    const auto lp = delsarte_lp(H, kind, delta, T);
    if (lp.num_vars == 0) return 1.0;
    const auto res = solve_float(lp);
    if (res.status != LpStatus::optimal) return std::nullopt;
    return res.value;
}

int64_t max_clique_modulus() {
    if (const char* env = std::getenv("ZMTILE_MAX_CLIQUE_M")) {
        char* end = nullptr;
        const long long v = std::strtoll(env, &end, 10);
        if (end != env && *end == '\0' && v >= 2) return v;
    }
    return 512;
}

namespace {

using Bits = std::vector<uint64_t>;

bool any(const Bits& b) {
    for (auto w : b) {
        if (w) return true;
    }
    return false;
}

// Branch and bound with greedy colouring (Tomita-Seki style). `floor` is a
// clique size already known elsewhere; only strictly larger cliques count.
// The search stops as soon as it reaches `cap`, a proven upper bound.
class CliqueSearch {
public:
    CliqueSearch(std::vector<Bits> adj, std::size_t floor, std::size_t cap)
        : adj_(std::move(adj)), words_((adj_.size() + 63) / 64), floor_(floor), cap_(cap) {}

    std::vector<std::size_t> run() {
        Bits all(words_, 0);
        for (std::size_t v = 0; v < adj_.size(); ++v) all[v / 64] |= uint64_t{1} << (v % 64);
        std::vector<std::size_t> cur;
        if (!adj_.empty()) expand(all, cur);
        return best_;
    }

private:
    std::size_t bound() const { return std::max(best_.size(), floor_); }

    void expand(Bits P, std::vector<std::size_t>& cur) {
        std::vector<std::size_t> order;
        std::vector<std::size_t> colour;
        colour_sort(P, order, colour);
        for (std::size_t k = order.size(); k-- > 0;) {
            if (cur.size() + colour[k] <= bound() || bound() >= cap_) return;
            const std::size_t v = order[k];
            cur.push_back(v);
            Bits next(words_);
            for (std::size_t w = 0; w < words_; ++w) next[w] = P[w] & adj_[v][w];
            if (any(next)) expand(std::move(next), cur);
            else if (cur.size() > bound()) best_ = cur;
            cur.pop_back();
            P[v / 64] &= ~(uint64_t{1} << (v % 64));
        }
    }

    void colour_sort(const Bits& P, std::vector<std::size_t>& order, std::vector<std::size_t>& colour) const {
        Bits uncoloured = P;
        std::size_t k = 0;
        while (any(uncoloured)) {
            ++k;
            Bits Q = uncoloured;
            for (std::size_t w = 0; w < words_; ++w) {
                while (Q[w]) {
                    const std::size_t v = w * 64 + static_cast<std::size_t>(std::countr_zero(Q[w]));
                    Q[w] &= Q[w] - 1;
                    uncoloured[w] &= ~(uint64_t{1} << (v % 64));
                    for (std::size_t u = w; u < words_; ++u) Q[u] &= ~adj_[v][u];
                    order.push_back(v);
                    colour.push_back(k);
                }
            }
        }
    }

    std::vector<Bits> adj_;
    std::size_t words_;
    std::size_t floor_;
    std::size_t cap_;
    std::vector<std::size_t> best_;
};

// Largest clique of the graph induced on `verts` that beats `floor`, or empty.
// Residue order is kept: it keeps cosets together, which the colouring bound
// exploits far better than a degree ordering does.
std::vector<int64_t> clique_within(const std::vector<int64_t>& verts, const std::vector<bool>& live, int64_t M,
                                   std::size_t floor, std::size_t cap) {
    const std::size_t n = verts.size();
    const auto adjacent = [&](int64_t a, int64_t b) {
        return live[static_cast<std::size_t>(((a - b) % M + M) % M)];
    };

    std::vector<Bits> adj(n, Bits((n + 63) / 64, 0));
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            if (a != b && adjacent(verts[a], verts[b])) adj[a][b / 64] |= uint64_t{1} << (b % 64);
        }
    }
    std::vector<int64_t> out;
    for (std::size_t v : CliqueSearch(std::move(adj), floor, cap).run()) out.push_back(verts[v]);
    return out;
}

// A large clique through 0 of the Cayley graph with connection set
// {z != 0 : edge[z]}, where edge depends on the class of z only. Takes the
// best of the subgroups dZ_M that fit and a greedy growth from every class
// representative. No optimality claim.
std::vector<int64_t> heuristic_clique(const Modulus& mod, const std::vector<bool>& edge) {
    const int64_t M = mod.M();
    const auto idx = [M](int64_t z) { return static_cast<std::size_t>(((z % M) + M) % M); };
    std::vector<int64_t> best{0};
    for (int64_t d : mod.divisors()) {
        if (M / d <= static_cast<int64_t>(best.size())) continue;
        bool closed = true;
        for (int64_t z = d; z < M && closed; z += d) closed = edge[idx(z)];
        if (!closed) continue;
        best.clear();
        for (int64_t z = 0; z < M; z += d) best.push_back(z);
    }
    const std::size_t words = static_cast<std::size_t>((M + 63) / 64);
    std::vector<Bits> adj(static_cast<std::size_t>(M), Bits(words, 0));
    for (int64_t a = 0; a < M; ++a) {
        for (int64_t b = 0; b < M; ++b) {
            if (a != b && edge[idx(a - b)]) adj[idx(a)][idx(b) / 64] |= uint64_t{1} << (idx(b) % 64);
        }
    }
    const auto count_and = [&](const Bits& x, const Bits& y) {
        std::size_t c = 0;
        for (std::size_t w = 0; w < words; ++w) c += static_cast<std::size_t>(std::popcount(x[w] & y[w]));
        return c;
    };
    for (int64_t m : mod.divisors()) {
        if (m == M || !edge[idx(m)]) continue;
        std::vector<int64_t> clique{0, m};
        Bits cand(words);
        for (std::size_t w = 0; w < words; ++w) cand[w] = adj[0][w] & adj[idx(m)][w];
        while (any(cand)) {
            std::size_t pick = 0, score = 0;
            bool first = true;
            for (std::size_t w = 0; w < words; ++w) {
                for (uint64_t bits = cand[w]; bits; bits &= bits - 1) {
                    const std::size_t v = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
                    const std::size_t sc = count_and(adj[v], cand);
                    if (first || sc > score) pick = v, score = sc, first = false;
                }
            }
            clique.push_back(static_cast<int64_t>(pick));
            for (std::size_t w = 0; w < words; ++w) cand[w] &= adj[pick][w];
        }
        if (clique.size() > best.size()) best = std::move(clique);
    }
    return best;
}

}  // namespace

std::vector<int64_t> maximum_clique(const ClassSet& H) {
    const auto& mod = H.modulus();
    const int64_t M = mod.M();
    if (M > max_clique_modulus()) {
        throw ResourceLimit("clique search refused for M = " + std::to_string(M) + " (limit " +
                            std::to_string(max_clique_modulus()) + ", see ZMTILE_MAX_CLIQUE_M)");
    }
    std::vector<bool> in_h(static_cast<std::size_t>(M));
    std::vector<std::size_t> cls(static_cast<std::size_t>(M));
    for (int64_t z = 0; z < M; ++z) {
        cls[static_cast<std::size_t>(z)] = class_index_of(z, mod);
        in_h[static_cast<std::size_t>(z)] = H.contains_index(cls[static_cast<std::size_t>(z)]);
    }
    // Gamma_H is vertex-transitive and units act as automorphisms fixing 0,
    // and both preserve every class. So for the first class c (in the round
    // order) among the differences of a maximum clique, some image of that
    // clique contains 0 and c and has no difference in an earlier class.
    // Round c therefore searches Gamma restricted to the classes not yet
    // done, through 0 and c.
    std::vector<std::size_t> rounds;
    for (std::size_t i = 0; i < mod.top_index(); ++i) {
        if (H.contains_index(i)) rounds.push_back(i);
    }
    // Largest classes first: the later, sparser rounds then prune fast.
    std::stable_sort(rounds.begin(), rounds.end(),
                     [&](std::size_t a, std::size_t b) { return mod.class_size(a) > mod.class_size(b); });

    std::vector<int64_t> best = heuristic_clique(mod, in_h);
    // Gamma_H is vertex-transitive and its complement is the Cayley graph of
    // the other nonzero classes, so a clique K' there gives
    // omega(H) <= M / |K'| (clique times independent set <= M).
    std::vector<bool> out_h(in_h.size());
    for (int64_t z = 1; z < M; ++z) out_h[static_cast<std::size_t>(z)] = !in_h[static_cast<std::size_t>(z)];
    const std::size_t cap = static_cast<std::size_t>(M) / heuristic_clique(mod, out_h).size();
    std::vector<bool> live = in_h;
    for (std::size_t i : rounds) {
        if (best.size() >= cap) break;
        const int64_t m = mod.divisor(i);
        std::vector<int64_t> verts;
        for (int64_t z = 1; z < M; ++z) {
            if (z != m && live[static_cast<std::size_t>(z)] && live[static_cast<std::size_t>(((z - m) % M + M) % M)]) {
                verts.push_back(z);
            }
        }
        // best.size() - 2 vertices beyond {0, m} only ties.
        const std::size_t floor = best.size() >= 2 ? best.size() - 2 : 0;
        if (best.size() < 2 || verts.size() > floor) {
            auto found = clique_within(verts, live, M, floor, cap - 2);
            if (best.size() < 2 || found.size() > floor) {
                best = {0, m};
                best.insert(best.end(), found.begin(), found.end());
            }
        }
        for (int64_t z = 1; z < M; ++z) {
            if (cls[static_cast<std::size_t>(z)] == i) live[static_cast<std::size_t>(z)] = false;
        }
    }
    std::sort(best.begin(), best.end());
    return best;
}

int64_t clique_number(const ClassSet& H) { return static_cast<int64_t>(maximum_clique(H).size()); }

ScreenReport screen(const ClassSet& H, const Rational& delta, const StepFourierMatrix& T, bool solve_plus) {
    ScreenReport r;
    r.delta_used = delta;
    r.k_H = k_of(H);
    const Rational k(r.k_H);
    const auto dp = delsarte_bound(H, BoundKind::delta_plus, delta, T);
    if (!dp.feasible) return r;
    r.d_delta_plus = dp.value;
    if (dp.value != k) return r;
    r.d_minus = delsarte_bound(H, BoundKind::minus, delta, T).value;
    if (*r.d_minus != k) return r;
    if (solve_plus) {
        r.d_plus = delsarte_bound(H, BoundKind::plus, delta, T).value;
        r.d_plus_solved = true;
    } else {
        r.d_plus = k;
    }
    r.passes = *r.d_plus == k;
    return r;
}

ScreenReport screen(const ClassSet& H, const Rational& delta, bool solve_plus) {
    return screen(H, delta, StepFourierMatrix(H.modulus()), solve_plus);
}

}  // namespace zmtile
