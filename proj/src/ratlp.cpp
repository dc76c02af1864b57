#include "zmtile/ratlp.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

#include "zmtile/error.hpp"

namespace zmtile {

LpProblem::LpProblem(std::size_t n) : num_vars(n), names(n), objective(n), lower(n), upper(n) {}

std::size_t LpProblem::add_variable(std::string name, std::optional<Rational> lo, std::optional<Rational> hi) {
    names.push_back(std::move(name));
    objective.emplace_back();
    lower.push_back(std::move(lo));
    upper.push_back(std::move(hi));
    for (auto& c : constraints) c.coeffs.emplace_back();
    return num_vars++;
}

void LpProblem::add_constraint(std::vector<Rational> coeffs, Relation rel, Rational rhs) {
    constraints.push_back({std::move(coeffs), rel, std::move(rhs)});
}

void LpProblem::validate() const {
    if (objective.size() != num_vars || lower.size() != num_vars || upper.size() != num_vars) {
        throw InvalidInput("LP objective/bounds length does not match the variable count");
    }
    for (std::size_t i = 0; i < constraints.size(); ++i) {
        if (constraints[i].coeffs.size() != num_vars) {
            throw InvalidInput("LP constraint " + std::to_string(i) + " has the wrong length");
        }
    }
    bool bounded = false;
    for (std::size_t j = 0; j < num_vars; ++j) bounded = bounded || lower[j] || upper[j];
    if (constraints.empty() && !bounded) throw InvalidInput("LP has no constraints and no bounds");
}

std::string to_string(LpStatus s) {
    switch (s) {
        case LpStatus::optimal: return "optimal";
        case LpStatus::infeasible: return "infeasible";
        case LpStatus::unbounded: return "unbounded";
    }
    return "?";
}

std::size_t default_max_pivots() {
    if (const char* env = std::getenv("ZMTILE_MAX_LP_PIVOTS")) {
        char* end = nullptr;
        const auto v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return 100000;
}

namespace {

template <class T>
struct Arith;

template <>
struct Arith<Rational> {
    static bool zero(const Rational& x) { return x.is_zero(); }
    static bool positive(const Rational& x) { return x.sign() > 0; }
    static Rational from(const Rational& q) { return q; }
    static void clean(Rational&) {}
};

template <>
struct Arith<double> {
    static constexpr double kTol = 1e-9;
    static bool zero(double x) { return std::fabs(x) <= kTol; }
    static bool positive(double x) { return x > kTol; }
    static double from(const Rational& q) { return q.to_double(); }
    static void clean(double& x) {
        if (std::fabs(x) < 1e-13) x = 0.0;
    }
};

// maximize cost . y + offset over y >= 0, rows normalized to rhs >= 0.
struct StandardForm {
    struct VarMap {
        Rational shift;
        std::size_t pos = 0;
        int pos_sign = 1;
        std::optional<std::size_t> neg;
    };

    std::size_t num_cols = 0;
    std::vector<std::vector<Rational>> rows;
    std::vector<Relation> rels;
    std::vector<Rational> rhs;
    std::vector<Rational> cost;
    std::vector<VarMap> map;
    bool infeasible_bounds = false;
};

StandardForm to_standard(const LpProblem& p) {
    StandardForm sf;
    sf.map.resize(p.num_vars);
    std::vector<std::pair<std::size_t, Rational>> range_rows;  // (col, width)
    for (std::size_t j = 0; j < p.num_vars; ++j) {
        auto& vm = sf.map[j];
        const auto& lo = p.lower[j];
        const auto& hi = p.upper[j];
        if (lo && hi && *lo > *hi) sf.infeasible_bounds = true;
        vm.pos = sf.num_cols++;
        if (lo) {
            vm.shift = *lo;
            if (hi) range_rows.emplace_back(vm.pos, *hi - *lo);
        } else if (hi) {
            vm.shift = *hi;
            vm.pos_sign = -1;
        } else {
            vm.neg = sf.num_cols++;
        }
    }
    sf.cost.assign(sf.num_cols, Rational());
    for (std::size_t j = 0; j < p.num_vars; ++j) {
        const auto& vm = sf.map[j];
        const auto& c = p.objective[j];
        if (c.is_zero()) continue;
        sf.cost[vm.pos] = vm.pos_sign > 0 ? c : -c;
        if (vm.neg) sf.cost[*vm.neg] = -c;
    }
    auto push_row = [&](std::vector<Rational> row, Relation rel, Rational b) {
        if (b.sign() < 0) {
            for (auto& a : row) a = -a;
            b = -b;
            if (rel == Relation::le) rel = Relation::ge;
            else if (rel == Relation::ge) rel = Relation::le;
        }
        sf.rows.push_back(std::move(row));
        sf.rels.push_back(rel);
        sf.rhs.push_back(std::move(b));
    };
    for (const auto& con : p.constraints) {
        std::vector<Rational> row(sf.num_cols);
        Rational b = con.rhs;
        for (std::size_t j = 0; j < p.num_vars; ++j) {
            const auto& a = con.coeffs[j];
            if (a.is_zero()) continue;
            const auto& vm = sf.map[j];
            row[vm.pos] += vm.pos_sign > 0 ? a : -a;
            if (vm.neg) row[*vm.neg] -= a;
            if (!vm.shift.is_zero()) b -= a * vm.shift;
        }
        push_row(std::move(row), con.rel, std::move(b));
    }
    for (auto& [col, width] : range_rows) {
        std::vector<Rational> row(sf.num_cols);
        row[col] = 1;
        push_row(std::move(row), Relation::le, width);
    }
    return sf;
}

template <class T>
class Tableau {
public:
    Tableau(const StandardForm& sf, std::size_t max_pivots) : max_pivots_(max_pivots) {
        m_ = sf.rows.size();
        n_ = sf.num_cols;
        std::size_t slacks = 0, arts = 0;
        for (auto rel : sf.rels) {
            if (rel != Relation::eq) ++slacks;
            if (rel != Relation::le) ++arts;
        }
        art_start_ = n_ + slacks;
        cols_ = art_start_ + arts;
        rows_.assign(m_, std::vector<T>(cols_, T{}));
        b_.resize(m_);
        basis_.resize(m_);
        std::size_t s = n_, a = art_start_;
        for (std::size_t i = 0; i < m_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) rows_[i][j] = Arith<T>::from(sf.rows[i][j]);
            b_[i] = Arith<T>::from(sf.rhs[i]);
            switch (sf.rels[i]) {
                case Relation::le:
                    rows_[i][s] = T(1);
                    basis_[i] = s++;
                    break;
                case Relation::ge:
                    rows_[i][s++] = T(-1);
                    rows_[i][a] = T(1);
                    basis_[i] = a++;
                    break;
                case Relation::eq:
                    rows_[i][a] = T(1);
                    basis_[i] = a++;
                    break;
            }
        }
        cost_.assign(cols_, T{});
        for (std::size_t j = 0; j < n_; ++j) cost_[j] = Arith<T>::from(sf.cost[j]);
    }

    LpStatus run() {
        if (art_start_ < cols_) {
            std::vector<T> phase1(cols_, T{});
            for (std::size_t j = art_start_; j < cols_; ++j) phase1[j] = T(-1);
            price(phase1);
            if (iterate(cols_) == LpStatus::unbounded) return LpStatus::infeasible;  // cannot happen
            if (Arith<T>::positive(-z_)) return LpStatus::infeasible;
            drive_out_artificials();
        }
        price(cost_);
        return iterate(art_start_);
    }

    std::vector<T> primal() const {
        std::vector<T> y(n_, T{});
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < n_) y[basis_[i]] = b_[i];
        }
        return y;
    }

    std::size_t pivots() const { return pivots_; }

private:
    void price(const std::vector<T>& c) {
        d_ = c;
        z_ = T{};
        for (std::size_t i = 0; i < m_; ++i) {
            const T& cb = c[basis_[i]];
            if (Arith<T>::zero(cb)) continue;
            for (std::size_t j = 0; j < cols_; ++j) {
                if (!Arith<T>::zero(rows_[i][j])) d_[j] -= cb * rows_[i][j];
            }
            z_ += cb * b_[i];
        }
    }

    LpStatus iterate(std::size_t allowed) {
        while (true) {
            std::size_t enter = allowed;
            for (std::size_t j = 0; j < allowed; ++j) {
                if (Arith<T>::positive(d_[j])) {
                    enter = j;
                    break;
                }
            }
            if (enter == allowed) return LpStatus::optimal;
            std::size_t leave = m_;
            T best{};
            for (std::size_t i = 0; i < m_; ++i) {
                if (!Arith<T>::positive(rows_[i][enter])) continue;
                T ratio = b_[i] / rows_[i][enter];
                if (leave == m_ || ratio < best || (!(best < ratio) && basis_[i] < basis_[leave])) {
                    if (leave != m_ && !(ratio < best) && best < ratio) continue;
                    leave = i;
                    best = std::move(ratio);
                }
            }
            if (leave == m_) return LpStatus::unbounded;
            pivot(leave, enter);
        }
    }

    void pivot(std::size_t r, std::size_t s) {
        if (++pivots_ > max_pivots_) {
            throw ResourceLimit("LP pivot ceiling of " + std::to_string(max_pivots_) + " exceeded");
        }
        auto& row = rows_[r];
        const T piv = row[s];
        nz_.clear();
        for (std::size_t j = 0; j < cols_; ++j) {
            if (Arith<T>::zero(row[j])) {
                row[j] = T{};
                continue;
            }
            row[j] /= piv;
            nz_.push_back(j);
        }
        b_[r] /= piv;
        row[s] = T(1);
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r) continue;
            auto& other = rows_[i];
            if (Arith<T>::zero(other[s])) continue;
            const T f = other[s];
            for (std::size_t j : nz_) {
                other[j] -= f * row[j];
                Arith<T>::clean(other[j]);
            }
            other[s] = T{};
            b_[i] -= f * b_[r];
            Arith<T>::clean(b_[i]);
        }
        if (!Arith<T>::zero(d_[s])) {
            const T f = d_[s];
            for (std::size_t j : nz_) {
                d_[j] -= f * row[j];
                Arith<T>::clean(d_[j]);
            }
            d_[s] = T{};
            z_ += f * b_[r];
        }
        basis_[r] = s;
    }

    void drive_out_artificials() {
        for (std::size_t i = 0; i < m_;) {
            if (basis_[i] < art_start_) {
                ++i;
                continue;
            }
            std::size_t col = art_start_;
            for (std::size_t j = 0; j < art_start_; ++j) {
                if (!Arith<T>::zero(rows_[i][j])) {
                    col = j;
                    break;
                }
            }
            if (col < art_start_) {
                pivot(i, col);
                ++i;
            } else {
                // Redundant row.
                rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(i));
                b_.erase(b_.begin() + static_cast<std::ptrdiff_t>(i));
                basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
                --m_;
            }
        }
    }

    std::size_t m_ = 0, n_ = 0, cols_ = 0, art_start_ = 0;
    std::vector<std::vector<T>> rows_;
    std::vector<T> b_;
    std::vector<std::size_t> basis_;
    std::vector<T> cost_;
    std::vector<T> d_;
    T z_{};
    std::vector<std::size_t> nz_;
    std::size_t pivots_ = 0;
    std::size_t max_pivots_;
};

template <class T>
std::vector<T> recover(const StandardForm& sf, const std::vector<T>& y) {
    std::vector<T> x(sf.map.size());
    for (std::size_t j = 0; j < sf.map.size(); ++j) {
        const auto& vm = sf.map[j];
        T v = Arith<T>::from(vm.shift);
        if (vm.pos_sign > 0) v += y[vm.pos];
        else v -= y[vm.pos];
        if (vm.neg) v -= y[*vm.neg];
        x[j] = v;
    }
    return x;
}

}  // namespace

LpResult solve(const LpProblem& problem, const SolveOptions& options) {
    problem.validate();
    const auto sf = to_standard(problem);
    LpResult out;
    if (sf.infeasible_bounds) return out;
    Tableau<Rational> tab(sf, options.max_pivots ? options.max_pivots : default_max_pivots());
    out.status = tab.run();
    out.pivots = tab.pivots();
    if (out.status == LpStatus::optimal) {
        out.witness = recover(sf, tab.primal());
        out.value = objective_at(problem, out.witness);
    }
    return out;
}

FloatLpResult solve_float(const LpProblem& problem, const SolveOptions& options) {
    problem.validate();
    const auto sf = to_standard(problem);
    FloatLpResult out;
    if (sf.infeasible_bounds) return out;
    Tableau<double> tab(sf, options.max_pivots ? options.max_pivots : default_max_pivots());
    out.status = tab.run();
    out.pivots = tab.pivots();
    if (out.status == LpStatus::optimal) {
        out.witness = recover(sf, tab.primal());
        double v = problem.objective_offset.to_double();
        for (std::size_t j = 0; j < problem.num_vars; ++j) v += problem.objective[j].to_double() * out.witness[j];
        out.value = v;
    }
    return out;
}

bool is_feasible_point(const LpProblem& problem, const std::vector<Rational>& x) {
    if (x.size() != problem.num_vars) return false;
    for (std::size_t j = 0; j < problem.num_vars; ++j) {
        if (problem.lower[j] && x[j] < *problem.lower[j]) return false;
        if (problem.upper[j] && x[j] > *problem.upper[j]) return false;
    }
    for (const auto& con : problem.constraints) {
        Rational lhs;
        for (std::size_t j = 0; j < problem.num_vars; ++j) lhs.add_product(con.coeffs[j], x[j]);
        switch (con.rel) {
            case Relation::le:
                if (lhs > con.rhs) return false;
                break;
            case Relation::ge:
                if (lhs < con.rhs) return false;
                break;
            case Relation::eq:
                if (lhs != con.rhs) return false;
                break;
        }
    }
    return true;
}

Rational objective_at(const LpProblem& problem, const std::vector<Rational>& x) {
    Rational v = problem.objective_offset;
    for (std::size_t j = 0; j < problem.num_vars; ++j) v.add_product(problem.objective[j], x[j]);
    return v;
}

}  // namespace zmtile
