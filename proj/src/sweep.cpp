#include "zmtile/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "zmtile/cyclotomic.hpp"
#include "zmtile/error.hpp"

namespace zmtile {

void require_sweep_modulus(const Modulus& mod) {
    const auto f = mod.factors();
    bool ok = f.size() == 3;
    for (const auto& pp : f) ok = ok && pp.exponent == 2;
    if (!ok) {
        throw InvalidInput("sweep needs M = (p1 p2 p3)^2 with three distinct primes; got M = " +
                           std::to_string(mod.M()));
    }
}

CandidateSpace::CandidateSpace(const Modulus& mod, RowSelection row)
    : mod_(mod), row_(row), base_(mod.num_divisors(), false) {
    require_sweep_modulus(mod_);
    const int64_t M = mod_.M();
    base_[mod_.top_index()] = true;
    const auto f = mod_.factors();
    for (std::size_t i = 0; i < 3; ++i) {
        if (row_[i] != 1 && row_[i] != 2) throw InvalidInput("row exponents must be 1 or 2");
        const int64_t s = row_[i] == 1 ? f[i].prime : f[i].prime * f[i].prime;
        base_[mod_.index_of(M / s)] = true;
    }
    for (std::size_t i = 0; i < mod_.top_index(); ++i) {
        if (!mod_.is_prime_power(M / mod_.divisor(i))) free_.push_back(i);
    }
}

std::vector<int64_t> CandidateSpace::prime_powers() const {
    std::vector<int64_t> out;
    const auto f = mod_.factors();
    for (std::size_t i = 0; i < 3; ++i) out.push_back(row_[i] == 1 ? f[i].prime : f[i].prime * f[i].prime);
    return out;
}

std::string CandidateSpace::label() const {
    std::string s = "{";
    for (int64_t v : prime_powers()) s += (s.size() > 1 ? "," : "") + std::to_string(v);
    return s + "}";
}

ClassSet CandidateSpace::candidate(uint64_t counter) const {
    if (counter >= size()) throw InvalidInput("candidate counter out of range");
    auto bits = base_;
    for (std::size_t j = 0; j < free_.size(); ++j) {
        if (counter >> j & 1) bits[free_[j]] = true;
    }
    return ClassSet::from_bits(mod_, std::move(bits));
}

std::vector<RowSelection> all_rows() {
    std::vector<RowSelection> out;
    for (int a = 1; a <= 2; ++a) {
        for (int b = 1; b <= 2; ++b) {
            for (int c = 1; c <= 2; ++c) out.push_back({a, b, c});
        }
    }
    return out;
}

RowSelection parse_row(const Modulus& mod, const std::string& text) {
    require_sweep_modulus(mod);
    RowSelection row{0, 0, 0};
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        int64_t s = 0;
        try {
            s = std::stoll(tok);
        } catch (const std::exception&) {
            throw InvalidInput("row entry '" + tok + "' is not an integer");
        }
        bool matched = false;
        for (std::size_t i = 0; i < 3; ++i) {
            const int64_t p = mod.factors()[i].prime;
            const int e = s == p ? 1 : s == p * p ? 2 : 0;
            if (!e) continue;
            if (row[i]) throw InvalidInput("row names prime " + std::to_string(p) + " twice");
            row[i] = e;
            matched = true;
        }
        if (!matched) throw InvalidInput("row entry " + std::to_string(s) + " is not p or p^2 for a prime of M");
    }
    for (int e : row) {
        if (!e) throw InvalidInput("row must pick one prime power for each of the three primes");
    }
    return row;
}

std::vector<ClassSet> enumerate_candidates(const Modulus& mod, RowSelection row, uint64_t begin, uint64_t end) {
    const CandidateSpace space(mod, row);
    end = std::min(end, space.size());
    std::vector<ClassSet> out;
    for (uint64_t c = begin; c < end; ++c) out.push_back(space.candidate(c));
    return out;
}

std::string config_hash(const SweepConfig& cfg) {
    const Modulus mod(cfg.M);
    std::ostringstream key;
    key << "M=" << cfg.M << ";rows=";
    const auto rows = cfg.rows.empty() ? all_rows() : cfg.rows;
    for (const auto& r : rows) key << r[0] << r[1] << r[2] << ' ';
    key << ";delta=" << (cfg.delta ? *cfg.delta : delta_screen(mod)).fraction_str() << ";range=" << cfg.range_begin
        << ':' << cfg.range_end << ";shard=" << cfg.shard_index << '/' << cfg.shard_count
        << ";full=" << cfg.full_screen;
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : key.str()) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

Json violator_to_json(const ViolatorRecord& v) {
    return Json{{"counter", v.counter},
                {"H", v.H.to_hex()},
                {"members", v.H.members()},
                {"witness", v.witness},
                {"screen", screen_to_json(v.report)}};
}

ViolatorRecord violator_from_json(const Modulus& mod, const Json& j) {
    return ViolatorRecord{j.at("counter").get<uint64_t>(), ClassSet::parse(mod, j.at("H").get<std::string>()),
                          screen_from_json(j.at("screen")), j.at("witness").get<int64_t>()};
}

Json row_to_json(const SweepRow& r) {
    Json v = Json::array();
    for (const auto& x : r.violators) v.push_back(violator_to_json(x));
    Json out{{"label", r.label}, {"total", r.total}, {"passing", r.passing}, {"t2_violating", r.t2_violating}};
    if (r.full_passing) out["full_passing"] = *r.full_passing;
    out["violators"] = std::move(v);
    return out;
}

SweepRow row_from_json(const Modulus& mod, const Json& j) {
    SweepRow r;
    r.label = j.at("label").get<std::string>();
    r.total = j.at("total").get<uint64_t>();
    r.passing = j.at("passing").get<uint64_t>();
    r.t2_violating = j.at("t2_violating").get<uint64_t>();
    if (j.contains("full_passing")) r.full_passing = j["full_passing"].get<uint64_t>();
    for (const auto& v : j.at("violators")) r.violators.push_back(violator_from_json(mod, v));
    return r;
}

void add_into(SweepRow& acc, const SweepRow& part) {
    acc.total += part.total;
    acc.passing += part.passing;
    acc.t2_violating += part.t2_violating;
    acc.exact_solves += part.exact_solves;
    if (part.full_passing) acc.full_passing = acc.full_passing.value_or(0) + *part.full_passing;
    acc.violators.insert(acc.violators.end(), part.violators.begin(), part.violators.end());
}

struct Checkpoint {
    std::size_t row_index = 0;
    uint64_t counter = 0;
    std::vector<SweepRow> completed;
    SweepRow partial;
};

void write_checkpoint(const std::string& path, const std::string& hash, int64_t M, const Checkpoint& cp) {
    Json j{{"version", 1},
           {"config_hash", hash},
           {"M", M},
           {"row_index", cp.row_index},
           {"counter", cp.counter},
           {"completed_rows", rows_to_json(cp.completed, M)["rows"]},
           {"partial", row_to_json(cp.partial)}};
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write checkpoint " + tmp);
        out << j.dump() << '\n';
        if (!out) throw std::runtime_error("failed writing checkpoint " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

std::optional<Checkpoint> read_checkpoint(const std::string& path, const std::string& hash, const Modulus& mod) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    std::stringstream buf;
    buf << in.rdbuf();
    Checkpoint cp;
    try {
        const auto j = Json::parse(buf.str());
        if (j.at("version").get<int>() != 1) throw InvalidInput("unsupported version");
        const auto stored = j.at("config_hash").get<std::string>();
        if (stored != hash) {
            throw InvalidInput("config hash " + stored + " does not match the current configuration (" + hash + ")");
        }
        if (j.at("M").get<int64_t>() != mod.M()) throw InvalidInput("modulus differs");
        cp.row_index = j.at("row_index").get<std::size_t>();
        cp.counter = j.at("counter").get<uint64_t>();
        for (const auto& r : j.at("completed_rows")) cp.completed.push_back(row_from_json(mod, r));
        cp.partial = row_from_json(mod, j.at("partial"));
    } catch (const InvalidInput& e) {
        throw InvalidInput("refusing checkpoint " + path + ": " + e.what());
    } catch (const std::exception& e) {
        throw InvalidInput("refusing corrupt checkpoint " + path + ": " + e.what());
    }
    if (cp.completed.size() != cp.row_index) throw InvalidInput("refusing corrupt checkpoint " + path + ": row count");
    return cp;
}

struct Evaluator {
    const CandidateSpace& space;
    const StepFourierMatrix& T;
    Rational delta;
    bool prescreen;
    bool full;

    bool clearly_off(const ClassSet& H, BoundKind kind, double k) const {
        const auto v = delsarte_bound_float(H, kind, delta, T);
        // A float "infeasible" is not a bound; leave it to the exact solve.
        return v && std::fabs(*v - k) > kPrescreenMargin;
    }

    SweepRow block(uint64_t begin, uint64_t end) const {
        SweepRow r;
        r.total = end - begin;
        if (full) r.full_passing = 0;
        for (uint64_t c = begin; c < end; ++c) {
            const auto H = space.candidate(c);
            if (prescreen) {
                const auto k = static_cast<double>(k_of(H));
                if (clearly_off(H, BoundKind::delta_plus, k) || clearly_off(H, BoundKind::minus, k)) continue;
            }
            ++r.exact_solves;
            const auto rep = screen(H, delta, T, full);
            if (!rep.passes) continue;
            ++r.passing;
            if (full && rep.d_plus == Rational(rep.k_H)) ++*r.full_passing;
            if (auto w = support_T2_witness(H)) {
                ++r.t2_violating;
                r.violators.push_back({c, H, rep, *w});
            }
        }
        return r;
    }
};

}  // namespace

SweepOutcome run_sweep(const SweepConfig& cfg) {
    const Modulus mod(cfg.M);
    require_sweep_modulus(mod);
    if (cfg.shard_count == 0 || cfg.shard_index >= cfg.shard_count) {
        throw InvalidInput("shard index must be below the shard count");
    }
    const Rational delta = cfg.delta ? *cfg.delta : delta_screen(mod);
    if (delta.sign() <= 0) throw InvalidInput("delta must be positive");
    const auto rows = cfg.rows.empty() ? all_rows() : cfg.rows;
    const StepFourierMatrix T(mod);
    const std::string hash = config_hash(cfg);

    Checkpoint cp;
    bool resume_row = false;  // only the first row visited can be half done
    if (!cfg.checkpoint_path.empty()) {
        if (auto loaded = read_checkpoint(cfg.checkpoint_path, hash, mod)) {
            cp = std::move(*loaded);
            resume_row = true;
        }
    }
    const unsigned jobs = std::max(1u, cfg.jobs);
    uint64_t blocks_done = 0;

    for (std::size_t ri = cp.row_index; ri < rows.size(); ++ri) {
        const CandidateSpace space(mod, rows[ri]);
        const uint64_t lo = std::min(cfg.range_begin, space.size());
        const uint64_t hi = cfg.range_end ? std::min(cfg.range_end, space.size()) : space.size();
        const uint64_t len = hi > lo ? hi - lo : 0;
        const uint64_t begin = lo + len * cfg.shard_index / cfg.shard_count;
        const uint64_t end = lo + len * (cfg.shard_index + 1) / cfg.shard_count;
        if (!resume_row) {
            cp.row_index = ri;
            cp.counter = begin;
            cp.partial = SweepRow{};
            if (cfg.full_screen) cp.partial.full_passing = 0;
        }
        resume_row = false;
        cp.partial.label = space.label();
        const Evaluator eval{space, T, delta, cfg.float_prescreen, cfg.full_screen};

        while (cp.counter < end) {
            std::vector<std::pair<uint64_t, uint64_t>> batch;
            for (uint64_t c = cp.counter; c < end && batch.size() < jobs; c = std::min(end, c + kSweepBlock)) {
                batch.emplace_back(c, std::min(end, c + kSweepBlock));
            }
            std::vector<SweepRow> results(batch.size());
            std::vector<std::exception_ptr> errors(batch.size());
            auto work = [&](std::size_t i) {
                try {
                    results[i] = eval.block(batch[i].first, batch[i].second);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            };
            if (batch.size() == 1) {
                work(0);
            } else {
                std::vector<std::thread> threads;
                for (std::size_t i = 0; i < batch.size(); ++i) threads.emplace_back(work, i);
                for (auto& t : threads) t.join();
            }
            for (auto& e : errors) {
                if (e) {
                    // Leave the checkpoint at the last completed batch.
                    if (!cfg.checkpoint_path.empty()) write_checkpoint(cfg.checkpoint_path, hash, mod.M(), cp);
                    std::rethrow_exception(e);
                }
            }
            for (const auto& r : results) add_into(cp.partial, r);
            cp.counter = batch.back().second;
            blocks_done += batch.size();
            const bool stop = cfg.stop_after_blocks && blocks_done >= cfg.stop_after_blocks && cp.counter < end;
            if (!cfg.checkpoint_path.empty()) write_checkpoint(cfg.checkpoint_path, hash, mod.M(), cp);
            if (stop) {
                auto partial_rows = cp.completed;
                partial_rows.push_back(cp.partial);
                return {std::move(partial_rows), false};
            }
        }
        cp.completed.push_back(std::move(cp.partial));
        cp.partial = SweepRow{};
        cp.row_index = ri + 1;
        cp.counter = 0;
        if (!cfg.checkpoint_path.empty()) write_checkpoint(cfg.checkpoint_path, hash, mod.M(), cp);
    }
    return {std::move(cp.completed), true};
}

std::vector<SweepRow> merge_results(const std::vector<std::vector<SweepRow>>& parts) {
    std::vector<SweepRow> out;
    std::map<std::string, std::size_t> where;
    for (const auto& part : parts) {
        for (const auto& r : part) {
            auto [it, fresh] = where.emplace(r.label, out.size());
            if (fresh) {
                out.push_back(SweepRow{});
                out.back().label = r.label;
            }
            add_into(out[it->second], r);
        }
    }
    for (auto& r : out) {
        std::sort(r.violators.begin(), r.violators.end(),
                  [](const ViolatorRecord& a, const ViolatorRecord& b) { return a.counter < b.counter; });
    }
    return out;
}

std::string rows_to_csv(const std::vector<SweepRow>& rows) {
    std::string out = "prime_powers,total,passing,t2_violating\n";
    for (const auto& r : rows) {
        out += "\"" + r.label + "\"," + std::to_string(r.total) + "," + std::to_string(r.passing) + "," +
               std::to_string(r.t2_violating) + "\n";
    }
    return out;
}

std::string violators_to_jsonl(const std::vector<SweepRow>& rows) {
    std::string out;
    for (const auto& r : rows) {
        for (const auto& v : r.violators) {
            Json line{{"row", r.label}};
            const Json body = violator_to_json(v);
            for (auto it = body.begin(); it != body.end(); ++it) line[it.key()] = *it;
            out += line.dump() + "\n";
        }
    }
    return out;
}

Json rows_to_json(const std::vector<SweepRow>& rows, int64_t M) {
    Json arr = Json::array();
    for (const auto& r : rows) arr.push_back(row_to_json(r));
    return Json{{"M", M}, {"rows", std::move(arr)}};
}

std::vector<SweepRow> rows_from_json(const Json& j) {
    try {
        const Modulus mod(j.at("M").get<int64_t>());
        std::vector<SweepRow> out;
        for (const auto& r : j.at("rows")) out.push_back(row_from_json(mod, r));
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("malformed sweep result: ") + e.what());
    }
}

}  // namespace zmtile
