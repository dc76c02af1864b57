#pragma once

/**
 * @file sweep.hpp
 * @brief Exhaustive LP screen of candidate class sets for M = (p1 p2 p3)^2.
 *
 * A row fixes, for each prime p_i, which one of R_{M/p_i} and R_{M/p_i^2}
 * lies in H (the other stays out). The remaining 20 classes other than R_M
 * are free; candidate number c (a 20-bit counter) includes the j-th free
 * class, in ascending divisor order, iff bit j of c is set.
 *
 * A candidate passes when D^{delta+}(H) = D^-(H) = k_H exactly. Passing
 * candidates that fail support_T2 are recorded as violators.
 *
 * Work is cut into blocks of 2^14 counters. After every completed batch of
 * blocks the checkpoint file (if configured) is rewritten, so a killed run
 * resumes where it stopped. Shards split the counter range of each row
 * into contiguous pieces; merge_results() adds them back up.
 */

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zmtile/class_set.hpp"
#include "zmtile/delsarte.hpp"
#include "zmtile/fourier.hpp"
#include "zmtile/io.hpp"

namespace zmtile {

inline constexpr uint64_t kSweepBlock = uint64_t{1} << 14;
inline constexpr double kPrescreenMargin = 1e-4;

/// For each of the three primes, the chosen exponent (1 or 2).
using RowSelection = std::array<int, 3>;

/// Candidate class sets of one row.
class CandidateSpace {
public:
    /// Throws InvalidInput unless M = (p1 p2 p3)^2 with exponents in {1, 2}.
    CandidateSpace(const Modulus& mod, RowSelection row);

    const Modulus& modulus() const noexcept { return mod_; }
    RowSelection row() const noexcept { return row_; }
    std::size_t num_free() const noexcept { return free_.size(); }
    uint64_t size() const noexcept { return uint64_t{1} << free_.size(); }
    /// The selected prime powers in prime order, e.g. {3, 25, 7}.
    std::vector<int64_t> prime_powers() const;
    /// "{3,25,7}"
    std::string label() const;

    ClassSet candidate(uint64_t counter) const;

private:
    Modulus mod_;
    RowSelection row_;
    std::vector<std::size_t> free_;
    std::vector<bool> base_;
};

/// Requires M = (p1 p2 p3)^2; throws InvalidInput otherwise.
void require_sweep_modulus(const Modulus& mod);

/// The 8 rows, first prime most significant: {p,q,r}, {p,q,r^2}, ...
std::vector<RowSelection> all_rows();

/// Parses "3,25,7" (prime powers) against mod.
RowSelection parse_row(const Modulus& mod, const std::string& text);

/// Convenience stream; each candidate is built on demand.
std::vector<ClassSet> enumerate_candidates(const Modulus& mod, RowSelection row, uint64_t begin, uint64_t end);

struct SweepConfig {
    int64_t M = 11025;
    /// Empty: all 8 rows.
    std::vector<RowSelection> rows;
    /// nullopt: 1/(M^2 phi(M)).
    std::optional<Rational> delta;
    bool float_prescreen = true;
    /// Also solve D^+ for passing candidates and count those separately.
    bool full_screen = false;
    /// Counter range within each row, [begin, end); end = 0 means the full row.
    uint64_t range_begin = 0;
    uint64_t range_end = 0;
    unsigned shard_index = 0;
    unsigned shard_count = 1;
    std::string checkpoint_path;
    /// Stop (after checkpointing) once this many blocks were processed in
    /// this invocation; 0 = run to completion. Used to exercise resume.
    uint64_t stop_after_blocks = 0;
    unsigned jobs = 1;
};

struct ViolatorRecord {
    uint64_t counter = 0;
    ClassSet H;
    ScreenReport report;
    int64_t witness = 0;  ///< first distinct-prime product P with M/P in H
};

struct SweepRow {
    std::string label;
    uint64_t total = 0;
    uint64_t passing = 0;
    uint64_t t2_violating = 0;
    std::vector<ViolatorRecord> violators;
    /// Set with full_screen: passing candidates that also have D^+ = k_H.
    std::optional<uint64_t> full_passing;
    /// Diagnostics, not part of the deterministic output files.
    uint64_t exact_solves = 0;
};

struct SweepOutcome {
    std::vector<SweepRow> rows;
    /// False when stopped early (stop_after_blocks); resume with the same
    /// config and checkpoint.
    bool complete = false;
};

/// FNV-1a over the settings that determine the result.
std::string config_hash(const SweepConfig& cfg);

SweepOutcome run_sweep(const SweepConfig& cfg);

/// Adds shard results row by row (matched by label); violators sorted by counter.
std::vector<SweepRow> merge_results(const std::vector<std::vector<SweepRow>>& parts);

/// "prime_powers,total,passing,t2_violating" plus one line per row.
std::string rows_to_csv(const std::vector<SweepRow>& rows);
/// One JSON object per line: row, counter, H, witness, screen.
std::string violators_to_jsonl(const std::vector<SweepRow>& rows);

Json rows_to_json(const std::vector<SweepRow>& rows, int64_t M);
std::vector<SweepRow> rows_from_json(const Json& j);

}  // namespace zmtile
