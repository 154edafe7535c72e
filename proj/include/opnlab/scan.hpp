#pragma once

#include "opnlab/gap.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace opnlab {

// Desk-scale scan over Eulerian candidates.  The core runs in 64-bit
// arithmetic; config limits keep every intermediate product in range.
struct ScanConfig {
    uint64_t m_max = 0;    // odd m enumerated 1..m_max
    uint64_t pk_max = 0;   // prime powers p^k <= pk_max, p == 1 (mod 4), k == 1 (mod 4)
    bool require_positive_gap = true;
    unsigned workers = 1;

    static constexpr uint64_t kMMaxLimit = 1'000'000;
    static constexpr uint64_t kPkMaxLimit = 100'000'000;

    void validate() const;  // throws std::invalid_argument
};

struct ScanRecord {
    uint64_t p = 0;
    uint32_t k = 0;
    uint64_t m = 0;
    uint64_t pk = 0;
    int64_t gap = 0;   // negative only for inverted-regime records
    uint32_t r = 0;
    uint64_t t = 0;
    int case_label = 0;  // 1..6; 0 for inverted-regime records
    Conclusion verdict = Conclusion::Open;
    bool abs_diff_one = false;
    bool t_mersenne = false;  // t == 2^r - 1
    bool t_prime = false;
    bool has_sandwich = false;
    uint64_t sandwich_lo = 0;
    uint64_t sandwich_hi = 0;
    bool sandwich_holds = false;
    bool gap_not_square = false;
    bool gap_gt_2m = false;
    bool gap_gt_m2_over_3 = false;
    bool sigma_ratio_ge_7 = false;
    bool pk_ne_2m_minus_1 = false;
    bool inverted = false;  // m^2 <= p^k, admitted only on request
};

struct ScanSummary {
    uint64_t total_candidates = 0;
    std::array<uint64_t, 6> per_case{};
    uint64_t proven_m_lt_pk = 0;
    uint64_t proven_pk_lt_m = 0;
    uint64_t open_count = 0;
    uint64_t abs_diff_one_count = 0;
    uint64_t conjecture_holds_count = 0;  // t_mersenne && t_prime
    uint64_t conjecture_fails_count = 0;
    uint64_t inverted_count = 0;
    // Breaches of unconditional invariants.  Always empty unless the
    // implementation itself is wrong.
    std::vector<std::string> violations;
};

using CandidateFn = std::function<void(uint64_t p, uint32_t k, uint64_t m, uint64_t pk)>;
using RecordSink = std::function<void(const ScanRecord&)>;

// Every qualifying triple exactly once, sorted by (m, p, k).
void enumerate_candidates(const ScanConfig& cfg, const CandidateFn& fn);

// Records reach the sink in (m, p, k) order regardless of worker count;
// output is identical to the single-threaded run.
ScanSummary run_scan(const ScanConfig& cfg, const RecordSink& sink);

std::pair<std::vector<ScanRecord>, ScanSummary> run_scan_collect(const ScanConfig& cfg);

// Deterministic Miller-Rabin for 64-bit operands.
bool is_prime_u64(uint64_t n);

}  // namespace opnlab
