#include "opnlab/scan.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <condition_variable>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>

namespace opnlab {

namespace {

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

uint64_t powmod_u64(uint64_t b, uint64_t e, uint64_t m) {
    uint64_t r = 1;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, b, m);
        b = mulmod_u64(b, b, m);
        e >>= 1;
    }
    return r;
}

bool mr_witness(uint64_t n, uint64_t a, uint64_t d, int s) {
    uint64_t x = powmod_u64(a % n, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
        x = mulmod_u64(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

uint64_t isqrt_u64(uint64_t n) {
    uint64_t r = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

struct PrimePower {
    uint64_t p;
    uint32_t k;
    uint64_t pk;
};

// Primes p == 1 (mod 4) up to `limit`, each with its admissible powers
// p^k <= limit, k == 1 (mod 4).  Sorted by (p, k).
std::vector<PrimePower> build_prime_powers(uint64_t limit) {
    std::vector<uint8_t> composite(limit + 1, 0);
    for (uint64_t i = 2; i * i <= limit; ++i) {
        if (!composite[i]) {
            for (uint64_t j = i * i; j <= limit; j += i) composite[j] = 1;
        }
    }
    std::vector<PrimePower> pps;
    for (uint64_t p = 5; p <= limit; p += 4) {
        if (composite[p]) continue;
        pps.push_back({p, 1, p});
        uint64_t pk = p;
        uint32_t k = 1;
        while (pk <= limit / (p * p) / (p * p)) {  // next power p^(k+4)
            pk *= p * p * p * p;
            k += 4;
            pps.push_back({p, k, pk});
        }
    }
    std::sort(pps.begin(), pps.end(), [](const PrimePower& a, const PrimePower& b) {
        return a.p != b.p ? a.p < b.p : a.k < b.k;
    });
    return pps;
}

// sigma(m^2) from the smallest-prime-factor table
uint64_t sigma_of_square(uint64_t m, const std::vector<uint32_t>& spf) {
    uint64_t result = 1;
    while (m > 1) {
        uint64_t p = spf[m];
        uint32_t e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        uint64_t term = 1, pw = 1;
        for (uint32_t i = 0; i < 2 * e; ++i) {
            pw *= p;
            term += pw;
        }
        result *= term;
    }
    return result;
}

struct ScanContext {
    const ScanConfig& cfg;
    std::vector<PrimePower> pps;
    std::vector<uint32_t> spf;  // smallest prime factor, up to m_max
};

ScanRecord make_record(const ScanContext& ctx, uint64_t p, uint32_t k, uint64_t m, uint64_t pk,
                       uint64_t sigma_m2, std::vector<std::string>& violations) {
    ScanRecord rec;
    rec.p = p;
    rec.k = k;
    rec.m = m;
    rec.pk = pk;
    uint64_t m2 = m * m;

    auto violate = [&](const std::string& what) {
        violations.push_back("p=" + std::to_string(p) + " k=" + std::to_string(k) +
                             " m=" + std::to_string(m) + ": " + what);
    };

    if (m2 <= pk) {
        rec.inverted = true;
        rec.gap = static_cast<int64_t>(m2) - static_cast<int64_t>(pk);
        return rec;
    }

    uint64_t gap = m2 - pk;
    rec.gap = static_cast<int64_t>(gap);
    rec.r = static_cast<uint32_t>(std::countr_zero(gap));
    rec.t = gap >> rec.r;
    uint64_t p2 = uint64_t{1} << rec.r;

    // cross-check the valuation by plain repeated division
    {
        uint64_t g = gap;
        uint32_t v = 0;
        while (g % 2 == 0) {
            g /= 2;
            ++v;
        }
        if (v != rec.r || g != rec.t) violate("2-adic valuation mismatch");
    }
    if (rec.r < 2) violate("r < 2");
    // sharpened refinement: p = 5 (mod 8) pins r = 2, p = 1 (mod 8) forces r >= 3
    if (p % 8 == 5 && rec.r != 2) violate("p=5 (mod 8) but r != 2");
    if (p % 8 == 1 && rec.r < 3) violate("p=1 (mod 8) but r < 3");

    uint64_t diff = p2 > rec.t ? p2 - rec.t : rec.t - p2;
    rec.abs_diff_one = (diff == 1);
    rec.t_mersenne = (rec.t == p2 - 1);
    rec.t_prime = is_prime_u64(rec.t);

    if (m == rec.t || m == p2) {
        violate("m collides with t or 2^r");
        return rec;
    }
    if (m > rec.t && rec.t > p2) rec.case_label = 1;
    else if (m > p2 && p2 > rec.t) rec.case_label = 2;
    else if (rec.t > m && m > p2) rec.case_label = 3;
    else if (p2 > m && m > rec.t) rec.case_label = 4;
    else rec.case_label = (rec.t > p2) ? 5 : 6;

    switch (rec.case_label) {
        case 1:
        case 2: {
            rec.verdict = Conclusion::ProvenMLessThanPk;
            if (m >= pk) violate("Case1/2 without m < p^k");
            uint64_t divisor, dividend;
            if (rec.case_label == 1) {
                divisor = m + rec.t;
                dividend = pk - rec.t * (rec.t - p2);
            } else {
                divisor = m + p2;
                dividend = pk - p2 * (p2 - rec.t);
            }
            if (dividend % divisor != 0) violate("divisibility chain fails");
            if (!(pk > m * diff)) violate("sign route fails in Case1/2");
            break;
        }
        case 3:
        case 4: {
            rec.verdict = rec.abs_diff_one ? Conclusion::ProvenPkLessThanM : Conclusion::Open;
            rec.has_sandwich = true;
            rec.sandwich_lo = std::min(p2, rec.t);
            rec.sandwich_hi = std::max(p2, rec.t);
            rec.sandwich_holds = rec.sandwich_lo < m && m < rec.sandwich_hi;
            if (!rec.sandwich_holds) violate("sandwich fails in Case3/4");
            if (!(pk < m * diff)) violate("sign route fails in Case3/4");
            if (rec.abs_diff_one && !(pk < m)) violate("|2^r-t|=1 without p^k < m");
            break;
        }
        default:
            rec.verdict = Conclusion::Impossible;
            violate("Case5/6 reached with positive gap");
            break;
    }

    uint64_t root = isqrt_u64(gap);
    rec.gap_not_square = (root * root != gap);
    rec.gap_gt_2m = (gap > 2 * m);
    rec.gap_gt_m2_over_3 = (3 * gap > m2);
    rec.sigma_ratio_ge_7 = (sigma_m2 >= 7 * pk);
    rec.pk_ne_2m_minus_1 = (pk != 2 * m - 1);
    return rec;
}

// all records for one m, in (p, k) order
void records_for_m(const ScanContext& ctx, uint64_t m, std::vector<ScanRecord>& out,
                   std::vector<std::string>& violations) {
    const ScanConfig& cfg = ctx.cfg;
    uint64_t m2 = m * m;
    uint64_t bound = cfg.pk_max;
    if (cfg.require_positive_gap) {
        if (m2 <= 5) return;
        bound = std::min(bound, m2 - 1);
    }
    uint64_t sm2 = sigma_of_square(m, ctx.spf);
    for (const auto& e : ctx.pps) {
        if (e.p > bound) break;
        if (e.pk > bound) continue;
        if (m % e.p == 0) continue;  // gcd(p, m) != 1
        out.push_back(make_record(ctx, e.p, e.k, m, e.pk, sm2, violations));
    }
}

ScanContext make_context(const ScanConfig& cfg) {
    uint64_t sieve_limit = cfg.pk_max;
    if (cfg.require_positive_gap) sieve_limit = std::min(sieve_limit, cfg.m_max * cfg.m_max);
    ScanContext ctx{cfg, build_prime_powers(std::max<uint64_t>(sieve_limit, 5)), {}};
    ctx.spf.assign(cfg.m_max + 1, 0);
    for (uint32_t i = 2; i <= cfg.m_max; ++i) {
        if (ctx.spf[i] == 0) {
            for (uint64_t j = i; j <= cfg.m_max; j += i) {
                if (ctx.spf[j] == 0) ctx.spf[j] = i;
            }
        }
    }
    return ctx;
}

void aggregate(ScanSummary& s, const ScanRecord& rec) {
    s.total_candidates += 1;
    if (rec.inverted) {
        s.inverted_count += 1;
        return;
    }
    if (rec.case_label >= 1 && rec.case_label <= 6) s.per_case[rec.case_label - 1] += 1;
    switch (rec.verdict) {
        case Conclusion::ProvenMLessThanPk: s.proven_m_lt_pk += 1; break;
        case Conclusion::ProvenPkLessThanM: s.proven_pk_lt_m += 1; break;
        case Conclusion::Open: s.open_count += 1; break;
        case Conclusion::Impossible: break;
    }
    if (rec.abs_diff_one) s.abs_diff_one_count += 1;
    if (rec.t_mersenne && rec.t_prime) {
        s.conjecture_holds_count += 1;
    } else {
        s.conjecture_fails_count += 1;
    }
}

}  // namespace

bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    if (n < 41 * 41) return true;
    int s = std::countr_zero(n - 1);
    uint64_t d = (n - 1) >> s;
    const uint64_t* witnesses;
    size_t count;
    static const uint64_t small_set[] = {2, 3};
    static const uint64_t mid_set[] = {2, 7, 61};
    static const uint64_t full_set[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    if (n < 1'373'653) {
        witnesses = small_set;
        count = 2;
    } else if (n < 4'759'123'141ULL) {
        witnesses = mid_set;
        count = 3;
    } else {
        witnesses = full_set;
        count = 12;
    }
    for (size_t i = 0; i < count; ++i) {
        if (!mr_witness(n, witnesses[i], d, s)) return false;
    }
    return true;
}

void ScanConfig::validate() const {
    if (m_max < 3) throw std::invalid_argument("m_max must be >= 3");
    if (pk_max < 5) throw std::invalid_argument("pk_max must be >= 5");
    if (m_max > kMMaxLimit) throw std::invalid_argument("m_max exceeds desk-scale limit");
    if (pk_max > kPkMaxLimit) throw std::invalid_argument("pk_max exceeds desk-scale limit");
    if (workers < 1 || workers > 256) throw std::invalid_argument("workers must be in [1,256]");
}

void enumerate_candidates(const ScanConfig& cfg, const CandidateFn& fn) {
    cfg.validate();
    ScanContext ctx = make_context(cfg);
    for (uint64_t m = 1; m <= cfg.m_max; m += 2) {
        uint64_t m2 = m * m;
        uint64_t bound = cfg.pk_max;
        if (cfg.require_positive_gap) {
            if (m2 <= 5) continue;
            bound = std::min(bound, m2 - 1);
        }
        for (const auto& e : ctx.pps) {
            if (e.p > bound) break;
            if (e.pk > bound) continue;
            if (m % e.p == 0) continue;
            fn(e.p, e.k, m, e.pk);
        }
    }
}

ScanSummary run_scan(const ScanConfig& cfg, const RecordSink& sink) {
    cfg.validate();
    ScanContext ctx = make_context(cfg);
    ScanSummary summary;

    std::vector<uint64_t> ms;
    for (uint64_t m = 1; m <= cfg.m_max; m += 2) ms.push_back(m);

    if (cfg.workers == 1) {
        std::vector<ScanRecord> recs;
        for (uint64_t m : ms) {
            recs.clear();
            records_for_m(ctx, m, recs, summary.violations);
            for (const auto& rec : recs) {
                aggregate(summary, rec);
                sink(rec);
            }
        }
        return summary;
    }

    // m-value blocks, claimed dynamically, merged back in block order
    constexpr size_t kBlock = 16;
    const size_t num_blocks = (ms.size() + kBlock - 1) / kBlock;
    struct BlockResult {
        std::vector<ScanRecord> records;
        std::vector<std::string> violations;
    };
    std::atomic<size_t> next_block{0};
    std::map<size_t, BlockResult> done;
    std::mutex mu;
    std::condition_variable cv;

    auto worker = [&]() {
        for (;;) {
            size_t b = next_block.fetch_add(1);
            if (b >= num_blocks) return;
            BlockResult res;
            size_t lo = b * kBlock, hi = std::min(ms.size(), lo + kBlock);
            for (size_t i = lo; i < hi; ++i) {
                records_for_m(ctx, ms[i], res.records, res.violations);
            }
            {
                std::lock_guard<std::mutex> lk(mu);
                done.emplace(b, std::move(res));
            }
            cv.notify_one();
        }
    };

    std::vector<std::thread> pool;
    for (unsigned w = 0; w < cfg.workers; ++w) pool.emplace_back(worker);

    for (size_t b = 0; b < num_blocks; ++b) {
        BlockResult res;
        {
            std::unique_lock<std::mutex> lk(mu);
            cv.wait(lk, [&] { return done.count(b) > 0; });
            res = std::move(done.at(b));
            done.erase(b);
        }
        for (const auto& rec : res.records) {
            aggregate(summary, rec);
            sink(rec);
        }
        for (auto& v : res.violations) summary.violations.push_back(std::move(v));
    }
    for (auto& th : pool) th.join();
    return summary;
}

std::pair<std::vector<ScanRecord>, ScanSummary> run_scan_collect(const ScanConfig& cfg) {
    std::vector<ScanRecord> records;
    ScanSummary summary = run_scan(cfg, [&](const ScanRecord& r) { records.push_back(r); });
    return {std::move(records), std::move(summary)};
}

}  // namespace opnlab
