// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Criterion 10 drives the real CLI binary (path in argv[1]).
#include "opnlab/scan.hpp"
#include "opnlab/serialize.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

using namespace opnlab;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::cout << (pass ? "PASS" : "FAIL") << " criterion-" << criterion << ": " << detail
              << std::endl;
    if (!pass) ++g_failures;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---- criterion 1 & 2: sigma oracle and the D + s = n identity ----

void criteria_1_2() {
    auto t0 = Clock::now();
    uint64_t sigma_mismatch = 0, identity_failures = 0;
    for (uint64_t n = 1; n <= 100'000; ++n) {
        uint64_t brute = oracle::sigma_brute_u64(n);
        auto ap = profile(n);
        if (ap.sigma != brute) ++sigma_mismatch;
        if (ap.deficiency + ap.aliquot != n) ++identity_failures;
    }
    double elapsed = seconds_since(t0);
    report(1, sigma_mismatch == 0 && elapsed < 30.0,
           "sigma vs divisor-sum oracle for n <= 1e5, " + std::to_string(sigma_mismatch) +
               " mismatches, " + std::to_string(elapsed) + "s");

    std::mt19937_64 rng(0x5eed);
    for (int i = 0; i < 1000; ++i) {
        uint64_t n = rng() | 1;  // odd keeps rho honest; still arbitrary 64-bit
        auto ap = profile(n);
        if (ap.deficiency + ap.aliquot != n) ++identity_failures;
    }
    report(2, identity_failures == 0,
           "D(n) + s(n) = n over n <= 1e5 plus 1000 random 64-bit values, " +
               std::to_string(identity_failures) + " failures");
}

// ---- criterion 3: worked constants of the two gap lemmas ----

void criterion_3() {
    auto a = nearest_square_argument(8);
    auto b = nearest_square_argument(40);
    bool ok = a.q == 3 && a.surplus == 1 && b.q == 7 && b.surplus == 9;
    report(3, ok, "nearest-square constants: gap 8 -> (q=3, surplus=1), gap 40 -> (q=7, surplus=9)");
}

// ---- criteria 4-7: the exhaustive scan ----

void criteria_4_to_7() {
    ScanConfig cfg;
    cfg.m_max = 999;
    cfg.pk_max = 1'000'000;
    cfg.workers = 4;

    uint64_t bad_r = 0, case56 = 0, case12_bad = 0, sandwich_bad = 0;
    uint64_t two_adic_bad = 0, abs_diff_bad = 0, gap_lemma_bad = 0;
    bool saw_17_5 = false, saw_41_9 = false;

    auto t0 = Clock::now();
    ScanSummary summary = run_scan(cfg, [&](const ScanRecord& rec) {
        // independent re-checks, not trusting the scan core's own violation list
        if (rec.r < 2) ++bad_r;
        if (rec.case_label == 5 || rec.case_label == 6) ++case56;
        uint64_t p2 = uint64_t{1} << rec.r;
        uint64_t diff = p2 > rec.t ? p2 - rec.t : rec.t - p2;
        if (rec.case_label == 1 || rec.case_label == 2) {
            bool m_lt_pk = rec.m < rec.pk;
            uint64_t divisor, dividend;
            if (rec.case_label == 1) {
                divisor = rec.m + rec.t;
                dividend = rec.pk - rec.t * (rec.t - p2);
            } else {
                divisor = rec.m + p2;
                dividend = rec.pk - p2 * (p2 - rec.t);
            }
            bool chain = (dividend % divisor == 0);
            bool sign = rec.pk > rec.m * diff;
            if (!m_lt_pk || !chain || !sign) ++case12_bad;
        }
        if (rec.case_label == 3 || rec.case_label == 4) {
            uint64_t lo = std::min(p2, rec.t), hi = std::max(p2, rec.t);
            if (!(lo < rec.m && rec.m < hi)) ++sandwich_bad;
            if (rec.abs_diff_one && !(rec.pk < rec.m)) ++abs_diff_bad;
        }
        // brute-force 2-adic valuation
        uint64_t g = static_cast<uint64_t>(rec.gap);
        uint32_t v = 0;
        while (g % 2 == 0) {
            g /= 2;
            ++v;
        }
        if (v != rec.r) ++two_adic_bad;
        if (rec.p % 8 == 5 && rec.r != 2) ++two_adic_bad;
        if (rec.p % 8 == 1 && rec.r < 3) ++two_adic_bad;

        if (rec.gap == 8 || rec.gap == 40) {
            if (!(rec.m < rec.pk)) ++gap_lemma_bad;
            if (rec.gap == 8 && rec.pk == 17 && rec.m == 5) saw_17_5 = true;
            if (rec.gap == 40 && rec.pk == 41 && rec.m == 9) saw_41_9 = true;
        }
    });
    double elapsed = seconds_since(t0);

    report(4,
           bad_r == 0 && case56 == 0 && case12_bad == 0 && sandwich_bad == 0 &&
               summary.violations.empty() && elapsed < 300.0,
           "exhaustive scan m<=999, pk<=1e6: " + std::to_string(summary.total_candidates) +
               " candidates, r>=2, no Case5/6, Case1/2 proofs agree, Case3/4 sandwich holds, " +
               std::to_string(summary.violations.size()) + " violations, " +
               std::to_string(elapsed) + "s");
    report(5, two_adic_bad == 0,
           "2-adic refinement: p=5(8) -> r=2, p=1(8) -> r>=3, brute-force valuation agrees, " +
               std::to_string(two_adic_bad) + " exceptions");
    report(6, abs_diff_bad == 0,
           "|2^r-t|=1 sufficiency in Case3/4 (" + std::to_string(summary.abs_diff_one_count) +
               " abs-diff-one records in scan), " + std::to_string(abs_diff_bad) + " exceptions");
    report(7, gap_lemma_bad == 0 && saw_17_5 && saw_41_9,
           "gap in {8,40} forces m < p^k; instances (17,5) and (41,9) present");
}

// ---- criterion 8: perfection fixtures and the Descartes spoof ----

void criterion_8() {
    bool ok = true;
    for (uint64_t n : {6ULL, 28ULL, 496ULL, 8128ULL, 33550336ULL}) {
        if (!is_perfect(n)) ok = false;
        if (oracle::sigma_brute_u64(n) != 2 * n) ok = false;
    }
    mpz_class spoof("198585576189");
    if (sigma(factorize(spoof, {22021})) != 2 * spoof) ok = false;
    // oracle route: enumerate divisors with 22021 kept atomic
    mpz_class brute = oracle::sigma_from_factor_list(
        {{3, 2}, {7, 2}, {11, 2}, {13, 2}, {22021, 1}});
    if (brute != 2 * spoof) ok = false;
    report(8, ok, "perfect fixtures {6,28,496,8128,33550336} and the Descartes spoof vs oracle");
}

// ---- criterion 9: corollary implication on random candidates ----

void criterion_9() {
    std::mt19937_64 rng(0xc0ffee);
    uint64_t tested = 0, exceptions = 0;
    while (tested < 10'000) {
        uint64_t p = (rng() % 250'000) * 4 + 1;
        if (!is_prime_u64(p)) continue;
        uint64_t m = (rng() % 500) * 2 + 1;
        long k = (rng() % 8 == 0) ? 5 : 1;
        auto vr = validate_candidate(p, k, m);
        if (!vr.ok()) continue;
        if (vr.candidate->m * vr.candidate->m <= vr.candidate->pk) continue;
        auto rep = theorem_battery(*vr.candidate);
        if (rep.pk_lt_two_thirds_m2.holds && !rep.gap_gt_m2_over_3.holds) ++exceptions;
        ++tested;
    }
    report(9, exceptions == 0,
           "p^k < 2m^2/3 implies gap > m^2/3 on 10^4 random candidates, " +
               std::to_string(exceptions) + " exceptions");
}

// ---- criterion 10: CLI determinism across worker counts ----

void criterion_10(const std::string& cli) {
    std::string f1 = "accept_scan_w1.csv", f8 = "accept_scan_w8.csv";
    std::string base = cli + " scan --m-max 999 --pk-max 1000000 --format csv";
    int rc1 = std::system((base + " --workers 1 --out " + f1 + " > /dev/null 2>&1").c_str());
    int rc8 = std::system((base + " --workers 8 --out " + f8 + " > /dev/null 2>&1").c_str());
    bool ok = rc1 == 0 && rc8 == 0;
    if (ok) {
        std::ifstream a(f1, std::ios::binary), b(f8, std::ios::binary);
        ok = a.good() && b.good();
        std::vector<char> ba(1 << 20), bb(1 << 20);
        while (ok) {
            a.read(ba.data(), ba.size());
            b.read(bb.data(), bb.size());
            if (a.gcount() != b.gcount() ||
                !std::equal(ba.begin(), ba.begin() + a.gcount(), bb.begin())) {
                ok = false;
                break;
            }
            if (a.eof() && b.eof()) break;
            if (a.eof() != b.eof()) {
                ok = false;
                break;
            }
        }
    }
    std::remove(f1.c_str());
    std::remove(f8.c_str());
    report(10, ok, "cmdScan --workers 1 vs --workers 8: byte-identical CSV on the full range");
}

}  // namespace

int main(int argc, char** argv) {
    std::string cli = argc > 1 ? argv[1] : "./opnlab";
    criteria_1_2();
    criterion_3();
    criteria_4_to_7();
    criterion_8();
    criterion_9();
    criterion_10(cli);
    if (g_failures) {
        std::cout << g_failures << " criteria FAILED" << std::endl;
        return 1;
    }
    std::cout << "all criteria passed" << std::endl;
    return 0;
}
