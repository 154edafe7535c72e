#include "opnlab/serialize.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitRejected = 2;
constexpr int kExitViolations = 3;
constexpr int kExitUsage = 64;
constexpr int kExitCantWrite = 74;

using opnlab::Json;

// strict decimal parse; anything else is a usage error
bool parse_posint(const std::string& s, opnlab::PosInt& out) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) return false;
    out.set_str(s, 10);
    return true;
}

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

opnlab::PosInt need_posint(const std::string& s, const char* name) {
    opnlab::PosInt v;
    if (!parse_posint(s, v)) throw UsageError(std::string(name) + " must be a decimal integer");
    return v;
}

opnlab::FactorConfig factor_config_from_env() {
    opnlab::FactorConfig cfg;
    if (const char* seed = std::getenv("OPNLAB_SEED")) {
        cfg.seed = std::strtoull(seed, nullptr, 10);
    }
    return cfg;
}

std::set<opnlab::PosInt> pretend_set(const std::vector<std::string>& raw) {
    std::set<opnlab::PosInt> out;
    for (const auto& s : raw) out.insert(need_posint(s, "--pretend-prime"));
    return out;
}

void print_defects(const std::vector<opnlab::CandidateDefect>& defects,
                   const std::string& format) {
    if (format == "json") {
        Json j{{"valid", false}, {"defects", Json::array()}};
        for (auto d : defects) j["defects"].push_back(opnlab::defect_name(d));
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "rejected:";
        for (auto d : defects) std::cout << " " << opnlab::defect_name(d);
        std::cout << "\n";
    }
}

int cmd_verify(const std::string& ps, const std::string& ks, const std::string& ms,
               const std::string& format) {
    opnlab::PosInt p = need_posint(ps, "--p");
    opnlab::PosInt kz = need_posint(ks, "--k");
    opnlab::PosInt m = need_posint(ms, "--m");
    if (!kz.fits_slong_p()) throw UsageError("--k out of range");

    auto vr = opnlab::validate_candidate(p, kz.get_si(), m);
    if (!vr.ok()) {
        print_defects(vr.defects, format);
        return kExitRejected;
    }
    const auto& c = *vr.candidate;

    bool gap_positive = c.m * c.m > c.pk;
    auto index = opnlab::index_report(c);
    bool perfect = opnlab::perfection_oracle(c);

    Json j{
        {"valid", true},
        {"p", opnlab::to_decimal(c.p)},
        {"k", c.k},
        {"m", opnlab::to_decimal(c.m)},
        {"pk", opnlab::to_decimal(c.pk)},
        {"n", opnlab::to_decimal(c.n)},
        {"gap_positive", gap_positive},
    };
    if (gap_positive) {
        auto d = opnlab::gap_decompose(c);
        auto label = opnlab::classify_case(c.m, d);
        auto verdict = opnlab::derive_verdict(c.m, c.pk, d, label);
        auto battery = opnlab::theorem_battery(c);
        j["gap"] = opnlab::json_of(d);
        j["case"] = opnlab::case_token(opnlab::case_number(label));
        j["verdict"] = opnlab::json_of(verdict);
        j["battery"] = opnlab::json_of(battery);
    }
    j["index"] = opnlab::json_of(index);
    j["perfect"] = perfect;

    if (format == "json") {
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "candidate p=" << c.p << " k=" << c.k << " m=" << c.m << " pk=" << c.pk
                  << " n=" << c.n << "\n";
        if (gap_positive) {
            auto d = opnlab::gap_decompose(c);
            auto label = opnlab::classify_case(c.m, d);
            auto verdict = opnlab::derive_verdict(c.m, c.pk, d, label);
            std::cout << opnlab::classify_line(d, label, verdict) << "\n";
            auto battery = opnlab::theorem_battery(c);
            for (const auto& [name, res] : battery.entries()) {
                std::cout << name << ": " << (res->holds ? "holds" : "FAILS") << " ["
                          << res->witness << "]\n";
            }
        } else {
            std::cout << "gap non-positive: candidate is outside the m^2 > p^k regime\n";
        }
        std::cout << "index: e1=" << opnlab::to_decimal(index.e1)
                  << " e2=" << opnlab::to_decimal(index.e2)
                  << " e3=" << opnlab::to_decimal(index.e3)
                  << " e4=" << opnlab::to_decimal(index.e4) << " e5=" << index.e5
                  << " all_agree=" << (index.all_agree ? "yes" : "no") << "\n";
        std::cout << "perfect: " << (perfect ? "yes" : "no") << "\n";
    }
    return kExitOk;
}

int cmd_classify(const std::string& ps, const std::string& ks, const std::string& ms,
                 const std::string& format) {
    opnlab::PosInt p = need_posint(ps, "--p");
    opnlab::PosInt kz = need_posint(ks, "--k");
    opnlab::PosInt m = need_posint(ms, "--m");
    if (!kz.fits_slong_p()) throw UsageError("--k out of range");

    auto vr = opnlab::validate_candidate(p, kz.get_si(), m);
    if (!vr.ok()) {
        print_defects(vr.defects, format);
        return kExitRejected;
    }
    const auto& c = *vr.candidate;
    if (c.m * c.m <= c.pk) {
        if (format == "json") {
            std::cout << Json{{"error", "NonPositiveGap"},
                              {"gap", mpz_class(c.m * c.m - c.pk).get_str()}}
                             .dump(2)
                      << "\n";
        } else {
            std::cout << "rejected: NonPositiveGap gap=" << (c.m * c.m - c.pk) << "\n";
        }
        return kExitRejected;
    }
    auto d = opnlab::gap_decompose(c);
    auto label = opnlab::classify_case(c.m, d);
    auto verdict = opnlab::derive_verdict(c.m, c.pk, d, label);
    if (format == "json") {
        Json j = opnlab::json_of(d);
        j["case"] = opnlab::case_number(label);
        j["verdict"] = opnlab::json_of(verdict);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << opnlab::classify_line(d, label, verdict) << "\n";
    }
    return kExitOk;
}

int cmd_sigma(const std::string& ns, const std::vector<std::string>& pretend,
              const std::string& format) {
    opnlab::PosInt n = need_posint(ns, "--n");
    if (n < 1) throw UsageError("--n must be >= 1");
    auto ap = opnlab::profile(n, pretend_set(pretend), factor_config_from_env());
    if (format == "json") {
        std::cout << opnlab::json_of(ap).dump(2) << "\n";
    } else {
        std::cout << "n=" << ap.n << " sigma=" << ap.sigma << " deficiency=" << ap.deficiency
                  << " aliquot=" << ap.aliquot
                  << " abundancy=" << opnlab::to_decimal(ap.abundancy)
                  << " perfect=" << (ap.deficiency == 0 ? "yes" : "no") << "\n";
    }
    return kExitOk;
}

int cmd_nearest_square(const std::string& gs, const std::string& format) {
    opnlab::PosInt gap = need_posint(gs, "--gap");
    if (gap < 1) throw UsageError("--gap must be >= 1");
    auto rec = opnlab::nearest_square_argument(gap);
    if (format == "json") {
        std::cout << opnlab::json_of(rec).dump(2) << "\n";
    } else {
        std::cout << "gap=" << rec.gap << " q=" << rec.q << " surplus=" << rec.surplus
                  << (rec.gap_is_square ? " (gap is a square)" : "") << "\n"
                  << "chain: (m+q)(m-q) = p^k - surplus; requires " << rec.side_condition
                  << "; then " << rec.conclusion << "\n";
    }
    return kExitOk;
}

int cmd_scan(uint64_t m_max, uint64_t pk_max, unsigned workers, const std::string& out_path,
             const std::string& format, bool include_inverted) {
    opnlab::ScanConfig cfg;
    cfg.m_max = m_max;
    cfg.pk_max = pk_max;
    cfg.workers = workers;
    cfg.require_positive_gap = !include_inverted;
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    std::ofstream file;
    std::ostream* records_out = &std::cout;
    if (!out_path.empty()) {
        file.open(out_path, std::ios::binary);
        if (!file) {
            std::cerr << "cannot write " << out_path << "\n";
            return kExitCantWrite;
        }
        records_out = &file;
    }

    opnlab::ScanSummary summary;
    if (format == "json") {
        std::string buf = "{\n  \"records\": [";
        bool first = true;
        summary = opnlab::run_scan(cfg, [&](const opnlab::ScanRecord& r) {
            buf += first ? "\n" : ",\n";
            first = false;
            buf += opnlab::json_of(r).dump();
            if (buf.size() > (1u << 20)) {
                *records_out << buf;
                buf.clear();
            }
        });
        buf += "\n  ]";
        if (out_path.empty()) {
            buf += ",\n  \"summary\": " + opnlab::json_of(summary).dump(2);
        }
        buf += "\n}\n";
        *records_out << buf;
        if (!out_path.empty()) std::cout << opnlab::json_of(summary).dump(2) << "\n";
    } else {
        // csv and text share the CSV record shape
        std::string buf = opnlab::kScanCsvHeader;
        buf += "\n";
        summary = opnlab::run_scan(cfg, [&](const opnlab::ScanRecord& r) {
            opnlab::append_csv_line(buf, r);
            if (buf.size() > (1u << 20)) {
                *records_out << buf;
                buf.clear();
            }
        });
        *records_out << buf;
        records_out->flush();
        std::ostream& sum_out = out_path.empty() ? std::cerr : std::cout;
        sum_out << "total=" << summary.total_candidates;
        for (int i = 0; i < 6; ++i) sum_out << " case" << (i + 1) << "=" << summary.per_case[i];
        sum_out << " m_lt_pk=" << summary.proven_m_lt_pk
                << " pk_lt_m=" << summary.proven_pk_lt_m << " open=" << summary.open_count
                << " abs_diff_one=" << summary.abs_diff_one_count
                << " conjecture_holds=" << summary.conjecture_holds_count
                << " conjecture_fails=" << summary.conjecture_fails_count
                << " inverted=" << summary.inverted_count
                << " violations=" << summary.violations.size() << "\n";
    }
    if (file.is_open()) {
        file.close();
        if (!file) {
            std::cerr << "error writing " << out_path << "\n";
            return kExitCantWrite;
        }
    }
    if (!summary.violations.empty()) {
        for (const auto& v : summary.violations) std::cerr << "VIOLATION: " << v << "\n";
        return kExitViolations;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact-arithmetic toolkit for the m^2 - p^k gap of Eulerian candidates"};
    app.require_subcommand(1);

    std::string p, k, m, n, gap, out, format = "text";
    std::vector<std::string> pretend;
    uint64_t m_max = 0, pk_max = 0;
    unsigned workers = 1;
    bool include_inverted = false;

    auto add_format = [&](CLI::App* sub, bool allow_csv) {
        auto fmts = allow_csv ? std::vector<std::string>{"json", "csv", "text"}
                              : std::vector<std::string>{"json", "text"};
        sub->add_option("--format", format, "output format")->check(CLI::IsMember(fmts));
    };

    auto* verify = app.add_subcommand("verify", "full report for one candidate (p, k, m)");
    verify->add_option("--p", p)->required();
    verify->add_option("--k", k)->required();
    verify->add_option("--m", m)->required();
    add_format(verify, false);

    auto* classify = app.add_subcommand("classify", "gap decomposition and case verdict");
    classify->add_option("--p", p)->required();
    classify->add_option("--k", k)->required();
    classify->add_option("--m", m)->required();
    add_format(classify, false);

    auto* scan = app.add_subcommand("scan", "enumerate candidates and scan the gap cases");
    scan->add_option("--m-max", m_max)->required();
    scan->add_option("--pk-max", pk_max)->required();
    scan->add_option("--workers", workers);
    scan->add_option("--out", out, "records file (summary then goes to stdout)");
    scan->add_flag("--include-inverted", include_inverted,
                   "also emit candidates with m^2 <= p^k, tagged as inverted");
    add_format(scan, true);

    auto* sigma = app.add_subcommand("sigma", "arithmetic profile of one n");
    sigma->add_option("--n", n)->required();
    sigma->add_option("--pretend-prime", pretend, "treat this divisor as an atomic prime");
    add_format(sigma, false);

    auto* nearest = app.add_subcommand("nearest-square", "nearest-square argument for a gap");
    nearest->add_option("--gap", gap)->required();
    add_format(nearest, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (verify->parsed()) return cmd_verify(p, k, m, format);
        if (classify->parsed()) return cmd_classify(p, k, m, format);
        if (scan->parsed()) return cmd_scan(m_max, pk_max, workers, out, format, include_inverted);
        if (sigma->parsed()) return cmd_sigma(n, pretend, format);
        if (nearest->parsed()) return cmd_nearest_square(gap, format);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}
