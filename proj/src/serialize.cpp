#include "opnlab/serialize.hpp"

#include <charconv>

namespace opnlab {

std::string to_decimal(const PosInt& n) { return n.get_str(); }

std::string to_decimal(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string case_token(int case_label) {
    if (case_label >= 1 && case_label <= 6) return "Case" + std::to_string(case_label);
    return "inverted";
}

Json json_of(const ArithProfile& p) {
    return Json{
        {"n", to_decimal(p.n)},
        {"sigma", to_decimal(p.sigma)},
        {"deficiency", p.deficiency.get_str()},
        {"aliquot", to_decimal(p.aliquot)},
        {"abundancy", to_decimal(p.abundancy)},
    };
}

Json json_of(const IndexReport& r) {
    return Json{
        {"e1_sigma_m2_over_pk", to_decimal(r.e1)},
        {"e2_2m2_over_sigma_pk", to_decimal(r.e2)},
        {"e3_deficiency_ratio", to_decimal(r.e3)},
        {"e4_aliquot_ratio", to_decimal(r.e4)},
        {"e5_gcd", to_decimal(r.e5)},
        {"all_agree", r.all_agree},
        {"perfection_equivalent", r.perfection_equivalent},
        {"degenerate", r.degenerate},
    };
}

Json json_of(const GapDecomposition& d) {
    return Json{
        {"gap", to_decimal(d.gap)},
        {"r", d.r},
        {"t", to_decimal(d.t)},
        {"two_pow_r", to_decimal(d.two_pow_r())},
    };
}

Json json_of(const ImplicationVerdict& v) {
    Json j{
        {"conclusion", conclusion_token(v.conclusion)},
        {"abs_diff_one", v.abs_diff_one},
        {"sign_route_holds", v.sign_route_holds},
        {"proof_variant_agreement", v.proof_variant_agreement},
    };
    if (v.sandwich) {
        j["sandwich_lo"] = to_decimal(v.sandwich->first);
        j["sandwich_hi"] = to_decimal(v.sandwich->second);
        j["sandwich_holds"] = v.sandwich_holds;
    }
    if (v.divisibility) {
        j["divisibility"] = Json{
            {"divisor", to_decimal(v.divisibility->divisor)},
            {"dividend", to_decimal(v.divisibility->dividend)},
            {"divides", v.divisibility->divides},
        };
    }
    if (v.contrary) {
        j["contrary_inequality"] = Json{
            {"two_m", to_decimal(v.contrary->lhs)},
            {"two_pow_r_plus_t_plus_1", to_decimal(v.contrary->rhs)},
            {"holds", v.contrary->holds},
            {"contrary_assumption_refuted", !v.contrary->holds},
        };
    }
    return j;
}

Json json_of(const NearestSquareRecord& r) {
    return Json{
        {"gap", to_decimal(r.gap)},
        {"q", to_decimal(r.q)},
        {"surplus", to_decimal(r.surplus)},
        {"gap_is_square", r.gap_is_square},
        {"side_condition", r.side_condition},
        {"conclusion", r.conclusion},
    };
}

Json json_of(const PredicateReport& r) {
    Json preds = Json::object();
    for (const auto& [name, res] : r.entries()) {
        preds[name] = Json{{"holds", res->holds}, {"witness", res->witness}};
    }
    return Json{
        {"predicates", preds},
        {"bound_2m", to_decimal(r.bound_2m)},
        {"bound_m2_over_3", to_decimal(r.bound_m2_over_3)},
        {"magnitude_floor_reported", PredicateReport::kMagnitudeFloor},
    };
}

Json json_of(const ScanRecord& r) {
    Json j{
        {"p", std::to_string(r.p)},
        {"k", r.k},
        {"m", std::to_string(r.m)},
        {"pk", std::to_string(r.pk)},
        {"gap", std::to_string(r.gap)},
    };
    if (r.inverted) {
        j["regime"] = "inverted";
        return j;
    }
    j["r"] = r.r;
    j["t"] = std::to_string(r.t);
    j["case"] = case_token(r.case_label);
    j["verdict"] = conclusion_token(r.verdict);
    j["abs_diff_one"] = r.abs_diff_one;
    j["t_mersenne"] = r.t_mersenne;
    j["t_prime"] = r.t_prime;
    if (r.has_sandwich) {
        j["sandwich_lo"] = std::to_string(r.sandwich_lo);
        j["sandwich_hi"] = std::to_string(r.sandwich_hi);
        j["sandwich_holds"] = r.sandwich_holds;
    }
    j["gap_not_square"] = r.gap_not_square;
    j["gap_gt_2m"] = r.gap_gt_2m;
    j["gap_gt_m2_over_3"] = r.gap_gt_m2_over_3;
    j["sigma_ratio_ge_7"] = r.sigma_ratio_ge_7;
    j["pk_ne_2m_minus_1"] = r.pk_ne_2m_minus_1;
    return j;
}

Json json_of(const ScanSummary& s) {
    return Json{
        {"total_candidates", s.total_candidates},
        {"per_case",
         Json{{"case1", s.per_case[0]},
              {"case2", s.per_case[1]},
              {"case3", s.per_case[2]},
              {"case4", s.per_case[3]},
              {"case5", s.per_case[4]},
              {"case6", s.per_case[5]}}},
        {"proven_m_lt_pk", s.proven_m_lt_pk},
        {"proven_pk_lt_m", s.proven_pk_lt_m},
        {"open_count", s.open_count},
        {"abs_diff_one_count", s.abs_diff_one_count},
        {"conjecture_holds_count", s.conjecture_holds_count},
        {"conjecture_fails_count", s.conjecture_fails_count},
        {"inverted_count", s.inverted_count},
        {"violations", s.violations},
    };
}

const char* const kScanCsvHeader =
    "p,k,m,pk,gap,r,t,case,verdict,abs_diff_one,t_mersenne,t_prime,"
    "sandwich_lo,sandwich_hi,gap_not_square,gap_gt_2m,gap_gt_m2_over_3,"
    "sigma_ratio_ge_7,pk_ne_2m_minus_1";

namespace {

void append_u64(std::string& out, uint64_t v) {
    char buf[24];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, ptr);
}

void append_i64(std::string& out, int64_t v) {
    char buf[24];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, ptr);
}

void append_bool(std::string& out, bool b) { out.push_back(b ? '1' : '0'); }

}  // namespace

void append_csv_line(std::string& out, const ScanRecord& r) {
    append_u64(out, r.p);
    out.push_back(',');
    append_u64(out, r.k);
    out.push_back(',');
    append_u64(out, r.m);
    out.push_back(',');
    append_u64(out, r.pk);
    out.push_back(',');
    append_i64(out, r.gap);
    out.push_back(',');
    if (r.inverted) {
        // r,t,case,verdict blank; battery fields blank
        out.append(",,,inverted,,,,,,,,,,");
        out.push_back('\n');
        return;
    }
    append_u64(out, r.r);
    out.push_back(',');
    append_u64(out, r.t);
    out.push_back(',');
    append_u64(out, static_cast<uint64_t>(r.case_label));
    out.push_back(',');
    out.append(conclusion_token(r.verdict));
    out.push_back(',');
    append_bool(out, r.abs_diff_one);
    out.push_back(',');
    append_bool(out, r.t_mersenne);
    out.push_back(',');
    append_bool(out, r.t_prime);
    out.push_back(',');
    if (r.has_sandwich) {
        append_u64(out, r.sandwich_lo);
        out.push_back(',');
        append_u64(out, r.sandwich_hi);
    } else {
        out.push_back(',');
    }
    out.push_back(',');
    append_bool(out, r.gap_not_square);
    out.push_back(',');
    append_bool(out, r.gap_gt_2m);
    out.push_back(',');
    append_bool(out, r.gap_gt_m2_over_3);
    out.push_back(',');
    append_bool(out, r.sigma_ratio_ge_7);
    out.push_back(',');
    append_bool(out, r.pk_ne_2m_minus_1);
    out.push_back('\n');
}

std::string classify_line(const GapDecomposition& d, CaseLabel label,
                          const ImplicationVerdict& v) {
    std::string s = "r=" + std::to_string(d.r) + " t=" + d.t.get_str() +
                    " case=" + std::to_string(case_number(label)) +
                    " verdict=" + conclusion_token(v.conclusion);
    if (v.sandwich) {
        s += " sandwich=(" + v.sandwich->first.get_str() + "," + v.sandwich->second.get_str() + ")";
    }
    return s;
}

}  // namespace opnlab
