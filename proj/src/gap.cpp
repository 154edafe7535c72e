#include "opnlab/gap.hpp"

#include <cassert>

namespace opnlab {

PosInt GapDecomposition::two_pow_r() const {
    mpz_class p2 = 1;
    p2 <<= r;
    return p2;
}

GapDecomposition gap_decompose(const PosInt& m, const PosInt& pk) {
    mpz_class gap = m * m - pk;
    if (gap <= 0) {
        throw NonPositiveGap("m^2 - p^k = " + gap.get_str() +
                             " is not positive (m=" + m.get_str() + ", p^k=" + pk.get_str() + ")");
    }
    GapDecomposition d;
    d.r = two_adic_valuation(gap);
    d.t = gap >> d.r;
    d.gap = std::move(gap);
    return d;
}

GapDecomposition gap_decompose(const EulerianCandidate& c) {
    GapDecomposition d = gap_decompose(c.m, c.pk);
    // valid candidates have m^2 == p^k == 1 (mod 4), so the gap is 0 mod 4
    assert(d.r >= 2);
    assert(d.t != d.two_pow_r());
    return d;
}

int case_number(CaseLabel l) { return static_cast<int>(l); }

CaseLabel classify_case(const PosInt& m, const GapDecomposition& d) {
    mpz_class p2 = d.two_pow_r();
    if (m == d.t) throw MEqualsT("m = t = " + m.get_str());
    if (m == p2) throw MEqualsPowerOfTwo("m = 2^r = " + m.get_str());
    if (m > d.t && d.t > p2) return CaseLabel::Case1;
    if (m > p2 && p2 > d.t) return CaseLabel::Case2;
    if (d.t > m && m > p2) return CaseLabel::Case3;
    if (p2 > m && m > d.t) return CaseLabel::Case4;
    if (d.t > p2 && p2 > m) return CaseLabel::Case5;
    return CaseLabel::Case6;
}

std::string conclusion_token(Conclusion c) {
    switch (c) {
        case Conclusion::ProvenMLessThanPk: return "m<p^k";
        case Conclusion::ProvenPkLessThanM: return "p^k<m";
        case Conclusion::Impossible: return "impossible";
        case Conclusion::Open: return "open";
    }
    return "?";
}

ImplicationVerdict derive_verdict(const PosInt& m, const PosInt& pk,
                                  const GapDecomposition& d, CaseLabel label) {
    mpz_class p2 = d.two_pow_r();
    if (pk != m * m - p2 * d.t) {
        throw InconsistentInputs("p^k != m^2 - 2^r t for m=" + m.get_str() +
                                 ", p^k=" + pk.get_str());
    }

    ImplicationVerdict v;
    mpz_class diff = abs(p2 - d.t);
    v.abs_diff_one = (diff == 1);

    switch (label) {
        case CaseLabel::Case1:
        case CaseLabel::Case2: {
            // subtraction route: subtract t^2 (Case 1) or 2^{2r} (Case 2)
            DivisibilityWitness w;
            if (label == CaseLabel::Case1) {
                w.divisor = m + d.t;
                w.dividend = pk - d.t * (d.t - p2);
            } else {
                w.divisor = m + p2;
                w.dividend = pk - p2 * (p2 - d.t);
            }
            w.divides = (w.dividend > 0) && mpz_divisible_p(w.dividend.get_mpz_t(),
                                                            w.divisor.get_mpz_t());
            bool subtraction_proves = w.divides && w.divisor <= w.dividend && w.dividend < pk;
            // sign route: p^k = m^2 - 2^r t > m |2^r - t|
            v.sign_route_holds = (pk > m * diff);
            v.divisibility = std::move(w);
            v.conclusion = Conclusion::ProvenMLessThanPk;
            v.proof_variant_agreement = subtraction_proves && v.sign_route_holds && (m < pk);
            break;
        }
        case CaseLabel::Case3:
        case CaseLabel::Case4: {
            mpz_class lo = std::min(p2, d.t), hi = std::max(p2, d.t);
            v.sandwich_holds = (lo < m && m < hi);
            v.sandwich = std::make_pair(std::move(lo), std::move(hi));
            // sign route reverses: p^k < m |2^r - t|
            v.sign_route_holds = (pk < m * diff);
            v.proof_variant_agreement = v.sandwich_holds && v.sign_route_holds;
            ContraryInequality ci;
            ci.lhs = 2 * m;
            ci.rhs = p2 + d.t + 1;
            ci.holds = ci.lhs < ci.rhs;
            v.contrary = std::move(ci);
            // |2^r - t| = 1 collapses the sign route to p^k < m
            v.conclusion = v.abs_diff_one ? Conclusion::ProvenPkLessThanM : Conclusion::Open;
            break;
        }
        case CaseLabel::Case5:
        case CaseLabel::Case6:
            // m < min(2^r, t) makes m^2 - 2^r t < 0, contradicting p^k >= 5
            v.conclusion = Conclusion::Impossible;
            break;
    }
    return v;
}

NearestSquareRecord nearest_square_argument(const PosInt& gap) {
    if (gap < 1) throw std::invalid_argument("gap must be >= 1");
    NearestSquareRecord rec;
    rec.gap = gap;
    rec.gap_is_square = is_square(gap);
    rec.q = floor_sqrt(gap) + 1;
    rec.surplus = rec.q * rec.q - gap;
    assert(rec.surplus > 0);
    return rec;
}

namespace {

std::string wit(std::initializer_list<std::pair<const char*, std::string>> kv) {
    std::string s;
    for (const auto& [k, v] : kv) {
        if (!s.empty()) s += " ";
        s += k;
        s += "=";
        s += v;
    }
    return s;
}

}  // namespace

std::vector<std::pair<std::string, const PredicateResult*>> PredicateReport::entries() const {
    return {
        {"gapMod4", &gap_mod4},
        {"gapAtLeast4", &gap_at_least_4},
        {"gapNotSquare", &gap_not_square},
        {"gapGreaterThan2m", &gap_gt_2m},
        {"gapGreaterThanMSquaredOver3", &gap_gt_m2_over_3},
        {"pkLessThanTwoThirdsMSquared", &pk_lt_two_thirds_m2},
        {"sigmaRatioAtLeast7", &sigma_ratio_ge_7},
        {"pkNot2mMinus1", &pk_ne_2m_minus_1},
        {"mFourthPowerExceedsN", &m_fourth_exceeds_n},
        {"pLessThanM", &p_lt_m},
        {"pkLessThanM", &pk_lt_m},
    };
}

PredicateReport theorem_battery(const EulerianCandidate& c) {
    mpz_class m2 = c.m * c.m;
    mpz_class gap = m2 - c.pk;
    if (gap <= 0) {
        throw NonPositiveGap("battery requires m^2 > p^k; gap = " + gap.get_str());
    }

    PredicateReport rep;
    rep.bound_2m = 2 * c.m;
    rep.bound_m2_over_3 = Rational(m2, 3);
    rep.bound_m2_over_3.canonicalize();

    rep.gap_mod4.holds = (gap % 4 == 0);
    rep.gap_mod4.witness = wit({{"gap", gap.get_str()}, {"gap_mod_4", mpz_class(gap % 4).get_str()}});

    rep.gap_at_least_4.holds = (gap >= 4);
    rep.gap_at_least_4.witness = wit({{"gap", gap.get_str()}});

    mpz_class root = floor_sqrt(gap);
    rep.gap_not_square.holds = !is_square(gap);
    rep.gap_not_square.witness =
        wit({{"gap", gap.get_str()},
             {"floor_sqrt", root.get_str()},
             {"floor_sqrt_squared", mpz_class(root * root).get_str()}});

    rep.gap_gt_2m.holds = (gap > rep.bound_2m);
    rep.gap_gt_2m.witness = wit({{"gap", gap.get_str()}, {"two_m", rep.bound_2m.get_str()}});

    rep.gap_gt_m2_over_3.holds = (3 * gap > m2);
    rep.gap_gt_m2_over_3.witness =
        wit({{"three_gap", mpz_class(3 * gap).get_str()}, {"m_squared", m2.get_str()}});

    rep.pk_lt_two_thirds_m2.holds = (3 * c.pk < 2 * m2);
    rep.pk_lt_two_thirds_m2.witness =
        wit({{"three_pk", mpz_class(3 * c.pk).get_str()},
             {"two_m_squared", mpz_class(2 * m2).get_str()}});

    mpz_class sigma_m2 = sigma(factorize(m2));
    rep.sigma_ratio_ge_7.holds = (sigma_m2 >= 7 * c.pk);
    rep.sigma_ratio_ge_7.witness =
        wit({{"sigma_m_squared", sigma_m2.get_str()}, {"seven_pk", mpz_class(7 * c.pk).get_str()}});

    rep.pk_ne_2m_minus_1.holds = (c.pk != rep.bound_2m - 1);
    rep.pk_ne_2m_minus_1.witness =
        wit({{"pk", c.pk.get_str()}, {"two_m_minus_1", mpz_class(rep.bound_2m - 1).get_str()}});

    rep.m_fourth_exceeds_n.holds = (m2 * m2 > c.n);
    rep.m_fourth_exceeds_n.witness =
        wit({{"m_fourth", mpz_class(m2 * m2).get_str()}, {"n", c.n.get_str()}});

    rep.p_lt_m.holds = (c.p < c.m);
    rep.p_lt_m.witness = wit({{"p", c.p.get_str()}, {"m", c.m.get_str()}});

    rep.pk_lt_m.holds = (c.pk < c.m);
    rep.pk_lt_m.witness = wit({{"pk", c.pk.get_str()}, {"m", c.m.get_str()}});

    // one-line corollary: 3 p^k < 2 m^2 gives 3 gap = 3 m^2 - 3 p^k > m^2
    assert(!rep.pk_lt_two_thirds_m2.holds || rep.gap_gt_m2_over_3.holds);
    return rep;
}

}  // namespace opnlab
