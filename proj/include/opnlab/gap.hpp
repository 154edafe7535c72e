#pragma once

#include "opnlab/arith.hpp"
#include "opnlab/eulerian.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace opnlab {

struct NonPositiveGap : std::runtime_error {
    explicit NonPositiveGap(const std::string& msg) : std::runtime_error(msg) {}
};
struct MEqualsT : std::runtime_error {
    explicit MEqualsT(const std::string& msg) : std::runtime_error(msg) {}
};
struct MEqualsPowerOfTwo : std::runtime_error {
    explicit MEqualsPowerOfTwo(const std::string& msg) : std::runtime_error(msg) {}
};
struct InconsistentInputs : std::runtime_error {
    explicit InconsistentInputs(const std::string& msg) : std::runtime_error(msg) {}
};

// m^2 - p^k = 2^r * t with t odd; r is the exact 2-adic valuation.
struct GapDecomposition {
    PosInt gap;       // m^2 - p^k, > 0
    unsigned long r;  // >= 2 for valid candidates
    PosInt t;         // odd

    PosInt two_pow_r() const;
};

GapDecomposition gap_decompose(const PosInt& m, const PosInt& pk);
GapDecomposition gap_decompose(const EulerianCandidate& c);

// The six strict orderings of m, t, 2^r.
enum class CaseLabel {
    Case1 = 1,  // m > t > 2^r
    Case2,      // m > 2^r > t
    Case3,      // t > m > 2^r
    Case4,      // 2^r > m > t
    Case5,      // t > 2^r > m   (impossible: forces p^k < 0)
    Case6,      // 2^r > t > m   (impossible: forces p^k < 0)
};

int case_number(CaseLabel l);

CaseLabel classify_case(const PosInt& m, const GapDecomposition& d);

enum class Conclusion {
    ProvenMLessThanPk,
    ProvenPkLessThanM,
    Impossible,
    Open,
};

std::string conclusion_token(Conclusion c);  // "m<p^k", "p^k<m", "impossible", "open"

// Cases 1/2 subtraction route: (m+t) | (p^k - t(t-2^r)) resp.
// (m+2^r) | (p^k - 2^r(2^r-t)).
struct DivisibilityWitness {
    PosInt divisor;
    PosInt dividend;
    bool divides;
};

// Contrary-assumption inequality 2m < 2^r + t + 1, evaluated under the
// assumption p^k < m in Cases 3/4.  Recorded per instance, never used to
// conclude anything.
struct ContraryInequality {
    PosInt lhs;  // 2m
    PosInt rhs;  // 2^r + t + 1
    bool holds;
};

struct ImplicationVerdict {
    Conclusion conclusion = Conclusion::Open;
    std::optional<std::pair<PosInt, PosInt>> sandwich;  // (min(2^r,t), max(2^r,t))
    bool sandwich_holds = false;                        // lo < m < hi
    std::optional<DivisibilityWitness> divisibility;
    std::optional<ContraryInequality> contrary;
    bool abs_diff_one = false;        // |2^r - t| = 1
    bool sign_route_holds = false;    // Cases 1/2: p^k > m|2^r-t|; Cases 3/4: p^k < m|2^r-t|
    bool proof_variant_agreement = true;
};

ImplicationVerdict derive_verdict(const PosInt& m, const PosInt& pk,
                                  const GapDecomposition& d, CaseLabel label);

// q is the smallest integer with q^2 > gap; the chain
// (m+q)(m-q) = p^k - surplus gives (m+q) | (p^k - surplus) and m < p^k,
// valid exactly when the side condition m > q holds.
struct NearestSquareRecord {
    PosInt gap;
    PosInt q;
    PosInt surplus;       // q^2 - gap, always > 0
    bool gap_is_square;   // would contradict the not-a-square theorem for a
                          // genuine candidate; still analyzed
    std::string side_condition = "m > q";
    std::string conclusion = "m < p^k when side condition holds";
};

NearestSquareRecord nearest_square_argument(const PosInt& gap);

struct PredicateResult {
    bool holds = false;
    std::string witness;
};

// Necessary-condition battery.  Any failure certifies non-perfection; the
// battery never claims perfection.
struct PredicateReport {
    PredicateResult gap_mod4;                    // gap == 0 (mod 4)
    PredicateResult gap_at_least_4;
    PredicateResult gap_not_square;
    PredicateResult gap_gt_2m;                   // gap > 2m
    PredicateResult gap_gt_m2_over_3;            // gap > m^2/3
    PredicateResult pk_lt_two_thirds_m2;         // p^k < 2m^2/3
    PredicateResult sigma_ratio_ge_7;            // sigma(m^2)/p^k >= 7
    PredicateResult pk_ne_2m_minus_1;            // p^k != 2m - 1
    PredicateResult m_fourth_exceeds_n;          // m^4 > N
    PredicateResult p_lt_m;
    PredicateResult pk_lt_m;

    PosInt bound_2m;            // derived numeric bound 2m
    Rational bound_m2_over_3;   // derived numeric bound m^2/3

    // reported magnitude threshold for m from the literature; never enforced
    static constexpr const char* kMagnitudeFloor = "10^375";

    std::vector<std::pair<std::string, const PredicateResult*>> entries() const;
};

PredicateReport theorem_battery(const EulerianCandidate& c);

}  // namespace opnlab
