#pragma once

#include "opnlab/arith.hpp"

#include <optional>
#include <string>
#include <vector>

namespace opnlab {

enum class CandidateDefect {
    NotPrime,     // p fails the primality test
    BadResidue,   // p mod 4 != 1
    BadExponent,  // k < 1 or k mod 4 != 1
    NotCoprime,   // gcd(p, m) != 1
    EvenM,        // m even (or m < 1)
};

std::string defect_name(CandidateDefect d);

// N = p^k * m^2 with p prime, p == k == 1 (mod 4), gcd(p,m) = 1, m odd.
struct EulerianCandidate {
    PosInt p;
    unsigned long k;
    PosInt m;
    PosInt pk;  // p^k
    PosInt n;   // p^k * m^2
};

// Either a candidate or the full list of violated conditions, never just the
// first one.
struct ValidationResult {
    std::optional<EulerianCandidate> candidate;
    std::vector<CandidateDefect> defects;

    bool ok() const { return candidate.has_value(); }
};

ValidationResult validate_candidate(const PosInt& p, long k, const PosInt& m);

// The five equivalent expressions for the index at p, evaluated exactly.
// They agree only when N is perfect; for ordinary candidates the report
// records their disagreement.
struct IndexReport {
    Rational e1;  // sigma(m^2) / p^k
    Rational e2;  // 2 m^2 / sigma(p^k)
    Rational e3;  // D(m^2) / s(p^k)
    Rational e4;  // s(m^2) / (D(p^k)/2); reported as 0 when m = 1
    PosInt e5;    // gcd(m^2, sigma(m^2))
    bool all_agree;
    bool perfection_equivalent;  // e1 == e2, equivalent to sigma(N) = 2N
    bool degenerate;             // m = 1 makes s(m^2) = 0
};

IndexReport index_report(const EulerianCandidate& c);

// Ground truth: direct evaluation of sigma(N) = 2N.
bool perfection_oracle(const EulerianCandidate& c);

}  // namespace opnlab
