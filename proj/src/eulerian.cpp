#include "opnlab/eulerian.hpp"

#include <cassert>

namespace opnlab {

std::string defect_name(CandidateDefect d) {
    switch (d) {
        case CandidateDefect::NotPrime: return "NotPrime";
        case CandidateDefect::BadResidue: return "BadResidue";
        case CandidateDefect::BadExponent: return "BadExponent";
        case CandidateDefect::NotCoprime: return "NotCoprime";
        case CandidateDefect::EvenM: return "EvenM";
    }
    return "?";
}

ValidationResult validate_candidate(const PosInt& p, long k, const PosInt& m) {
    ValidationResult res;
    if (!is_prime(p)) res.defects.push_back(CandidateDefect::NotPrime);
    if (p % 4 != 1) res.defects.push_back(CandidateDefect::BadResidue);
    if (k < 1 || k % 4 != 1) res.defects.push_back(CandidateDefect::BadExponent);
    if (gcd(p, m) != 1) res.defects.push_back(CandidateDefect::NotCoprime);
    if (m < 1 || mpz_even_p(m.get_mpz_t())) res.defects.push_back(CandidateDefect::EvenM);
    if (!res.defects.empty()) return res;

    EulerianCandidate c;
    c.p = p;
    c.k = static_cast<unsigned long>(k);
    c.m = m;
    mpz_pow_ui(c.pk.get_mpz_t(), p.get_mpz_t(), c.k);
    c.n = c.pk * m * m;
    res.candidate = std::move(c);
    return res;
}

namespace {

// sigma of a prime power p^k, in closed form
mpz_class sigma_prime_power(const mpz_class& p, unsigned long k) {
    mpz_class pw;
    mpz_pow_ui(pw.get_mpz_t(), p.get_mpz_t(), k + 1);
    pw -= 1;
    mpz_divexact(pw.get_mpz_t(), pw.get_mpz_t(), mpz_class(p - 1).get_mpz_t());
    return pw;
}

Rational make_rational(const mpz_class& num, const mpz_class& den) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

}  // namespace

IndexReport index_report(const EulerianCandidate& c) {
    IndexReport rep;
    mpz_class m2 = c.m * c.m;
    mpz_class sigma_m2 = sigma(factorize(m2));
    mpz_class sigma_pk = sigma_prime_power(c.p, c.k);
    mpz_class d_m2 = 2 * m2 - sigma_m2;
    mpz_class s_m2 = sigma_m2 - m2;
    mpz_class d_pk = 2 * c.pk - sigma_pk;
    mpz_class s_pk = sigma_pk - c.pk;

    // D(p^k) is even for p == k == 1 (mod 4): sigma(p^k) has k+1 odd terms
    assert(mpz_even_p(d_pk.get_mpz_t()));

    rep.degenerate = (c.m == 1);
    rep.e1 = make_rational(sigma_m2, c.pk);
    rep.e2 = make_rational(2 * m2, sigma_pk);
    rep.e3 = make_rational(d_m2, s_pk);
    rep.e4 = rep.degenerate ? Rational(0) : make_rational(s_m2, d_pk / 2);
    mpz_gcd(rep.e5.get_mpz_t(), m2.get_mpz_t(), sigma_m2.get_mpz_t());

    rep.perfection_equivalent = (rep.e1 == rep.e2);
    rep.all_agree = rep.perfection_equivalent && rep.e1 == rep.e3 && rep.e1 == rep.e4 &&
                    rep.e1 == Rational(rep.e5);

    // e1 = e2 is algebraically sigma(p^k) sigma(m^2) = 2 p^k m^2
    assert(rep.perfection_equivalent == (sigma_pk * sigma_m2 == 2 * c.n));
    return rep;
}

bool perfection_oracle(const EulerianCandidate& c) { return is_perfect(c.n); }

}  // namespace opnlab
