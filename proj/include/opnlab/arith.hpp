#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace opnlab {

using PosInt = mpz_class;
using Rational = mpq_class;

// Thrown when a cofactor resists the configured factoring effort.
struct FactoringTimeout : std::runtime_error {
    explicit FactoringTimeout(const std::string& msg) : std::runtime_error(msg) {}
};

struct FactorEntry {
    PosInt prime;
    unsigned long exponent;
};

// Canonical factorization: primes strictly increasing, exponents >= 1,
// product of prime^exponent equals the factored integer.  Members of
// pretend_primes are extracted as atomic "prime" factors without any
// primality test (spoof/Descartes-number support).
struct Factorization {
    std::vector<FactorEntry> factors;
    std::set<PosInt> pretend_primes;

    PosInt value() const;  // multiply back
};

struct ArithProfile {
    PosInt n;
    PosInt sigma;          // sum of divisors
    mpz_class deficiency;  // 2n - sigma(n), negative for abundant n
    PosInt aliquot;        // sigma(n) - n
    Rational abundancy;    // sigma(n)/n in lowest terms
};

struct FactorConfig {
    unsigned long trial_limit = 1'000'000;
    unsigned rho_rounds = 64;               // rho restarts before giving up
    unsigned long rho_iterations = 1u << 22;
    std::optional<uint64_t> seed;           // overrides the n-derived seed
};

struct PrimalityResult {
    bool prime;
    bool probabilistic;  // true when only a probabilistic test was available
};

// Deterministic for n < 2^64 (fixed Miller-Rabin witness set); above that a
// probabilistic test with error probability below 2^-128, flagged as such.
PrimalityResult classify_prime(const PosInt& n);
bool is_prime(const PosInt& n);

Factorization factorize(const PosInt& n, const std::set<PosInt>& pretend_primes = {},
                        const FactorConfig& cfg = {});

PosInt sigma(const Factorization& f);

ArithProfile profile(const PosInt& n, const std::set<PosInt>& pretend_primes = {},
                     const FactorConfig& cfg = {});

bool is_perfect(const PosInt& n, const std::set<PosInt>& pretend_primes = {},
                const FactorConfig& cfg = {});

// Exact integer helpers; no floating point anywhere near predicate boundaries.
PosInt floor_sqrt(const PosInt& n);
bool is_square(const PosInt& n);
unsigned long two_adic_valuation(const PosInt& n);  // requires n > 0

}  // namespace opnlab
