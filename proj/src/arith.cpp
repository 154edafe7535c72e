#include "opnlab/arith.hpp"

#include <algorithm>
#include <cassert>
#include <map>

namespace opnlab {

namespace {

const uint64_t kMrWitnesses[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

// Miller-Rabin with the fixed witness set above; correct for all n < 2^64.
bool miller_rabin_fixed(const mpz_class& n) {
    mpz_class d = n - 1;
    unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
    d >>= s;
    mpz_class x, a;
    for (uint64_t w : kMrWitnesses) {
        a = static_cast<unsigned long>(w);
        if (mpz_cmp(a.get_mpz_t(), n.get_mpz_t()) >= 0) continue;
        mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned long i = 1; i < s; ++i) {
            x = (x * x) % n;
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

using u128 = unsigned __int128;

struct U256 {
    u128 hi, lo;
};

U256 mul_full_128(u128 a, u128 b) {
    uint64_t a0 = static_cast<uint64_t>(a), b0 = static_cast<uint64_t>(b);
    uint64_t a1 = static_cast<uint64_t>(a >> 64), b1 = static_cast<uint64_t>(b >> 64);
    u128 p00 = static_cast<u128>(a0) * b0;
    u128 p01 = static_cast<u128>(a0) * b1;
    u128 p10 = static_cast<u128>(a1) * b0;
    u128 p11 = static_cast<u128>(a1) * b1;
    u128 mid = p01 + p10;
    u128 mid_carry = (mid < p01) ? (static_cast<u128>(1) << 64) : 0;
    u128 lo = p00 + (mid << 64);
    u128 lo_carry = (lo < p00) ? 1 : 0;
    return {p11 + (mid >> 64) + mid_carry + lo_carry, lo};
}

// Montgomery arithmetic mod an odd n < 2^128, R = 2^128
struct Mont128 {
    u128 n;
    u128 ninv;  // -n^{-1} mod 2^128

    explicit Mont128(u128 modulus) : n(modulus) {
        u128 inv = n;  // Newton iteration doubles correct bits each step
        for (int i = 0; i < 7; ++i) inv *= 2 - n * inv;
        ninv = static_cast<u128>(0) - inv;
    }

    u128 mul(u128 a, u128 b) const {
        U256 t = mul_full_128(a, b);
        u128 m = t.lo * ninv;
        U256 mn = mul_full_128(m, n);
        u128 lo = t.lo + mn.lo;
        u128 carry = (lo < t.lo) ? 1 : 0;
        u128 s = t.hi + mn.hi;
        bool ovf = s < t.hi;
        u128 out = s + carry;
        ovf |= out < s;
        if (ovf || out >= n) out -= n;
        return out;
    }
};

u128 gcd_u128(u128 a, u128 b) {
    while (b != 0) {
        u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Brent rho on a 128-bit modulus in Montgomery form; 0 on failure
u128 brent_rho_u128(u128 n, uint64_t seed, unsigned long max_iters) {
    Mont128 mont(n);
    uint64_t st = seed;
    u128 y = (static_cast<u128>(splitmix64(st)) << 64 | splitmix64(st)) % (n - 3) + 2;
    u128 c = (static_cast<u128>(splitmix64(st)) << 64 | splitmix64(st)) % (n - 2) + 1;
    auto step = [&](u128 v) {
        u128 s = mont.mul(v, v) + c;
        if (s < c || s >= n) s -= n;  // s < c means the add wrapped past 2^128
        return s;
    };
    u128 x = y, ys = y, q = 1, g = 1;
    unsigned long r = 1, iters = 0;
    const unsigned long batch = 128;
    while (g == 1 && iters < max_iters) {
        x = y;
        for (unsigned long i = 0; i < r; ++i) y = step(y);
        unsigned long k = 0;
        while (k < r && g == 1) {
            ys = y;
            unsigned long lim = std::min(batch, r - k);
            for (unsigned long i = 0; i < lim; ++i) {
                y = step(y);
                q = mont.mul(q, x > y ? x - y : y - x);
            }
            g = gcd_u128(q, n);
            k += lim;
            iters += lim;
        }
        r *= 2;
    }
    if (g == n) {
        do {
            ys = step(ys);
            g = gcd_u128(x > ys ? x - ys : ys - x, n);
        } while (g == 1);
    }
    if (g == n || g == 1) return 0;
    return g;
}

// Brent's variant of Pollard rho.  Returns a nontrivial factor of n
// (n composite, odd, not divisible by small primes) or 0 on failure.
mpz_class brent_rho(const mpz_class& n, uint64_t seed, unsigned long max_iters) {
    gmp_randclass rng(gmp_randinit_mt);
    rng.seed(seed);
    mpz_class y = rng.get_z_range(n - 3) + 2;
    mpz_class c = rng.get_z_range(n - 2) + 1;
    mpz_class x, ys, q = 1, g = 1;
    unsigned long r = 1;
    const unsigned long batch = 128;
    unsigned long iters = 0;
    while (g == 1 && iters < max_iters) {
        x = y;
        for (unsigned long i = 0; i < r; ++i) y = (y * y + c) % n;
        unsigned long k = 0;
        while (k < r && g == 1) {
            ys = y;
            unsigned long lim = std::min(batch, r - k);
            for (unsigned long i = 0; i < lim; ++i) {
                y = (y * y + c) % n;
                q = q * abs(x - y) % n;
            }
            mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
            k += lim;
            iters += lim;
        }
        r *= 2;
    }
    if (g == n) {
        // backtrack one step at a time
        do {
            ys = (ys * ys + c) % n;
            mpz_gcd(g.get_mpz_t(), mpz_class(abs(x - ys)).get_mpz_t(), n.get_mpz_t());
        } while (g == 1);
    }
    if (g == n || g == 1) return 0;
    return g;
}

void factor_cofactor(const mpz_class& n, uint64_t seed, const FactorConfig& cfg,
                     std::map<mpz_class, unsigned long>& out, unsigned long mult) {
    if (n == 1) return;
    if (is_prime(n)) {
        out[n] += mult;
        return;
    }
    // perfect powers trip up rho; peel them off first
    if (mpz_perfect_power_p(n.get_mpz_t())) {
        for (unsigned long e = 2; e <= mpz_sizeinbase(n.get_mpz_t(), 2); ++e) {
            mpz_class root;
            if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), e) != 0) {
                factor_cofactor(root, seed, cfg, out, mult * e);
                return;
            }
        }
    }
    bool small = mpz_sizeinbase(n.get_mpz_t(), 2) <= 128;
    for (unsigned round = 0; round < cfg.rho_rounds; ++round) {
        mpz_class d;
        if (small) {
            u128 nn = mpz_get_ui(mpz_class(n >> 64).get_mpz_t());
            nn = (nn << 64) | mpz_get_ui(mpz_class(n & mpz_class("18446744073709551615")).get_mpz_t());
            u128 g = brent_rho_u128(nn, seed + round, cfg.rho_iterations * 16);
            if (g != 0) {
                d = mpz_class(static_cast<unsigned long>(g >> 64));
                d <<= 64;
                d |= mpz_class(static_cast<unsigned long>(g));
            }
        } else {
            d = brent_rho(n, seed + round, cfg.rho_iterations);
        }
        if (d != 0) {
            factor_cofactor(d, seed, cfg, out, mult);
            factor_cofactor(n / d, seed, cfg, out, mult);
            return;
        }
    }
    throw FactoringTimeout("cofactor with " +
                           std::to_string(mpz_sizeinbase(n.get_mpz_t(), 10)) +
                           " digits resisted " + std::to_string(cfg.rho_rounds) +
                           " rho rounds");
}

}  // namespace

PosInt Factorization::value() const {
    mpz_class prod = 1, pw;
    for (const auto& fe : factors) {
        mpz_pow_ui(pw.get_mpz_t(), fe.prime.get_mpz_t(), fe.exponent);
        prod *= pw;
    }
    return prod;
}

PrimalityResult classify_prime(const PosInt& n) {
    if (n < 2) return {false, false};
    if (n == 2 || n == 3) return {true, false};
    if (mpz_even_p(n.get_mpz_t())) return {false, false};
    if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 64) {
        return {miller_rabin_fixed(n), false};
    }
    // 64 Miller-Rabin reps on top of BPSW: error probability < 4^-64 = 2^-128
    int res = mpz_probab_prime_p(n.get_mpz_t(), 64);
    if (res == 2) return {true, false};
    return {res == 1, res == 1};
}

bool is_prime(const PosInt& n) { return classify_prime(n).prime; }

Factorization factorize(const PosInt& n, const std::set<PosInt>& pretend_primes,
                        const FactorConfig& cfg) {
    if (n < 1) throw std::invalid_argument("factorize: n must be >= 1");
    Factorization result;
    result.pretend_primes = pretend_primes;

    std::map<mpz_class, unsigned long> acc;
    mpz_class rem = n;

    // pretend primes come out first, as atomic factors
    for (const auto& q : pretend_primes) {
        if (q < 2) continue;
        while (mpz_divisible_p(rem.get_mpz_t(), q.get_mpz_t())) {
            rem /= q;
            acc[q] += 1;
        }
    }

    // trial division: 2, then odd numbers up to the limit
    unsigned long e = mpz_scan1(rem.get_mpz_t(), 0);
    if (e > 0 && rem > 1) {
        acc[2] += e;
        rem >>= e;
    }
    for (unsigned long d = 3; d <= cfg.trial_limit && rem > 1; d += 2) {
        if (mpz_cmp_ui(rem.get_mpz_t(), d * d) < 0) {
            // remaining cofactor is prime
            acc[rem] += 1;
            rem = 1;
            break;
        }
        while (mpz_divisible_ui_p(rem.get_mpz_t(), d)) {
            rem /= d;
            acc[d] += 1;
        }
    }

    if (rem > 1) {
        uint64_t seed = cfg.seed ? *cfg.seed : fnv1a(n.get_str());
        factor_cofactor(rem, seed, cfg, acc, 1);
    }

    for (const auto& [p, exp] : acc) result.factors.push_back({p, exp});
    return result;
}

PosInt sigma(const Factorization& f) {
    mpz_class prod = 1, pw;
    for (const auto& fe : f.factors) {
        // (p^(e+1) - 1) / (p - 1); a pretend prime q at exponent 1 gives q+1
        mpz_pow_ui(pw.get_mpz_t(), fe.prime.get_mpz_t(), fe.exponent + 1);
        pw -= 1;
        mpz_divexact(pw.get_mpz_t(), pw.get_mpz_t(), mpz_class(fe.prime - 1).get_mpz_t());
        prod *= pw;
    }
    return prod;
}

ArithProfile profile(const PosInt& n, const std::set<PosInt>& pretend_primes,
                     const FactorConfig& cfg) {
    ArithProfile ap;
    ap.n = n;
    ap.sigma = sigma(factorize(n, pretend_primes, cfg));
    ap.deficiency = 2 * n - ap.sigma;
    ap.aliquot = ap.sigma - n;
    ap.abundancy = Rational(ap.sigma, n);
    ap.abundancy.canonicalize();
    assert(ap.deficiency + ap.aliquot == n);
    return ap;
}

bool is_perfect(const PosInt& n, const std::set<PosInt>& pretend_primes,
                const FactorConfig& cfg) {
    return sigma(factorize(n, pretend_primes, cfg)) == 2 * n;
}

PosInt floor_sqrt(const PosInt& n) {
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

bool is_square(const PosInt& n) { return mpz_perfect_square_p(n.get_mpz_t()) != 0; }

unsigned long two_adic_valuation(const PosInt& n) {
    assert(n > 0);
    return mpz_scan1(n.get_mpz_t(), 0);
}

}  // namespace opnlab
