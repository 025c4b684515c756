#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <gmpxx.h>

namespace molliclt {

using u64 = std::uint64_t;

struct PrimePower {
    u64 p;
    unsigned a;
};

struct FactoredInteger {
    u64 n = 1;
    std::vector<PrimePower> factors;  // ascending p
};

// Primes in (lo, hi].
struct PrimeInterval {
    double lo = 0;
    double hi = 0;
    std::vector<u64> primes;
};

struct SmoothInteger {
    u64 n;
    unsigned omega;
};

inline constexpr std::size_t kSmoothEnumerationLimit = 20'000'000;
inline constexpr double kSieveWidthLimit = 2e8;

u64 mulmod(u64 a, u64 b, u64 m);
u64 powmod(u64 b, u64 e, u64 m);
bool is_prime(u64 n);

FactoredInteger factorize(u64 n);
std::vector<u64> divisors(u64 n);

unsigned big_omega(u64 n);
int liouville(u64 n);
int mobius(u64 n);

mpq_class nu(u64 n);
mpq_class nu_k(u64 n, unsigned k);
mpq_class nu_k_ell(u64 n, unsigned k, unsigned ell);

PrimeInterval sieve_primes(double lo, double hi);

// Ascending, includes n = 1.
std::vector<SmoothInteger> smooth_integers(const std::vector<u64>& primes, unsigned ell, u64 cap,
                                           std::size_t limit = kSmoothEnumerationLimit);

}  // namespace molliclt
