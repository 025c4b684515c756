#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "molliclt/arith.hpp"

namespace molliclt {

inline constexpr u64 kDefaultEigenvalueCache = 10'000;

// Hecke-normalized eigenvalues lambda_f(p); prime powers by the Hecke relation.
struct HeckeForm {
    std::string label;
    unsigned weight = 12;
    u64 level = 1;
    int root_number = 1;
    u64 cache_limit = 0;  // 0: provider has no limit
    std::function<double(u64)> eigenvalue;

    double lambda_p(u64 p) const;
    double lambda_prime_power(u64 p, unsigned a) const;
    double lambda(u64 n) const;
};

// tau(n) for 1 <= n <= N from the q-expansion of eta^24 (index 0 unused).
std::vector<mpz_class> tau_coefficients(u64 N);
// Coefficients of E4 * Delta, the weight 16 level 1 eigenform (index 0 unused; composites left 0
// when primes_only).
std::vector<mpz_class> weight16_coefficients(u64 N, bool primes_only = false);

HeckeForm delta_form(u64 cache_limit = kDefaultEigenvalueCache);
HeckeForm weight16_form(u64 cache_limit = kDefaultEigenvalueCache);
// A non-modular coefficient provider, e.g. lambda == 1, used for degenerate checks.
HeckeForm constant_form(double value, std::string label = "constant");

// CSV "p,lambda_f" with the form label in a header comment.
std::string eigenvalue_csv(const HeckeForm& f, u64 max_p);

}  // namespace molliclt
