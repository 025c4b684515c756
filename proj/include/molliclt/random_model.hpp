#pragma once

#include <functional>
#include <string>
#include <vector>

#include "molliclt/mollifier.hpp"
#include "molliclt/polynomial.hpp"

namespace molliclt {

// X(p) uniform on the unit circle, stored as angles in [0, 2pi).
struct RandomSample {
    std::vector<u64> primes;  // ascending
    std::vector<double> angle;
    u64 seed = 0;
    u64 index = 0;

    cplx x(u64 p) const;  // throws std::out_of_range if p is not in the sample
};

// Counter-based: the angle of p depends only on (seed, index, p).
double sample_angle(u64 seed, u64 index, u64 p);
RandomSample sample(const std::vector<u64>& primes, u64 seed, u64 index);
cplx x_of_n(const RandomSample& s, u64 n);
// sum_n coeff(n) X(n)/sqrt(n)
cplx evaluate(const DirichletPolynomial& poly, const RandomSample& s);

enum class ExpectationMethod { exact, monte_carlo };

struct ExpectationResult {
    cplx value;
    ExpectationMethod method = ExpectationMethod::exact;
    std::size_t n_samples = 0;
    double standard_error = 0;
    u64 seed = 0;
};

struct PolyFactor {
    const DirichletPolynomial* poly;
    bool conjugated;
};

inline constexpr std::size_t kExpectationPairBudget = 10'000'000;

// E of the product, by convolving the plain factors into A, the conjugated ones into B and
// extracting the diagonal sum A(m) conj(B(m)) / m.
ExpectationResult exact_expectation(const std::vector<PolyFactor>& factors,
                                    std::size_t pair_budget = kExpectationPairBudget);

using SampleEvaluator = std::function<cplx(const RandomSample&)>;

// Samples 0..N-1 are split into fixed blocks; block sums are merged in block order, so the result
// does not depend on the thread count.
ExpectationResult mc_expectation(const std::vector<u64>& primes, const SampleEvaluator& f, std::size_t N,
                                 u64 seed, unsigned threads = 1);

std::string expectation_json(const ExpectationResult& r);

// sum_{j <= ell} t^j / j!
double e_trunc(unsigned ell, double t);
// prod_r (1 + e^{-ell_r}) E_{ell_r}(2k re_p[r]); every ell_r must be even.
double d_factor(const std::vector<double>& re_p, const std::vector<unsigned>& ell, double k);

struct MomentReport {
    unsigned k = 0;
    double character_side = 0;  // (1/phi(q)) sum over all chi of (Re P)^{2k}
    double expectation_side = 0;
    double bound = 0;  // k! (sum 1/p)^k
    double sum_inv_p = 0;
};

// Uses P = sum_{c0<p<=y} weight(p) chi(p)/sqrt(p) on I_0; requires y^{2k} < q.
MomentReport moment_identity_check(const CharacterTable& t, const MollifierParams& params, unsigned k,
                                   const std::function<double(u64)>& weight = {});

struct TailCensus {
    double V = 0;
    double sigma = 0;  // sqrt(sum 1/p / 2)
    u64 count = 0;
    u64 total = 0;
    double reference_bound = 0;  // q e^{-V^2/9}
    double ratio = 0;            // count / reference_bound
    bool in_regime = false;      // y^{floor(V^2/9)} <= q^{1/3}
};

// Counts chi (all characters mod q) with |Re P(chi)| >= V sigma.
TailCensus tail_census(const CharacterTable& t, const MollifierParams& params, double V);
// Same, with the prime sums computed once.
TailCensus tail_census(const std::vector<cplx>& prime_sums, const MollifierParams& params, double V);

}  // namespace molliclt
