#include "molliclt/random_model.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <gmpxx.h>

#include "molliclt/compensated.hpp"
#include "molliclt/io.hpp"

namespace molliclt {

namespace {

u64 splitmix64(u64 x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Sorted (n, c) pairs, merged.
using Sparse = std::vector<std::pair<u64, cplx>>;

Sparse normalize(Sparse v) {
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    Sparse out;
    for (auto& [n, c] : v) {
        if (!out.empty() && out.back().first == n)
            out.back().second += c;
        else
            out.emplace_back(n, c);
    }
    return out;
}

Sparse convolve(const Sparse& a, const DirichletPolynomial& b, bool conj_b, std::size_t& pairs, std::size_t budget) {
    pairs += a.size() * b.size();
    if (pairs > budget) throw std::length_error("exact_expectation: pair budget exceeded");
    Sparse out;
    out.reserve(a.size() * b.size());
    for (const auto& [m, c] : a)
        for (std::size_t i = 0; i < b.size(); ++i) {
            u64 n;
            if (__builtin_mul_overflow(m, b.support[i], &n))
                throw std::overflow_error("exact_expectation: support product overflows");
            out.emplace_back(n, c * (conj_b ? std::conj(b.coeff[i]) : b.coeff[i]));
        }
    return normalize(std::move(out));
}

}  // namespace

cplx RandomSample::x(u64 p) const {
    auto it = std::lower_bound(primes.begin(), primes.end(), p);
    if (it == primes.end() || *it != p)
        throw std::out_of_range("random sample has no X(" + std::to_string(p) + ")");
    return std::polar(1.0, angle[static_cast<std::size_t>(it - primes.begin())]);
}

double sample_angle(u64 seed, u64 index, u64 p) {
    u64 h = splitmix64(seed);
    h = splitmix64(h ^ index);
    h = splitmix64(h ^ p);
    return 2 * std::numbers::pi * static_cast<double>(h >> 11) * 0x1.0p-53;
}

RandomSample sample(const std::vector<u64>& primes, u64 seed, u64 index) {
    RandomSample s;
    s.primes = primes;
    std::sort(s.primes.begin(), s.primes.end());
    s.seed = seed;
    s.index = index;
    s.angle.reserve(s.primes.size());
    for (u64 p : s.primes) s.angle.push_back(sample_angle(seed, index, p));
    return s;
}

cplx x_of_n(const RandomSample& s, u64 n) {
    if (n == 0) throw std::invalid_argument("x_of_n: n must be positive");
    double theta = 0;
    for (auto [p, a] : factorize(n).factors) {
        auto it = std::lower_bound(s.primes.begin(), s.primes.end(), p);
        if (it == s.primes.end() || *it != p)
            throw std::out_of_range("x_of_n: prime " + std::to_string(p) + " not in sample");
        theta += a * s.angle[static_cast<std::size_t>(it - s.primes.begin())];
    }
    return std::polar(1.0, std::fmod(theta, 2 * std::numbers::pi));
}

cplx evaluate(const DirichletPolynomial& poly, const RandomSample& s) {
    cplx acc = 0;
    for (std::size_t i = 0; i < poly.size(); ++i)
        acc += poly.coeff[i] * x_of_n(s, poly.support[i]) / std::sqrt(static_cast<double>(poly.support[i]));
    return acc;
}

ExpectationResult exact_expectation(const std::vector<PolyFactor>& factors, std::size_t pair_budget) {
    Sparse A{{1, 1.0}}, B{{1, 1.0}};
    std::size_t pairs = 0;
    for (const auto& f : factors) {
        if (!f.poly) throw std::invalid_argument("exact_expectation: null polynomial");
        if (f.conjugated)
            B = convolve(B, *f.poly, false, pairs, pair_budget);
        else
            A = convolve(A, *f.poly, false, pairs, pair_budget);
    }
    CompensatedComplexSum acc;
    std::size_t i = 0, j = 0;
    while (i < A.size() && j < B.size()) {
        if (A[i].first < B[j].first) {
            ++i;
        } else if (B[j].first < A[i].first) {
            ++j;
        } else {
            acc.add(A[i].second * std::conj(B[j].second) / static_cast<double>(A[i].first));
            ++i;
            ++j;
        }
    }
    ExpectationResult r;
    r.value = acc.value();
    r.method = ExpectationMethod::exact;
    return r;
}

ExpectationResult mc_expectation(const std::vector<u64>& primes, const SampleEvaluator& f, std::size_t N,
                                 u64 seed, unsigned threads) {
    if (N < 100) throw std::invalid_argument("mc_expectation: need at least 100 samples");
    constexpr std::size_t kBlock = 1024;
    const std::size_t nblocks = (N + kBlock - 1) / kBlock;
    struct Block {
        CompensatedComplexSum sum;
        CompensatedSum sq;
        std::string error;
    };
    std::vector<Block> blocks(nblocks);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t b = next.fetch_add(1);
            if (b >= nblocks) return;
            auto& blk = blocks[b];
            for (std::size_t i = b * kBlock; i < std::min(N, (b + 1) * kBlock); ++i) {
                const cplx v = f(sample(primes, seed, i));
                if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
                    blk.error = "mc_expectation: non-finite evaluator output at sample " + std::to_string(i) +
                                " (seed " + std::to_string(seed) + ")";
                    break;
                }
                blk.sum.add(v);
                blk.sq.add(std::norm(v));
            }
        }
    };
    threads = std::max(1u, threads);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    CompensatedComplexSum total;
    CompensatedSum sq;
    for (const auto& blk : blocks) {
        if (!blk.error.empty()) throw std::runtime_error(blk.error);
        total.merge(blk.sum);
        sq.add(blk.sq.sum);
        sq.add(blk.sq.comp);
    }
    const double n = static_cast<double>(N);
    ExpectationResult r;
    r.value = total.value() / n;
    r.method = ExpectationMethod::monte_carlo;
    r.n_samples = N;
    r.seed = seed;
    const double var = std::max(0.0, (sq.value() - n * std::norm(r.value)) / (n - 1));
    r.standard_error = std::sqrt(var / n);
    return r;
}

std::string expectation_json(const ExpectationResult& r) {
    std::ostringstream o;
    o << "{\"value_re\": " << format_double(r.value.real()) << ", \"value_im\": " << format_double(r.value.imag())
      << ", \"stderr\": " << format_double(r.standard_error) << ", \"n_samples\": " << r.n_samples
      << ", \"seed\": " << r.seed << "}";
    return o.str();
}

double e_trunc(unsigned ell, double t) {
    if (t < 0) {
        // Alternating terms cancel catastrophically; t is a dyadic rational, so sum exactly.
        const mpq_class x(t);
        mpq_class term = 1, sum = 1;
        for (unsigned j = 1; j <= ell; ++j) {
            term *= x;
            term /= j;
            sum += term;
        }
        return sum.get_d();
    }
    double term = 1, sum = 1;
    for (unsigned j = 1; j <= ell; ++j) {
        term *= t / j;
        sum += term;
    }
    return sum;
}

double d_factor(const std::vector<double>& re_p, const std::vector<unsigned>& ell, double k) {
    if (re_p.size() != ell.size()) throw std::invalid_argument("d_factor: length mismatch");
    double prod = 1;
    for (std::size_t r = 0; r < re_p.size(); ++r) {
        if (ell[r] % 2) throw std::invalid_argument("d_factor: ell must be even");
        prod *= (1 + std::exp(-static_cast<double>(ell[r]))) * e_trunc(ell[r], 2 * k * re_p[r]);
    }
    return prod;
}

namespace {

DirichletPolynomial prime_polynomial(const MollifierParams& params, const std::function<double(u64)>& weight) {
    std::vector<std::pair<u64, cplx>> terms;
    for (u64 p : params.intervals.at(0).primes) terms.emplace_back(p, weight ? weight(p) : 1.0);
    return make_polynomial(std::move(terms));
}

double binomial(unsigned n, unsigned k) {
    double r = 1;
    for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

MomentReport moment_identity_check(const CharacterTable& t, const MollifierParams& params, unsigned k,
                                   const std::function<double(u64)>& weight) {
    if (std::pow(params.y, 2.0 * k) >= static_cast<double>(t.q))
        throw std::invalid_argument("moment_identity_check: need y^{2k} < q");
    MomentReport rep;
    rep.k = k;
    double s = 0;
    for (u64 p : params.intervals.at(0).primes) {
        const double w = weight ? weight(p) : 1.0;
        s += w * w / static_cast<double>(p);
    }
    rep.sum_inv_p = s;
    rep.bound = std::tgamma(k + 1.0) * std::pow(s, k);

    const auto sums = prime_sums_all(t, params, weight);
    CompensatedSum lhs;
    for (const auto& v : sums) lhs.add(std::pow(v.real(), 2.0 * k));
    rep.character_side = lhs.value() / static_cast<double>(t.order());

    // (Re P)^{2k} = 2^{-2k} sum_s binom(2k, s) P^s conj(P)^{2k-s}
    const auto P = prime_polynomial(params, weight);
    CompensatedSum rhs;
    for (unsigned j = 0; j <= 2 * k; ++j) {
        const auto a = power(P, j);
        const auto b = power(P, 2 * k - j);
        const auto e = exact_expectation({{&a, false}, {&b, true}});
        rhs.add(binomial(2 * k, j) * e.value.real());
    }
    rep.expectation_side = rhs.value() / std::pow(2.0, 2.0 * k);
    return rep;
}

TailCensus tail_census(const std::vector<cplx>& prime_sums, const MollifierParams& params, double V) {
    double s = 0;
    for (u64 p : params.intervals.at(0).primes) s += 1.0 / static_cast<double>(p);
    TailCensus c;
    c.V = V;
    c.sigma = std::sqrt(s / 2);
    c.total = prime_sums.size();
    for (const auto& v : prime_sums)
        if (std::abs(v.real()) >= V * c.sigma) ++c.count;
    const double q = static_cast<double>(params.q);
    c.reference_bound = q * std::exp(-V * V / 9);
    c.ratio = static_cast<double>(c.count) / c.reference_bound;
    c.in_regime = std::floor(V * V / 9) * std::log(params.y) <= std::log(q) / 3;
    return c;
}

TailCensus tail_census(const CharacterTable& t, const MollifierParams& params, double V) {
    return tail_census(prime_sums_all(t, params), params, V);
}

}  // namespace molliclt
