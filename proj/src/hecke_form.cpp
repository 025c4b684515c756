#include "molliclt/hecke_form.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "molliclt/io.hpp"

namespace molliclt {

namespace {

using i128 = __int128;

// Truncated product of series up to degree N-1.
std::vector<i128> series_mul(const std::vector<i128>& a, const std::vector<i128>& b, std::size_t N) {
    std::vector<i128> c(N, 0);
    for (std::size_t i = 0; i < N && i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; i + j < N && j < b.size(); ++j) c[i + j] += a[i] * b[j];
    }
    return c;
}

mpz_class to_mpz(i128 v) {
    const bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
    mpz_class hi(static_cast<unsigned long>(u >> 64)), lo(static_cast<unsigned long>(u & ~0ull));
    mpz_class r = (hi << 64) + lo;
    return neg ? mpz_class(-r) : r;
}

u64 sigma3(u64 n) {
    u64 s = 0;
    for (u64 d : divisors(n)) s += d * d * d;
    return s;
}

struct CoefficientCache {
    std::mutex m;
    std::map<std::pair<int, u64>, std::shared_ptr<const std::vector<double>>> tables;
};

CoefficientCache& cache() {
    static CoefficientCache c;
    return c;
}

// lambda(n) = a(n) / n^{(k-1)/2} for n <= N
std::shared_ptr<const std::vector<double>> normalized_table(int which, u64 N) {
    auto& c = cache();
    std::lock_guard lock(c.m);
    auto key = std::make_pair(which, N);
    if (auto it = c.tables.find(key); it != c.tables.end()) return it->second;
    const auto coeffs = which == 12 ? tau_coefficients(N) : weight16_coefficients(N, true);
    const double half = (which - 1) / 2.0;
    auto tab = std::make_shared<std::vector<double>>(N + 1, 0.0);
    for (u64 n = 1; n <= N; ++n)
        (*tab)[n] = coeffs[n].get_d() / std::pow(static_cast<double>(n), half);
    c.tables[key] = tab;
    return tab;
}

HeckeForm table_form(std::string label, unsigned weight, u64 limit) {
    if (limit < 2) throw std::invalid_argument("form cache limit must be at least 2");
    auto tab = normalized_table(static_cast<int>(weight), limit);
    HeckeForm f;
    f.label = std::move(label);
    f.weight = weight;
    f.level = 1;
    f.root_number = (weight / 2) % 2 == 0 ? 1 : -1;  // i^k for level 1
    f.cache_limit = limit;
    f.eigenvalue = [tab, limit](u64 p) {
        if (p > limit)
            throw std::out_of_range("eigenvalue requested beyond cache limit " + std::to_string(limit));
        return (*tab)[p];
    };
    return f;
}

}  // namespace

double HeckeForm::lambda_p(u64 p) const {
    if (cache_limit && p > cache_limit)
        throw std::out_of_range(label + ": p = " + std::to_string(p) + " beyond cache; build with a larger limit");
    return eigenvalue(p);
}

double HeckeForm::lambda_prime_power(u64 p, unsigned a) const {
    if (a == 0) return 1.0;
    const double lp = lambda_p(p);
    if (level % p == 0) return std::pow(lp, static_cast<double>(a));
    double prev = 1.0, cur = lp;
    for (unsigned e = 1; e < a; ++e) {
        const double next = lp * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

double HeckeForm::lambda(u64 n) const {
    double v = 1.0;
    for (auto [p, a] : factorize(n).factors) v *= lambda_prime_power(p, a);
    return v;
}

std::vector<mpz_class> tau_coefficients(u64 N) {
    // prod (1 - q^n)^3 = sum_k (-1)^k (2k+1) q^{k(k+1)/2}; Delta = q * (that)^8
    const std::size_t len = N;  // degrees 0..N-1
    std::vector<i128> a(len, 0);
    for (u64 k = 0;; ++k) {
        const u64 d = k * (k + 1) / 2;
        if (d >= len) break;
        a[d] = (k % 2 ? -1 : 1) * static_cast<i128>(2 * k + 1);
    }
    auto a2 = series_mul(a, a, len);
    auto a4 = series_mul(a2, a2, len);
    auto a8 = series_mul(a4, a4, len);
    std::vector<mpz_class> tau(N + 1, 0);
    for (u64 n = 1; n <= N; ++n) tau[n] = to_mpz(a8[n - 1]);
    return tau;
}

std::vector<mpz_class> weight16_coefficients(u64 N, bool primes_only) {
    const auto tau = tau_coefficients(N);
    std::vector<unsigned long> e4(N + 1, 0);
    e4[0] = 1;
    for (u64 m = 1; m <= N; ++m) e4[m] = 240ul * sigma3(m);
    std::vector<mpz_class> out(N + 1, 0);
    for (u64 n = 1; n <= N; ++n) {
        if (primes_only && !is_prime(n)) continue;
        mpz_class acc = 0;
        for (u64 k = 1; k <= n; ++k) mpz_addmul_ui(acc.get_mpz_t(), tau[k].get_mpz_t(), e4[n - k]);
        out[n] = acc;
    }
    return out;
}

HeckeForm delta_form(u64 cache_limit) { return table_form("Delta", 12, cache_limit); }
HeckeForm weight16_form(u64 cache_limit) { return table_form("E4Delta", 16, cache_limit); }

HeckeForm constant_form(double value, std::string label) {
    HeckeForm f;
    f.label = std::move(label);
    f.weight = 0;
    f.eigenvalue = [value](u64) { return value; };
    return f;
}

std::string eigenvalue_csv(const HeckeForm& f, u64 max_p) {
    std::string out = "# form=" + f.label + " weight=" + std::to_string(f.weight) + "\np,lambda_f\n";
    for (u64 p = 2; p <= max_p; ++p)
        if (is_prime(p)) out += std::to_string(p) + ',' + format_double(f.lambda_p(p)) + '\n';
    return out;
}

}  // namespace molliclt
