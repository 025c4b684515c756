#include "molliclt/arith.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>

namespace molliclt {

namespace {

constexpr u64 kSpfLimit = 1'000'000;

// Smallest prime factor table up to kSpfLimit.
const std::vector<std::uint32_t>& spf_table() {
    static std::vector<std::uint32_t> spf;
    static std::once_flag once;
    std::call_once(once, [] {
        spf.assign(kSpfLimit + 1, 0);
        for (u64 i = 2; i <= kSpfLimit; ++i) {
            if (spf[i] != 0) continue;
            for (u64 j = i; j <= kSpfLimit; j += i)
                if (spf[j] == 0) spf[j] = static_cast<std::uint32_t>(i);
        }
    });
    return spf;
}

u64 pollard_rho(u64 n) {
    if (n % 2 == 0) return 2;
    for (u64 c = 1;; ++c) {
        u64 x = 2, y = 2, d = 1;
        auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
        while (d == 1) {
            x = f(x);
            y = f(f(y));
            d = std::gcd(x > y ? x - y : y - x, n);
        }
        if (d != n) return d;
    }
}

void factor_into(u64 n, std::vector<u64>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    u64 d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

}  // namespace

u64 mulmod(u64 a, u64 b, u64 m) {
    return static_cast<u64>(static_cast<unsigned __int128>(a) * b % m);
}

u64 powmod(u64 b, u64 e, u64 m) {
    u64 r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

bool is_prime(u64 n) {
    if (n < 2) return false;
    if (n <= kSpfLimit) return spf_table()[n] == n;
    for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37})
        if (n % p == 0) return n == p;
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // Deterministic witness set for 64-bit integers.
    for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

FactoredInteger factorize(u64 n) {
    if (n == 0) throw std::invalid_argument("factorize: n must be positive");
    if (n > static_cast<u64>(std::numeric_limits<std::int64_t>::max()))
        throw std::invalid_argument("factorize: n exceeds 2^63-1");
    FactoredInteger out;
    out.n = n;
    std::vector<u64> ps;
    const auto& spf = spf_table();
    u64 m = n;
    while (m > 1 && m <= kSpfLimit) {
        ps.push_back(spf[m]);
        m /= spf[m];
    }
    if (m > 1) {
        for (u64 p = 2; p * p <= m && p <= kSpfLimit; ++p) {
            if (spf[p] != p) continue;
            while (m % p == 0) {
                ps.push_back(p);
                m /= p;
            }
        }
        if (m > 1) factor_into(m, ps);
    }
    std::sort(ps.begin(), ps.end());
    for (u64 p : ps) {
        if (!out.factors.empty() && out.factors.back().p == p)
            ++out.factors.back().a;
        else
            out.factors.push_back({p, 1});
    }
    return out;
}

std::vector<u64> divisors(u64 n) {
    std::vector<u64> ds{1};
    for (auto [p, a] : factorize(n).factors) {
        std::size_t base = ds.size();
        u64 pk = 1;
        for (unsigned e = 1; e <= a; ++e) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i) ds.push_back(ds[i] * pk);
        }
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

unsigned big_omega(u64 n) {
    unsigned w = 0;
    for (auto f : factorize(n).factors) w += f.a;
    return w;
}

int liouville(u64 n) { return big_omega(n) % 2 ? -1 : 1; }

int mobius(u64 n) {
    auto f = factorize(n).factors;
    for (auto pa : f)
        if (pa.a > 1) return 0;
    return f.size() % 2 ? -1 : 1;
}

mpq_class nu(u64 n) {
    mpz_class den = 1;
    for (auto f : factorize(n).factors) {
        mpz_class fact;
        mpz_fac_ui(fact.get_mpz_t(), f.a);
        den *= fact;
    }
    return mpq_class(mpz_class(1), den);
}

mpq_class nu_k(u64 n, unsigned k) {
    if (k == 0) throw std::invalid_argument("nu_k: k must be positive");
    mpq_class r = 1;
    for (auto f : factorize(n).factors) {
        mpz_class num, fact;
        mpz_ui_pow_ui(num.get_mpz_t(), k, f.a);
        mpz_fac_ui(fact.get_mpz_t(), f.a);
        r *= mpq_class(num, fact);
    }
    r.canonicalize();
    return r;
}

namespace {

mpq_class nu_k_ell_rec(u64 n, unsigned k, unsigned ell) {
    if (k == 1) return big_omega(n) <= ell ? nu(n) : mpq_class(0);
    mpq_class s = 0;
    for (u64 d : divisors(n)) {
        if (big_omega(d) > ell) continue;
        s += nu(d) * nu_k_ell_rec(n / d, k - 1, ell);
    }
    return s;
}

}  // namespace

mpq_class nu_k_ell(u64 n, unsigned k, unsigned ell) {
    if (k == 0) throw std::invalid_argument("nu_k_ell: k must be positive");
    return nu_k_ell_rec(n, k, ell);
}

PrimeInterval sieve_primes(double lo, double hi) {
    if (!(lo >= 0) || !(hi <= 1e9) || lo > hi)
        throw std::invalid_argument("sieve_primes: need 0 <= lo <= hi <= 1e9");
    if (hi - lo > kSieveWidthLimit)
        throw std::length_error("sieve_primes: range too large for memory budget");
    PrimeInterval out{lo, hi, {}};
    const u64 a = static_cast<u64>(std::floor(lo)) + 1;  // first integer > lo
    const u64 b = static_cast<u64>(std::floor(hi));
    if (a > b) return out;
    const u64 root = static_cast<u64>(std::sqrt(static_cast<double>(b))) + 1;
    std::vector<u64> small;
    {
        std::vector<char> comp(root + 1, 0);
        for (u64 i = 2; i <= root; ++i) {
            if (comp[i]) continue;
            small.push_back(i);
            for (u64 j = i * i; j <= root; j += i) comp[j] = 1;
        }
    }
    constexpr u64 kSegment = 1u << 20;
    std::vector<char> seg;
    for (u64 s = a; s <= b; s += kSegment) {
        const u64 e = std::min(b, s + kSegment - 1);
        seg.assign(e - s + 1, 1);
        for (u64 p : small) {
            if (p * p > e) break;
            u64 start = std::max(p * p, (s + p - 1) / p * p);
            for (u64 j = start; j <= e; j += p) seg[j - s] = 0;
        }
        for (u64 v = s; v <= e; ++v)
            if (v >= 2 && seg[v - s]) out.primes.push_back(v);
    }
    return out;
}

std::vector<SmoothInteger> smooth_integers(const std::vector<u64>& primes, unsigned ell, u64 cap,
                                           std::size_t limit) {
    if (cap < 1) throw std::invalid_argument("smooth_integers: cap must be >= 1");
    std::vector<SmoothInteger> out;
    if (!std::is_sorted(primes.begin(), primes.end()))
        throw std::invalid_argument("smooth_integers: primes must be ascending");
    // Depth-first over nondecreasing prime sequences with running value and Omega.
    auto rec = [&](auto&& self, std::size_t start, u64 n, unsigned w) -> void {
        if (out.size() >= limit)
            throw std::length_error("smooth_integers: enumeration exceeds limit " +
                                    std::to_string(limit));
        out.push_back({n, w});
        if (w == ell) return;
        for (std::size_t j = start; j < primes.size(); ++j) {
            if (n > cap / primes[j]) break;
            self(self, j, n * primes[j], w + 1);
        }
    };
    rec(rec, 0, 1, 0);
    std::sort(out.begin(), out.end(), [](auto x, auto y) { return x.n < y.n; });
    return out;
}

}  // namespace molliclt
