#include "molliclt/characters.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <fftw3.h>

namespace molliclt {

namespace {

std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

// out[a] = sum_k in[k] e(ak/N)
std::vector<cplx> dft_positive(const std::vector<cplx>& in) {
    const int n = static_cast<int>(in.size());
    std::vector<cplx> out(in.size());
    std::vector<cplx> work(in);
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(work.data()),
                                reinterpret_cast<fftw_complex*>(out.data()), FFTW_BACKWARD,
                                FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

}  // namespace

u64 primitive_root(u64 q) {
    if (!is_prime(q)) throw std::invalid_argument("primitive_root: q not prime");
    if (q == 2) return 1;
    auto fs = factorize(q - 1).factors;
    for (u64 g = 2; g < q; ++g) {
        bool ok = true;
        for (auto f : fs)
            if (powmod(g, (q - 1) / f.p, q) == 1) {
                ok = false;
                break;
            }
        if (ok) return g;
    }
    throw std::logic_error("primitive_root: none found");
}

CharacterTable build_table(u64 q) {
    if (q < 3 || q > 10'000'000) throw std::invalid_argument("build_table: q out of range [3, 1e7]");
    if (!is_prime(q)) throw std::invalid_argument("build_table: q not prime");
    CharacterTable t;
    t.q = q;
    t.g = primitive_root(q);
    const u64 n = q - 1;
    t.ind.assign(q, 0);
    t.pow.assign(n, 0);
    u64 v = 1;
    for (u64 k = 0; k < n; ++k) {
        t.pow[k] = static_cast<std::uint32_t>(v);
        t.ind[v] = static_cast<std::uint32_t>(k);
        v = v * t.g % q;
    }
    if (v != 1) throw std::logic_error("build_table: generator order mismatch");
    t.roots.resize(n);
    const double w = 2 * std::numbers::pi / static_cast<double>(n);
    for (u64 k = 0; k < n; ++k) t.roots[k] = std::polar(1.0, w * static_cast<double>(k));
    return t;
}

cplx chi(const CharacterTable& t, u64 a, u64 n) {
    const u64 r = n % t.q;
    if (r == 0) return 0.0;
    const u64 k = static_cast<u64>(a % t.order()) * t.ind[r] % t.order();
    return t.roots[k];
}

Parity parity(const CharacterTable& t, u64 a) {
    (void)t;
    return a % 2 == 0 ? Parity::even : Parity::odd;
}

cplx gauss_sum(const CharacterTable& t, u64 a) {
    if (a % t.order() == 0) throw std::invalid_argument("gauss_sum: principal character");
    const double w = 2 * std::numbers::pi / static_cast<double>(t.q);
    cplx s = 0;
    for (u64 n = 1; n < t.q; ++n) s += chi(t, a, n) * std::polar(1.0, w * static_cast<double>(n));
    return s;
}

std::vector<cplx> gauss_sums_all(const CharacterTable& t) {
    std::vector<cplx> c(t.q);
    const double w = 2 * std::numbers::pi / static_cast<double>(t.q);
    for (u64 n = 1; n < t.q; ++n) c[n] = std::polar(1.0, w * static_cast<double>(n));
    return batch_character_sums(t, c);
}

std::vector<cplx> batch_character_sums(const CharacterTable& t, const std::vector<cplx>& coeffs,
                                       TransformMethod method) {
    if (coeffs.size() != t.q) throw std::invalid_argument("batch_character_sums: need q coefficients");
    const u64 n = t.order();
    if (method == TransformMethod::automatic)
        method = t.q < kDirectTransformBelow ? TransformMethod::direct : TransformMethod::fft;
    std::vector<cplx> seq(n);
    for (u64 k = 0; k < n; ++k) seq[k] = coeffs[t.pow[k]];
    if (method == TransformMethod::fft) return dft_positive(seq);
    std::vector<cplx> out(n, 0.0);
    for (u64 k = 0; k < n; ++k) {
        const cplx c = seq[k];
        if (c == 0.0) continue;
        // a*k mod n advanced incrementally
        u64 idx = 0;
        for (u64 a = 0; a < n; ++a) {
            out[a] += c * t.roots[idx];
            idx += k;
            if (idx >= n) idx -= n;
        }
    }
    return out;
}

std::vector<cplx> batch_character_sums(const CharacterTable& t,
                                       const std::vector<std::pair<u64, cplx>>& terms,
                                       TransformMethod method) {
    std::vector<cplx> c(t.q, 0.0);
    for (auto& [m, v] : terms) {
        const u64 r = m % t.q;
        if (r != 0) c[r] += v;
    }
    return batch_character_sums(t, c, method);
}

}  // namespace molliclt
