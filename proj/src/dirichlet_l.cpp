#include "molliclt/dirichlet_l.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "molliclt/io.hpp"
#include "molliclt/special.hpp"

namespace molliclt {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kSmoothingCut = 1e-17;

int delta_of(u64 a) { return static_cast<int>(a % 2); }

// Smoothing terms n^delta (pi n^2/q)^{-a} Gamma(a, pi n^2 w/q), a = (s+delta)/2, until negligible.
std::vector<cplx> afe_weights(u64 q, cplx s, int delta, double w) {
    const cplx a = (s + static_cast<double>(delta)) / 2.0;
    std::vector<cplx> g{0.0};
    double scale = 0;
    const u64 budget = 100 * q + 1000;
    for (u64 n = 1;; ++n) {
        if (n > budget) throw std::runtime_error("afe: truncation budget exceeded");
        const double y = kPi * static_cast<double>(n) * static_cast<double>(n) / static_cast<double>(q);
        const cplx v = std::pow(static_cast<double>(n), delta) * std::exp(-a * std::log(y)) *
                       upper_incomplete_gamma(a, y * w);
        g.push_back(v);
        scale = std::max(scale, std::abs(v));
        if (y * w > 5 && std::abs(v) < kSmoothingCut * scale) break;
    }
    return g;
}

void fill_residual(const CharacterTable& t, CentralValueSet& set, const CentralValueSet& partner) {
    set.residual_max = functional_equation_residual(t, set, partner);
}

}  // namespace

cplx gamma_factor(u64 q, cplx s, int delta) {
    const cplx a = (s + static_cast<double>(delta)) / 2.0;
    return std::exp(a * std::log(static_cast<double>(q) / kPi) + log_gamma(a));
}

cplx root_number(const CharacterTable& t, u64 a) {
    const cplx tau = gauss_sum(t, a);
    const cplx idelta = delta_of(a) ? cplx(0, 1) : cplx(1, 0);
    return tau / (idelta * std::sqrt(static_cast<double>(t.q)));
}

std::vector<cplx> root_numbers(const CharacterTable& t) {
    auto tau = gauss_sums_all(t);
    std::vector<cplx> eps(t.order(), kNaN);
    const double rq = std::sqrt(static_cast<double>(t.q));
    for (u64 a = 1; a < t.order(); ++a) eps[a] = tau[a] / ((delta_of(a) ? cplx(0, 1) : cplx(1, 0)) * rq);
    return eps;
}

double functional_equation_residual(const CharacterTable& t, const CentralValueSet& at_s,
                                    const CentralValueSet& at_1ms) {
    if (std::abs(at_s.s + at_1ms.s - 1.0) > 1e-15)
        throw std::invalid_argument("functional_equation_residual: partner must sit at 1 - s");
    auto eps = root_numbers(t);
    const cplx ratio[2] = {gamma_factor(t.q, 1.0 - at_s.s, 0) / gamma_factor(t.q, at_s.s, 0),
                           gamma_factor(t.q, 1.0 - at_s.s, 1) / gamma_factor(t.q, at_s.s, 1)};
    double worst = 0;
    for (u64 a = 1; a < t.order(); ++a) {
        const cplx rhs = eps[a] * ratio[delta_of(a)] * at_1ms.values[t.conj_index(a)];
        worst = std::max(worst, std::abs(at_s.values[a] - rhs));
    }
    return worst;
}

CentralValueSet l_values_oracle(const CharacterTable& t, cplx s) {
    if (t.q > 100'000) throw std::invalid_argument("l_values_oracle: q above 1e5");
    auto compute = [&](cplx sv) {
        std::vector<cplx> c(t.q, 0.0);
        const cplx qs = std::exp(-sv * std::log(static_cast<double>(t.q)));
        for (u64 r = 1; r < t.q; ++r)
            c[r] = qs * hurwitz_zeta(sv, static_cast<double>(r) / static_cast<double>(t.q));
        CentralValueSet set;
        set.q = t.q;
        set.s = sv;
        set.method = LMethod::oracle;
        set.values = batch_character_sums(t, c);
        set.values[0] = cplx(kNaN, kNaN);
        return set;
    };
    auto set = compute(s);
    if (std::abs(s - 0.5) < 1e-15) {
        fill_residual(t, set, set);
    } else {
        fill_residual(t, set, compute(1.0 - s));
    }
    return set;
}

cplx afe_l_value(const CharacterTable& t, u64 a, cplx s, double w) {
    if (a % t.order() == 0) throw std::invalid_argument("afe_l_value: principal character");
    if (std::abs(s - 0.5) > 0.1 + 1e-12) throw std::invalid_argument("afe_l_value: need |s - 1/2| <= 0.1");
    const int d = delta_of(a);
    const auto g1 = afe_weights(t.q, s, d, w);
    const auto g2 = afe_weights(t.q, 1.0 - s, d, 1.0 / w);
    cplx s1 = 0, s2 = 0;
    for (u64 n = 1; n < g1.size(); ++n) s1 += chi(t, a, n) * g1[n];
    for (u64 n = 1; n < g2.size(); ++n) s2 += chi(t, t.conj_index(a), n) * g2[n];
    return (s1 + root_number(t, a) * s2) / gamma_factor(t.q, s, d);
}

namespace {

CentralValueSet afe_set(const CharacterTable& t, cplx s, double w, const std::vector<cplx>& eps) {
    CentralValueSet set;
    set.q = t.q;
    set.s = s;
    set.method = LMethod::afe;
    set.values.assign(t.order(), cplx(kNaN, kNaN));
    for (int d = 0; d < 2; ++d) {
        const auto g1 = afe_weights(t.q, s, d, w);
        const auto g2 = afe_weights(t.q, 1.0 - s, d, 1.0 / w);
        std::vector<cplx> c1(t.q, 0.0), c2(t.q, 0.0);
        for (u64 n = 1; n < g1.size(); ++n) c1[n % t.q] += g1[n];
        for (u64 n = 1; n < g2.size(); ++n) c2[n % t.q] += g2[n];
        c1[0] = c2[0] = 0;
        const auto s1 = batch_character_sums(t, c1);
        const auto s2 = batch_character_sums(t, c2);
        const cplx gf = gamma_factor(t.q, s, d);
        for (u64 a = 1; a < t.order(); ++a) {
            if (delta_of(a) != d) continue;
            set.values[a] = (s1[a] + eps[a] * s2[t.conj_index(a)]) / gf;
        }
    }
    return set;
}

}  // namespace

CentralValueSet l_values_afe(const CharacterTable& t, cplx s) {
    if (std::abs(s - 0.5) > 0.1 + 1e-12) throw std::invalid_argument("l_values_afe: need |s - 1/2| <= 0.1");
    const auto eps = root_numbers(t);
    auto set = afe_set(t, s, 1.0, eps);
    // Partner from an unbalanced split so the residual is not symmetric by construction.
    fill_residual(t, set, afe_set(t, 1.0 - s, 1.3, eps));
    return set;
}

namespace {

CentralValueSet values_for(const CharacterTable& t, cplx s, LMethod m) {
    return m == LMethod::oracle ? l_values_oracle(t, s) : l_values_afe(t, s);
}

}  // namespace

cplx twisted_second_moment_empirical(const CharacterTable& t, cplx alpha, cplx beta,
                                     const std::vector<double>& x, LMethod method) {
    const double bound = 10.0 / std::log(static_cast<double>(t.q));
    if (std::abs(alpha) > bound || std::abs(beta) > bound)
        throw std::invalid_argument("twisted_second_moment_empirical: shifts exceed 10/log q");
    if (x.size() >= t.q) throw std::invalid_argument("twisted_second_moment_empirical: need L < q");
    std::vector<cplx> c(t.q, 0.0);
    bool any = false;
    for (u64 n = 1; n < x.size(); ++n) {
        c[n] = x[n] / std::sqrt(static_cast<double>(n));
        any = any || x[n] != 0;
    }
    if (!any) return 0.0;
    const auto dpoly = batch_character_sums(t, c);
    const auto la = values_for(t, 0.5 + alpha, method);
    const auto lb = std::abs(alpha - beta) < 1e-15 ? la : values_for(t, 0.5 + beta, method);
    cplx sum = 0;
    for (u64 a = 2; a < t.order(); a += 2) sum += la.values[a] * lb.values[t.conj_index(a)] * std::norm(dpoly[a]);
    const double phi_plus = static_cast<double>(t.q - 3) / 2.0;
    return sum / phi_plus;
}

namespace {

cplx coprime_pair_sum(const std::vector<double>& x, cplx ea, cplx eb) {
    cplx s = 0;
    for (u64 u = 1; u < x.size(); ++u) {
        if (x[u] == 0) continue;
        for (u64 v = 1; v < x.size(); ++v) {
            if (x[v] == 0) continue;
            const u64 h = std::gcd(u, v);
            const double m = static_cast<double>(u / h), n = static_cast<double>(v / h);
            s += x[u] * x[v] / static_cast<double>(h) * std::exp(-ea * std::log(m) - eb * std::log(n));
        }
    }
    return s;
}

cplx main_terms_raw(u64 q, cplx al, cplx be, const std::vector<double>& x) {
    const cplx t1 = riemann_zeta(1.0 + al + be) * coprime_pair_sum(x, 1.0 + al, 1.0 + be);
    const cplx gratio = std::exp(log_gamma((0.5 - al) / 2.0) + log_gamma((0.5 - be) / 2.0) -
                                 log_gamma((0.5 + al) / 2.0) - log_gamma((0.5 + be) / 2.0));
    const cplx qpow = std::exp(-(al + be) * std::log(static_cast<double>(q) / kPi));
    const cplx t2 = qpow * gratio * riemann_zeta(1.0 - al - be) * coprime_pair_sum(x, 1.0 - be, 1.0 - al);
    return t1 + t2;
}

}  // namespace

cplx twisted_second_moment_main_terms(u64 q, cplx alpha, cplx beta, const std::vector<double>& x) {
    if (std::abs(alpha + beta) > 1e-3) return main_terms_raw(q, alpha, beta, x);
    // Holomorphic in alpha: mean value over a circle.
    constexpr int K = 16;
    constexpr double r = 1e-2;
    cplx acc = 0;
    for (int k = 0; k < K; ++k)
        acc += main_terms_raw(q, alpha + std::polar(r, 2 * kPi * (k + 0.5) / K), beta, x);
    return acc / static_cast<double>(K);
}

void write_l_cache(const std::filesystem::path& path, const CentralValueSet& set) {
    std::string buf;
    auto put = [&](const void* p, std::size_t n) { buf.append(static_cast<const char*>(p), n); };
    const std::uint32_t version = kLCacheVersion;
    const std::uint64_t q = set.q;
    const double sre = set.s.real(), sim = set.s.imag();
    put("LCHI", 4);
    put(&version, 4);
    put(&q, 8);
    put(&sre, 8);
    put(&sim, 8);
    for (std::uint32_t a = 1; a < set.values.size(); ++a) {
        const double re = set.values[a].real(), im = set.values[a].imag();
        put(&a, 4);
        put(&re, 8);
        put(&im, 8);
    }
    atomic_write(path, buf);
}

CentralValueSet read_l_cache(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_l_cache: cannot open " + path.string());
    char magic[4];
    std::uint32_t version = 0;
    std::uint64_t q = 0;
    double sre = 0, sim = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&version), 4);
    in.read(reinterpret_cast<char*>(&q), 8);
    in.read(reinterpret_cast<char*>(&sre), 8);
    in.read(reinterpret_cast<char*>(&sim), 8);
    if (!in || std::memcmp(magic, "LCHI", 4) != 0) throw std::runtime_error("read_l_cache: bad header");
    if (version != kLCacheVersion) throw std::runtime_error("read_l_cache: unsupported version");
    CentralValueSet set;
    set.q = q;
    set.s = cplx(sre, sim);
    set.values.assign(q - 1, cplx(kNaN, kNaN));
    std::uint32_t a;
    double re, im;
    while (in.read(reinterpret_cast<char*>(&a), 4)) {
        in.read(reinterpret_cast<char*>(&re), 8);
        in.read(reinterpret_cast<char*>(&im), 8);
        if (!in || a == 0 || a >= q - 1) throw std::runtime_error("read_l_cache: bad record");
        set.values[a] = cplx(re, im);
    }
    return set;
}

}  // namespace molliclt
