#include "molliclt/hecke_rankin.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "molliclt/compensated.hpp"
#include "molliclt/special.hpp"

namespace molliclt {

namespace {

constexpr double kPi = std::numbers::pi;

// Sums term(k) for k = k0, k0+1, ... until ten consecutive terms fall below 1e-16 relative.
template <class F>
cplx sum_series(F term, int k0 = 0, int max_terms = 4000) {
    CompensatedComplexSum acc;
    int small = 0;
    for (int k = k0; k < k0 + max_terms; ++k) {
        const cplx t = term(k);
        acc.add(t);
        const double scale = std::max(1.0, std::abs(acc.value()));
        small = std::abs(t) < 1e-16 * scale ? small + 1 : 0;
        if (small >= 10) return acc.value();
    }
    throw std::runtime_error("local series truncation failure");
}

cplx p_pow(u64 p, cplx e) { return std::exp(-e * std::log(static_cast<double>(p))); }  // p^{-e}

}  // namespace

SatakeParams satake(double lambda_p) {
    const cplx disc = std::sqrt(cplx(lambda_p * lambda_p - 4, 0));
    return {(lambda_p + disc) / 2.0, (lambda_p - disc) / 2.0};
}

cplx satake_power_sum(const SatakeParams& s, unsigned a) {
    if (std::abs(s.alpha1 - s.alpha2) < 1e-7) {
        // sum_{i=0}^a alpha1^i alpha2^{a-i}
        cplx acc = 0;
        for (unsigned i = 0; i <= a; ++i) acc += std::pow(s.alpha1, i) * std::pow(s.alpha2, a - i);
        return acc;
    }
    return (std::pow(s.alpha1, a + 1) - std::pow(s.alpha2, a + 1)) / (s.alpha1 - s.alpha2);
}

cplx rs_local_factor(const HeckeForm& f, const HeckeForm& g, u64 p, cplx s) {
    const auto sf = satake(f.lambda_p(p));
    const auto sg = satake(g.lambda_p(p));
    const cplx x = p_pow(p, s);
    cplx prod = 1;
    for (cplx a : {sf.alpha1, sf.alpha2})
        for (cplx b : {sg.alpha1, sg.alpha2}) {
            const cplx d = 1.0 - a * b * x;
            if (std::abs(d) < 1e-12) throw std::domain_error("rs_local_factor: pole proximity");
            prod /= d;
        }
    return prod;
}

cplx rs_local_series(const HeckeForm& f, const HeckeForm& g, u64 p, cplx s) {
    if (std::abs(p_pow(p, s)) >= 1) throw std::domain_error("rs_local_series: need p^{-Re s} < 1");
    const double lf = f.lambda_p(p), lg = g.lambda_p(p);
    const bool coprime = f.level % p != 0 && g.level % p != 0;
    const cplx x = p_pow(p, s);
    // lambda(p^j) by the Hecke recursion, carried along the summation
    double fprev = 0, fcur = 1, gprev = 0, gcur = 1;
    cplx xp = 1;
    const cplx series = sum_series([&](int j) {
        if (j > 0) {
            const double fn = lf * fcur - (f.level % p ? fprev : 0.0);
            const double gn = lg * gcur - (g.level % p ? gprev : 0.0);
            fprev = fcur;
            fcur = fn;
            gprev = gcur;
            gcur = gn;
            xp *= x;
        }
        return fcur * gcur * xp;
    });
    return coprime ? series / (1.0 - x * x) : series;
}

cplx expectation_local_L(const HeckeForm& f, const HeckeForm& g, u64 p, cplx s, LocalPath path) {
    if (!(s.real() > -0.5)) throw std::invalid_argument("expectation_local_L: need Re s > -1/2");
    if (path == LocalPath::series) {
        const double lf = f.lambda_p(p), lg = g.lambda_p(p);
        const cplx x = p_pow(p, 2.0 * s + 1.0);
        double fprev = 0, fcur = 1, gprev = 0, gcur = 1;
        cplx xp = 1;
        return sum_series([&](int j) {
            if (j > 0) {
                const double fn = lf * fcur - (f.level % p ? fprev : 0.0);
                const double gn = lg * gcur - (g.level % p ? gprev : 0.0);
                fprev = fcur;
                fcur = fn;
                gprev = gcur;
                gcur = gn;
                xp *= x;
            }
            return fcur * gcur * xp;
        });
    }
    const bool coprime = f.level % p != 0 && g.level % p != 0;
    const cplx corr = coprime ? 1.0 - p_pow(p, 4.0 * s + 2.0) : 1.0;
    return corr * rs_local_factor(f, g, p, 2.0 * s + 1.0);
}

cplx n_coeff(u64 p, cplx s, int k, const HeckeForm& h1, const HeckeForm& h2, double w) {
    if (k < 0) return 0;
    const double a2 = h2.lambda_p(p) * w;
    const double sp = std::sqrt(static_cast<double>(p));
    cplx acc = 0;
    double fact = 1;
    for (int k2 = 0; k2 <= k; ++k2) {
        if (k2 > 0) fact *= k2;
        const int k1 = k - k2;
        acc += h1.lambda_prime_power(p, static_cast<unsigned>(k1)) * p_pow(p, s * static_cast<double>(k1)) *
               std::pow(-a2 / sp, k2) / fact;
    }
    return acc;
}

cplx local_moment_series(const HeckeForm& f, const HeckeForm& g, Ordering ord, u64 p, cplx s, int a, double w) {
    const HeckeForm& lx = ord == Ordering::fg ? f : g;   // L part attached to X
    const HeckeForm& lxb = ord == Ordering::fg ? g : f;  // L part attached to conj X
    const cplx sh = s + 0.5;
    return sum_series([&](int k) { return n_coeff(p, sh, k, lx, f, w) * n_coeff(p, sh, k + a, lxb, g, w); },
                      std::max(0, -a));
}

double local_moment_leading_residual(const HeckeForm& f, const HeckeForm& g, Ordering ord, u64 p, cplx s, int a,
                                     double w) {
    if (a < -1 || a > 1) throw std::invalid_argument("local_moment_leading_residual: a must be -1, 0 or 1");
    const HeckeForm& lx = ord == Ordering::fg ? f : g;
    const HeckeForm& lxb = ord == Ordering::fg ? g : f;
    const cplx sh = s + 0.5;
    cplx lead;
    if (a == 0)
        lead = 1.0 + n_coeff(p, sh, 1, lx, f, w) * n_coeff(p, sh, 1, lxb, g, w);
    else if (a == 1)
        lead = n_coeff(p, sh, 1, lxb, g, w);
    else
        lead = n_coeff(p, sh, 1, lx, f, w);
    return std::abs(local_moment_series(f, g, ord, p, s, a, w) - lead);
}

cplx local_moment_quadrature(const HeckeForm& f, const HeckeForm& g, Ordering ord, u64 p, cplx s, int a,
                             double w, int panels) {
    const HeckeForm& lx = ord == Ordering::fg ? f : g;
    const HeckeForm& lxb = ord == Ordering::fg ? g : f;
    const auto s1 = satake(lx.lambda_p(p));
    const auto s2 = satake(lxb.lambda_p(p));
    const cplx x = p_pow(p, s + 0.5);
    const double sp = std::sqrt(static_cast<double>(p));
    const double af = f.lambda_p(p) * w, ag = g.lambda_p(p) * w;
    static const QuadratureRule rule = gauss_legendre(64);
    const double h = 2 * kPi / panels;
    CompensatedComplexSum acc;
    for (int j = 0; j < panels; ++j) {
        const double mid = (j + 0.5) * h;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double th = mid + 0.5 * h * rule.nodes[i];
            const cplx X = std::polar(1.0, th), Xb = std::conj(X);
            const cplx L = 1.0 / ((1.0 - s1.alpha1 * X * x) * (1.0 - s1.alpha2 * X * x) * (1.0 - s2.alpha1 * Xb * x) *
                                  (1.0 - s2.alpha2 * Xb * x));
            const cplx M = std::exp(-af * X / sp - ag * Xb / sp);
            acc.add(0.5 * h * rule.weights[i] * L * M * std::polar(1.0, a * th));
        }
    }
    return acc.value() / (2 * kPi);
}

cplx g_p(const HeckeForm& f, const HeckeForm& g, Ordering ord, u64 p, cplx s, double w) {
    return local_moment_series(f, g, ord, p, s, 0, w);
}

cplx f_p(const HeckeForm& f, const HeckeForm& g, Ordering ord, u64 p, cplx s, double w) {
    return 0.5 * (local_moment_series(f, g, ord, p, s, 1, w) + local_moment_series(f, g, ord, p, s, -1, w));
}

double v_cutoff(double xi, unsigned kf, unsigned kg, double contour) {
    if (!(xi > 0)) throw std::invalid_argument("v_cutoff: xi must be positive");
    double c = contour;
    if (c == 0) c = xi >= 1 ? 2.0 : -2.0;
    if (!(std::abs(c) < 6)) throw std::invalid_argument("v_cutoff: contour must lie in (-6, 6)");
    const double hf = kf / 2.0, hg = kg / 2.0;
    const cplx lg0 = log_gamma(hf) + log_gamma(hg);
    const double lxi = std::log(xi);
    auto integrand = [&](double t) {
        const cplx s(c, t);
        const cplx lr = log_gamma(s + hf) + log_gamma(s + hg) - lg0 - 2.0 * s * std::log(2 * kPi);
        return std::exp(lr - 48.0 * std::log(std::cos(kPi * s / 12.0)) - s * lxi) / s;
    };
    // |integrand| ~ e^{-5 pi t}; the tail beyond T = 20 is far below 1e-12
    constexpr double T = 20;
    const int panels = 40 + static_cast<int>(std::ceil(std::abs(lxi) * T / (2 * kPi)));
    static const QuadratureRule rule = gauss_legendre(20);
    const double h = T / panels;
    CompensatedSum acc;
    for (int j = 0; j < panels; ++j) {
        const double mid = (j + 0.5) * h;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            acc.add(0.5 * h * rule.weights[i] * integrand(mid + 0.5 * h * rule.nodes[i]).real());
    }
    const double v = acc.value() / kPi;
    if (!std::isfinite(v)) throw std::runtime_error("v_cutoff: quadrature did not converge");
    return c < 0 ? 1.0 + v : v;
}

TwistedLPlan twisted_l_plan(const HeckeForm& f, const HeckeForm& g, double q_eff, double threshold,
                            std::size_t budget) {
    if (!(q_eff > 0)) throw std::invalid_argument("twisted_l_plan: q_eff must be positive");
    TwistedLPlan plan;
    plan.q_eff = q_eff;
    plan.threshold = threshold;
    plan.eps = f.root_number * g.root_number;
    // smallest power of two beyond which |V| stays below the threshold on three doublings
    double xi = 1;
    int below = 0;
    double last_above = 1;
    while (below < 3) {
        if (std::abs(v_cutoff(xi, f.weight, g.weight)) > threshold) {
            below = 0;
            last_above = xi;
        } else {
            ++below;
        }
        xi *= 2;
        if (xi > 1e30) throw std::runtime_error("twisted_l_plan: V does not fall below threshold");
    }
    plan.xi_max = 2 * last_above;
    const double nmax_d = plan.xi_max * q_eff * q_eff;
    // number of pairs m1 m2 <= N is about N log N
    if (nmax_d * std::max(1.0, std::log(nmax_d)) > static_cast<double>(budget))
        throw std::length_error("twisted_l_plan: truncation budget exceeded (N = " + std::to_string(nmax_d) + ")");
    const u64 nmax = static_cast<u64>(nmax_d);
    std::vector<double> V(nmax + 1), lf(nmax + 1), lg(nmax + 1);
    for (u64 n = 1; n <= nmax; ++n) {
        V[n] = v_cutoff(static_cast<double>(n) / (q_eff * q_eff), f.weight, g.weight);
        lf[n] = f.lambda(n);
        lg[n] = g.lambda(n);
    }
    for (u64 m1 = 1; m1 <= nmax; ++m1)
        for (u64 m2 = 1; m1 * m2 <= nmax; ++m2) {
            const double v = V[m1 * m2];
            if (std::abs(v) <= threshold) continue;
            const double r = v / std::sqrt(static_cast<double>(m1 * m2));
            plan.terms.push_back({m1, m2, lf[m1] * lg[m2] * r, lg[m1] * lf[m2] * r});
        }
    plan.nmax = nmax;
    plan.spf.assign(nmax + 1, 0);
    for (u64 p = 2; p <= nmax; ++p) {
        if (plan.spf[p]) continue;
        plan.primes.push_back(p);
        for (u64 m = p; m <= nmax; m += p)
            if (!plan.spf[m]) plan.spf[m] = p;
    }
    return plan;
}

cplx random_twisted_L(const RandomSample& s, const TwistedLPlan& plan) {
    // X(n) for all n <= nmax through the smallest prime factor
    std::vector<cplx> xs(plan.nmax + 1, 1.0);
    for (u64 n = 2; n <= plan.nmax; ++n) xs[n] = xs[n / plan.spf[n]] * s.x(plan.spf[n]);
    CompensatedComplexSum fg, gf;
    for (const auto& t : plan.terms) {
        const cplx x = xs[t.m1] * std::conj(xs[t.m2]);
        fg.add(t.c_fg * x);
        gf.add(t.c_gf * x);
    }
    return 0.5 * (fg.value() + plan.eps * gf.value());
}

cplx twisted_l_expectation(const TwistedLPlan& plan) {
    CompensatedSum acc;
    for (const auto& t : plan.terms)
        if (t.m1 == t.m2) acc.add(0.5 * (t.c_fg + plan.eps * t.c_gf));
    return acc.value();
}

namespace {

unsigned valuation(u64 n, u64 p) {
    unsigned v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

// sum_k lambda_1(p^{k+b}) lambda_2(p^{k+a}) / p^k
double local_shifted(const HeckeForm& h1, const HeckeForm& h2, u64 p, unsigned b, unsigned a) {
    const double ip = 1.0 / static_cast<double>(p);
    double pk = 1;
    return sum_series([&](int k) {
               const double t = h1.lambda_prime_power(p, k + b) * h2.lambda_prime_power(p, k + a) * pk;
               pk *= ip;
               return cplx(t);
           })
        .real();
}

}  // namespace

EulerWeight expected_weight_euler(const HeckeForm& f, const HeckeForm& g, const MollifierParams& params,
                                  u64 tail_limit, const std::function<double(u64)>& w_override) {
    EulerWeight out;
    const unsigned J = params.J;
    auto w = [&](u64 p) { return w_override ? w_override(p) : w_weight(p, J, params); };
    auto local_L = [&](u64 p) { return expectation_local_L(f, g, p, 0.0, LocalPath::series); };

    out.small_primes = 1;
    for (u64 p = 2; static_cast<double>(p) <= params.c0; ++p)
        if (is_prime(p)) out.small_primes *= local_L(p);

    cplx fg = out.small_primes, gf = out.small_primes;
    for (unsigned j = 0; j < params.intervals.size(); ++j) {
        const auto& primes = params.intervals[j].primes;
        const auto smooth = smooth_integers(primes, params.ell[j], static_cast<u64>(INT64_MAX));
        // gamma_h(n) = lambda(n) a_h(n) nu(n)
        std::vector<double> gf_coef, gg_coef;
        for (auto [n, om] : smooth) {
            double af = 1, ag = 1;
            for (auto [p, e] : factorize(n).factors) {
                af *= std::pow(f.lambda_p(p) * w(p), e);
                ag *= std::pow(g.lambda_p(p) * w(p), e);
            }
            const double lnu = (om % 2 ? -1.0 : 1.0) * nu(n).get_d();
            gf_coef.push_back(lnu * af);
            gg_coef.push_back(lnu * ag);
        }
        double base_fg = 1, base_gf = 1;
        std::map<u64, std::pair<double, double>> base;
        for (u64 p : primes) {
            const double c_fg = local_shifted(f, g, p, 0, 0);
            base[p] = {c_fg, c_fg};  // lambda_f lambda_g symmetric at zero shift
            base_fg *= c_fg;
            base_gf *= c_fg;
        }
        std::map<std::tuple<u64, unsigned, unsigned>, std::pair<double, double>> cache;
        auto shifted = [&](u64 p, unsigned vb, unsigned va) {
            const auto key = std::make_tuple(p, vb, va);
            auto it = cache.find(key);
            if (it != cache.end()) return it->second;
            const std::pair<double, double> v{local_shifted(f, g, p, vb, va), local_shifted(g, f, p, vb, va)};
            cache.emplace(key, v);
            return v;
        };
        CompensatedSum acc_fg, acc_gf;
        for (std::size_t i = 0; i < smooth.size(); ++i) {
            for (std::size_t k = 0; k < smooth.size(); ++k) {
                const double c = gf_coef[i] * gg_coef[k];
                if (c == 0) continue;
                const u64 n1 = smooth[i].n, n2 = smooth[k].n;
                const u64 h = std::gcd(n1, n2);
                const u64 a = n1 / h, b = n2 / h;
                double r_fg = 1, r_gf = 1;
                for (const auto& fac : factorize(a * b).factors) {
                    const auto [sfg, sgf] = shifted(fac.p, valuation(b, fac.p), valuation(a, fac.p));
                    r_fg *= sfg / base[fac.p].first;
                    r_gf *= sgf / base[fac.p].second;
                }
                const double denom = static_cast<double>(h) * static_cast<double>(a) * static_cast<double>(b);
                acc_fg.add(c * r_fg / denom);
                acc_gf.add(c * r_gf / denom);
            }
        }
        out.interval_fg.push_back(acc_fg.value() * base_fg);
        out.interval_gf.push_back(acc_gf.value() * base_gf);
        fg *= out.interval_fg.back();
        gf *= out.interval_gf.back();
    }

    if (tail_limit == 0) {
        tail_limit = std::min(f.cache_limit ? f.cache_limit : u64{10'000}, g.cache_limit ? g.cache_limit : u64{10'000});
    }
    out.tail_limit = tail_limit;
    out.tail = 1;
    for (u64 p = static_cast<u64>(std::floor(params.x)) + 1; p <= tail_limit; ++p)
        if (is_prime(p)) out.tail *= local_L(p);
    out.fg = fg * out.tail;
    out.gf = gf * out.tail;
    return out;
}

}  // namespace molliclt
