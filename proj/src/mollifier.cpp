#include "molliclt/mollifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "molliclt/compensated.hpp"

namespace molliclt {

namespace {

constexpr u64 kValueCap = static_cast<u64>(std::numeric_limits<std::int64_t>::max());

void build_intervals(MollifierParams& p) {
    const double lq = p.log_q();
    p.y = std::exp(p.theta.front() * lq);
    p.x = std::exp(p.theta.back() * lq);
    p.intervals.clear();
    for (std::size_t j = 0; j < p.theta.size(); ++j) {
        const double lo = j == 0 ? p.c0 : std::exp(p.theta[j - 1] * lq);
        const double hi = std::exp(p.theta[j] * lq);
        p.intervals.push_back(lo < hi ? sieve_primes(lo, hi) : PrimeInterval{lo, hi, {}});
        p.ell.push_back(ell_from_theta(p.theta[j]));
        if (p.intervals.back().primes.empty())
            p.warnings.push_back("interval I_" + std::to_string(j) + " contains no primes");
    }
}

struct Term {
    u64 n;
    double lambda_nu;  // lambda(n) nu(n)
    mpq_class exact;
};

std::vector<Term> interval_terms(const MollifierParams& params, unsigned j) {
    if (j >= params.intervals.size()) throw std::out_of_range("interval index out of range");
    const auto smooth = smooth_integers(params.intervals[j].primes, params.ell[j], kValueCap);
    std::vector<Term> out;
    out.reserve(smooth.size());
    for (auto [n, w] : smooth) {
        mpq_class c = nu(n);
        if (w % 2) c = -c;
        out.push_back({n, c.get_d(), c});
    }
    return out;
}

double multiplicative_a(u64 n, const std::function<double(u64)>& a_of_p) {
    double v = 1;
    for (auto [p, e] : factorize(n).factors) v *= std::pow(a_of_p(p), static_cast<double>(e));
    return v;
}

}  // namespace

double MollifierParams::log_q() const { return std::log(static_cast<double>(q)); }

unsigned ell_from_theta(double theta) {
    if (!(theta > 0)) throw std::invalid_argument("ell_from_theta: theta must be positive");
    return 2 * static_cast<unsigned>(std::floor(std::pow(theta, -0.75)));
}

MollifierParams params_paper(u64 q, double eta, double c0) {
    if (q < 3) throw std::invalid_argument("params_paper: q must be >= 3");
    if (!(eta > 0 && eta < 1)) throw std::invalid_argument("params_paper: eta must lie in (0, 1)");
    if (!(c0 >= 2)) throw std::invalid_argument("params_paper: c0 must be >= 2");
    const double llq = std::log(std::log(static_cast<double>(q)));
    if (!(llq > 0)) throw std::domain_error("params_paper: log log q <= 0, q too small for paper mode");
    MollifierParams p;
    p.q = q;
    p.eta = eta;
    p.c0 = c0;
    p.mode = ParamMode::paper;
    const double base = eta / std::pow(llq, 5);
    unsigned J = 0;
    while (base * std::exp(static_cast<double>(J)) < eta * (1 - 1e-12)) ++J;
    p.J = J;
    for (unsigned j = 0; j <= J; ++j) p.theta.push_back(base * std::exp(static_cast<double>(j)));
    if (p.theta.back() > std::exp(1.0) * eta * (1 + 1e-12))
        throw std::domain_error("params_paper: theta_J exceeds e*eta; q too small for paper mode");
    const double y = std::exp(p.theta.front() * p.log_q());
    if (!(y > c0))
        throw std::domain_error("params_paper: y = q^theta_0 = " + std::to_string(y) +
                                " does not exceed c0; use desk mode");
    build_intervals(p);
    return p;
}

MollifierParams params_desk(u64 q, const std::vector<double>& theta, double c0, double theta_soft_cap) {
    if (q < 3) throw std::invalid_argument("params_desk: q must be >= 3");
    if (theta.empty()) throw std::invalid_argument("params_desk: theta list is empty");
    for (std::size_t j = 0; j < theta.size(); ++j) {
        if (!(theta[j] > 0)) throw std::invalid_argument("params_desk: theta must be positive");
        if (j && !(theta[j] > theta[j - 1])) throw std::invalid_argument("params_desk: theta must be strictly ascending");
    }
    if (theta.back() > 1) throw std::invalid_argument("params_desk: theta_J must not exceed 1");
    if (!(c0 >= 0)) throw std::invalid_argument("params_desk: c0 must be nonnegative");
    MollifierParams p;
    p.q = q;
    p.c0 = c0;
    p.mode = ParamMode::desk;
    p.theta = theta;
    p.J = static_cast<unsigned>(theta.size() - 1);
    if (theta.back() > theta_soft_cap)
        p.warnings.push_back("theta_J above soft cap " + std::to_string(theta_soft_cap));
    build_intervals(p);
    return p;
}

double w_weight(u64 p, unsigned j, const MollifierParams& params) {
    if (j >= params.theta.size()) throw std::out_of_range("w_weight: interval index out of range");
    const double L = params.theta[j] * params.log_q();
    const double lp = std::log(static_cast<double>(p));
    if (lp >= L) return 0.0;
    return std::exp(-lp / L) * (1 - lp / L);
}

DirichletPolynomial build_interval_mollifier(const MollifierParams& params, unsigned j,
                                             const std::function<double(u64)>& a_of_p) {
    auto terms = interval_terms(params, j);
    DirichletPolynomial out;
    for (auto& t : terms) {
        out.support.push_back(t.n);
        if (a_of_p) {
            out.coeff.emplace_back(t.lambda_nu * multiplicative_a(t.n, a_of_p));
        } else {
            out.coeff.emplace_back(t.lambda_nu);
            out.exact.push_back(t.exact);
        }
    }
    return out;
}

DirichletPolynomial build_weighted_mollifier(const MollifierParams& params,
                                             const std::function<double(u64)>& a_of_p,
                                             std::size_t support_cap) {
    std::vector<Term> cur{{1, 1.0, mpq_class(1)}};
    for (unsigned j = 0; j < params.intervals.size(); ++j) {
        const auto part = interval_terms(params, j);
        if (cur.size() * part.size() > support_cap)
            throw std::length_error("mollifier support exceeds budget " + std::to_string(support_cap));
        std::vector<Term> next;
        next.reserve(cur.size() * part.size());
        for (const auto& a : cur)
            for (const auto& b : part) {
                u64 n;
                if (__builtin_mul_overflow(a.n, b.n, &n) || n > kValueCap)
                    throw std::overflow_error("mollifier support element exceeds 2^63-1");
                mpq_class e = a.exact * b.exact;
                next.push_back({n, e.get_d(), std::move(e)});
            }
        cur = std::move(next);
    }
    std::sort(cur.begin(), cur.end(), [](const Term& x, const Term& y) { return x.n < y.n; });
    DirichletPolynomial out;
    out.support.reserve(cur.size());
    out.coeff.reserve(cur.size());
    for (auto& t : cur) {
        out.support.push_back(t.n);
        if (a_of_p) {
            out.coeff.emplace_back(t.lambda_nu * multiplicative_a(t.n, a_of_p));
        } else {
            out.coeff.emplace_back(t.lambda_nu);
            out.exact.push_back(std::move(t.exact));
        }
    }
    return out;
}

DirichletPolynomial build_dirichlet_mollifier(const MollifierParams& params, std::size_t support_cap) {
    return build_weighted_mollifier(params, {}, support_cap);
}

DirichletPolynomial build_hecke_mollifier(const MollifierParams& params, const HeckeForm& f,
                                          std::size_t support_cap) {
    const unsigned J = params.J;
    return build_weighted_mollifier(
        params, [&](u64 p) { return f.lambda_p(p) * w_weight(p, J, params); }, support_cap);
}

cplx prime_sum_S(const CharacterTable& t, u64 a, const MollifierParams& params,
                 const std::function<double(u64)>& weight) {
    cplx s = 0;
    for (u64 p : params.intervals.at(0).primes)
        s += (weight ? weight(p) : 1.0) * chi(t, a, p) / std::sqrt(static_cast<double>(p));
    return s;
}

std::vector<cplx> prime_sums_all(const CharacterTable& t, const MollifierParams& params,
                                 const std::function<double(u64)>& weight) {
    std::vector<std::pair<u64, cplx>> terms;
    for (u64 p : params.intervals.at(0).primes)
        terms.emplace_back(p, (weight ? weight(p) : 1.0) / std::sqrt(static_cast<double>(p)));
    return batch_character_sums(t, terms);
}

cplx weight_W(const CharacterTable& t, u64 a, const CentralValueSet& L, const DirichletPolynomial& M) {
    if (a == 0 || a >= t.order()) throw std::invalid_argument("weight_W: need a nonprincipal character");
    return L.values[a] * M.evaluate(t, a);
}

std::vector<cplx> weights_all(const CharacterTable& t, const CentralValueSet& L, const DirichletPolynomial& M) {
    auto m = M.evaluate_all(t);
    std::vector<cplx> w(t.order(), 0.0);
    for (u64 a = 1; a < t.order(); ++a) w[a] = L.values[a] * m[a];
    return w;
}

namespace {

cplx power_neg(double logv, cplx e) { return std::exp(-e * logv); }

// sum over (h, d) with hd = e, d squarefree, of mu(d) / (h d^{2+alpha+beta})
cplx moebius_kernel(u64 e, cplx ab) {
    cplx s = 0;
    for (u64 d : divisors(e)) {
        const int mu = mobius(d);
        if (mu == 0) continue;
        s += static_cast<double>(mu) / static_cast<double>(e / d) * power_neg(std::log(static_cast<double>(d)), 2.0 + ab);
    }
    return s;
}

cplx m_direct(const DirichletPolynomial& g, cplx alpha, cplx beta) {
    if (g.size() > kDirectPairSupportCap)
        throw std::length_error("m_alpha_beta: support too large for the direct pair sum");
    std::vector<double> lg(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) lg[i] = std::log(static_cast<double>(g.support[i]));
    CompensatedComplexSum acc;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double gu = g.coeff[i].real();
        for (std::size_t k = 0; k < g.size(); ++k) {
            const u64 h = std::gcd(g.support[i], g.support[k]);
            const double lh = std::log(static_cast<double>(h));
            acc.add(gu * g.coeff[k].real() / static_cast<double>(h) *
                    std::exp(-(1.0 + alpha) * (lg[i] - lh) - (1.0 + beta) * (lg[k] - lh)));
        }
    }
    return acc.value();
}

cplx m_moebius(const DirichletPolynomial& g, cplx alpha, cplx beta) {
    std::unordered_map<u64, std::pair<cplx, cplx>> ab;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const u64 u = g.support[i];
        const double gu = g.coeff[i].real();
        for (u64 e : divisors(u)) {
            const double lm = std::log(static_cast<double>(u / e));
            auto& slot = ab[e];
            slot.first += gu * power_neg(lm, 1.0 + alpha);
            slot.second += gu * power_neg(lm, 1.0 + beta);
        }
    }
    std::vector<u64> keys;
    keys.reserve(ab.size());
    for (auto& kv : ab) keys.push_back(kv.first);
    std::sort(keys.begin(), keys.end());
    CompensatedComplexSum acc;
    for (u64 e : keys) acc.add(moebius_kernel(e, alpha + beta) * ab[e].first * ab[e].second);
    return acc.value();
}

// Per-interval sum over (h, d, m, n) with hdm, hdn I_j-smooth and Omega caps, by literal enumeration.
cplx m_interval(const MollifierParams& params, unsigned j, cplx alpha, cplx beta) {
    const auto terms = interval_terms(params, j);
    CompensatedComplexSum acc;
    for (const auto& u : terms) {
        for (const auto& v : terms) {
            const u64 g = std::gcd(u.n, v.n);
            for (u64 e : divisors(g)) {
                const double lm = std::log(static_cast<double>(u.n / e));
                const double ln = std::log(static_cast<double>(v.n / e));
                for (u64 d : divisors(e)) {
                    const int mu = mobius(d);
                    if (mu == 0) continue;
                    const double h = static_cast<double>(e / d);
                    const double ld = std::log(static_cast<double>(d));
                    // lambda(mn) nu(hdm) nu(hdn) = gamma(hdm) gamma(hdn)
                    acc.add(static_cast<double>(mu) * u.lambda_nu * v.lambda_nu / h *
                            std::exp(-(2.0 + alpha + beta) * ld - (1.0 + alpha) * lm - (1.0 + beta) * ln));
                }
            }
        }
    }
    return acc.value();
}

}  // namespace

cplx m_alpha_beta(const MollifierParams& params, cplx alpha, cplx beta, MVariant variant) {
    const double bound = 10.0 / params.log_q();
    if (std::abs(alpha) > bound + 1e-15 || std::abs(beta) > bound + 1e-15)
        throw std::invalid_argument("m_alpha_beta: shifts exceed 10/log q");
    if (variant == MVariant::euler) {
        cplx prod = 1;
        for (unsigned j = 0; j < params.intervals.size(); ++j) prod *= m_interval(params, j, alpha, beta);
        return prod;
    }
    const auto g = build_dirichlet_mollifier(params);
    return variant == MVariant::direct ? m_direct(g, alpha, beta) : m_moebius(g, alpha, beta);
}

}  // namespace molliclt
