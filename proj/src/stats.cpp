#include "molliclt/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "molliclt/compensated.hpp"
#include "molliclt/io.hpp"
#include "molliclt/special.hpp"

namespace molliclt {

namespace {

constexpr double kPi = std::numbers::pi;

cplx e_of(double x) { return std::polar(1.0, -2 * kPi * x); }  // e(-x)

}  // namespace

WeightedEmpiricalMeasure make_measure(std::vector<double> obs, std::vector<cplx> wt) {
    if (obs.size() != wt.size()) throw std::invalid_argument("make_measure: length mismatch");
    WeightedEmpiricalMeasure mu{std::move(obs), std::move(wt), 0};
    CompensatedComplexSum s;
    for (const auto& w : mu.wt) s.add(w);
    mu.total = s.value();
    return mu;
}

cplx measure_of_interval(const WeightedEmpiricalMeasure& mu, double a, double b) {
    if (mu.total == 0.0) throw std::domain_error("measure_of_interval: total weight is zero");
    CompensatedComplexSum s;
    for (std::size_t i = 0; i < mu.obs.size(); ++i)
        if (mu.obs[i] > a && mu.obs[i] < b) s.add(mu.wt[i]);
    return s.value() / mu.total;
}

double prime_reciprocal_sum(const MollifierParams& params) {
    double s = 0;
    for (u64 p : params.intervals.at(0).primes) s += 1.0 / static_cast<double>(p);
    return s;
}

NormalizedLogs normalized_log_values(const CentralValueSet& L, VarianceMode mode, const MollifierParams& params) {
    NormalizedLogs out;
    const double var = mode == VarianceMode::asymptotic
                           ? 0.5 * std::log(std::log(static_cast<double>(L.q)))
                           : 0.5 * prime_reciprocal_sum(params);
    if (!(var > 0)) throw std::domain_error("normalized_log_values: variance scale is not positive");
    out.scale = std::sqrt(var);
    out.values.assign(L.values.size(), std::numeric_limits<double>::quiet_NaN());
    out.excluded.assign(L.values.size(), true);
    for (std::size_t a = 1; a < L.values.size(); ++a) {
        const double m = std::abs(L.values[a]);
        if (m < kZeroCentralValue) {
            ++out.n_excluded;
            continue;
        }
        out.values[a] = std::log(m) / out.scale;
        out.excluded[a] = false;
    }
    return out;
}

cplx char_fn_weighted(const std::vector<cplx>& W, const std::vector<double>& obs, double u) {
    if (W.size() != obs.size()) throw std::invalid_argument("char_fn_weighted: length mismatch");
    CompensatedComplexSum num, den;
    for (std::size_t a = 1; a < W.size(); ++a) {
        den.add(W[a]);
        if (std::isfinite(obs[a])) num.add(W[a] * std::polar(1.0, u * obs[a]));
    }
    if (den.value() == 0.0) throw std::domain_error("char_fn_weighted: zero total weight");
    return num.value() / den.value();
}

cplx char_fn_plain(const std::vector<double>& obs, double u) {
    CompensatedComplexSum num;
    std::size_t n = 0;
    for (std::size_t a = 1; a < obs.size(); ++a) {
        if (!std::isfinite(obs[a])) continue;
        num.add(std::polar(1.0, u * obs[a]));
        ++n;
    }
    if (n == 0) throw std::domain_error("char_fn_plain: no observations");
    return num.value() / static_cast<double>(n);
}

cplx char_fn_joint(const std::vector<cplx>& W, const std::vector<double>& obs1, const std::vector<double>& obs2,
                   double u, double v) {
    if (W.size() != obs1.size() || W.size() != obs2.size())
        throw std::invalid_argument("char_fn_joint: length mismatch");
    CompensatedComplexSum num, den;
    for (std::size_t a = 1; a < W.size(); ++a) {
        den.add(W[a]);
        if (std::isfinite(obs1[a]) && std::isfinite(obs2[a]))
            num.add(W[a] * std::polar(1.0, u * obs1[a] + v * obs2[a]));
    }
    if (den.value() == 0.0) throw std::domain_error("char_fn_joint: zero total weight");
    return num.value() / den.value();
}

double fejer_K(double x) {
    if (std::abs(x) < 1e-8) return 1.0 - (kPi * x) * (kPi * x) / 3;
    const double s = std::sin(kPi * x) / (kPi * x);
    return s * s;
}

double fejer_hat(double u) { return std::max(0.0, 1 - std::abs(u)); }

double beurling_E(double x) {
    if (x == 0) return 1.0;
    const double u = std::abs(x);
    const double s = std::sin(kPi * u) / kPi;
    const double e_pos = 2 * s * s * inv_minus_trigamma_shift(u);  // B(u) - 1
    return x > 0 ? e_pos : 2 * fejer_K(u) - e_pos;
}

double beurling_B(double x) {
    if (x == 0) return 1.0;
    return beurling_E(x) + (x > 0 ? 1.0 : -1.0);
}

cplx beurling_E_hat(double t) {
    const double at = std::abs(t);
    if (at == 0) return 1.0;
    const cplx ipt(0, kPi * t);
    if (at >= 1) return -1.0 / ipt;
    double c;  // pi t cot(pi t) - 1
    const double x = kPi * t, x2 = x * x;
    if (at < 0.05)
        c = -x2 / 3 - x2 * x2 / 45 - 2 * x2 * x2 * x2 / 945 - x2 * x2 * x2 * x2 / 4725;
    else
        c = x / std::tan(x) - 1;
    return (1 - at) * c / ipt + (1 - at);
}

cplx beurling_E_hat_numeric(double t, double U) {
    static const QuadratureRule rule = gauss_legendre(8);
    const long panels = static_cast<long>(std::ceil(U));
    // e(ut) sin^2(pi u) has frequencies up to |t| + 1 per unit; split the panels to keep 8 nodes enough
    const int sub = 1 + static_cast<int>(std::ceil(std::abs(t)));
    const double h = 1.0 / sub;
    CompensatedComplexSum acc;
    for (long j = -panels; j < panels; ++j)
        for (int k = 0; k < sub; ++k) {
            const double mid = j + (k + 0.5) * h;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const double u = mid + 0.5 * h * rule.nodes[i];
                acc.add(0.5 * h * rule.weights[i] * beurling_E(u) * e_of(u * t));
            }
        }
    return acc.value();
}

double SelbergFunction::operator()(double x) const {
    if (majorant) return 0.5 * (beurling_B(delta * (x - a)) + beurling_B(delta * (b - x)));
    return -0.5 * (beurling_B(delta * (a - x)) + beurling_B(delta * (x - b)));
}

namespace {

cplx indicator_hat(double a, double b, double xi) {
    if (xi == 0) return b - a;
    return (e_of(xi * a) - e_of(xi * b)) / cplx(0, 2 * kPi * xi);
}

template <class Ehat>
cplx selberg_hat(const SelbergFunction& F, double xi, Ehat E) {
    const double d = F.delta;
    if (F.majorant)
        return indicator_hat(F.a, F.b, xi) + (E(xi / d) * e_of(xi * F.a) + E(-xi / d) * e_of(xi * F.b)) / (2 * d);
    return indicator_hat(F.a, F.b, xi) - (E(-xi / d) * e_of(xi * F.a) + E(xi / d) * e_of(xi * F.b)) / (2 * d);
}

}  // namespace

cplx SelbergFunction::hat(double xi) const {
    return selberg_hat(*this, xi, [](double t) { return beurling_E_hat(t); });
}

cplx SelbergFunction::hat_numeric(double xi) const {
    return selberg_hat(*this, xi, [](double t) { return beurling_E_hat_numeric(t); });
}

SelbergFunction selberg_minorant(double a, double b, double delta) {
    if (!(delta > 0) || !(a < b)) throw std::invalid_argument("selberg_minorant: need delta > 0 and a < b");
    return {a, b, delta, false};
}

SelbergFunction selberg_majorant(double a, double b, double delta) {
    if (!(delta > 0) || !(a < b)) throw std::invalid_argument("selberg_majorant: need delta > 0 and a < b");
    return {a, b, delta, true};
}

double default_bandwidth(double sigma2) {
    const double L2 = 2 * sigma2;
    const double L3 = std::log(L2);
    if (!(L3 > 0)) return 4.0;
    return std::max(4.0, std::sqrt(L2 / L3));
}

TypicalSet typical_set_filter(const std::vector<cplx>& W, const std::vector<double>& tail_mollifier,
                              const std::vector<cplx>& P, double sigma, double Lambda, double mollifier_bound,
                              double p_threshold) {
    if (W.size() != tail_mollifier.size() || W.size() != P.size())
        throw std::invalid_argument("typical_set_filter: length mismatch");
    if (!(Lambda >= 1)) throw std::invalid_argument("typical_set_filter: Lambda must be >= 1");
    TypicalSet ts;
    ts.keep.assign(W.size(), false);
    for (std::size_t a = 1; a < W.size(); ++a) {
        const double w = std::abs(W[a]);
        bool ok = true;
        if (!(w >= 1 / Lambda && w <= Lambda)) {
            ++ts.fail_weight;
            ok = false;
        }
        if (!(tail_mollifier[a] <= mollifier_bound)) {
            ++ts.fail_mollifier;
            ok = false;
        }
        if (!(std::abs(P[a]) / sigma <= p_threshold)) {
            ++ts.fail_prime_sum;
            ok = false;
        }
        ts.keep[a] = ok;
        ts.kept += ok;
    }
    return ts;
}

CltOptions default_clt_options() {
    CltOptions o;
    const double edges[] = {-3, -2, -1.5, -1, -0.5, 0, 0.5, 1, 1.5, 2, 3};
    for (std::size_t i = 0; i + 1 < std::size(edges); ++i) o.intervals.emplace_back(edges[i], edges[i + 1]);
    o.intervals.emplace_back(-1, 1);
    o.intervals.emplace_back(-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity());
    for (double u = 0; u <= 3.0001; u += 0.25) o.u_grid.push_back(u);
    return o;
}

double weighted_ks(const WeightedEmpiricalMeasure& mu, int grid, double lo, double hi, double* max_imag) {
    if (mu.total == 0.0) throw std::domain_error("weighted_ks: total weight is zero");
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < mu.obs.size(); ++i)
        if (std::isfinite(mu.obs[i])) order.push_back(i);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return mu.obs[x] < mu.obs[y]; });
    CompensatedComplexSum cum;
    std::size_t k = 0;
    double ks = 0, im = 0;
    for (int g = 0; g < grid; ++g) {
        const double t = lo + (hi - lo) * g / (grid - 1);
        while (k < order.size() && mu.obs[order[k]] <= t) cum.add(mu.wt[order[k++]]);
        const cplx F = cum.value() / mu.total;
        ks = std::max(ks, std::abs(F - normal_cdf(t)));
        im = std::max(im, std::abs(F.imag()));
    }
    if (max_imag) *max_imag = im;
    return ks;
}

namespace {

double gauss_mass(double a, double b) {
    auto cdf = [](double x) { return std::isinf(x) ? (x > 0 ? 1.0 : 0.0) : normal_cdf(x); };
    return cdf(b) - cdf(a);
}

}  // namespace

CltReport clt_experiment(const CharacterTable& t, const CentralValueSet& L, const MollifierParams& params,
                         const CltOptions& opts) {
    if (L.q != t.q || L.values.size() != t.order())
        throw std::invalid_argument("clt_experiment: central values do not match the character table");
    CltReport rep;
    rep.q = t.q;
    rep.mode = params.mode == ParamMode::paper ? "paper" : "desk";
    const double s2 = 0.5 * prime_reciprocal_sum(params);
    if (!(s2 > 0)) throw std::domain_error("clt_experiment: I_0 has no primes");
    rep.sigma = std::sqrt(s2);
    rep.delta = opts.delta > 0 ? opts.delta : default_bandwidth(s2);

    const auto logs = normalized_log_values(L, VarianceMode::empirical, params);
    rep.n_excluded = logs.n_excluded;
    const auto M = build_dirichlet_mollifier(params);
    const auto Mv = M.evaluate_all(t);
    const std::size_t n = t.order();
    rep.n_characters = n - 1;
    std::vector<cplx> W(n, 0.0);
    for (std::size_t a = 1; a < n; ++a) W[a] = L.values[a] * Mv[a];

    const auto P = prime_sums_all(t, params);
    std::vector<double> Pn(n);
    for (std::size_t a = 0; a < n; ++a) Pn[a] = P[a].real() / rep.sigma;

    std::vector<double> tail(n, 1.0);
    for (unsigned j = 1; j < params.intervals.size(); ++j) {
        const auto Mj = build_interval_mollifier(params, j).evaluate_all(t);
        for (std::size_t a = 0; a < n; ++a) tail[a] *= std::abs(Mj[a]);
    }
    rep.typical = typical_set_filter(W, tail, P, rep.sigma, opts.Lambda, opts.mollifier_bound, opts.p_threshold);

    // characters a >= 1; zero central values keep their (vanishing) weight in the total
    std::vector<double> obs(logs.values.begin() + 1, logs.values.end());
    std::vector<cplx> wt(W.begin() + 1, W.end());
    const auto mu = make_measure(obs, wt);
    rep.mean_weight = mu.total / static_cast<double>(n - 1);
    std::vector<double> obs_t;
    std::vector<cplx> wt_t;
    for (std::size_t a = 1; a < n; ++a)
        if (rep.typical.keep[a]) {
            obs_t.push_back(logs.values[a]);
            wt_t.push_back(W[a]);
        }
    const auto mu_t = make_measure(obs_t, wt_t);

    for (auto [lo, hi] : opts.intervals) {
        CltInterval row{lo, hi, measure_of_interval(mu, lo, hi), 0.0, 0.0, 0.0, gauss_mass(lo, hi), 0};
        row.mu_typical = mu_t.total == 0.0 ? cplx(std::nan(""), 0) : measure_of_interval(mu_t, lo, hi);
        if (std::isfinite(lo) && std::isfinite(hi)) {
            const auto Fm = selberg_minorant(lo, hi, rep.delta), Fp = selberg_majorant(lo, hi, rep.delta);
            CompensatedComplexSum sm, sp;
            for (std::size_t i = 0; i < obs.size(); ++i) {
                if (!std::isfinite(obs[i])) continue;
                sm.add(wt[i] * Fm(obs[i]));
                sp.add(wt[i] * Fp(obs[i]));
            }
            row.mu_minorant = sm.value() / mu.total;
            row.mu_majorant = sp.value() / mu.total;
        } else {
            row.mu_minorant = row.mu_majorant = row.mu;
        }
        row.abs_diff = std::abs(row.mu - row.gauss);
        rep.intervals.push_back(row);
    }
    for (double u : opts.u_grid)
        rep.charfn.push_back({u, char_fn_weighted(W, Pn, u), char_fn_plain(Pn, u), std::exp(-u * u / 2)});
    rep.ks = weighted_ks(mu, opts.ks_grid, opts.ks_lo, opts.ks_hi, &rep.ks_max_imag);
    return rep;
}

std::string CltReport::intervals_csv() const {
    std::string out = "interval_lo,interval_hi,mu_re,mu_im,gauss,abs_diff\n";
    for (const auto& r : intervals)
        out += format_double(r.lo) + ',' + format_double(r.hi) + ',' + format_double(r.mu.real()) + ',' +
               format_double(r.mu.imag()) + ',' + format_double(r.gauss) + ',' + format_double(r.abs_diff) + '\n';
    return out;
}

std::string CltReport::charfn_csv(bool weighted) const {
    std::string out = "u,phi_re,phi_im,target\n";
    for (const auto& r : charfn) {
        const cplx v = weighted ? r.phi : r.psi;
        out += format_double(r.u) + ',' + format_double(v.real()) + ',' + format_double(v.imag()) + ',' +
               format_double(r.target) + '\n';
    }
    return out;
}

}  // namespace molliclt
