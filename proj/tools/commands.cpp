#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "molliclt/characters.hpp"
#include "molliclt/compensated.hpp"
#include "molliclt/dirichlet_l.hpp"
#include "molliclt/hecke_rankin.hpp"
#include "molliclt/io.hpp"
#include "molliclt/mollifier.hpp"
#include "molliclt/random_model.hpp"
#include "molliclt/stats.hpp"

namespace molliclt::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

bool needs_params(const std::string& cmd) { return cmd == "clt" || cmd == "random" || cmd == "second-moment"; }

std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
    return s;
}

MollifierParams make_params(const RunConfig& c) {
    if (c.mode == "paper") return params_paper(*c.q, *c.eta, c.c0);
    return params_desk(*c.q, c.theta, c.c0);
}

json params_json(const MollifierParams& p) {
    json j;
    j["mode"] = p.mode == ParamMode::paper ? "paper" : "desk";
    j["q"] = p.q;
    if (p.mode == ParamMode::paper) j["eta"] = p.eta;
    j["c0"] = p.c0;
    j["theta"] = p.theta;
    j["ell"] = p.ell;
    j["y"] = p.y;
    j["x"] = p.x;
    j["warnings"] = p.warnings;
    return j;
}

class Output {
  public:
    explicit Output(const RunConfig& c) : cfg_(c), dir_(c.output_dir), hash_(config_hash(c)) {
        fs::create_directories(dir_);
    }

    void csv(const std::string& name, const std::string& body) const {
        atomic_write(dir_ / name, "# config_hash=" + hash_ + " seed=" + std::to_string(cfg_.seed) + "\n" + body);
    }

    // Everything except "timing" is deterministic.
    void summary(const std::string& name, json data) const {
        json out;
        out["command"] = cfg_.command;
        out["config_hash"] = hash_;
        out["seed"] = cfg_.seed;
        json conf;
        std::istringstream in(canonical(cfg_));
        for (std::string line; std::getline(in, line);) {
            const auto eq = line.find('=');
            conf[line.substr(0, eq)] = line.substr(eq + 1);
        }
        out["config"] = conf;
        for (auto& [k, v] : data.items()) out[k] = v;
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        char stamp[32];
        const std::time_t now = std::time(nullptr);
        std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        out["timing"] = {{"finished_utc", stamp}, {"wall_seconds", wall}};
        atomic_write(dir_ / name, out.dump(2) + "\n");
    }

  private:
    const RunConfig& cfg_;
    fs::path dir_;
    std::string hash_;
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

fs::path cache_dir(const RunConfig& c) {
    if (const char* env = std::getenv("MOLLICLT_CACHE_DIR"); env && *env) return env;
    return fs::path(c.output_dir) / "cache";
}

LMethod method_of(const RunConfig& c) { return c.method == "oracle" ? LMethod::oracle : LMethod::afe; }

fs::path cache_path(const RunConfig& c) {
    return cache_dir(c) / ("L_q" + std::to_string(*c.q) + "_" + c.method + ".bin");
}

CentralValueSet compute_l(const CharacterTable& t, LMethod m) {
    return m == LMethod::oracle ? l_values_oracle(t, 0.5) : l_values_afe(t, 0.5);
}

void store_l(const RunConfig& c, const CentralValueSet& L) {
    fs::create_directories(cache_dir(c));
    write_l_cache(cache_path(c), L);
}

// Central values from the cache when present, otherwise computed and cached.
CentralValueSet central_values(const RunConfig& c, const CharacterTable& t) {
    const auto path = cache_path(c);
    if (fs::exists(path)) {
        auto L = read_l_cache(path);
        if (L.q == t.q && L.s == cplx(0.5)) return L;
    }
    auto L = compute_l(t, method_of(c));
    store_l(c, L);
    return L;
}

std::string lvalues_csv(const CentralValueSet& L) {
    std::ostringstream o;
    o << "a,L_re,L_im\n";
    for (std::size_t a = 1; a < L.values.size(); ++a)
        o << a << ',' << format_double(L.values[a].real()) << ',' << format_double(L.values[a].imag()) << '\n';
    return o.str();
}

json cplx_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

struct Suite {
    json checks = json::array();
    bool ok = true;

    void check(const std::string& name, double value, double tol, bool pass) {
        checks.push_back({{"name", name}, {"value", value}, {"tolerance", tol}, {"pass", pass}});
        ok = ok && pass;
    }
    void at_most(const std::string& name, double value, double tol) { check(name, value, tol, value < tol); }
    // Reported without affecting the exit status.
    void diagnostic(const std::string& name, json value) {
        checks.push_back({{"name", name}, {"value", std::move(value)}, {"diagnostic", true}});
    }
};

}  // namespace

void validate(const RunConfig& c) {
    static const std::vector<std::string> commands{"characters", "lvalues", "clt", "random", "second-moment"};
    if (std::find(commands.begin(), commands.end(), c.command) == commands.end())
        throw ConfigError("command", "unknown command '" + c.command + "'");
    if (!c.q) throw ConfigError("q", "missing (set --q or q= in the config file)");
    if (*c.q < 3 || !is_prime(*c.q)) throw ConfigError("q", "must be a prime >= 3");
    if (c.mode != "paper" && c.mode != "desk") throw ConfigError("mode", "must be 'paper' or 'desk'");
    if (c.method != "afe" && c.method != "oracle") throw ConfigError("method", "must be 'afe' or 'oracle'");
    if (c.threads == 0) throw ConfigError("threads", "must be positive");
    if (c.mc_samples < 100) throw ConfigError("mc", "need at least 100 samples");
    if (c.output_dir.empty()) throw ConfigError("out", "empty output directory");
    if (!(c.delta >= 0)) throw ConfigError("delta", "must be nonnegative");
    if (c.length == 0 || c.length >= *c.q) throw ConfigError("length", "must lie in [1, q)");
    if (!needs_params(c.command)) return;
    if (c.mode == "paper") {
        if (!c.eta) throw ConfigError("eta", "missing (required in paper mode)");
        if (!(*c.eta > 0 && *c.eta < 1)) throw ConfigError("eta", "must lie in (0, 1)");
        if (!(c.c0 >= 2)) throw ConfigError("c0", "must be >= 2 in paper mode");
    } else {
        if (c.theta.empty()) throw ConfigError("theta", "missing (required in desk mode)");
        for (std::size_t j = 0; j < c.theta.size(); ++j) {
            if (!(c.theta[j] > 0 && c.theta[j] <= 1)) throw ConfigError("theta", "entries must lie in (0, 1]");
            if (j && !(c.theta[j] > c.theta[j - 1])) throw ConfigError("theta", "must be strictly ascending");
        }
        if (!(c.c0 >= 0)) throw ConfigError("c0", "must be nonnegative");
    }
}

std::string canonical(const RunConfig& c) {
    std::ostringstream o;
    o << "command=" << c.command << '\n';
    o << "q=" << (c.q ? std::to_string(*c.q) : "") << '\n';
    o << "mode=" << c.mode << '\n';
    o << "eta=" << (c.eta ? format_double(*c.eta) : "") << '\n';
    o << "c0=" << format_double(c.c0) << '\n';
    o << "theta=" << join(c.theta) << '\n';
    o << "seed=" << c.seed << '\n';
    o << "mc=" << c.mc_samples << '\n';
    o << "method=" << c.method << '\n';
    o << "compare=" << (c.compare ? 1 : 0) << '\n';
    o << "delta=" << format_double(c.delta) << '\n';
    o << "length=" << c.length << '\n';
    // out and threads change neither results nor bytes
    return o.str();
}

std::string config_hash(const RunConfig& c) { return hex64(fnv1a64(canonical(c))); }

int cmd_characters(const RunConfig& c) {
    Output out(c);
    const auto t = build_table(*c.q);
    const u64 n = t.order();

    // (1/phi(q)) sum_a chi_a(m) conj chi_a(n) against the diagonal
    const u64 lim = std::min<u64>(100, n);
    double orth = 0;
    for (u64 m = 1; m <= lim; ++m)
        for (u64 k = 1; k <= lim; ++k) {
            const u64 d = (t.ind[m] + n - t.ind[k]) % n;
            CompensatedComplexSum acc;
            for (u64 a = 0; a < n; ++a) acc.add(t.roots[(a * d) % n]);
            const cplx avg = acc.value() / static_cast<double>(n);
            orth = std::max(orth, std::abs(avg - (m == k ? 1.0 : 0.0)));
        }

    const auto tau = gauss_sums_all(t);
    double gauss = 0;
    std::ostringstream csv;
    csv << "a,tau_re,tau_im,abs2_minus_q\n";
    const double q = static_cast<double>(t.q);
    for (u64 a = 1; a < n; ++a) {
        const double r = std::norm(tau[a]) - q;
        gauss = std::max(gauss, std::abs(r) / q);
        csv << a << ',' << format_double(tau[a].real()) << ',' << format_double(tau[a].imag()) << ','
            << format_double(r) << '\n';
    }
    out.csv("gauss_sums.csv", csv.str());

    Suite s;
    s.at_most("orthogonality_max_residual", orth, 1e-10);
    s.at_most("gauss_sum_max_relative_residual", gauss, 1e-9);
    json data;
    data["q"] = t.q;
    data["primitive_root"] = t.g;
    data["orthogonality_range"] = lim;
    data["checks"] = s.checks;
    data["pass"] = s.ok;
    out.summary("characters.json", data);
    return s.ok ? kExitOk : kExitFailed;
}

int cmd_lvalues(const RunConfig& c) {
    Output out(c);
    const auto t = build_table(*c.q);
    const auto L = compute_l(t, method_of(c));
    store_l(c, L);
    out.csv("lvalues.csv", lvalues_csv(L));

    Suite s;
    s.at_most("functional_equation_residual", L.residual_max, 1e-8);
    if (c.compare) {
        const auto other = compute_l(t, method_of(c) == LMethod::afe ? LMethod::oracle : LMethod::afe);
        double d = 0;
        for (u64 a = 1; a < t.order(); ++a) d = std::max(d, std::abs(L.values[a] - other.values[a]));
        s.at_most("oracle_vs_afe_max_discrepancy", d, 1e-8);
    }
    json data;
    data["q"] = t.q;
    data["method"] = c.method;
    data["cache_file"] = cache_path(c).filename().string();
    data["checks"] = s.checks;
    data["pass"] = s.ok;
    out.summary("lvalues.json", data);
    return s.ok ? kExitOk : kExitFailed;
}

int cmd_clt(const RunConfig& c) {
    Output out(c);
    const auto params = make_params(c);
    const auto t = build_table(*c.q);
    const auto L = central_values(c, t);
    auto opts = default_clt_options();
    opts.delta = c.delta;
    const auto rep = clt_experiment(t, L, params, opts);
    out.csv("clt_intervals.csv", rep.intervals_csv());
    out.csv("clt_phi.csv", rep.charfn_csv(true));
    out.csv("clt_psi.csv", rep.charfn_csv(false));

    double max_imag = 0;
    for (const auto& r : rep.intervals) max_imag = std::max(max_imag, std::abs(r.mu.imag()));
    json data;
    data["q"] = rep.q;
    data["mode"] = rep.mode;
    data["params"] = params_json(params);
    data["sigma"] = rep.sigma;
    data["delta"] = rep.delta;
    data["n_characters"] = rep.n_characters;
    data["exclusions"] = {{"zero_central_value", rep.n_excluded},
                          {"typical_kept", rep.typical.kept},
                          {"fail_weight", rep.typical.fail_weight},
                          {"fail_mollifier", rep.typical.fail_mollifier},
                          {"fail_prime_sum", rep.typical.fail_prime_sum}};
    data["mean_weight"] = cplx_json(rep.mean_weight);
    data["ks"] = rep.ks;
    data["ks_max_imag"] = rep.ks_max_imag;
    data["interval_max_imag"] = max_imag;
    const bool finite = std::isfinite(rep.ks) && std::isfinite(rep.mean_weight.real());
    data["pass"] = finite;
    out.summary("clt_summary.json", data);
    return finite ? kExitOk : kExitFailed;
}

int cmd_random(const RunConfig& c) {
    Output out(c);
    const auto params = make_params(c);
    const auto t = build_table(*c.q);
    Suite s;

    // Moment identity on I = (1, 10], every k with y^{2k} < q.
    {
        const auto mp = params_desk(t.q, {std::log(10.0) / std::log(static_cast<double>(t.q))}, 1.0, 1.0);
        for (unsigned k = 1; std::pow(mp.y, 2.0 * k) < static_cast<double>(t.q); ++k) {
            const auto r = moment_identity_check(t, mp, k);
            const std::string tag = "moment_k" + std::to_string(k);
            s.at_most(tag + "_identity_relative", std::abs(r.character_side - r.expectation_side) /
                                                      std::abs(r.expectation_side), 1e-10);
            s.check(tag + "_bound_slack", r.bound - std::max(r.character_side, r.expectation_side), 0,
                    r.character_side <= r.bound && r.expectation_side <= r.bound);
        }
    }

    // Monte Carlo against the exact oracle for E|P|^2 with P on the first interval.
    {
        std::vector<std::pair<u64, cplx>> terms;
        for (u64 p : params.intervals.at(0).primes) terms.emplace_back(p, 1.0);
        const auto P = make_polynomial(std::move(terms));
        const auto exact = exact_expectation({{&P, false}, {&P, true}});
        const auto mc = mc_expectation(P.support, [&](const RandomSample& x) { return std::norm(evaluate(P, x)); },
                                       c.mc_samples, c.seed, c.threads);
        const double z = std::abs(mc.value - exact.value) / std::max(mc.standard_error, 1e-300);
        s.at_most("mc_vs_exact_abs2_stderrs", z, 5);
        json m = json::parse(expectation_json(mc));
        m["exact_re"] = exact.value.real();
        s.diagnostic("mc_abs2", m);
    }

    // E_ell: e^t <= (1 + e^{-ell}) E_ell(t) and positivity.
    {
        double worst = std::numeric_limits<double>::infinity(), pos = worst;
        for (unsigned ell = 2; ell <= 40; ell += 2) {
            const double hi = ell / std::exp(2.0);
            for (int i = 0; i <= 400; ++i) {
                const double x = -static_cast<double>(ell) + (hi + ell) * i / 400.0;
                worst = std::min(worst, (1 + std::exp(-static_cast<double>(ell))) * e_trunc(ell, x) / std::exp(x) - 1);
            }
            for (int i = 0; i <= 1000; ++i) pos = std::min(pos, e_trunc(ell, -50 + 0.1 * i));
        }
        s.check("taylor_inequality_min_slack", worst, 0, worst >= -1e-12);
        s.check("e_trunc_min_value", pos, 0, pos > 0);
    }

    // P^ell = ell! * sum over Omega(n) = ell of nu(n), coefficientwise and exact.
    {
        std::vector<std::pair<u64, cplx>> terms;
        for (u64 p : {2, 3, 5, 7}) terms.emplace_back(p, 1.0);
        const auto P = make_polynomial(std::move(terms));
        double worst = 0;
        for (unsigned ell = 1; ell <= 5; ++ell) {
            const auto Pl = power(P, ell);
            double fact = 1;
            for (unsigned i = 2; i <= ell; ++i) fact *= i;
            for (std::size_t i = 0; i < Pl.size(); ++i) {
                double nu = 1;
                for (auto [p, a] : factorize(Pl.support[i]).factors)
                    for (unsigned j = 2; j <= a; ++j) nu /= j;
                worst = std::max(worst, std::abs(Pl.coeff[i] - fact * nu));
            }
        }
        s.check("power_identity_max_abs", worst, 0, worst == 0);
    }

    // Local expectations for (Delta, weight 16).
    {
        const auto f = delta_form(), g = weight16_form();
        double d = 0;
        for (u64 p : {2, 3, 5, 7})
            for (cplx z : {cplx(0), cplx(0.1), cplx(0.25, 0.3)})
                d = std::max(d, std::abs(expectation_local_L(f, g, p, z, LocalPath::series) -
                                         expectation_local_L(f, g, p, z, LocalPath::formula)));
        s.at_most("local_L_series_vs_formula", d, 1e-12);

        const unsigned J = static_cast<unsigned>(params.theta.size() - 1);
        double dq = 0, bound = 0;
        for (u64 p = 2; p <= 100; ++p) {
            if (!is_prime(p)) continue;
            const double w = w_weight(p, J, params);
            for (auto ord : {Ordering::fg, Ordering::gf})
                for (int a = -4; a <= 4; ++a) {
                    const cplx ser = local_moment_series(f, g, ord, p, 0.0, a, w);
                    if (std::abs(a) <= 1)
                        dq = std::max(dq, std::abs(ser - local_moment_quadrature(f, g, ord, p, 0.0, a, w)));
                    bound = std::max(bound, std::abs(ser) / (std::pow(5.0, std::abs(a)) *
                                                             std::pow(static_cast<double>(p), -std::abs(a) / 2.0)));
                }
        }
        s.at_most("series_vs_quadrature_p_le_100", dq, 1e-8);
        s.diagnostic("max_ratio_to_5^|a|p^{-|a|/2}", bound);

        json resid = json::array();
        for (u64 p : {997, 9973})
            for (auto ord : {Ordering::fg, Ordering::gf})
                for (int a = -1; a <= 1; ++a) {
                    const double w = w_weight(p, J, params);
                    const double r = local_moment_leading_residual(f, g, ord, p, 0.0, a, w);
                    const double scale = a == 0 ? static_cast<double>(p) * p : static_cast<double>(p);
                    resid.push_back({{"p", p}, {"ordering", ord == Ordering::fg ? "fg" : "gf"}, {"a", a},
                                     {"scaled_residual", r * scale}});
                }
        s.diagnostic("leading_order_residuals", resid);
    }

    // V cutoff.
    {
        const double v0 = v_cutoff(1e-8);
        s.check("V_small_xi", v0, 1e-3, std::abs(v0 - 1) <= 1e-3);
        double shift = 0;
        for (double xi : {0.5, 1.0, 3.0}) shift = std::max(shift, std::abs(v_cutoff(xi, 12, 16, 2.0) - v_cutoff(xi, 12, 16, 2.2)));
        shift = std::max(shift, std::abs(v_cutoff(0.5) - v_cutoff(0.5, 12, 16, 2.0)));
        s.at_most("V_contour_shift", shift, 1e-10);
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        constexpr int K = 16;
        for (int i = 0; i < K; ++i) {
            const double lx = std::log(50.0) + (std::log(400.0) - std::log(50.0)) * i / (K - 1);
            const double ly = std::log(v_cutoff(std::exp(lx)));
            sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
        }
        s.diagnostic("V_loglog_slope_50_400", (K * sxy - sx * sy) / (K * sxx - sx * sx));
    }

    json data;
    data["q"] = t.q;
    data["params"] = params_json(params);
    data["checks"] = s.checks;
    data["pass"] = s.ok;
    out.summary("random.json", data);
    return s.ok ? kExitOk : kExitFailed;
}

int cmd_second_moment(const RunConfig& c) {
    Output out(c);
    const auto params = make_params(c);
    const auto t = build_table(*c.q);
    // small enough for the central value routines (|shift| <= 0.1)
    const std::vector<std::pair<cplx, cplx>> shifts{
        {0.0, 0.0}, {0.05, -0.05}, {0.08, 0.03}, {cplx(0.02, 0.06), cplx(-0.04, 0.05)}};

    Suite s;
    std::size_t support = 0;
    try {
        support = build_dirichlet_mollifier(params).size();
    } catch (const std::length_error&) {
        support = kMollifierSupportCap + 1;
    }
    const bool direct = support <= kDirectPairSupportCap;
    std::ostringstream csv;
    csv << "alpha_re,alpha_im,beta_re,beta_im,direct_re,direct_im,moebius_re,moebius_im,euler_re,euler_im\n";
    double worst = 0;
    for (auto [a, b] : shifts) {
        const cplx mo = m_alpha_beta(params, a, b, MVariant::moebius);
        const cplx eu = m_alpha_beta(params, a, b, MVariant::euler);
        const cplx di = direct ? m_alpha_beta(params, a, b, MVariant::direct) : cplx(NAN, NAN);
        const double scale = std::abs(mo);
        worst = std::max(worst, std::abs(eu - mo) / scale);
        if (direct) worst = std::max(worst, std::abs(di - mo) / scale);
        csv << format_double(a.real()) << ',' << format_double(a.imag()) << ',' << format_double(b.real()) << ','
            << format_double(b.imag()) << ',' << format_double(di.real()) << ',' << format_double(di.imag()) << ','
            << format_double(mo.real()) << ',' << format_double(mo.imag()) << ',' << format_double(eu.real()) << ','
            << format_double(eu.imag()) << '\n';
    }
    out.csv("m_alpha_beta.csv", csv.str());
    s.at_most("m_variants_max_relative", worst, 1e-12);

    // Empirical twisted second moment against its main terms, x_n from the mollifier.
    const auto M = build_interval_mollifier(params, 0);
    std::vector<double> x(c.length + 1, 0.0);
    for (std::size_t i = 0; i < M.size() && M.support[i] <= c.length; ++i) x[M.support[i]] = M.coeff[i].real();
    std::ostringstream tw;
    tw << "alpha_re,alpha_im,beta_re,beta_im,empirical_re,empirical_im,main_re,main_im\n";
    json rows = json::array();
    for (auto [a, b] : shifts) {
        const cplx e = twisted_second_moment_empirical(t, a, b, x, method_of(c));
        const cplx m = twisted_second_moment_main_terms(t.q, a, b, x);
        tw << format_double(a.real()) << ',' << format_double(a.imag()) << ',' << format_double(b.real()) << ','
           << format_double(b.imag()) << ',' << format_double(e.real()) << ',' << format_double(e.imag()) << ','
           << format_double(m.real()) << ',' << format_double(m.imag()) << '\n';
        rows.push_back(std::abs(e - m) / std::abs(m));
    }
    out.csv("twisted_second_moment.csv", tw.str());
    s.diagnostic("twisted_relative_gap", rows);

    json data;
    data["q"] = t.q;
    data["params"] = params_json(params);
    data["mollifier_support"] = support;
    data["direct_variant"] = direct;
    data["checks"] = s.checks;
    data["pass"] = s.ok;
    out.summary("second_moment.json", data);
    return s.ok ? kExitOk : kExitFailed;
}

int run(const RunConfig& c) {
    try {
        validate(c);
    } catch (const ConfigError& e) {
        std::cerr << "invalid config: " << e.what() << '\n';
        return kExitInvalidConfig;
    }
    try {
        if (needs_params(c.command)) (void)make_params(c);
    } catch (const std::exception& e) {
        std::cerr << "invalid config: params: " << e.what() << '\n';
        return kExitInvalidConfig;
    }
    try {
        if (c.command == "characters") return cmd_characters(c);
        if (c.command == "lvalues") return cmd_lvalues(c);
        if (c.command == "clt") return cmd_clt(c);
        if (c.command == "random") return cmd_random(c);
        return cmd_second_moment(c);
    } catch (const std::exception& e) {
        std::cerr << c.command << " failed: " << e.what() << '\n';
        return kExitFailed;
    }
}

}  // namespace molliclt::cli
