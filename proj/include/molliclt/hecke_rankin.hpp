#pragma once

#include <utility>
#include <vector>

#include "molliclt/hecke_form.hpp"
#include "molliclt/mollifier.hpp"
#include "molliclt/random_model.hpp"

namespace molliclt {

struct SatakeParams {
    cplx alpha1, alpha2;
};

// Roots of X^2 - lambda_p X + 1.
SatakeParams satake(double lambda_p);
// (alpha1^{a+1} - alpha2^{a+1}) / (alpha1 - alpha2), the double root handled as a limit.
cplx satake_power_sum(const SatakeParams& s, unsigned a);

// prod_{i,j} (1 - alpha_{f,i} alpha_{g,j} p^{-s})^{-1}
cplx rs_local_factor(const HeckeForm& f, const HeckeForm& g, u64 p, cplx s);
// sum_j lambda_f(p^j) lambda_g(p^j) p^{-js}, times (1 - psi_0(p) p^{-2s})^{-1}; equals rs_local_factor.
cplx rs_local_series(const HeckeForm& f, const HeckeForm& g, u64 p, cplx s);

enum class LocalPath { series, formula };
// E(L_p^{f,g}(s + 1/2, X)).
cplx expectation_local_L(const HeckeForm& f, const HeckeForm& g, u64 p, cplx s, LocalPath path);

// n_p^{h1,h2}(s, k) with a_{h2,J}(p) = lambda_{h2}(p) w; zero for k < 0.
cplx n_coeff(u64 p, cplx s, int k, const HeckeForm& h1, const HeckeForm& h2, double w);

enum class Ordering { fg, gf };

// E(L_p^{f1,f2}(s+1/2, X) M~_p(X) X(p)^a) by the exact series; w = w_J(p).
cplx local_moment_series(const HeckeForm& f, const HeckeForm& g, Ordering ord, u64 p, cplx s, int a, double w);
// Same expectation by Gauss-Legendre quadrature in the angle of X(p) (composite, 64 nodes per panel).
cplx local_moment_quadrature(const HeckeForm& f, const HeckeForm& g, Ordering ord, u64 p, cplx s, int a,
                             double w, int panels = 16);
// |series - leading term|: a = 0 against 1 + n_1 n_1', a = +-1 against the single k = 1 coefficient.
double local_moment_leading_residual(const HeckeForm& f, const HeckeForm& g, Ordering ord, u64 p, cplx s, int a,
                                     double w);
// G_p (a = 0) and F_p (Re X(p) weighting).
cplx g_p(const HeckeForm& f, const HeckeForm& g, Ordering ord, u64 p, cplx s, double w);
cplx f_p(const HeckeForm& f, const HeckeForm& g, Ordering ord, u64 p, cplx s, double w);

// V(xi) with L_infinity(s, f) = (2pi)^{-s} Gamma(s + (k-1)/2). contour: 0 picks +2 for xi >= 1 and
// -2 (plus the residue at s = 0) below; any other value in (-6, 6) \ {0} is used as given.
double v_cutoff(double xi, unsigned kf = 12, unsigned kg = 16, double contour = 0);

// Precomputed truncated double sum for L(X); reusable across samples.
struct TwistedLPlan {
    double q_eff = 0;
    double threshold = 0;
    double xi_max = 0;  // V(xi) <= threshold beyond this point
    // (m1, m2, c_fg, c_gf): c = lambda(m1) lambda'(m2) V(m1 m2 / q_eff^2) / sqrt(m1 m2)
    struct Term {
        u64 m1, m2;
        double c_fg, c_gf;
    };
    std::vector<Term> terms;
    std::vector<u64> primes;  // every prime dividing some m1 or m2
    u64 nmax = 0;
    std::vector<u64> spf;  // smallest prime factor up to nmax
    double eps = 1;           // eps(f) eps(g)
};

inline constexpr std::size_t kTwistedLTermBudget = 5'000'000;

TwistedLPlan twisted_l_plan(const HeckeForm& f, const HeckeForm& g, double q_eff, double threshold = 1e-10,
                            std::size_t budget = kTwistedLTermBudget);
// (L^{f,g}(X) + eps(f) eps(g) L^{g,f}(X)) / 2
cplx random_twisted_L(const RandomSample& s, const TwistedLPlan& plan);
// Exact E(L(X)) of the truncated sum (diagonal m1 = m2).
cplx twisted_l_expectation(const TwistedLPlan& plan);

struct EulerWeight {
    cplx fg;  // E(L^{f,g}(1/2, X) M(X))
    cplx gf;  // E(L^{g,f}(1/2, X) M(X))
    cplx small_primes;
    std::vector<cplx> interval_fg, interval_gf;
    cplx tail;
    u64 tail_limit = 0;
};

// Product of p <= c0 factors, exact per-interval sums with the Omega caps, and the tail x < p <= tail_limit
// (0: the smaller cache limit of f and g). w overrides w_J when given.
EulerWeight expected_weight_euler(const HeckeForm& f, const HeckeForm& g, const MollifierParams& params,
                                  u64 tail_limit = 0, const std::function<double(u64)>& w = {});

}  // namespace molliclt
