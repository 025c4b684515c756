#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "molliclt/dirichlet_l.hpp"
#include "molliclt/mollifier.hpp"

namespace molliclt {

struct WeightedEmpiricalMeasure {
    std::vector<double> obs;
    std::vector<cplx> wt;
    cplx total = 0;
};

WeightedEmpiricalMeasure make_measure(std::vector<double> obs, std::vector<cplx> wt);
// (1/total) sum of wt over obs in (a, b); a, b may be infinite. NaN observations never count.
cplx measure_of_interval(const WeightedEmpiricalMeasure& mu, double a, double b);

enum class VarianceMode { asymptotic, empirical };

struct NormalizedLogs {
    std::vector<double> values;  // indexed by character; NaN where excluded
    std::vector<bool> excluded;
    std::size_t n_excluded = 0;  // nonprincipal characters with |L| < 1e-14
    double scale = 1;
};

inline constexpr double kZeroCentralValue = 1e-14;

// sum_{c0 < p <= y} 1/p
double prime_reciprocal_sum(const MollifierParams& params);
// log|L| / sqrt(log log q / 2) or / sqrt(sum 1/p / 2); entry 0 (principal) is always excluded.
NormalizedLogs normalized_log_values(const CentralValueSet& L, VarianceMode mode, const MollifierParams& params);

// sum W e^{iu obs} / sum W over entries with finite obs (characters a >= 1).
cplx char_fn_weighted(const std::vector<cplx>& W, const std::vector<double>& obs, double u);
cplx char_fn_plain(const std::vector<double>& obs, double u);
// Two-dimensional joint version for paired observables.
cplx char_fn_joint(const std::vector<cplx>& W, const std::vector<double>& obs1, const std::vector<double>& obs2,
                   double u, double v);

double fejer_K(double x);
double fejer_hat(double u);

// Beurling's function B and the error E(x) = B(x) - sgn(x), with its Fourier transform.
double beurling_B(double x);
double beurling_E(double x);
cplx beurling_E_hat(double t);
// int E(u) e(-ut) du over [-U, U] by Gauss-Legendre on unit panels.
cplx beurling_E_hat_numeric(double t, double U = 1e5);

struct SelbergFunction {
    double a = 0, b = 1, delta = 1;
    bool majorant = false;

    double operator()(double x) const;
    cplx hat(double xi) const;          // closed form
    cplx hat_numeric(double xi) const;  // through beurling_E_hat_numeric
    bool low_quality() const { return delta * (b - a) < 1; }
};

SelbergFunction selberg_minorant(double a, double b, double delta);
SelbergFunction selberg_majorant(double a, double b, double delta);

// sqrt(L2 / log L2) with L2 = 2 sigma^2 standing in for log log q; clamped to >= 4.
double default_bandwidth(double sigma2);

struct TypicalSet {
    std::vector<bool> keep;  // indexed by character
    std::size_t kept = 0;
    std::size_t fail_weight = 0;     // Lambda^{-1} <= |W| <= Lambda violated
    std::size_t fail_mollifier = 0;  // prod_{j>=1} |M_j| above the bound
    std::size_t fail_prime_sum = 0;  // |P| / sigma above the threshold
};

// Entry 0 (principal) never kept. Infinite bounds disable a condition.
TypicalSet typical_set_filter(const std::vector<cplx>& W, const std::vector<double>& tail_mollifier,
                              const std::vector<cplx>& P, double sigma, double Lambda, double mollifier_bound,
                              double p_threshold);

struct CltOptions {
    std::vector<std::pair<double, double>> intervals;
    std::vector<double> u_grid;
    double Lambda = std::numeric_limits<double>::infinity();
    double mollifier_bound = std::numeric_limits<double>::infinity();
    double p_threshold = std::numeric_limits<double>::infinity();
    double delta = 0;  // 0: default_bandwidth
    int ks_grid = 512;
    double ks_lo = -4, ks_hi = 4;
};

CltOptions default_clt_options();

struct CltInterval {
    double lo, hi;
    cplx mu;
    cplx mu_typical;
    cplx mu_minorant, mu_majorant;  // Selberg-smoothed
    double gauss;
    double abs_diff;  // |mu - gauss|
};

struct CharFnRow {
    double u;
    cplx phi;  // weighted, Re P / sigma
    cplx psi;  // unweighted, Re P / sigma
    double target;
};

struct CltReport {
    u64 q = 0;
    std::string mode;
    double sigma = 0;
    double delta = 0;
    std::size_t n_characters = 0;
    std::size_t n_excluded = 0;
    TypicalSet typical;
    cplx mean_weight;  // (1/phi*(q)) sum W
    std::vector<CltInterval> intervals;
    std::vector<CharFnRow> charfn;
    double ks = 0;
    double ks_max_imag = 0;  // max |Im mu_W((-inf, t])| on the KS grid

    std::string intervals_csv() const;
    // weighted: Phi_q rows; otherwise Psi_q rows (same schema)
    std::string charfn_csv(bool weighted) const;
};

double weighted_ks(const WeightedEmpiricalMeasure& mu, int grid, double lo, double hi, double* max_imag = nullptr);

CltReport clt_experiment(const CharacterTable& t, const CentralValueSet& L, const MollifierParams& params,
                         const CltOptions& opts);

}  // namespace molliclt
