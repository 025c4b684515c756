#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "molliclt/dirichlet_l.hpp"
#include "molliclt/hecke_form.hpp"
#include "molliclt/polynomial.hpp"

namespace molliclt {

enum class ParamMode { paper, desk };

struct MollifierParams {
    u64 q = 0;
    double eta = 0;  // paper mode only
    double c0 = 1;
    unsigned J = 0;
    std::vector<double> theta;
    std::vector<unsigned> ell;
    double y = 0;
    double x = 0;
    std::vector<PrimeInterval> intervals;
    ParamMode mode = ParamMode::desk;
    std::vector<std::string> warnings;

    double log_q() const;
};

inline constexpr std::size_t kMollifierSupportCap = 2'000'000;
inline constexpr std::size_t kDirectPairSupportCap = 30'000;

unsigned ell_from_theta(double theta);

MollifierParams params_paper(u64 q, double eta, double c0);
// theta_soft_cap: theta_J above it is allowed but recorded in warnings.
MollifierParams params_desk(u64 q, const std::vector<double>& theta, double c0 = 1.0,
                            double theta_soft_cap = 0.5);

// p^{-1/(theta_j log q)} (1 - log p/(theta_j log q)), clamped to 0 once log p >= theta_j log q.
double w_weight(u64 p, unsigned j, const MollifierParams& params);

// sum over I_j-smooth n with Omega(n) <= ell_j of a(n) lambda(n) nu(n), a completely multiplicative.
DirichletPolynomial build_interval_mollifier(const MollifierParams& params, unsigned j,
                                             const std::function<double(u64)>& a_of_p = {});
// Product over j; exact rational coefficients when a_of_p is empty.
DirichletPolynomial build_weighted_mollifier(const MollifierParams& params,
                                             const std::function<double(u64)>& a_of_p = {},
                                             std::size_t support_cap = kMollifierSupportCap);
DirichletPolynomial build_dirichlet_mollifier(const MollifierParams& params,
                                              std::size_t support_cap = kMollifierSupportCap);
// a_{f,J}(p) = lambda_f(p) w_J(p)
DirichletPolynomial build_hecke_mollifier(const MollifierParams& params, const HeckeForm& f,
                                          std::size_t support_cap = kMollifierSupportCap);

// sum over c0 < p <= y of weight(p) chi_a(p)/sqrt(p)
cplx prime_sum_S(const CharacterTable& t, u64 a, const MollifierParams& params,
                 const std::function<double(u64)>& weight = {});
std::vector<cplx> prime_sums_all(const CharacterTable& t, const MollifierParams& params,
                                 const std::function<double(u64)>& weight = {});

cplx weight_W(const CharacterTable& t, u64 a, const CentralValueSet& L, const DirichletPolynomial& M);
// W for every a (entry 0 set to 0).
std::vector<cplx> weights_all(const CharacterTable& t, const CentralValueSet& L, const DirichletPolynomial& M);

enum class MVariant { direct, moebius, euler };
cplx m_alpha_beta(const MollifierParams& params, cplx alpha, cplx beta, MVariant variant);

}  // namespace molliclt
