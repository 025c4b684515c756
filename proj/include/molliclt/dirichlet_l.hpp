#pragma once

#include <filesystem>
#include <vector>

#include "molliclt/characters.hpp"

namespace molliclt {

enum class LMethod { oracle, afe };

struct CentralValueSet {
    u64 q = 0;
    cplx s = 0.5;
    std::vector<cplx> values;  // values[a] = L(s, chi_a); values[0] unused (NaN)
    LMethod method = LMethod::oracle;
    // max over a of |L(s,chi) - eps(chi) gamma-ratio L(1-s, conj chi)|, i.e. the completed-function
    // residual divided by the gamma factor at s
    double residual_max = 0;
};

// (q/pi)^{(s+delta)/2} Gamma((s+delta)/2)
cplx gamma_factor(u64 q, cplx s, int delta);

cplx root_number(const CharacterTable& t, u64 a);
std::vector<cplx> root_numbers(const CharacterTable& t);

CentralValueSet l_values_oracle(const CharacterTable& t, cplx s);
CentralValueSet l_values_afe(const CharacterTable& t, cplx s);

// Smoothed approximate functional equation split at t = w (w = 1 is the balanced point X = sqrt(q/pi)).
cplx afe_l_value(const CharacterTable& t, u64 a, cplx s, double w = 1.0);

// Max residual of the functional equation pairing values at s with partner values at 1 - s.
double functional_equation_residual(const CharacterTable& t, const CentralValueSet& at_s,
                                    const CentralValueSet& at_1ms);

// (1/phi^+(q)) sum over even nonprincipal chi of L(1/2+alpha,chi) L(1/2+beta,conj chi) |sum x_n chi(n)/sqrt n|^2.
// x[n] for n in [0, L]; x[0] ignored.
cplx twisted_second_moment_empirical(const CharacterTable& t, cplx alpha, cplx beta,
                                     const std::vector<double>& x, LMethod method = LMethod::oracle);

// Main terms of the twisted second moment for even characters; the alpha + beta = 0 pole cancellation
// is handled by averaging over a small circle in alpha.
cplx twisted_second_moment_main_terms(u64 q, cplx alpha, cplx beta, const std::vector<double>& x);

// Binary cache: header "LCHI", u32 version, u64 q, f64 re(s), f64 im(s); records (u32 a, f64 re, f64 im).
inline constexpr std::uint32_t kLCacheVersion = 1;
void write_l_cache(const std::filesystem::path& path, const CentralValueSet& set);
CentralValueSet read_l_cache(const std::filesystem::path& path);

}  // namespace molliclt
