#pragma once

#include <complex>
#include <vector>

namespace molliclt {

using cplx = std::complex<double>;

// Lanczos (g = 7, n = 9); reflection for Re z < 1/2.
cplx log_gamma(cplx z);
cplx gamma(cplx z);

// Upper incomplete gamma Gamma(a, x), x > 0: series below x = 1.5, continued fraction above.
cplx upper_incomplete_gamma(cplx a, double x);

// Hurwitz zeta by Euler-Maclaurin; Re s > -2, |s - 1| >= 1e-8, x in (0, 1].
cplx hurwitz_zeta(cplx s, double x);
cplx riemann_zeta(cplx s);

// psi_1(x) for x > 0.
double trigamma(double x);
// 1/z - psi_1(1 + z) for z >= 0, without cancellation for large z.
double inv_minus_trigamma_shift(double z);

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
// Gauss-Legendre on [-1, 1].
QuadratureRule gauss_legendre(int n);

double normal_cdf(double x);

}  // namespace molliclt
