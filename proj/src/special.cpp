#include "molliclt/special.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace molliclt {

namespace {

constexpr double kPi = std::numbers::pi;

constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

// B_{2k} for k = 1..15
constexpr std::array<double, 15> kBernoulliEven = {
    1.0 / 6,         -1.0 / 30,           1.0 / 42,         -1.0 / 30,
    5.0 / 66,        -691.0 / 2730,       7.0 / 6,          -3617.0 / 510,
    43867.0 / 798,   -174611.0 / 330,     854513.0 / 138,   -236364091.0 / 2730,
    8553103.0 / 6,   -23749461029.0 / 870, 8615841276005.0 / 14322};

}  // namespace

cplx log_gamma(cplx z) {
    if (z.real() < 0.5) {
        // Gamma(z) Gamma(1 - z) = pi / sin(pi z)
        return std::log(kPi) - std::log(std::sin(kPi * z)) - log_gamma(1.0 - z);
    }
    z -= 1.0;
    cplx a = kLanczos[0];
    const cplx t = z + 7.5;
    for (int k = 1; k < 9; ++k) a += kLanczos[k] / (z + static_cast<double>(k));
    return 0.5 * std::log(2 * kPi) + (z + 0.5) * std::log(t) - t + std::log(a);
}

cplx gamma(cplx z) {
    if (z.real() < 0.5) return kPi / (std::sin(kPi * z) * gamma(1.0 - z));
    return std::exp(log_gamma(z));
}

cplx upper_incomplete_gamma(cplx a, double x) {
    if (!(x > 0)) throw std::invalid_argument("upper_incomplete_gamma: x must be positive");
    constexpr double eps = 1e-17;
    constexpr int max_iter = 2000;
    const cplx prefactor = std::exp(a * std::log(x) - x);
    if (x < 1.5) {
        cplx term = 1.0 / a, sum = term;
        for (int k = 1; k < max_iter; ++k) {
            term *= x / (a + static_cast<double>(k));
            sum += term;
            if (std::abs(term) < eps * std::abs(sum)) return gamma(a) - prefactor * sum;
        }
        throw std::runtime_error("upper_incomplete_gamma: series did not converge");
    }
    // Modified Lentz on x + 1 - a - 1(1-a)/(x + 3 - a - ...); every denominator guarded.
    constexpr double tiny = 1e-300;
    const cplx b0 = x + 1.0 - a;
    cplx f = std::abs(b0) < tiny ? cplx(tiny) : b0;
    cplx c = f, d = 0;
    for (int i = 1; i < max_iter; ++i) {
        const cplx an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        const cplx bn = b0 + 2.0 * static_cast<double>(i);
        d = bn + an * d;
        if (std::abs(d) < tiny) d = tiny;
        c = bn + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const cplx del = c * d;
        f *= del;
        if (std::abs(del - 1.0) < eps) return prefactor / f;
    }
    throw std::runtime_error("upper_incomplete_gamma: continued fraction did not converge");
}

cplx hurwitz_zeta(cplx s, double x) {
    if (!(x > 0 && x <= 1)) throw std::invalid_argument("hurwitz_zeta: x must lie in (0, 1]");
    if (std::abs(s - 1.0) < 1e-8) throw std::domain_error("hurwitz_zeta: s too close to pole");
    if (s.real() <= -2) throw std::invalid_argument("hurwitz_zeta: need Re s > -2");
    const int n_terms = 20 + static_cast<int>(std::abs(s.imag()));
    cplx sum = 0;
    for (int n = 0; n < n_terms; ++n) sum += std::exp(-s * std::log(n + x));
    const double big = n_terms + x;
    const double lb = std::log(big);
    const cplx pw = std::exp(-s * lb);  // big^{-s}
    sum += pw * big / (s - 1.0) + 0.5 * pw;
    // Bernoulli tail: B_{2k}/(2k)! s(s+1)...(s+2k-2) big^{-s-2k+1}
    cplx rising = s;
    cplx powk = pw / big;
    double fact = 2;  // (2k)!
    for (std::size_t k = 1; k <= kBernoulliEven.size(); ++k) {
        const cplx term = kBernoulliEven[k - 1] / fact * rising * powk;
        sum += term;
        if (std::abs(term) < 1e-16 * (std::abs(sum) + 1.0)) return sum;
        rising *= (s + static_cast<double>(2 * k - 1)) * (s + static_cast<double>(2 * k));
        powk /= big * big;
        fact *= static_cast<double>((2 * k + 1) * (2 * k + 2));
    }
    throw std::runtime_error("hurwitz_zeta: Euler-Maclaurin tail above tolerance");
}

cplx riemann_zeta(cplx s) { return hurwitz_zeta(s, 1.0); }

double trigamma(double x) {
    if (!(x > 0)) throw std::invalid_argument("trigamma: x must be positive");
    double acc = 0;
    while (x < 10) {
        acc += 1.0 / (x * x);
        x += 1;
    }
    const double z = 1.0 / x, z2 = z * z;
    const double series =
        z + 0.5 * z2 +
        z * z2 * (1.0 / 6 + z2 * (-1.0 / 30 + z2 * (1.0 / 42 + z2 * (-1.0 / 30 + z2 * (5.0 / 66)))));
    return acc + series;
}

double inv_minus_trigamma_shift(double z) {
    if (!(z > 0)) throw std::invalid_argument("inv_minus_trigamma_shift: z must be positive");
    if (z < 10) return 1.0 / z - trigamma(1.0 + z);
    const double u = 1.0 / z, u2 = u * u;
    return u2 * (0.5 + u * (-1.0 / 6 +
                            u2 * (1.0 / 30 +
                                  u2 * (-1.0 / 42 +
                                        u2 * (1.0 / 30 +
                                              u2 * (-5.0 / 66 + u2 * (691.0 / 2730 - u2 * 7.0 / 6)))))));
}

QuadratureRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
    QuadratureRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = r.weights[n - 1 - i] = 2 / ((1 - x * x) * dp * dp);
    }
    return r;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

}  // namespace molliclt
