#include <doctest.h>

#include <cmath>

#include "gen.hpp"
#include "molliclt/compensated.hpp"
#include "molliclt/hecke_rankin.hpp"

using namespace molliclt;

namespace {

const HeckeForm& F() {
    static const HeckeForm f = delta_form();
    return f;
}
const HeckeForm& G() {
    static const HeckeForm g = weight16_form();
    return g;
}

// J-th interval weight from desk parameters; covers p <= 100 or p <= 10^4 depending on theta_J.
double w_small(u64 p) {
    static const auto params = params_desk(10007, {0.25, 0.5});
    return w_weight(p, 1, params);
}
double w_large(u64 p) {
    static const auto params = params_desk(10007, {0.25, 1.0}, 1.0, 1.0);
    return w_weight(p, 1, params);
}

std::pair<cplx, cplx> roots(double lam) {
    const cplx d = std::sqrt(cplx(lam * lam - 4));
    return {(lam + d) / 2.0, (lam - d) / 2.0};
}

}  // namespace

TEST_SUITE("hecke_rankin") {

TEST_CASE("satake parameters") {
    const auto s2 = satake(2);
    CHECK(std::abs(s2.alpha1 - 1.0) < 1e-12);
    CHECK(std::abs(s2.alpha2 - 1.0) < 1e-12);
    const auto s0 = satake(0);
    CHECK(std::abs(s0.alpha1 * s0.alpha2 - 1.0) < 1e-14);
    CHECK(std::abs(std::abs(s0.alpha1.imag()) - 1) < 1e-14);
    testgen::Gen gen(51);
    for (int i = 0; i < 200; ++i) {
        const double lam = gen.uniform(-2, 2);
        const auto s = satake(lam);
        CHECK(std::abs(s.alpha1 + s.alpha2 - lam) < 1e-12);
        CHECK(std::abs(satake_power_sum(s, 0) - 1.0) < 1e-14);
        CHECK(std::abs(satake_power_sum(s, 2) - (lam * lam - 1)) < 1e-12);
    }
}

TEST_CASE("satake power sums reproduce the hecke recursion") {
    for (u64 p = 2; p <= F().cache_limit; ++p) {
        if (!is_prime(p)) continue;
        for (const HeckeForm* h : {&F(), &G()}) {
            const auto s = satake(h->lambda_p(p));
            for (unsigned a = 0; a <= 12; ++a)
                REQUIRE(std::abs(satake_power_sum(s, a) - h->lambda_prime_power(p, a)) < 1e-10);
        }
    }
}

TEST_CASE("rankin-selberg local factor: product against series") {
    for (u64 p : {2, 3, 5})
        for (cplx s : {cplx(1), cplx(1.5), cplx(1, 0.3)}) {
            CHECK(std::abs(rs_local_factor(F(), G(), p, s) - rs_local_series(F(), G(), p, s)) < 1e-12);
            CHECK(std::abs(rs_local_factor(F(), F(), p, s) - rs_local_series(F(), F(), p, s)) < 1e-12);
        }
    const auto z = constant_form(0.0);
    for (u64 p : {2, 3, 7}) {
        const cplx x = std::pow(double(p), -1.3);
        CHECK(std::abs(rs_local_factor(z, z, p, 1.3) - 1.0 / ((1.0 - x * x) * (1.0 - x * x))) < 1e-14);
    }
}

TEST_CASE("local expectation: series and formula") {
    for (u64 p : {2, 3, 5, 7})
        for (cplx s : {cplx(0), cplx(0.1), cplx(0.25, 0.3)}) {
            CHECK(std::abs(expectation_local_L(F(), G(), p, s, LocalPath::series) -
                           expectation_local_L(F(), G(), p, s, LocalPath::formula)) < 1e-12);
        }
    CHECK(std::abs(expectation_local_L(F(), F(), 2, 0.25, LocalPath::series) -
                   expectation_local_L(F(), F(), 2, 0.25, LocalPath::formula)) < 1e-12);
    for (double s : {0.0, 0.2, 0.7}) CHECK(expectation_local_L(F(), G(), 3, s, LocalPath::series).imag() == doctest::Approx(0).epsilon(1e-15));
    CHECK_THROWS(expectation_local_L(F(), G(), 3, -0.6, LocalPath::series));
}

TEST_CASE("n_p coefficients") {
    for (u64 p : {2, 11, 97}) {
        const double w = w_small(p);
        const cplx s(0.1, 0.2);  // coefficients are taken at s + 1/2
        CHECK(n_coeff(p, s + 0.5, 0, F(), G(), w) == cplx(1));
        CHECK(n_coeff(p, s + 0.5, -1, F(), G(), w) == cplx(0));
        const cplx k1 = (std::pow(double(p), -s) * F().lambda_p(p) - w * G().lambda_p(p)) / std::sqrt(double(p));
        CHECK(std::abs(n_coeff(p, s + 0.5, 1, F(), G(), w) - k1) < 1e-14);
    }
}

TEST_CASE("series against quadrature for p <= 100") {
    double worst = 0;
    for (u64 p = 2; p <= 100; ++p) {
        if (!is_prime(p)) continue;
        for (auto ord : {Ordering::fg, Ordering::gf})
            for (int a = -2; a <= 2; ++a)
                for (cplx s : {cplx(0), cplx(0.1, 0.2)})
                    worst = std::max(worst, std::abs(local_moment_series(F(), G(), ord, p, s, a, w_small(p)) -
                                                     local_moment_quadrature(F(), G(), ord, p, s, a, w_small(p))));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("series against an independent monte carlo over X(p)") {
    const u64 p = 3;
    const double w = w_small(p);
    const auto [a1, a2] = roots(F().lambda_p(p));
    const auto [b1, b2] = roots(G().lambda_p(p));
    const double x = std::pow(double(p), -0.5), sp = std::sqrt(double(p));
    const std::size_t N = 1'000'000;
    for (int a : {0, 1}) {
        CompensatedComplexSum sum;
        CompensatedSum sq;
        for (std::size_t i = 0; i < N; ++i) {
            const cplx X = std::polar(1.0, sample_angle(77, i, p)), Xb = std::conj(X);
            const cplx L = 1.0 / ((1.0 - a1 * X * x) * (1.0 - a2 * X * x) * (1.0 - b1 * Xb * x) * (1.0 - b2 * Xb * x));
            const cplx M = std::exp(-F().lambda_p(p) * w * X / sp - G().lambda_p(p) * w * Xb / sp);
            const cplx v = L * M * std::pow(X, a);
            sum.add(v);
            sq.add(std::norm(v));
        }
        const cplx mean = sum.value() / double(N);
        const double se = std::sqrt((sq.value() / double(N) - std::norm(mean)) / double(N));
        CHECK(std::abs(mean - local_moment_series(F(), G(), Ordering::fg, p, 0.0, a, w)) < 4 * se);
    }
}

TEST_CASE("large p: leading-order residuals") {
    for (u64 p : {997, 9973})
        for (auto ord : {Ordering::fg, Ordering::gf}) {
            const double w = w_large(p);
            CHECK(local_moment_leading_residual(F(), G(), ord, p, 0.0, 0, w) * double(p) * double(p) <= 100);
            CHECK(local_moment_leading_residual(F(), G(), ord, p, 0.0, 1, w) * double(p) <= 100);
            CHECK(local_moment_leading_residual(F(), G(), ord, p, 0.0, -1, w) * double(p) <= 100);
        }
    // the a = 0 residual is the closed form for the (f, g) ordering
    const u64 p = 997;
    const double w = w_large(p);
    const double lead = 1 + std::pow(1 - w, 2) * F().lambda_p(p) * G().lambda_p(p) / double(p);
    CHECK(local_moment_leading_residual(F(), G(), Ordering::fg, p, 0.0, 0, w) ==
          doctest::Approx(std::abs(g_p(F(), G(), Ordering::fg, p, 0.0, w) - lead)).epsilon(1e-9));
}

TEST_CASE("decay in |a|") {
    // |a| >= 1: the literal 5^{|a|} p^{-|a|/2} envelope; a = 0 sits at 1 + O(1/p)
    for (u64 p = 2; p <= 100; ++p) {
        if (!is_prime(p)) continue;
        const double w = w_small(p);
        for (auto ord : {Ordering::fg, Ordering::gf}) {
            for (int a = 1; a <= 4; ++a)
                for (int sg : {-1, 1}) {
                    const double v = std::abs(local_moment_series(F(), G(), ord, p, 0.0, sg * a, w));
                    CHECK(v <= std::pow(5.0, a) * std::pow(double(p), -a / 2.0));
                }
            CHECK(std::abs(g_p(F(), G(), ord, p, 0.0, w) - 1.0) * double(p) <= 20);
        }
    }
}

TEST_CASE("cutoff V") {
    CHECK(v_cutoff(1e-8) == doctest::Approx(1).epsilon(1e-3));
    CHECK(std::abs(v_cutoff(1.0, 12, 16, 2.0) - v_cutoff(1.0, 12, 16, 2.2)) < 1e-10);
    CHECK(std::abs(v_cutoff(0.3) - v_cutoff(0.3, 12, 16, 2.0)) < 1e-10);
    double prev = 2;
    for (double xi = 0.01; xi < 1000; xi *= 1.7) {
        const double v = v_cutoff(xi);
        CHECK(v < prev);
        CHECK(v > 0);
        prev = v;
    }
}

TEST_CASE("rankin-selberg prime sum stays bounded") {
    double s = 0;
    for (u64 p = 2; p <= 10000; ++p)
        if (is_prime(p)) {
            s += (F().lambda_p(p) * F().lambda_p(p) - 1) / double(p);
            CHECK(std::abs(s) <= 3);
        }
}

TEST_CASE("random twisted L") {
    const auto plan = twisted_l_plan(F(), G(), 1.0, 1e-4);
    CHECK(plan.terms.size() > 0);
    // all X(p) = 1 gives a real value
    RandomSample ones;
    ones.primes = plan.primes;
    ones.angle.assign(plan.primes.size(), 0.0);
    CHECK(std::abs(random_twisted_L(ones, plan).imag()) < 1e-12);
    const auto mc = mc_expectation(plan.primes, [&](const RandomSample& s) { return random_twisted_L(s, plan); },
                                   2000, 5);
    CHECK(std::abs(mc.value - twisted_l_expectation(plan)) < 4 * mc.standard_error);
    CHECK_THROWS_AS(twisted_l_plan(F(), G(), 1.0, 1e-10), std::length_error);
}

TEST_CASE("weight expectation through the euler product") {
    const auto params = params_desk(10007, {0.25, 0.5});
    const auto e = expected_weight_euler(F(), G(), params);
    CHECK(std::isfinite(e.fg.real()));
    CHECK(e.fg.real() > 0);
    CHECK(std::abs(e.fg.imag()) < 1e-12);
    CHECK(std::abs(e.gf) < 0.5 * std::abs(e.fg));
    // f = g with w == 1: interval factors are 1 + O(1/p^2)
    const auto one = expected_weight_euler(F(), F(), params, 0, [](u64) { return 1.0; });
    REQUIRE(one.interval_fg.size() == params.intervals.size());
    for (std::size_t j = 0; j < params.intervals.size(); ++j) {
        double s2 = 0;
        for (u64 p : params.intervals[j].primes) s2 += 1.0 / (double(p) * double(p));
        CHECK(std::abs(std::log(std::abs(one.interval_fg[j]))) <= 3 * s2);
    }
}

}  // TEST_SUITE
