#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "gen.hpp"
#include "molliclt/dirichlet_l.hpp"

using namespace molliclt;

TEST_SUITE("dirichlet_l") {

TEST_CASE("oracle at s = 2 against the direct series") {
    const auto t = build_table(3);
    const auto L = l_values_oracle(t, 2.0);
    double direct = 0;
    for (u64 n = 3'000'000; n >= 1; --n) direct += chi(t, 1, n).real() / (double(n) * double(n));
    CHECK(std::abs(L.values[1] - direct) < 1e-9);
    CHECK(std::abs(L.values[1].real() - 0.78130241289648629) < 1e-12);
}

TEST_CASE("root numbers") {
    const auto t5 = build_table(5);
    CHECK(std::abs(root_number(t5, 2) - 1.0) < 1e-12);
    const auto t3 = build_table(3);
    CHECK(std::abs(root_number(t3, 1) - 1.0) < 1e-12);
    const auto t = build_table(1009);
    const auto eps = root_numbers(t);
    for (u64 a = 1; a < t.order(); ++a) CHECK(std::abs(std::abs(eps[a]) - 1) < 1e-12);
}

TEST_CASE("quadratic character mod 5 at 1/2 by both methods") {
    const auto t = build_table(5);
    CHECK(std::abs(afe_l_value(t, 2, 0.5) - l_values_oracle(t, 0.5).values[2]) < 1e-8);
}

TEST_CASE("oracle and afe agree, residuals small") {
    for (u64 q : {101, 1009}) {
        const auto t = build_table(q);
        const auto o = l_values_oracle(t, 0.5);
        const auto a = l_values_afe(t, 0.5);
        double d = 0;
        for (u64 k = 1; k < t.order(); ++k) d = std::max(d, std::abs(o.values[k] - a.values[k]));
        CHECK(d < 1e-8);
        CHECK(o.residual_max < 1e-8);
        CHECK(a.residual_max < 1e-8);
    }
}

TEST_CASE("conjugate characters give conjugate values at real s") {
    const auto t = build_table(1009);
    for (double s : {0.5, 0.45, 0.6}) {
        const auto L = l_values_afe(t, s);
        for (u64 a = 1; a < t.order(); ++a)
            CHECK(std::abs(L.values[t.conj_index(a)] - std::conj(L.values[a])) < 1e-10);
    }
}

TEST_CASE("afe is independent of the split point") {
    testgen::Gen gen(6);
    const auto t = build_table(1009);
    for (int i = 0; i < 30; ++i) {
        const u64 a = gen.range(1, t.order() - 1);
        const cplx s(0.5 + gen.uniform(-0.05, 0.05), gen.uniform(-0.05, 0.05));
        CHECK(std::abs(afe_l_value(t, a, s, 1.0) - afe_l_value(t, a, s, gen.uniform(0.6, 1.6))) < 1e-9);
    }
}

TEST_CASE("afe rejects the principal character and far shifts") {
    const auto t = build_table(11);
    CHECK_THROWS(afe_l_value(t, 0, 0.5));
    CHECK_THROWS(afe_l_value(t, 1, 0.8));
}

TEST_CASE("cache round trip, header size 32") {
    const auto t = build_table(101);
    const auto L = l_values_oracle(t, 0.5);
    const auto path = std::filesystem::temp_directory_path() / "molliclt_cache_test.bin";
    write_l_cache(path, L);
    CHECK(std::filesystem::file_size(path) == 32 + (t.order() - 1) * 20);
    const auto back = read_l_cache(path);
    CHECK(back.q == 101);
    CHECK(back.s == cplx(0.5));
    for (u64 a = 1; a < t.order(); ++a) CHECK(back.values[a] == L.values[a]);
    std::ofstream(path, std::ios::binary) << "junk";
    CHECK_THROWS(read_l_cache(path));
    std::filesystem::remove(path);
}

TEST_CASE("twisted second moment: trivial cases") {
    const auto t = build_table(101);
    CHECK(twisted_second_moment_empirical(t, 0.0, 0.0, std::vector<double>(5, 0.0)) == cplx(0));
    const auto v = twisted_second_moment_empirical(t, 0.0, 0.0, {0.0, 1.0});
    CHECK(std::abs(v.imag()) < 1e-12);
    CHECK(v.real() > 0);
}

TEST_CASE("twisted second moment near its main terms at q = 10007") {
    const auto t = build_table(10007);
    const std::vector<double> x{0.0, 1.0};
    const cplx emp = twisted_second_moment_empirical(t, 0.0, 0.0, x);
    const cplx main = twisted_second_moment_main_terms(t.q, 0.0, 0.0, x);
    MESSAGE("empirical ", emp.real(), " main ", main.real());
    CHECK(std::abs(emp - main) < 10 / std::sqrt(10007.0) * 1);
}

}  // TEST_SUITE
