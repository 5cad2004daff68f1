#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "limloc/mc.hpp"
#include "limloc/rng.hpp"

#include <cmath>
#include <vector>

using namespace limloc;

TEST_CASE("identical seeds reproduce identical streams") {
    CounterRng a(Seed{42, 7});
    CounterRng b(Seed{42, 7});
    for (int i = 0; i < 1000; ++i) {
        CHECK(a.next_u64() == b.next_u64());
    }
    CounterRng c(Seed{42, 8});
    CounterRng d(Seed{42, 7});
    bool all_equal = true;
    for (int i = 0; i < 64; ++i)
        if (c.next_u64() != d.next_u64()) all_equal = false;
    CHECK_FALSE(all_equal);
}

TEST_CASE("uniform draws live in the right ranges") {
    CounterRng rng(Seed{1, 0});
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        const double v = rng.uniform_open();
        CHECK(v > 0.0);
        CHECK(v < 1.0);
    }
}

TEST_CASE("gaussian moments") {
    CounterRng rng(Seed{3, 0});
    const int n = 2000000;
    double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double g = rng.gauss();
        s1 += g;
        s2 += g * g;
        s3 += g * g * g;
        s4 += g * g * g * g;
    }
    const double mean = s1 / n;
    const double var = s2 / n - mean * mean;
    const double skew = s3 / n;
    const double kurt = s4 / n;
    // 3-sigma bands: se(mean) = 1/sqrt(n), se(var) ~ sqrt(2/n),
    // se(skew) ~ sqrt(15/n), se(kurt) ~ sqrt(96/n)
    CHECK(std::fabs(mean) < 3.0 / std::sqrt((double)n));
    CHECK(std::fabs(var - 1.0) < 3.0 * std::sqrt(2.0 / n));
    CHECK(std::fabs(skew) < 3.0 * std::sqrt(15.0 / n));
    CHECK(std::fabs(kurt - 3.0) < 3.0 * std::sqrt(96.0 / n));
}

TEST_CASE("gaussian cdf agreement at several quantiles") {
    CounterRng rng(Seed{6, 0});
    const int n = 1000000;
    int c05 = 0, c10 = 0, c20 = 0;
    for (int i = 0; i < n; ++i) {
        const double g = rng.gauss();
        if (g <= 0.5) ++c05;
        if (g <= 1.0) ++c10;
        if (g <= 2.0) ++c20;
    }
    // Phi(0.5)=0.691462, Phi(1)=0.841345, Phi(2)=0.977250
    auto band = [&](double p) { return 3.0 * std::sqrt(p * (1.0 - p) / n); };
    CHECK(std::fabs(c05 / (double)n - 0.691462) < band(0.691462));
    CHECK(std::fabs(c10 / (double)n - 0.841345) < band(0.841345));
    CHECK(std::fabs(c20 / (double)n - 0.977250) < band(0.977250));
}

TEST_CASE("gaussian tail mass beyond the ziggurat core") {
    CounterRng rng(Seed{4, 0});
    const int n = 2000000;
    int beyond = 0;
    for (int i = 0; i < n; ++i)
        if (std::fabs(rng.gauss()) > 3.6541528853610088) ++beyond;
    // 2*(1-Phi(3.654)) = 2.58e-4
    const double frac = static_cast<double>(beyond) / n;
    CHECK(frac > 1.5e-4);
    CHECK(frac < 4.0e-4);
}

TEST_CASE("parallel map results do not depend on the worker count") {
    const auto fn = [](std::uint64_t i) {
        CounterRng rng(Seed{55, i});
        double s = 0.0;
        for (int k = 0; k < 100; ++k) s += rng.gauss();
        return s;
    };
    const auto one = mc_map<double>(500, 1, fn);
    const auto four = mc_map<double>(500, 4, fn);
    REQUIRE(one.size() == four.size());
    for (std::size_t i = 0; i < one.size(); ++i) CHECK(one[i] == four[i]);
}

TEST_CASE("fair coin and unbiased index") {
    CounterRng rng(Seed{5, 0});
    int pos = 0;
    for (int i = 0; i < 100000; ++i)
        if (rng.coin_sign() > 0) ++pos;
    CHECK(std::fabs(pos / 100000.0 - 0.5) < 0.006);

    std::vector<int> hits(7, 0);
    for (int i = 0; i < 70000; ++i) ++hits[rng.uniform_index(7)];
    for (int h : hits) CHECK(std::fabs(h / 10000.0 - 1.0) < 0.06);
}
