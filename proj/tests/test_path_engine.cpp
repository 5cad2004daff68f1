#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "limloc/analytics.hpp"
#include "limloc/path_engine.hpp"
#include "limloc/stats.hpp"

#include <cmath>
#include <vector>

using namespace limloc;

namespace {

std::vector<double> finals(Path (*gen)(Seed, double, double), std::uint64_t root,
                           int n, double horizon, double dt) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i)
        out[i] = gen(Seed{root, static_cast<std::uint64_t>(i)}, horizon, dt)
                     .values.back();
    return out;
}

} // namespace

TEST_CASE("brownian basics") {
    const auto p = gen_brownian(Seed{1, 0}, 0.01, 0.01);
    CHECK(p.values.size() == 2);
    CHECK(p.values[0] == 0.0);
    CHECK(p.dt == 0.01);

    CHECK_THROWS_AS(gen_brownian(Seed{1, 0}, -1.0, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(gen_brownian(Seed{1, 0}, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(gen_brownian(Seed{1, 0}, 1.0 / 0.0, 0.01), std::invalid_argument);
}

TEST_CASE("brownian variance at t=1") {
    const int n = 100000;
    double s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = gen_brownian(Seed{11, (std::uint64_t)i}, 1.0, 0.01).values.back();
        s2 += x * x;
    }
    const double var = s2 / n;
    const double se = std::sqrt(2.0 / n); // Var(X^2) = 2 for standard normal
    CHECK(std::fabs(var - 1.0) <= 3.0 * se);
}

TEST_CASE("brownian increments over disjoint intervals are uncorrelated") {
    const int n = 100000;
    double sxy = 0.0, sx2 = 0.0, sy2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto p = gen_brownian(Seed{12, (std::uint64_t)i}, 2.0, 0.01);
        const double x1 = p.values[100];
        const double d = p.values[200] - p.values[100];
        sxy += x1 * d;
        sx2 += x1 * x1;
        sy2 += d * d;
    }
    const double corr = sxy / std::sqrt(sx2 * sy2);
    CHECK(std::fabs(corr) <= 3.0 / std::sqrt((double)n));
}

TEST_CASE("bridge pins both endpoints exactly") {
    for (std::uint64_t s = 0; s < 50; ++s) {
        const auto p = gen_bridge(Seed{13, s}, 1.0, 0.001);
        CHECK(p.values.front() == 0.0);
        CHECK(p.values.back() == 0.0);
    }
    CHECK_THROWS_AS(gen_bridge(Seed{13, 0}, 0.001, 0.001), std::invalid_argument);
}

TEST_CASE("bridge midpoint variance is s(T-s)/T") {
    const int n = 100000;
    double s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = gen_bridge(Seed{14, (std::uint64_t)i}, 1.0, 0.01).values[50];
        s2 += x * x;
    }
    const double var = s2 / n;
    const double se = std::sqrt(2.0 * 0.25 * 0.25 / n);
    CHECK(std::fabs(var - 0.25) <= 3.0 * se);
}

TEST_CASE("bridge scaling: duration-t bridge rescales to duration-1 marginals") {
    const int n = 10000;
    std::vector<double> a(n), b(n);
    for (int i = 0; i < n; ++i) {
        // midpoint of a duration-4 bridge, divided by sqrt(4)
        a[i] = gen_bridge(Seed{15, (std::uint64_t)i}, 4.0, 0.01).values[200] / 2.0;
        b[i] = gen_bridge(Seed{16, (std::uint64_t)i}, 1.0, 0.01).values[50];
    }
    const auto ks = ks_test_two_sample(a, b);
    CHECK(ks.p_value > 0.01);
}

TEST_CASE("bessel3 stays nonnegative and matches its second moment") {
    const int n = 100000;
    double s2 = 0.0;
    bool nonneg = true;
    for (int i = 0; i < n; ++i) {
        const auto p = gen_bessel3(Seed{17, (std::uint64_t)i}, 1.0, 0.02, 0.0);
        for (double v : p.values)
            if (v < 0.0) nonneg = false;
        s2 += p.values.back() * p.values.back();
    }
    CHECK(nonneg);
    // R_1^2 is chi^2(3): variance 6
    const double se = std::sqrt(6.0 / n);
    CHECK(std::fabs(s2 / n - 3.0) <= 3.0 * se);

    CHECK_THROWS_AS(gen_bessel3(Seed{17, 0}, 1.0, 0.01, -0.5), std::invalid_argument);
}

TEST_CASE("bessel3 euler matches the norm construction in law") {
    const int n = 10000;
    std::vector<double> a(n), b(n);
    for (int i = 0; i < n; ++i) {
        a[i] = gen_bessel3(Seed{18, (std::uint64_t)i}, 1.0, 0.001, 1.0,
                           Bessel3Method::norm3d)
                   .values.back();
        b[i] = gen_bessel3(Seed{19, (std::uint64_t)i}, 1.0, 0.001, 1.0,
                           Bessel3Method::euler)
                   .values.back();
    }
    const auto ks = ks_test_two_sample(a, b);
    CHECK(ks.p_value > 0.01);
}

TEST_CASE("bessel3 euler from zero starts with a norm step and stays positive") {
    const auto p = gen_bessel3(Seed{20, 4}, 0.5, 0.001, 0.0, Bessel3Method::euler);
    CHECK(p.values[0] == 0.0);
    for (std::size_t k = 1; k < p.values.size(); ++k) CHECK(p.values[k] > 0.0);
}

TEST_CASE("bessel3 bridge pins endpoints and keeps interior positive") {
    const int n = 100000;
    double s2 = 0.0;
    bool interior_pos = true;
    for (int i = 0; i < 200; ++i) {
        const auto p = gen_bessel3_bridge(Seed{21, (std::uint64_t)i}, 1.0, 0.001);
        CHECK(p.values.front() == 0.0);
        CHECK(p.values.back() == 0.0);
        for (std::size_t k = 1; k + 1 < p.values.size(); ++k)
            if (p.values[k] <= 0.0) interior_pos = false;
    }
    CHECK(interior_pos);
    for (int i = 0; i < n; ++i) {
        const double mid =
            gen_bessel3_bridge(Seed{22, (std::uint64_t)i}, 1.0, 0.02).values[25];
        s2 += mid * mid;
    }
    // sum of three bridge squares, each with variance 1/4 at the midpoint
    const double se = std::sqrt(6.0 * 0.25 * 0.25 / n);
    CHECK(std::fabs(s2 / n - 0.75) <= 3.0 * se);
}

TEST_CASE("brownian scaling invariance of the marginal law") {
    const int n = 10000;
    std::vector<double> a(n), b(n);
    for (int i = 0; i < n; ++i) {
        a[i] = gen_brownian(Seed{23, (std::uint64_t)i}, 4.0, 0.01).values.back() / 2.0;
        b[i] = gen_brownian(Seed{24, (std::uint64_t)i}, 1.0, 0.01).values.back();
    }
    const auto ks = ks_test_two_sample(a, b);
    CHECK(ks.p_value > 0.01);
}

TEST_CASE("bessel3 stochastically dominates the reflected marginal") {
    const int n = 10000;
    std::vector<double> bes(n), half(n);
    for (int i = 0; i < n; ++i) {
        bes[i] = gen_bessel3(Seed{25, (std::uint64_t)i}, 1.0, 0.01, 0.0).values.back();
        half[i] = std::fabs(gen_brownian(Seed{26, (std::uint64_t)i}, 1.0, 0.01)
                                .values.back());
    }
    // dominance means F_bessel <= F_halfnormal; the one-sided statistic
    // sup(F_bessel - F_half) should be consistent with zero
    const auto ks = ks_test_dominates(bes, half);
    CHECK(ks.p_value > 0.01);
    // and the reverse gap is macroscopic
    const auto rev = ks_test_dominates(half, bes);
    CHECK(rev.p_value < 1e-6);
}

TEST_CASE("determinism: identical seeds give identical paths and csv") {
    const auto a = gen_brownian(Seed{42, 4242}, 1.0, 0.001);
    const auto b = gen_brownian(Seed{42, 4242}, 1.0, 0.001);
    REQUIRE(a.values.size() == b.values.size());
    for (std::size_t k = 0; k < a.values.size(); ++k)
        CHECK(a.values[k] == b.values[k]);
    CHECK(path_to_csv(a) == path_to_csv(b));

    const auto c = gen_brownian(Seed{42, 4243}, 1.0, 0.001);
    CHECK(path_to_csv(a) != path_to_csv(c));
}

TEST_CASE("csv format") {
    Path p;
    p.dt = 0.5;
    p.origin = 0.0;
    p.values = {0.0, 1.25, -0.5};
    const auto csv = path_to_csv(p);
    CHECK(csv.substr(0, 4) == "t,x\n");
    CHECK(csv.find("0.5,1.25\n") != std::string::npos);
    CHECK(csv.find("1,-0.5\n") != std::string::npos);
}
