#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "limloc/rng.hpp"
#include "limloc/stats.hpp"

#include <cmath>
#include <vector>

using namespace limloc;

namespace {
double ucdf(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }
} // namespace

TEST_CASE("ks statistic by hand") {
    const auto r = ks_test({0.25, 0.5, 0.75}, ucdf, "uniform");
    CHECK(r.d == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(r.n == 3);
    CHECK_THROWS_AS(ks_test({}, ucdf, "uniform"), std::invalid_argument);
}

TEST_CASE("ks statistic at perfectly placed quantiles") {
    const int n = 40;
    std::vector<double> sample(n);
    for (int i = 0; i < n; ++i)
        sample[i] = (static_cast<double>(i) + 0.5) / n;
    const auto r = ks_test(sample, ucdf, "uniform");
    CHECK(r.d == doctest::Approx(1.0 / (2.0 * n)).epsilon(1e-12));
}

TEST_CASE("large deviations get vanishing p-values") {
    CHECK(kolmogorov_tail(3.0) < 1e-6);
    CHECK(kolmogorov_tail(0.0) == 1.0);
    CHECK(kolmogorov_tail(0.5) > 0.9);
    // shifted sample: sqrt(n) D well above 3
    std::vector<double> sample(400);
    for (int i = 0; i < 400; ++i) sample[i] = 0.5 + 0.5 * (i + 0.5) / 400.0;
    const auto r = ks_test(sample, ucdf, "uniform");
    CHECK(std::sqrt(400.0) * r.d >= 3.0);
    CHECK(r.p_value < 1e-6);
}

TEST_CASE("ks p-values are roughly uniform under the null") {
    int reject = 0;
    const int reps = 200, n = 1000;
    for (int rep = 0; rep < reps; ++rep) {
        CounterRng rng(Seed{71, (std::uint64_t)rep});
        std::vector<double> sample(n);
        for (int i = 0; i < n; ++i) sample[i] = rng.uniform();
        if (ks_test(sample, ucdf, "uniform").p_value < 0.05) ++reject;
    }
    const double frac = static_cast<double>(reject) / reps;
    CHECK(frac >= 0.01);
    CHECK(frac <= 0.12);
}

TEST_CASE("two-sample ks separates shifted laws and accepts equal ones") {
    CounterRng rng(Seed{72, 0});
    std::vector<double> a(3000), b(3000), c(3000);
    for (int i = 0; i < 3000; ++i) {
        a[i] = rng.gauss();
        b[i] = rng.gauss();
        c[i] = rng.gauss() + 0.5;
    }
    CHECK(ks_test_two_sample(a, b).p_value > 0.01);
    CHECK(ks_test_two_sample(a, c).p_value < 1e-10);
}

TEST_CASE("exponent fit recovers exact power laws") {
    std::vector<ScalingPoint> points;
    for (double t : {16.0, 32.0, 64.0, 128.0, 256.0})
        points.push_back({t, 3.0 / std::sqrt(t), 0.01 * 3.0 / std::sqrt(t)});
    const auto fit = fit_exponent(points);
    CHECK(std::fabs(fit.slope + 0.5) < 1e-12);

    std::vector<ScalingPoint> flat;
    for (double t : {16.0, 32.0, 64.0, 128.0})
        flat.push_back({t, 7.0, 0.07});
    CHECK(std::fabs(fit_exponent(flat).slope) < 1e-12);

    CHECK_THROWS_AS(fit_exponent({{1.0, 1.0, 0.1}, {2.0, 0.5, 0.1}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(fit_exponent({{1.0, 1.0, 0.1}, {2.0, -0.5, 0.1}, {4.0, 0.2, 0.1}}),
                    std::invalid_argument);
}

TEST_CASE("exponent fit is affine equivariant") {
    std::vector<ScalingPoint> a, b;
    CounterRng rng(Seed{73, 0});
    for (double t : {10.0, 100.0, 1000.0, 1e4}) {
        const double est = (1.0 + 0.05 * rng.gauss()) / std::sqrt(t);
        a.push_back({t, est, 0.05 * est});
        b.push_back({t, 7.0 * est, 7.0 * 0.05 * est});
    }
    CHECK(std::fabs(fit_exponent(a).slope - fit_exponent(b).slope) < 1e-12);
}

TEST_CASE("exponent fit coverage on synthetic data") {
    int covered = 0;
    const int reps = 1000;
    for (int rep = 0; rep < reps; ++rep) {
        CounterRng rng(Seed{74, (std::uint64_t)rep});
        std::vector<ScalingPoint> points;
        for (double t : {10.0, 100.0, 1000.0, 1e4, 1e5}) {
            const double sigma = 0.03;
            const double est = std::exp(std::log(1.0 / std::sqrt(t)) +
                                        sigma * rng.gauss());
            points.push_back({t, est, sigma * est});
        }
        const auto fit = fit_exponent(points);
        if (std::fabs(fit.slope + 0.5) <= 2.0 * fit.slope_stderr) ++covered;
    }
    CHECK(covered >= static_cast<int>(0.93 * reps));
}

TEST_CASE("dominance test directions") {
    CounterRng rng(Seed{75, 0});
    std::vector<double> a(500), b(500), shifted(500);
    for (int i = 0; i < 500; ++i) {
        a[i] = rng.gauss();
        b[i] = a[i];
        shifted[i] = a[i] + 1.0;
    }
    CHECK(dominance_test(a, b, Direction::a_le_b).verdict == Verdict::pass);
    CHECK(dominance_test(a, b, Direction::a_ge_b).verdict == Verdict::pass);
    CHECK(dominance_test(a, shifted, Direction::a_le_b).verdict == Verdict::pass);
    CHECK(dominance_test(a, shifted, Direction::a_ge_b).verdict == Verdict::fail);

    // below the verdict floor everything is inconclusive
    std::vector<double> tiny(20, 1.0), tiny2(20, 2.0);
    CHECK(dominance_test(tiny, tiny2, Direction::a_ge_b).verdict ==
          Verdict::inconclusive);
}

TEST_CASE("reports serialize with stable fields") {
    MCReport rep;
    rep.label = "demo";
    rep.estimate = 0.5;
    rep.stderr_ = 0.01;
    rep.n = 1000;
    rep.seed_root = 42;
    rep.verdict = Verdict::pass;
    rep.threshold = 0.03;
    const auto js = rep.to_json();
    CHECK(js.find("\"estimate\":0.5") != std::string::npos);
    CHECK(js.find("\"label\":\"demo\"") != std::string::npos);
    CHECK(js.find("\"n\":1000") != std::string::npos);
    CHECK(js.find("\"seed_root\":42") != std::string::npos);
    CHECK(js.find("\"verdict\":\"pass\"") != std::string::npos);
    CHECK(js.find("\"threshold\":0.03") != std::string::npos);

    KSResult ks;
    ks.d = 0.1;
    ks.n = 50;
    ks.p_value = 0.7;
    ks.reference = "uniform";
    CHECK(ks.to_json().find("\"reference\":\"uniform\"") != std::string::npos);
}
