#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "limloc/excursions.hpp"
#include "limloc/path_engine.hpp"
#include "limloc/stats.hpp"

#include <cmath>
#include <vector>

using namespace limloc;

TEST_CASE("nu tail closed form") {
    CHECK(nu_tail(2.0 / M_PI) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(nu_tail(8.0 / M_PI) == doctest::Approx(0.5).epsilon(1e-12));
    double prev = nu_tail(0.1);
    for (double t = 0.2; t < 100.0; t *= 1.7) {
        const double v = nu_tail(t);
        CHECK(v < prev);
        prev = v;
    }
    CHECK_THROWS_AS(nu_tail(0.0), std::invalid_argument);
}

TEST_CASE("extraction invariants on random paths") {
    for (std::uint64_t s = 0; s < 50; ++s) {
        const auto p = gen_brownian(Seed{41, s}, 1.0, 0.001);
        const auto prof = occupation_estimate(p, default_bandwidth(0.001));
        const auto set = extract(p, prof, 0.0);
        std::ptrdiff_t prev_end_idx = -1;
        double prev_level = -1.0;
        for (const auto& e : set.excursions) {
            const auto a = static_cast<std::ptrdiff_t>(std::llround(e.start / p.dt));
            const auto b = a + static_cast<std::ptrdiff_t>(e.samples.size()) - 1;
            CHECK(a >= prev_end_idx); // half-open intervals share endpoints only
            prev_end_idx = b;
            CHECK(e.level >= prev_level);
            CHECK(e.duration ==
                  doctest::Approx(p.dt * (e.samples.size() - 1)).epsilon(1e-12));
            CHECK(e.samples.front() == 0.0);
            // interior has the recorded sign throughout
            for (std::size_t k = 1; k + 1 < e.samples.size(); ++k) {
                if (e.sign > 0) CHECK(e.samples[k] > 0.0);
                else CHECK(e.samples[k] < 0.0);
            }
        }
    }
}

TEST_CASE("a path with no interior zeros is a single excursion") {
    const auto p = gen_bessel3(Seed{42, 7}, 1.0, 0.001, 0.0);
    const auto prof = occupation_estimate(p, default_bandwidth(0.001));
    const auto set = extract(p, prof, 0.0);
    REQUIRE(set.excursions.size() == 1);
    CHECK(set.excursions[0].start == 0.0);
    CHECK(set.excursions[0].duration == doctest::Approx(1.0));
    CHECK_FALSE(set.excursions[0].complete());
}

TEST_CASE("reconstruct of the empty set is the zero path") {
    ExcursionSet set;
    set.dt = 0.01;
    set.closure = 1.0;
    const auto p = reconstruct(set);
    CHECK(p.values.size() == 101);
    for (double v : p.values) CHECK(v == 0.0);
}

TEST_CASE("reconstruct rejects overlapping excursions") {
    ExcursionSet set;
    set.dt = 0.1;
    set.closure = 2.0;
    Excursion a;
    a.start = 0.0;
    a.duration = 0.5;
    a.samples = {0.0, 1.0, 1.0, 1.0, 1.0, 0.0};
    Excursion b = a;
    b.start = 0.3; // overlaps a's interior
    set.excursions = {a, b};
    CHECK_THROWS(reconstruct(set));
}

TEST_CASE("round trip: reconstruct after extract reproduces the path") {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto p = gen_brownian(Seed{43, s}, 1.0, 0.001);
        const auto prof = occupation_estimate(p, default_bandwidth(0.001));
        const auto set = extract(p, prof, 0.0);
        const auto rebuilt = reconstruct(set);
        REQUIRE(rebuilt.values.size() == p.values.size());
        std::vector<char> is_mark(p.values.size(), 0);
        for (auto m : zero_marks(p)) is_mark[m] = 1;
        for (std::size_t k = 0; k < p.values.size(); ++k) {
            if (is_mark[k]) CHECK(rebuilt.values[k] == 0.0);
            else CHECK(rebuilt.values[k] == p.values[k]);
        }
    }
}

TEST_CASE("round trip: extract after reconstruct returns the same pieces") {
    const auto p = gen_brownian(Seed{44, 3}, 1.0, 0.001);
    const auto prof = occupation_estimate(p, default_bandwidth(0.001));
    const auto set = extract(p, prof, 0.0);
    const auto rebuilt = reconstruct(set);
    const auto prof2 = occupation_estimate(rebuilt, default_bandwidth(0.001));
    const auto set2 = extract(rebuilt, prof2, 0.0);
    REQUIRE(set2.excursions.size() == set.excursions.size());
    for (std::size_t i = 0; i < set.excursions.size(); ++i) {
        CHECK(set2.excursions[i].start == set.excursions[i].start);
        CHECK(set2.excursions[i].duration == set.excursions[i].duration);
        CHECK(set2.excursions[i].sign == set.excursions[i].sign);
        CHECK(set2.excursions[i].samples == set.excursions[i].samples);
    }
}

TEST_CASE("extraction count matches the counting estimator's jumps") {
    const double dt = 1e-3, delta = 0.01;
    const auto p = gen_brownian(Seed{45, 9}, 1.0, dt);
    const auto prof = occupation_estimate(p, default_bandwidth(dt));
    const auto set = extract(p, prof, delta);
    std::size_t completed = 0;
    for (const auto& e : set.excursions)
        if (e.complete()) ++completed;
    const auto counting = excursion_count_estimate(p, delta);
    const double unit = std::sqrt(M_PI * delta / 2.0);
    CHECK(counting.final_value() ==
          doctest::Approx(unit * static_cast<double>(completed)).epsilon(1e-9));
}

TEST_CASE("counts per unit of local time have the right mean") {
    // ~Poisson with mean sqrt(2/(pi delta)); moderate scale here, the full
    // mean/variance check runs in the acceptance suite
    const double dt = 1e-3, delta = 0.02, eps = std::sqrt(dt);
    const double nu = nu_tail(delta);
    const int n = 2000;
    const double sd = std::sqrt(dt);
    const double inc = dt / (2.0 * eps);
    std::vector<double> counts(n);
    for (int i = 0; i < n; ++i) {
        CounterRng rng(Seed{46, (std::uint64_t)i});
        double xp = 0.0, L = 0.0, count = 0.0;
        std::uint64_t last_mark = 0;
        bool counted = false, crossed = false;
        std::uint64_t k_cross = 0;
        const auto delta_steps = static_cast<std::uint64_t>(std::llround(delta / dt));
        for (std::uint64_t k = 1; k <= 2000000; ++k) {
            const double x = xp + sd * rng.gauss();
            std::uint64_t mark = 0;
            bool has_mark = false;
            if (x == 0.0) { mark = k; has_mark = true; }
            else if (xp * x < 0.0) {
                mark = (std::fabs(xp) <= std::fabs(x)) ? k - 1 : k;
                has_mark = true;
            }
            if (has_mark && mark > last_mark) { last_mark = mark; counted = false; }
            if (!counted && k - last_mark >= delta_steps + 1) {
                if (!crossed || last_mark <= k_cross) count += 1.0;
                counted = true;
            }
            if (std::fabs(x) <= eps) L += inc;
            if (!crossed && L > 1.0) { crossed = true; k_cross = k; }
            if (crossed && (counted || last_mark > k_cross)) break;
            xp = x;
        }
        counts[i] = count;
    }
    const double m = mean(counts);
    const double se = stderr_of_mean(counts);
    // band loosened by one extra se for the band-estimator and censoring bias
    CHECK(std::fabs(m - nu) <= 4.0 * se);
}

TEST_CASE("conditioned excursion: fair sign and duration law") {
    const int n = 10000;
    const double min_dur = 1.0, horizon = 100.0, dt = 0.01;
    int pos = 0;
    std::vector<double> durations(n);
    for (int i = 0; i < n; ++i) {
        const auto e = sample_conditioned_excursion(Seed{47, (std::uint64_t)i},
                                                    min_dur, horizon, dt);
        if (e.sign > 0) ++pos;
        durations[i] = e.duration;
        CHECK(e.samples.front() == 0.0);
        CHECK(e.samples.back() == 0.0);
    }
    const double se = std::sqrt(0.25 / n);
    CHECK(std::fabs(pos / static_cast<double>(n) - 0.5) <= 3.0 * se);

    const double a = 1.0 / std::sqrt(min_dur), b = 1.0 / std::sqrt(horizon);
    const auto cdf = [&](double s) {
        return (a - 1.0 / std::sqrt(s)) / (a - b);
    };
    CHECK(ks_test(durations, cdf, "truncated duration law").p_value > 0.01);
}

TEST_CASE("long conditioned excursion looks like a Bessel(3) early on") {
    const int n = 4000;
    const double dt = 0.05;
    std::vector<double> exc(n), bes(n);
    const auto k1 = static_cast<std::size_t>(std::llround(1.0 / dt));
    for (int i = 0; i < n; ++i) {
        const auto e = sample_conditioned_excursion(Seed{48, (std::uint64_t)i},
                                                    200.0, 400.0, dt);
        exc[i] = std::fabs(e.samples[k1]);
        bes[i] = gen_bessel3(Seed{49, (std::uint64_t)i}, 1.0, dt, 0.0).values.back();
    }
    CHECK(ks_test_two_sample(exc, bes).p_value > 0.01);
}

TEST_CASE("splicing a long excursion at a chosen level pins the total local time") {
    const double dt = 1e-3, eps = default_bandwidth(dt);
    const double u = 0.37;
    const auto p = gen_brownian(Seed{50, 1}, 400.0, dt);
    const auto prof = occupation_estimate(p, eps);
    REQUIRE(prof.final_value() > u);
    const auto tau = inverse_local_time(prof, u);
    REQUIRE(tau.has_value());

    // keep everything before the crossing, then splice one long excursion
    const auto set = extract(p, prof, 0.0);
    ExcursionSet spliced;
    spliced.dt = dt;
    auto tail = sample_conditioned_excursion(Seed{51, 2}, 50.0, 400.0, dt);
    for (const auto& e : set.excursions) {
        if (e.start + e.duration <= *tau + 1e-12) spliced.excursions.push_back(e);
    }
    tail.start = *tau;
    tail.level = u;
    spliced.excursions.push_back(tail);
    spliced.closure = *tau + tail.duration;

    const auto rebuilt = reconstruct(spliced);
    const auto rebuilt_prof = occupation_estimate(rebuilt, eps);
    // total local time equals the chosen level up to the estimator's step
    CHECK(std::fabs(rebuilt_prof.final_value() - u) < 0.1);
}

TEST_CASE("json serialization of excursion sets") {
    const auto p = gen_brownian(Seed{52, 1}, 0.1, 0.01);
    const auto prof = occupation_estimate(p, default_bandwidth(0.01));
    const auto set = extract(p, prof, 0.0);
    const auto js = excursion_set_to_json(set);
    CHECK(js.find("\"excursions\"") != std::string::npos);
    CHECK(js.find("\"level\"") != std::string::npos);
    CHECK(js.find("\"samples\"") != std::string::npos);
}
