#include "limloc/path_engine.hpp"

#include <cmath>
#include <stdexcept>

namespace limloc {

namespace {

void check_params(double horizon, double dt, double min_horizon) {
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw std::invalid_argument("dt must be positive and finite");
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw std::invalid_argument("horizon must be positive and finite");
    if (horizon < min_horizon)
        throw std::invalid_argument("horizon too short for this grid");
}

} // namespace

Path gen_brownian(Seed seed, double horizon, double dt) {
    check_params(horizon, dt, dt);
    const std::size_t n = grid_steps(horizon, dt);
    const double sd = std::sqrt(dt);

    CounterRng rng(seed);
    Path p;
    p.dt = dt;
    p.origin = 0.0;
    p.values.resize(n + 1);
    p.values[0] = 0.0;
    for (std::size_t k = 1; k <= n; ++k)
        p.values[k] = p.values[k - 1] + sd * rng.gauss();
    return p;
}

Path gen_bridge(Seed seed, double duration, double dt) {
    check_params(duration, dt, 2.0 * dt);
    Path p = gen_brownian(seed, duration, dt);
    const std::size_t n = p.steps();
    const double wn = p.values[n];
    for (std::size_t k = 1; k < n; ++k)
        p.values[k] -= wn * (static_cast<double>(k) / static_cast<double>(n));
    p.values[n] = 0.0;
    return p;
}

Path gen_bessel3(Seed seed, double horizon, double dt, double start,
                 Bessel3Method method) {
    check_params(horizon, dt, dt);
    if (!(start >= 0.0) || !std::isfinite(start))
        throw std::invalid_argument("gen_bessel3: start must be >= 0");

    const std::size_t n = grid_steps(horizon, dt);
    const double sd = std::sqrt(dt);

    CounterRng rng(seed);
    Path p;
    p.dt = dt;
    p.origin = start;
    p.values.resize(n + 1);
    p.values[0] = start;

    if (method == Bessel3Method::norm3d) {
        double w1 = start, w2 = 0.0, w3 = 0.0;
        for (std::size_t k = 1; k <= n; ++k) {
            w1 += sd * rng.gauss();
            w2 += sd * rng.gauss();
            w3 += sd * rng.gauss();
            p.values[k] = std::sqrt(w1 * w1 + w2 * w2 + w3 * w3);
        }
        return p;
    }

    std::size_t k0 = 1;
    double r = start;
    if (start == 0.0) {
        const double g1 = rng.gauss(), g2 = rng.gauss(), g3 = rng.gauss();
        r = sd * std::sqrt(g1 * g1 + g2 * g2 + g3 * g3);
        p.values[1] = r;
        k0 = 2;
    }
    for (std::size_t k = k0; k <= n; ++k) {
        r = std::fabs(r + sd * rng.gauss() + dt / r);
        p.values[k] = r;
    }
    return p;
}

Path gen_bessel3_bridge(Seed seed, double duration, double dt) {
    check_params(duration, dt, 2.0 * dt);
    const std::size_t n = grid_steps(duration, dt);
    const double sd = std::sqrt(dt);

    CounterRng rng(seed);
    std::vector<double> b1(n + 1, 0.0), b2(n + 1, 0.0), b3(n + 1, 0.0);
    for (std::size_t k = 1; k <= n; ++k) {
        b1[k] = b1[k - 1] + sd * rng.gauss();
        b2[k] = b2[k - 1] + sd * rng.gauss();
        b3[k] = b3[k - 1] + sd * rng.gauss();
    }
    Path p;
    p.dt = dt;
    p.origin = 0.0;
    p.values.resize(n + 1);
    p.values[0] = 0.0;
    p.values[n] = 0.0;
    const double e1 = b1[n], e2 = b2[n], e3 = b3[n];
    for (std::size_t k = 1; k < n; ++k) {
        const double f = static_cast<double>(k) / static_cast<double>(n);
        const double x1 = b1[k] - f * e1;
        const double x2 = b2[k] - f * e2;
        const double x3 = b3[k] - f * e3;
        p.values[k] = std::sqrt(x1 * x1 + x2 * x2 + x3 * x3);
    }
    return p;
}

} // namespace limloc
