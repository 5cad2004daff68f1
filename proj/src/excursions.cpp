#include "limloc/excursions.hpp"

#include "limloc/path_engine.hpp"

#include <json.hpp>

#include <cmath>
#include <stdexcept>

namespace limloc {

ExcursionSet extract(const Path& path, const LocalTimeProfile& profile, double delta) {
    if (profile.values.size() != path.values.size() || profile.dt != path.dt)
        throw std::invalid_argument("extract: profile grid does not match path grid");
    if (!(delta >= 0.0))
        throw std::invalid_argument("extract: delta must be >= 0");

    ExcursionSet set;
    set.dt = path.dt;
    set.closure = path.horizon();

    auto marks = zero_marks(path);
    const std::size_t last = path.values.size() - 1;
    if (marks.empty() || marks.front() != 0) marks.insert(marks.begin(), 0);
    const bool open_tail = marks.back() != last;
    if (open_tail) marks.push_back(last);

    for (std::size_t i = 0; i + 1 < marks.size(); ++i) {
        const std::size_t a = marks[i], b = marks[i + 1];
        const bool cut = (i + 2 == marks.size()) && open_tail;
        if (!cut && b <= a + 1) continue; // adjacent zeros, no interior
        Excursion e;
        e.start = path.time(a);
        e.duration = path.dt * static_cast<double>(b - a);
        if (!(e.duration > delta)) continue;
        e.level = profile.values[a];
        e.samples.assign(path.values.begin() + static_cast<std::ptrdiff_t>(a),
                         path.values.begin() + static_cast<std::ptrdiff_t>(b + 1));
        e.samples.front() = 0.0;
        if (!cut) e.samples.back() = 0.0;
        double peak = 0.0;
        for (std::size_t k = 1; k + 1 < e.samples.size(); ++k)
            if (std::fabs(e.samples[k]) > std::fabs(peak)) peak = e.samples[k];
        if (peak == 0.0 && cut) peak = e.samples.back();
        e.sign = peak < 0.0 ? -1 : +1;
        set.excursions.push_back(std::move(e));
    }
    return set;
}

double nu_tail(double t) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw std::invalid_argument("nu_tail: t must be > 0");
    return std::sqrt(2.0 / (M_PI * t));
}

Path reconstruct(const ExcursionSet& set) {
    if (!(set.dt > 0.0))
        throw std::invalid_argument("reconstruct: set has no grid");
    const std::size_t n = grid_steps(std::max(set.closure, set.dt), set.dt);
    Path p;
    p.dt = set.dt;
    p.origin = 0.0;
    p.values.assign(n + 1, 0.0);

    std::size_t written_to = 0; // exclusive end of the last interior written
    double prev_level = -1.0;
    for (const auto& e : set.excursions) {
        const auto a = static_cast<std::size_t>(std::llround(e.start / set.dt));
        const std::size_t b = a + e.samples.size() - 1;
        if (e.samples.size() < 2 || b > n)
            throw std::runtime_error("reconstruct: excursion exceeds closure");
        if (a + 1 < written_to)
            throw std::runtime_error("reconstruct: overlapping excursions");
        if (e.level < prev_level)
            throw std::runtime_error("reconstruct: levels not nondecreasing");
        prev_level = e.level;
        for (std::size_t k = 0; k < e.samples.size(); ++k)
            p.values[a + k] = e.samples[k];
        written_to = b + 1;
    }
    return p;
}

Excursion sample_conditioned_excursion(Seed seed, double min_duration,
                                       double horizon, double dt) {
    if (!(min_duration > 0.0))
        throw std::invalid_argument("sample_conditioned_excursion: min_duration must be > 0");
    if (!(horizon > min_duration))
        throw std::invalid_argument("sample_conditioned_excursion: horizon must exceed min_duration");

    CounterRng rng(seed);
    // duration density ~ s^{-3/2} on (min_duration, horizon): invert
    // F(s) = (a - s^{-1/2}) / (a - b), a = min^{-1/2}, b = horizon^{-1/2}.
    const double a = 1.0 / std::sqrt(min_duration);
    const double b = 1.0 / std::sqrt(horizon);
    const double u = rng.uniform_open();
    const double inv_sqrt = a - u * (a - b);
    double duration = 1.0 / (inv_sqrt * inv_sqrt);
    const auto steps = static_cast<std::size_t>(
        std::max<long long>(2, std::llround(duration / dt)));
    duration = dt * static_cast<double>(steps);
    const int sign = rng.coin_sign();

    Path bridge = gen_bessel3_bridge(Seed{seed.root, seed.stream ^ 0x65786375ULL},
                                     duration, dt);
    Excursion e;
    e.level = 0.0;
    e.start = 0.0;
    e.duration = duration;
    e.sign = sign;
    e.samples = std::move(bridge.values);
    if (sign < 0)
        for (auto& v : e.samples) v = -v;
    return e;
}

std::string excursion_set_to_json(const ExcursionSet& set) {
    nlohmann::json j;
    j["dt"] = set.dt;
    j["closure"] = set.closure;
    auto arr = nlohmann::json::array();
    for (const auto& e : set.excursions) {
        nlohmann::json je;
        je["level"] = e.level;
        je["start"] = e.start;
        je["duration"] = e.duration;
        je["sign"] = e.sign;
        je["samples"] = e.samples;
        arr.push_back(std::move(je));
    }
    j["excursions"] = std::move(arr);
    return j.dump();
}

} // namespace limloc
