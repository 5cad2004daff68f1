#include "limloc/local_time.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace limloc {

double LocalTimeProfile::at_time(double t) const {
    if (values.empty()) return 0.0;
    if (t < 0.0) throw std::invalid_argument("profile time must be >= 0");
    auto k = static_cast<std::size_t>(std::floor(t / dt + 1e-9));
    if (k >= values.size())
        throw std::invalid_argument("time outside profile range");
    return values[k];
}

LocalTimeProfile occupation_estimate(const Path& path, double epsilon) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw std::invalid_argument("occupation_estimate: epsilon must be > 0");
    LocalTimeProfile p;
    p.dt = path.dt;
    p.estimator = LocalTimeEstimator::occupation;
    p.bandwidth = epsilon;
    p.values.resize(path.values.size());
    if (p.values.empty()) return p;
    p.values[0] = 0.0;
    const double inc = path.dt / (2.0 * epsilon);
    for (std::size_t k = 1; k < path.values.size(); ++k) {
        p.values[k] = p.values[k - 1] +
            (std::fabs(path.values[k]) <= epsilon ? inc : 0.0);
    }
    return p;
}

std::vector<std::size_t> zero_marks(const Path& path) {
    std::vector<std::size_t> marks;
    const auto& v = path.values;
    const std::size_t n = v.size();
    for (std::size_t k = 0; k < n; ++k) {
        if (v[k] == 0.0) {
            marks.push_back(k);
            continue;
        }
        if (k + 1 < n && v[k] * v[k + 1] < 0.0) {
            // snap to the endpoint nearer the linear-interpolated crossing
            const std::size_t m = (std::fabs(v[k]) <= std::fabs(v[k + 1])) ? k : k + 1;
            if (marks.empty() || marks.back() != m) marks.push_back(m);
        }
    }
    marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
    return marks;
}

std::vector<std::size_t> zero_marks_with_crossing(const Path& path, Seed seed) {
    CounterRng rng(seed);
    std::vector<std::size_t> marks;
    const auto& v = path.values;
    const std::size_t n = v.size();
    for (std::size_t k = 0; k < n; ++k) {
        if (v[k] == 0.0) {
            if (marks.empty() || marks.back() != k) marks.push_back(k);
            continue;
        }
        if (k + 1 >= n) break;
        const double prod = v[k] * v[k + 1];
        std::size_t m = 0;
        bool hit = false;
        if (prod < 0.0) {
            m = (std::fabs(v[k]) <= std::fabs(v[k + 1])) ? k : k + 1;
            hit = true;
        } else if (prod > 0.0 &&
                   rng.uniform() < std::exp(-2.0 * prod / path.dt)) {
            m = (std::fabs(v[k]) <= std::fabs(v[k + 1])) ? k : k + 1;
            hit = true;
        }
        if (hit && (marks.empty() || marks.back() != m)) marks.push_back(m);
    }
    marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
    return marks;
}

LocalTimeProfile excursion_count_estimate(const Path& path, double delta) {
    if (!(delta >= path.dt))
        throw std::invalid_argument(
            "excursion_count_estimate: delta below grid resolution");
    LocalTimeProfile p;
    p.dt = path.dt;
    p.estimator = LocalTimeEstimator::excursion_count;
    p.bandwidth = delta;
    p.values.assign(path.values.size(), 0.0);
    if (p.values.empty()) return p;

    const double unit = std::sqrt(M_PI * delta / 2.0);
    const auto marks = zero_marks(path);
    // completed pieces between consecutive zeros, credited at their start
    std::vector<double> jump(path.values.size(), 0.0);
    for (std::size_t i = 0; i + 1 < marks.size(); ++i) {
        const std::size_t a = marks[i], b = marks[i + 1];
        const double duration = path.dt * static_cast<double>(b - a);
        if (duration > delta) jump[a] += unit;
    }
    double acc = 0.0;
    for (std::size_t k = 0; k < p.values.size(); ++k) {
        acc += jump[k];
        p.values[k] = acc;
    }
    return p;
}

std::optional<double> inverse_local_time(const LocalTimeProfile& profile, double u) {
    if (!(u >= 0.0)) throw std::invalid_argument("inverse_local_time: u must be >= 0");
    if (profile.values.empty() || u >= profile.final_value()) return std::nullopt;
    const auto it = std::upper_bound(profile.values.begin(), profile.values.end(), u);
    const auto k = static_cast<std::size_t>(it - profile.values.begin());
    return profile.dt * static_cast<double>(k);
}

std::vector<double> negative_occupation(const Path& path) {
    std::vector<double> a(path.values.size(), 0.0);
    if (a.empty()) return a;
    a[0] = 0.0;
    for (std::size_t k = 1; k < path.values.size(); ++k)
        a[k] = a[k - 1] + (path.values[k] < 0.0 ? path.dt : 0.0);
    return a;
}

double last_zero(const Path& path) {
    const auto& v = path.values;
    const std::size_t n = v.size();
    if (n == 0) return 0.0;
    for (std::size_t k = n; k-- > 0;) {
        if (v[k] == 0.0) return path.time(k);
        if (k + 1 < n && v[k] * v[k + 1] < 0.0) return path.time(k);
    }
    return 0.0;
}

std::string profile_to_csv(const LocalTimeProfile& profile) {
    std::string out = "t,L\n";
    out.reserve(out.size() + profile.values.size() * 48);
    char buf[64];
    for (std::size_t k = 0; k < profile.values.size(); ++k) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n",
                      profile.dt * static_cast<double>(k), profile.values[k]);
        out += buf;
    }
    return out;
}

void write_profile_csv(const LocalTimeProfile& profile, const std::string& filename) {
    std::ofstream f(filename, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + filename);
    f << profile_to_csv(profile);
}

} // namespace limloc
