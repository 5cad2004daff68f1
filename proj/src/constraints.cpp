#include "limloc/constraints.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace limloc {

namespace {
constexpr double kE = 2.718281828459045;
}

ConstraintSpec ConstraintSpec::constant(double c) {
    if (!(c > 0.0) || !std::isfinite(c))
        throw std::invalid_argument("ConstraintSpec: constant must be > 0");
    ConstraintSpec s;
    s.variant_ = Variant::constant;
    s.c_ = c;
    return s;
}

ConstraintSpec ConstraintSpec::power_log(double gamma) {
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument("ConstraintSpec: gamma must be >= 0");
    ConstraintSpec s;
    s.variant_ = Variant::power_log;
    s.gamma_ = gamma;
    s.verify_monotonicity();
    return s;
}

ConstraintSpec ConstraintSpec::table(std::vector<double> ts, std::vector<double> fs) {
    if (ts.size() != fs.size() || ts.size() < 2)
        throw std::invalid_argument("ConstraintSpec: table needs >= 2 (t, f) pairs");
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (!std::isfinite(ts[i]) || !std::isfinite(fs[i]) || fs[i] <= 0.0)
            throw std::invalid_argument("ConstraintSpec: table values must be finite, f > 0");
        if (i > 0 && ts[i] <= ts[i - 1])
            throw std::invalid_argument("ConstraintSpec: table times must be strictly increasing");
    }
    ConstraintSpec s;
    s.variant_ = Variant::table;
    s.ts_ = std::move(ts);
    s.fs_ = std::move(fs);
    s.verify_monotonicity();
    return s;
}

void ConstraintSpec::verify_monotonicity() {
    // checked on a log grid; the flags describe f, they are not enforced
    nondecreasing_ = true;
    sqrt_ratio_nonincreasing_ = true;
    const double lo = 1e-3, hi = (variant_ == Variant::table) ? ts_.back() : 1e9;
    double prev_f = -1.0, prev_g = -1.0;
    for (double t = lo; t <= hi * 1.0000001; t *= 1.25) {
        const double ft = (*this)(t);
        const double gt = ft / std::sqrt(t);
        if (prev_f >= 0.0 && ft < prev_f * (1.0 - 1e-12)) nondecreasing_ = false;
        if (prev_g >= 0.0 && gt > prev_g * (1.0 + 1e-12) && t > 1.0)
            sqrt_ratio_nonincreasing_ = false;
        prev_f = ft;
        prev_g = gt;
    }
}

double ConstraintSpec::operator()(double t) const {
    switch (variant_) {
    case Variant::constant:
        return c_;
    case Variant::power_log: {
        const double tt = std::max(t, kE);
        return std::sqrt(tt) * std::pow(std::log(tt), -gamma_);
    }
    case Variant::table: {
        if (t <= ts_.front()) return fs_.front();
        if (t >= ts_.back()) return fs_.back();
        const auto it = std::upper_bound(ts_.begin(), ts_.end(), t);
        const auto i = static_cast<std::size_t>(it - ts_.begin());
        const double w = (t - ts_[i - 1]) / (ts_[i] - ts_[i - 1]);
        return fs_[i - 1] + w * (fs_[i] - fs_[i - 1]);
    }
    }
    return c_;
}

ConstraintSpec ConstraintSpec::from_json(const std::string& json_text) {
    const auto j = nlohmann::json::parse(json_text);
    const std::string variant = j.at("variant").get<std::string>();
    if (variant == "constant") return constant(j.at("c").get<double>());
    if (variant == "power_log") return power_log(j.at("gamma").get<double>());
    if (variant == "table") {
        std::vector<double> ts, fs;
        for (const auto& row : j.at("points")) {
            ts.push_back(row.at(0).get<double>());
            fs.push_back(row.at(1).get<double>());
        }
        return table(std::move(ts), std::move(fs));
    }
    throw std::invalid_argument("ConstraintSpec: unknown variant '" + variant + "'");
}

ConstraintSpec ConstraintSpec::from_table_csv(const std::string& filename) {
    std::ifstream f(filename);
    if (!f) throw std::runtime_error("cannot open constraint table: " + filename);
    std::vector<double> ts, fs;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty() || line == "t,f") continue;
        std::istringstream row(line);
        double t, v;
        char comma;
        if (row >> t >> comma >> v) {
            ts.push_back(t);
            fs.push_back(v);
        }
    }
    return table(std::move(ts), std::move(fs));
}

std::string ConstraintSpec::to_json() const {
    nlohmann::json j;
    switch (variant_) {
    case Variant::constant:
        j["variant"] = "constant";
        j["c"] = c_;
        break;
    case Variant::power_log:
        j["variant"] = "power_log";
        j["gamma"] = gamma_;
        break;
    case Variant::table: {
        j["variant"] = "table";
        auto pts = nlohmann::json::array();
        for (std::size_t i = 0; i < ts_.size(); ++i)
            pts.push_back(nlohmann::json::array({ts_[i], fs_[i]}));
        j["points"] = std::move(pts);
        break;
    }
    }
    return j.dump();
}

namespace {

std::size_t index_at(const LocalTimeProfile& profile, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("event time must be >= 0");
    const auto k = static_cast<std::size_t>(std::floor(t / profile.dt + 1e-9));
    if (k >= profile.values.size())
        throw std::invalid_argument("event time outside profile range");
    return k;
}

} // namespace

EventVerdict check_E(const LocalTimeProfile& profile, const ConstraintSpec& f, double t) {
    const std::size_t k = index_at(profile, t);
    EventVerdict v;
    v.event = EventKind::E;
    v.holds = profile.values[k] <= f(t);
    if (!v.holds) v.first_violation = t;
    return v;
}

EventVerdict check_K(const LocalTimeProfile& profile, const ConstraintSpec& f, double t) {
    const std::size_t kmax = index_at(profile, t);
    EventVerdict v;
    v.event = EventKind::K;
    v.holds = true;
    for (std::size_t k = 0; k <= kmax; ++k) {
        const double s = profile.dt * static_cast<double>(k);
        if (profile.values[k] > f(s)) {
            v.holds = false;
            v.first_violation = s;
            break;
        }
    }
    return v;
}

EventVerdict check_Kprime(const LocalTimeProfile& profile, const ConstraintSpec& f, int n) {
    if (n < 1) throw std::invalid_argument("check_Kprime: n must be >= 1");
    const double t_n = std::ldexp(1.0, n); // 2^n
    if (t_n > profile.dt * static_cast<double>(profile.values.size() - 1) + 1e-9)
        throw std::invalid_argument("check_Kprime: profile does not cover [0, 2^n]");

    EventVerdict v;
    v.event = EventKind::Kprime;
    v.holds = true;
    for (int j = 1; j <= n; ++j) {
        const double tj0 = std::ldexp(1.0, j - 1);
        const double tj1 = std::ldexp(1.0, j);
        const std::size_t a = index_at(profile, tj0);
        const double base = profile.values[a];
        const auto b = static_cast<std::size_t>(std::floor(tj1 / profile.dt + 1e-9));
        for (std::size_t k = a; k < b && k < profile.values.size(); ++k) {
            const double s = profile.dt * static_cast<double>(k);
            if (profile.values[k] - base > f(s)) {
                v.holds = false;
                v.first_violation = s;
                return v;
            }
        }
    }
    return v;
}

EventVerdict check_H(const Path& path, int j) {
    if (j < 1) throw std::invalid_argument("check_H: j must be >= 1");
    const double tj0 = std::ldexp(1.0, j - 1);
    const double tj1 = std::ldexp(1.0, j);
    if (tj1 > path.horizon() + 1e-9)
        throw std::invalid_argument("check_H: path does not cover I_j");

    const auto a = static_cast<std::size_t>(std::floor(tj0 / path.dt + 1e-9));
    const auto b = static_cast<std::size_t>(std::floor(tj1 / path.dt + 1e-9));
    EventVerdict v;
    v.event = EventKind::H;
    v.holds = false;
    const auto& x = path.values;
    for (std::size_t k = a; k < b && k < x.size(); ++k) {
        if (x[k] == 0.0 || (k + 1 < x.size() && x[k] * x[k + 1] < 0.0)) {
            v.holds = true;
            return v;
        }
    }
    v.first_violation = tj0;
    return v;
}

namespace {

// Exact integral of f(t) t^{-3/2} over [a, b] for f linear on [a, b]:
// with f(t) = p + q t, the antiderivative is -2 p t^{-1/2} + 2 q t^{1/2}.
double linear_piece_integral(double a, double b, double fa, double fb) {
    const double q = (fb - fa) / (b - a);
    const double p = fa - q * a;
    auto F = [&](double t) { return -2.0 * p / std::sqrt(t) + 2.0 * q * std::sqrt(t); };
    return F(b) - F(a);
}

} // namespace

ClassifyResult classify(const ConstraintSpec& f, double tol) {
    ClassifyResult r;
    if (f.variant() == ConstraintSpec::Variant::power_log) {
        r.symbolic = true;
        r.verdict = f.gamma() > 1.0 ? IntegralClass::convergent : IntegralClass::divergent;
        return r;
    }

    // Exact piecewise-linear integration over doubling windows [2^{k-1}, 2^k].
    // Convergent once the relative window contribution drops below tol; the
    // relative criterion keeps the verdict invariant under scaling of f.
    const double t_end = (f.variant() == ConstraintSpec::Variant::table)
                             ? f.table_max_t()
                             : std::ldexp(1.0, 60);
    if (f.variant() == ConstraintSpec::Variant::table && t_end <= 1.0)
        throw std::invalid_argument("classify: table does not cover [1, ...)");

    const auto& knots = f.table_times();
    double lo = 1.0;
    while (lo < t_end) {
        const double hi = std::min(lo * 2.0, t_end);
        double window = 0.0;
        if (f.variant() == ConstraintSpec::Variant::constant) {
            window = linear_piece_integral(lo, hi, f(lo), f(hi));
        } else {
            // split at table knots inside the window so each piece is linear
            double a = lo;
            auto it = std::upper_bound(knots.begin(), knots.end(), a);
            while (a < hi) {
                double b = hi;
                if (it != knots.end() && *it < hi) {
                    b = *it;
                    ++it;
                }
                window += linear_piece_integral(a, b, f(a), f(b));
                a = b;
            }
        }
        r.integral += window;
        r.last_window = window;
        r.partials.push_back(r.integral);
        r.t_reached = hi;
        if (window <= tol * std::max(r.integral, 1e-300)) {
            r.verdict = IntegralClass::convergent;
            return r;
        }
        lo = hi;
    }
    r.verdict = IntegralClass::divergent;
    return r;
}

} // namespace limloc
