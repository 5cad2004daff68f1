#include "limloc/stats.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace limloc {

namespace {

std::string verdict_name(Verdict v) {
    switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    default: return "inconclusive";
    }
}

} // namespace

std::string MCReport::to_json() const {
    nlohmann::json j;
    j["label"] = label;
    j["estimate"] = estimate;
    j["stderr"] = stderr_;
    j["n"] = n;
    j["seed_root"] = seed_root;
    j["verdict"] = verdict_name(verdict);
    j["threshold"] = threshold;
    return j.dump();
}

std::string KSResult::to_json() const {
    nlohmann::json j;
    j["D"] = d;
    j["n"] = n;
    j["p_value"] = p_value;
    j["reference"] = reference;
    return j.dump();
}

double kolmogorov_tail(double k) {
    if (k <= 0.0) return 1.0;
    double sum = 0.0;
    for (int j = 1; j < 1000; ++j) {
        const double term = std::exp(-2.0 * j * j * k * k);
        if (term < 1e-10 && j > 1) break;
        sum += (j % 2 == 1 ? term : -term);
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KSResult ks_test(std::vector<double> sample,
                 const std::function<double(double)>& cdf,
                 const std::string& reference_name) {
    if (sample.empty()) throw std::invalid_argument("ks_test: empty sample");
    std::sort(sample.begin(), sample.end());
    const auto n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max(d, std::fabs((static_cast<double>(i) + 1.0) / n - f));
        d = std::max(d, std::fabs(static_cast<double>(i) / n - f));
    }
    KSResult r;
    r.d = d;
    r.n = sample.size();
    r.p_value = kolmogorov_tail(std::sqrt(n) * d);
    r.reference = reference_name;
    return r;
}

namespace {

// Sweep both sorted samples, tracking sup (F_a - F_b) and sup (F_b - F_a).
void two_sample_sups(std::vector<double>& a, std::vector<double>& b,
                     double& d_plus, double& d_minus) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    d_plus = 0.0;
    d_minus = 0.0;
    while (i < a.size() || j < b.size()) {
        double x;
        if (j >= b.size() || (i < a.size() && a[i] <= b[j])) x = a[i];
        else x = b[j];
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        const double fa = static_cast<double>(i) / na;
        const double fb = static_cast<double>(j) / nb;
        d_plus = std::max(d_plus, fa - fb);
        d_minus = std::max(d_minus, fb - fa);
    }
}

} // namespace

KSResult ks_test_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("ks_test_two_sample: empty sample");
    double dp = 0.0, dm = 0.0;
    two_sample_sups(a, b, dp, dm);
    const double d = std::max(dp, dm);
    const double ne = static_cast<double>(a.size()) * static_cast<double>(b.size()) /
                      static_cast<double>(a.size() + b.size());
    KSResult r;
    r.d = d;
    r.n = static_cast<std::uint64_t>(ne);
    r.p_value = kolmogorov_tail(std::sqrt(ne) * d);
    r.reference = "two-sample";
    return r;
}

KSResult ks_test_dominates(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("ks_test_dominates: empty sample");
    double dp = 0.0, dm = 0.0;
    two_sample_sups(a, b, dp, dm);
    const double ne = static_cast<double>(a.size()) * static_cast<double>(b.size()) /
                      static_cast<double>(a.size() + b.size());
    KSResult r;
    r.d = dp; // sup (F_a - F_b): positive when A sits below B somewhere
    r.n = static_cast<std::uint64_t>(ne);
    r.p_value = std::clamp(std::exp(-2.0 * ne * dp * dp), 0.0, 1.0);
    r.reference = "one-sided two-sample";
    return r;
}

ExponentFit fit_exponent(const std::vector<ScalingPoint>& points) {
    if (points.size() < 3)
        throw std::invalid_argument("fit_exponent: need >= 3 points");
    double sw = 0.0, swx = 0.0, swy = 0.0;
    std::vector<double> xs, ys, ws;
    for (const auto& p : points) {
        if (!(p.estimate > 0.0))
            throw std::invalid_argument("fit_exponent: estimates must be > 0");
        const double x = std::log(p.t);
        const double y = std::log(p.estimate);
        const double sigma = p.stderr_ > 0.0 ? p.stderr_ / p.estimate : 1.0;
        const double w = 1.0 / (sigma * sigma);
        xs.push_back(x);
        ys.push_back(y);
        ws.push_back(w);
        sw += w;
        swx += w * x;
        swy += w * y;
    }
    const double xbar = swx / sw, ybar = swy / sw;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += ws[i] * (xs[i] - xbar) * (xs[i] - xbar);
        sxy += ws[i] * (xs[i] - xbar) * (ys[i] - ybar);
    }
    ExponentFit fit;
    fit.slope = sxy / sxx;
    fit.slope_stderr = std::sqrt(1.0 / sxx);
    fit.intercept = ybar - fit.slope * xbar;
    return fit;
}

double mean(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

double stderr_of_mean(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    const double m = mean(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    const auto n = static_cast<double>(xs.size());
    return std::sqrt(ss / (n - 1.0) / n);
}

MCReport dominance_test(const std::vector<double>& sample_a,
                        const std::vector<double>& sample_b,
                        Direction direction,
                        const std::string& label) {
    if (sample_a.empty() || sample_b.empty())
        throw std::invalid_argument("dominance_test: empty sample");
    const double ma = mean(sample_a), mb = mean(sample_b);
    const double sa = stderr_of_mean(sample_a), sb = stderr_of_mean(sample_b);
    const double pooled = std::sqrt(sa * sa + sb * sb);

    MCReport r;
    r.label = label;
    r.estimate = ma - mb;
    r.stderr_ = pooled;
    r.n = std::min(sample_a.size(), sample_b.size());
    r.threshold = 3.0 * pooled;
    const bool ok = (direction == Direction::a_le_b)
                        ? (ma <= mb + 3.0 * pooled)
                        : (ma >= mb - 3.0 * pooled);
    if (r.n < kVerdictFloor) r.verdict = Verdict::inconclusive;
    else r.verdict = ok ? Verdict::pass : Verdict::fail;
    return r;
}

} // namespace limloc
