#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace limloc {

enum class Verdict { pass, fail, inconclusive };

// One Monte Carlo estimate with everything needed to reproduce it.
struct MCReport {
    std::string label;
    double estimate = 0.0;
    double stderr_ = 0.0;
    std::uint64_t n = 0;
    std::uint64_t seed_root = 0;
    Verdict verdict = Verdict::inconclusive;
    double threshold = 0.0;

    std::string to_json() const;
};

struct KSResult {
    double d = 0.0;
    std::uint64_t n = 0;
    double p_value = 0.0;
    std::string reference;

    std::string to_json() const;
};

// Minimum sample size for a pass/fail verdict; below it, tests report
// inconclusive rather than trusting asymptotic p-values.
constexpr std::uint64_t kVerdictFloor = 100;

// One-sample two-sided Kolmogorov-Smirnov test against a reference CDF.
// p-value from the asymptotic Kolmogorov series, clamped to [0, 1].
KSResult ks_test(std::vector<double> sample,
                 const std::function<double(double)>& cdf,
                 const std::string& reference_name);

// Two-sided two-sample test; p-value via the asymptotic series at the
// effective sample size n1*n2/(n1+n2).
KSResult ks_test_two_sample(std::vector<double> a, std::vector<double> b);

// One-sided two-sample test of H0 "A is stochastically >= B", i.e. uses
// D+ = sup (F_A - F_B); small p means A fails to dominate B.
KSResult ks_test_dominates(std::vector<double> a, std::vector<double> b);

// Asymptotic Kolmogorov tail Q(k) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 k^2).
double kolmogorov_tail(double k);

struct ExponentFit {
    double slope = 0.0;
    double slope_stderr = 0.0;
    double intercept = 0.0;
};

struct ScalingPoint {
    double t = 0.0;
    double estimate = 0.0;
    double stderr_ = 0.0;
};

// Weighted least squares of log(estimate) on log(t); weights from the
// delta-method standard error of the log.
ExponentFit fit_exponent(const std::vector<ScalingPoint>& points);

enum class Direction { a_le_b, a_ge_b };

// Compare sample means of a bounded monotone functional; pass if the directed
// inequality holds within 3 pooled standard errors.
MCReport dominance_test(const std::vector<double>& sample_a,
                        const std::vector<double>& sample_b,
                        Direction direction,
                        const std::string& label = "dominance");

double mean(const std::vector<double>& xs);
double stderr_of_mean(const std::vector<double>& xs);

} // namespace limloc
