#pragma once

#include "limloc/local_time.hpp"
#include "limloc/path.hpp"

#include <optional>
#include <string>
#include <vector>

namespace limloc {

// The allowance function f bounding local-time growth.
//   constant:  f(t) = c, c > 0.
//   power_log: f(t) = sqrt(t) * (log t)^(-gamma) for t >= e, constant f(e)
//              to the left (keeps f(0) > 0 and f nondecreasing).
//   table:     sorted (t, f) pairs, linear interpolation, constant beyond
//              both ends.
class ConstraintSpec {
public:
    enum class Variant { constant, power_log, table };

    static ConstraintSpec constant(double c);
    static ConstraintSpec power_log(double gamma);
    static ConstraintSpec table(std::vector<double> ts, std::vector<double> fs);

    static ConstraintSpec from_json(const std::string& json_text);
    static ConstraintSpec from_table_csv(const std::string& filename);

    double operator()(double t) const;

    Variant variant() const { return variant_; }
    double constant_value() const { return c_; }
    double gamma() const { return gamma_; }
    double table_max_t() const { return ts_.empty() ? 0.0 : ts_.back(); }
    const std::vector<double>& table_times() const { return ts_; }
    bool nondecreasing() const { return nondecreasing_; }
    bool sqrt_ratio_nonincreasing() const { return sqrt_ratio_nonincreasing_; }

    std::string to_json() const;

private:
    ConstraintSpec() = default;
    void verify_monotonicity();

    Variant variant_ = Variant::constant;
    double c_ = 1.0;
    double gamma_ = 0.0;
    std::vector<double> ts_, fs_;
    bool nondecreasing_ = true;
    bool sqrt_ratio_nonincreasing_ = true;
};

enum class EventKind { E, K, Kprime, Cprime, H, Aprime };

struct EventVerdict {
    EventKind event = EventKind::E;
    bool holds = false;
    std::optional<double> first_violation; // present iff !holds
};

// E_t: the local time at t does not exceed f(t).
EventVerdict check_E(const LocalTimeProfile& profile, const ConstraintSpec& f, double t);

// K_t: the constraint holds at every grid time s <= t.
EventVerdict check_K(const LocalTimeProfile& profile, const ConstraintSpec& f, double t);

// K'_n: on each dyadic block I_j = [2^{j-1}, 2^j), j = 1..n, the local time
// accumulated since the start of the block stays below f.
EventVerdict check_Kprime(const LocalTimeProfile& profile, const ConstraintSpec& f, int n);

// H_j: the path has a zero in I_j = [2^{j-1}, 2^j).
EventVerdict check_H(const Path& path, int j);

enum class IntegralClass { convergent, divergent };

struct ClassifyResult {
    IntegralClass verdict = IntegralClass::convergent;
    bool symbolic = false;          // decided by the closed-form rule
    double integral = 0.0;          // accumulated integral of f(t) t^{-3/2} on [1, T]
    double last_window = 0.0;       // contribution of the final doubling window
    double t_reached = 1.0;
    std::vector<double> partials;   // running integral after each window
};

// Integral test for f(t) t^{-3/2} on [1, inf). power_log is decided
// symbolically (gamma > 1). Constant and table variants integrate exactly
// over doubling windows and call the integral convergent when the relative
// window contribution falls below `tol`; a table that runs out of range first
// is reported divergent (a numerical verdict over its finite window).
ClassifyResult classify(const ConstraintSpec& f, double tol = 1e-6);

} // namespace limloc
