#pragma once

#include "limloc/constraints.hpp"
#include "limloc/local_time.hpp"
#include "limloc/path.hpp"
#include "limloc/rng.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>

namespace limloc {

// Thrown when a rejection loop runs out of attempts. Carries the empirical
// acceptance estimate observed before giving up.
class RejectionBudgetError : public std::runtime_error {
public:
    RejectionBudgetError(std::string what, std::uint64_t attempts, double acceptance)
        : std::runtime_error(std::move(what)),
          attempts_(attempts),
          acceptance_estimate_(acceptance) {}

    std::uint64_t attempts() const { return attempts_; }
    double acceptance_estimate() const { return acceptance_estimate_; }

private:
    std::uint64_t attempts_ = 0;
    double acceptance_estimate_ = 0.0;
};

struct PathDiagnostics {
    double local_time = 0.0;    // occupation estimate at the final time
    double negative_time = 0.0; // time spent below 0
    double final_value = 0.0;
    double last_zero = 0.0;
};

enum class ConditionEvent { E, K, Kprime };

// A path accepted by rejection against a local-time constraint event.
struct ConditionedDraw {
    Path path;
    LocalTimeProfile profile;
    std::uint64_t attempts = 0;
    EventVerdict event;
    PathDiagnostics diagnostics;
    double bandwidth = 0.0; // occupation bandwidth the event was evaluated with
    Seed seed;
};

// A draw from one of the exact limit constructions.
struct LimitDraw {
    Path path;
    double u = 0.0;                // the uniform level driving the construction
    double switch_time = 0.0;      // glue time, capped at the horizon
    double terminal_quantity = 0.0; // terminal local time, or total negative time
    int terminal_sign = +1;
    bool truncated = false; // the glue point fell beyond the returned window
};

// Brownian motion conditioned on `event` for the allowance f at time t, by
// exact rejection: unconditioned paths are drawn until one satisfies the
// event, evaluated with the occupation estimator at `epsilon` (default
// bandwidth when epsilon == 0). Throws RejectionBudgetError after
// max_attempts rejections.
ConditionedDraw reject_condition(Seed seed, const ConstraintSpec& f,
                                 ConditionEvent event, double t, double dt,
                                 std::uint64_t max_attempts,
                                 double epsilon = 0.0);

// Attempt count and acceptance estimate only; same draws as reject_condition
// but nothing is stored. For acceptance-rate measurements.
struct RejectionStats {
    std::uint64_t attempts = 0;
    bool accepted = false;
};
RejectionStats reject_condition_stats(Seed seed, const ConstraintSpec& f,
                                      ConditionEvent event, double t, double dt,
                                      std::uint64_t max_attempts,
                                      double epsilon = 0.0);

// Limit process under a unit local-time allowance: Brownian motion until its
// occupation local time first exceeds an independent U ~ Uniform(0,1), then
// an independent signed Bessel(3) from 0. The terminal local-time level is
// read at the switch (the appended leg never returns to 0, so the level is
// final there; running the band estimator across the glue would only add an
// O(bandwidth) artifact from the leg's start). If the switch has not happened
// by `horizon` the draw is flagged truncated; the walk still crosses almost
// surely and the level it crosses at is determined by u and the estimator
// step, so the terminal level is recorded anyway. Pass `search_horizon` >
// horizon to also locate the switch time beyond the window.
LimitDraw limit_bounded_allowance(Seed seed, double horizon, double dt,
                                  double epsilon = 0.0,
                                  double search_horizon = 0.0);

// Diagnostics-only variant (no path is materialized).
LimitDraw limit_bounded_allowance_diag(Seed seed, double horizon, double dt,
                                       double epsilon = 0.0,
                                       double search_horizon = 0.0);

// Limit process under a unit negative-time allowance: a Brownian bridge of
// random duration g carrying all the negative time, then a nonnegative
// Bessel(3) leg. The bridge is conditioned to spend at most one unit of time
// below 0; conditioning is exact, via a cyclic shift of an unconditioned
// bridge (see the implementation notes). bridge_budget is validated for
// interface compatibility; the shift construction needs no retries.
LimitDraw limit_negative_part(Seed seed, double horizon, double dt,
                              std::uint64_t bridge_budget = 1);

LimitDraw limit_negative_part_diag(Seed seed, double horizon, double dt,
                                   std::uint64_t bridge_budget = 1);

// Duration of the bridge segment above: density (1/4) y^{-1/2} on (0,1] and
// (1/4) y^{-3/2} on (1,inf), by inverse CDF.
double sample_g(Seed seed);
double g_from_uniform(double v); // the inverse CDF itself

struct ReflectionCouple {
    Path x;            // Brownian motion from x0
    Path z;            // Brownian motion from y0, glued to +-x after meeting
    double tau_couple; // first grid time z meets |x|; horizon if never
};

// Reflection coupling of Brownian motions from 0 <= x0 <= y0: Z runs
// independently until it first meets |X| on the grid and follows +-X after.
// By construction the local time of Z never exceeds that of X.
ReflectionCouple couple_reflect(Seed seed, double x0, double y0, double horizon,
                                double dt);

PathDiagnostics compute_diagnostics(const Path& path, const LocalTimeProfile& profile);

// One-line JSON summaries (diagnostics only), for JSON-lines batch files.
std::string conditioned_draw_jsonl(const ConditionedDraw& draw);
std::string limit_draw_jsonl(const LimitDraw& draw);

// Optional full-path dump next to a batch: the file is named by the draw's
// seed ("draw_<root>_<stream>_path.csv"); returns the file path.
std::string write_draw_path_csv(const ConditionedDraw& draw, const std::string& dir);

} // namespace limloc
