#pragma once

#include "limloc/path.hpp"
#include "limloc/rng.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace limloc {

enum class LocalTimeEstimator { occupation, excursion_count };

// Local time of a path at the origin, estimated on the path's grid.
// values[k] pertains to time k*dt and the sequence is nondecreasing.
struct LocalTimeProfile {
    double dt = 0.0;
    std::vector<double> values;
    LocalTimeEstimator estimator = LocalTimeEstimator::occupation;
    double bandwidth = 0.0; // epsilon or delta used

    double final_value() const { return values.empty() ? 0.0 : values.back(); }
    double at_time(double t) const; // snapped down to the enclosing grid step
};

// Default occupation bandwidth: wide enough to register O(sqrt(dt))
// oscillations around 0, narrow enough to keep the band bias small.
inline double default_bandwidth(double dt) { return 2.0 * std::sqrt(dt); }

// Occupation estimate: L_t = (1/2eps) * sum dt * 1{|X_k| <= eps}, accumulated
// over right endpoints. Flat on every step whose endpoint is outside the band.
LocalTimeProfile occupation_estimate(const Path& path, double epsilon);

// Counting estimate: L_t = sqrt(pi*delta/2) * (number of completed
// zero-to-zero pieces of duration > delta begun by time t).
LocalTimeProfile excursion_count_estimate(const Path& path, double delta);

// Smallest grid time with profile value > u; nullopt if u >= final value.
std::optional<double> inverse_local_time(const LocalTimeProfile& profile, double u);

// Time spent strictly below 0, accumulated over right endpoints.
std::vector<double> negative_occupation(const Path& path);

// Largest grid time at which a zero is detected (exact zero, or a sign change
// between consecutive grid values, reported at the left index). 0 if none.
double last_zero(const Path& path);

// Grid indices carrying a zero: exact zeros, plus for each sign change the
// endpoint nearer to the interpolated crossing.
std::vector<std::size_t> zero_marks(const Path& path);

// As zero_marks, but a step with same-sign endpoints a, b additionally hides
// a crossing with probability exp(-2ab/dt). Catches sub-step excursions the
// plain sign-change rule misses; draws are deterministic in the seed.
std::vector<std::size_t> zero_marks_with_crossing(const Path& path, Seed seed);

std::string profile_to_csv(const LocalTimeProfile& profile);
void write_profile_csv(const LocalTimeProfile& profile, const std::string& filename);

} // namespace limloc
