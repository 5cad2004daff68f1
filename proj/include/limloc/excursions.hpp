#pragma once

#include "limloc/local_time.hpp"
#include "limloc/path.hpp"
#include "limloc/rng.hpp"

#include <string>
#include <vector>

namespace limloc {

// One zero-to-zero piece of a path. `samples` are grid values with both
// endpoints 0 for a completed piece; a piece cut off by the horizon keeps its
// last observed value, so complete() distinguishes the two.
struct Excursion {
    double level = 0.0;    // local time at which the piece occurs
    double start = 0.0;    // start time on the source grid
    double duration = 0.0; // (samples.size()-1) * dt
    int sign = +1;
    std::vector<double> samples;

    bool complete() const {
        return samples.size() >= 2 && samples.back() == 0.0;
    }
};

// Chronologically ordered excursions of one path; equivalent to the path up
// to the zeros between them.
struct ExcursionSet {
    double dt = 0.0;
    double closure = 0.0; // total horizon of the source path
    std::vector<Excursion> excursions;
};

// Decompose `path` into its excursions from 0, keeping those of duration
// > delta. Levels are read off `profile`, which must share the path's grid.
ExcursionSet extract(const Path& path, const LocalTimeProfile& profile, double delta);

// Tail of the excursion duration intensity: measure of {duration > t}
// per unit local time, sqrt(2/(pi*t)).
double nu_tail(double t);

// Rebuild a path from an excursion set: pieces at their recorded starts,
// zeros in between. Throws on overlapping pieces.
Path reconstruct(const ExcursionSet& set);

// Excursion conditioned to last longer than min_duration: duration from the
// t^{-3/2} tail law truncated at `horizon`, shape a Bessel(3) bridge of that
// duration, sign fair.
Excursion sample_conditioned_excursion(Seed seed, double min_duration,
                                       double horizon, double dt);

std::string excursion_set_to_json(const ExcursionSet& set);

} // namespace limloc
