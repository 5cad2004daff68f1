#pragma once

#include "limloc/path.hpp"
#include "limloc/rng.hpp"

namespace limloc {

enum class Bessel3Method { norm3d, euler };

// Standard Brownian motion from 0: exact Gaussian increments of variance dt.
Path gen_brownian(Seed seed, double horizon, double dt);

// Brownian bridge from 0 to 0 over [0, duration]; the endpoint is forced to
// exactly 0 so downstream zero detection never sees floating-point drift.
Path gen_bridge(Seed seed, double duration, double dt);

// Bessel(3) process from `start` >= 0.
//   norm3d: |3d Brownian motion| started at (start, 0, 0); exact at grid times.
//   euler:  dR = dB + dt/R with reflection at 0; from start = 0 the first step
//           is one norm3d step, since the drift is singular there.
Path gen_bessel3(Seed seed, double horizon, double dt, double start,
                 Bessel3Method method = Bessel3Method::norm3d);

// Bessel(3) bridge from 0 to 0: the norm of three independent Brownian
// bridges of the same duration.
Path gen_bessel3_bridge(Seed seed, double duration, double dt);

} // namespace limloc
