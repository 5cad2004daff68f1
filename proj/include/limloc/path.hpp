#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace limloc {

// A process sampled on a uniform time grid: values[k] is the state at k*dt.
struct Path {
    double dt = 0.0;
    double origin = 0.0;
    std::vector<double> values;

    std::size_t steps() const { return values.empty() ? 0 : values.size() - 1; }
    double horizon() const { return dt * static_cast<double>(steps()); }
    double time(std::size_t k) const { return dt * static_cast<double>(k); }
};

// CSV with header "t,x", one row per grid point, >= 15 significant digits.
std::string path_to_csv(const Path& path);
void write_path_csv(const Path& path, const std::string& filename);

// Number of grid steps covering `horizon` at resolution `dt` (at least 1).
std::size_t grid_steps(double horizon, double dt);

} // namespace limloc
