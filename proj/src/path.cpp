#include "limloc/path.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace limloc {

std::size_t grid_steps(double horizon, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw std::invalid_argument("grid_steps: dt must be positive and finite");
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw std::invalid_argument("grid_steps: horizon must be positive and finite");
    const auto n = static_cast<std::size_t>(std::llround(horizon / dt));
    return n == 0 ? 1 : n;
}

std::string path_to_csv(const Path& path) {
    std::string out = "t,x\n";
    out.reserve(out.size() + path.values.size() * 48);
    char buf[64];
    for (std::size_t k = 0; k < path.values.size(); ++k) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", path.time(k), path.values[k]);
        out += buf;
    }
    return out;
}

void write_path_csv(const Path& path, const std::string& filename) {
    std::ofstream f(filename, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + filename);
    f << path_to_csv(path);
}

} // namespace limloc
