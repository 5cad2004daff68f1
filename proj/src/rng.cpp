#include "limloc/rng.hpp"

#include <array>
#include <mutex>

namespace limloc {

namespace {

// Ziggurat tables for the standard normal, 256 layers.
// r solves the usual area equation; v is the common layer area.
constexpr int kLayers = 256;
constexpr double kR = 3.6541528853610088;
constexpr double kV = 0.00492867323399;

struct ZigguratTables {
    std::array<double, kLayers + 1> x{};
    std::array<double, kLayers> y{};

    ZigguratTables() {
        auto f = [](double t) { return std::exp(-0.5 * t * t); };
        x[kLayers] = kV / f(kR);
        x[kLayers - 1] = kR;
        y[kLayers - 1] = f(kR);
        for (int i = kLayers - 2; i >= 1; --i) {
            x[i] = std::sqrt(-2.0 * std::log(kV / x[i + 1] + f(x[i + 1])));
            y[i] = f(x[i]);
        }
        x[0] = 0.0;
        y[0] = 1.0;
    }
};

const ZigguratTables& tables() {
    static const ZigguratTables t;
    return t;
}

} // namespace

double CounterRng::gauss() {
    // layer 0 is the base strip (rectangle [0,R] x [0,f(R)] plus the tail);
    // layer L in 1..255 is the rectangle of width x[L] between heights
    // y[L] and y[L-1], with the wedge right of x[L-1] tested against f.
    const auto& t = tables();
    for (;;) {
        const std::uint64_t bits = next_u64();
        const int layer = static_cast<int>(bits & 0xffULL);
        const bool neg = (bits >> 8) & 1ULL;
        // 53-bit uniform from the top bits.
        const double u = static_cast<double>(bits >> 11) * 0x1.0p-53;
        if (layer == 0) {
            const double xr = u * t.x[kLayers]; // base width kV / f(R) > R
            if (xr < kR) return neg ? -xr : xr;
            return gauss_tail(kR, neg);
        }
        const double xr = u * t.x[layer];
        if (xr < t.x[layer - 1]) return neg ? -xr : xr;
        const double fy = t.y[layer] +
            uniform() * (t.y[layer - 1] - t.y[layer]);
        if (fy < std::exp(-0.5 * xr * xr)) return neg ? -xr : xr;
    }
}

double CounterRng::gauss_tail(double x1, bool negative) {
    // Marsaglia tail sampler: exact for the region beyond x1.
    for (;;) {
        const double u1 = uniform_open();
        const double u2 = uniform_open();
        const double xx = -std::log(u1) / x1;
        const double yy = -std::log(u2);
        if (2.0 * yy > xx * xx) {
            const double v = x1 + xx;
            return negative ? -v : v;
        }
    }
}

std::uint64_t CounterRng::uniform_index(std::uint64_t n) {
    // Rejection to avoid modulo bias.
    if (n == 0) return 0;
    const std::uint64_t limit = n * ((~0ULL) / n);
    for (;;) {
        const std::uint64_t v = next_u64();
        if (v < limit) return v % n;
    }
}

} // namespace limloc
