#pragma once

#include <cstdint>
#include <cmath>

namespace limloc {

// Seed of a reproducible random stream. (root, stream) pairs index
// statistically independent substreams; equal pairs reproduce equal draws
// bit-for-bit on a given platform, regardless of worker count.
struct Seed {
    std::uint64_t root = 0;
    std::uint64_t stream = 0;
};

namespace detail {

// SplitMix64 finalizer: a 64-bit bijective mixer.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

} // namespace detail

// Counter-based generator: output i is a fixed mix of (key, i), so the state
// is just a counter. Streams are separated by mixing (root, stream) into the
// key; no jump-ahead bookkeeping is needed for parallel use.
class CounterRng {
public:
    explicit CounterRng(Seed s)
        : key_(detail::mix64(s.root + detail::kGolden) ^
               detail::mix64(detail::mix64(s.stream) + 0x94d049bb133111ebULL)) {}

    std::uint64_t next_u64() {
        counter_ += detail::kGolden;
        return detail::mix64(key_ + counter_);
    }

    // Uniform on [0,1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform on (0,1); never returns an exact endpoint.
    double uniform_open() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // Standard normal via the ziggurat method (Marsaglia-Tsang, 256 layers).
    double gauss();

    // Fair sign in {-1, +1}.
    int coin_sign() { return (next_u64() >> 63) ? 1 : -1; }

    std::uint64_t uniform_index(std::uint64_t n); // uniform on {0,...,n-1}

private:
    double gauss_tail(double x1, bool negative);

    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

inline CounterRng make_rng(Seed s) { return CounterRng(s); }

} // namespace limloc
