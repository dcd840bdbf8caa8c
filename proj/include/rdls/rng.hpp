#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace rdls {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
    return splitmix64(a ^ (splitmix64(b) + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2)));
}

}  // namespace detail

// Counter-based stream: the draw sequence is a pure function of the key, so
// per-(agent, t, recipient) streams are order-independent and reproducible.
class KeyedRng {
public:
    explicit KeyedRng(std::uint64_t key) : state_(key) {}

    std::uint64_t next_u64() { return detail::splitmix64(state_ += 0x9e3779b97f4a7c15ull); }

    // Uniform in [0, 1).
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Box-Muller; consumes two uniforms per call.
    double gaussian() {
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1 > 1e-300 ? u1 : 1e-300));
        return r * std::cos(6.283185307179586476925286766559 * u2);
    }

private:
    std::uint64_t state_;
};

// Derives a stream key from a seed plus an arbitrary tag tuple.
inline std::uint64_t derive_key(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
    std::uint64_t k = detail::splitmix64(seed);
    for (std::uint64_t t : tags) k = detail::hash_combine(k, t);
    return k;
}

}  // namespace rdls
