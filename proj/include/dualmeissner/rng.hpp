// Counter-based random streams built on the splitmix64 mixer.
//
// A stream is keyed by up to four 64-bit words (seed plus e.g. sweep index,
// site index, direction).  Streams with distinct keys are statistically
// independent, so per-link update sequences are reproducible regardless of
// traversal order or thread count.
#ifndef DUALMEISSNER_RNG_HPP
#define DUALMEISSNER_RNG_HPP

#include <cmath>
#include <cstdint>

namespace dm {

namespace detail {
// splitmix64 finalizer (Stafford mix13 variant)
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace detail

class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t k1 = 0,
                        std::uint64_t k2 = 0, std::uint64_t k3 = 0) {
        // fold the key words through full avalanches so that nearby
        // (seed, sweep, site, dir) tuples give unrelated streams
        std::uint64_t s = detail::mix64(seed + 0x9e3779b97f4a7c15ULL);
        s = detail::mix64(s ^ detail::mix64(k1 + 0xbf58476d1ce4e5b9ULL));
        s = detail::mix64(s ^ detail::mix64(k2 + 0x94d049bb133111ebULL));
        s = detail::mix64(s ^ detail::mix64(k3 + 0xd6e8feb86659fd93ULL));
        state_ = s;
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return detail::mix64(state_);
    }

    /// uniform in (0, 1]; never returns 0, safe as a log() argument
    double uniform01() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// uniform in [-1, 1)
    double uniform_sym() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-52 - 1.0;
    }

    /// Box-Muller pair; consumes exactly two uniforms
    void gaussian_pair(double& z0, double& z1) {
        double u1 = uniform01();
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        constexpr double two_pi = 6.283185307179586476925287;
        z0 = r * std::cos(two_pi * u2);
        z1 = r * std::sin(two_pi * u2);
    }

  private:
    std::uint64_t state_;
};

}  // namespace dm

#endif
