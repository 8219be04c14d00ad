#ifndef MHD_RNG_HPP
#define MHD_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace mhd {

/*--------------------------------------------------------------------------
 * Reproducibility contract.
 *
 * Every random quantity in the library is a pure function of a 64-bit seed:
 *  - the engine is std::mt19937_64, whose output stream is fixed by ISO C++;
 *  - Gaussians come from the Box-Muller transform below (the standard
 *    library's normal_distribution draws an implementation-defined sequence,
 *    so it is deliberately not used);
 *  - sub-streams (ensemble members, forcing directions, per-mode draws) use
 *    sub_seed(), a splitmix64-style mix, so they are independent and stable
 *    across grid sizes and thread counts.
 *-------------------------------------------------------------------------*/

// splitmix64 output finalizer
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// deterministic sub-stream seed for (seed, index)
inline std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t index) {
    return mix64(seed ^ mix64(index));
}

// pack a frequency vector into a key for per-mode sub-streams (|k_i| < 512)
inline std::uint64_t mode_key(int k0, int k1, int k2) {
    const std::uint64_t a = static_cast<std::uint64_t>(k0 + 512);
    const std::uint64_t b = static_cast<std::uint64_t>(k1 + 512);
    const std::uint64_t c = static_cast<std::uint64_t>(k2 + 512);
    return (a << 20) | (b << 10) | c;
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // uniform on (0, 1]
    double uniform01() { return (static_cast<double>(eng_() >> 11) + 1.0) * 0x1p-53; }

    // standard normal via Box-Muller; the pair's second value is cached
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

  private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace mhd

#endif
