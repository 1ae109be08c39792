#ifndef FFVAR_RNG_HPP
#define FFVAR_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace ffvar {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed for a fixed-size Monte-Carlo block; block decomposition is what makes
/// estimates independent of the worker count.
inline uint64_t block_seed(uint64_t seed, uint64_t block) {
    return splitmix64(seed ^ splitmix64(block + 1));
}

/// mt19937_64 (sequence fixed by the standard) with hand-rolled uniform and
/// Box-Muller transforms, so streams are bit-identical across platforms;
/// the distribution adapters in <random> are implementation-defined.
class Rng {
  public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    double uniform() { // in [0, 1)
        return double(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform_pos() { // in (0, 1]
        return double((eng_() >> 11) + 1) * 0x1.0p-53;
    }

    double gauss() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform_pos();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

  private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace ffvar

#endif
