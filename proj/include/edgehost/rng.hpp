#pragma once

#include <cstdint>
#include <random>

namespace edgehost {

/// Stream tags used to split one trial seed into independent generators.
enum class Stream : std::uint64_t {
    Arrivals = 0x61727269766c7331ULL,
    Perturbation = 0x7065727475726231ULL,
};

std::uint64_t splitmix64(std::uint64_t x);

/// Trial seed for the given base seed and trial index (base XOR index).
inline std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t trial)
{
    return base_seed ^ trial;
}

/// Portable random source: mt19937_64 plus hand-rolled draws, so a seed gives
/// the same numbers under every standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed);
    Rng(std::uint64_t seed, Stream stream);

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Standard normal (Box-Muller, both variates used).
    double normal();
    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace edgehost
