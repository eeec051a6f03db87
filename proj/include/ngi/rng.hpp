#ifndef NGI_RNG_HPP
#define NGI_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace ngi {

/// SplitMix64 finaliser; used to derive independent stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for sub-stream `stream` of a run seeded with `seed`. Streams are what
/// make parallel loops reproducible: work item i always draws from stream i.
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) noexcept
{
    return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

/// Seedable generator with portable variates (the std distributions are not
/// bit-identical across standard libraries).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    /// Uniform on [0,1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    /// Exponential with the given mean.
    double exponential(double mean) { return -std::log1p(-uniform()) * mean; }

private:
    std::mt19937_64 engine_;
};

}  // namespace ngi

#endif  // NGI_RNG_HPP
