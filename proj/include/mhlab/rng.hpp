#ifndef MHLAB_RNG_HPP
#define MHLAB_RNG_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace mhlab {

/// SplitMix64 finalizer. Bijective 64-bit avalanche used for every seed
/// derivation in the project.
constexpr std::uint64_t avalanche64(std::uint64_t z) noexcept
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Order-sensitive combination of two 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t a, std::uint64_t b) noexcept
{
    return avalanche64(a ^ avalanche64(b + 0x632be59bd9b4e019ULL));
}

/// FNV-1a over the bytes of a label. Stable across platforms.
constexpr std::uint64_t hash_label(std::string_view label) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : label) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Source of every random draw an operator makes. Operators take this
/// interface so tests can substitute scripted draws.
class RandomSource {
public:
    virtual ~RandomSource() = default;

    /// Uniform real in [0, 1).
    virtual double uniform() = 0;
    /// Standard normal.
    virtual double normal() = 0;
    /// Mantegna Levy-stable step with stability index beta in (0, 2).
    virtual double levy(double beta) = 0;
    /// Uniform integer in [0, n). n must be positive.
    virtual std::size_t index(std::size_t n) = 0;

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

/// Deterministic xoshiro256** stream. Same seed gives the same sequence on
/// every platform for uniform and integer draws; normal and Levy draws go
/// through libm (log, cos, pow).
class RngStream final : public RandomSource {
public:
    explicit RngStream(std::uint64_t seed = 0) noexcept;

    std::uint64_t seed() const noexcept { return seed_; }

    /// Independent stream keyed by (seed, label). Drawing from a substream
    /// never perturbs the parent.
    RngStream substream(std::string_view label) const noexcept;

    std::uint64_t next_u64() noexcept;

    using RandomSource::uniform;
    double uniform() override;
    double normal() override;
    double levy(double beta) override;
    std::size_t index(std::size_t n) override;

private:
    std::uint64_t seed_;
    std::array<std::uint64_t, 4> s_{};
};

/// Mantegna scale sigma_u for a given beta.
double mantegna_sigma(double beta);

/// `count` mutually distinct indices from [0, n) excluding `exclude`
/// (pass n to exclude nothing). Terminates for any RandomSource, including
/// constant scripted ones.
std::vector<std::size_t> distinct_indices(RandomSource& rng, std::size_t n, std::size_t count,
                                          std::size_t exclude);

}  // namespace mhlab

#endif
