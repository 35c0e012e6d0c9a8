#include "mhlab/rng.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "mhlab/errors.hpp"

namespace mhlab {

namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept
{
    return (x << k) | (x >> (64 - k));
}

}  // namespace

RngStream::RngStream(std::uint64_t seed) noexcept : seed_(seed)
{
    std::uint64_t z = seed;
    for (auto& w : s_) {
        z += 0x9e3779b97f4a7c15ULL;
        w = avalanche64(z);
    }
}

RngStream RngStream::substream(std::string_view label) const noexcept
{
    return RngStream(mix64(seed_, hash_label(label)));
}

std::uint64_t RngStream::next_u64() noexcept
{
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double RngStream::uniform()
{
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::normal()
{
    // Box-Muller, one variate per call; u1 in (0, 1].
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double RngStream::levy(double beta)
{
    const double sigma = mantegna_sigma(beta);
    double v = 0.0;
    do {
        v = normal();
    } while (std::abs(v) < 1e-300);
    const double u = normal() * sigma;
    return u / std::pow(std::abs(v), 1.0 / beta);
}

std::size_t RngStream::index(std::size_t n)
{
    if (n == 0) {
        throw std::invalid_argument("RngStream::index: empty range");
    }
    // Lemire's nearly-divisionless bounded integer.
    const auto bound = static_cast<std::uint64_t>(n);
    __uint128_t m = static_cast<__uint128_t>(next_u64()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            m = static_cast<__uint128_t>(next_u64()) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::size_t>(m >> 64);
}

double mantegna_sigma(double beta)
{
    using std::numbers::pi;
    const double num = std::tgamma(1.0 + beta) * std::sin(pi * beta / 2.0);
    const double den = std::tgamma((1.0 + beta) / 2.0) * beta * std::pow(2.0, (beta - 1.0) / 2.0);
    return std::pow(num / den, 1.0 / beta);
}

std::vector<std::size_t> distinct_indices(RandomSource& rng, std::size_t n, std::size_t count,
                                          std::size_t exclude)
{
    std::vector<std::size_t> pool;
    pool.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i != exclude) {
            pool.push_back(i);
        }
    }
    if (count > pool.size()) {
        throw ConfigError("population too small: need " + std::to_string(count) + " distinct partners, have " + std::to_string(pool.size()));
    }
    // Partial Fisher-Yates: each draw shrinks the candidate range.
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t j = k + rng.index(pool.size() - k);
        std::swap(pool[k], pool[j]);
    }
    pool.resize(count);
    return pool;
}

}  // namespace mhlab
