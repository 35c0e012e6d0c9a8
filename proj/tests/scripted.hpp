#ifndef MHLAB_TESTS_SCRIPTED_HPP
#define MHLAB_TESTS_SCRIPTED_HPP

#include <cstddef>
#include <vector>

#include "mhlab/rng.hpp"

namespace mhlab::testing {

// Replays fixed draws, cycling each list. Empty lists yield `fallback`
// (uniform/normal/levy) or 0 (index).
class ScriptedSource final : public RandomSource {
public:
    std::vector<double> uniforms;
    std::vector<double> normals;
    std::vector<double> levys;
    std::vector<std::size_t> indices;
    double fallback = 0.0;

    ScriptedSource() = default;
    explicit ScriptedSource(double constant) : fallback(constant) {}

    using RandomSource::uniform;
    double uniform() override { return next(uniforms, u_); }
    double normal() override { return next(normals, n_); }
    double levy(double) override { return next(levys, l_); }
    std::size_t index(std::size_t n) override
    {
        if (indices.empty()) {
            return 0;
        }
        return indices[i_++ % indices.size()] % n;
    }

    std::size_t uniform_calls() const { return u_; }

private:
    double next(const std::vector<double>& v, std::size_t& k)
    {
        if (v.empty()) {
            ++k;
            return fallback;
        }
        return v[k++ % v.size()];
    }

    std::size_t u_ = 0;
    std::size_t n_ = 0;
    std::size_t l_ = 0;
    std::size_t i_ = 0;
};

}  // namespace mhlab::testing

#endif
