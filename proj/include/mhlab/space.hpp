#ifndef MHLAB_SPACE_HPP
#define MHLAB_SPACE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mhlab/rng.hpp"

namespace mhlab {

/// Axis-aligned box. lower[j] <= upper[j]; a zero-width interval is a
/// legal (degenerate) dimension.
class SearchSpace {
public:
    SearchSpace() = default;
    SearchSpace(std::vector<double> lower, std::vector<double> upper);

    /// Same bounds on every dimension, e.g. box(10, -100, 100).
    static SearchSpace box(std::size_t dim, double lo, double hi);

    std::size_t dim() const noexcept { return lower_.size(); }
    const std::vector<double>& lower() const noexcept { return lower_; }
    const std::vector<double>& upper() const noexcept { return upper_; }
    double lower(std::size_t j) const { return lower_[j]; }
    double upper(std::size_t j) const { return upper_[j]; }
    double width(std::size_t j) const { return upper_[j] - lower_[j]; }

    bool contains(std::span<const double> x) const;

    bool operator==(const SearchSpace&) const = default;

private:
    std::vector<double> lower_;
    std::vector<double> upper_;
};

struct Individual {
    std::vector<double> position;
    std::optional<double> fitness;

    bool evaluated() const noexcept { return fitness.has_value(); }
};

struct Population {
    std::vector<Individual> members;
    std::size_t generation = 0;

    std::size_t size() const noexcept { return members.size(); }
    Individual& operator[](std::size_t i) { return members[i]; }
    const Individual& operator[](std::size_t i) const { return members[i]; }

    /// Index of the lowest fitness; ties go to the lowest index.
    std::size_t best_index() const;
    std::size_t worst_index() const;
};

/// Fitness-evaluation budget. Default is 10000 evaluations per dimension.
struct Budget {
    std::uint64_t max_evals = 0;
    std::uint64_t used_evals = 0;

    static constexpr std::uint64_t kDefaultMultiplier = 10000;

    static Budget for_dim(std::size_t dim, std::uint64_t multiplier = kDefaultMultiplier);

    std::uint64_t remaining() const noexcept
    {
        return used_evals >= max_evals ? 0 : max_evals - used_evals;
    }
    bool exhausted() const noexcept { return used_evals >= max_evals; }
};

enum class RepairPolicy { clamp, reflect, resample };

RepairPolicy parse_repair_policy(std::string_view name);
std::string_view to_string(RepairPolicy policy);

/// Bring a position back inside the box. Clamp and reflect are idempotent;
/// reflect folds with a triangular wave so far-out points also land inside.
/// Resample redraws offending coordinates uniformly and uses `rng` only then.
std::vector<double> repair(const SearchSpace& space, std::span<const double> position,
                           RepairPolicy policy, RandomSource& rng);

/// In-place variant used by the optimizers.
void repair_in_place(const SearchSpace& space, std::vector<double>& position, RepairPolicy policy,
                     RandomSource& rng);

/// n positions drawn uniformly per dimension; fitness left unevaluated.
Population init_population(const SearchSpace& space, std::size_t n, RandomSource& rng);

}  // namespace mhlab

#endif
