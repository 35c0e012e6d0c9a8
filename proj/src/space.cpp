#include "mhlab/space.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mhlab/errors.hpp"

namespace mhlab {

SearchSpace::SearchSpace(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper))
{
    if (lower_.size() != upper_.size()) {
        throw ConfigError("search space: lower and upper bounds differ in length");
    }
    if (lower_.empty()) {
        throw ConfigError("search space: dimension must be positive");
    }
    for (std::size_t j = 0; j < lower_.size(); ++j) {
        if (!(lower_[j] <= upper_[j]) || !std::isfinite(lower_[j]) || !std::isfinite(upper_[j])) {
            throw ConfigError("search space: invalid bounds on dimension " + std::to_string(j));
        }
    }
}

SearchSpace SearchSpace::box(std::size_t dim, double lo, double hi)
{
    return SearchSpace(std::vector<double>(dim, lo), std::vector<double>(dim, hi));
}

bool SearchSpace::contains(std::span<const double> x) const
{
    if (x.size() != dim()) {
        return false;
    }
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (!(x[j] >= lower_[j] && x[j] <= upper_[j])) {
            return false;
        }
    }
    return true;
}

std::size_t Population::best_index() const
{
    if (members.empty()) {
        throw ContractError("best_index: empty population");
    }
    if (!members[0].fitness) {
        throw ContractError("best_index: unevaluated member");
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < members.size(); ++i) {
        if (!members[i].fitness) {
            throw ContractError("best_index: unevaluated member");
        }
        if (*members[i].fitness < *members[best].fitness) {
            best = i;
        }
    }
    return best;
}

std::size_t Population::worst_index() const
{
    if (members.empty()) {
        throw ContractError("worst_index: empty population");
    }
    std::size_t worst = 0;
    for (std::size_t i = 1; i < members.size(); ++i) {
        if (*members[i].fitness > *members[worst].fitness) {
            worst = i;
        }
    }
    return worst;
}

Budget Budget::for_dim(std::size_t dim, std::uint64_t multiplier)
{
    return Budget{static_cast<std::uint64_t>(dim) * multiplier, 0};
}

RepairPolicy parse_repair_policy(std::string_view name)
{
    if (name == "clamp") return RepairPolicy::clamp;
    if (name == "reflect") return RepairPolicy::reflect;
    if (name == "resample") return RepairPolicy::resample;
    throw ConfigError("unknown repair policy '" + std::string(name) + "'");
}

std::string_view to_string(RepairPolicy policy)
{
    switch (policy) {
    case RepairPolicy::clamp: return "clamp";
    case RepairPolicy::reflect: return "reflect";
    case RepairPolicy::resample: return "resample";
    }
    return "clamp";
}

namespace {

double reflect_into(double x, double lo, double hi)
{
    const double w = hi - lo;
    if (w <= 0.0) {
        return lo;
    }
    // Triangular wave with period 2w.
    double r = std::fmod(x - lo, 2.0 * w);
    if (r < 0.0) {
        r += 2.0 * w;
    }
    const double y = r <= w ? lo + r : hi - (r - w);
    return std::min(hi, std::max(lo, y));
}

}  // namespace

void repair_in_place(const SearchSpace& space, std::vector<double>& x, RepairPolicy policy,
                     RandomSource& rng)
{
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double lo = space.lower(j);
        const double hi = space.upper(j);
        if (x[j] >= lo && x[j] <= hi) {
            continue;
        }
        if (std::isnan(x[j])) {
            x[j] = lo + 0.5 * (hi - lo);
            continue;
        }
        switch (policy) {
        case RepairPolicy::clamp: x[j] = x[j] < lo ? lo : hi; break;
        case RepairPolicy::reflect: x[j] = std::isfinite(x[j]) ? reflect_into(x[j], lo, hi) : (x[j] < lo ? lo : hi); break;
        case RepairPolicy::resample: x[j] = rng.uniform(lo, hi); break;
        }
    }
}

std::vector<double> repair(const SearchSpace& space, std::span<const double> position,
                           RepairPolicy policy, RandomSource& rng)
{
    if (position.size() != space.dim()) {
        throw ContractError("repair: position length does not match dimension");
    }
    std::vector<double> x(position.begin(), position.end());
    repair_in_place(space, x, policy, rng);
    return x;
}

Population init_population(const SearchSpace& space, std::size_t n, RandomSource& rng)
{
    if (n == 0) {
        throw ConfigError("init_population: population size must be at least 1");
    }
    Population pop;
    pop.members.resize(n);
    for (auto& ind : pop.members) {
        ind.position.resize(space.dim());
        for (std::size_t j = 0; j < space.dim(); ++j) {
            ind.position[j] = space.lower(j) + space.width(j) * rng.uniform();
        }
    }
    return pop;
}

}  // namespace mhlab
