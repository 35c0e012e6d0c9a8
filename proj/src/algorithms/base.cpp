#include <algorithm>
#include <numeric>

#include "factories.hpp"
#include "mhlab/errors.hpp"

namespace mhlab::algo {

PopulationOptimizer::PopulationOptimizer(std::string id, ParamSet params, std::size_t pop_size,
                                         const OptimizerOptions& options)
    : id_(std::move(id)), params_(std::move(params)), pop_size_(pop_size), options_(options)
{
    if (pop_size_ == 0) {
        throw ConfigError(id_ + ": population size must be positive");
    }
}

void PopulationOptimizer::initialize(Evaluator& eval, RandomSource& rng)
{
    space_ = &eval.space();
    pop_ = init_population(*space_, pop_size_, rng);
    for (auto& ind : pop_.members) {
        eval(ind);
    }
    on_initialized(eval);
}

void PopulationOptimizer::initialize_from(Evaluator& eval, const std::vector<Vec>& positions)
{
    if (positions.size() != pop_size_) {
        throw ContractError(id_ + ": initialize_from got " + std::to_string(positions.size()) +
                            " positions for a population of " + std::to_string(pop_size_));
    }
    space_ = &eval.space();
    pop_ = Population{};
    for (const auto& x : positions) {
        pop_.members.push_back(Individual{x, std::nullopt});
        eval(pop_.members.back());
    }
    on_initialized(eval);
}

Vec PopulationOptimizer::uniform_vec(RandomSource& rng) const
{
    Vec v(dim());
    for (auto& x : v) x = rng.uniform();
    return v;
}

Vec PopulationOptimizer::normal_vec(RandomSource& rng) const
{
    Vec v(dim());
    for (auto& x : v) x = rng.normal();
    return v;
}

Vec PopulationOptimizer::levy_vec(RandomSource& rng, double beta) const
{
    Vec v(dim());
    for (auto& x : v) x = rng.levy(beta);
    return v;
}

Vec PopulationOptimizer::mean_position() const
{
    Vec m(dim(), 0.0);
    for (const auto& ind : pop_.members) {
        for (std::size_t d = 0; d < m.size(); ++d) m[d] += ind.position[d];
    }
    for (auto& v : m) v /= static_cast<double>(pop_.size());
    return m;
}

namespace detail {

std::vector<Vec> positions_of(const Population& pop)
{
    std::vector<Vec> xs;
    xs.reserve(pop.size());
    for (const auto& ind : pop.members) xs.push_back(ind.position);
    return xs;
}

std::vector<std::size_t> fitness_order(const Population& pop)
{
    std::vector<std::size_t> order(pop.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return *pop[a].fitness < *pop[b].fitness; });
    return order;
}

}  // namespace detail

}  // namespace mhlab::algo
