#ifndef MHLAB_LOOP_HPP
#define MHLAB_LOOP_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mhlab/metrics.hpp"
#include "mhlab/problem.hpp"
#include "mhlab/rng.hpp"

namespace mhlab {

/// Position of the current generation within the run. `max_iterations`
/// is the number of generations the budget can pay for after
/// initialization; schedule-driven operators use it as T.
struct Schedule {
    std::size_t iteration = 0;
    std::size_t max_iterations = 1;

    double progress() const noexcept
    {
        return max_iterations == 0 ? 1.0
                                   : static_cast<double>(iteration) / static_cast<double>(max_iterations);
    }
};

/// A population-based optimizer in generate/select form. Implementations
/// own all of their state; one instance serves exactly one run.
class Optimizer {
public:
    virtual ~Optimizer() = default;

    virtual std::string id() const = 0;
    /// Evaluations spent by initialize().
    virtual std::size_t initial_evals() const = 0;
    /// Upper bound on the evaluations one step() may spend.
    virtual std::size_t max_evals_per_step() const = 0;

    virtual void initialize(Evaluator& eval, RandomSource& rng) = 0;
    virtual void step(Evaluator& eval, RandomSource& rng, const Schedule& schedule) = 0;

    /// Current population (all subpopulations concatenated).
    virtual const Population& population() const = 0;
};

/// Run an optimizer until the next generation would overspend the budget.
/// The root stream is split into an "init" substream for initialization
/// and an "ops" substream for the operators. Throws ConfigError when the
/// budget cannot pay for initialization.
metrics::RunTrace run_population_loop(Optimizer& optimizer, const Problem& problem, Budget& budget,
                                      const RngStream& rng, metrics::Recorder& recorder);

/// Candidate generator for the single-solution loop: returns at least one
/// candidate around the incumbent.
using CandidateGenerator =
    std::function<std::vector<std::vector<double>>(std::span<const double> incumbent, RandomSource& rng)>;

/// Picks the next incumbent among the evaluated candidates. `fitness[0]` is
/// the incumbent itself, followed by one entry per candidate; returns an
/// index into that list.
using CandidateSelector = std::function<std::size_t(std::span<const double> fitness)>;

/// Gaussian neighbourhood of `count` candidates with per-coordinate stdev sigma.
CandidateGenerator gaussian_generator(double sigma, std::size_t count = 1);

/// Greedy: best candidate if strictly better than the incumbent, else stay.
CandidateSelector greedy_selector();

/// Single-solution generate/select loop from `start`. Stops before a step
/// whose candidates would overspend the budget. Trace diversity is 0.
metrics::RunTrace run_single_solution_loop(const CandidateGenerator& generator,
                                           const CandidateSelector& selector, const Problem& problem,
                                           std::span<const double> start, Budget& budget,
                                           RandomSource& rng, metrics::Recorder& recorder,
                                           RepairPolicy policy = RepairPolicy::clamp);

}  // namespace mhlab

#endif
