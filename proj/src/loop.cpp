#include "mhlab/loop.hpp"

#include <chrono>

#include "mhlab/errors.hpp"

namespace mhlab {

metrics::RunTrace run_population_loop(Optimizer& optimizer, const Problem& problem, Budget& budget,
                                      const RngStream& rng, metrics::Recorder& recorder)
{
    const auto started = std::chrono::steady_clock::now();
    const std::uint64_t init_cost = optimizer.initial_evals();
    const std::uint64_t step_cost = optimizer.max_evals_per_step();
    if (step_cost == 0) {
        throw ConfigError(optimizer.id() + ": step must spend at least one evaluation");
    }
    if (init_cost > budget.remaining()) {
        throw ConfigError(optimizer.id() + ": budget of " + std::to_string(budget.max_evals) +
                          " evaluations cannot pay for initialization (" + std::to_string(init_cost) + ")");
    }

    RngStream init_rng = rng.substream("init");
    RngStream ops_rng = rng.substream("ops");

    Evaluator eval(problem, budget);
    optimizer.initialize(eval, init_rng);

    Schedule schedule;
    schedule.max_iterations = static_cast<std::size_t>(budget.remaining() / step_cost);
    if (schedule.max_iterations == 0) {
        schedule.max_iterations = 1;
    }

    std::uint64_t gen = 0;
    recorder.record(gen, budget.used_evals, eval.best_fitness(), optimizer.population());
    while (budget.remaining() >= step_cost) {
        optimizer.step(eval, ops_rng, schedule);
        ++schedule.iteration;
        ++gen;
        recorder.record(gen, budget.used_evals, eval.best_fitness(), optimizer.population());
    }
    recorder.flush_last();

    metrics::RunTrace trace;
    trace.rows = recorder.rows();
    trace.best_position = eval.best_position();
    trace.best_fitness = eval.best_fitness();
    trace.used_evals = budget.used_evals;
    trace.generations = gen;
    trace.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    return trace;
}

CandidateGenerator gaussian_generator(double sigma, std::size_t count)
{
    return [sigma, count](std::span<const double> incumbent, RandomSource& rng) {
        std::vector<std::vector<double>> out(count, std::vector<double>(incumbent.begin(), incumbent.end()));
        for (auto& c : out) {
            for (auto& v : c) {
                v += sigma * rng.normal();
            }
        }
        return out;
    };
}

CandidateSelector greedy_selector()
{
    return [](std::span<const double> fitness) {
        std::size_t pick = 0;
        for (std::size_t i = 1; i < fitness.size(); ++i) {
            if (fitness[i] < fitness[pick]) {
                pick = i;
            }
        }
        return pick;
    };
}

metrics::RunTrace run_single_solution_loop(const CandidateGenerator& generator,
                                           const CandidateSelector& selector, const Problem& problem,
                                           std::span<const double> start, Budget& budget,
                                           RandomSource& rng, metrics::Recorder& recorder,
                                           RepairPolicy policy)
{
    const auto started = std::chrono::steady_clock::now();
    if (start.size() != problem.dim()) {
        throw ContractError("run_single_solution_loop: start point has wrong dimension");
    }
    Evaluator eval(problem, budget);
    Population pop;
    pop.members.push_back(Individual{repair(problem.space(), start, policy, rng), std::nullopt});
    Individual& current = pop.members.front();
    eval(current);

    std::uint64_t gen = 0;
    recorder.record(gen, budget.used_evals, eval.best_fitness(), pop);
    while (!budget.exhausted()) {
        auto candidates = generator(current.position, rng);
        if (candidates.empty()) {
            throw ConfigError("candidate generator produced no candidates");
        }
        if (candidates.size() > budget.remaining()) {
            break;
        }
        std::vector<double> fitness{*current.fitness};
        for (auto& c : candidates) {
            repair_in_place(problem.space(), c, policy, rng);
            fitness.push_back(eval.evaluate(c));
        }
        const std::size_t pick = selector(fitness);
        if (pick > 0) {
            current.position = std::move(candidates[pick - 1]);
            current.fitness = fitness[pick];
        }
        ++gen;
        pop.generation = gen;
        recorder.record(gen, budget.used_evals, eval.best_fitness(), pop);
    }
    recorder.flush_last();

    metrics::RunTrace trace;
    trace.rows = recorder.rows();
    trace.best_position = eval.best_position();
    trace.best_fitness = eval.best_fitness();
    trace.used_evals = budget.used_evals;
    trace.generations = gen;
    trace.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    return trace;
}

}  // namespace mhlab
