#ifndef MHLAB_TUNER_HPP
#define MHLAB_TUNER_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "mhlab/algorithms.hpp"
#include "mhlab/benchmarks.hpp"
#include "mhlab/params.hpp"
#include "mhlab/rng.hpp"

namespace mhlab::tuner {

/// Sampling distribution over a ParamSpace: truncated normals for numeric
/// parameters (uniform until the first update) and probability vectors for
/// categorical ones.
struct SamplingModel {
    struct Numeric {
        double mean = 0.0;
        double stdev = 0.0;
        bool uniform = true;
    };
    std::map<std::string, Numeric, std::less<>> numeric;
    std::map<std::string, std::vector<double>, std::less<>> categorical;

    static SamplingModel initial(const ParamSpace& space);
};

/// k configurations, every value inside its bounds. Integers are rounded
/// after sampling on [lower - 0.5, upper + 0.5].
std::vector<ParamSet> sample_configs(const SamplingModel& model, const ParamSpace& space, std::size_t k,
                                     RandomSource& rng);

/// Means move to the elite mean (clamped to bounds), stdevs shrink by
/// `decay`, categorical probabilities average with elite frequencies.
SamplingModel update_model(const SamplingModel& model, const ParamSpace& space, const std::vector<ParamSet>& elites,
                           double decay);

/// Cost of one configuration on one instance block (lower is better).
/// `block` picks the instance (block mod instance count) and the run seed;
/// the callee adds the fitness evaluations it spent to `evals`.
using Objective = std::function<double(const ParamSet& config, std::size_t block, std::uint64_t& evals)>;

struct Elimination {
    std::size_t config = 0;
    std::size_t block = 0;
    double rank_gap = 0.0;
};

struct RaceState {
    std::vector<ParamSet> configs;
    std::vector<bool> alive;
    /// scores[config][block]; blocks [0, blocks_run) are filled for every
    /// config that was alive when the block ran.
    std::vector<std::vector<double>> scores;
    std::vector<Elimination> history;
    std::size_t blocks_run = 0;
    std::size_t runs_used = 0;
    std::uint64_t evals_used = 0;

    std::vector<std::size_t> survivors() const;
    /// Survivors ordered best first by mean rank over the shared blocks.
    std::vector<std::size_t> ranked_survivors() const;
};

struct RaceOptions {
    /// Blocks evaluated before the first elimination test.
    std::size_t first_test = 5;
    double alpha = 0.05;
    std::size_t max_blocks = 1000;
};

/// Evaluate survivors block by block; after each block from `first_test`
/// on, Friedman over the survivors and drop those whose average rank
/// trails the best by more than the Nemenyi critical difference (Wilcoxon
/// when two remain). Results found in `cache` (keyed by config text and
/// block) are reused without charge. ConfigError on a zero budget or fewer
/// than two configs.
RaceState race(std::vector<ParamSet> configs, const Objective& objective, std::size_t budget_runs,
               const RaceOptions& options, std::map<std::pair<std::string, std::size_t>, double>* cache = nullptr);

struct TunerOptions {
    /// Tuning budget in configuration runs.
    std::size_t budget_runs = 2000;
    std::size_t first_test = 5;
    double alpha = 0.05;
    double decay = 0.9;
    std::size_t max_configs = 40;
    std::size_t elites = 3;
    std::uint64_t seed = 0;
};

struct IterationRecord {
    std::size_t iteration = 0;
    std::vector<std::string> configs;
    std::vector<Elimination> eliminations;
    std::vector<std::string> elites;
    std::size_t blocks_run = 0;
    std::size_t runs_used = 0;
    /// Best mean score over the first `first_test` blocks seen so far.
    double best_score = 0.0;
};

struct TuneResult {
    ParamSet best;
    double best_score = 0.0;
    std::size_t runs_used = 0;
    std::uint64_t evals_used = 0;
    std::vector<IterationRecord> log;
};

/// Iterated racing: sample, race, update the model from the elites, until
/// the budget cannot pay for another race. ConfigError when it cannot pay
/// for the first one.
TuneResult tune(const ParamSpace& space, const Objective& objective, const TunerOptions& options);

/// Eight training problems, two per class, drawn with their own seed.
bench::Suite training_instances(std::size_t dim, std::uint64_t seed, std::size_t per_class = 2);

/// Objective running a registered algorithm: final error on instance
/// block mod |instances| with `evals_per_run` evaluations and a seed
/// derived from (seed, block). Configurations whose population the budget
/// cannot initialize score the largest finite double.
Objective algorithm_objective(std::string algo, bench::Suite instances, std::uint64_t evals_per_run,
                              std::uint64_t seed, algo::OptimizerOptions options = {});

/// JSON audit log of every race.
void write_audit_log(std::ostream& out, const TuneResult& result);

}  // namespace mhlab::tuner

#endif
