#include <utility>

#include "factories.hpp"
#include "mhlab/errors.hpp"

namespace mhlab::algo::detail {

namespace {

class De final : public PopulationOptimizer {
public:
    De(const ParamSet& p, const OptimizerOptions& o)
        : PopulationOptimizer("de", p, static_cast<std::size_t>(p.integer("pop_size")), o),
          F_(p.real("F")),
          CR_(p.real("CR")),
          strategy_(parse_de_strategy(p.choice("strategy"))),
          exponential_(p.choice("crossover") == "exponential")
    {
        if (pop_size_ < 6) {
            throw ConfigError("de: pop_size must be at least 6");
        }
    }

    std::size_t max_evals_per_step() const override { return pop_size_; }

    void step(Evaluator& eval, RandomSource& rng, const Schedule&) override
    {
        const std::size_t best = pop_.best_index();
        std::vector<Individual> next;
        next.reserve(pop_.size());
        for (std::size_t i = 0; i < pop_.size(); ++i) {
            const Vec mutant = de_mutate(strategy_, pop_, i, best, F_, rng);
            Vec trial = exponential_ ? de_crossover_exponential(pop_[i].position, mutant, CR_, rng)
                                     : de_crossover_binomial(pop_[i].position, mutant, CR_, rng);
            repair(trial, rng);
            Individual t{std::move(trial), std::nullopt};
            eval(t);
            next.push_back(de_select(pop_[i], t));
        }
        pop_.members = std::move(next);
        ++pop_.generation;
    }

private:
    double F_;
    double CR_;
    DeStrategy strategy_;
    bool exponential_;
};

// X1 is the first half of the population, X2 the second; each half draws
// its second partner from the pooled population.
class Ebcm final : public PopulationOptimizer {
public:
    Ebcm(const ParamSet& p, const OptimizerOptions& o)
        : PopulationOptimizer("ebcm", p, static_cast<std::size_t>(p.integer("pop_size")), o),
          F_(p.real("F")),
          cc_rate_(p.real("cc_rate"))
    {
        if (pop_size_ < 6) {
            throw ConfigError("ebcm: pop_size must be at least 6");
        }
    }

    std::size_t max_evals_per_step() const override { return pop_size_; }

    void step(Evaluator& eval, RandomSource& rng, const Schedule&) override
    {
        const std::size_t half = pop_.size() / 2;
        Population x1, x2;
        x1.members.assign(pop_.members.begin(), pop_.members.begin() + static_cast<std::ptrdiff_t>(half));
        x2.members.assign(pop_.members.begin() + static_cast<std::ptrdiff_t>(half), pop_.members.end());

        std::vector<Individual> next;
        next.reserve(pop_.size());
        for (std::size_t i = 0; i < pop_.size(); ++i) {
            Vec v = i < half ? ebcm_variant(x1, x2, i, F_, cc_rate_, rng)
                             : ebcm_variant(x2, x1, i - half, F_, cc_rate_, rng);
            repair(v, rng);
            Individual t{std::move(v), std::nullopt};
            eval(t);
            next.push_back(*t.fitness <= *pop_[i].fitness ? t : pop_[i]);
        }
        pop_.members = std::move(next);
        ++pop_.generation;
    }

private:
    double F_;
    double cc_rate_;
};

}  // namespace

Made make_de(const ParamSet& p, const OptimizerOptions& o) { return std::make_unique<De>(p, o); }
Made make_ebcm(const ParamSet& p, const OptimizerOptions& o) { return std::make_unique<Ebcm>(p, o); }

}  // namespace mhlab::algo::detail
