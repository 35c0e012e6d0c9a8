#include "factories.hpp"
#include "mhlab/errors.hpp"

namespace mhlab::algo::detail {

namespace {

// Cuckoo search with a crossover (Levy) phase and a mutation phase. The
// switching probability adapts to the success ratio of the previous step.
class Sdcs final : public PopulationOptimizer {
public:
    Sdcs(const ParamSet& p, const OptimizerOptions& o)
        : PopulationOptimizer("sdcs", p, static_cast<std::size_t>(p.integer("pop_size")), o),
          omega_(p.real("omega")),
          J_(p.real("J")),
          a0_(p.real("a0")),
          beta_(p.real("beta"))
    {
        if (pop_size_ < 2) {
            throw ConfigError("sdcs: pop_size must be at least 2");
        }
    }

    std::size_t max_evals_per_step() const override { return 2 * pop_size_; }

    void step(Evaluator& eval, RandomSource& rng, const Schedule&) override
    {
        const std::size_t n = pop_.size();
        const double p_a = sdcs_switch(p_m_, omega_);
        std::size_t successes = 0;

        auto offer = [&](std::size_t i, Vec cand) {
            repair(cand, rng);
            Individual t{std::move(cand), std::nullopt};
            eval(t);
            if (*t.fitness < *pop_[i].fitness) ++successes;
            if (*t.fitness <= *pop_[i].fitness) pop_[i] = std::move(t);
        };

        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j = distinct_indices(rng, n, 1, i)[0];
            const double p = rng.uniform();
            const Vec levy = levy_vec(rng, beta_);
            offer(i, sdcs_crossover(pop_[i].position, pop_[j].position, p, J_, a0_, levy));
        }
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j = distinct_indices(rng, n, 1, i)[0];
            const double p = rng.uniform();
            const Vec r = uniform_vec(rng);
            const double gate = heaviside(p_a - rng.uniform());
            offer(i, sdcs_mutation(pop_[i].position, pop_[j].position, p, J_, gate, r));
        }
        p_m_ = static_cast<double>(successes) / static_cast<double>(2 * n);
        ++pop_.generation;
    }

private:
    double omega_;
    double J_;
    double a0_;
    double beta_;
    double p_m_ = 0.5;
};

}  // namespace

Made make_sdcs(const ParamSet& p, const OptimizerOptions& o) { return std::make_unique<Sdcs>(p, o); }

}  // namespace mhlab::algo::detail
