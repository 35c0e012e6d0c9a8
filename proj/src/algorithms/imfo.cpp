#include <algorithm>
#include <cmath>

#include "factories.hpp"

namespace mhlab::algo::detail {

namespace {

// Moth-flame optimization with a fitness-ratio weight on the flame and a
// late-phase binomial crossover between the old and the new moth.
class Imfo final : public PopulationOptimizer {
public:
    Imfo(const ParamSet& p, const OptimizerOptions& o)
        : PopulationOptimizer("imfo", p, static_cast<std::size_t>(p.integer("pop_size")), o),
          b_(p.real("b")),
          P_(p.real("P"))
    {
    }

    std::size_t max_evals_per_step() const override { return pop_size_; }

    void step(Evaluator& eval, RandomSource& rng, const Schedule& schedule) override
    {
        const std::size_t n = pop_.size();
        const double t = static_cast<double>(schedule.iteration + 1);
        const double T = static_cast<double>(schedule.max_iterations);
        const double nd = static_cast<double>(n);
        const auto flame_no =
            static_cast<std::size_t>(std::max(1.0, std::round(nd - t * (nd - 1.0) / T)));
        const Vec& best = flames_[0].position;
        const double f_best = *flames_[0].fitness;

        for (std::size_t i = 0; i < n; ++i) {
            const auto& flame = flames_[std::min(i, flame_no - 1)];
            Vec tt = uniform_vec(rng);
            for (auto& v : tt) v = 2.0 * v - 1.0;
            const double w = imfo_weight(f_best, *pop_[i].fitness);
            Vec x = imfo_update(pop_[i].position, flame.position, best, w, b_, tt);
            if (t > P_ * T) {
                x = de_crossover_binomial(pop_[i].position, x, std::min(1.0, t / T), rng);
            }
            repair(x, rng);
            pop_[i] = Individual{std::move(x), std::nullopt};
            eval(pop_[i]);
        }
        merge_flames();
        ++pop_.generation;
    }

private:
    void on_initialized(Evaluator&) override
    {
        flames_.clear();
        merge_flames();
    }

    void merge_flames()
    {
        std::vector<Individual> all = flames_;
        all.insert(all.end(), pop_.members.begin(), pop_.members.end());
        std::stable_sort(all.begin(), all.end(),
                         [](const Individual& a, const Individual& b) { return *a.fitness < *b.fitness; });
        all.resize(pop_.size());
        flames_ = std::move(all);
    }

    double b_;
    double P_;
    std::vector<Individual> flames_;
};

}  // namespace

Made make_imfo(const ParamSet& p, const OptimizerOptions& o) { return std::make_unique<Imfo>(p, o); }

}  // namespace mhlab::algo::detail
