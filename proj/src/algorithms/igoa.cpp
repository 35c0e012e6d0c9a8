#include "factories.hpp"

namespace mhlab::algo::detail {

namespace {

// Grasshopper optimization with a Gaussian-perturbed social term and a
// Levy candidate that replaces the new position only when strictly better.
class Igoa final : public PopulationOptimizer {
public:
    Igoa(const ParamSet& p, const OptimizerOptions& o)
        : PopulationOptimizer("igoa", p, static_cast<std::size_t>(p.integer("pop_size")), o),
          cmax_(p.real("cmax")),
          cmin_(p.real("cmin")),
          beta_(p.real("beta"))
    {
    }

    std::size_t max_evals_per_step() const override { return 2 * pop_size_; }

    void step(Evaluator& eval, RandomSource& rng, const Schedule& schedule) override
    {
        const double c = igoa_coefficient(cmax_, cmin_, static_cast<double>(schedule.iteration + 1),
                                          static_cast<double>(schedule.max_iterations));
        const Vec target = eval.best_position();
        const auto positions = positions_of(pop_);

        for (std::size_t i = 0; i < pop_.size(); ++i) {
            const double alpha = rng.uniform();
            Vec gauss = normal_vec(rng);
            for (auto& g : gauss) g = 1.0 + alpha * g;
            Vec x = igoa_social_update(positions, i, c, space(), target, gauss);
            repair(x, rng);
            Individual star{std::move(x), std::nullopt};
            eval(star);

            const Vec r = uniform_vec(rng);
            const Vec levy = levy_vec(rng, beta_);
            Vec y = igoa_levy_candidate(star.position, r, levy);
            repair(y, rng);
            Individual lev{std::move(y), std::nullopt};
            eval(lev);
            pop_[i] = igoa_adopt_levy(*lev.fitness, *star.fitness) ? std::move(lev) : std::move(star);
        }
        ++pop_.generation;
    }

private:
    double cmax_;
    double cmin_;
    double beta_;
};

}  // namespace

Made make_igoa(const ParamSet& p, const OptimizerOptions& o) { return std::make_unique<Igoa>(p, o); }

}  // namespace mhlab::algo::detail
