#include "factories.hpp"

namespace mhlab::algo::detail {

namespace {

// Aquila optimizer: expanded and narrowed exploration for the first two
// thirds of the run, then low flight and walk-and-grab.
class Ao final : public PopulationOptimizer {
public:
    Ao(const ParamSet& p, const OptimizerOptions& o)
        : PopulationOptimizer("ao", p, static_cast<std::size_t>(p.integer("pop_size")), o),
          alpha_(p.real("alpha")),
          delta_(p.real("delta"))
    {
    }

    std::size_t max_evals_per_step() const override { return pop_size_; }

    void step(Evaluator& eval, RandomSource& rng, const Schedule& schedule) override
    {
        constexpr double kLevyScale = 0.01;
        const double t = static_cast<double>(schedule.iteration + 1);
        const double T = static_cast<double>(schedule.max_iterations);
        const Vec best = eval.best_position();
        const Vec mean = mean_position();
        const Vec spiral = ao_spiral(dim());

        auto scaled_levy = [&] {
            Vec v = levy_vec(rng, 1.5);
            for (auto& x : v) x *= kLevyScale;
            return v;
        };

        for (std::size_t i = 0; i < pop_.size(); ++i) {
            Vec x;
            if (t <= 2.0 * T / 3.0) {
                if (rng.uniform() < 0.5) {
                    x = ao_high_soar(best, mean, t, T, rng.uniform());
                } else {
                    const std::size_t r = rng.index(pop_.size());
                    const Vec levy = scaled_levy();
                    x = ao_contour_flight(best, pop_[r].position, levy, spiral, rng.uniform());
                }
            } else {
                if (rng.uniform() < 0.5) {
                    const double ra = rng.uniform();
                    x = ao_low_flight(best, mean, alpha_, delta_, space(), ra, rng.uniform());
                } else {
                    const double qf = ao_quality(t, T, rng.uniform());
                    const double g1 = 2.0 * rng.uniform() - 1.0;
                    const double g2 = 2.0 * (1.0 - t / T);
                    const Vec levy = scaled_levy();
                    const double ra = rng.uniform();
                    x = ao_walk_grab(best, pop_[i].position, qf, g1, g2, levy, ra, rng.uniform());
                }
            }
            repair(x, rng);
            Individual c{std::move(x), std::nullopt};
            eval(c);
            if (*c.fitness < *pop_[i].fitness) pop_[i] = std::move(c);
        }
        ++pop_.generation;
    }

private:
    double alpha_;
    double delta_;
};

}  // namespace

Made make_ao(const ParamSet& p, const OptimizerOptions& o) { return std::make_unique<Ao>(p, o); }

}  // namespace mhlab::algo::detail
