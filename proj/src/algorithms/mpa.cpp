#include "factories.hpp"

namespace mhlab::algo::detail {

namespace {

// Marine predators: three velocity-ratio phases, marine memory after every
// move, and the FADs perturbation.
class Mpa final : public PopulationOptimizer {
public:
    Mpa(const ParamSet& p, const OptimizerOptions& o)
        : PopulationOptimizer("mpa", p, static_cast<std::size_t>(p.integer("pop_size")), o),
          P_(p.real("P")),
          fads_(p.real("FADs"))
    {
    }

    std::size_t max_evals_per_step() const override { return 2 * pop_size_; }

    void step(Evaluator& eval, RandomSource& rng, const Schedule& schedule) override
    {
        const std::size_t n = pop_.size();
        const double t = static_cast<double>(schedule.iteration);
        const double T = static_cast<double>(schedule.max_iterations);
        const double cf = mpa_cf(t, T);
        const Vec elite = eval.best_position();
        const int phase = t < T / 3.0 ? 1 : (t < 2.0 * T / 3.0 ? 2 : 3);

        for (std::size_t i = 0; i < n; ++i) {
            const Vec& prey = pop_[i].position;
            const Vec R = uniform_vec(rng);
            Vec x;
            if (phase == 1) {
                x = mpa_move_prey(prey, mpa_step_toward(elite, prey, normal_vec(rng)), P_, R);
            } else if (phase == 2 && i < n / 2) {
                x = mpa_move_prey(prey, mpa_step_toward(elite, prey, levy_vec(rng, 1.5)), P_, R);
            } else if (phase == 2) {
                x = mpa_move_elite(elite, mpa_step_around(elite, prey, normal_vec(rng)), P_, cf);
            } else {
                x = mpa_move_elite(elite, mpa_step_around(elite, prey, levy_vec(rng, 1.5)), P_, cf);
            }
            remember(eval, rng, i, std::move(x));
        }

        for (std::size_t i = 0; i < n; ++i) {
            const Vec& prey = pop_[i].position;
            Vec x = prey;
            const double r = rng.uniform();
            if (r < fads_) {
                for (std::size_t d = 0; d < x.size(); ++d) {
                    const double jump = space().lower(d) + rng.uniform() * space().width(d);
                    const double mask = rng.uniform() < fads_ ? 1.0 : 0.0;
                    x[d] += cf * jump * mask;
                }
            } else {
                const std::size_t a = rng.index(n);
                const std::size_t b = rng.index(n);
                const double s = fads_ * (1.0 - r) + r;
                for (std::size_t d = 0; d < x.size(); ++d) {
                    x[d] += s * (pop_[a].position[d] - pop_[b].position[d]);
                }
            }
            remember(eval, rng, i, std::move(x));
        }
        ++pop_.generation;
    }

private:
    // Marine memory: keep the move only if it does not worsen the prey.
    void remember(Evaluator& eval, RandomSource& rng, std::size_t i, Vec x)
    {
        repair(x, rng);
        Individual c{std::move(x), std::nullopt};
        eval(c);
        if (*c.fitness <= *pop_[i].fitness) pop_[i] = std::move(c);
    }

    double P_;
    double fads_;
};

}  // namespace

Made make_mpa(const ParamSet& p, const OptimizerOptions& o) { return std::make_unique<Mpa>(p, o); }

}  // namespace mhlab::algo::detail
