#include <algorithm>
#include <cmath>

#include "factories.hpp"

namespace mhlab::algo::detail {

namespace {

// Gravitational search with a PSO-style social pull toward the global best.
// Kbest shrinks linearly from the whole population to 2% of it.
class Hgsa final : public PopulationOptimizer {
public:
    Hgsa(const ParamSet& p, const OptimizerOptions& o)
        : PopulationOptimizer("hgsa", p, static_cast<std::size_t>(p.integer("pop_size")), o),
          G0_(p.real("G0"))
    {
    }

    std::size_t max_evals_per_step() const override { return pop_size_; }

    void step(Evaluator& eval, RandomSource& rng, const Schedule& schedule) override
    {
        constexpr double kFinalShare = 0.02;
        const std::size_t n = pop_.size();
        const double t = static_cast<double>(schedule.iteration);
        const double T = static_cast<double>(schedule.max_iterations);
        const double share = kFinalShare + (1.0 - t / T) * (1.0 - kFinalShare);
        const auto kbest = static_cast<std::size_t>(
            std::clamp(std::round(share * static_cast<double>(n)), 1.0, static_cast<double>(n)));

        const auto xs = positions_of(pop_);
        std::vector<double> fit(n);
        for (std::size_t i = 0; i < n; ++i) fit[i] = *pop_[i].fitness;
        const auto acc = gsa_accelerations(xs, fit, gsa_gravity(G0_, t, T), kbest, rng);
        const double c1 = hgsa_c1(t, T);
        const double c2 = hgsa_c2(t, T);
        const Vec gbest = eval.best_position();

        for (std::size_t i = 0; i < n; ++i) {
            velocity_[i] = hgsa_velocity(velocity_[i], acc[i], xs[i], gbest, rng.uniform(), c1, c2);
            Vec x = xs[i];
            for (std::size_t d = 0; d < x.size(); ++d) x[d] += velocity_[i][d];
            repair(x, rng);
            pop_[i] = Individual{std::move(x), std::nullopt};
            eval(pop_[i]);
        }
        ++pop_.generation;
    }

private:
    void on_initialized(Evaluator&) override { velocity_.assign(pop_.size(), Vec(dim(), 0.0)); }

    double G0_;
    std::vector<Vec> velocity_;
};

}  // namespace

Made make_hgsa(const ParamSet& p, const OptimizerOptions& o) { return std::make_unique<Hgsa>(p, o); }

}  // namespace mhlab::algo::detail
