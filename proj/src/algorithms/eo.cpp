#include <algorithm>
#include <cmath>

#include "factories.hpp"
#include "mhlab/errors.hpp"

namespace mhlab::algo::detail {

namespace {

// Equilibrium optimizer with a pool of the four best-so-far candidates and
// their mean, plus memory saving.
class Eo final : public PopulationOptimizer {
public:
    Eo(const ParamSet& p, const OptimizerOptions& o)
        : PopulationOptimizer("eo", p, static_cast<std::size_t>(p.integer("pop_size")), o),
          a1_(p.real("a1")),
          a2_(p.real("a2")),
          GP_(p.real("GP"))
    {
        if (pop_size_ < 4) {
            throw ConfigError("eo: pop_size must be at least 4");
        }
    }

    std::size_t max_evals_per_step() const override { return pop_size_; }

    void step(Evaluator& eval, RandomSource& rng, const Schedule& schedule) override
    {
        const double ratio = schedule.progress();
        const double tt = std::pow(1.0 - ratio, a2_ * ratio);
        std::vector<Vec> pool;
        for (const auto& e : equilibrium_) pool.push_back(e.position);
        pool.push_back(geometric_center(pool));

        for (std::size_t i = 0; i < pop_.size(); ++i) {
            const Vec& C = pop_[i].position;
            const Vec& Ceq = pool[rng.index(pool.size())];
            Vec lambda = uniform_vec(rng);
            for (auto& l : lambda) l = std::max(l, 1e-12);
            const Vec r = uniform_vec(rng);
            const Vec F = eo_exponential(a1_, r, lambda, tt);
            const double r1 = rng.uniform();
            const double r2 = rng.uniform();
            const double gcp = r2 >= GP_ ? 0.5 * r1 : 0.0;
            Vec g(C.size());
            for (std::size_t d = 0; d < C.size(); ++d) {
                const double g0 = gcp * (Ceq[d] - lambda[d] * C[d]);
                g[d] = g0 * F[d] / lambda[d];
            }
            Vec x = eo_update(C, Ceq, F, g);
            repair(x, rng);
            Individual c{std::move(x), std::nullopt};
            eval(c);
            if (*c.fitness <= *pop_[i].fitness) {
                offer(c);
                pop_[i] = std::move(c);
            }
        }
        ++pop_.generation;
    }

private:
    void on_initialized(Evaluator&) override
    {
        equilibrium_.clear();
        for (const auto& ind : pop_.members) offer(ind);
    }

    // Keep the four best candidates seen so far, earliest first on ties.
    void offer(const Individual& ind)
    {
        constexpr std::size_t kPool = 4;
        auto pos = std::upper_bound(equilibrium_.begin(), equilibrium_.end(), *ind.fitness,
                                    [](double f, const Individual& e) { return f < *e.fitness; });
        if (static_cast<std::size_t>(pos - equilibrium_.begin()) >= kPool) return;
        equilibrium_.insert(pos, ind);
        if (equilibrium_.size() > kPool) equilibrium_.pop_back();
    }

    double a1_;
    double a2_;
    double GP_;
    std::vector<Individual> equilibrium_;
};

}  // namespace

Made make_eo(const ParamSet& p, const OptimizerOptions& o) { return std::make_unique<Eo>(p, o); }

}  // namespace mhlab::algo::detail
