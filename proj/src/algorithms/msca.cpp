#include <cmath>
#include <numbers>

#include "factories.hpp"
#include "mhlab/errors.hpp"

namespace mhlab::algo::detail {

namespace {

// Sine cosine algorithm with auxiliary moves applied with probability Pc
// (Cauchy jump, opposition, DE/rand/1, DE/current-to-best/1) and a chaotic
// local search around the best member.
class Msca final : public PopulationOptimizer {
public:
    Msca(const ParamSet& p, const OptimizerOptions& o)
        : PopulationOptimizer("msca", p, static_cast<std::size_t>(p.integer("pop_size")), o),
          Pc_(p.real("Pc")),
          a_(p.real("a")),
          mu_(p.real("mu"))
    {
        if (pop_size_ < 4) {
            throw ConfigError("msca: pop_size must be at least 4");
        }
    }

    std::size_t max_evals_per_step() const override { return 2 * pop_size_ + 1; }

    void step(Evaluator& eval, RandomSource& rng, const Schedule& schedule) override
    {
        const std::size_t n = pop_.size();
        const std::size_t D = dim();
        const double r1 = sca_amplitude(a_, static_cast<double>(schedule.iteration),
                                        static_cast<double>(schedule.max_iterations));
        const Vec dest = eval.best_position();

        for (std::size_t i = 0; i < n; ++i) {
            Vec r2(D), r3(D), r4(D);
            for (std::size_t d = 0; d < D; ++d) {
                r2[d] = 2.0 * std::numbers::pi * rng.uniform();
                r3[d] = 2.0 * rng.uniform();
                r4[d] = rng.uniform();
            }
            Vec x = sca_update(pop_[i].position, dest, r1, r2, r3, r4);
            repair(x, rng);
            pop_[i] = Individual{std::move(x), std::nullopt};
            eval(pop_[i]);
        }

        const Vec best_now = eval.best_position();
        for (std::size_t i = 0; i < n; ++i) {
            if (!(rng.uniform() < Pc_)) continue;
            Vec cand = auxiliary(i, best_now, rng);
            repair(cand, rng);
            Individual t{std::move(cand), std::nullopt};
            eval(t);
            if (*t.fitness < *pop_[i].fitness) pop_[i] = std::move(t);
        }

        chaotic_search(eval, rng, r1);
        ++pop_.generation;
    }

private:
    Vec auxiliary(std::size_t i, const Vec& best, RandomSource& rng) const
    {
        const Vec& x = pop_[i].position;
        const std::size_t D = x.size();
        Vec y(D);
        switch (rng.index(4)) {
        case 0:
            for (std::size_t d = 0; d < D; ++d) {
                const double c = std::tan(std::numbers::pi * (rng.uniform() - 0.5));
                y[d] = x[d] + c * std::abs(best[d] - x[d]);
            }
            break;
        case 1:
            for (std::size_t d = 0; d < D; ++d) y[d] = space().lower(d) + space().upper(d) - x[d];
            break;
        case 2: {
            const auto r = distinct_indices(rng, pop_.size(), 3, i);
            for (std::size_t d = 0; d < D; ++d) {
                y[d] = pop_[r[0]].position[d] + 0.5 * (pop_[r[1]].position[d] - pop_[r[2]].position[d]);
            }
            break;
        }
        default: {
            const auto r = distinct_indices(rng, pop_.size(), 2, i);
            for (std::size_t d = 0; d < D; ++d) {
                y[d] = x[d] + 0.5 * (best[d] - x[d]) + 0.5 * (pop_[r[0]].position[d] - pop_[r[1]].position[d]);
            }
            break;
        }
        }
        return y;
    }

    // Logistic-map perturbation of the best member with radius tied to r1.
    void chaotic_search(Evaluator& eval, RandomSource& rng, double r1)
    {
        const std::size_t b = pop_.best_index();
        const Vec& best = pop_[b].position;
        double z = rng.uniform();
        if (z <= 0.0 || z >= 1.0 || z == 0.25 || z == 0.5 || z == 0.75) z = 0.7;
        Vec cand(best.size());
        for (std::size_t d = 0; d < best.size(); ++d) {
            z = logistic_map(z, mu_);
            cand[d] = best[d] + (2.0 * z - 1.0) * 0.025 * r1 * space().width(d);
        }
        repair(cand, rng);
        Individual t{std::move(cand), std::nullopt};
        eval(t);
        if (*t.fitness < *pop_[b].fitness) pop_[b] = std::move(t);
    }

    double Pc_;
    double a_;
    double mu_;
};

}  // namespace

Made make_msca(const ParamSet& p, const OptimizerOptions& o) { return std::make_unique<Msca>(p, o); }

}  // namespace mhlab::algo::detail
