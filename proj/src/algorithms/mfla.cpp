#include "factories.hpp"
#include "mhlab/errors.hpp"

namespace mhlab::algo::detail {

namespace {

// Shuffled frog leaping with memeplex attractors (geometric or
// gravitational center) and a Gaussian refinement of the best frog.
class Mfla final : public PopulationOptimizer {
public:
    Mfla(const ParamSet& p, const OptimizerOptions& o)
        : PopulationOptimizer("mfla", p, static_cast<std::size_t>(p.integer("m") * p.integer("n")), o),
          m_(static_cast<std::size_t>(p.integer("m"))),
          n_(static_cast<std::size_t>(p.integer("n"))),
          beta_(p.real("beta"))
    {
        mfla_partition(pop_size_, m_, n_);
    }

    std::size_t max_evals_per_step() const override { return 3 * m_ + 1; }

    void step(Evaluator& eval, RandomSource& rng, const Schedule& schedule) override
    {
        const auto order = fitness_order(pop_);
        const auto plexes = mfla_partition(pop_.size(), m_, n_);
        const Vec global_best = pop_[order[0]].position;

        for (const auto& ranks : plexes) {
            std::vector<std::size_t> members;
            for (std::size_t r : ranks) members.push_back(order[r]);
            std::vector<Vec> xs;
            std::vector<double> fs;
            std::size_t best = members.front(), worst = members.front();
            for (std::size_t k : members) {
                xs.push_back(pop_[k].position);
                fs.push_back(*pop_[k].fitness);
                if (*pop_[k].fitness < *pop_[best].fitness) best = k;
                if (*pop_[k].fitness >= *pop_[worst].fitness) worst = k;
            }
            const Vec attractor = rng.uniform() < 0.5 ? geometric_center(xs) : gravitational_center(xs, fs);
            const Vec& xw = pop_[worst].position;

            const double r1 = rng.uniform();
            if (try_replace(eval, rng, worst, mfla_leap(xw, pop_[best].position, attractor, r1, rng.uniform()))) {
                continue;
            }
            if (try_replace(eval, rng, worst, mfla_leap(xw, global_best, xw, rng.uniform(), 0.0))) {
                continue;
            }
            Vec frog(dim());
            for (std::size_t d = 0; d < frog.size(); ++d) frog[d] = rng.uniform(space().lower(d), space().upper(d));
            pop_[worst] = Individual{std::move(frog), std::nullopt};
            eval(pop_[worst]);
        }

        const std::size_t b = pop_.best_index();
        const double scale = beta_ * (1.0 - schedule.progress()) * 0.01;
        Vec cand = pop_[b].position;
        for (std::size_t d = 0; d < cand.size(); ++d) cand[d] += scale * space().width(d) * rng.normal();
        repair(cand, rng);
        Individual t{std::move(cand), std::nullopt};
        eval(t);
        if (*t.fitness < *pop_[b].fitness) pop_[b] = std::move(t);
        ++pop_.generation;
    }

private:
    bool try_replace(Evaluator& eval, RandomSource& rng, std::size_t k, Vec x)
    {
        repair(x, rng);
        Individual t{std::move(x), std::nullopt};
        eval(t);
        if (*t.fitness <= *pop_[k].fitness) {
            pop_[k] = std::move(t);
            return true;
        }
        return false;
    }

    std::size_t m_;
    std::size_t n_;
    double beta_;
};

}  // namespace

Made make_mfla(const ParamSet& p, const OptimizerOptions& o) { return std::make_unique<Mfla>(p, o); }

}  // namespace mhlab::algo::detail
