#include <algorithm>
#include <cmath>

#include "factories.hpp"
#include "mhlab/errors.hpp"

namespace mhlab::algo::detail {

namespace {

// Gaining-sharing knowledge: junior dimensions learn from rank neighbours,
// senior dimensions from the top, middle and bottom groups.
class Gsk final : public PopulationOptimizer {
public:
    Gsk(const ParamSet& p, const OptimizerOptions& o)
        : PopulationOptimizer("gsk", p, static_cast<std::size_t>(p.integer("pop_size")), o),
          P_(p.real("P")),
          kf_(p.real("kf")),
          kr_(p.real("kr")),
          K_(static_cast<double>(p.integer("K")))
    {
        if (pop_size_ < 3) {
            throw ConfigError("gsk: pop_size must be at least 3");
        }
    }

    std::size_t max_evals_per_step() const override { return pop_size_; }

    void step(Evaluator& eval, RandomSource& rng, const Schedule& schedule) override
    {
        const std::size_t n = pop_.size();
        const std::size_t D = dim();
        const auto order = fitness_order(pop_);
        std::vector<std::size_t> rank(n);
        for (std::size_t r = 0; r < n; ++r) rank[order[r]] = r;

        const std::size_t junior = gsk_junior_dims(D, static_cast<double>(schedule.iteration),
                                                   static_cast<double>(schedule.max_iterations), K_);
        const double junior_share = static_cast<double>(junior) / static_cast<double>(D);
        std::size_t p = std::max<std::size_t>(1, static_cast<std::size_t>(std::round(P_ * static_cast<double>(n))));
        p = std::min(p, (n - 1) / 2);

        std::vector<Vec> proposals(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t r = rank[i];
            const std::size_t better = r > 0 ? order[r - 1] : i;
            const std::size_t worse = r + 1 < n ? order[r + 1] : i;
            const std::size_t xr = distinct_indices(rng, n, 1, i)[0];
            const Vec& x = pop_[i].position;
            const double fi = *pop_[i].fitness;

            const Vec jun = gsk_junior(x, pop_[better].position, pop_[worse].position, pop_[xr].position, fi,
                                       *pop_[xr].fitness, kf_);
            const std::size_t pb = order[rng.index(p)];
            const std::size_t pw = order[n - 1 - rng.index(p)];
            const std::size_t xm = order[p + rng.index(n - 2 * p)];
            const Vec sen = gsk_senior(x, pop_[pb].position, pop_[pw].position, pop_[xm].position,
                                       pop_[xr].position, fi, *pop_[xm].fitness, kf_,
                                       options_.gsk_symmetric_senior);

            Vec y = x;
            for (std::size_t d = 0; d < D; ++d) {
                const double proposed = rng.uniform() < junior_share ? jun[d] : sen[d];
                if (rng.uniform() <= kr_) y[d] = proposed;
            }
            repair(y, rng);
            proposals[i] = std::move(y);
        }
        for (std::size_t i = 0; i < n; ++i) {
            Individual t{std::move(proposals[i]), std::nullopt};
            eval(t);
            if (*t.fitness <= *pop_[i].fitness) pop_[i] = std::move(t);
        }
        ++pop_.generation;
    }

private:
    double P_;
    double kf_;
    double kr_;
    double K_;
};

}  // namespace

Made make_gsk(const ParamSet& p, const OptimizerOptions& o) { return std::make_unique<Gsk>(p, o); }

}  // namespace mhlab::algo::detail
