#include "factories.hpp"
#include "mhlab/benchmarks.hpp"

namespace mhlab::algo {

namespace {

class OriginMagnet final : public PopulationOptimizer {
public:
    explicit OriginMagnet(std::size_t n) : PopulationOptimizer("origin-magnet", {}, n, {}) {}

    std::size_t max_evals_per_step() const override { return pop_size_; }

    void step(Evaluator& eval, RandomSource&, const Schedule&) override
    {
        for (auto& ind : pop_.members) {
            for (auto& v : ind.position) v *= 0.5;
            ind.fitness.reset();
            eval(ind);
        }
        ++pop_.generation;
    }
};

class ShiftInvariantSearch final : public PopulationOptimizer {
public:
    explicit ShiftInvariantSearch(std::size_t n) : PopulationOptimizer("shift-invariant-search", {}, n, {}) {}

    std::size_t max_evals_per_step() const override { return pop_size_; }

    void initialize(Evaluator& eval, RandomSource& rng) override
    {
        space_ = &eval.space();
        pop_ = Population{};
        pop_.members.resize(pop_size_);
        sample(eval, rng);
    }

    void step(Evaluator& eval, RandomSource& rng, const Schedule&) override
    {
        sample(eval, rng);
        ++pop_.generation;
    }

private:
    // Fresh points in a +-20 cube around the shift; no clamping, so the
    // error distribution is the same wherever the shift lies.
    void sample(Evaluator& eval, RandomSource& rng)
    {
        const auto* bench = dynamic_cast<const bench::BenchmarkProblem*>(&eval.problem());
        const Vec center = bench ? bench->shift() : Vec(dim(), 0.0);
        for (auto& ind : pop_.members) {
            Vec x(dim());
            for (std::size_t d = 0; d < x.size(); ++d) x[d] = center[d] + rng.uniform(-20.0, 20.0);
            ind = Individual{std::move(x), std::nullopt};
            eval(ind);
        }
    }
};

}  // namespace

std::unique_ptr<PopulationOptimizer> make_origin_magnet(std::size_t pop_size)
{
    return std::make_unique<OriginMagnet>(pop_size);
}

std::unique_ptr<PopulationOptimizer> make_shift_invariant_search(std::size_t pop_size)
{
    return std::make_unique<ShiftInvariantSearch>(pop_size);
}

}  // namespace mhlab::algo
