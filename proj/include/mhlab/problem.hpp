#ifndef MHLAB_PROBLEM_HPP
#define MHLAB_PROBLEM_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mhlab/space.hpp"

namespace mhlab {

/// A minimization problem over a box with a known optimum value.
class Problem {
public:
    virtual ~Problem() = default;

    virtual double value(std::span<const double> x) const = 0;
    virtual const SearchSpace& space() const = 0;
    /// Known global minimum value f*.
    virtual double optimum() const = 0;
    virtual std::string name() const = 0;

    std::size_t dim() const { return space().dim(); }
};

/// Adapter for ad-hoc objectives (tests, toy landscapes).
class FunctionProblem final : public Problem {
public:
    using Fn = std::function<double(std::span<const double>)>;

    FunctionProblem(std::string name, SearchSpace space, Fn fn, double optimum = 0.0)
        : name_(std::move(name)), space_(std::move(space)), fn_(std::move(fn)), optimum_(optimum)
    {
    }

    double value(std::span<const double> x) const override { return fn_(x); }
    const SearchSpace& space() const override { return space_; }
    double optimum() const override { return optimum_; }
    std::string name() const override { return name_; }

private:
    std::string name_;
    SearchSpace space_;
    Fn fn_;
    double optimum_;
};

/// Counts and caches fitness evaluations against a Budget and tracks the
/// best-so-far solution. Ties keep the earlier solution.
class Evaluator {
public:
    Evaluator(const Problem& problem, Budget& budget) : problem_(problem), budget_(budget) {}

    /// Evaluate and cache on the individual. Throws BudgetExhausted (and
    /// leaves the individual untouched) when the budget is spent.
    double operator()(Individual& ind);
    double evaluate(std::span<const double> x);

    const Problem& problem() const noexcept { return problem_; }
    const SearchSpace& space() const { return problem_.space(); }
    const Budget& budget() const noexcept { return budget_; }
    std::uint64_t used() const noexcept { return budget_.used_evals; }
    std::uint64_t remaining() const noexcept { return budget_.remaining(); }

    bool has_best() const noexcept { return has_best_; }
    double best_fitness() const noexcept { return best_fitness_; }
    const std::vector<double>& best_position() const noexcept { return best_position_; }

private:
    const Problem& problem_;
    Budget& budget_;
    bool has_best_ = false;
    double best_fitness_ = 0.0;
    std::vector<double> best_position_;
};

/// Free-function form: evaluate `ind` on `problem`, charging `budget`.
double evaluate(const Problem& problem, Individual& ind, Budget& budget);

}  // namespace mhlab

#endif
