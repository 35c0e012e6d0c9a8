#include "mhlab/problem.hpp"

#include "mhlab/errors.hpp"

namespace mhlab {

double Evaluator::evaluate(std::span<const double> x)
{
    if (budget_.exhausted()) {
        throw BudgetExhausted();
    }
    const double f = problem_.value(x);
    ++budget_.used_evals;
    if (!has_best_ || f < best_fitness_) {
        has_best_ = true;
        best_fitness_ = f;
        best_position_.assign(x.begin(), x.end());
    }
    return f;
}

double Evaluator::operator()(Individual& ind)
{
    const double f = evaluate(ind.position);
    ind.fitness = f;
    return f;
}

double evaluate(const Problem& problem, Individual& ind, Budget& budget)
{
    Evaluator ev(problem, budget);
    return ev(ind);
}

}  // namespace mhlab
