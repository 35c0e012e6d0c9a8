#ifndef MHLAB_ERRORS_HPP
#define MHLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mhlab {

/// Invalid user-facing configuration: unknown ids, out-of-range parameters,
/// malformed specs. The message names the offending item.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised by the evaluator when no fitness evaluations remain.
class BudgetExhausted : public std::runtime_error {
public:
    BudgetExhausted() : std::runtime_error("evaluation budget exhausted") {}
};

/// A caller broke an operation's precondition (e.g. selecting between
/// unevaluated individuals).
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Too few usable observations for a statistical test.
class InsufficientData : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Known algorithm id that is deliberately not implemented.
class NotImplemented : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mhlab

#endif
