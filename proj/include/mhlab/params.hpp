#ifndef MHLAB_PARAMS_HPP
#define MHLAB_PARAMS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mhlab {

enum class ParamKind { real, integer, categorical };

std::string_view to_string(ParamKind kind);

using ParamValue = std::variant<double, std::int64_t, std::string>;

/// One tunable parameter. Real and integer parameters use [lower, upper]
/// (inclusive); categorical parameters use `choices`.
struct ParamDef {
    std::string name;
    ParamKind kind = ParamKind::real;
    double lower = 0.0;
    double upper = 0.0;
    std::vector<std::string> choices;
    ParamValue default_value;
    std::string description;

    static ParamDef real(std::string name, double lo, double hi, double def, std::string description = {});
    static ParamDef integer(std::string name, std::int64_t lo, std::int64_t hi, std::int64_t def,
                            std::string description = {});
    static ParamDef categorical(std::string name, std::vector<std::string> choices, std::string def,
                                std::string description = {});

    /// True when `value` has the right alternative and lies in range.
    bool admits(const ParamValue& value) const;
};

class ParamSet;

class ParamSpace {
public:
    ParamSpace() = default;
    explicit ParamSpace(std::vector<ParamDef> defs);

    const std::vector<ParamDef>& defs() const noexcept { return defs_; }
    std::size_t size() const noexcept { return defs_.size(); }
    const ParamDef* find(std::string_view name) const;
    const ParamDef& at(std::string_view name) const;

    ParamSet defaults() const;

    /// Throws ConfigError naming the first unknown or out-of-range parameter.
    void validate(const ParamSet& params) const;

    /// Defaults overlaid with `overrides`, validated.
    ParamSet complete(const ParamSet& overrides) const;

    /// Parse a textual value for the named parameter ("0.5", "40", "rand/1").
    ParamValue parse_value(std::string_view name, std::string_view text) const;

private:
    std::vector<ParamDef> defs_;
};

/// Named parameter values. Ordered by name so serialization is stable.
class ParamSet {
public:
    ParamSet() = default;
    ParamSet(std::initializer_list<std::pair<const std::string, ParamValue>> init) : values_(init) {}

    void set(std::string name, ParamValue value) { values_[std::move(name)] = std::move(value); }
    bool contains(std::string_view name) const;
    const ParamValue& get(std::string_view name) const;

    double real(std::string_view name) const;
    std::int64_t integer(std::string_view name) const;
    const std::string& choice(std::string_view name) const;

    const std::map<std::string, ParamValue, std::less<>>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }

    /// "a=1;b=rand/1" in name order with round-trip precision for reals.
    std::string to_string() const;

    bool operator==(const ParamSet&) const = default;

private:
    std::map<std::string, ParamValue, std::less<>> values_;
};

std::string format_value(const ParamValue& value);

/// Inverse of ParamSet::to_string for `space`: "a=1;b=rand/1". Entries may
/// also be separated by commas or newlines. Values are parsed and range
/// checked but not completed with defaults.
ParamSet parse_param_set(const ParamSpace& space, std::string_view text);

}  // namespace mhlab

#endif
