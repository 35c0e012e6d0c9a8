#include "mhlab/params.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

#include <fmt/format.h>

#include "mhlab/errors.hpp"

namespace mhlab {

std::string_view to_string(ParamKind kind)
{
    switch (kind) {
    case ParamKind::real: return "real";
    case ParamKind::integer: return "integer";
    case ParamKind::categorical: return "categorical";
    }
    return "real";
}

ParamDef ParamDef::real(std::string name, double lo, double hi, double def, std::string description)
{
    return ParamDef{std::move(name), ParamKind::real, lo, hi, {}, def, std::move(description)};
}

ParamDef ParamDef::integer(std::string name, std::int64_t lo, std::int64_t hi, std::int64_t def,
                           std::string description)
{
    return ParamDef{std::move(name), ParamKind::integer, static_cast<double>(lo),
                    static_cast<double>(hi), {}, def, std::move(description)};
}

ParamDef ParamDef::categorical(std::string name, std::vector<std::string> choices, std::string def,
                               std::string description)
{
    return ParamDef{std::move(name), ParamKind::categorical, 0.0, 0.0, std::move(choices),
                    std::move(def), std::move(description)};
}

bool ParamDef::admits(const ParamValue& value) const
{
    switch (kind) {
    case ParamKind::real: {
        const auto* v = std::get_if<double>(&value);
        return v && std::isfinite(*v) && *v >= lower && *v <= upper;
    }
    case ParamKind::integer: {
        const auto* v = std::get_if<std::int64_t>(&value);
        return v && static_cast<double>(*v) >= lower && static_cast<double>(*v) <= upper;
    }
    case ParamKind::categorical: {
        const auto* v = std::get_if<std::string>(&value);
        return v && std::find(choices.begin(), choices.end(), *v) != choices.end();
    }
    }
    return false;
}

ParamSpace::ParamSpace(std::vector<ParamDef> defs) : defs_(std::move(defs))
{
    for (const auto& d : defs_) {
        if (d.kind == ParamKind::categorical && d.choices.empty()) {
            throw ConfigError("parameter '" + d.name + "' has no choices");
        }
        if (d.kind != ParamKind::categorical &&
            (!std::isfinite(d.lower) || !std::isfinite(d.upper) || d.lower > d.upper)) {
            throw ConfigError("parameter '" + d.name + "' has invalid bounds");
        }
        if (!d.admits(d.default_value)) {
            throw ConfigError("parameter '" + d.name + "' default lies outside its range");
        }
    }
}

const ParamDef* ParamSpace::find(std::string_view name) const
{
    for (const auto& d : defs_) {
        if (d.name == name) {
            return &d;
        }
    }
    return nullptr;
}

const ParamDef& ParamSpace::at(std::string_view name) const
{
    if (const auto* d = find(name)) {
        return *d;
    }
    throw ConfigError("unknown parameter '" + std::string(name) + "'");
}

ParamSet ParamSpace::defaults() const
{
    ParamSet out;
    for (const auto& d : defs_) {
        out.set(d.name, d.default_value);
    }
    return out;
}

void ParamSpace::validate(const ParamSet& params) const
{
    for (const auto& [name, value] : params.values()) {
        const auto* d = find(name);
        if (!d) {
            throw ConfigError("unknown parameter '" + name + "'");
        }
        if (!d->admits(value)) {
            if (d->kind == ParamKind::categorical) {
                throw ConfigError(fmt::format("parameter '{}' = {} is not one of its choices", name,
                                              format_value(value)));
            }
            throw ConfigError(fmt::format("parameter '{}' = {} outside [{}, {}] or wrong kind ({})",
                                          name, format_value(value), d->lower, d->upper,
                                          to_string(d->kind)));
        }
    }
}

ParamSet ParamSpace::complete(const ParamSet& overrides) const
{
    validate(overrides);
    ParamSet out = defaults();
    for (const auto& [name, value] : overrides.values()) {
        out.set(name, value);
    }
    return out;
}

ParamValue ParamSpace::parse_value(std::string_view name, std::string_view text) const
{
    const auto& d = at(name);
    switch (d.kind) {
    case ParamKind::real: {
        double v = 0.0;
        const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
        if (r.ec != std::errc{} || r.ptr != text.data() + text.size()) {
            throw ConfigError(fmt::format("parameter '{}': '{}' is not a real number", name, text));
        }
        return v;
    }
    case ParamKind::integer: {
        std::int64_t v = 0;
        const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
        if (r.ec != std::errc{} || r.ptr != text.data() + text.size()) {
            // Accept integral reals such as "40.0" from tuned-preset files.
            double dv = 0.0;
            const auto rd = std::from_chars(text.data(), text.data() + text.size(), dv);
            if (rd.ec == std::errc{} && rd.ptr == text.data() + text.size() && std::floor(dv) == dv) {
                return static_cast<std::int64_t>(dv);
            }
            throw ConfigError(fmt::format("parameter '{}': '{}' is not an integer", name, text));
        }
        return v;
    }
    case ParamKind::categorical:
        if (!d.admits(ParamValue(std::string(text)))) {
            throw ConfigError(fmt::format("parameter '{}': '{}' is not one of its choices", name, text));
        }
        return std::string(text);
    }
    return std::string(text);
}

bool ParamSet::contains(std::string_view name) const
{
    return values_.find(name) != values_.end();
}

const ParamValue& ParamSet::get(std::string_view name) const
{
    const auto it = values_.find(name);
    if (it == values_.end()) {
        throw ConfigError("missing parameter '" + std::string(name) + "'");
    }
    return it->second;
}

double ParamSet::real(std::string_view name) const
{
    const auto& v = get(name);
    if (const auto* d = std::get_if<double>(&v)) {
        return *d;
    }
    if (const auto* i = std::get_if<std::int64_t>(&v)) {
        return static_cast<double>(*i);
    }
    throw ConfigError("parameter '" + std::string(name) + "' is not numeric");
}

std::int64_t ParamSet::integer(std::string_view name) const
{
    const auto& v = get(name);
    if (const auto* i = std::get_if<std::int64_t>(&v)) {
        return *i;
    }
    throw ConfigError("parameter '" + std::string(name) + "' is not an integer");
}

const std::string& ParamSet::choice(std::string_view name) const
{
    const auto& v = get(name);
    if (const auto* s = std::get_if<std::string>(&v)) {
        return *s;
    }
    throw ConfigError("parameter '" + std::string(name) + "' is not categorical");
}

std::string format_value(const ParamValue& value)
{
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::string>) {
                return v;
            } else {
                return fmt::format("{}", v);
            }
        },
        value);
}

std::string ParamSet::to_string() const
{
    std::string out;
    for (const auto& [name, value] : values_) {
        if (!out.empty()) {
            out += ';';
        }
        out += name;
        out += '=';
        out += format_value(value);
    }
    return out;
}

ParamSet parse_param_set(const ParamSpace& space, std::string_view text)
{
    ParamSet out;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find_first_of(";,\n", start);
        if (end == std::string_view::npos) end = text.size();
        auto item = text.substr(start, end - start);
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) item.remove_prefix(1);
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.remove_suffix(1);
        if (!item.empty()) {
            const auto eq = item.find('=');
            if (eq == std::string_view::npos || eq == 0) {
                throw ConfigError(fmt::format("expected name=value, got '{}'", item));
            }
            const auto name = item.substr(0, eq);
            auto value = space.parse_value(name, item.substr(eq + 1));
            if (!space.at(name).admits(value)) {
                throw ConfigError(fmt::format("parameter '{}': {} is out of range", name, item.substr(eq + 1)));
            }
            out.set(std::string(name), std::move(value));
        }
        start = end + 1;
    }
    return out;
}

}  // namespace mhlab
