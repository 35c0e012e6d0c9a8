#include "mhlab/benchmarks.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "mhlab/errors.hpp"

namespace mhlab::bench {

namespace {

using std::numbers::e;
using std::numbers::pi;

double sphere(std::span<const double> x)
{
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

double bent_cigar(std::span<const double> x)
{
    double s = x[0] * x[0];
    for (std::size_t i = 1; i < x.size(); ++i) s += 1e6 * x[i] * x[i];
    return s;
}

double zakharov(std::span<const double> x)
{
    double s1 = 0.0;
    double s2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s1 += x[i] * x[i];
        s2 += 0.5 * static_cast<double>(i + 1) * x[i];
    }
    return s1 + s2 * s2 + s2 * s2 * s2 * s2;
}

double elliptic(std::span<const double> x)
{
    const std::size_t d = x.size();
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        const double expo = d == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(d - 1);
        s += std::pow(1e6, expo) * x[i] * x[i];
    }
    return s;
}

double rosenbrock(std::span<const double> x)
{
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double a = x[i] * x[i] - x[i + 1];
        const double b = x[i] - 1.0;
        s += 100.0 * a * a + b * b;
    }
    if (x.size() == 1) {
        s = (x[0] - 1.0) * (x[0] - 1.0);
    }
    return s;
}

double rastrigin(std::span<const double> x)
{
    double s = 0.0;
    for (double v : x) s += v * v - 10.0 * std::cos(2.0 * pi * v) + 10.0;
    return s;
}

double ackley(std::span<const double> x)
{
    const double n = static_cast<double>(x.size());
    double sq = 0.0;
    double cs = 0.0;
    for (double v : x) {
        sq += v * v;
        cs += std::cos(2.0 * pi * v);
    }
    const double value = -20.0 * std::exp(-0.2 * std::sqrt(sq / n)) - std::exp(cs / n) + 20.0 + e;
    // Round-off at the optimum lands a few ulps either side of zero.
    return std::abs(value) < 1e-14 ? 0.0 : value;
}

double griewank(std::span<const double> x)
{
    double s = 0.0;
    double p = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s += x[i] * x[i] / 4000.0;
        p *= std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
    }
    return s - p + 1.0;
}

constexpr double kSchwefelCenter = 420.9687462275036;
constexpr double kSchwefelConstant = 418.982887272433799807913601398;

// Bounded variant: beyond |z| = 500 the landscape folds back with a
// quadratic penalty so the minimizer at 420.97 stays global.
double schwefel(std::span<const double> x)
{
    const double d = static_cast<double>(x.size());
    double s = 0.0;
    for (double z : x) {
        if (z > 500.0) {
            const double r = 500.0 - std::fmod(z, 500.0);
            s += r * std::sin(std::sqrt(std::abs(r))) - (z - 500.0) * (z - 500.0) / (10000.0 * d);
        } else if (z < -500.0) {
            const double r = std::fmod(std::abs(z), 500.0) - 500.0;
            s += r * std::sin(std::sqrt(std::abs(r))) - (z + 500.0) * (z + 500.0) / (10000.0 * d);
        } else {
            s += z * std::sin(std::sqrt(std::abs(z)));
        }
    }
    const double value = kSchwefelConstant * d - s;
    return std::abs(value) < 1e-9 * d ? 0.0 : value;
}

double levy(std::span<const double> x)
{
    const std::size_t d = x.size();
    auto w = [&](std::size_t i) { return 1.0 + (x[i] - 1.0) / 4.0; };
    const double w0 = w(0);
    double s = std::sin(pi * w0) * std::sin(pi * w0);
    for (std::size_t i = 0; i + 1 < d; ++i) {
        const double wi = w(i);
        const double t = std::sin(pi * wi + 1.0);
        s += (wi - 1.0) * (wi - 1.0) * (1.0 + 10.0 * t * t);
    }
    const double wd = w(d - 1);
    const double t = std::sin(2.0 * pi * wd);
    s += (wd - 1.0) * (wd - 1.0) * (1.0 + t * t);
    return std::abs(s) < 1e-15 ? 0.0 : s;
}

constexpr std::array<BaseFunction, 10> kBases{{
    {"sphere", Modality::unimodal, true, 0.0, 1.0, &sphere},
    {"bent-cigar", Modality::unimodal, false, 0.0, 1.0, &bent_cigar},
    {"zakharov", Modality::unimodal, false, 0.0, 1.0, &zakharov},
    {"elliptic", Modality::unimodal, true, 0.0, 1.0, &elliptic},
    {"rosenbrock", Modality::multimodal, false, 1.0, 2.048 / 100.0, &rosenbrock},
    {"rastrigin", Modality::multimodal, true, 0.0, 5.12 / 100.0, &rastrigin},
    {"ackley", Modality::multimodal, false, 0.0, 1.0, &ackley},
    {"griewank", Modality::multimodal, false, 0.0, 600.0 / 100.0, &griewank},
    {"schwefel", Modality::multimodal, true, kSchwefelCenter, 1000.0 / 100.0, &schwefel},
    {"levy", Modality::multimodal, false, 1.0, 1.0, &levy},
}};

}  // namespace

std::span<const BaseFunction> base_functions()
{
    return kBases;
}

const BaseFunction& base_function(std::string_view name)
{
    for (const auto& b : kBases) {
        if (b.name == name) {
            return b;
        }
    }
    throw ConfigError("unknown base function '" + std::string(name) + "'");
}

double eval_base(std::string_view name, std::span<const double> x)
{
    if (x.empty()) {
        throw ContractError("eval_base: empty input");
    }
    return base_function(name).evaluate(x);
}

double eval_centered(const BaseFunction& base, std::span<const double> z)
{
    std::vector<double> y(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        y[i] = base.input_scale * z[i] + base.center;
    }
    return base.evaluate(y);
}

std::vector<double> Transform::apply(std::span<const double> x) const
{
    const std::size_t d = x.size();
    std::vector<double> diff(d);
    for (std::size_t i = 0; i < d; ++i) {
        diff[i] = x[i] - (shift.empty() ? 0.0 : shift[i]);
    }
    if (rotation.empty()) {
        return diff;
    }
    std::vector<double> z(d, 0.0);
    for (std::size_t r = 0; r < d; ++r) {
        double acc = 0.0;
        const double* row = rotation.data() + r * d;
        for (std::size_t c = 0; c < d; ++c) {
            acc += row[c] * diff[c];
        }
        z[r] = acc;
    }
    return z;
}

std::vector<double> random_shift(std::size_t dim, RandomSource& rng)
{
    std::vector<double> o(dim);
    for (auto& v : o) {
        v = rng.uniform(-80.0, 80.0);
    }
    return o;
}

std::vector<double> random_rotation(std::size_t dim, RandomSource& rng)
{
    std::vector<double> m(dim * dim);
    for (auto& v : m) {
        v = rng.normal();
    }
    // Modified Gram-Schmidt over rows, two passes for orthogonality to ~1e-15.
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t r = 0; r < dim; ++r) {
            double* row = m.data() + r * dim;
            for (std::size_t q = 0; q < r; ++q) {
                const double* prev = m.data() + q * dim;
                double dot = 0.0;
                for (std::size_t c = 0; c < dim; ++c) dot += row[c] * prev[c];
                for (std::size_t c = 0; c < dim; ++c) row[c] -= dot * prev[c];
            }
            double norm = 0.0;
            for (std::size_t c = 0; c < dim; ++c) norm += row[c] * row[c];
            norm = std::sqrt(norm);
            if (norm < 1e-12) {
                throw ConfigError("random_rotation: degenerate Gaussian matrix");
            }
            for (std::size_t c = 0; c < dim; ++c) row[c] /= norm;
        }
    }
    return m;
}

double orthogonality_error(std::span<const double> m, std::size_t dim)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < dim; ++k) {
                acc += m[k * dim + i] * m[k * dim + j];
            }
            worst = std::max(worst, std::abs(acc - (i == j ? 1.0 : 0.0)));
        }
    }
    return worst;
}

void HybridSpec::validate(std::size_t dim) const
{
    if (segments.empty()) {
        throw ConfigError("hybrid: no segments");
    }
    std::vector<int> seen(dim, 0);
    for (const auto& s : segments) {
        base_function(s.base);
        if (s.dims.empty()) {
            throw ConfigError("hybrid: segment '" + s.base + "' covers no dimensions");
        }
        if (!(s.weight >= 0.0)) {
            throw ConfigError("hybrid: negative segment weight");
        }
        for (std::size_t d : s.dims) {
            if (d >= dim) {
                throw ConfigError("hybrid: dimension index " + std::to_string(d) + " out of range");
            }
            if (++seen[d] > 1) {
                throw ConfigError("hybrid: dimension " + std::to_string(d) + " assigned twice");
            }
        }
    }
    for (std::size_t d = 0; d < dim; ++d) {
        if (seen[d] == 0) {
            throw ConfigError("hybrid: dimension " + std::to_string(d) + " not covered");
        }
    }
}

double eval_hybrid(const HybridSpec& spec, std::span<const double> z)
{
    double total = 0.0;
    std::vector<double> part;
    for (const auto& s : spec.segments) {
        part.resize(s.dims.size());
        for (std::size_t k = 0; k < s.dims.size(); ++k) {
            part[k] = z[s.dims[k]];
        }
        total += s.weight * eval_centered(base_function(s.base), part);
    }
    return total;
}

void CompositionSpec::validate(std::size_t dim) const
{
    if (components.empty()) {
        throw ConfigError("composition: no components");
    }
    for (const auto& c : components) {
        if (!c.problem || c.problem->dim() != dim) {
            throw ConfigError("composition: component dimension mismatch");
        }
        if (!(c.sigma > 0.0)) {
            throw ConfigError("composition: sigma must be positive");
        }
    }
}

std::vector<double> composition_weights(const CompositionSpec& spec, std::span<const double> x)
{
    const std::size_t n = spec.components.size();
    const double d = static_cast<double>(x.size());
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto o = spec.components[i].problem->optimizer();
        double dist2 = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            dist2 += (x[j] - o[j]) * (x[j] - o[j]);
        }
        if (dist2 == 0.0) {
            // Exactly on a component optimum: that component alone.
            std::fill(w.begin(), w.end(), 0.0);
            w[i] = 1.0;
            return w;
        }
        const double sigma = spec.components[i].sigma;
        w[i] = std::exp(-dist2 / (2.0 * d * sigma * sigma)) / std::sqrt(dist2);
    }
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    if (!(total > 0.0) || !std::isfinite(total)) {
        std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(n));
        return w;
    }
    for (auto& v : w) {
        v /= total;
    }
    return w;
}

double eval_composition(const CompositionSpec& spec, std::span<const double> x)
{
    const auto w = composition_weights(spec, x);
    double total = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] == 0.0) {
            continue;
        }
        const auto& c = spec.components[i];
        total += w[i] * (c.lambda * c.problem->value(x) + c.bias);
    }
    return total;
}

std::string_view to_string(ProblemClass c)
{
    switch (c) {
    case ProblemClass::unimodal: return "unimodal";
    case ProblemClass::multimodal: return "multimodal";
    case ProblemClass::hybrid: return "hybrid";
    case ProblemClass::composition: return "composition";
    }
    return "unimodal";
}

namespace {

void check_transform(const Transform& t, std::size_t dim)
{
    if (dim == 0) {
        throw ConfigError("benchmark: dimension must be at least 1");
    }
    if (!t.shift.empty() && t.shift.size() != dim) {
        throw ConfigError("benchmark: shift length does not match dimension");
    }
    if (!t.rotation.empty() && t.rotation.size() != dim * dim) {
        throw ConfigError("benchmark: rotation is not dim x dim");
    }
}

}  // namespace

BenchmarkProblem BenchmarkProblem::from_base(const BaseFunction& base, std::size_t dim, Transform transform,
                                             std::size_t index, std::uint64_t rotation_seed)
{
    check_transform(transform, dim);
    BenchmarkProblem p;
    p.class_ = base.modality == Modality::unimodal ? ProblemClass::unimodal : ProblemClass::multimodal;
    p.base_ = &base;
    if (transform.shift.empty()) {
        transform.shift.assign(dim, 0.0);
    }
    p.transform_ = std::move(transform);
    p.space_ = SearchSpace::box(dim, -100.0, 100.0);
    p.index_ = index;
    p.rotation_seed_ = rotation_seed;
    p.base_name_ = std::string(base.name);
    return p;
}

BenchmarkProblem BenchmarkProblem::from_hybrid(HybridSpec spec, std::size_t dim, Transform transform,
                                               std::size_t index, std::uint64_t rotation_seed)
{
    check_transform(transform, dim);
    spec.validate(dim);
    BenchmarkProblem p;
    p.class_ = ProblemClass::hybrid;
    std::string names;
    for (const auto& s : spec.segments) {
        names += (names.empty() ? "" : "+") + s.base;
    }
    p.base_name_ = "hybrid(" + names + ")";
    p.hybrid_ = std::move(spec);
    if (transform.shift.empty()) {
        transform.shift.assign(dim, 0.0);
    }
    p.transform_ = std::move(transform);
    p.space_ = SearchSpace::box(dim, -100.0, 100.0);
    p.index_ = index;
    p.rotation_seed_ = rotation_seed;
    return p;
}

BenchmarkProblem BenchmarkProblem::from_composition(CompositionSpec spec, std::size_t dim, double bias,
                                                    std::size_t index)
{
    spec.validate(dim);
    BenchmarkProblem p;
    p.class_ = ProblemClass::composition;
    std::string names;
    std::size_t best = 0;
    double best_value = 0.0;
    for (std::size_t i = 0; i < spec.components.size(); ++i) {
        const auto& c = spec.components[i];
        names += (names.empty() ? "" : "+") + c.problem->base_name();
        const double v = c.lambda * c.problem->optimum() + c.bias;
        if (i == 0 || v < best_value) {
            best = i;
            best_value = v;
        }
    }
    p.base_name_ = "composition(" + names + ")";
    p.composition_shift_ = spec.components[best].problem->optimizer();
    p.rotation_seed_ = spec.components[best].problem->rotation_seed();
    p.composition_ = std::move(spec);
    // The blend itself contributes best_value at the minimizer.
    p.transform_.bias = bias + best_value;
    p.transform_.shift.assign(dim, 0.0);
    p.space_ = SearchSpace::box(dim, -100.0, 100.0);
    p.index_ = index;
    p.composition_bias_ = best_value;
    return p;
}

double BenchmarkProblem::value(std::span<const double> x) const
{
    switch (class_) {
    case ProblemClass::unimodal:
    case ProblemClass::multimodal:
        return eval_centered(*base_, transform_.apply(x)) + transform_.bias;
    case ProblemClass::hybrid:
        return eval_hybrid(hybrid_, transform_.apply(x)) + transform_.bias;
    case ProblemClass::composition:
        return eval_composition(composition_, x) + (transform_.bias - composition_bias_);
    }
    return 0.0;
}

std::string BenchmarkProblem::name() const
{
    return fmt::format("F{}:{}:D{}", index_, base_name_, space_.dim());
}

std::vector<double> BenchmarkProblem::optimizer() const
{
    return class_ == ProblemClass::composition ? composition_shift_ : transform_.shift;
}

const std::vector<double>& BenchmarkProblem::shift() const
{
    return class_ == ProblemClass::composition ? composition_shift_ : transform_.shift;
}

BenchmarkProblem make_problem(std::string_view base, std::size_t dim, ShiftMode shift_mode,
                              RotationMode rotate, std::size_t index, const RngStream& rng)
{
    const auto& fn = base_function(base);
    if (dim == 0) {
        throw ConfigError("make_problem: dimension must be at least 1");
    }
    Transform t;
    if (shift_mode == ShiftMode::random_interior) {
        RngStream s = rng.substream("shift");
        t.shift = random_shift(dim, s);
    } else {
        t.shift.assign(dim, 0.0);
    }
    std::uint64_t rotation_seed = 0;
    if (rotate == RotationMode::random_orthogonal) {
        RngStream r = rng.substream("rotation");
        rotation_seed = r.seed();
        t.rotation = random_rotation(dim, r);
    }
    t.bias = 100.0 * static_cast<double>(index);
    return BenchmarkProblem::from_base(fn, dim, std::move(t), index, rotation_seed);
}

namespace {

constexpr std::array<std::string_view, 4> kUnimodalCycle{"bent-cigar", "zakharov", "elliptic", "sphere"};
constexpr std::array<std::string_view, 6> kMultimodalCycle{"rosenbrock", "rastrigin", "schwefel",
                                                           "levy", "ackley", "griewank"};
constexpr std::array<std::string_view, 10> kAllBases{"bent-cigar", "rastrigin", "zakharov", "schwefel",
                                                     "elliptic", "levy", "rosenbrock", "ackley",
                                                     "griewank", "sphere"};

double composition_lambda(std::string_view base)
{
    return (base == "bent-cigar" || base == "elliptic" || base == "zakharov") ? 1e-6 : 1.0;
}

HybridSpec make_hybrid_spec(std::size_t k, std::size_t dim, RandomSource& rng)
{
    std::vector<std::size_t> perm(dim);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = dim; i > 1; --i) {
        std::swap(perm[i - 1], perm[rng.index(i)]);
    }
    const std::array<std::string_view, 3> bases{kAllBases[k % 10], kAllBases[(k + 3) % 10],
                                                kAllBases[(k + 7) % 10]};
    const std::array<double, 3> share{0.3, 0.3, 0.4};
    HybridSpec spec;
    std::size_t start = 0;
    for (std::size_t s = 0; s < 3; ++s) {
        std::size_t len = s == 2 ? dim - start
                                 : static_cast<std::size_t>(std::ceil(share[s] * static_cast<double>(dim)));
        len = std::min(len, dim - start);
        if (len == 0) {
            continue;
        }
        HybridSegment seg;
        seg.base = std::string(bases[s]);
        seg.dims.assign(perm.begin() + static_cast<std::ptrdiff_t>(start),
                        perm.begin() + static_cast<std::ptrdiff_t>(start + len));
        spec.segments.push_back(std::move(seg));
        start += len;
    }
    return spec;
}

}  // namespace

Suite make_suite(std::size_t dim, const SuiteCounts& counts, bool shifted, std::uint64_t seed)
{
    if (dim == 0) {
        throw ConfigError("make_suite: dimension must be at least 1");
    }
    Suite suite;
    suite.reserve(counts.total());
    std::size_t index = 0;
    auto problem_stream = [&](std::size_t idx) { return RngStream(mix64(seed, idx)); };
    auto shift_for = [&](const RngStream& ps) {
        if (!shifted) {
            return std::vector<double>(dim, 0.0);
        }
        RngStream s = ps.substream("shift");
        return random_shift(dim, s);
    };
    auto rotation_for = [&](const RngStream& ps, std::string_view label, std::uint64_t& rseed) {
        RngStream r = ps.substream(label);
        rseed = r.seed();
        return random_rotation(dim, r);
    };

    for (std::size_t k = 0; k < counts.unimodal + counts.multimodal; ++k) {
        ++index;
        const RngStream ps = problem_stream(index);
        const auto base = k < counts.unimodal ? kUnimodalCycle[k % kUnimodalCycle.size()]
                                              : kMultimodalCycle[(k - counts.unimodal) % kMultimodalCycle.size()];
        Transform t;
        t.shift = shift_for(ps);
        std::uint64_t rseed = 0;
        t.rotation = rotation_for(ps, "rotation", rseed);
        t.bias = 100.0 * static_cast<double>(index);
        suite.push_back(std::make_shared<const BenchmarkProblem>(
            BenchmarkProblem::from_base(base_function(base), dim, std::move(t), index, rseed)));
    }
    for (std::size_t k = 0; k < counts.hybrid; ++k) {
        ++index;
        const RngStream ps = problem_stream(index);
        RngStream part = ps.substream("partition");
        HybridSpec spec = make_hybrid_spec(k, dim, part);
        Transform t;
        t.shift = shift_for(ps);
        std::uint64_t rseed = 0;
        t.rotation = rotation_for(ps, "rotation", rseed);
        t.bias = 100.0 * static_cast<double>(index);
        suite.push_back(std::make_shared<const BenchmarkProblem>(
            BenchmarkProblem::from_hybrid(std::move(spec), dim, std::move(t), index, rseed)));
    }
    for (std::size_t k = 0; k < counts.composition; ++k) {
        ++index;
        const RngStream ps = problem_stream(index);
        const std::array<std::string_view, 3> bases{kAllBases[k % 10], kAllBases[(k + 4) % 10],
                                                    kAllBases[(k + 7) % 10]};
        const std::array<double, 3> sigma{10.0, 20.0, 30.0};
        const std::array<double, 3> bias{0.0, 100.0, 200.0};
        CompositionSpec spec;
        for (std::size_t c = 0; c < 3; ++c) {
            Transform t;
            if (c == 0) {
                t.shift = shift_for(ps);
            } else {
                RngStream s = ps.substream(fmt::format("component-shift-{}", c));
                t.shift = random_shift(dim, s);
            }
            std::uint64_t rseed = 0;
            t.rotation = rotation_for(ps, fmt::format("component-rotation-{}", c), rseed);
            t.bias = 0.0;
            auto comp = std::make_shared<const BenchmarkProblem>(
                BenchmarkProblem::from_base(base_function(bases[c]), dim, std::move(t), index, rseed));
            spec.components.push_back(CompositionComponent{comp, sigma[c], composition_lambda(bases[c]), bias[c]});
        }
        suite.push_back(std::make_shared<const BenchmarkProblem>(
            BenchmarkProblem::from_composition(std::move(spec), dim, 100.0 * static_cast<double>(index), index)));
    }
    return suite;
}

void write_manifest(std::ostream& out, const Suite& suite)
{
    for (const auto& p : suite) {
        out << fmt::format("index={} class={} base={} dim={} fstar={} rotation_seed={} shift=", p->index(),
                           to_string(p->problem_class()), p->base_name(), p->dim(), p->optimum(),
                           p->rotation_seed());
        const auto& s = p->shift();
        for (std::size_t j = 0; j < s.size(); ++j) {
            out << (j ? "," : "") << fmt::format("{}", s[j]);
        }
        out << '\n';
    }
}

std::string manifest_string(const Suite& suite)
{
    std::ostringstream os;
    write_manifest(os, suite);
    return os.str();
}

void check_paired(const Suite& nonshifted, const Suite& shifted)
{
    if (nonshifted.size() != shifted.size()) {
        throw ConfigError("bias audit: suites have different sizes");
    }
    for (std::size_t i = 0; i < shifted.size(); ++i) {
        const auto& a = *nonshifted[i];
        const auto& b = *shifted[i];
        if (a.index() != b.index() || a.base_name() != b.base_name() || a.dim() != b.dim() ||
            a.rotation_seed() != b.rotation_seed() || a.optimum() != b.optimum()) {
            throw ConfigError("bias audit: problem " + std::to_string(b.index()) + " has no nonshifted partner");
        }
        for (double v : a.shift()) {
            if (v != 0.0) {
                throw ConfigError("bias audit: nonshifted problem " + std::to_string(a.index()) + " is shifted");
            }
        }
    }
}

}  // namespace mhlab::bench
