#ifndef MHLAB_BENCHMARKS_HPP
#define MHLAB_BENCHMARKS_HPP

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mhlab/problem.hpp"
#include "mhlab/rng.hpp"

namespace mhlab::bench {

enum class Modality { unimodal, multimodal };

/// A base test function in its textbook form. `center` is the coordinate of
/// its global minimizer (all coordinates equal) and `input_scale` maps the
/// [-100, 100] box onto the function's customary domain.
struct BaseFunction {
    std::string_view name;
    Modality modality;
    bool separable;
    double center;
    double input_scale;
    double (*evaluate)(std::span<const double> x);
};

/// sphere, bent-cigar, zakharov, elliptic, rosenbrock, rastrigin, ackley,
/// griewank, schwefel, levy.
std::span<const BaseFunction> base_functions();
const BaseFunction& base_function(std::string_view name);

/// Textbook value, e.g. eval_base("rosenbrock", {1, 1}) == 0.
double eval_base(std::string_view name, std::span<const double> x);

/// Base evaluated at input_scale * z + center, so z = 0 is the minimizer.
double eval_centered(const BaseFunction& base, std::span<const double> z);

/// g(x) = landscape(M (x - o)) + bias. Empty rotation means identity;
/// otherwise row-major dim x dim.
struct Transform {
    std::vector<double> shift;
    std::vector<double> rotation;
    double bias = 0.0;

    std::vector<double> apply(std::span<const double> x) const;
};

/// Uniform shift in [-80, 80]^dim.
std::vector<double> random_shift(std::size_t dim, RandomSource& rng);

/// Random orthogonal matrix (row-major) by Gram-Schmidt on a Gaussian matrix.
std::vector<double> random_rotation(std::size_t dim, RandomSource& rng);

/// max |(M^T M - I)_ij|.
double orthogonality_error(std::span<const double> m, std::size_t dim);

struct HybridSegment {
    std::string base;
    std::vector<std::size_t> dims;
    double weight = 1.0;
};

/// Partition of the (transformed) coordinates into segments, each fed to
/// its own centered base function.
struct HybridSpec {
    std::vector<HybridSegment> segments;

    /// ConfigError unless the segments cover 0..dim-1 exactly once.
    void validate(std::size_t dim) const;
};

double eval_hybrid(const HybridSpec& spec, std::span<const double> z);

class BenchmarkProblem;

struct CompositionComponent {
    std::shared_ptr<const BenchmarkProblem> problem;
    double sigma = 10.0;
    double lambda = 1.0;
    double bias = 0.0;
};

/// Distance-weighted blend of component problems. Component i contributes
/// lambda_i * g_i(x) + bias_i with weight proportional to
/// exp(-|x - o_i|^2 / (2 D sigma_i^2)) / |x - o_i|, normalized to sum 1.
struct CompositionSpec {
    std::vector<CompositionComponent> components;

    void validate(std::size_t dim) const;
};

std::vector<double> composition_weights(const CompositionSpec& spec, std::span<const double> x);
double eval_composition(const CompositionSpec& spec, std::span<const double> x);

enum class ProblemClass { unimodal, multimodal, hybrid, composition };
std::string_view to_string(ProblemClass c);

enum class ShiftMode { none, random_interior };
enum class RotationMode { none, random_orthogonal };

/// A benchmark: base, hybrid or composition landscape behind a transform,
/// with bounds [-100, 100] and optimum f* = 100 * index by default.
class BenchmarkProblem final : public Problem {
public:
    static BenchmarkProblem from_base(const BaseFunction& base, std::size_t dim, Transform transform,
                                      std::size_t index, std::uint64_t rotation_seed = 0);
    static BenchmarkProblem from_hybrid(HybridSpec spec, std::size_t dim, Transform transform,
                                        std::size_t index, std::uint64_t rotation_seed = 0);
    /// Components carry their own shifts and rotations; the composition's
    /// global minimizer is the shift of the component with the smallest
    /// lambda * f*_i + bias_i (component 0 in generated suites).
    static BenchmarkProblem from_composition(CompositionSpec spec, std::size_t dim, double bias,
                                             std::size_t index);

    double value(std::span<const double> x) const override;
    const SearchSpace& space() const override { return space_; }
    double optimum() const override { return transform_.bias; }
    std::string name() const override;

    ProblemClass problem_class() const noexcept { return class_; }
    std::size_t index() const noexcept { return index_; }
    /// Base name or a "hybrid(a+b+c)" / "composition(a+b+c)" description.
    const std::string& base_name() const noexcept { return base_name_; }
    const Transform& transform() const noexcept { return transform_; }
    std::uint64_t rotation_seed() const noexcept { return rotation_seed_; }
    /// Location of the global minimizer.
    std::vector<double> optimizer() const;
    /// Shift vector that the bias audit varies (zero for nonshifted).
    const std::vector<double>& shift() const;

    const HybridSpec* hybrid() const noexcept { return class_ == ProblemClass::hybrid ? &hybrid_ : nullptr; }
    const CompositionSpec* composition() const noexcept
    {
        return class_ == ProblemClass::composition ? &composition_ : nullptr;
    }

private:
    BenchmarkProblem() = default;

    ProblemClass class_ = ProblemClass::unimodal;
    const BaseFunction* base_ = nullptr;
    HybridSpec hybrid_;
    CompositionSpec composition_;
    Transform transform_;
    SearchSpace space_;
    std::size_t index_ = 1;
    std::uint64_t rotation_seed_ = 0;
    std::string base_name_;
    std::vector<double> composition_shift_;
    double composition_bias_ = 0.0;
};

/// Base-function problem. The stream seeds the shift draw and the rotation
/// (through substreams "shift" and "rotation") so paired problems built
/// from the same stream share their rotation.
BenchmarkProblem make_problem(std::string_view base, std::size_t dim, ShiftMode shift_mode,
                              RotationMode rotate, std::size_t index, const RngStream& rng);

struct SuiteCounts {
    std::size_t unimodal = 3;
    std::size_t multimodal = 7;
    std::size_t hybrid = 10;
    std::size_t composition = 10;

    std::size_t total() const noexcept { return unimodal + multimodal + hybrid + composition; }
};

using Suite = std::vector<std::shared_ptr<const BenchmarkProblem>>;

/// Deterministic suite ordered unimodal, multimodal, hybrid, composition
/// with indices 1..total and f* = 100 * index. Shifted and nonshifted
/// suites built from the same (dim, counts, seed) share bases, rotations,
/// partitions and indices and differ only in the audited shift.
Suite make_suite(std::size_t dim, const SuiteCounts& counts, bool shifted, std::uint64_t seed);

/// One record per problem: index, class, base, dim, f*, rotation seed, shift.
void write_manifest(std::ostream& out, const Suite& suite);
std::string manifest_string(const Suite& suite);

/// ConfigError unless the two suites are pairwise partners (same index,
/// base, rotation seed, dimension).
void check_paired(const Suite& nonshifted, const Suite& shifted);

}  // namespace mhlab::bench

#endif
