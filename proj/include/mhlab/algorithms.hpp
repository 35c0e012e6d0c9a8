#ifndef MHLAB_ALGORITHMS_HPP
#define MHLAB_ALGORITHMS_HPP

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mhlab/loop.hpp"
#include "mhlab/params.hpp"
#include "mhlab/space.hpp"

namespace mhlab::algo {

using Vec = std::vector<double>;

// ---------------------------------------------------------------------------
// Optimizer plumbing

struct OptimizerOptions {
    RepairPolicy repair = RepairPolicy::clamp;
    /// GSK senior phase: use (x_i - x_m) in the second branch instead of the
    /// printed (x_i - x_r).
    bool gsk_symmetric_senior = false;
};

/// Shared state for the population optimizers: parameters, population,
/// bounds and repair. Subclasses implement step() and may hook
/// on_initialized() to build auxiliary state.
class PopulationOptimizer : public Optimizer {
public:
    PopulationOptimizer(std::string id, ParamSet params, std::size_t pop_size, const OptimizerOptions& options);

    std::string id() const override { return id_; }
    std::size_t initial_evals() const override { return pop_size_; }
    const Population& population() const override { return pop_; }
    const ParamSet& params() const noexcept { return params_; }
    std::size_t pop_size() const noexcept { return pop_size_; }

    /// Uniform random population, evaluated.
    void initialize(Evaluator& eval, RandomSource& rng) override;
    /// Start from given positions (tests, warm starts). Size must equal pop_size().
    void initialize_from(Evaluator& eval, const std::vector<Vec>& positions);

protected:
    virtual void on_initialized(Evaluator&) {}

    const SearchSpace& space() const { return *space_; }
    std::size_t dim() const { return space_->dim(); }
    void repair(Vec& x, RandomSource& rng) const { repair_in_place(*space_, x, options_.repair, rng); }
    /// Uniform vector in [0, 1)^dim.
    Vec uniform_vec(RandomSource& rng) const;
    Vec normal_vec(RandomSource& rng) const;
    Vec levy_vec(RandomSource& rng, double beta) const;
    Vec mean_position() const;

    std::string id_;
    ParamSet params_;
    std::size_t pop_size_;
    OptimizerOptions options_;
    Population pop_;
    const SearchSpace* space_ = nullptr;
};

// ---------------------------------------------------------------------------
// Registry

enum class Taxonomy { ea, sia_human, sia_nonhuman, physics_chemistry };
std::string_view to_string(Taxonomy tag);

using OptimizerFactory =
    std::function<std::unique_ptr<PopulationOptimizer>(const ParamSet& params, const OptimizerOptions& options)>;

struct AlgorithmSpec {
    std::string id;
    std::string display_name;
    std::vector<Taxonomy> tags;
    ParamSpace space;
    /// Tuned presets keyed by dimension (10, 30, 50).
    std::map<std::size_t, ParamSet> presets;
    OptimizerFactory factory;

    ParamSet defaults() const { return space.defaults(); }
    /// Preset for `dim`, or nullptr when none ships.
    const ParamSet* preset(std::size_t dim) const;
};

/// de, ebcm, sdcs, msca, imfo, ao, igoa, hgsa, mfla, gsk, mpa, eo in that order.
const std::vector<AlgorithmSpec>& registry();

/// Known ids that are deliberately not implemented: hses, lshade-spacma,
/// nlshade, ede-ebde.
bool is_out_of_scope(std::string_view id);

/// NotImplemented for out-of-scope ids, ConfigError for unknown ones.
const AlgorithmSpec& lookup(std::string_view id);

/// Defaults overlaid with `overrides`; ConfigError names an offending parameter.
std::unique_ptr<PopulationOptimizer> make_optimizer(std::string_view id, const ParamSet& overrides = {},
                                                    const OptimizerOptions& options = {});

/// Validate, build and run one seeded run of a registered algorithm.
metrics::RunTrace run_algorithm(std::string_view id, const ParamSet& overrides, const Problem& problem,
                                Budget& budget, const RngStream& rng, metrics::Recorder& recorder,
                                const OptimizerOptions& options = {});

// ---------------------------------------------------------------------------
// Reference optimizers used to calibrate the bias audit (not in registry()).

/// Contracts every individual halfway to the origin each generation.
std::unique_ptr<PopulationOptimizer> make_origin_magnet(std::size_t pop_size = 10);

/// Samples uniformly in a +-20 cube around the problem's shift vector, so its
/// error distribution does not depend on where the shift puts the optimum.
/// Needs a bench::BenchmarkProblem; other problems are sampled around 0.
std::unique_ptr<PopulationOptimizer> make_shift_invariant_search(std::size_t pop_size = 10);

// ---------------------------------------------------------------------------
// DE

enum class DeStrategy { rand1, best1, best2, rand2, target_to_best1, current_to_rand1 };
DeStrategy parse_de_strategy(std::string_view name);
std::string_view to_string(DeStrategy s);
/// Number of random partners the strategy draws.
std::size_t de_partner_count(DeStrategy s);

/// Mutant from explicit partner vectors x_r1, x_r2, ... (in order).
Vec de_mutant(DeStrategy s, const Vec& x_i, const Vec& x_best, std::span<const Vec> partners, double F);

/// Draws mutually distinct partners != i and applies de_mutant. ConfigError
/// for populations smaller than 6.
Vec de_mutate(DeStrategy s, const Population& pop, std::size_t i, std::size_t best, double F, RandomSource& rng);

/// Component j from the mutant iff rand <= CR or j == j_rand.
Vec de_crossover_binomial(const Vec& target, const Vec& mutant, double CR, RandomSource& rng);
/// Mutant components <start>, <start+1>, ... (mod D), `length` of them.
Vec de_exponential_run(const Vec& target, const Vec& mutant, std::size_t start, std::size_t length);
/// Random start; the run grows while rand < CR, up to D.
Vec de_crossover_exponential(const Vec& target, const Vec& mutant, double CR, RandomSource& rng);

/// Trial survives iff f(trial) <= f(target). ContractError if unevaluated.
const Individual& de_select(const Individual& target, const Individual& trial);

// ---------------------------------------------------------------------------
// EBCM

Vec ebcm_criss_cross(const Vec& x_cc, const Vec& x_r1, const Vec& x_r2, double F);
Vec ebcm_toward_best(const Vec& x_best, const Vec& x_cc, const Vec& x_r2, double F);

/// One variant for member `i` of `own`: r1 from `own`, r2 from own + other,
/// best = best of `own`. ConfigError when `other` is empty or the pool is too
/// small for three distinct vectors.
Vec ebcm_variant(const Population& own, const Population& other, std::size_t i, double F, double cc_rate,
                 RandomSource& rng);

// ---------------------------------------------------------------------------
// SDCS

/// Switching probability: snap (p_m <= 0.5) lowers, drift raises, clamped to [0, 1].
double sdcs_switch(double p_m, double omega);
/// 1 iff z > 0.
double heaviside(double z);
Vec sdcs_crossover(const Vec& x_i, const Vec& x_j, double p, double J, double a0, const Vec& levy);
Vec sdcs_mutation(const Vec& x_i, const Vec& x_j, double p, double J, double gate, const Vec& r);

// ---------------------------------------------------------------------------
// MSCA

/// r1 = a - t a / T.
double sca_amplitude(double a, double t, double T);
/// Per dimension: sine branch when r4 < 0.5, else cosine.
Vec sca_update(const Vec& x, const Vec& dest, double r1, const Vec& r2, const Vec& r3, const Vec& r4);
/// Logistic map z -> mu z (1 - z).
double logistic_map(double z, double mu);

// ---------------------------------------------------------------------------
// IMFO

/// |f_best / f_i|, with f_i == 0 mapped to 1.
double imfo_weight(double f_best, double f_i);
/// D e^{bt} cos(2 pi t) + w F + (1 - w) M_best with D = |F - M|, per-dimension t.
Vec imfo_update(const Vec& moth, const Vec& flame, const Vec& best, double w, double b, const Vec& t);

// ---------------------------------------------------------------------------
// AO

/// Spiral term y - x for dimensions 1..dim (r = 10 + 0.00565 d, theta = -0.005 d + 3 pi / 2).
Vec ao_spiral(std::size_t dim);
/// X_best (1 - t/T) + (X_M - X_best * rand).
Vec ao_high_soar(const Vec& best, const Vec& mean, double t, double T, double rand);
/// X_best * Levy + X_R + (y - x) * rand.
Vec ao_contour_flight(const Vec& best, const Vec& x_r, const Vec& levy, const Vec& spiral, double rand);
/// (X_best - X_M) alpha - rand_a + ((UB - LB) rand_b + LB) delta.
Vec ao_low_flight(const Vec& best, const Vec& mean, double alpha, double delta, const SearchSpace& space,
                  double rand_a, double rand_b);
/// QF X_best - G1 X rand_a - G2 Levy + rand_b G1.
Vec ao_walk_grab(const Vec& best, const Vec& x, double qf, double g1, double g2, const Vec& levy, double rand_a,
                 double rand_b);
/// t^((2 rand - 1) / (1 - T)^2) with 1-based t; 1 when T <= 1.
double ao_quality(double t, double T, double rand);

// ---------------------------------------------------------------------------
// IGOA

/// Social force s(r) = 0.5 e^{-r/1.5} - e^{-r}.
double goa_social(double r);
/// c = cmax - l (cmax - cmin) / L.
double igoa_coefficient(double cmax, double cmin, double l, double L);
/// X_i = c * (sum_j c (ub - lb)/2 s(2 + |x_j - x_i| mod 2) (x_j - x_i)/d_ij) * gauss + target.
/// Coincident pairs (d_ij = 0) contribute nothing.
Vec igoa_social_update(std::span<const Vec> positions, std::size_t i, double c, const SearchSpace& space,
                       const Vec& target, const Vec& gauss);
Vec igoa_levy_candidate(const Vec& x_star, const Vec& rand, const Vec& levy);
/// Adopt the Levy candidate only when strictly better (minimization).
bool igoa_adopt_levy(double f_levy, double f_star);

// ---------------------------------------------------------------------------
// HGSA

double gsa_gravity(double G0, double t, double T);
double hgsa_c1(double t, double T);
double hgsa_c2(double t, double T);
/// GSA accelerations from the kbest heaviest agents, each pull weighted by
/// a uniform draw.
std::vector<Vec> gsa_accelerations(std::span<const Vec> x, std::span<const double> fitness, double G,
                                   std::size_t kbest, RandomSource& rng);
/// v' = rand_i v + c1 a + c2 (gbest - x), with dt = 1.
Vec hgsa_velocity(const Vec& v, const Vec& accel, const Vec& x, const Vec& gbest, double rand_i, double c1,
                  double c2);

// ---------------------------------------------------------------------------
// MFLA

/// Frog k of the fitness-sorted order goes to memeplex k mod m. ConfigError
/// unless pop_size == m * n.
std::vector<std::vector<std::size_t>> mfla_partition(std::size_t pop_size, std::size_t m, std::size_t n);
Vec geometric_center(std::span<const Vec> xs);
/// Fitness-weighted center, weight 1 / (1 + f - f_min).
Vec gravitational_center(std::span<const Vec> xs, std::span<const double> fitness);
/// Q_w + r1 (Q_best - Q_w) + r2 (Q_m - Q_w).
Vec mfla_leap(const Vec& worst, const Vec& best, const Vec& attractor, double r1, double r2);

// ---------------------------------------------------------------------------
// GSK

/// round(D (1 - t/T)^K).
std::size_t gsk_junior_dims(std::size_t D, double t, double T, double K);
Vec gsk_junior(const Vec& x_i, const Vec& better, const Vec& worse, const Vec& x_r, double f_i, double f_r,
               double kf);
Vec gsk_senior(const Vec& x_i, const Vec& p_best, const Vec& p_worst, const Vec& x_m, const Vec& x_r, double f_i,
               double f_m, double kf, bool symmetric);

// ---------------------------------------------------------------------------
// MPA

/// (1 - t/T)^(2 t / T).
double mpa_cf(double t, double T);
/// R (Elite - R Prey): phase-1 and first-half phase-2 form.
Vec mpa_step_toward(const Vec& elite, const Vec& prey, const Vec& R);
/// R (R Elite - Prey): second-half phase-2 and phase-3 form.
Vec mpa_step_around(const Vec& elite, const Vec& prey, const Vec& R);
/// Prey + P R step.
Vec mpa_move_prey(const Vec& prey, const Vec& step, double P, const Vec& R);
/// Elite + P CF step.
Vec mpa_move_elite(const Vec& elite, const Vec& step, double P, double CF);

// ---------------------------------------------------------------------------
// EO

/// C_eq + (C - C_eq) F + (G / (lambda V)) (1 - F).
Vec eo_update(const Vec& C, const Vec& C_eq, const Vec& F, const Vec& g_over_lambda_v);
/// F = a1 sign(r - 0.5) (e^{-lambda tt} - 1).
Vec eo_exponential(double a1, const Vec& r, const Vec& lambda, double tt);

}  // namespace mhlab::algo

#endif
