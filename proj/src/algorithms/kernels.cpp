#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "mhlab/algorithms.hpp"
#include "mhlab/errors.hpp"

namespace mhlab::algo {

namespace {

constexpr double kPi = std::numbers::pi;

void require_same_length(const Vec& a, const Vec& b, const char* what)
{
    if (a.size() != b.size()) {
        throw ContractError(std::string(what) + ": vectors differ in length");
    }
}

}  // namespace

// DE ---------------------------------------------------------------------

DeStrategy parse_de_strategy(std::string_view name)
{
    if (name == "rand/1") return DeStrategy::rand1;
    if (name == "best/1") return DeStrategy::best1;
    if (name == "best/2") return DeStrategy::best2;
    if (name == "rand/2") return DeStrategy::rand2;
    if (name == "target-to-best/1") return DeStrategy::target_to_best1;
    if (name == "current-to-rand/1") return DeStrategy::current_to_rand1;
    throw ConfigError("unknown DE strategy '" + std::string(name) + "'");
}

std::string_view to_string(DeStrategy s)
{
    switch (s) {
    case DeStrategy::rand1: return "rand/1";
    case DeStrategy::best1: return "best/1";
    case DeStrategy::best2: return "best/2";
    case DeStrategy::rand2: return "rand/2";
    case DeStrategy::target_to_best1: return "target-to-best/1";
    case DeStrategy::current_to_rand1: return "current-to-rand/1";
    }
    return "rand/1";
}

std::size_t de_partner_count(DeStrategy s)
{
    switch (s) {
    case DeStrategy::rand1: return 3;
    case DeStrategy::best1: return 2;
    case DeStrategy::best2: return 4;
    case DeStrategy::rand2: return 5;
    case DeStrategy::target_to_best1: return 2;
    case DeStrategy::current_to_rand1: return 3;
    }
    return 3;
}

Vec de_mutant(DeStrategy s, const Vec& x_i, const Vec& x_best, std::span<const Vec> r, double F)
{
    if (r.size() < de_partner_count(s)) {
        throw ContractError("de_mutant: too few partner vectors");
    }
    const std::size_t d = x_i.size();
    Vec v(d);
    for (std::size_t j = 0; j < d; ++j) {
        switch (s) {
        case DeStrategy::rand1: v[j] = r[0][j] + F * (r[1][j] - r[2][j]); break;
        case DeStrategy::best1: v[j] = x_best[j] + F * (r[0][j] - r[1][j]); break;
        case DeStrategy::best2: v[j] = x_best[j] + F * (r[0][j] - r[1][j]) + F * (r[2][j] - r[3][j]); break;
        case DeStrategy::rand2: v[j] = r[0][j] + F * (r[1][j] - r[2][j]) + F * (r[3][j] - r[4][j]); break;
        case DeStrategy::target_to_best1:
            v[j] = x_i[j] + F * (x_best[j] - x_i[j]) + F * (r[0][j] - r[1][j]);
            break;
        case DeStrategy::current_to_rand1:
            v[j] = x_i[j] + F * (r[0][j] - x_i[j]) + F * (r[1][j] - r[2][j]);
            break;
        }
    }
    return v;
}

Vec de_mutate(DeStrategy s, const Population& pop, std::size_t i, std::size_t best, double F, RandomSource& rng)
{
    if (pop.size() < 6) {
        throw ConfigError("DE needs a population of at least 6, got " + std::to_string(pop.size()));
    }
    const auto idx = distinct_indices(rng, pop.size(), de_partner_count(s), i);
    std::vector<Vec> partners;
    partners.reserve(idx.size());
    for (auto k : idx) {
        partners.push_back(pop[k].position);
    }
    return de_mutant(s, pop[i].position, pop[best].position, partners, F);
}

Vec de_crossover_binomial(const Vec& target, const Vec& mutant, double CR, RandomSource& rng)
{
    require_same_length(target, mutant, "binomial crossover");
    const std::size_t d = target.size();
    const std::size_t j_rand = rng.index(d);
    Vec u(target);
    for (std::size_t j = 0; j < d; ++j) {
        if (rng.uniform() <= CR || j == j_rand) {
            u[j] = mutant[j];
        }
    }
    return u;
}

Vec de_exponential_run(const Vec& target, const Vec& mutant, std::size_t start, std::size_t length)
{
    require_same_length(target, mutant, "exponential crossover");
    const std::size_t d = target.size();
    Vec u(target);
    for (std::size_t k = 0; k < std::min(length, d); ++k) {
        const std::size_t j = (start + k) % d;
        u[j] = mutant[j];
    }
    return u;
}

Vec de_crossover_exponential(const Vec& target, const Vec& mutant, double CR, RandomSource& rng)
{
    const std::size_t d = target.size();
    const std::size_t start = rng.index(d);
    std::size_t length = 0;
    do {
        ++length;
    } while (length < d && rng.uniform() < CR);
    return de_exponential_run(target, mutant, start, length);
}

const Individual& de_select(const Individual& target, const Individual& trial)
{
    if (!target.fitness || !trial.fitness) {
        throw ContractError("de_select: both vectors must be evaluated");
    }
    return *trial.fitness <= *target.fitness ? trial : target;
}

// EBCM -------------------------------------------------------------------

Vec ebcm_criss_cross(const Vec& x_cc, const Vec& x_r1, const Vec& x_r2, double F)
{
    Vec v(x_cc.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
        v[j] = x_cc[j] + F * (x_r1[j] - x_r2[j]);
    }
    return v;
}

Vec ebcm_toward_best(const Vec& x_best, const Vec& x_cc, const Vec& x_r2, double F)
{
    Vec v(x_cc.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
        v[j] = x_best[j] + F * (x_cc[j] - x_r2[j]);
    }
    return v;
}

Vec ebcm_variant(const Population& own, const Population& other, std::size_t i, double F, double cc_rate,
                 RandomSource& rng)
{
    if (other.size() == 0) {
        throw ConfigError("EBCM: second subpopulation is empty");
    }
    if (own.size() < 2 || own.size() + other.size() < 3) {
        throw ConfigError("EBCM: subpopulations too small for three distinct vectors");
    }
    const Vec& x_cc = own[i].position;
    const std::size_t r1 = distinct_indices(rng, own.size(), 1, i)[0];
    // Pooled index space: own members first, then the other subpopulation.
    const std::size_t pooled = own.size() + other.size();
    std::size_t r2 = 0;
    {
        std::vector<std::size_t> candidates;
        candidates.reserve(pooled);
        for (std::size_t k = 0; k < pooled; ++k) {
            if (k != i && k != r1) {
                candidates.push_back(k);
            }
        }
        r2 = candidates[rng.index(candidates.size())];
    }
    const Vec& x_r2 = r2 < own.size() ? own[r2].position : other[r2 - own.size()].position;
    if (rng.uniform() < cc_rate) {
        return ebcm_criss_cross(x_cc, own[r1].position, x_r2, F);
    }
    return ebcm_toward_best(own[own.best_index()].position, x_cc, x_r2, F);
}

// SDCS -------------------------------------------------------------------

double sdcs_switch(double p_m, double omega)
{
    if (p_m <= 0.5) {
        return std::max(0.0, p_m - omega);
    }
    return std::min(1.0, p_m + omega);
}

double heaviside(double z)
{
    return z > 0.0 ? 1.0 : 0.0;
}

Vec sdcs_crossover(const Vec& x_i, const Vec& x_j, double p, double J, double a0, const Vec& levy)
{
    Vec out(x_i.size());
    for (std::size_t d = 0; d < out.size(); ++d) {
        if (p < J) {
            out[d] = x_i[d] + a0 * (x_j[d] * levy[d] - x_i[d]);
        } else {
            // The middle and upper branches are printed identically.
            out[d] = x_i[d] + a0 * (x_j[d] - x_i[d]) * levy[d];
        }
    }
    return out;
}

Vec sdcs_mutation(const Vec& x_i, const Vec& x_j, double p, double J, double gate, const Vec& r)
{
    Vec out(x_i.size());
    for (std::size_t d = 0; d < out.size(); ++d) {
        if (p < J) {
            out[d] = x_i[d] + gate * (x_j[d] * r[d] - x_i[d]);
        } else if (p <= 1.0 - J) {
            out[d] = x_i[d] + gate * (x_j[d] - x_i[d]) * r[d];
        } else {
            out[d] = x_i[d] + gate * (x_j[d] - x_i[d]);
        }
    }
    return out;
}

// MSCA -------------------------------------------------------------------

double sca_amplitude(double a, double t, double T)
{
    return T <= 0.0 ? 0.0 : a - t * a / T;
}

Vec sca_update(const Vec& x, const Vec& dest, double r1, const Vec& r2, const Vec& r3, const Vec& r4)
{
    Vec out(x.size());
    for (std::size_t d = 0; d < x.size(); ++d) {
        const double wave = r4[d] < 0.5 ? std::sin(r2[d]) : std::cos(r2[d]);
        out[d] = x[d] + r1 * wave * std::abs(r3[d] * dest[d] - x[d]);
    }
    return out;
}

double logistic_map(double z, double mu)
{
    return mu * z * (1.0 - z);
}

// IMFO -------------------------------------------------------------------

double imfo_weight(double f_best, double f_i)
{
    if (f_i == 0.0) {
        return 1.0;
    }
    return std::abs(f_best / f_i);
}

Vec imfo_update(const Vec& moth, const Vec& flame, const Vec& best, double w, double b, const Vec& t)
{
    Vec out(moth.size());
    for (std::size_t d = 0; d < moth.size(); ++d) {
        const double dist = std::abs(flame[d] - moth[d]);
        out[d] = dist * std::exp(b * t[d]) * std::cos(2.0 * kPi * t[d]) + w * flame[d] + (1.0 - w) * best[d];
    }
    return out;
}

// AO ---------------------------------------------------------------------

Vec ao_spiral(std::size_t dim)
{
    Vec out(dim);
    for (std::size_t d = 0; d < dim; ++d) {
        const double idx = static_cast<double>(d + 1);
        const double r = 10.0 + 0.00565 * idx;
        const double theta = -0.005 * idx + 3.0 * kPi / 2.0;
        out[d] = r * std::cos(theta) - r * std::sin(theta);
    }
    return out;
}

Vec ao_high_soar(const Vec& best, const Vec& mean, double t, double T, double rand)
{
    Vec out(best.size());
    for (std::size_t d = 0; d < out.size(); ++d) {
        out[d] = best[d] * (1.0 - t / T) + (mean[d] - best[d] * rand);
    }
    return out;
}

Vec ao_contour_flight(const Vec& best, const Vec& x_r, const Vec& levy, const Vec& spiral, double rand)
{
    Vec out(best.size());
    for (std::size_t d = 0; d < out.size(); ++d) {
        out[d] = best[d] * levy[d] + x_r[d] + spiral[d] * rand;
    }
    return out;
}

Vec ao_low_flight(const Vec& best, const Vec& mean, double alpha, double delta, const SearchSpace& space,
                  double rand_a, double rand_b)
{
    Vec out(best.size());
    for (std::size_t d = 0; d < out.size(); ++d) {
        out[d] = (best[d] - mean[d]) * alpha - rand_a + (space.width(d) * rand_b + space.lower(d)) * delta;
    }
    return out;
}

Vec ao_walk_grab(const Vec& best, const Vec& x, double qf, double g1, double g2, const Vec& levy, double rand_a,
                 double rand_b)
{
    Vec out(best.size());
    for (std::size_t d = 0; d < out.size(); ++d) {
        out[d] = qf * best[d] - g1 * x[d] * rand_a - g2 * levy[d] + rand_b * g1;
    }
    return out;
}

double ao_quality(double t, double T, double rand)
{
    if (T <= 1.0) {
        return 1.0;
    }
    return std::pow(t, (2.0 * rand - 1.0) / ((1.0 - T) * (1.0 - T)));
}

// IGOA -------------------------------------------------------------------

double goa_social(double r)
{
    return 0.5 * std::exp(-r / 1.5) - std::exp(-r);
}

double igoa_coefficient(double cmax, double cmin, double l, double L)
{
    return cmax - l * (cmax - cmin) / L;
}

Vec igoa_social_update(std::span<const Vec> positions, std::size_t i, double c, const SearchSpace& space,
                       const Vec& target, const Vec& gauss)
{
    const Vec& xi = positions[i];
    const std::size_t dim = xi.size();
    Vec social(dim, 0.0);
    for (std::size_t j = 0; j < positions.size(); ++j) {
        if (j == i) {
            continue;
        }
        const Vec& xj = positions[j];
        double dist2 = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
            dist2 += (xj[d] - xi[d]) * (xj[d] - xi[d]);
        }
        const double dist = std::sqrt(dist2);
        if (dist == 0.0) {
            continue;
        }
        for (std::size_t d = 0; d < dim; ++d) {
            const double mapped = 2.0 + std::fmod(std::abs(xj[d] - xi[d]), 2.0);
            social[d] += c * space.width(d) / 2.0 * goa_social(mapped) * (xj[d] - xi[d]) / dist;
        }
    }
    Vec out(dim);
    for (std::size_t d = 0; d < dim; ++d) {
        out[d] = c * social[d] * gauss[d] + target[d];
    }
    return out;
}

Vec igoa_levy_candidate(const Vec& x_star, const Vec& rand, const Vec& levy)
{
    Vec out(x_star.size());
    for (std::size_t d = 0; d < out.size(); ++d) {
        out[d] = x_star[d] + rand[d] * levy[d];
    }
    return out;
}

bool igoa_adopt_levy(double f_levy, double f_star)
{
    return f_levy < f_star;
}

// HGSA -------------------------------------------------------------------

double gsa_gravity(double G0, double t, double T)
{
    return G0 * std::exp(-20.0 * t / T);
}

double hgsa_c1(double t, double T)
{
    return 2.0 * (1.0 - std::tanh(2.0 * t / T));
}

double hgsa_c2(double t, double T)
{
    return 2.0 * std::tanh(2.0 * t / T);
}

std::vector<Vec> gsa_accelerations(std::span<const Vec> x, std::span<const double> fitness, double G,
                                   std::size_t kbest, RandomSource& rng)
{
    const std::size_t n = x.size();
    const std::size_t dim = n == 0 ? 0 : x[0].size();
    const double best = *std::min_element(fitness.begin(), fitness.end());
    const double worst = *std::max_element(fitness.begin(), fitness.end());
    std::vector<double> mass(n, 1.0);
    if (worst > best) {
        for (std::size_t i = 0; i < n; ++i) {
            mass[i] = (fitness[i] - worst) / (best - worst);
        }
    }
    const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
    for (auto& m : mass) {
        m = total > 0.0 ? m / total : 1.0 / static_cast<double>(n);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return mass[a] > mass[b]; });
    kbest = std::clamp<std::size_t>(kbest, 1, n);

    constexpr double eps = 2.220446049250313e-16;
    std::vector<Vec> acc(n, Vec(dim, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < kbest; ++k) {
            const std::size_t j = order[k];
            if (j == i) {
                continue;
            }
            double r2 = 0.0;
            for (std::size_t d = 0; d < dim; ++d) {
                r2 += (x[j][d] - x[i][d]) * (x[j][d] - x[i][d]);
            }
            const double r = std::sqrt(r2);
            const double w = rng.uniform() * G * mass[j] / (r + eps);
            for (std::size_t d = 0; d < dim; ++d) {
                acc[i][d] += w * (x[j][d] - x[i][d]);
            }
        }
    }
    return acc;
}

Vec hgsa_velocity(const Vec& v, const Vec& accel, const Vec& x, const Vec& gbest, double rand_i, double c1,
                  double c2)
{
    Vec out(v.size());
    for (std::size_t d = 0; d < out.size(); ++d) {
        out[d] = rand_i * v[d] + c1 * accel[d] + c2 * (gbest[d] - x[d]);
    }
    return out;
}

// MFLA -------------------------------------------------------------------

std::vector<std::vector<std::size_t>> mfla_partition(std::size_t pop_size, std::size_t m, std::size_t n)
{
    if (m == 0 || n == 0 || m * n != pop_size) {
        throw ConfigError("MFLA: population of " + std::to_string(pop_size) + " is not " + std::to_string(m) +
                          " memeplexes x " + std::to_string(n) + " frogs");
    }
    std::vector<std::vector<std::size_t>> plexes(m);
    for (std::size_t k = 0; k < pop_size; ++k) {
        plexes[k % m].push_back(k);
    }
    return plexes;
}

Vec geometric_center(std::span<const Vec> xs)
{
    Vec c(xs.front().size(), 0.0);
    for (const auto& x : xs) {
        for (std::size_t d = 0; d < c.size(); ++d) c[d] += x[d];
    }
    for (auto& v : c) v /= static_cast<double>(xs.size());
    return c;
}

Vec gravitational_center(std::span<const Vec> xs, std::span<const double> fitness)
{
    const double f_min = *std::min_element(fitness.begin(), fitness.end());
    Vec c(xs.front().size(), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double w = 1.0 / (1.0 + fitness[i] - f_min);
        total += w;
        for (std::size_t d = 0; d < c.size(); ++d) c[d] += w * xs[i][d];
    }
    for (auto& v : c) v /= total;
    return c;
}

Vec mfla_leap(const Vec& worst, const Vec& best, const Vec& attractor, double r1, double r2)
{
    Vec out(worst.size());
    for (std::size_t d = 0; d < out.size(); ++d) {
        out[d] = worst[d] + r1 * (best[d] - worst[d]) + r2 * (attractor[d] - worst[d]);
    }
    return out;
}

// GSK --------------------------------------------------------------------

std::size_t gsk_junior_dims(std::size_t D, double t, double T, double K)
{
    const double frac = std::pow(std::max(0.0, 1.0 - t / T), K);
    return static_cast<std::size_t>(std::llround(static_cast<double>(D) * frac));
}

Vec gsk_junior(const Vec& x_i, const Vec& better, const Vec& worse, const Vec& x_r, double f_i, double f_r,
               double kf)
{
    Vec out(x_i.size());
    const bool pulled = f_i > f_r;
    for (std::size_t d = 0; d < out.size(); ++d) {
        const double share = pulled ? x_r[d] - x_i[d] : x_i[d] - x_r[d];
        out[d] = x_i[d] + kf * ((better[d] - worse[d]) + share);
    }
    return out;
}

Vec gsk_senior(const Vec& x_i, const Vec& p_best, const Vec& p_worst, const Vec& x_m, const Vec& x_r, double f_i,
               double f_m, double kf, bool symmetric)
{
    Vec out(x_i.size());
    const bool pulled = f_i > f_m;
    for (std::size_t d = 0; d < out.size(); ++d) {
        double share = 0.0;
        if (pulled) {
            share = x_m[d] - x_i[d];
        } else {
            share = symmetric ? x_i[d] - x_m[d] : x_i[d] - x_r[d];
        }
        out[d] = x_i[d] + kf * ((p_best[d] - p_worst[d]) + share);
    }
    return out;
}

// MPA --------------------------------------------------------------------

double mpa_cf(double t, double T)
{
    return std::pow(1.0 - t / T, 2.0 * t / T);
}

Vec mpa_step_toward(const Vec& elite, const Vec& prey, const Vec& R)
{
    Vec out(prey.size());
    for (std::size_t d = 0; d < out.size(); ++d) {
        out[d] = R[d] * (elite[d] - R[d] * prey[d]);
    }
    return out;
}

Vec mpa_step_around(const Vec& elite, const Vec& prey, const Vec& R)
{
    Vec out(prey.size());
    for (std::size_t d = 0; d < out.size(); ++d) {
        out[d] = R[d] * (R[d] * elite[d] - prey[d]);
    }
    return out;
}

Vec mpa_move_prey(const Vec& prey, const Vec& step, double P, const Vec& R)
{
    Vec out(prey.size());
    for (std::size_t d = 0; d < out.size(); ++d) {
        out[d] = prey[d] + P * R[d] * step[d];
    }
    return out;
}

Vec mpa_move_elite(const Vec& elite, const Vec& step, double P, double CF)
{
    Vec out(elite.size());
    for (std::size_t d = 0; d < out.size(); ++d) {
        out[d] = elite[d] + P * CF * step[d];
    }
    return out;
}

// EO ---------------------------------------------------------------------

Vec eo_update(const Vec& C, const Vec& C_eq, const Vec& F, const Vec& g_over_lambda_v)
{
    Vec out(C.size());
    for (std::size_t d = 0; d < out.size(); ++d) {
        out[d] = C_eq[d] + (C[d] - C_eq[d]) * F[d] + g_over_lambda_v[d] * (1.0 - F[d]);
    }
    return out;
}

Vec eo_exponential(double a1, const Vec& r, const Vec& lambda, double tt)
{
    Vec out(r.size());
    for (std::size_t d = 0; d < out.size(); ++d) {
        const double sign = r[d] - 0.5 > 0.0 ? 1.0 : (r[d] - 0.5 < 0.0 ? -1.0 : 0.0);
        out[d] = a1 * sign * (std::exp(-lambda[d] * tt) - 1.0);
    }
    return out;
}

}  // namespace mhlab::algo
