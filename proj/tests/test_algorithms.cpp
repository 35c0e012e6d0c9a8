#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mhlab/algorithms.hpp"
#include "mhlab/errors.hpp"
#include "scripted.hpp"

using namespace mhlab;
using namespace mhlab::algo;
using mhlab::testing::ScriptedSource;

namespace {

double sphere(std::span<const double> x)
{
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

FunctionProblem sphere_problem(std::size_t dim) { return {"sphere", SearchSpace::box(dim, -100, 100), sphere}; }

Population pop_of(std::initializer_list<Vec> xs)
{
    Population p;
    for (const auto& x : xs) p.members.push_back(Individual{x, sphere(x)});
    return p;
}

void check_vec(const Vec& got, const Vec& want, double tol = 1e-12)
{
    REQUIRE(got.size() == want.size());
    for (std::size_t d = 0; d < got.size(); ++d) {
        CHECK(std::abs(got[d] - want[d]) <= tol * std::max(1.0, std::abs(want[d])));
    }
}

}  // namespace

// --- operator hand oracles --------------------------------------------------

TEST_CASE("de rand/1 hand evaluation")
{
    const std::vector<Vec> r = {{1, 2}, {4, 6}, {2, 2}};
    check_vec(de_mutant(DeStrategy::rand1, {0, 0}, {0, 0}, r, 0.5), {2, 4});
    check_vec(de_mutant(DeStrategy::rand1, {0, 0}, {0, 0}, r, 0.0), {1, 2});
}

TEST_CASE("de target-to-best collapses when target is best and partners coincide")
{
    const std::vector<Vec> r = {{7, 7}, {7, 7}};
    check_vec(de_mutant(DeStrategy::target_to_best1, {3, -1}, {3, -1}, r, 0.8), {3, -1});
}

TEST_CASE("de strategies match a direct formula")
{
    const Vec xi{1, -2}, xb{0.5, 0.25};
    const std::vector<Vec> r = {{1, 2}, {3, 5}, {-1, 4}, {2, 2}, {0, -3}};
    const double F = 0.7;
    auto lin = [](std::initializer_list<std::pair<double, Vec>> terms) {
        Vec out(2, 0.0);
        for (const auto& [c, v] : terms)
            for (std::size_t d = 0; d < 2; ++d) out[d] += c * v[d];
        return out;
    };
    check_vec(de_mutant(DeStrategy::best1, xi, xb, r, F), lin({{1, xb}, {F, r[0]}, {-F, r[1]}}));
    check_vec(de_mutant(DeStrategy::best2, xi, xb, r, F),
              lin({{1, xb}, {F, r[0]}, {-F, r[1]}, {F, r[2]}, {-F, r[3]}}));
    check_vec(de_mutant(DeStrategy::rand2, xi, xb, r, F),
              lin({{1, r[0]}, {F, r[1]}, {-F, r[2]}, {F, r[3]}, {-F, r[4]}}));
    check_vec(de_mutant(DeStrategy::target_to_best1, xi, xb, r, F),
              lin({{1 - F, xi}, {F, xb}, {F, r[0]}, {-F, r[1]}}));
    check_vec(de_mutant(DeStrategy::current_to_rand1, xi, xb, r, F),
              lin({{1 - F, xi}, {F, r[0]}, {F, r[1]}, {-F, r[2]}}));
}

TEST_CASE("de_mutate needs six members and distinct partners")
{
    auto five = pop_of({{0}, {1}, {2}, {3}, {4}});
    RngStream rng(1);
    CHECK_THROWS_AS(de_mutate(DeStrategy::rand1, five, 0, 0, 0.5, rng), ConfigError);

    auto six = pop_of({{0}, {10}, {20}, {30}, {40}, {50}});
    for (int k = 0; k < 50; ++k) {
        const Vec v = de_mutate(DeStrategy::rand1, six, 2, 0, 0.0, rng);
        CHECK(v[0] != 20.0);
    }
}

TEST_CASE("de crossover")
{
    const Vec target{0, 0, 0, 0}, mutant{1, 2, 3, 4};
    RngStream rng(3);
    check_vec(de_crossover_binomial(target, mutant, 1.0, rng), mutant);

    for (int k = 0; k < 20; ++k) {
        ScriptedSource s(0.5);
        s.indices = {static_cast<std::size_t>(k % 4)};
        const Vec u = de_crossover_binomial(target, mutant, 0.0, s);
        int changed = 0;
        for (std::size_t d = 0; d < 4; ++d) changed += u[d] != target[d];
        CHECK(changed == 1);
        CHECK(u[k % 4] == mutant[k % 4]);
    }
    check_vec(de_exponential_run(target, mutant, 0, 4), mutant);
    check_vec(de_exponential_run(target, mutant, 3, 2), {1, 0, 0, 4});
}

TEST_CASE("de selection is inclusive")
{
    Individual target{{0}, 1.0};
    CHECK(&de_select(target, Individual{{1}, 1.0}) != &target);
    CHECK(&de_select(target, Individual{{1}, 2.0}) == &target);
    CHECK(&de_select(target, Individual{{1}, 0.5}) != &target);
    CHECK_THROWS_AS(de_select(target, Individual{{1}, std::nullopt}), ContractError);
}

TEST_CASE("ebcm operators")
{
    check_vec(ebcm_criss_cross({0, 0}, {2, 2}, {1, 1}, 1.0), {1, 1});
    check_vec(ebcm_criss_cross({5, 6}, {2, 2}, {1, 1}, 0.0), {5, 6});
    check_vec(ebcm_toward_best({9, 8}, {1, 2}, {1, 2}, 0.7), {9, 8});

    auto x1 = pop_of({{0}, {1}, {2}});
    Population empty;
    RngStream rng(4);
    CHECK_THROWS_AS(ebcm_variant(x1, empty, 0, 0.5, 0.5, rng), ConfigError);
}

TEST_CASE("sdcs operators")
{
    CHECK(sdcs_switch(0.3, 0.0) == 0.3);
    CHECK(sdcs_switch(0.8, 0.0) == 0.8);
    CHECK(sdcs_switch(0.3, 0.5) == 0.0);
    CHECK(sdcs_switch(0.8, 0.5) == 1.0);
    check_vec(sdcs_crossover({0}, {2}, 0.5, 0.2, 1.0, {1.0}), {2});
    // Closed gate leaves the nest in place.
    const double gate = heaviside(0.2 - 0.6);
    CHECK(gate == 0.0);
    check_vec(sdcs_mutation({3, 4}, {9, 9}, 0.1, 0.2, gate, {0.5, 0.5}), {3, 4});
    check_vec(sdcs_mutation({0}, {4}, 0.5, 0.2, 1.0, {0.5}), {2});
    check_vec(sdcs_mutation({0}, {4}, 0.9, 0.2, 1.0, {0.5}), {4});
}

TEST_CASE("sca operators")
{
    CHECK(sca_amplitude(2, 0, 100) == 2.0);
    CHECK(sca_amplitude(2, 100, 100) == 0.0);
    const double pi = std::acos(-1.0);
    check_vec(sca_update({0}, {3}, 2.0, {pi / 2}, {1}, {0.1}), {6});
    check_vec(sca_update({5, 1}, {3, 3}, 0.0, {1, 2}, {1, 1}, {0.1, 0.9}), {5, 1});
    check_vec(sca_update({5}, {3}, 2.0, {0.0}, {1}, {0.1}), {5});
    CHECK(logistic_map(0.5, 4.0) == 1.0);
}

TEST_CASE("imfo operators")
{
    CHECK(imfo_weight(2.0, 2.0) == 1.0);
    CHECK(imfo_weight(2.0, 0.0) == 1.0);
    check_vec(imfo_update({1}, {2}, {4}, 0.5, 1.0, {0.0}), {4});
    check_vec(imfo_update({2, 3}, {2, 3}, {9, 9}, 1.0, 1.0, {0.3, -0.7}), {2, 3});
}

TEST_CASE("ao operators")
{
    check_vec(ao_high_soar({4, 5}, {1, 2}, 10, 10, 0.0), {1, 2});
    const auto space = SearchSpace::box(2, -100, 100);
    const double alpha = 0.3, delta = 0.2;
    check_vec(ao_low_flight({4, 5}, {1, 2}, alpha, delta, space, 0.0, 0.0),
              {(4 - 1) * alpha + -100 * delta, (5 - 2) * alpha + -100 * delta});
    CHECK(ao_quality(5, 1, 0.3) == 1.0);
    CHECK(ao_spiral(3).size() == 3);
}

TEST_CASE("igoa social update matches a brute-force sum")
{
    const auto space = SearchSpace::box(2, -10, 10);
    const std::vector<Vec> xs = {{0, 0}, {1, 2}, {-3, 0.5}};
    const double c = 0.4;
    const Vec target{0.5, -0.5}, gauss{1.1, 0.9};
    const Vec got = igoa_social_update(xs, 0, c, space, target, gauss);
    for (std::size_t d = 0; d < 2; ++d) {
        double sum = 0.0;
        for (std::size_t j = 1; j < 3; ++j) {
            const double dx = xs[j][0] - xs[0][0], dy = xs[j][1] - xs[0][1];
            const double dist = std::hypot(dx, dy);
            const double delta = xs[j][d] - xs[0][d];
            const double r = 2.0 + std::fmod(std::abs(delta), 2.0);
            const double s = 0.5 * std::exp(-r / 1.5) - std::exp(-r);
            sum += c * 20.0 / 2.0 * s * delta / dist;
        }
        CHECK(got[d] == doctest::Approx(c * sum * gauss[d] + target[d]).epsilon(1e-12));
    }
    check_vec(igoa_levy_candidate({1, 2}, {0, 0}, {5, 5}), {1, 2});
    CHECK_FALSE(igoa_adopt_levy(3.0, 3.0));
    CHECK(igoa_adopt_levy(2.0, 3.0));
    CHECK(igoa_coefficient(1.0, 4e-5, 50, 50) == doctest::Approx(4e-5));
}

TEST_CASE("hgsa operators")
{
    check_vec(hgsa_velocity({0}, {0}, {3}, {7}, 0.0, 0.0, 0.0), {0});
    check_vec(hgsa_velocity({1}, {5}, {3}, {7}, 1.0, 0.0, 0.0), {1});
    check_vec(hgsa_velocity({0}, {0}, {7}, {7}, 0.0, 0.0, 2.0), {0});
    CHECK(hgsa_c2(0, 10) == 0.0);
    CHECK(gsa_gravity(100, 0, 10) == 100.0);
}

TEST_CASE("mfla operators")
{
    check_vec(mfla_leap({0}, {2}, {4}, 0.5, 0.5), {3});
    check_vec(mfla_leap({1, 1}, {5, 5}, {7, 7}, 0.0, 0.0), {1, 1});
    check_vec(mfla_leap({1, 1}, {1, 1}, {1, 1}, 0.3, 0.9), {1, 1});
    CHECK_THROWS_AS(mfla_partition(19, 4, 5), ConfigError);
    const auto plexes = mfla_partition(6, 2, 3);
    CHECK(plexes[0] == std::vector<std::size_t>{0, 2, 4});
    CHECK(plexes[1] == std::vector<std::size_t>{1, 3, 5});
}

TEST_CASE("gsk operators")
{
    // x_i worse than x_r: pulled toward it.
    check_vec(gsk_junior({2}, {3}, {1}, {5}, 10.0, 1.0, 1.0), {7});
    check_vec(gsk_junior({2, 2}, {3, 3}, {1, 1}, {5, 5}, 10.0, 1.0, 0.0), {2, 2});
    check_vec(gsk_senior({2, 2}, {3, 3}, {1, 1}, {5, 5}, {0, 0}, 1.0, 2.0, 0.0, false), {2, 2});
    CHECK(gsk_junior_dims(10, 0, 100, 10) == 10);
    CHECK(gsk_junior_dims(10, 100, 100, 10) == 0);
}

TEST_CASE("mpa operators")
{
    const Vec step = mpa_step_toward({2, 2}, {1, 1}, {1, 1});
    check_vec(step, {1, 1});
    check_vec(mpa_move_prey({1, 1}, step, 0.5, {1, 1}), {1.5, 1.5});
    check_vec(mpa_step_toward({3, 4}, {3, 4}, {1, 1}), {0, 0});
    CHECK(mpa_cf(0, 10) == 1.0);
}

TEST_CASE("eo operators")
{
    check_vec(eo_update({2}, {0}, {0.5}, {1}), {1.5});
    check_vec(eo_update({2, 3}, {7, 8}, {0, 0}, {0, 0}), {7, 8});
    check_vec(eo_update({2, 3}, {7, 8}, {1, 1}, {5, 5}), {2, 3});
    check_vec(eo_exponential(0.0, {0.9}, {0.5}, 0.7), {0});
}

// --- registry -----------------------------------------------------------------

TEST_CASE("registry lists the twelve algorithms in order")
{
    std::vector<std::string> ids;
    for (const auto& s : registry()) ids.push_back(s.id);
    CHECK(ids == std::vector<std::string>{"de", "ebcm", "sdcs", "msca", "imfo", "ao", "igoa", "hgsa", "mfla", "gsk",
                                          "mpa", "eo"});
    for (const auto& s : registry()) {
        CHECK_NOTHROW(s.space.validate(s.defaults()));
        for (const auto& [dim, preset] : s.presets) CHECK_NOTHROW(s.space.validate(preset));
        CHECK_FALSE(s.tags.empty());
    }
}

TEST_CASE("lookup")
{
    CHECK(lookup("gsk").space.size() == 5);
    CHECK(lookup("gsk").tags.front() == Taxonomy::sia_human);
    CHECK(lookup("eo").tags.front() == Taxonomy::physics_chemistry);
    CHECK(lookup("de").preset(10) == nullptr);
    REQUIRE(lookup("hgsa").preset(30) != nullptr);
    CHECK(lookup("hgsa").preset(30)->real("G0") == 118.0);
    CHECK_THROWS_AS(lookup("nlshade"), NotImplemented);
    CHECK_THROWS_AS(lookup("hses"), NotImplemented);
    CHECK_THROWS_AS(lookup("nope"), ConfigError);
}

TEST_CASE("make_optimizer validates overrides")
{
    CHECK_THROWS_AS(make_optimizer("gsk", {{"pop_size", std::int64_t{2}}}), ConfigError);
    CHECK_THROWS_AS(make_optimizer("de", {{"F", 1.5}}), ConfigError);
    CHECK_THROWS_AS(make_optimizer("de", {{"bogus", 1.0}}), ConfigError);
    CHECK(make_optimizer("mfla")->pop_size() == 20);
}

// --- step properties ----------------------------------------------------------

namespace {

struct NullCase {
    const char* id;
    ParamSet overrides;
    Vec point;
};

std::vector<NullCase> null_cases()
{
    const Vec c{3, -2, 5};
    const Vec origin{0, 0, 0};
    using P = ParamSet;
    return {
        {"de", P{{"F", 0.0}}, c},
        {"ebcm", P{{"F", 0.0}}, c},
        {"sdcs", P{{"a0", 0.0}, {"omega", 1.0}}, c},
        {"msca", P{{"a", 0.0}, {"Pc", 0.0}}, c},
        {"imfo", P{{"b", 0.0}}, c},
        {"ao", P{{"alpha", 0.0}, {"delta", 0.0}}, origin},
        {"igoa", P{{"cmax", 0.0}, {"cmin", 0.0}}, c},
        {"hgsa", P{}, c},
        {"mfla", P{{"beta", 0.0}}, c},
        {"gsk", P{{"kf", 0.0}}, c},
        {"mpa", P{{"P", 0.0}, {"FADs", 0.0}}, c},
        {"eo", P{{"a1", 0.0}}, c},
    };
}

}  // namespace

TEST_CASE("null update leaves every position unchanged")
{
    const auto problem = sphere_problem(3);
    for (const auto& nc : null_cases()) {
        CAPTURE(nc.id);
        auto opt = make_optimizer(nc.id, nc.overrides);
        Budget budget{1'000'000};
        Evaluator eval(problem, budget);
        opt->initialize_from(eval, std::vector<Vec>(opt->pop_size(), nc.point));
        ScriptedSource zero(0.0);
        opt->step(eval, zero, Schedule{0, 100});
        for (const auto& ind : opt->population().members) check_vec(ind.position, nc.point, 0.0);
    }
}

TEST_CASE("hgsa null update holds for a spread population on the first step")
{
    const auto problem = sphere_problem(2);
    auto opt = make_optimizer("hgsa", {{"pop_size", std::int64_t{5}}});
    Budget budget{1000};
    Evaluator eval(problem, budget);
    const std::vector<Vec> xs = {{1, 2}, {-3, 4}, {5, -6}, {7, 8}, {0, 1}};
    opt->initialize_from(eval, xs);
    ScriptedSource zero(0.0);
    opt->step(eval, zero, Schedule{0, 50});
    for (std::size_t i = 0; i < xs.size(); ++i) check_vec(opt->population()[i].position, xs[i], 0.0);
}

TEST_CASE("steps keep positions in bounds, respect their eval bound and satisfy the increment identity")
{
    const auto problem = sphere_problem(4);
    for (const auto& s : registry()) {
        CAPTURE(s.id);
        auto opt = make_optimizer(s.id);
        Budget budget{10'000'000};
        Evaluator eval(problem, budget);
        RngStream rng(hash_label(s.id));
        opt->initialize(eval, rng);
        for (std::size_t t = 0; t < 20; ++t) {
            const Population before = opt->population();
            const auto used = eval.used();
            opt->step(eval, rng, Schedule{t, 20});
            CHECK(eval.used() - used <= opt->max_evals_per_step());
            const auto& after = opt->population();
            REQUIRE(after.size() == before.size());
            for (std::size_t i = 0; i < after.size(); ++i) {
                CHECK(problem.space().contains(after[i].position));
                for (std::size_t d = 0; d < 4; ++d) {
                    const double delta = after[i].position[d] - before[i].position[d];
                    CHECK(std::abs(before[i].position[d] + delta - after[i].position[d]) <= 1e-12 * 100);
                }
            }
        }
    }
}

TEST_CASE("de selection never worsens the best fitness")
{
    const auto problem = sphere_problem(5);
    auto opt = make_optimizer("de");
    Budget budget{1'000'000};
    Evaluator eval(problem, budget);
    RngStream rng(11);
    opt->initialize(eval, rng);
    double best = *opt->population()[opt->population().best_index()].fitness;
    for (std::size_t t = 0; t < 50; ++t) {
        const Population before = opt->population();
        opt->step(eval, rng, Schedule{t, 50});
        for (std::size_t i = 0; i < before.size(); ++i) {
            CHECK(*opt->population()[i].fitness <= *before[i].fitness);
        }
        const double now = *opt->population()[opt->population().best_index()].fitness;
        CHECK(now <= best);
        best = now;
    }
}

TEST_CASE("every algorithm improves on the sphere within a small budget")
{
    const auto problem = sphere_problem(5);
    for (const auto& s : registry()) {
        CAPTURE(s.id);
        Budget budget = Budget::for_dim(5, 1000);
        metrics::Recorder recorder;
        const auto trace = run_algorithm(s.id, {}, problem, budget, RngStream(5), recorder);
        CHECK(trace.used_evals <= 5000);
        CHECK(budget.used_evals == trace.used_evals);
        CHECK(trace.best_fitness < trace.rows.front().best);
    }
}

TEST_CASE("runs are reproducible from the seed")
{
    const auto problem = sphere_problem(3);
    for (const auto& s : registry()) {
        CAPTURE(s.id);
        Budget b1 = Budget::for_dim(3, 300), b2 = Budget::for_dim(3, 300);
        metrics::Recorder r1, r2;
        const auto t1 = run_algorithm(s.id, {}, problem, b1, RngStream(9), r1);
        const auto t2 = run_algorithm(s.id, {}, problem, b2, RngStream(9), r2);
        CHECK(t1.best_fitness == t2.best_fitness);
        CHECK(t1.best_position == t2.best_position);
    }
}

TEST_CASE("calibration optimizers")
{
    const auto problem = sphere_problem(2);
    Budget budget{1000};
    metrics::Recorder rec;
    auto magnet = make_origin_magnet();
    const auto trace = run_population_loop(*magnet, problem, budget, RngStream(1), rec);
    CHECK(trace.best_fitness < 1e-20);

    auto search = make_shift_invariant_search();
    Budget b2{200};
    metrics::Recorder rec2;
    run_population_loop(*search, problem, b2, RngStream(1), rec2);
    for (const auto& ind : search->population().members) {
        for (double v : ind.position) CHECK(std::abs(v) <= 20.0);
    }
}
