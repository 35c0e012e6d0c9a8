#include <algorithm>
#include <array>

#include "factories.hpp"
#include "mhlab/errors.hpp"

namespace mhlab::algo {

std::string_view to_string(Taxonomy tag)
{
    switch (tag) {
    case Taxonomy::ea: return "EA";
    case Taxonomy::sia_human: return "SIA-human";
    case Taxonomy::sia_nonhuman: return "SIA-nonhuman";
    case Taxonomy::physics_chemistry: return "physics-chemistry";
    }
    return "?";
}

const ParamSet* AlgorithmSpec::preset(std::size_t dim) const
{
    const auto it = presets.find(dim);
    return it == presets.end() ? nullptr : &it->second;
}

namespace {

using D = ParamDef;

ParamDef pop(std::int64_t lo, std::int64_t def)
{
    return D::integer("pop_size", lo, 1000, def, "population size");
}

AlgorithmSpec spec(std::string id, std::string name, Taxonomy tag, std::vector<ParamDef> defs,
                   OptimizerFactory factory, std::vector<std::pair<std::size_t, ParamSet>> tuned = {})
{
    AlgorithmSpec s;
    s.id = std::move(id);
    s.display_name = std::move(name);
    s.tags = {tag};
    s.space = ParamSpace(std::move(defs));
    s.factory = std::move(factory);
    for (auto& [dim, overrides] : tuned) s.presets.emplace(dim, s.space.complete(overrides));
    return s;
}

std::vector<AlgorithmSpec> build_registry()
{
    using namespace detail;
    using P = ParamSet;
    std::vector<AlgorithmSpec> r;

    r.push_back(spec("de", "Differential Evolution", Taxonomy::ea,
                     {pop(6, 50), D::real("F", 0, 1, 0.5, "differential weight"),
                      D::real("CR", 0, 1, 0.9, "crossover rate"),
                      D::categorical("strategy",
                                     {"rand/1", "best/1", "best/2", "rand/2", "target-to-best/1", "current-to-rand/1"},
                                     "rand/1", "mutation strategy"),
                      D::categorical("crossover", {"binomial", "exponential"}, "binomial", "crossover scheme")},
                     make_de));

    r.push_back(spec("ebcm", "Enhanced Bacterial Colony Migration", Taxonomy::sia_nonhuman,
                     {pop(6, 40), D::real("F", 0, 2, 0.5, "scale factor"),
                      D::real("cc_rate", 0, 1, 0.5, "share of criss-cross variants")},
                     make_ebcm));

    r.push_back(spec("sdcs", "Self-adaptive Dynamic Cuckoo Search", Taxonomy::sia_nonhuman,
                     {pop(2, 25), D::real("omega", 0, 1, 0.5, "switch adaptation weight"),
                      D::real("J", 0, 1, 0.2, "branch threshold"), D::real("a0", 0, 1, 0.1, "Levy step scale"),
                      D::real("beta", 0.3, 1.99, 1.5, "Levy index")},
                     make_sdcs,
                     {{10, P{{"pop_size", std::int64_t{10}}, {"omega", 0.3413}, {"J", 0.8281}, {"a0", 0.9491}}},
                      {30, P{{"pop_size", std::int64_t{24}}, {"omega", 0.1854}, {"J", 0.9618}, {"a0", 0.5973}}},
                      {50, P{{"pop_size", std::int64_t{10}}, {"omega", 0.9137}, {"J", 0.9316}, {"a0", 0.5201}}}}));

    r.push_back(spec("msca", "Modified Sine Cosine Algorithm", Taxonomy::physics_chemistry,
                     {pop(4, 30), D::real("Pc", 0, 1, 0.8, "auxiliary move probability"),
                      D::real("a", 0, 4, 2, "amplitude"), D::real("mu", 3, 4, 4, "logistic map parameter")},
                     make_msca,
                     {{10, P{{"pop_size", std::int64_t{27}}, {"Pc", 0.0659}, {"a", 1.0}, {"mu", 3.0}}},
                      {30, P{{"pop_size", std::int64_t{31}}, {"Pc", 0.0319}, {"a", 1.0}, {"mu", 4.0}}},
                      {50, P{{"pop_size", std::int64_t{31}}, {"Pc", 0.0116}, {"a", 1.0}, {"mu", 4.0}}}}));

    r.push_back(spec("imfo", "Improved Moth-Flame Optimization", Taxonomy::sia_nonhuman,
                     {pop(2, 100), D::real("b", 0, 5, 1, "spiral shape"),
                      D::real("P", 0, 1, 0.5, "crossover onset as a share of the run")},
                     make_imfo,
                     {{10, P{{"pop_size", std::int64_t{119}}, {"b", 4.0}, {"P", 0.0199}}},
                      {30, P{{"pop_size", std::int64_t{118}}, {"b", 4.0}, {"P", 0.2963}}},
                      {50, P{{"pop_size", std::int64_t{93}}, {"b", 3.0}, {"P", 0.3593}}}}));

    r.push_back(spec("ao", "Aquila Optimizer", Taxonomy::sia_nonhuman,
                     {pop(2, 25), D::real("alpha", 0, 1, 0.1, "low-flight exploitation"),
                      D::real("delta", 0, 1, 0.1, "low-flight exploration")},
                     make_ao,
                     {{10, P{{"pop_size", std::int64_t{34}}, {"alpha", 0.9161}, {"delta", 0.3806}}},
                      {30, P{{"pop_size", std::int64_t{10}}, {"alpha", 0.4207}, {"delta", 0.9379}}},
                      {50, P{{"pop_size", std::int64_t{69}}, {"alpha", 0.186}, {"delta", 0.6773}}}}));

    r.push_back(spec("igoa", "Improved Grasshopper Optimization", Taxonomy::sia_nonhuman,
                     {pop(2, 30), D::real("cmax", 0, 2, 1, "initial comfort coefficient"),
                      D::real("cmin", 0, 1e-3, 4e-5, "final comfort coefficient"),
                      D::real("beta", 0.3, 1.99, 1.5, "Levy index")},
                     make_igoa,
                     {{10, P{{"pop_size", std::int64_t{34}}}},
                      {30, P{{"pop_size", std::int64_t{35}}}},
                      {50, P{{"pop_size", std::int64_t{25}}}}}));

    r.push_back(spec("hgsa", "Hybrid Gravitational Search", Taxonomy::physics_chemistry,
                     {pop(2, 30), D::real("G0", 0, 500, 100, "initial gravitational constant")}, make_hgsa,
                     {{10, P{{"pop_size", std::int64_t{37}}, {"G0", 89.0}}},
                      {30, P{{"pop_size", std::int64_t{23}}, {"G0", 118.0}}},
                      {50, P{{"pop_size", std::int64_t{24}}, {"G0", 116.0}}}}));

    r.push_back(spec("mfla", "Modified Frog Leaping Algorithm", Taxonomy::sia_nonhuman,
                     {D::integer("m", 1, 20, 4, "memeplexes"), D::integer("n", 2, 50, 5, "frogs per memeplex"),
                      D::real("beta", 0, 2, 0.6, "refinement step scale")},
                     make_mfla,
                     {{10, P{{"m", std::int64_t{5}}, {"n", std::int64_t{5}}, {"beta", 0.7563}}},
                      {30, P{{"m", std::int64_t{4}}, {"n", std::int64_t{6}}, {"beta", 0.5867}}},
                      {50, P{{"m", std::int64_t{4}}, {"n", std::int64_t{5}}, {"beta", 1.4742}}}}));

    r.push_back(spec("gsk", "Gaining-Sharing Knowledge", Taxonomy::sia_human,
                     {pop(3, 100), D::real("P", 0, 0.5, 0.1, "share of best and worst groups"),
                      D::real("kf", 0, 1, 0.5, "knowledge factor"), D::real("kr", 0, 1, 0.9, "knowledge ratio"),
                      D::integer("K", 1, 20, 10, "knowledge rate")},
                     make_gsk,
                     {{10, P{{"pop_size", std::int64_t{101}}, {"P", 0.1353}, {"kf", 0.4822}, {"kr", 0.9797},
                             {"K", std::int64_t{12}}}},
                      {30, P{{"pop_size", std::int64_t{93}}, {"P", 0.052}, {"kf", 0.485}, {"kr", 0.991},
                             {"K", std::int64_t{10}}}},
                      {50, P{{"pop_size", std::int64_t{100}}, {"P", 0.0521}, {"kf", 0.4581}, {"kr", 0.9309},
                             {"K", std::int64_t{9}}}}}));

    r.push_back(spec("mpa", "Marine Predators Algorithm", Taxonomy::sia_nonhuman,
                     {pop(2, 25), D::real("P", 0, 2, 0.5, "step scale"),
                      D::real("FADs", 0, 1, 0.2, "fish aggregating device effect")},
                     make_mpa,
                     {{10, P{{"pop_size", std::int64_t{21}}, {"FADs", 0.8297}, {"P", 0.6737}}},
                      {30, P{{"pop_size", std::int64_t{31}}, {"FADs", 0.1014}, {"P", 0.1949}}},
                      {50, P{{"pop_size", std::int64_t{25}}, {"FADs", 0.3425}, {"P", 0.5076}}}}));

    r.push_back(spec("eo", "Equilibrium Optimizer", Taxonomy::physics_chemistry,
                     {pop(4, 30), D::real("a1", 0, 5, 2, "exploration weight"),
                      D::real("a2", 0, 5, 1, "exploitation weight"), D::real("GP", 0, 1, 0.5, "generation probability")},
                     make_eo,
                     {{10, P{{"pop_size", std::int64_t{33}}, {"a1", 1.8876}, {"a2", 0.9305}, {"GP", 0.2999}}},
                      {30, P{{"pop_size", std::int64_t{31}}, {"a1", 1.9447}, {"a2", 0.95021}, {"GP", 0.5871}}},
                      {50, P{{"pop_size", std::int64_t{20}}, {"a1", 1.8587}, {"a2", 1.1681}, {"GP", 0.7087}}}}));
    return r;
}

}  // namespace

const std::vector<AlgorithmSpec>& registry()
{
    static const std::vector<AlgorithmSpec> r = build_registry();
    return r;
}

bool is_out_of_scope(std::string_view id)
{
    static constexpr std::array<std::string_view, 4> kOut = {"hses", "lshade-spacma", "nlshade", "ede-ebde"};
    return std::find(kOut.begin(), kOut.end(), id) != kOut.end();
}

const AlgorithmSpec& lookup(std::string_view id)
{
    for (const auto& s : registry()) {
        if (s.id == id) return s;
    }
    if (is_out_of_scope(id)) {
        throw NotImplemented("algorithm '" + std::string(id) + "' is not implemented");
    }
    throw ConfigError("unknown algorithm '" + std::string(id) + "'");
}

std::unique_ptr<PopulationOptimizer> make_optimizer(std::string_view id, const ParamSet& overrides,
                                                    const OptimizerOptions& options)
{
    const auto& s = lookup(id);
    return s.factory(s.space.complete(overrides), options);
}

metrics::RunTrace run_algorithm(std::string_view id, const ParamSet& overrides, const Problem& problem,
                                Budget& budget, const RngStream& rng, metrics::Recorder& recorder,
                                const OptimizerOptions& options)
{
    auto opt = make_optimizer(id, overrides, options);
    return run_population_loop(*opt, problem, budget, rng, recorder);
}

}  // namespace mhlab::algo
