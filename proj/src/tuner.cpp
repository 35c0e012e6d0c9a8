#include "mhlab/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/normal.hpp>
#include <json.hpp>

#include "mhlab/errors.hpp"
#include "mhlab/stats.hpp"

namespace mhlab::tuner {

namespace {

constexpr double kErrorFloor = 1e-8;

double sample_truncated(double mean, double sd, double lo, double hi, RandomSource& rng)
{
    if (!(sd > 0.0) || hi <= lo) {
        return std::clamp(mean, lo, hi);
    }
    const boost::math::normal_distribution<double> unit;
    const double a = boost::math::cdf(unit, (lo - mean) / sd);
    const double b = boost::math::cdf(unit, (hi - mean) / sd);
    if (!(b > a)) {
        return std::clamp(mean, lo, hi);
    }
    const double u = std::clamp(a + (b - a) * rng.uniform(), 1e-300, 1.0 - 1e-16);
    return std::clamp(mean + sd * boost::math::quantile(unit, u), lo, hi);
}

double mean_of(const std::vector<double>& v, std::size_t count)
{
    const std::size_t n = std::min(count, v.size());
    if (n == 0) return 0.0;
    return std::accumulate(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n), 0.0) / static_cast<double>(n);
}

}  // namespace

SamplingModel SamplingModel::initial(const ParamSpace& space)
{
    SamplingModel m;
    for (const auto& def : space.defs()) {
        if (def.kind == ParamKind::categorical) {
            m.categorical[def.name] = std::vector<double>(def.choices.size(), 1.0 / static_cast<double>(def.choices.size()));
        } else {
            m.numeric[def.name] = {(def.lower + def.upper) / 2.0, (def.upper - def.lower) / 2.0, true};
        }
    }
    return m;
}

std::vector<ParamSet> sample_configs(const SamplingModel& model, const ParamSpace& space, std::size_t k,
                                     RandomSource& rng)
{
    std::vector<ParamSet> out;
    out.reserve(k);
    for (std::size_t c = 0; c < k; ++c) {
        ParamSet p;
        for (const auto& def : space.defs()) {
            if (def.kind == ParamKind::categorical) {
                const auto& probs = model.categorical.at(def.name);
                double u = rng.uniform();
                std::size_t pick = probs.size() - 1;
                for (std::size_t i = 0; i < probs.size(); ++i) {
                    if (u < probs[i]) {
                        pick = i;
                        break;
                    }
                    u -= probs[i];
                }
                p.set(def.name, def.choices[pick]);
                continue;
            }
            const auto& nm = model.numeric.at(def.name);
            const bool integer = def.kind == ParamKind::integer;
            const double lo = integer ? def.lower - 0.5 : def.lower;
            const double hi = integer ? def.upper + 0.5 : def.upper;
            const double x = nm.uniform ? rng.uniform(lo, hi) : sample_truncated(nm.mean, nm.stdev, lo, hi, rng);
            if (integer) {
                p.set(def.name, static_cast<std::int64_t>(std::clamp(std::round(x), def.lower, def.upper)));
            } else {
                p.set(def.name, std::clamp(x, def.lower, def.upper));
            }
        }
        out.push_back(std::move(p));
    }
    return out;
}

SamplingModel update_model(const SamplingModel& model, const ParamSpace& space, const std::vector<ParamSet>& elites,
                           double decay)
{
    if (elites.empty()) {
        throw ConfigError("update_model needs at least one elite");
    }
    SamplingModel next = model;
    const double count = static_cast<double>(elites.size());
    for (const auto& def : space.defs()) {
        if (def.kind == ParamKind::categorical) {
            auto& probs = next.categorical.at(def.name);
            std::vector<double> freq(def.choices.size(), 0.0);
            for (const auto& e : elites) {
                const auto it = std::find(def.choices.begin(), def.choices.end(), e.choice(def.name));
                freq[static_cast<std::size_t>(it - def.choices.begin())] += 1.0 / count;
            }
            for (std::size_t i = 0; i < probs.size(); ++i) probs[i] = 0.5 * (probs[i] + freq[i]);
            continue;
        }
        auto& nm = next.numeric.at(def.name);
        double sum = 0.0;
        for (const auto& e : elites) sum += e.real(def.name);
        nm.mean = std::clamp(sum / count, def.lower, def.upper);
        nm.stdev *= decay;
        nm.uniform = false;
    }
    return next;
}

std::vector<std::size_t> RaceState::survivors() const
{
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < alive.size(); ++i)
        if (alive[i]) s.push_back(i);
    return s;
}

std::vector<std::size_t> RaceState::ranked_survivors() const
{
    auto s = survivors();
    if (blocks_run == 0 || s.size() < 2) return s;
    std::vector<double> rank_sum(s.size(), 0.0);
    for (std::size_t b = 0; b < blocks_run; ++b) {
        std::vector<double> row(s.size());
        for (std::size_t j = 0; j < s.size(); ++j) row[j] = scores[s[j]][b];
        const auto r = stats::midranks(row);
        for (std::size_t j = 0; j < s.size(); ++j) rank_sum[j] += r[j];
    }
    std::vector<std::size_t> order(s.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (rank_sum[a] != rank_sum[b]) return rank_sum[a] < rank_sum[b];
        return mean_of(scores[s[a]], blocks_run) < mean_of(scores[s[b]], blocks_run);
    });
    std::vector<std::size_t> out;
    for (std::size_t k : order) out.push_back(s[k]);
    return out;
}

RaceState race(std::vector<ParamSet> configs, const Objective& objective, std::size_t budget_runs,
               const RaceOptions& options, std::map<std::pair<std::string, std::size_t>, double>* cache)
{
    if (budget_runs == 0) {
        throw ConfigError("race: tuning budget is zero");
    }
    if (configs.size() < 2) {
        throw ConfigError("race: needs at least two configurations");
    }
    RaceState st;
    st.configs = std::move(configs);
    st.alive.assign(st.configs.size(), true);
    st.scores.assign(st.configs.size(), {});
    std::vector<std::string> keys;
    for (const auto& c : st.configs) keys.push_back(c.to_string());

    for (std::size_t b = 0; b < options.max_blocks; ++b) {
        const auto s = st.survivors();
        if (s.size() < 2) break;
        std::size_t cost = 0;
        for (std::size_t i : s) cost += !(cache && cache->count({keys[i], b}));
        if (st.runs_used + cost > budget_runs) break;

        for (std::size_t i : s) {
            double score = 0.0;
            if (cache && cache->count({keys[i], b})) {
                score = cache->at({keys[i], b});
            } else {
                score = objective(st.configs[i], b, st.evals_used);
                ++st.runs_used;
                if (cache) (*cache)[{keys[i], b}] = score;
            }
            st.scores[i].push_back(score);
        }
        st.blocks_run = b + 1;
        if (st.blocks_run < options.first_test) continue;

        if (s.size() >= 3) {
            stats::ResultMatrix m;
            for (std::size_t i : s) m.algorithms.push_back(keys[i]);
            for (std::size_t r = 0; r < st.blocks_run; ++r) {
                std::vector<double> row;
                for (std::size_t i : s) row.push_back(st.scores[i][r]);
                m.cells.push_back(std::move(row));
            }
            const auto rep = stats::friedman(m, options.alpha);
            if (!rep.significant) continue;
            const double cd = stats::nemenyi_cd(std::min<std::size_t>(s.size(), 50), st.blocks_run, options.alpha);
            const double best = *std::min_element(rep.average_ranks.begin(), rep.average_ranks.end());
            for (std::size_t j = 0; j < s.size(); ++j) {
                const double gap = rep.average_ranks[j] - best;
                if (gap > cd) {
                    st.alive[s[j]] = false;
                    st.history.push_back({s[j], b, gap});
                }
            }
        } else {
            try {
                const auto rep = stats::wilcoxon_signed_rank(st.scores[s[0]], st.scores[s[1]], options.alpha);
                if (rep.significant) {
                    const std::size_t loser = rep.r_plus > rep.r_minus ? s[0] : s[1];
                    st.alive[loser] = false;
                    st.history.push_back({loser, b, std::abs(rep.r_plus - rep.r_minus) / static_cast<double>(rep.n)});
                }
            } catch (const InsufficientData&) {
                // Too many tied blocks to tell the two apart yet.
            }
        }
    }
    return st;
}

TuneResult tune(const ParamSpace& space, const Objective& objective, const TunerOptions& options)
{
    const std::size_t min_race = 2 * std::max<std::size_t>(1, options.first_test);
    if (options.budget_runs == 0) {
        throw ConfigError("tune: tuning budget is zero");
    }
    if (options.budget_runs < min_race) {
        throw ConfigError("tune: budget of " + std::to_string(options.budget_runs) +
                          " runs cannot pay for one race (needs " + std::to_string(min_race) + ")");
    }
    RngStream rng = RngStream(options.seed).substream("tuner");
    const std::size_t planned =
        2 + static_cast<std::size_t>(std::floor(std::log2(static_cast<double>(std::max<std::size_t>(1, space.size())))));

    SamplingModel model = SamplingModel::initial(space);
    std::vector<ParamSet> elites;
    std::map<std::pair<std::string, std::size_t>, double> cache;
    RaceOptions ropt{options.first_test, options.alpha, 1000};

    TuneResult result;
    double best_seen = std::numeric_limits<double>::infinity();
    for (std::size_t it = 1;; ++it) {
        const std::size_t remaining = options.budget_runs - result.runs_used;
        if (remaining < min_race) break;
        const std::size_t left = it <= planned ? planned - it + 1 : 1;
        const std::size_t slice = remaining / left;
        std::size_t n = std::min(options.max_configs, slice / (options.first_test + std::min<std::size_t>(5, it)));
        n = std::max(n, elites.size() + 1);
        n = std::max<std::size_t>(n, 2);

        std::vector<ParamSet> configs = elites;
        std::vector<std::string> seen;
        for (const auto& e : elites) seen.push_back(e.to_string());
        for (int attempt = 0; configs.size() < n && attempt < 20; ++attempt) {
            for (auto& c : sample_configs(model, space, n - configs.size(), rng)) {
                const auto key = c.to_string();
                if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
                seen.push_back(key);
                configs.push_back(std::move(c));
            }
        }
        if (configs.size() < 2) break;

        auto st = race(std::move(configs), objective, std::min(remaining, std::max(slice, min_race)), ropt, &cache);
        result.runs_used += st.runs_used;
        result.evals_used += st.evals_used;
        if (st.blocks_run == 0) break;

        const auto ranked = st.ranked_survivors();
        elites.clear();
        for (std::size_t k = 0; k < ranked.size() && elites.size() < options.elites; ++k) {
            elites.push_back(st.configs[ranked[k]]);
        }
        const auto& top = st.scores[ranked.front()];
        best_seen = std::min(best_seen, mean_of(top, options.first_test));
        result.best = st.configs[ranked.front()];
        result.best_score = mean_of(top, st.blocks_run);

        IterationRecord rec;
        rec.iteration = it;
        for (const auto& c : st.configs) rec.configs.push_back(c.to_string());
        rec.eliminations = st.history;
        for (const auto& e : elites) rec.elites.push_back(e.to_string());
        rec.blocks_run = st.blocks_run;
        rec.runs_used = st.runs_used;
        rec.best_score = best_seen;
        result.log.push_back(std::move(rec));

        model = update_model(model, space, elites, options.decay);
        if (st.runs_used == 0) break;
    }
    if (result.log.empty()) {
        throw ConfigError("tune: budget too small for one race");
    }
    return result;
}

bench::Suite training_instances(std::size_t dim, std::uint64_t seed, std::size_t per_class)
{
    bench::SuiteCounts counts{per_class, per_class, per_class, per_class};
    return bench::make_suite(dim, counts, true, mix64(seed, hash_label("training")));
}

Objective algorithm_objective(std::string algo, bench::Suite instances, std::uint64_t evals_per_run,
                              std::uint64_t seed, algo::OptimizerOptions options)
{
    if (instances.empty()) {
        throw ConfigError("tuning needs at least one training instance");
    }
    algo::lookup(algo);
    return [algo = std::move(algo), instances = std::move(instances), evals_per_run, seed, options](
               const ParamSet& config, std::size_t block, std::uint64_t& evals) {
        const auto& problem = *instances[block % instances.size()];
        // A population the run budget cannot even initialize ranks last.
        if (algo::make_optimizer(algo, config, options)->initial_evals() > evals_per_run) {
            return std::numeric_limits<double>::max();
        }
        Budget budget{evals_per_run};
        metrics::Recorder recorder(1u << 30);
        const auto trace =
            algo::run_algorithm(algo, config, problem, budget, RngStream(mix64(seed, block)), recorder, options);
        evals += trace.used_evals;
        return std::max(trace.best_fitness - problem.optimum(), kErrorFloor);
    };
}

void write_audit_log(std::ostream& out, const TuneResult& result)
{
    nlohmann::json j;
    j["best"] = result.best.to_string();
    j["best_score"] = result.best_score;
    j["runs_used"] = result.runs_used;
    j["evals_used"] = result.evals_used;
    auto& its = j["iterations"] = nlohmann::json::array();
    for (const auto& r : result.log) {
        nlohmann::json e;
        e["iteration"] = r.iteration;
        e["configs"] = r.configs;
        e["elites"] = r.elites;
        e["blocks_run"] = r.blocks_run;
        e["runs_used"] = r.runs_used;
        e["best_score"] = r.best_score;
        auto& el = e["eliminations"] = nlohmann::json::array();
        for (const auto& x : r.eliminations) {
            el.push_back({{"config", r.configs[x.config]}, {"block", x.block}, {"rank_gap", x.rank_gap}});
        }
        its.push_back(std::move(e));
    }
    out << j.dump(2) << '\n';
}

}  // namespace mhlab::tuner
