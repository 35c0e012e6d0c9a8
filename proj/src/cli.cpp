#include "mhlab/cli.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "mhlab/errors.hpp"
#include "mhlab/experiments.hpp"
#include "mhlab/tuner.hpp"

namespace fs = std::filesystem;

namespace mhlab::cli {

namespace {

struct Options {
    std::string algos;
    std::string funcs;
    std::string dims = "10";
    std::size_t runs = 31;
    std::uint64_t seed = 0;
    std::uint64_t suite_seed = 0;
    std::uint64_t budget_multiplier = Budget::kDefaultMultiplier;
    bool shifted = true;
    std::size_t parallelism = 1;
    std::string out = "results";
    std::string preset = "default";
    std::vector<std::string> param_files;
    std::vector<std::string> sets;
    double alpha = 0.05;
    bool dry_run = false;
    std::uint64_t trace_stride = 10;
    bool no_traces = false;
    bool median = false;
    bool iman_davenport = false;
    std::string input;
    std::size_t tune_budget = 2000;
};

std::vector<std::string> split(const std::string& text, char sep = ',')
{
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) {
        while (!item.empty() && item.front() == ' ') item.erase(item.begin());
        while (!item.empty() && item.back() == ' ') item.pop_back();
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::size_t parse_index(const std::string& text, std::string_view what)
{
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ConfigError(fmt::format("{}: '{}' is not a number", what, text));
    }
    return v;
}

/// "1,3,5-8".
std::vector<std::size_t> parse_index_list(const std::string& text, std::string_view what)
{
    std::vector<std::size_t> out;
    for (const auto& item : split(text)) {
        const auto dash = item.find('-');
        if (dash == std::string::npos) {
            out.push_back(parse_index(item, what));
            continue;
        }
        const auto lo = parse_index(item.substr(0, dash), what);
        const auto hi = parse_index(item.substr(dash + 1), what);
        if (lo > hi) throw ConfigError(fmt::format("{}: empty range '{}'", what, item));
        for (std::size_t v = lo; v <= hi; ++v) out.push_back(v);
    }
    return out;
}

std::vector<std::string> algorithm_ids(const std::string& text)
{
    if (text.empty() || text == "all") {
        std::vector<std::string> ids;
        for (const auto& spec : algo::registry()) ids.push_back(spec.id);
        return ids;
    }
    return split(text);
}

/// Tuned-preset file written by `tune`: "algo <id>", "dim <d>", "params <a=1;b=2>".
struct PresetFile {
    std::string algo;
    std::size_t dim = 0;
    ParamSet params;
};

PresetFile read_preset_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot open preset file {}", path));
    PresetFile p;
    std::string params_text;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        const auto space = line.find(' ');
        const auto key = line.substr(0, space);
        const auto value = space == std::string::npos ? std::string() : line.substr(space + 1);
        if (key == "algo") p.algo = value;
        else if (key == "dim") p.dim = parse_index(value, "dim");
        else if (key == "params") params_text = value;
        else throw ConfigError(fmt::format("{}: row {}: unknown key '{}'", path, line_no, key));
    }
    if (p.algo.empty()) throw ConfigError(fmt::format("{}: missing 'algo'", path));
    const auto& spec = algo::lookup(p.algo);
    p.params = parse_param_set(spec.space, params_text);
    spec.space.validate(spec.space.complete(p.params));
    return p;
}

void write_preset_file(const std::string& path, const std::string& algo, std::size_t dim, const ParamSet& params)
{
    std::ofstream out(path);
    out << "# tuned preset\n" << "algo " << algo << "\ndim " << dim << "\nparams " << params.to_string() << '\n';
    if (!out) throw std::runtime_error(fmt::format("cannot write {}", path));
}

std::vector<exp::AlgorithmEntry> build_entries(const Options& o, const std::vector<std::size_t>& dims, bool allow_toys)
{
    if (o.preset != "default" && o.preset != "tuned") {
        throw ConfigError(fmt::format("--preset must be 'default' or 'tuned', got '{}'", o.preset));
    }
    std::vector<exp::AlgorithmEntry> entries;
    for (const auto& id : algorithm_ids(o.algos)) {
        if (allow_toys && id == "origin-magnet") {
            entries.push_back(exp::AlgorithmEntry::custom(id, [] { return algo::make_origin_magnet(); }));
        } else if (allow_toys && id == "shift-invariant") {
            entries.push_back(exp::AlgorithmEntry::custom(id, [] { return algo::make_shift_invariant_search(); }));
        } else {
            algo::lookup(id);
            entries.push_back(exp::AlgorithmEntry::registered(id, {}, o.preset == "tuned"));
        }
    }
    auto entry_for = [&](const std::string& id) -> exp::AlgorithmEntry& {
        for (auto& e : entries) {
            if (e.id == id) return e;
        }
        throw ConfigError(fmt::format("'{}' is not among the selected algorithms", id));
    };
    for (const auto& path : o.param_files) {
        const auto preset = read_preset_file(path);
        if (std::find(dims.begin(), dims.end(), preset.dim) == dims.end()) {
            throw ConfigError(fmt::format("{} is tuned for dim {}, which is not selected", path, preset.dim));
        }
        auto& e = entry_for(preset.algo);
        for (const auto& [name, value] : preset.params.values()) e.overrides.set(name, value);
    }
    for (const auto& item : o.sets) {
        const auto eq = item.find('=');
        const auto dot = item.find('.');
        if (eq == std::string::npos) throw ConfigError(fmt::format("--set expects algo.name=value, got '{}'", item));
        std::string algo_id, name;
        if (dot != std::string::npos && dot < eq) {
            algo_id = item.substr(0, dot);
            name = item.substr(dot + 1, eq - dot - 1);
        } else if (entries.size() == 1) {
            algo_id = entries.front().id;
            name = item.substr(0, eq);
        } else {
            throw ConfigError(fmt::format("--set '{}' needs an algorithm prefix (algo.name=value)", item));
        }
        auto& e = entry_for(algo_id);
        if (e.factory) throw ConfigError(fmt::format("'{}' takes no parameters", algo_id));
        const auto& space = algo::lookup(algo_id).space;
        for (const auto& [k, v] : parse_param_set(space, name + "=" + item.substr(eq + 1)).values()) e.overrides.set(k, v);
    }
    return entries;
}

exp::ExperimentPlan build_plan(const Options& o)
{
    exp::ExperimentPlan plan;
    plan.dims = parse_index_list(o.dims, "--dims");
    plan.algorithms = build_entries(o, plan.dims, false);
    if (!o.funcs.empty() && o.funcs != "all") plan.functions = parse_index_list(o.funcs, "--funcs");
    plan.runs = o.runs;
    plan.seed = o.seed;
    plan.suite_seed = o.suite_seed;
    plan.budget_multiplier = o.budget_multiplier;
    plan.shifted = o.shifted;
    plan.trace_stride = o.trace_stride;
    plan.write_traces = !o.no_traces;
    plan.output_dir = o.out;
    plan.validate();
    return plan;
}

exp::Aggregate aggregate_of(const Options& o) { return o.median ? exp::Aggregate::median : exp::Aggregate::mean; }

int cmd_list(std::ostream& out)
{
    for (const auto& spec : algo::registry()) {
        std::string tags;
        for (auto t : spec.tags) tags += (tags.empty() ? "" : ",") + std::string(algo::to_string(t));
        out << fmt::format("{:<6} {:<40} [{}]\n", spec.id, spec.display_name, tags);
        for (const auto& d : spec.space.defs()) {
            std::string domain;
            if (d.kind == ParamKind::categorical) {
                for (const auto& c : d.choices) domain += (domain.empty() ? "" : "|") + c;
            } else if (d.kind == ParamKind::integer) {
                domain = fmt::format("[{}, {}]", static_cast<std::int64_t>(d.lower), static_cast<std::int64_t>(d.upper));
            } else {
                domain = fmt::format("[{}, {}]", d.lower, d.upper);
            }
            out << fmt::format("    {:<10} {:<11} {:<24} default={}\n", d.name, to_string(d.kind), domain,
                               format_value(d.default_value));
        }
        for (const auto& [dim, preset] : spec.presets) out << fmt::format("    tuned d{}: {}\n", dim, preset.to_string());
    }
    out << "not implemented: hses, lshade-spacma, nlshade, ede-ebde\n";
    out << "bias-audit references: origin-magnet, shift-invariant\n";
    return 0;
}

int cmd_run(const Options& o, std::ostream& out, std::ostream& err)
{
    auto plan = build_plan(o);
    const auto descriptors = exp::plan_matrix(plan);
    if (o.dry_run) {
        out << fmt::format("descriptors: {}\n", descriptors.size());
        return 0;
    }
    exp::ExecuteOptions exec;
    exec.parallelism = o.parallelism;
    std::size_t last_pct = 0;
    exec.progress = [&](std::size_t done, std::size_t total) {
        const std::size_t pct = done * 100 / std::max<std::size_t>(total, 1);
        if (pct >= last_pct + 10 || done == total) {
            last_pct = pct;
            err << fmt::format("progress {}/{}\n", done, total);
        }
    };
    const auto store = exp::execute(plan, exec);
    exp::export_results(plan, store);
    out << fmt::format("wrote {} ({} records)\n", (fs::path(plan.output_dir) / "results.csv").string(),
                       store.records().size());
    return 0;
}

int cmd_tune(const Options& o, std::ostream& out)
{
    const auto dims = parse_index_list(o.dims, "--dims");
    const auto ids = algorithm_ids(o.algos);
    for (const auto& id : ids) algo::lookup(id);
    fs::create_directories(o.out);
    for (const auto& id : ids) {
        const auto& spec = algo::lookup(id);
        for (std::size_t dim : dims) {
            const std::uint64_t seed = mix64(o.seed, mix64(hash_label(id), dim));
            const auto objective = tuner::algorithm_objective(
                id, tuner::training_instances(dim, mix64(seed, hash_label("training"))), o.budget_multiplier * dim, seed);
            tuner::TunerOptions topts;
            topts.budget_runs = o.tune_budget;
            topts.seed = seed;
            const auto result = tuner::tune(spec.space, objective, topts);
            const auto base = (fs::path(o.out) / fmt::format("{}_d{}", id, dim)).string();
            write_preset_file(base + ".preset", id, dim, result.best);
            std::ofstream log(base + "_tuning.json");
            tuner::write_audit_log(log, result);
            out << fmt::format("{} d{}: {} (score {:.6g}, {} runs)\n", id, dim, result.best.to_string(), result.best_score,
                               result.runs_used);
        }
    }
    return 0;
}

int cmd_stats(const Options& o, std::ostream& out)
{
    const auto records = exp::read_results_csv(o.input);
    if (records.empty()) throw ConfigError("no records");
    const auto text = exp::stats_report(records, o.alpha, aggregate_of(o), o.iman_davenport);
    out << text;
    if (!o.out.empty()) {
        fs::create_directories(o.out);
        std::ofstream(fs::path(o.out) / "stats.txt") << text;
        for (std::size_t dim : exp::record_dims(records)) {
            if (auto svg = exp::cd_plot_svg(records, dim, o.alpha, aggregate_of(o)); !svg.empty()) {
                std::ofstream(fs::path(o.out) / fmt::format("cd_d{}.svg", dim)) << svg;
            }
        }
    }
    return 0;
}

int cmd_bias_audit(const Options& o, std::ostream& out)
{
    exp::BiasAuditConfig c;
    c.dims = parse_index_list(o.dims, "--dims");
    c.algorithms = build_entries(o, c.dims, true);
    c.runs = o.runs;
    c.seed = o.seed;
    c.suite_seed = o.suite_seed;
    c.budget_multiplier = o.budget_multiplier;
    c.parallelism = o.parallelism;
    c.alpha = o.alpha;
    c.output_dir = o.out;
    const auto report = exp::bias_audit(c);
    out << report.verdict_lines();
    if (const auto table = report.rank_table(); !table.empty()) out << '\n' << table;
    return 0;
}

int cmd_report(const Options& o, std::ostream& out)
{
    const std::string dest = o.out.empty() ? (fs::path(o.input) / "report").string() : o.out;
    exp::ReportOptions ro;
    ro.alpha = o.alpha;
    ro.aggregate = aggregate_of(o);
    const auto files = exp::write_report(o.input, dest, ro);
    out << fmt::format("wrote {} files to {}\n", files.size(), dest);
    return 0;
}

struct App {
    CLI::App app{"mhlab: metaheuristic optimization laboratory", "mhlab"};
    Options o;
    std::map<std::string, CLI::App*> subs;
};

void add_selection(CLI::App* s, Options& o, bool toys)
{
    s->add_option("--algos", o.algos,
                  toys ? "Comma-separated algorithm ids (registry ids, origin-magnet, shift-invariant); default all registered"
                       : "Comma-separated algorithm ids; default all registered");
    s->add_option("--dims", o.dims, "Comma-separated dimensions")->capture_default_str();
    s->add_option("--runs", o.runs, "Runs per algorithm and problem")->capture_default_str();
    s->add_option("--seed", o.seed, "Base seed of the run streams")->capture_default_str();
    s->add_option("--suite-seed", o.suite_seed, "Seed of the benchmark suite")->capture_default_str();
    s->add_option("--budget-multiplier", o.budget_multiplier, "Evaluations per run = multiplier x dim")
        ->capture_default_str();
    s->add_option("--parallelism", o.parallelism, "Worker threads")->capture_default_str();
    s->add_option("--preset", o.preset, "Parameter source: default or tuned (shipped presets)")->capture_default_str();
    s->add_option("--param-file", o.param_files, "Tuned-preset file written by `tune` (repeatable)");
    s->add_option("--set", o.sets, "Parameter override algo.name=value (repeatable)");
    s->add_option("--alpha", o.alpha, "Significance level")->capture_default_str();
}

std::unique_ptr<App> make_app()
{
    auto a = std::make_unique<App>();
    auto& app = a->app;
    auto& o = a->o;
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML/INI file with option values; command-line flags win");

    a->subs["list"] = app.add_subcommand("list", "List algorithms, taxonomy tags, parameter spaces and defaults");

    auto* run = app.add_subcommand("run", "Run an experiment and write results.csv");
    add_selection(run, o, false);
    run->add_option("--funcs", o.funcs, "Problem indices, e.g. 1,3,5-8; default all 30");
    run->add_flag("--shifted,!--nonshifted", o.shifted, "Use the shifted (default) or nonshifted suite");
    run->add_option("--out", o.out, "Output directory")->envname("MHLAB_OUT")->capture_default_str();
    run->add_option("--trace-stride", o.trace_stride, "Record every n-th generation in traces")->capture_default_str();
    run->add_flag("--no-traces", o.no_traces, "Skip per-run JSONL traces");
    run->add_flag("--dry-run", o.dry_run, "Print the number of run descriptors and write nothing");
    a->subs["run"] = run;

    auto* tune = app.add_subcommand("tune", "Tune algorithm parameters by iterated racing");
    tune->add_option("--algos", o.algos, "Comma-separated algorithm ids; default all registered");
    tune->add_option("--dims", o.dims, "Comma-separated dimensions")->capture_default_str();
    tune->add_option("--seed", o.seed, "Tuning seed")->capture_default_str();
    tune->add_option("--budget", o.tune_budget, "Tuning budget in algorithm runs")->capture_default_str();
    tune->add_option("--budget-multiplier", o.budget_multiplier, "Evaluations per tuning run = multiplier x dim")
        ->capture_default_str();
    tune->add_option("--out", o.out, "Directory for <algo>_d<dim>.preset and tuning logs")
        ->envname("MHLAB_OUT")
        ->capture_default_str();
    a->subs["tune"] = tune;

    auto* stats = app.add_subcommand("stats", "Friedman, Wilcoxon and critical-difference reports from results.csv");
    stats->add_option("--input,input", o.input, "results.csv to analyse")->required();
    stats->add_option("--alpha", o.alpha, "Significance level")->capture_default_str();
    stats->add_flag("--median", o.median, "Rank on per-problem medians instead of means");
    stats->add_flag("--iman-davenport", o.iman_davenport, "Report the Iman-Davenport corrected Friedman p");
    stats->add_option("--out", o.out, "Also write stats.txt and CD plots here");
    a->subs["stats"] = stats;

    auto* bias = app.add_subcommand("bias-audit", "Shifted vs nonshifted audit of search bias toward the origin");
    add_selection(bias, o, true);
    bias->add_option("--out", o.out, "Keep both experiments below this directory");
    a->subs["bias-audit"] = bias;

    auto* report = app.add_subcommand("report", "Render summary, statistics and SVG plots for a results directory");
    report->add_option("--input,input", o.input, "Results directory holding results.csv")->required();
    report->add_option("--out", o.out, "Report directory (default <input>/report)");
    report->add_option("--alpha", o.alpha, "Significance level")->capture_default_str();
    report->add_flag("--median", o.median, "Rank on per-problem medians instead of means");
    a->subs["report"] = report;
    return a;
}

}  // namespace

std::vector<std::string> subcommands() { return {"list", "run", "tune", "stats", "bias-audit", "report"}; }

std::vector<std::string> flags(std::string_view subcommand)
{
    auto a = make_app();
    const auto it = a->subs.find(std::string(subcommand));
    if (it == a->subs.end()) throw ConfigError(fmt::format("unknown subcommand '{}'", subcommand));
    std::vector<std::string> out;
    for (const auto* opt : it->second->get_options()) {
        for (const auto& name : opt->get_lnames()) out.push_back("--" + name);
    }
    return out;
}

std::string help(std::string_view subcommand)
{
    auto a = make_app();
    const auto it = a->subs.find(std::string(subcommand));
    if (it == a->subs.end()) throw ConfigError(fmt::format("unknown subcommand '{}'", subcommand));
    return it->second->help();
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    auto a = make_app();
    try {
        a->app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return a->app.exit(e, out, err);
    }
    // --out defaults to "results" for run and tune only.
    auto& o = a->o;
    auto used = [&](const char* name) { return a->subs[name]->parsed(); };
    try {
        if (used("list")) return cmd_list(out);
        if (used("run")) return cmd_run(o, out, err);
        if (used("tune")) return cmd_tune(o, out);
        if (used("stats")) {
            if (a->subs["stats"]->count("--out") == 0) o.out.clear();
            return cmd_stats(o, out);
        }
        if (used("bias-audit")) {
            if (a->subs["bias-audit"]->count("--out") == 0) o.out.clear();
            return cmd_bias_audit(o, out);
        }
        if (used("report")) {
            if (a->subs["report"]->count("--out") == 0) o.out.clear();
            return cmd_report(o, out);
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const NotImplemented& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const InsufficientData& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace mhlab::cli
