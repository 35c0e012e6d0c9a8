#include "mhlab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "mhlab/errors.hpp"
#include "mhlab/loop.hpp"
#include "mhlab/rng.hpp"
#include "experiments_detail.hpp"

namespace fs = std::filesystem;

namespace mhlab::exp {

// ---------------------------------------------------------------------------
// Algorithm entries and plans

AlgorithmEntry AlgorithmEntry::registered(std::string id, ParamSet overrides, bool tuned)
{
    AlgorithmEntry e;
    e.id = std::move(id);
    e.overrides = std::move(overrides);
    e.tuned = tuned;
    return e;
}

AlgorithmEntry AlgorithmEntry::custom(std::string id,
                                      std::function<std::unique_ptr<algo::PopulationOptimizer>()> factory)
{
    AlgorithmEntry e;
    e.id = std::move(id);
    e.factory = std::move(factory);
    return e;
}

ParamSet AlgorithmEntry::resolve(std::size_t dim) const
{
    if (factory) return {};
    const auto& spec = algo::lookup(id);
    ParamSet merged;
    if (tuned) {
        if (const ParamSet* preset = spec.preset(dim)) merged = *preset;
    }
    for (const auto& [name, value] : overrides.values()) merged.set(name, value);
    return spec.space.complete(merged);
}

std::unique_ptr<algo::PopulationOptimizer> AlgorithmEntry::build(std::size_t dim) const
{
    if (factory) return factory();
    return algo::make_optimizer(id, resolve(dim), options);
}

void ExperimentPlan::validate() const
{
    if (runs == 0) throw ConfigError("plan: runs must be at least 1");
    if (algorithms.empty()) throw ConfigError("plan: no algorithms");
    if (dims.empty()) throw ConfigError("plan: no dimensions");
    if (budget_multiplier == 0) throw ConfigError("plan: budget multiplier must be positive");
    if (counts.total() == 0) throw ConfigError("plan: empty suite");
    std::set<std::string> seen;
    for (const auto& a : algorithms) {
        if (a.id.empty() || a.id.find_first_of(",/\n\r\"") != std::string::npos) {
            throw ConfigError(fmt::format("plan: invalid algorithm id '{}'", a.id));
        }
        if (!seen.insert(a.id).second) throw ConfigError(fmt::format("plan: duplicate algorithm '{}'", a.id));
        if (!a.factory) {
            for (std::size_t d : dims) a.resolve(d);
        }
    }
    for (std::size_t d : dims) {
        if (d == 0) throw ConfigError("plan: dimension must be positive");
    }
    if (std::set<std::size_t>(dims.begin(), dims.end()).size() != dims.size()) {
        throw ConfigError("plan: duplicate dimension");
    }
    std::set<std::size_t> funcs;
    for (std::size_t f : functions) {
        if (f < 1 || f > counts.total()) {
            throw ConfigError(fmt::format("plan: unknown function index {} (suite has 1..{})", f, counts.total()));
        }
        if (!funcs.insert(f).second) throw ConfigError(fmt::format("plan: duplicate function index {}", f));
    }
}

std::vector<std::size_t> ExperimentPlan::function_indices() const
{
    if (!functions.empty()) {
        auto out = functions;
        std::sort(out.begin(), out.end());
        return out;
    }
    std::vector<std::size_t> out(counts.total());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = i + 1;
    return out;
}

namespace {

template <class Range>
std::string join(const Range& values)
{
    std::string out;
    for (const auto& v : values) {
        if (!out.empty()) out += ',';
        out += fmt::format("{}", v);
    }
    return out;
}

}  // namespace

std::string ExperimentPlan::manifest() const
{
    std::string out = "mhlab-plan 1\n";
    out += fmt::format("dims={}\n", join(dims));
    out += fmt::format("functions={}\n", join(function_indices()));
    out += fmt::format("counts={},{},{},{}\n", counts.unimodal, counts.multimodal, counts.hybrid, counts.composition);
    out += fmt::format("shifted={}\n", shifted ? 1 : 0);
    out += fmt::format("runs={}\nseed={}\nsuite_seed={}\n", runs, seed, suite_seed);
    out += fmt::format("budget_multiplier={}\ntrace_stride={}\ntraces={}\n", budget_multiplier, trace_stride,
                       write_traces ? 1 : 0);
    for (const auto& a : algorithms) {
        if (a.factory) {
            out += fmt::format("algorithm {} custom\n", a.id);
            continue;
        }
        for (std::size_t d : dims) {
            out += fmt::format("algorithm {} d{} repair={} gsk_symmetric_senior={} params={}\n", a.id, d,
                               to_string(a.options.repair), a.options.gsk_symmetric_senior ? 1 : 0,
                               a.resolve(d).to_string());
        }
    }
    return out;
}

std::string run_id(std::string_view algo, std::size_t dim, std::size_t func_index, std::size_t run)
{
    return fmt::format("{}/d{}/f{}/r{}", algo, dim, func_index, run);
}

std::uint64_t run_seed(std::uint64_t base, std::string_view algo, std::size_t func_index, std::size_t dim,
                       std::size_t run)
{
    std::uint64_t s = mix64(base, hash_label(algo));
    s = mix64(s, func_index);
    s = mix64(s, dim);
    return mix64(s, run);
}

std::vector<RunDescriptor> plan_matrix(const ExperimentPlan& plan)
{
    plan.validate();
    const auto funcs = plan.function_indices();
    std::vector<RunDescriptor> out;
    out.reserve(plan.algorithms.size() * plan.dims.size() * funcs.size() * plan.runs);
    for (std::size_t a = 0; a < plan.algorithms.size(); ++a) {
        const auto& id = plan.algorithms[a].id;
        for (std::size_t d : plan.dims) {
            for (std::size_t f : funcs) {
                for (std::size_t r = 0; r < plan.runs; ++r) {
                    out.push_back(RunDescriptor{run_id(id, d, f, r), a, id, f, d, r, run_seed(plan.seed, id, f, d, r)});
                }
            }
        }
    }
    return out;
}

bool RunRecord::same_result(const RunRecord& o) const
{
    return algo == o.algo && func_index == o.func_index && dim == o.dim && run == o.run && seed == o.seed &&
           final_error == o.final_error && raw_error == o.raw_error && evals == o.evals && trace_path == o.trace_path;
}

// ---------------------------------------------------------------------------
// CSV plumbing

namespace detail {

std::vector<std::string_view> split_csv(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

template <class T>
T parse_number(std::string_view text, std::string_view column, std::size_t line_no)
{
    T value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || text.empty()) {
        throw ConfigError(fmt::format("row {}: bad {} '{}'", line_no, column, text));
    }
    return value;
}

double parse_real(std::string_view text, std::string_view column, std::size_t line_no)
{
    if (text == "inf") return std::numeric_limits<double>::infinity();
    if (text == "nan") throw ConfigError(fmt::format("row {}: {} is nan", line_no, column));
    return parse_number<double>(text, column, line_no);
}

std::size_t parse_size(std::string_view text, std::string_view column, std::size_t line_no)
{
    return parse_number<std::size_t>(text, column, line_no);
}

std::uint64_t parse_u64(std::string_view text, std::string_view column, std::size_t line_no)
{
    return parse_number<std::uint64_t>(text, column, line_no);
}

}  // namespace detail

namespace {

using detail::parse_real;
using detail::parse_size;
using detail::parse_u64;
using detail::split_csv;

constexpr std::string_view kResultsHeader = "algo,func_index,dim,run,seed,final_error,evals,wall_ms,trace_path";
constexpr std::string_view kJournalHeader =
    "id,algo,func_index,dim,run,seed,final_error,raw_error,evals,wall_ms,trace_path";

std::string journal_line(const RunRecord& r)
{
    return fmt::format("{},{},{},{},{},{},{},{},{},{:.3f},{}\n", r.id(), r.algo, r.func_index, r.dim, r.run, r.seed,
                       r.final_error, r.raw_error, r.evals, r.wall_ms, r.trace_path);
}

RunRecord parse_journal_line(std::string_view line, std::size_t line_no)
{
    const auto f = split_csv(line);
    if (f.size() != 11) {
        throw ConfigError(fmt::format("row {}: expected 11 fields, found {}", line_no, f.size()));
    }
    RunRecord r;
    r.algo = std::string(f[1]);
    r.func_index = parse_size(f[2], "func_index", line_no);
    r.dim = parse_size(f[3], "dim", line_no);
    r.run = parse_size(f[4], "run", line_no);
    r.seed = parse_u64(f[5], "seed", line_no);
    r.final_error = parse_real(f[6], "final_error", line_no);
    r.raw_error = parse_real(f[7], "raw_error", line_no);
    r.evals = parse_u64(f[8], "evals", line_no);
    r.wall_ms = parse_real(f[9], "wall_ms", line_no);
    r.trace_path = std::string(f[10]);
    if (r.id() != f[0]) throw ConfigError(fmt::format("row {}: id '{}' does not match its fields", line_no, f[0]));
    return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Store

ResultStore::ResultStore(std::string dir) : dir_(std::move(dir))
{
    if (dir_.empty()) return;
    fs::create_directories(dir_);
    const fs::path path = fs::path(dir_) / "store.csv";
    if (!fs::exists(path)) return;

    std::ifstream in(path, std::ios::binary);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();
    // A crash can leave a torn last line; drop it so later appends start
    // on a fresh line.
    const auto last_newline = content.rfind('\n');
    const std::size_t keep = last_newline == std::string::npos ? 0 : last_newline + 1;
    if (keep != content.size()) {
        content.resize(keep);
        fs::resize_file(path, keep);
    }

    std::istringstream lines(content);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        if (line_no == 1 && line == kJournalHeader) continue;
        if (line.empty()) continue;
        auto record = parse_journal_line(line, line_no);
        if (contains(record.id())) throw ConfigError(fmt::format("row {}: duplicate run '{}'", line_no, record.id()));
        ids_.insert(std::upper_bound(ids_.begin(), ids_.end(), record.id()), record.id());
        records_.push_back(std::move(record));
    }
}

bool ResultStore::contains(std::string_view id) const
{
    return std::binary_search(ids_.begin(), ids_.end(), id, std::less<>{});
}

void ResultStore::append(const RunRecord& record)
{
    const auto id = record.id();
    if (contains(id)) throw ConfigError(fmt::format("store already holds run '{}'", id));
    if (!dir_.empty()) {
        const fs::path path = fs::path(dir_) / "store.csv";
        const bool fresh = !fs::exists(path) || fs::file_size(path) == 0;
        std::ofstream out(path, std::ios::app | std::ios::binary);
        if (fresh) out << kJournalHeader << '\n';
        out << journal_line(record);
        out.flush();
        if (!out) throw std::runtime_error(fmt::format("cannot append to {}", path.string()));
    }
    ids_.insert(std::upper_bound(ids_.begin(), ids_.end(), id), id);
    records_.push_back(record);
}

// ---------------------------------------------------------------------------
// Execution

bench::Suite plan_suite(const ExperimentPlan& plan, std::size_t dim)
{
    return bench::make_suite(dim, plan.counts, plan.shifted, plan.suite_seed);
}

RunRecord execute_run(const RunDescriptor& d, const AlgorithmEntry& entry, const bench::BenchmarkProblem& problem,
                      std::uint64_t budget_multiplier, metrics::Recorder& recorder, metrics::RunTrace* trace_out)
{
    auto optimizer = entry.build(d.dim);
    Budget budget = Budget::for_dim(d.dim, budget_multiplier);
    auto trace = run_population_loop(*optimizer, problem, budget, RngStream(d.seed), recorder);

    RunRecord r;
    r.algo = d.algo;
    r.func_index = d.func_index;
    r.dim = d.dim;
    r.run = d.run;
    r.seed = d.seed;
    r.raw_error = trace.best_fitness - problem.optimum();
    r.final_error = metrics::floor_error(r.raw_error);
    r.evals = trace.used_evals;
    r.wall_ms = trace.wall_ms;
    if (trace_out) {
        // Traces carry the best-so-far error rather than raw fitness.
        for (auto& row : trace.rows) row.best -= problem.optimum();
        *trace_out = std::move(trace);
    }
    return r;
}

namespace detail {

ResultStore execute_on(const ExperimentPlan& plan, const std::map<std::size_t, bench::Suite>& suites,
                       const ExecuteOptions& options)
{
    const auto descriptors = plan_matrix(plan);
    if (options.parallelism == 0) throw ConfigError("parallelism must be at least 1");

    const bool on_disk = !plan.output_dir.empty();
    if (on_disk) {
        fs::create_directories(plan.output_dir);
        const auto manifest = plan.manifest();
        const fs::path plan_path = fs::path(plan.output_dir) / "plan_manifest.txt";
        if (fs::exists(plan_path)) {
            std::ifstream in(plan_path, std::ios::binary);
            const std::string existing((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
            if (existing != manifest) {
                throw ConfigError(fmt::format("{} holds results of a different plan", plan.output_dir));
            }
        } else {
            std::ofstream(plan_path, std::ios::binary) << manifest;
        }
        std::ofstream suite_out(fs::path(plan.output_dir) / "suite_manifest.txt", std::ios::binary);
        for (std::size_t d : plan.dims) bench::write_manifest(suite_out, suites.at(d));
    }

    ResultStore store(plan.output_dir);
    std::vector<const RunDescriptor*> pending;
    for (const auto& d : descriptors) {
        if (!store.contains(d.id)) pending.push_back(&d);
    }
    const std::size_t total = descriptors.size();
    const std::size_t limit = std::min(pending.size(), options.stop_after);

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex mutex;

    auto worker = [&] {
        while (!failed.load()) {
            const std::size_t k = next.fetch_add(1);
            if (k >= limit) return;
            const auto& d = *pending[k];
            try {
                const auto& problem = *suites.at(d.dim).at(d.func_index - 1);
                metrics::Recorder recorder(plan.trace_stride);
                metrics::RunTrace trace;
                auto record = execute_run(d, plan.algorithms[d.algo_slot], problem, plan.budget_multiplier, recorder,
                                          plan.write_traces ? &trace : nullptr);
                if (on_disk && plan.write_traces) {
                    record.trace_path =
                        fmt::format("traces/{}/d{}_f{}_r{}.jsonl", d.algo, d.dim, d.func_index, d.run);
                    const fs::path full = fs::path(plan.output_dir) / record.trace_path;
                    fs::create_directories(full.parent_path());
                    std::ofstream out(full, std::ios::binary);
                    metrics::write_trace_jsonl(out, trace);
                    if (!out) throw std::runtime_error(fmt::format("cannot write {}", full.string()));
                }
                std::lock_guard lock(mutex);
                store.append(record);
                if (options.progress) options.progress(store.records().size(), total);
            } catch (...) {
                std::lock_guard lock(mutex);
                if (!error) error = std::current_exception();
                failed = true;
            }
        }
    };

    const std::size_t threads = std::min(options.parallelism, std::max<std::size_t>(limit, 1));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);
    return store;
}

}  // namespace detail

ResultStore execute(const ExperimentPlan& plan, const ExecuteOptions& options)
{
    plan.validate();
    std::map<std::size_t, bench::Suite> suites;
    for (std::size_t d : plan.dims) suites.emplace(d, plan_suite(plan, d));
    return detail::execute_on(plan, suites, options);
}

// ---------------------------------------------------------------------------
// Export and import

Provenance provenance(const ExperimentPlan& plan)
{
    std::string suites;
    for (std::size_t d : plan.dims) suites += bench::manifest_string(plan_suite(plan, d));
    return Provenance{hash_label(suites), hash_label(plan.manifest())};
}

namespace {

bool record_less(const RunRecord& a, const RunRecord& b)
{
    return std::tie(a.algo, a.dim, a.func_index, a.run) < std::tie(b.algo, b.dim, b.func_index, b.run);
}

}  // namespace

void write_results_csv(std::ostream& out, std::vector<RunRecord> records, const std::optional<Provenance>& prov)
{
    std::sort(records.begin(), records.end(), record_less);
    if (prov) {
        out << fmt::format("# suite-manifest fnv1a64={:016x}\n", prov->suite_manifest_hash);
        out << fmt::format("# plan-manifest fnv1a64={:016x}\n", prov->plan_manifest_hash);
    }
    out << kResultsHeader << '\n';
    for (const auto& r : records) {
        out << fmt::format("{},{},{},{},{},{},{},{:.3f},{}\n", r.algo, r.func_index, r.dim, r.run, r.seed,
                           r.final_error, r.evals, r.wall_ms, r.trace_path);
    }
}

std::vector<RunRecord> read_results_csv(std::istream& in)
{
    std::vector<RunRecord> out;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            if (line != kResultsHeader) {
                throw ConfigError(fmt::format("row {}: expected header '{}'", line_no, kResultsHeader));
            }
            header_seen = true;
            continue;
        }
        const auto f = split_csv(line);
        if (f.size() != 9) throw ConfigError(fmt::format("row {}: expected 9 fields, found {}", line_no, f.size()));
        RunRecord r;
        r.algo = std::string(f[0]);
        if (r.algo.empty()) throw ConfigError(fmt::format("row {}: empty algo", line_no));
        r.func_index = parse_size(f[1], "func_index", line_no);
        r.dim = parse_size(f[2], "dim", line_no);
        r.run = parse_size(f[3], "run", line_no);
        r.seed = parse_u64(f[4], "seed", line_no);
        r.final_error = parse_real(f[5], "final_error", line_no);
        r.raw_error = r.final_error;
        r.evals = parse_u64(f[6], "evals", line_no);
        r.wall_ms = parse_real(f[7], "wall_ms", line_no);
        r.trace_path = std::string(f[8]);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<RunRecord> read_results_csv(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(fmt::format("cannot open {}", path));
    return read_results_csv(in);
}

std::vector<SummaryRow> summarize_records(const std::vector<RunRecord>& records)
{
    // Keyed by run so sums do not depend on the order runs finished in.
    std::map<std::tuple<std::string, std::size_t, std::size_t>, std::map<std::size_t, double>> cells;
    for (const auto& r : records) cells[{r.algo, r.dim, r.func_index}][r.run] = r.final_error;
    std::vector<SummaryRow> out;
    for (const auto& [key, by_run] : cells) {
        std::vector<double> errors;
        for (const auto& [run, e] : by_run) errors.push_back(e);
        out.push_back(SummaryRow{std::get<0>(key), std::get<2>(key), std::get<1>(key), metrics::summarize(errors)});
    }
    return out;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows)
{
    out << "algo,func_index,dim,runs,mean,std,best,worst,median\n";
    for (const auto& r : rows) {
        const auto& s = r.errors;
        out << fmt::format("{},{},{},{},{},{},{},{},{}\n", r.algo, r.func_index, r.dim, s.runs, s.mean, s.stdev,
                           s.best, s.worst, s.median);
    }
}

stats::ResultMatrix result_matrix(const std::vector<RunRecord>& records, std::size_t dim, Aggregate aggregate,
                                  std::vector<std::string> algorithms)
{
    if (algorithms.empty()) {
        for (const auto& r : records) {
            if (r.dim == dim && std::find(algorithms.begin(), algorithms.end(), r.algo) == algorithms.end()) {
                algorithms.push_back(r.algo);
            }
        }
    }
    std::set<std::size_t> funcs;
    std::map<std::pair<std::size_t, std::string>, std::map<std::size_t, double>> cells;
    for (const auto& r : records) {
        if (r.dim != dim) continue;
        if (std::find(algorithms.begin(), algorithms.end(), r.algo) == algorithms.end()) continue;
        funcs.insert(r.func_index);
        cells[{r.func_index, r.algo}][r.run] = r.final_error;
    }
    stats::ResultMatrix m;
    m.algorithms = algorithms;
    for (std::size_t f : funcs) {
        m.problems.push_back(fmt::format("f{}", f));
        std::vector<double> row;
        for (const auto& a : algorithms) {
            const auto it = cells.find({f, a});
            if (it == cells.end()) throw ConfigError(fmt::format("no runs of {} on f{} at dim {}", a, f, dim));
            std::vector<double> errors;
            for (const auto& [run, e] : it->second) errors.push_back(e);
            const auto s = metrics::summarize(errors);
            row.push_back(aggregate == Aggregate::mean ? s.mean : s.median);
        }
        m.cells.push_back(std::move(row));
    }
    return m;
}

std::vector<std::size_t> record_dims(const std::vector<RunRecord>& records)
{
    std::set<std::size_t> dims;
    for (const auto& r : records) dims.insert(r.dim);
    return {dims.begin(), dims.end()};
}

void export_results(const ExperimentPlan& plan, const ResultStore& store)
{
    if (plan.output_dir.empty()) throw ConfigError("export needs an output directory");
    const fs::path dir(plan.output_dir);
    fs::create_directories(dir);
    {
        std::ofstream out(dir / "results.csv", std::ios::binary);
        write_results_csv(out, store.records(), provenance(plan));
        if (!out) throw std::runtime_error("cannot write results.csv");
    }
    std::ofstream out(dir / "summary.csv", std::ios::binary);
    write_summary_csv(out, summarize_records(store.records()));
    if (!out) throw std::runtime_error("cannot write summary.csv");
}

}  // namespace mhlab::exp
