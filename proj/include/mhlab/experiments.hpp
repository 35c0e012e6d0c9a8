#ifndef MHLAB_EXPERIMENTS_HPP
#define MHLAB_EXPERIMENTS_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mhlab/algorithms.hpp"
#include "mhlab/benchmarks.hpp"
#include "mhlab/metrics.hpp"
#include "mhlab/params.hpp"
#include "mhlab/stats.hpp"

namespace mhlab::exp {

/// One algorithm column of an experiment. Registered ids resolve their
/// parameters per dimension (tuned preset when requested and shipped,
/// defaults otherwise, then `overrides`). A `factory` replaces the registry
/// for reference optimizers such as the bias-audit toys.
struct AlgorithmEntry {
    std::string id;
    ParamSet overrides;
    bool tuned = false;
    algo::OptimizerOptions options;
    std::function<std::unique_ptr<algo::PopulationOptimizer>()> factory;

    static AlgorithmEntry registered(std::string id, ParamSet overrides = {}, bool tuned = false);
    static AlgorithmEntry custom(std::string id, std::function<std::unique_ptr<algo::PopulationOptimizer>()> factory);

    /// Full parameter set used at `dim`; empty for custom entries.
    ParamSet resolve(std::size_t dim) const;
    std::unique_ptr<algo::PopulationOptimizer> build(std::size_t dim) const;
};

struct ExperimentPlan {
    std::vector<AlgorithmEntry> algorithms;
    std::vector<std::size_t> dims{10};
    /// 1-based problem indices; empty means the whole suite.
    std::vector<std::size_t> functions;
    bench::SuiteCounts counts;
    bool shifted = true;
    std::size_t runs = 31;
    std::uint64_t seed = 0;
    std::uint64_t suite_seed = 0;
    std::uint64_t budget_multiplier = Budget::kDefaultMultiplier;
    std::uint64_t trace_stride = 10;
    bool write_traces = true;
    /// Empty keeps the store in memory and writes nothing.
    std::string output_dir;

    /// ConfigError for zero runs, empty algorithm or dim lists, unknown ids,
    /// duplicate algorithm ids or function indices outside the suite.
    void validate() const;
    std::vector<std::size_t> function_indices() const;
    /// Structured text of everything that determines the results (the
    /// output directory is deliberately left out).
    std::string manifest() const;
};

struct RunDescriptor {
    std::string id;
    std::size_t algo_slot = 0;
    std::string algo;
    std::size_t func_index = 0;
    std::size_t dim = 0;
    std::size_t run = 0;
    std::uint64_t seed = 0;
};

/// "algo/d<dim>/f<index>/r<run>".
std::string run_id(std::string_view algo, std::size_t dim, std::size_t func_index, std::size_t run);

/// mix64 chain over (base, hash_label(algo), func_index, dim, run).
std::uint64_t run_seed(std::uint64_t base, std::string_view algo, std::size_t func_index, std::size_t dim,
                       std::size_t run);

/// Algorithms x dims x functions x runs, in that nesting order.
std::vector<RunDescriptor> plan_matrix(const ExperimentPlan& plan);

struct RunRecord {
    std::string algo;
    std::size_t func_index = 0;
    std::size_t dim = 0;
    std::size_t run = 0;
    std::uint64_t seed = 0;
    /// Error with values below 1e-8 reported as 0.
    double final_error = 0.0;
    /// best fitness - f* as measured.
    double raw_error = 0.0;
    std::uint64_t evals = 0;
    double wall_ms = 0.0;
    /// Relative to the output directory; empty when traces are off.
    std::string trace_path;

    std::string id() const { return run_id(algo, dim, func_index, run); }
    /// Equal apart from wall time.
    bool same_result(const RunRecord& other) const;
};

/// Append-only run journal. With a directory it lives in <dir>/store.csv:
/// every completed run is appended and flushed, and reopening the store
/// reloads them so interrupted experiments resume. A torn final line from
/// a crash is ignored.
class ResultStore {
public:
    ResultStore() = default;
    explicit ResultStore(std::string dir);

    bool contains(std::string_view id) const;
    /// ConfigError on a duplicate id.
    void append(const RunRecord& record);
    const std::vector<RunRecord>& records() const noexcept { return records_; }
    bool empty() const noexcept { return records_.empty(); }
    const std::string& dir() const noexcept { return dir_; }

private:
    std::string dir_;
    std::vector<RunRecord> records_;
    std::vector<std::string> ids_;  // sorted
};

struct ExecuteOptions {
    std::size_t parallelism = 1;
    /// Stop after this many newly completed runs (simulates an interrupted
    /// experiment).
    std::size_t stop_after = std::numeric_limits<std::size_t>::max();
    std::function<void(std::size_t done, std::size_t total)> progress;
};

/// Run every descriptor not yet in the store. With an output directory the
/// suite and plan manifests, run traces (traces/<algo>/d<dim>_f<index>_r<run>.jsonl)
/// and the journal are written there. The first failing run stops the
/// workers and its exception is rethrown; completed runs stay journalled.
ResultStore execute(const ExperimentPlan& plan, const ExecuteOptions& options = {});

/// One seeded run of `entry` on `problem`.
RunRecord execute_run(const RunDescriptor& descriptor, const AlgorithmEntry& entry, const bench::BenchmarkProblem& problem,
                      std::uint64_t budget_multiplier, metrics::Recorder& recorder, metrics::RunTrace* trace_out = nullptr);

/// Suites used by a plan, one per dimension.
bench::Suite plan_suite(const ExperimentPlan& plan, std::size_t dim);

// ---------------------------------------------------------------------------
// Export and import

/// Header comment lines for results.csv.
struct Provenance {
    std::uint64_t suite_manifest_hash = 0;
    std::uint64_t plan_manifest_hash = 0;
};

Provenance provenance(const ExperimentPlan& plan);

/// Rows sorted by (algo, dim, func_index, run). Columns: algo, func_index,
/// dim, run, seed, final_error, evals, wall_ms, trace_path.
void write_results_csv(std::ostream& out, std::vector<RunRecord> records, const std::optional<Provenance>& prov = {});
/// Lines starting with '#' are comments. ConfigError names the 1-based
/// line number of a malformed row.
std::vector<RunRecord> read_results_csv(std::istream& in);
std::vector<RunRecord> read_results_csv(const std::string& path);

struct SummaryRow {
    std::string algo;
    std::size_t func_index = 0;
    std::size_t dim = 0;
    metrics::Summary errors;
};

/// Per (algo, dim, function) summary of final errors, in sorted key order.
std::vector<SummaryRow> summarize_records(const std::vector<RunRecord>& records);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

enum class Aggregate { mean, median };

/// Problems are the functions of `dim` (ascending), algorithms keep the
/// given order (or first-appearance order when empty). Cells aggregate the
/// final errors over runs. ConfigError when a cell has no runs.
stats::ResultMatrix result_matrix(const std::vector<RunRecord>& records, std::size_t dim,
                                  Aggregate aggregate = Aggregate::mean, std::vector<std::string> algorithms = {});

/// Dims present in the records, ascending.
std::vector<std::size_t> record_dims(const std::vector<RunRecord>& records);

/// Writes results.csv and summary.csv into the plan's output directory.
void export_results(const ExperimentPlan& plan, const ResultStore& store);

// ---------------------------------------------------------------------------
// Statistics and report

/// "Friedman" block per dim plus pairwise Wilcoxon against the best-ranked
/// algorithm, as structured text.
std::string stats_report(const std::vector<RunRecord>& records, double alpha = 0.05,
                         Aggregate aggregate = Aggregate::mean, bool iman_davenport = false);

/// CD-plot SVG of the algorithms at `dim`, or empty when the matrix is too
/// small to rank (fewer than three algorithms or two problems).
std::string cd_plot_svg(const std::vector<RunRecord>& records, std::size_t dim, double alpha = 0.05,
                        Aggregate aggregate = Aggregate::mean);

struct ReportOptions {
    double alpha = 0.05;
    Aggregate aggregate = Aggregate::mean;
    /// Points per curve after resampling traces onto a common grid.
    std::size_t curve_points = 60;
};

/// Reads <results_dir>/results.csv (and the traces it names) and writes
/// <out_dir>: summary.csv, stats.txt, cd_d<dim>.svg, and per (dim, function)
/// convergence/diversity SVGs plus curve data CSV, and per (dim, function,
/// algo) an XPL/XPT area chart. Returns the written file names.
/// ConfigError "no records" for an empty results file.
std::vector<std::string> write_report(const std::string& results_dir, const std::string& out_dir,
                                      const ReportOptions& options = {});

// ---------------------------------------------------------------------------
// Bias audit

struct BiasAuditConfig {
    std::vector<AlgorithmEntry> algorithms;
    std::vector<std::size_t> dims{10};
    bench::SuiteCounts counts;
    std::size_t runs = 31;
    std::uint64_t seed = 0;
    std::uint64_t suite_seed = 0;
    std::uint64_t budget_multiplier = Budget::kDefaultMultiplier;
    std::size_t parallelism = 1;
    double alpha = 0.05;
    /// Empty runs in memory; otherwise nonshifted/ and shifted/ experiment
    /// directories are written below it.
    std::string output_dir;
};

struct BiasVerdict {
    std::string algo;
    std::size_t dim = 0;
    double r_plus = 0.0;   ///< ranks where the shifted error is larger
    double r_minus = 0.0;
    double p_value = 1.0;
    std::size_t n = 0;     ///< nonzero paired differences
    bool biased = false;
    bool insufficient = false;  ///< fewer than 5 nonzero differences
    std::vector<double> nonshifted;  ///< per-function mean errors
    std::vector<double> shifted;

    /// "<algo>: R+=..., R-=..., p=..., biased=yes/no".
    std::string line() const;
};

struct RankColumn {
    std::size_t dim = 0;
    bool shifted = false;
    std::vector<double> average_ranks;  ///< aligned with the audit's algorithms
    std::vector<std::size_t> positions;
    double cd = 0.0;
    std::vector<std::vector<std::size_t>> groups;  ///< indices into the algorithms
};

struct BiasAuditReport {
    std::vector<std::string> algorithms;
    std::vector<BiasVerdict> verdicts;
    /// Empty when fewer than three algorithms were audited.
    std::vector<RankColumn> columns;

    std::string verdict_lines() const;
    /// One row per algorithm, one "rank (position)" column per condition.
    std::string rank_table() const;
};

/// Verdict from paired per-function means: Wilcoxon(shifted, nonshifted),
/// biased iff p <= alpha and R+ > R-.
BiasVerdict bias_verdict(std::string algo, std::size_t dim, std::vector<double> nonshifted,
                         std::vector<double> shifted, double alpha = 0.05);

/// Runs both conditions for every dim. Nonshifted runs use `seed` and
/// shifted runs an independent stream derived from it.
BiasAuditReport bias_audit(const BiasAuditConfig& config);

/// Audit on caller-supplied suites for one dimension. ConfigError unless
/// the suites are paired.
BiasAuditReport bias_audit(const BiasAuditConfig& config, std::size_t dim, const bench::Suite& nonshifted,
                           const bench::Suite& shifted);

}  // namespace mhlab::exp

#endif
