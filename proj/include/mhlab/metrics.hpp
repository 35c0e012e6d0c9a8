#ifndef MHLAB_METRICS_HPP
#define MHLAB_METRICS_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mhlab/space.hpp"

namespace mhlab::metrics {

/// Median of a sample; even sizes average the two central order statistics.
double median(std::vector<double> values);

/// Population diversity: per-dimension mean absolute deviation from the
/// dimension median, averaged over dimensions.
double diversity(const Population& pop);
double diversity(std::span<const std::vector<double>> positions);

struct TradeOff {
    double xpl = 0.0;  ///< exploration percentage
    double xpt = 0.0;  ///< exploitation percentage
};

/// XPL% = 100 div/div_max, XPT% = 100 |div - div_max| / div_max.
/// A run whose diversity never left zero counts as fully exploitative.
TradeOff xpl_xpt(double div_t, double div_max);

struct TraceRow {
    std::uint64_t gen = 0;
    std::uint64_t evals = 0;
    double best = 0.0;
    double div = 0.0;
    double xpl = 0.0;
    double xpt = 0.0;
};

struct RunTrace {
    std::vector<TraceRow> rows;
    std::vector<double> best_position;
    double best_fitness = 0.0;
    std::uint64_t used_evals = 0;
    std::uint64_t generations = 0;
    double wall_ms = 0.0;
};

/// Per-run instrumentation. One recorder per run; `stride` keeps every
/// stride-th generation (generation 0 and the final generation are always
/// kept). The running diversity maximum is updated on every generation,
/// recorded or not.
class Recorder {
public:
    explicit Recorder(std::uint64_t stride = 1) : stride_(stride == 0 ? 1 : stride) {}

    void record(std::uint64_t gen, std::uint64_t evals, double best, const Population& pop);
    /// Make sure the last observed generation is in the trace.
    void flush_last();

    const std::vector<TraceRow>& rows() const noexcept { return rows_; }
    double div_max() const noexcept { return div_max_; }

private:
    std::uint64_t stride_;
    double div_max_ = 0.0;
    std::vector<TraceRow> rows_;
    TraceRow last_{};
    bool last_kept_ = true;
};

/// Aggregate of final errors (fitness - f*) over a set of runs.
struct Summary {
    std::size_t runs = 0;
    double mean = 0.0;
    double stdev = 0.0;  ///< sample standard deviation (n-1); 0 for one run
    double best = 0.0;
    double worst = 0.0;
    double median = 0.0;
    double mean_xpl = 0.0;
    double mean_xpt = 0.0;
};

Summary summarize(std::span<const double> final_errors);
/// Final errors from traces given the problem optimum, plus the mean
/// XPL/XPT over recorded generations averaged across runs.
Summary summarize(std::span<const RunTrace> traces, double optimum);

/// Errors below `floor` are reported as 0 (common zero-threshold practice).
double floor_error(double error, double floor = 1e-8);

/// JSON Lines: one {gen, evals, best, div, xpl, xpt} object per row.
void write_trace_jsonl(std::ostream& out, const RunTrace& trace);
std::vector<TraceRow> read_trace_jsonl(std::istream& in);

}  // namespace mhlab::metrics

#endif
