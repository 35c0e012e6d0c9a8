#include "mhlab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>

#include <json.hpp>

#include "mhlab/errors.hpp"

namespace mhlab::metrics {

double median(std::vector<double> values)
{
    if (values.empty()) {
        throw ContractError("median of an empty sample");
    }
    const std::size_t n = values.size();
    const std::size_t mid = n / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    const double upper = values[mid];
    if (n % 2 == 1) {
        return upper;
    }
    const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

double diversity(std::span<const std::vector<double>> positions)
{
    if (positions.empty()) {
        throw ContractError("diversity of an empty population");
    }
    const std::size_t n = positions.size();
    const std::size_t m = positions.front().size();
    std::vector<double> column(n);
    double total = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            column[i] = positions[i][j];
        }
        const double med = median(column);
        double dev = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            dev += std::abs(med - positions[i][j]);
        }
        total += dev / static_cast<double>(n);
    }
    return m == 0 ? 0.0 : total / static_cast<double>(m);
}

double diversity(const Population& pop)
{
    std::vector<std::vector<double>> positions;
    positions.reserve(pop.size());
    for (const auto& ind : pop.members) {
        positions.push_back(ind.position);
    }
    return diversity(positions);
}

TradeOff xpl_xpt(double div_t, double div_max)
{
    if (div_max <= 0.0) {
        return {0.0, 100.0};
    }
    return {100.0 * div_t / div_max, 100.0 * std::abs(div_t - div_max) / div_max};
}

void Recorder::record(std::uint64_t gen, std::uint64_t evals, double best, const Population& pop)
{
    const double div = diversity(pop);
    div_max_ = std::max(div_max_, div);
    const auto t = xpl_xpt(div, div_max_);
    last_ = TraceRow{gen, evals, best, div, t.xpl, t.xpt};
    if (gen % stride_ == 0) {
        rows_.push_back(last_);
        last_kept_ = true;
    } else {
        last_kept_ = false;
    }
}

void Recorder::flush_last()
{
    if (!last_kept_) {
        rows_.push_back(last_);
        last_kept_ = true;
    }
}

Summary summarize(std::span<const double> errors)
{
    if (errors.empty()) {
        throw ContractError("summarize: no runs");
    }
    Summary s;
    s.runs = errors.size();
    s.mean = std::accumulate(errors.begin(), errors.end(), 0.0) / static_cast<double>(s.runs);
    if (s.runs > 1) {
        double ss = 0.0;
        for (double e : errors) {
            ss += (e - s.mean) * (e - s.mean);
        }
        s.stdev = std::sqrt(ss / static_cast<double>(s.runs - 1));
    }
    s.best = *std::min_element(errors.begin(), errors.end());
    s.worst = *std::max_element(errors.begin(), errors.end());
    s.median = median(std::vector<double>(errors.begin(), errors.end()));
    return s;
}

Summary summarize(std::span<const RunTrace> traces, double optimum)
{
    std::vector<double> errors;
    errors.reserve(traces.size());
    double xpl = 0.0;
    double xpt = 0.0;
    for (const auto& t : traces) {
        errors.push_back(t.best_fitness - optimum);
        double run_xpl = 0.0;
        double run_xpt = 0.0;
        for (const auto& r : t.rows) {
            run_xpl += r.xpl;
            run_xpt += r.xpt;
        }
        if (!t.rows.empty()) {
            xpl += run_xpl / static_cast<double>(t.rows.size());
            xpt += run_xpt / static_cast<double>(t.rows.size());
        }
    }
    Summary s = summarize(errors);
    s.mean_xpl = xpl / static_cast<double>(traces.size());
    s.mean_xpt = xpt / static_cast<double>(traces.size());
    return s;
}

double floor_error(double error, double floor)
{
    return error < floor ? 0.0 : error;
}

void write_trace_jsonl(std::ostream& out, const RunTrace& trace)
{
    for (const auto& r : trace.rows) {
        nlohmann::ordered_json j;
        j["gen"] = r.gen;
        j["evals"] = r.evals;
        j["best"] = r.best;
        j["div"] = r.div;
        j["xpl"] = r.xpl;
        j["xpt"] = r.xpt;
        out << j.dump() << '\n';
    }
}

std::vector<TraceRow> read_trace_jsonl(std::istream& in)
{
    std::vector<TraceRow> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto j = nlohmann::json::parse(line);
        rows.push_back(TraceRow{j.at("gen").get<std::uint64_t>(), j.at("evals").get<std::uint64_t>(),
                                j.at("best").get<double>(), j.at("div").get<double>(),
                                j.at("xpl").get<double>(), j.at("xpt").get<double>()});
    }
    return rows;
}

}  // namespace mhlab::metrics
