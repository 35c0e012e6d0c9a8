#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include <fmt/format.h>

#include "mhlab/errors.hpp"
#include "mhlab/experiments.hpp"
#include "mhlab/plot.hpp"

namespace fs = std::filesystem;

namespace mhlab::exp {

namespace {

std::vector<std::size_t> order_by(std::span<const double> ranks)
{
    std::vector<std::size_t> order(ranks.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ranks[a] < ranks[b]; });
    return order;
}

/// CD groups as indices into the unsorted algorithm list.
std::vector<std::vector<std::size_t>> groups_by_index(std::span<const double> ranks, double cd)
{
    const auto order = order_by(ranks);
    std::vector<double> sorted;
    for (std::size_t i : order) sorted.push_back(ranks[i]);
    auto groups = stats::cd_groups(sorted, cd);
    for (auto& g : groups) {
        for (auto& i : g) i = order[i];
    }
    return groups;
}

}  // namespace

std::string stats_report(const std::vector<RunRecord>& records, double alpha, Aggregate aggregate,
                         bool iman_davenport)
{
    if (records.empty()) throw ConfigError("no records");
    std::string out;
    for (std::size_t dim : record_dims(records)) {
        const auto m = result_matrix(records, dim, aggregate);
        m.validate();
        const std::size_t k = m.cols();
        out += fmt::format("[dim {}]\nproblems {}\nalgorithms {}\naggregate {}\n", dim, m.rows(), k,
                           aggregate == Aggregate::mean ? "mean" : "median");
        if (k < 2) {
            out += "note single algorithm, nothing to compare\n\n";
            continue;
        }
        std::size_t best = 0;
        if (k >= 3 && m.rows() >= 2) {
            const auto fr = stats::friedman(m, alpha, iman_davenport);
            const auto positions = stats::rank_positions(fr.average_ranks);
            out += fmt::format("friedman chi_square={:.6g} p={:.6g} iman_davenport_f={:.6g} iman_davenport_p={:.6g} "
                               "reported_p={:.6g} significant={}\n",
                               fr.chi_square, fr.chi_square_p, fr.iman_davenport_f, fr.iman_davenport_p, fr.p_value,
                               fr.significant ? "yes" : "no");
            for (std::size_t i : order_by(fr.average_ranks)) {
                out += fmt::format("rank {} {}\n", m.algorithms[i], stats::rank_cell(fr.average_ranks[i], positions[i]));
            }
            out += fmt::format("rank_sum {:.6f}\n", std::accumulate(fr.average_ranks.begin(), fr.average_ranks.end(), 0.0));
            if (k <= 50) {
                const double cd = stats::nemenyi_cd(k, m.rows(), alpha);
                out += fmt::format("nemenyi_cd {:.6f}\n", cd);
                for (const auto& g : groups_by_index(fr.average_ranks, cd)) {
                    std::string names;
                    for (std::size_t i : g) names += (names.empty() ? "" : ",") + m.algorithms[i];
                    out += fmt::format("cd_group {}\n", names);
                }
            }
            best = order_by(fr.average_ranks).front();
        } else {
            // Two algorithms: call the one with the lower total error the reference.
            double s0 = 0, s1 = 0;
            for (const auto& row : m.cells) s0 += row[0], s1 += row[1];
            best = s1 < s0 ? 1 : 0;
        }
        // Pairwise Wilcoxon against the reference; R+ counts problems where
        // the reference is better.
        std::vector<double> ref;
        for (const auto& row : m.cells) ref.push_back(row[best]);
        for (std::size_t j = 0; j < k; ++j) {
            if (j == best) continue;
            std::vector<double> other;
            for (const auto& row : m.cells) other.push_back(row[j]);
            try {
                const auto w = stats::wilcoxon_signed_rank(other, ref, alpha);
                out += fmt::format("wilcoxon {} vs {}: R+={:.1f}, R-={:.1f}, n={}, p={:.6g}, significant={}\n",
                                   m.algorithms[best], m.algorithms[j], w.r_plus, w.r_minus, w.n, w.p_value,
                                   w.significant ? "yes" : "no");
            } catch (const InsufficientData&) {
                out += fmt::format("wilcoxon {} vs {}: insufficient data\n", m.algorithms[best], m.algorithms[j]);
            }
        }
        out += '\n';
    }
    return out;
}

std::string cd_plot_svg(const std::vector<RunRecord>& records, std::size_t dim, double alpha, Aggregate aggregate)
{
    const auto m = result_matrix(records, dim, aggregate);
    if (m.cols() < 3 || m.rows() < 2 || m.cols() > 50) return {};
    const auto fr = stats::friedman(m, alpha);
    const double cd = stats::nemenyi_cd(m.cols(), m.rows(), alpha);
    return plot::cd_plot(fmt::format("Critical difference, D={}", dim), m.algorithms, fr.average_ranks, cd,
                         groups_by_index(fr.average_ranks, cd));
}

namespace {

struct Curve {
    std::vector<double> evals, error, div, xpl, xpt;
};

/// Mean over runs of the trace values at each grid point, holding each
/// run's last recorded row (its first row before it starts).
Curve average_curve(const std::vector<std::vector<metrics::TraceRow>>& traces, std::size_t points)
{
    Curve c;
    double max_evals = 0;
    for (const auto& t : traces) {
        if (!t.empty()) max_evals = std::max(max_evals, static_cast<double>(t.back().evals));
    }
    if (points < 2) points = 2;
    for (std::size_t j = 0; j < points; ++j) {
        const double x = max_evals * static_cast<double>(j) / static_cast<double>(points - 1);
        double e = 0, d = 0, l = 0, p = 0;
        std::size_t n = 0;
        for (const auto& t : traces) {
            if (t.empty()) continue;
            auto it = std::upper_bound(t.begin(), t.end(), x,
                                       [](double v, const metrics::TraceRow& r) { return v < static_cast<double>(r.evals); });
            const auto& row = it == t.begin() ? t.front() : *std::prev(it);
            e += row.best, d += row.div, l += row.xpl, p += row.xpt;
            ++n;
        }
        if (n == 0) continue;
        const double inv = 1.0 / static_cast<double>(n);
        c.evals.push_back(x);
        c.error.push_back(e * inv);
        c.div.push_back(d * inv);
        c.xpl.push_back(l * inv);
        c.xpt.push_back(p * inv);
    }
    return c;
}

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
}

}  // namespace

std::vector<std::string> write_report(const std::string& results_dir, const std::string& out_dir,
                                      const ReportOptions& options)
{
    const fs::path results = fs::path(results_dir) / "results.csv";
    if (!fs::exists(results)) throw ConfigError(fmt::format("no records: {} not found", results.string()));
    const auto records = read_results_csv(results.string());
    if (records.empty()) throw ConfigError("no records");

    fs::create_directories(out_dir);
    const fs::path out(out_dir);
    std::vector<std::string> written;
    auto emit = [&](const std::string& name, const std::string& text) {
        write_text(out / name, text);
        written.push_back(name);
    };

    {
        std::ostringstream os;
        write_summary_csv(os, summarize_records(records));
        emit("summary.csv", os.str());
    }
    emit("stats.txt", stats_report(records, options.alpha, options.aggregate));

    for (std::size_t dim : record_dims(records)) {
        if (auto svg = cd_plot_svg(records, dim, options.alpha, options.aggregate); !svg.empty()) {
            emit(fmt::format("cd_d{}.svg", dim), svg);
        }

        std::map<std::size_t, std::map<std::string, std::vector<std::vector<metrics::TraceRow>>>> traces;
        for (const auto& r : records) {
            if (r.dim != dim || r.trace_path.empty()) continue;
            std::ifstream in(fs::path(results_dir) / r.trace_path, std::ios::binary);
            if (!in) continue;
            traces[r.func_index][r.algo].push_back(metrics::read_trace_jsonl(in));
        }
        for (const auto& [func, by_algo] : traces) {
            std::vector<plot::Series> conv, div;
            std::string data = "algo,evals,error,div,xpl,xpt\n";
            for (const auto& [algo, runs] : by_algo) {
                const auto c = average_curve(runs, options.curve_points);
                for (std::size_t i = 0; i < c.evals.size(); ++i) {
                    data += fmt::format("{},{},{},{},{},{}\n", algo, c.evals[i], c.error[i], c.div[i], c.xpl[i], c.xpt[i]);
                }
                conv.push_back({algo, c.evals, c.error});
                div.push_back({algo, c.evals, c.div});
                emit(fmt::format("tradeoff_d{}_f{}_{}.svg", dim, func, algo),
                     plot::tradeoff_chart(fmt::format("{} on f{} (D={}): exploration vs exploitation", algo, func, dim),
                                          c.evals, c.xpl, c.xpt));
            }
            emit(fmt::format("curves_d{}_f{}.csv", dim, func), data);
            emit(fmt::format("convergence_d{}_f{}.svg", dim, func),
                 plot::line_chart(fmt::format("f{} (D={})", func, dim), "evaluations", "mean best error", conv, true));
            emit(fmt::format("diversity_d{}_f{}.svg", dim, func),
                 plot::line_chart(fmt::format("f{} (D={}) diversity", func, dim), "evaluations", "diversity", div, false));
        }
    }
    return written;
}

}  // namespace mhlab::exp
