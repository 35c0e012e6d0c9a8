#include <algorithm>
#include <filesystem>
#include <numeric>

#include <fmt/format.h>

#include "mhlab/errors.hpp"
#include "mhlab/experiments.hpp"
#include "mhlab/rng.hpp"
#include "experiments_detail.hpp"

namespace mhlab::exp {

std::string BiasVerdict::line() const
{
    return fmt::format("{}: R+={:.1f}, R-={:.1f}, p={:.6g}, biased={}", algo, r_plus, r_minus, p_value,
                       biased ? "yes" : "no");
}

std::string BiasAuditReport::verdict_lines() const
{
    std::string out;
    for (const auto& v : verdicts) out += v.line() + '\n';
    return out;
}

std::string BiasAuditReport::rank_table() const
{
    if (columns.empty()) return {};
    std::size_t width = 9;
    for (const auto& a : algorithms) width = std::max(width, a.size());
    std::string out = fmt::format("{:<{}}", "algorithm", width);
    for (const auto& c : columns) {
        out += fmt::format("  {:<14}", fmt::format("{} D{}", c.shifted ? "shifted" : "nonshifted", c.dim));
    }
    out += '\n';
    for (std::size_t i = 0; i < algorithms.size(); ++i) {
        out += fmt::format("{:<{}}", algorithms[i], width);
        for (const auto& c : columns) out += fmt::format("  {:<14}", stats::rank_cell(c.average_ranks[i], c.positions[i]));
        out += '\n';
    }
    std::string sums = fmt::format("{:<{}}", "sum", width);
    for (const auto& c : columns) {
        sums += fmt::format("  {:<14.4f}", std::accumulate(c.average_ranks.begin(), c.average_ranks.end(), 0.0));
    }
    return out + sums + '\n';
}

BiasVerdict bias_verdict(std::string algo, std::size_t dim, std::vector<double> nonshifted, std::vector<double> shifted,
                         double alpha)
{
    BiasVerdict v;
    v.algo = std::move(algo);
    v.dim = dim;
    try {
        const auto w = stats::wilcoxon_signed_rank(shifted, nonshifted, alpha);
        v.r_plus = w.r_plus;
        v.r_minus = w.r_minus;
        v.p_value = w.p_value;
        v.n = w.n;
        v.biased = w.p_value <= alpha && w.r_plus > w.r_minus;
    } catch (const InsufficientData&) {
        // Too few functions tell the conditions apart to claim a bias.
        v.insufficient = true;
        for (std::size_t i = 0; i < shifted.size(); ++i) v.n += shifted[i] != nonshifted[i] ? 1 : 0;
    }
    v.nonshifted = std::move(nonshifted);
    v.shifted = std::move(shifted);
    return v;
}

namespace {

bench::SuiteCounts counts_of(const bench::Suite& suite)
{
    bench::SuiteCounts c{0, 0, 0, 0};
    for (const auto& p : suite) {
        switch (p->problem_class()) {
        case bench::ProblemClass::unimodal: ++c.unimodal; break;
        case bench::ProblemClass::multimodal: ++c.multimodal; break;
        case bench::ProblemClass::hybrid: ++c.hybrid; break;
        case bench::ProblemClass::composition: ++c.composition; break;
        }
    }
    return c;
}

RankColumn rank_column(const stats::ResultMatrix& m, std::size_t dim, bool shifted, double alpha)
{
    RankColumn c;
    c.dim = dim;
    c.shifted = shifted;
    const auto fr = stats::friedman(m, alpha);
    c.average_ranks = fr.average_ranks;
    c.positions = stats::rank_positions(fr.average_ranks);
    if (m.cols() <= 50) {
        c.cd = stats::nemenyi_cd(m.cols(), m.rows(), alpha);
        std::vector<std::size_t> order(m.cols());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return c.average_ranks[a] < c.average_ranks[b]; });
        std::vector<double> sorted;
        for (std::size_t i : order) sorted.push_back(c.average_ranks[i]);
        c.groups = stats::cd_groups(sorted, c.cd);
        for (auto& g : c.groups) {
            for (auto& i : g) i = order[i];
        }
    }
    return c;
}

}  // namespace

BiasAuditReport bias_audit(const BiasAuditConfig& config, std::size_t dim, const bench::Suite& nonshifted,
                           const bench::Suite& shifted)
{
    bench::check_paired(nonshifted, shifted);
    if (config.algorithms.empty()) throw ConfigError("bias audit: no algorithms");

    ExperimentPlan plan;
    plan.algorithms = config.algorithms;
    plan.dims = {dim};
    plan.counts = counts_of(nonshifted);
    plan.runs = config.runs;
    plan.suite_seed = config.suite_seed;
    plan.budget_multiplier = config.budget_multiplier;
    plan.write_traces = false;
    plan.trace_stride = std::uint64_t{1} << 40;

    ExecuteOptions exec;
    exec.parallelism = config.parallelism;
    auto run_condition = [&](bool is_shifted) {
        ExperimentPlan p = plan;
        p.shifted = is_shifted;
        // Independent run streams per condition, so a shift-invariant
        // optimizer yields two independent samples rather than copies.
        p.seed = is_shifted ? mix64(config.seed, hash_label("shifted")) : config.seed;
        if (!config.output_dir.empty()) {
            p.output_dir = (std::filesystem::path(config.output_dir) /
                            fmt::format("{}_d{}", is_shifted ? "shifted" : "nonshifted", dim))
                               .string();
        }
        auto store = detail::execute_on(p, {{dim, is_shifted ? shifted : nonshifted}}, exec);
        if (!p.output_dir.empty()) export_results(p, store);
        return store;
    };
    const auto ns_store = run_condition(false);
    const auto sh_store = run_condition(true);

    BiasAuditReport report;
    for (const auto& a : config.algorithms) report.algorithms.push_back(a.id);
    const auto m_ns = result_matrix(ns_store.records(), dim, Aggregate::mean, report.algorithms);
    const auto m_sh = result_matrix(sh_store.records(), dim, Aggregate::mean, report.algorithms);

    for (std::size_t a = 0; a < report.algorithms.size(); ++a) {
        std::vector<double> ns, sh;
        for (std::size_t f = 0; f < m_ns.rows(); ++f) {
            ns.push_back(m_ns.cells[f][a]);
            sh.push_back(m_sh.cells[f][a]);
        }
        report.verdicts.push_back(bias_verdict(report.algorithms[a], dim, std::move(ns), std::move(sh), config.alpha));
    }
    if (report.algorithms.size() >= 3 && m_ns.rows() >= 2) {
        report.columns.push_back(rank_column(m_ns, dim, false, config.alpha));
        report.columns.push_back(rank_column(m_sh, dim, true, config.alpha));
    }
    return report;
}

BiasAuditReport bias_audit(const BiasAuditConfig& config)
{
    if (config.dims.empty()) throw ConfigError("bias audit: no dimensions");
    BiasAuditReport report;
    for (std::size_t dim : config.dims) {
        const auto ns = bench::make_suite(dim, config.counts, false, config.suite_seed);
        const auto sh = bench::make_suite(dim, config.counts, true, config.suite_seed);
        auto part = bias_audit(config, dim, ns, sh);
        report.algorithms = part.algorithms;
        for (auto& v : part.verdicts) report.verdicts.push_back(std::move(v));
        for (auto& c : part.columns) report.columns.push_back(std::move(c));
    }
    return report;
}

}  // namespace mhlab::exp
