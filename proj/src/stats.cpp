#include "mhlab/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <fmt/format.h>

#include "mhlab/errors.hpp"

namespace mhlab::stats {

namespace {

// q_alpha(k) / sqrt(2) for k = 2..50 (infinite degrees of freedom).
constexpr std::array<double, 49> kQ05 = {
    1.95996, 2.34370, 2.56903, 2.72777, 2.84971, 2.94832, 3.03088, 3.10173, 3.16368, 3.21865,
    3.26800, 3.31274, 3.35362, 3.39123, 3.42604, 3.45842, 3.48868, 3.51707, 3.54380, 3.56904,
    3.59295, 3.61565, 3.63725, 3.65786, 3.67756, 3.69641, 3.71450, 3.73187, 3.74858, 3.76467,
    3.78019, 3.79518, 3.80966, 3.82368, 3.83725, 3.85041, 3.86318, 3.87558, 3.88763, 3.89934,
    3.91075, 3.92185, 3.93267, 3.94322, 3.95352, 3.96357, 3.97338, 3.98297, 3.99234};
constexpr std::array<double, 49> kQ10 = {
    1.64485, 2.05229, 2.29134, 2.45952, 2.58852, 2.69273, 2.77988, 2.85461, 2.91989, 2.97777,
    3.02969, 3.07673, 3.11969, 3.15920, 3.19574, 3.22972, 3.26146, 3.29122, 3.31923, 3.34568,
    3.37071, 3.39448, 3.41709, 3.43865, 3.45925, 3.47897, 3.49788, 3.51603, 3.53349, 3.55031,
    3.56652, 3.58216, 3.59729, 3.61192, 3.62608, 3.63981, 3.65313, 3.66607, 3.67863, 3.69085,
    3.70274, 3.71431, 3.72559, 3.73658, 3.74731, 3.75778, 3.76800, 3.77799, 3.78775};

}  // namespace

void ResultMatrix::validate() const
{
    if (cells.empty() || algorithms.empty()) {
        throw ConfigError("result matrix is empty");
    }
    if (!problems.empty() && problems.size() != cells.size()) {
        throw ConfigError("result matrix has " + std::to_string(cells.size()) + " rows but " +
                          std::to_string(problems.size()) + " problem labels");
    }
    for (std::size_t r = 0; r < cells.size(); ++r) {
        if (cells[r].size() != algorithms.size()) {
            throw ConfigError("result matrix row " + std::to_string(r) + " has " + std::to_string(cells[r].size()) +
                              " cells, expected " + std::to_string(algorithms.size()));
        }
        for (double v : cells[r]) {
            if (!std::isfinite(v)) {
                throw ConfigError("result matrix row " + std::to_string(r) + " has a non-finite cell");
            }
        }
    }
}

std::vector<double> midranks(std::span<const double> values)
{
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double mid = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mid;
        i = j + 1;
    }
    return ranks;
}

FriedmanReport friedman(const ResultMatrix& matrix, double alpha, bool iman_davenport)
{
    matrix.validate();
    const std::size_t N = matrix.rows();
    const std::size_t k = matrix.cols();
    if (k < 3) {
        throw ConfigError("Friedman test needs at least 3 algorithms, got " + std::to_string(k) +
                          "; use the Wilcoxon signed-rank test");
    }
    if (N < 2) {
        throw ConfigError("Friedman test needs at least 2 problems");
    }

    FriedmanReport rep;
    rep.problems = N;
    rep.algorithms = k;
    rep.alpha = alpha;
    rep.average_ranks.assign(k, 0.0);
    for (const auto& row : matrix.cells) {
        const auto r = midranks(row);
        for (std::size_t j = 0; j < k; ++j) rep.average_ranks[j] += r[j];
    }
    for (auto& r : rep.average_ranks) r /= static_cast<double>(N);

    const double kd = static_cast<double>(k);
    const double Nd = static_cast<double>(N);
    double sum_sq = 0.0;
    for (double r : rep.average_ranks) sum_sq += r * r;
    rep.chi_square = std::max(0.0, 12.0 * Nd / (kd * (kd + 1.0)) * (sum_sq - kd * (kd + 1.0) * (kd + 1.0) / 4.0));
    rep.chi_square_p = std::clamp(boost::math::gamma_q((kd - 1.0) / 2.0, rep.chi_square / 2.0), 0.0, 1.0);

    const double denom = Nd * (kd - 1.0) - rep.chi_square;
    if (denom <= 0.0) {
        rep.iman_davenport_f = std::numeric_limits<double>::infinity();
        rep.iman_davenport_p = 0.0;
    } else {
        rep.iman_davenport_f = (Nd - 1.0) * rep.chi_square / denom;
        const boost::math::fisher_f_distribution<double> dist(kd - 1.0, (kd - 1.0) * (Nd - 1.0));
        rep.iman_davenport_p = std::clamp(boost::math::cdf(boost::math::complement(dist, rep.iman_davenport_f)), 0.0, 1.0);
    }
    rep.p_value = iman_davenport ? rep.iman_davenport_p : rep.chi_square_p;
    rep.significant = rep.p_value <= alpha;
    return rep;
}

WilcoxonReport wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b, double alpha)
{
    if (a.size() != b.size()) {
        throw ConfigError("Wilcoxon signed-rank: samples differ in length (" + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()) + ")");
    }
    std::vector<double> diff;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        if (d != 0.0) diff.push_back(d);
    }
    if (diff.size() < 5) {
        throw InsufficientData("Wilcoxon signed-rank needs at least 5 nonzero differences, got " +
                               std::to_string(diff.size()));
    }
    std::vector<double> mags(diff.size());
    std::transform(diff.begin(), diff.end(), mags.begin(), [](double d) { return std::abs(d); });
    const auto ranks = midranks(mags);

    WilcoxonReport rep;
    rep.n = diff.size();
    rep.alpha = alpha;
    for (std::size_t i = 0; i < diff.size(); ++i) {
        (diff[i] > 0.0 ? rep.r_plus : rep.r_minus) += ranks[i];
    }
    const double n = static_cast<double>(rep.n);
    const double mean = n * (n + 1.0) / 4.0;
    const double sd = std::sqrt(n * (n + 1.0) * (2.0 * n + 1.0) / 24.0);
    rep.z = (std::min(rep.r_plus, rep.r_minus) - mean) / sd;
    rep.p_value = std::clamp(std::erfc(std::abs(rep.z) / std::sqrt(2.0)), 0.0, 1.0);
    rep.significant = rep.p_value <= alpha;
    return rep;
}

double nemenyi_q(std::size_t k, double alpha)
{
    if (k < 2 || k > 50) {
        throw ConfigError("Nemenyi table covers 2..50 algorithms, got " + std::to_string(k));
    }
    if (std::abs(alpha - 0.05) < 1e-12) return kQ05[k - 2];
    if (std::abs(alpha - 0.10) < 1e-12) return kQ10[k - 2];
    throw ConfigError(fmt::format("Nemenyi table covers alpha 0.05 and 0.10, got {}", alpha));
}

double nemenyi_cd(std::size_t k, std::size_t N, double alpha)
{
    if (N == 0) {
        throw ConfigError("Nemenyi critical difference needs at least one problem");
    }
    const double kd = static_cast<double>(k);
    return nemenyi_q(k, alpha) * std::sqrt(kd * (kd + 1.0) / (6.0 * static_cast<double>(N)));
}

std::vector<std::vector<std::size_t>> cd_groups(std::span<const double> sorted_ranks, double cd)
{
    constexpr double kSlack = 1e-12;
    std::vector<std::vector<std::size_t>> groups;
    std::size_t reach = 0;
    for (std::size_t i = 0; i < sorted_ranks.size(); ++i) {
        std::size_t j = i;
        while (j + 1 < sorted_ranks.size() && sorted_ranks[j + 1] - sorted_ranks[i] <= cd + kSlack) ++j;
        if (!groups.empty() && j <= reach) continue;
        std::vector<std::size_t> g(j - i + 1);
        std::iota(g.begin(), g.end(), i);
        groups.push_back(std::move(g));
        reach = j;
    }
    return groups;
}

std::vector<std::size_t> rank_positions(std::span<const double> average_ranks)
{
    std::vector<std::size_t> pos(average_ranks.size());
    for (std::size_t i = 0; i < average_ranks.size(); ++i) {
        std::size_t better = 0;
        for (double r : average_ranks) better += r < average_ranks[i];
        pos[i] = better + 1;
    }
    return pos;
}

std::string rank_cell(double average_rank, std::size_t position)
{
    return fmt::format("{:.4f} ({})", average_rank, position);
}

}  // namespace mhlab::stats
