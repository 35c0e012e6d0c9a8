#ifndef MHLAB_STATS_HPP
#define MHLAB_STATS_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace mhlab::stats {

/// Problems x algorithms table of mean final errors.
struct ResultMatrix {
    std::vector<std::string> problems;
    std::vector<std::string> algorithms;
    /// cells[problem][algorithm]
    std::vector<std::vector<double>> cells;

    std::size_t rows() const noexcept { return cells.size(); }
    std::size_t cols() const noexcept { return algorithms.size(); }
    /// Shape and finiteness check; ConfigError on a ragged or empty table.
    void validate() const;
};

/// Ranks 1..n with ties averaged.
std::vector<double> midranks(std::span<const double> values);

struct FriedmanReport {
    std::vector<double> average_ranks;
    std::size_t problems = 0;
    std::size_t algorithms = 0;
    double chi_square = 0.0;
    /// Chi-square p-value with k-1 degrees of freedom.
    double chi_square_p = 1.0;
    double iman_davenport_f = 0.0;
    double iman_davenport_p = 1.0;
    /// Reported p: Iman-Davenport when requested, else chi-square.
    double p_value = 1.0;
    double alpha = 0.05;
    bool significant = false;
};

/// Per-row midranks (lower error = better rank). ConfigError for fewer than
/// three algorithms or two problems.
FriedmanReport friedman(const ResultMatrix& matrix, double alpha = 0.05, bool iman_davenport = false);

struct WilcoxonReport {
    /// Rank sum over pairs with a > b.
    double r_plus = 0.0;
    double r_minus = 0.0;
    /// Nonzero differences kept.
    std::size_t n = 0;
    double z = 0.0;
    /// Two-sided normal approximation, no continuity correction.
    double p_value = 1.0;
    double alpha = 0.05;
    bool significant = false;
    /// True when the second sample has the larger rank sum of wins, i.e.
    /// R+ > R- (the first sample is worse under minimization).
    bool second_better() const noexcept { return r_plus > r_minus; }
};

/// Zero differences are dropped; InsufficientData when fewer than five remain.
WilcoxonReport wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b, double alpha = 0.05);

/// Studentized range q_alpha(k) / sqrt(2) for k in [2, 50], alpha in {0.05, 0.10}.
double nemenyi_q(std::size_t k, double alpha);
/// q * sqrt(k (k + 1) / (6 N)).
double nemenyi_cd(std::size_t k, std::size_t N, double alpha = 0.05);

/// Maximal runs of the sorted ranks whose spread is at most cd (inclusive).
/// Each group lists indices into `sorted_ranks`; singletons are kept.
std::vector<std::vector<std::size_t>> cd_groups(std::span<const double> sorted_ranks, double cd);

/// Competition positions of average ranks: 1 for the smallest, ties share
/// the lowest position ("1, 2, 2, 4").
std::vector<std::size_t> rank_positions(std::span<const double> average_ranks);

/// Table cell such as "3.9333 (1)".
std::string rank_cell(double average_rank, std::size_t position);

}  // namespace mhlab::stats

#endif
