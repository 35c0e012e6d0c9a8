#ifndef MHLAB_PLOT_HPP
#define MHLAB_PLOT_HPP

#include <span>
#include <string>
#include <vector>

namespace mhlab::plot {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Standalone SVG line chart. With `log_y`, nonpositive values are drawn
/// at the smallest positive value in the data.
std::string line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                       const std::vector<Series>& series, bool log_y);

/// Stacked XPL/XPT percentages over evaluations.
std::string tradeoff_chart(const std::string& title, std::span<const double> x, std::span<const double> xpl,
                           std::span<const double> xpt);

/// Critical-difference diagram: a rank axis with one tick per algorithm,
/// each algorithm's average rank marked and labelled, a CD bar, and a
/// horizontal bar per group of indistinguishable algorithms. `groups`
/// index into `labels`/`ranks`.
std::string cd_plot(const std::string& title, const std::vector<std::string>& labels, std::span<const double> ranks,
                    double cd, const std::vector<std::vector<std::size_t>>& groups);

/// Escape &, <, > and quotes for SVG text.
std::string escape(const std::string& text);

}  // namespace mhlab::plot

#endif
