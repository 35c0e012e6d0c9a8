#include "mhlab/plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace mhlab::plot {

namespace {

constexpr double kWidth = 640, kHeight = 400;
constexpr double kLeft = 70, kRight = 160, kTop = 40, kBottom = 50;
constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
                                    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939",
                                    "#8c6d31", "#843c39", "#7b4173"};

std::string header(const std::string& title, double w = kWidth, double h = kHeight)
{
    return fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
        "font-family=\"sans-serif\" font-size=\"11\">\n"
        "<rect width=\"{0}\" height=\"{1}\" fill=\"white\"/>\n"
        "<text x=\"{2}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">{3}</text>\n",
        w, h, w / 2, escape(title));
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double v)
    {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void settle()
    {
        if (!(lo <= hi)) lo = 0, hi = 1;
        if (hi == lo) hi = lo + 1;
    }
};

}  // namespace

std::string escape(const std::string& text)
{
    std::string out;
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                       const std::vector<Series>& series, bool log_y)
{
    double min_pos = std::numeric_limits<double>::infinity();
    for (const auto& s : series)
        for (double v : s.y)
            if (v > 0) min_pos = std::min(min_pos, v);
    if (!std::isfinite(min_pos)) min_pos = 1e-8;
    auto ty = [&](double v) { return log_y ? std::log10(std::max(v, min_pos)) : v; };

    Range xr, yr;
    for (const auto& s : series) {
        for (double v : s.x) xr.add(v);
        for (double v : s.y) yr.add(ty(v));
    }
    xr.settle();
    yr.settle();
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto px = [&](double v) { return kLeft + (v - xr.lo) / (xr.hi - xr.lo) * pw; };
    auto py = [&](double v) { return kTop + ph - (ty(v) - yr.lo) / (yr.hi - yr.lo) * ph; };

    std::string out = header(title);
    out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", kLeft,
                       kTop, pw, ph);
    for (int i = 0; i <= 4; ++i) {
        const double xv = xr.lo + (xr.hi - xr.lo) * i / 4.0;
        const double yv = yr.lo + (yr.hi - yr.lo) * i / 4.0;
        const double x = kLeft + pw * i / 4.0, y = kTop + ph - ph * i / 4.0;
        out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{:.3g}</text>\n", x,
                           kTop + ph + 15, xv);
        out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{}</text>\n", kLeft - 5, y + 4,
                           log_y ? fmt::format("1e{:.1f}", yv) : fmt::format("{:.3g}", yv));
    }
    out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n", kLeft + pw / 2,
                       kHeight - 12, escape(x_label));
    out += fmt::format("<text x=\"15\" y=\"{:.1f}\" transform=\"rotate(-90 15 {:.1f})\" text-anchor=\"middle\">{}</text>\n",
                       kTop + ph / 2, kTop + ph / 2, escape(y_label));

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = kPalette[k % std::size(kPalette)];
        std::string pts;
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            pts += fmt::format("{:.2f},{:.2f} ", px(s.x[i]), py(s.y[i]));
        }
        out += fmt::format("<polyline class=\"series\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
                           color, pts);
        const double ly = kTop + 12 + 14.0 * static_cast<double>(k);
        out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"{3}\" stroke-width=\"2\"/>\n",
                           kWidth - kRight + 10, ly, kWidth - kRight + 30, color);
        out += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", kWidth - kRight + 35, ly + 4, escape(s.label));
    }
    out += "</svg>\n";
    return out;
}

std::string tradeoff_chart(const std::string& title, std::span<const double> x, std::span<const double> xpl,
                           std::span<const double> xpt)
{
    Range xr;
    for (double v : x) xr.add(v);
    xr.settle();
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto px = [&](double v) { return kLeft + (v - xr.lo) / (xr.hi - xr.lo) * pw; };
    auto py = [&](double pct) { return kTop + ph - std::clamp(pct, 0.0, 100.0) / 100.0 * ph; };
    const std::size_t n = std::min({x.size(), xpl.size(), xpt.size()});

    std::string out = header(title);
    std::string lower, upper;
    lower += fmt::format("{:.2f},{:.2f} ", px(n ? x[0] : 0), py(0));
    for (std::size_t i = 0; i < n; ++i) lower += fmt::format("{:.2f},{:.2f} ", px(x[i]), py(xpl[i]));
    lower += fmt::format("{:.2f},{:.2f}", px(n ? x[n - 1] : 0), py(0));
    for (std::size_t i = 0; i < n; ++i) upper += fmt::format("{:.2f},{:.2f} ", px(x[i]), py(xpl[i]));
    for (std::size_t i = n; i-- > 0;) upper += fmt::format("{:.2f},{:.2f} ", px(x[i]), py(xpl[i] + xpt[i]));
    out += fmt::format("<polygon class=\"xpl\" fill=\"#1f77b4\" fill-opacity=\"0.7\" points=\"{}\"/>\n", lower);
    out += fmt::format("<polygon class=\"xpt\" fill=\"#ff7f0e\" fill-opacity=\"0.7\" points=\"{}\"/>\n", upper);
    out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", kLeft,
                       kTop, pw, ph);
    for (int i = 0; i <= 4; ++i) {
        const double y = kTop + ph - ph * i / 4.0;
        out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{}%</text>\n", kLeft - 5, y + 4, 25 * i);
        out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{:.3g}</text>\n",
                           kLeft + pw * i / 4.0, kTop + ph + 15, xr.lo + (xr.hi - xr.lo) * i / 4.0);
    }
    out += fmt::format("<text x=\"{}\" y=\"{}\">XPL%</text>\n", kWidth - kRight + 10, kTop + 14);
    out += fmt::format("<text x=\"{}\" y=\"{}\">XPT%</text>\n", kWidth - kRight + 10, kTop + 30);
    out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">evaluations</text>\n", kLeft + pw / 2,
                       kHeight - 12);
    out += "</svg>\n";
    return out;
}

std::string cd_plot(const std::string& title, const std::vector<std::string>& labels, std::span<const double> ranks,
                    double cd, const std::vector<std::vector<std::size_t>>& groups)
{
    const std::size_t k = labels.size();
    const double h = 120 + 16.0 * static_cast<double>(k) + 10.0 * static_cast<double>(groups.size());
    const double axis_y = 70, left = 60, right = kWidth - 60;
    auto px = [&](double r) { return left + (r - 1.0) / std::max<double>(1.0, static_cast<double>(k) - 1.0) * (right - left); };

    std::string out = header(title, kWidth, h);
    out += fmt::format("<line class=\"axis\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n", left, axis_y,
                       right, axis_y);
    for (std::size_t r = 1; r <= k; ++r) {
        const double x = px(static_cast<double>(r));
        out += fmt::format("<line class=\"tick\" x1=\"{0:.2f}\" y1=\"{1}\" x2=\"{0:.2f}\" y2=\"{2}\" stroke=\"black\"/>\n", x,
                           axis_y - 5, axis_y);
        out += fmt::format("<text x=\"{:.2f}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", x, axis_y - 8, r);
    }
    out += fmt::format("<line class=\"cd\" x1=\"{0}\" y1=\"35\" x2=\"{1:.2f}\" y2=\"35\" stroke=\"black\" stroke-width=\"2\"/>\n",
                       left, px(1.0 + cd));
    out += fmt::format("<text x=\"{:.2f}\" y=\"30\">CD = {:.3f}</text>\n", px(1.0 + cd) + 5, cd);

    std::vector<std::size_t> order(k);
    for (std::size_t i = 0; i < k; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ranks[a] < ranks[b]; });
    for (std::size_t pos = 0; pos < k; ++pos) {
        const std::size_t i = order[pos];
        const double x = px(ranks[i]);
        const double y = 100 + 16.0 * static_cast<double>(pos) + 10.0 * static_cast<double>(groups.size());
        const bool left_side = pos < (k + 1) / 2;
        const double tx = left_side ? left - 5 : right + 5;
        out += fmt::format("<polyline class=\"marker\" fill=\"none\" stroke=\"black\" points=\"{0:.2f},{1} {0:.2f},{2} {3:.2f},{2}\"/>\n",
                           x, axis_y, y, tx);
        out += fmt::format("<text class=\"label\" x=\"{:.2f}\" y=\"{}\" text-anchor=\"{}\">{} ({:.4f})</text>\n", tx,
                           y + 4, left_side ? "end" : "start", escape(labels[i]), ranks[i]);
    }
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (groups[g].size() < 2) continue;
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (std::size_t i : groups[g]) {
            lo = std::min(lo, ranks[i]);
            hi = std::max(hi, ranks[i]);
        }
        const double y = axis_y + 12 + 8.0 * static_cast<double>(g);
        out += fmt::format("<line class=\"group\" x1=\"{:.2f}\" y1=\"{}\" x2=\"{:.2f}\" y2=\"{}\" stroke=\"black\" stroke-width=\"3\"/>\n",
                           px(lo) - 3, y, px(hi) + 3, y);
    }
    out += "</svg>\n";
    return out;
}

}  // namespace mhlab::plot
