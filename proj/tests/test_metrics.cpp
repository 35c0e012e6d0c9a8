#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mhlab/errors.hpp"
#include "mhlab/metrics.hpp"
#include "mhlab/rng.hpp"

using namespace mhlab;
using namespace mhlab::metrics;

namespace {

Population make_pop(const std::vector<std::vector<double>>& xs)
{
    Population p;
    for (const auto& x : xs) p.members.push_back(Individual{x, 0.0});
    return p;
}

}  // namespace

TEST_CASE("median")
{
    CHECK(median({3, 1, 2}) == 2.0);
    CHECK(median({4, 1, 3, 2}) == 2.5);
    CHECK_THROWS_AS(median({}), ContractError);
}

TEST_CASE("diversity hand values")
{
    CHECK(diversity(make_pop({{1, 2}, {1, 2}, {1, 2}})) == 0.0);
    CHECK(diversity(make_pop({{0}, {2}})) == 1.0);
    // dim0 {0,2,4}: median 2, deviations 2,0,2 -> 4/3 ; dim1 {1,1,1}: 0
    CHECK(diversity(make_pop({{0, 1}, {2, 1}, {4, 1}})) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("property: diversity is translation and permutation invariant")
{
    RngStream r(8);
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 2 + r.index(20);
        const std::size_t d = 1 + r.index(6);
        std::vector<std::vector<double>> xs(n, std::vector<double>(d));
        for (auto& x : xs)
            for (auto& v : x) v = r.uniform(-10, 10);
        const double base = diversity(xs);
        auto moved = xs;
        const double c = r.uniform(-50, 50);
        for (auto& x : moved)
            for (auto& v : x) v += c;
        CHECK(diversity(moved) == doctest::Approx(base).epsilon(1e-9));
        auto perm = xs;
        std::reverse(perm.begin(), perm.end());
        CHECK(diversity(perm) == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("xpl/xpt")
{
    CHECK(xpl_xpt(2.0, 2.0).xpl == 100.0);
    CHECK(xpl_xpt(2.0, 2.0).xpt == 0.0);
    CHECK(xpl_xpt(0.0, 2.0).xpt == 100.0);
    CHECK(xpl_xpt(1.0, 2.0).xpl == 50.0);
    CHECK(xpl_xpt(1.0, 2.0).xpt == 50.0);
    CHECK(xpl_xpt(0.0, 0.0).xpl == 0.0);
    CHECK(xpl_xpt(0.0, 0.0).xpt == 100.0);
}

TEST_CASE("recorder keeps a running diversity maximum")
{
    RngStream r(12);
    Recorder rec(3);
    double brute_max = 0.0;
    for (std::uint64_t g = 0; g < 20; ++g) {
        std::vector<std::vector<double>> xs(5, std::vector<double>(2));
        for (auto& x : xs)
            for (auto& v : x) v = r.uniform(-1, 1) * static_cast<double>(g % 7);
        const auto pop = make_pop(xs);
        rec.record(g, g * 5, 1.0, pop);
        brute_max = std::max(brute_max, diversity(pop));
        CHECK(rec.div_max() == brute_max);
    }
    rec.flush_last();
    const auto& rows = rec.rows();
    CHECK(rows.front().gen == 0);
    CHECK(rows.back().gen == 19);
    for (const auto& row : rows) {
        CHECK(row.xpl + row.xpt == doctest::Approx(100.0).epsilon(1e-12));
    }
}

TEST_CASE("summaries")
{
    std::vector<double> e{1, 2, 3};
    const auto s = summarize(e);
    CHECK(s.mean == 2.0);
    CHECK(s.median == 2.0);
    CHECK(s.stdev == 1.0);
    CHECK(s.best == 1.0);
    CHECK(s.worst == 3.0);
    std::vector<double> same(31, 0.25);
    CHECK(summarize(same).stdev == 0.0);
    CHECK(floor_error(5e-9) == 0.0);
    CHECK(floor_error(2e-8) == 2e-8);

    RunTrace t;
    t.best_fitness = 101.0;
    t.rows = {TraceRow{0, 10, 105, 1.0, 100.0, 0.0}, TraceRow{1, 20, 101, 0.5, 50.0, 50.0}};
    std::vector<RunTrace> ts(31, t);
    const auto st = summarize(ts, 100.0);
    CHECK(st.mean == 1.0);
    CHECK(st.stdev == 0.0);
    CHECK(st.mean_xpl == 75.0);
    CHECK(st.mean_xpt == 25.0);
}

TEST_CASE("trace jsonl round trip")
{
    RunTrace t;
    t.rows = {TraceRow{0, 50, 3.25, 1.5, 100.0, 0.0}, TraceRow{1, 100, 0.1 + 0.2, 0.75, 50.0, 50.0}};
    std::stringstream ss;
    write_trace_jsonl(ss, t);
    const auto first_line = ss.str().substr(0, ss.str().find('\n'));
    CHECK(first_line == R"({"gen":0,"evals":50,"best":3.25,"div":1.5,"xpl":100.0,"xpt":0.0})");
    const auto rows = read_trace_jsonl(ss);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].best == 0.1 + 0.2);
    CHECK(rows[1].evals == 100);
}
