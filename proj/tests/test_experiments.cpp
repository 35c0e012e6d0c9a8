#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "mhlab/errors.hpp"
#include "mhlab/experiments.hpp"

using namespace mhlab;
using namespace mhlab::exp;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name)
        : path(fs::temp_directory_path() / fmt::format("mhlab_test_{}_{}", name, ::getpid()))
    {
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str() const { return path.string(); }
};

ExperimentPlan small_plan(std::string dir = {})
{
    ExperimentPlan p;
    p.algorithms = {AlgorithmEntry::registered("de"), AlgorithmEntry::registered("gsk"),
                    AlgorithmEntry::registered("eo")};
    p.dims = {5};
    p.counts = {1, 1, 1, 1};
    p.runs = 3;
    p.seed = 11;
    p.suite_seed = 5;
    p.budget_multiplier = 40;
    p.trace_stride = 5;
    p.output_dir = std::move(dir);
    return p;
}

std::vector<RunRecord> sorted(std::vector<RunRecord> r)
{
    std::sort(r.begin(), r.end(), [](const auto& a, const auto& b) { return a.id() < b.id(); });
    return r;
}

std::string read_file(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// results.csv with the wall_ms column blanked.
std::string without_wall_time(const std::string& csv)
{
    std::istringstream in(csv);
    std::string line, out;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '#') {
            std::vector<std::string> f;
            std::stringstream ss(line);
            std::string cell;
            while (std::getline(ss, cell, ',')) f.push_back(cell);
            if (f.size() >= 8) f[7].clear();
            line.clear();
            for (std::size_t i = 0; i < f.size(); ++i) line += (i ? "," : "") + f[i];
        }
        out += line + '\n';
    }
    return out;
}

}  // namespace

TEST_CASE("plan matrix is the full cartesian product with distinct seeds")
{
    ExperimentPlan p;
    for (const auto& spec : algo::registry()) p.algorithms.push_back(AlgorithmEntry::registered(spec.id));
    p.dims = {10};
    const auto m = plan_matrix(p);
    CHECK(m.size() == 12u * 30u * 31u);

    std::set<std::uint64_t> seeds;
    std::set<std::string> ids;
    for (const auto& d : m) {
        seeds.insert(d.seed);
        ids.insert(d.id);
    }
    CHECK(seeds.size() == m.size());
    CHECK(ids.size() == m.size());

    const auto again = plan_matrix(p);
    REQUIRE(again.size() == m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        CHECK(again[i].id == m[i].id);
        CHECK(again[i].seed == m[i].seed);
    }
}

TEST_CASE("run seed follows the documented mixing chain")
{
    const std::uint64_t want = mix64(mix64(mix64(mix64(7, hash_label("de")), 3), 10), 4);
    CHECK(run_seed(7, "de", 3, 10, 4) == want);
    CHECK(run_seed(7, "de", 3, 10, 4) != run_seed(7, "de", 4, 10, 3));
    CHECK(run_id("gsk", 30, 12, 0) == "gsk/d30/f12/r0");
}

TEST_CASE("plan validation names the problem")
{
    auto p = small_plan();
    p.runs = 0;
    CHECK_THROWS_AS(p.validate(), ConfigError);

    p = small_plan();
    p.algorithms.push_back(AlgorithmEntry::registered("nope"));
    CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("nope"), ConfigError);

    p = small_plan();
    p.functions = {5};
    CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("5"), ConfigError);

    p = small_plan();
    p.algorithms.push_back(AlgorithmEntry::registered("de"));
    CHECK_THROWS_AS(p.validate(), ConfigError);

    p = small_plan();
    p.algorithms.push_back(AlgorithmEntry::registered("hses"));
    CHECK_THROWS_AS(p.validate(), NotImplemented);
}

TEST_CASE("tuned entries resolve the shipped preset, overrides win")
{
    const auto entry = AlgorithmEntry::registered("gsk", {{"pop_size", std::int64_t{20}}}, true);
    const auto params = entry.resolve(10);
    CHECK(params.integer("pop_size") == 20);
    if (const auto* preset = algo::lookup("gsk").preset(10)) {
        for (const auto& [name, value] : preset->values()) {
            if (name != "pop_size") CHECK(params.get(name) == value);
        }
    }
    CHECK(AlgorithmEntry::registered("de").resolve(10) == algo::lookup("de").defaults());
}

TEST_CASE("in-memory execution honours the budget and the error bound")
{
    const auto p = small_plan();
    const auto store = execute(p);
    REQUIRE(store.records().size() == 3u * 4u * 3u);
    for (const auto& r : store.records()) {
        CHECK(r.evals <= 40u * r.dim);
        CHECK(r.raw_error >= -1e-8);
        CHECK(r.final_error == metrics::floor_error(r.raw_error));
        CHECK(r.trace_path.empty());
    }
}

TEST_CASE("parallel execution reproduces the sequential records")
{
    const auto p = small_plan();
    ExecuteOptions one, four;
    four.parallelism = 4;
    const auto a = sorted(execute(p, one).records());
    const auto b = sorted(execute(p, four).records());
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].same_result(b[i]));
}

TEST_CASE("interrupted experiments resume without duplicates")
{
    TempDir dir("resume"), ref("resume_ref");
    auto p = small_plan(dir.str());
    const std::size_t total = plan_matrix(p).size();

    ExecuteOptions half;
    half.stop_after = total / 2;
    CHECK(execute(p, half).records().size() == total / 2);

    std::size_t last_done = 0;
    ExecuteOptions rest;
    rest.progress = [&](std::size_t done, std::size_t) { last_done = done; };
    const auto resumed = execute(p, rest);
    CHECK(resumed.records().size() == total);
    CHECK(last_done == total);

    std::set<std::string> ids;
    for (const auto& r : resumed.records()) ids.insert(r.id());
    CHECK(ids.size() == total);

    const auto reopened = ResultStore(dir.str());
    CHECK(reopened.records().size() == total);

    auto q = small_plan(ref.str());
    const auto a = sorted(resumed.records());
    const auto b = sorted(execute(q).records());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].same_result(b[i]));
    CHECK(fs::exists(dir.path / a[0].trace_path));
}

TEST_CASE("a torn journal line is dropped and the run redone")
{
    TempDir dir("torn");
    auto p = small_plan(dir.str());
    p.algorithms.resize(1);
    p.runs = 1;
    const auto full = execute(p);
    const std::size_t total = full.records().size();

    const fs::path journal = dir.path / "store.csv";
    auto text = read_file(journal);
    text.resize(text.size() - 10);  // cut into the last record
    std::ofstream(journal, std::ios::binary | std::ios::trunc) << text;

    CHECK(ResultStore(dir.str()).records().size() == total - 1);
    CHECK(execute(p).records().size() == total);
    CHECK(ResultStore(dir.str()).records().size() == total);
}

TEST_CASE("store rejects duplicates and foreign plans")
{
    ResultStore mem;
    RunRecord r{"de", 1, 10, 0, 1, 0.0, 0.0, 10, 1.0, ""};
    mem.append(r);
    CHECK(mem.contains("de/d10/f1/r0"));
    CHECK_THROWS_AS(mem.append(r), ConfigError);

    TempDir dir("foreign");
    auto p = small_plan(dir.str());
    p.runs = 1;
    execute(p);
    p.seed += 1;
    CHECK_THROWS_AS(execute(p), ConfigError);
}

TEST_CASE("results csv round-trips into the same result matrix")
{
    const auto p = small_plan();
    const auto store = execute(p);
    std::stringstream csv;
    write_results_csv(csv, store.records(), provenance(p));
    const auto back = read_results_csv(csv);
    REQUIRE(back.size() == store.records().size());

    const auto m1 = result_matrix(store.records(), 5, Aggregate::mean, {"de", "gsk", "eo"});
    const auto m2 = result_matrix(back, 5, Aggregate::mean, {"de", "gsk", "eo"});
    CHECK(m1.problems == m2.problems);
    CHECK(m1.algorithms == m2.algorithms);
    CHECK(m1.cells == m2.cells);

    const auto text = csv.str();
    CHECK(text.rfind("# suite-manifest fnv1a64=", 0) == 0);
    CHECK(text.find("\nalgo,func_index,dim,run,seed,final_error,evals,wall_ms,trace_path\n") != std::string::npos);
}

TEST_CASE("malformed results rows are reported by line number")
{
    std::istringstream bad_count("algo,func_index,dim,run,seed,final_error,evals,wall_ms,trace_path\n"
                                 "de,1,10,0,5,0.5,100,1.0,\n"
                                 "de,1,10\n");
    CHECK_THROWS_WITH_AS(read_results_csv(bad_count), doctest::Contains("row 3"), ConfigError);

    std::istringstream bad_number("# comment\n"
                                  "algo,func_index,dim,run,seed,final_error,evals,wall_ms,trace_path\n"
                                  "de,1,10,0,5,abc,100,1.0,\n");
    CHECK_THROWS_WITH_AS(read_results_csv(bad_number), doctest::Contains("row 3"), ConfigError);

    std::istringstream bad_header("a,b\n");
    CHECK_THROWS_WITH_AS(read_results_csv(bad_header), doctest::Contains("row 1"), ConfigError);
}

TEST_CASE("summaries match a recomputation from raw records")
{
    std::vector<RunRecord> recs;
    for (std::size_t r = 0; r < 31; ++r) recs.push_back({"de", 1, 10, r, r, 2.5, 2.5, 100, 0.0, ""});
    const std::vector<double> spread = {1.0, 4.0, 2.0, 8.0};
    for (std::size_t r = 0; r < spread.size(); ++r) recs.push_back({"eo", 1, 10, r, r, spread[r], spread[r], 100, 0.0, ""});

    const auto rows = summarize_records(recs);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].algo == "de");
    CHECK(rows[0].errors.stdev == 0.0);
    CHECK(rows[0].errors.mean == 2.5);

    const auto& s = rows[1].errors;
    CHECK(s.mean == doctest::Approx(3.75).epsilon(1e-12));
    CHECK(s.median == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(s.best == 1.0);
    CHECK(s.worst == 8.0);
    // sample variance: (7.5625 + 0.0625 + 3.0625 + 18.0625) / 3
    CHECK(s.stdev == doctest::Approx(std::sqrt(28.75 / 3.0)).epsilon(1e-12));

    std::stringstream out;
    write_summary_csv(out, rows);
    std::string line;
    std::getline(out, line);
    CHECK(line == "algo,func_index,dim,runs,mean,std,best,worst,median");
    std::getline(out, line);
    std::getline(out, line);
    std::vector<double> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(std::atof(cell.c_str()));
    REQUIRE(cells.size() == 9);
    CHECK(std::abs(cells[4] - s.mean) <= 1e-12);
    CHECK(std::abs(cells[5] - s.stdev) <= 1e-12);
    CHECK(std::abs(cells[8] - s.median) <= 1e-12);
}

TEST_CASE("median aggregation differs from the mean on skewed runs")
{
    std::vector<RunRecord> recs;
    const std::vector<double> a = {1, 1, 100}, b = {2, 2, 2};
    for (std::size_t r = 0; r < 3; ++r) {
        recs.push_back({"a", 1, 10, r, r, a[r], a[r], 1, 0, ""});
        recs.push_back({"b", 1, 10, r, r, b[r], b[r], 1, 0, ""});
    }
    CHECK(result_matrix(recs, 10, Aggregate::mean).cells[0] == std::vector<double>{34.0, 2.0});
    CHECK(result_matrix(recs, 10, Aggregate::median).cells[0] == std::vector<double>{1.0, 2.0});
    recs.pop_back();
    recs.pop_back();
    recs.pop_back();
    recs.push_back({"a", 2, 10, 0, 0, 1, 1, 1, 0, ""});
    CHECK_THROWS_AS(result_matrix(recs, 10), ConfigError);
}

TEST_CASE("exports are byte-identical across executions apart from wall time")
{
    TempDir a("det_a"), b("det_b");
    auto pa = small_plan(a.str());
    auto pb = small_plan(b.str());
    export_results(pa, execute(pa));
    ExecuteOptions par;
    par.parallelism = 3;
    export_results(pb, execute(pb, par));
    const auto ra = read_file(a.path / "results.csv");
    const auto rb = read_file(b.path / "results.csv");
    CHECK(!ra.empty());
    CHECK(without_wall_time(ra) == without_wall_time(rb));
    CHECK(read_file(a.path / "summary.csv") == read_file(b.path / "summary.csv"));
    CHECK(read_file(a.path / "plan_manifest.txt") == read_file(b.path / "plan_manifest.txt"));
}

TEST_CASE("stats report ranks and compares")
{
    std::vector<RunRecord> recs;
    for (std::size_t f = 1; f <= 6; ++f) {
        for (std::size_t r = 0; r < 2; ++r) {
            recs.push_back({"good", f, 10, r, 0, 1.0 * f, 0, 1, 0, ""});
            recs.push_back({"mid", f, 10, r, 0, 2.0 * f, 0, 1, 0, ""});
            recs.push_back({"bad", f, 10, r, 0, 3.0 * f, 0, 1, 0, ""});
        }
    }
    const auto text = stats_report(recs);
    CHECK(text.find("rank good 1.0000 (1)") != std::string::npos);
    CHECK(text.find("rank bad 3.0000 (3)") != std::string::npos);
    CHECK(text.find("rank_sum 6.000000") != std::string::npos);
    CHECK(text.find("wilcoxon good vs bad: R+=21.0, R-=0.0, n=6") != std::string::npos);
    CHECK_THROWS_WITH_AS(stats_report({}), doctest::Contains("no records"), ConfigError);
}

TEST_CASE("report bundle renders plots from a stored experiment")
{
    TempDir dir("report");
    auto p = small_plan(dir.str());
    p.functions = {1, 4};
    export_results(p, execute(p));
    const auto files = write_report(dir.str(), (dir.path / "report").string());
    auto has = [&](const std::string& name) { return std::find(files.begin(), files.end(), name) != files.end(); };
    CHECK(has("summary.csv"));
    CHECK(has("stats.txt"));
    CHECK(has("cd_d5.svg"));
    CHECK(has("convergence_d5_f4.svg"));
    CHECK(has("diversity_d5_f1.svg"));
    CHECK(has("tradeoff_d5_f1_gsk.svg"));
    CHECK(has("curves_d5_f1.csv"));

    const auto cd = read_file(dir.path / "report" / "cd_d5.svg");
    std::size_t ticks = 0;
    for (std::size_t pos = 0; (pos = cd.find("class=\"tick\"", pos)) != std::string::npos; ++pos) ++ticks;
    CHECK(ticks == 3);

    const auto curves = read_file(dir.path / "report" / "curves_d5_f1.csv");
    std::istringstream in(curves);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        std::vector<double> v;
        std::stringstream ss(line.substr(line.find(',') + 1));
        std::string cell;
        while (std::getline(ss, cell, ',')) v.push_back(std::atof(cell.c_str()));
        REQUIRE(v.size() == 5);
        CHECK(v[1] >= 0.0);
        CHECK(std::abs(v[3] + v[4] - 100.0) < 1e-9);
    }
}

TEST_CASE("report on an empty store says no records")
{
    TempDir dir("empty");
    fs::create_directories(dir.path);
    std::ofstream(dir.path / "results.csv") << "algo,func_index,dim,run,seed,final_error,evals,wall_ms,trace_path\n";
    CHECK_THROWS_WITH_AS(write_report(dir.str(), (dir.path / "r").string()), doctest::Contains("no records"),
                         ConfigError);
}

TEST_CASE("bias verdict needs significance and a nonshifted advantage")
{
    std::vector<double> ns(30), sh(30);
    for (std::size_t i = 0; i < 30; ++i) {
        ns[i] = 1.0;
        sh[i] = 2.0 + static_cast<double>(i);
    }
    const auto worse_shifted = bias_verdict("a", 10, ns, sh);
    CHECK(worse_shifted.r_plus == 465.0);
    CHECK(worse_shifted.r_minus == 0.0);
    CHECK(worse_shifted.biased);
    CHECK(worse_shifted.line() == "a: R+=465.0, R-=0.0, p=1.7344e-06, biased=yes");

    const auto better_shifted = bias_verdict("b", 10, sh, ns);
    CHECK(better_shifted.r_minus == 465.0);
    CHECK_FALSE(better_shifted.biased);

    const auto same = bias_verdict("c", 10, ns, ns);
    CHECK(same.insufficient);
    CHECK_FALSE(same.biased);
    CHECK(same.p_value == 1.0);
}

TEST_CASE("bias audit flags the origin magnet and tabulates ranks")
{
    BiasAuditConfig c;
    c.runs = 3;
    c.budget_multiplier = 100;
    c.algorithms = {AlgorithmEntry::custom("origin-magnet", [] { return algo::make_origin_magnet(); }),
                    AlgorithmEntry::custom("shift-invariant", [] { return algo::make_shift_invariant_search(); }),
                    AlgorithmEntry::registered("de")};
    const auto report = bias_audit(c);
    REQUIRE(report.verdicts.size() == 3);
    CHECK(report.verdicts[0].biased);
    CHECK(report.verdicts[0].p_value <= 0.05);
    CHECK(report.verdicts[0].r_plus > report.verdicts[0].r_minus);
    CHECK(report.verdicts[0].nonshifted.size() == 30);

    REQUIRE(report.columns.size() == 2);
    for (const auto& col : report.columns) {
        double sum = 0;
        for (double r : col.average_ranks) sum += r;
        CHECK(sum == doctest::Approx(6.0));
    }
    const auto table = report.rank_table();
    CHECK(table.find("nonshifted D10") != std::string::npos);
    CHECK(table.find("origin-magnet") != std::string::npos);
    CHECK(report.verdict_lines().find("origin-magnet: R+=") == 0);
}

TEST_CASE("bias audit rejects unpaired suites")
{
    BiasAuditConfig c;
    c.algorithms = {AlgorithmEntry::registered("de")};
    const auto ns = bench::make_suite(10, {1, 1, 1, 1}, false, 1);
    const auto other = bench::make_suite(10, {1, 1, 1, 1}, true, 2);
    CHECK_THROWS_AS(bias_audit(c, 10, ns, other), ConfigError);
}
