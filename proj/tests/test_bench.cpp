#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "wakeup/experiment.hpp"

using namespace wakeup;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

std::filesystem::path scratch(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("wakeup_bench_" + name);
}

}  // namespace

TEST_CASE("tree experiment, n in {2,4,8}, round robin") {
    ExperimentSpec spec;
    spec.solver.kind = SolverKind::Tree;
    spec.ns = {8, 2, 4};
    ExperimentResult r = run_experiment(spec);
    REQUIRE(r.passed());
    REQUIRE(r.rows.size() == 3);
    CHECK(r.rows[0].n == 2);
    CHECK(r.rows[1].n == 4);
    CHECK(r.rows[2].n == 8);
    for (const auto& row : r.rows) {
        CHECK(row.ratio_linear <= 6.0);
        CHECK(row.total_work <= 2 * (3 * row.n - 1));
        CHECK(row.lower_bound == lower_bound_value(easy_params(row.n)));
    }
    CHECK(r.runs == 3);
}

TEST_CASE("counter experiment: ratio band") {
    ExperimentSpec spec;
    spec.solver.kind = SolverKind::Counter;
    for (std::size_t n = 4; n <= 1024; n *= 2) spec.ns.push_back(n);
    spec.battery = ScheduleBattery::standard(3);
    ExperimentResult r = run_experiment(spec);
    REQUIRE(r.passed());
    for (const auto& row : r.rows) {
        CHECK(row.ratio_nlogn >= 6.0);
        CHECK(row.ratio_nlogn <= 9.0);
        CHECK(row.total_work == row.n * row.per_proc_max);
    }
}

TEST_CASE("experiment validation") {
    ExperimentSpec spec;
    spec.solver.kind = SolverKind::Tree;
    spec.ns = {3};
    CHECK_THROWS_AS(run_experiment(spec), std::invalid_argument);
    spec.ns = {};
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.ns = {4};
    spec.epochs = 2;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.solver.kind = SolverKind::Fai;
    CHECK_NOTHROW(spec.validate());
    spec.battery.round_robin = false;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("experiment results do not depend on worker count") {
    ExperimentSpec spec;
    spec.solver.kind = SolverKind::Fai;
    spec.ns = {2, 3, 5, 8, 13};
    spec.battery = ScheduleBattery::standard(20);
    spec.epochs = 2;
    const auto one = run_experiment(spec, 1);
    const auto many = run_experiment(spec, 4);
    REQUIRE(one.passed());
    CHECK(one.rows == many.rows);
    CHECK(to_csv(one.rows) == to_csv(many.rows));
    CHECK(one.runs == 5 * 21);
}

TEST_CASE("experiment failure carries the trace") {
    ExperimentSpec spec;
    spec.solver.kind = SolverKind::Tree;
    spec.ns = {4};
    spec.claim = hard_params(4);  // the tree solver only solves the easy problem
    spec.battery = ScheduleBattery::standard(5);
    ExperimentResult r = run_experiment(spec);
    REQUIRE_FALSE(r.passed());
    CHECK(r.failure->n == 4);
    CHECK_FALSE(r.failure->verdict.nontriviality_ok);
    CHECK_FALSE(r.failure->trace.events.empty());
    CHECK_FALSE(check_trace(hard_params(4), r.failure->trace).passed());
    CHECK(r.rows.empty());

    spec.claim = hard_params(8);
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("csv output") {
    SUBCASE("empty rows give a header-only file") {
        const auto path = scratch("empty.csv");
        emit_csv({}, path);
        CHECK(slurp(path) == "n,total_work,per_proc_max,lower_bound,ratio_linear,ratio_nlogn\n");
    }
    SUBCASE("one hand-built row") {
        const auto path = scratch("one.csv");
        emit_csv({make_row(2, 9, 5, 3)}, path);
        CHECK(slurp(path) == "n,total_work,per_proc_max,lower_bound,ratio_linear,ratio_nlogn\n2,9,5,3,4.5,4.5\n");
    }
    SUBCASE("same rows twice are byte-identical") {
        std::vector<ScalingRow> rows{make_row(1, 2, 2, 1), make_row(3, 50, 20, 6), make_row(1024, 81920, 80, 9228)};
        emit_csv(rows, scratch("a.csv"));
        emit_csv(rows, scratch("b.csv"));
        CHECK(slurp(scratch("a.csv")) == slurp(scratch("b.csv")));
    }
    SUBCASE("round trip, including n=1 and awkward ratios") {
        std::vector<ScalingRow> rows{make_row(1, 2, 2, 1), make_row(3, 50, 20, 6), make_row(7, 100, 17, 12)};
        CHECK(std::isinf(rows[0].ratio_nlogn));
        CHECK(parse_csv(to_csv(rows)) == rows);
    }
    SUBCASE("unwritable path names the path") {
        const std::filesystem::path bad = "/nonexistent-dir/sub/out.csv";
        try {
            emit_csv({}, bad);
            FAIL("expected an error");
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()).find(bad.string()) != std::string::npos);
        }
    }
    SUBCASE("malformed input") {
        CHECK_THROWS(parse_csv("n,total\n"));
        CHECK_THROWS(parse_csv(to_csv({}) + "1,2,3\n"));
        CHECK_THROWS(parse_csv(to_csv({}) + "1,2,3,4,x,6\n"));
    }
}
