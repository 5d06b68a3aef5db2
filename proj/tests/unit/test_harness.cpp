#include "doctest.h"

#include "errors.hpp"
#include "harness.hpp"

#include <iostream>
#include <sstream>

using namespace secd2d;

namespace {

Settings desk() {
    Settings s;
    s.net = desk_defaults();
    return s;
}

std::string csv_of(const ResultTable& t) {
    std::ostringstream os;
    write_csv(t, os);
    return os.str();
}

} // namespace

TEST_CASE("sweep specs cover the documented grids") {
    const ExperimentSpec q = qos_sweep_spec(desk(), 1, 1);
    REQUIRE(q.points.size() == 11);
    CHECK(q.points.front().value == 0.0);
    CHECK(q.points.back().value == doctest::Approx(0.2));
    const ExperimentSpec p = power_sweep_spec(desk(), 1, 1);
    REQUIRE(p.points.size() == 12);
    CHECK(p.points.front().value == 14.0);
    CHECK(p.points.back().value == 36.0);
    const ExperimentSpec l = lue_sweep_spec(desk(), 1, 1);
    CHECK(l.points.size() == 24);
    CHECK(compare_spec(desk(), 1, 1).schemes.size() == 5);
}

TEST_CASE("CSV round trip is byte-identical") {
    ExperimentSpec spec = compare_spec(desk(), 2, 3);
    spec.threads = 1;
    const ResultTable t = run_experiment(spec);
    // 5 schemes x (2 snapshots + mean + stderr)
    CHECK(t.rows.size() == 20);
    const std::string a = csv_of(t);
    CHECK(a.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
    std::istringstream in(a);
    const ResultTable back = parse_csv(in);
    CHECK(back.rows.size() == t.rows.size());
    CHECK(csv_of(back) == a);
}

TEST_CASE("results do not depend on repetition or thread count") {
    ExperimentSpec spec = qos_sweep_spec(desk(), 2, 9);
    spec.points.resize(3);
    spec.threads = 1;
    const std::string one = csv_of(run_experiment(spec));
    CHECK(csv_of(run_experiment(spec)) == one);
    spec.threads = 3;
    CHECK(csv_of(run_experiment(spec)) == one);
}

TEST_CASE("wall time stays zero unless requested") {
    ExperimentSpec spec = convergence_spec(desk(), 1, 1);
    spec.threads = 1;
    for (const auto& r : run_experiment(spec).rows) CHECK(r.wall_ms == 0.0);
}

TEST_CASE("aggregate rows and cell means") {
    ExperimentSpec spec = convergence_spec(desk(), 3, 4);
    spec.threads = 1;
    const ResultTable t = run_experiment(spec);
    REQUIRE(t.rows.size() == 5);
    double sum = 0.0;
    for (int i = 0; i < 3; ++i) sum += t.rows[i].total_secrecy_bps;
    CHECK(t.rows[3].seed == "mean");
    CHECK(t.rows[4].seed == "stderr");
    CHECK(t.rows[3].total_secrecy_bps == doctest::Approx(sum / 3));
    CHECK(cell_mean(t, t.rows[0].scheme, t.rows[0].sweep_param, t.rows[0].sweep_value,
                    &SnapshotResult::total_secrecy_bps) == doctest::Approx(sum / 3));
}

TEST_CASE("trace output") {
    ExperimentSpec spec = convergence_spec(desk(), 1, 2);
    spec.threads = 1;
    spec.trace = true;
    const ResultTable t = run_experiment(spec);
    CHECK_FALSE(t.trace_lines.empty());
    std::ostringstream os;
    write_trace(t, os);
    CHECK(os.str().rfind(std::string(kTraceHeader) + "\n", 0) == 0);
}

TEST_CASE("spec and CSV validation") {
    ExperimentSpec spec = compare_spec(desk(), 1, 1);
    spec.snapshots = 0;
    CHECK_THROWS_AS(run_experiment(spec), ConfigError);
    spec = compare_spec(desk(), 1, 1);
    spec.schemes.clear();
    CHECK_THROWS_AS(run_experiment(spec), ConfigError);
    spec = qos_sweep_spec(desk(), 1, 1);
    std::swap(spec.points[0], spec.points[1]);
    CHECK_THROWS_AS(run_experiment(spec), ConfigError);
    spec = qos_sweep_spec(desk(), 1, 1);
    spec.points[0].overrides.push_back({"no_such_key", "1"});
    CHECK_THROWS_AS(run_experiment(spec), ConfigError);

    std::istringstream bad_header("a,b\n");
    CHECK_THROWS_AS(parse_csv(bad_header), IoError);
    std::istringstream short_row(std::string(kCsvHeader) + "\nproposed,none,0\n");
    CHECK_THROWS_AS(parse_csv(short_row), IoError);
    CHECK_THROWS_AS(write_csv(ResultTable{}, std::cout), IoError);
    CHECK_THROWS_AS(read_csv("/nonexistent/file.csv"), IoError);
}
