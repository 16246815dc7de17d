#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "mortar/error.hpp"
#include "mortar/experiment.hpp"

using namespace mortar;

namespace {

const char* kSmall = R"({
  "dim": 2, "cells": [4, 4], "refinements": 1, "order": 2, "trace_order": 1, "block": [2, 2],
  "coefficient": {"pattern": "checkerboard", "k": 2, "contrast": 10}
})";

}  // namespace

TEST_CASE("configuration defaults") {
  const RunConfig c = parse_run_config("{}");
  CHECK(c.dim == 3);
  CHECK(c.cells == std::array<int, 3>{4, 4, 4});
  CHECK(c.orders == std::vector<int>{2, 3, 4, 5});
  CHECK_FALSE(c.trace_order.has_value());
  CHECK(c.trace_order_for(1) == 0);
  CHECK(c.trace_order_for(4) == 3);
  CHECK(c.solver.mode == AuxMode::Multiplicative);
  CHECK(c.solver.schur.kind == SchurKind::Exact);
  CHECK(c.solver.pcg.tol == 1e-8);
  CHECK(c.solver.pcg.max_it == 500);
  CHECK(c.max_dofs == 300000);
  CHECK_FALSE(c.csv_timing);
  CHECK_NOTHROW(validate_run_config(c));
}

TEST_CASE("parsing keys and values") {
  const RunConfig c = parse_run_config(kSmall);
  CHECK(c.dim == 2);
  CHECK(c.cells == std::array<int, 3>{4, 4, 1});
  CHECK(c.trace_order == 1);
  CHECK(c.coefficient.pattern == "checkerboard");
  const ProblemSpec level1 = c.problem(1, 2);
  CHECK(level1.cells == std::array<int, 3>{8, 8, 1});
  CHECK(level1.block == std::array<int, 3>{2, 2, 1});
  CHECK(parse_run_config(R"({"trace_order": "p-1"})").trace_order_for(3) == 2);

  CHECK_THROWS_AS(parse_run_config(R"({"cells": [4, 4], "colour": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"({"smoother": {"nu": 2, "sweeps": 3}})"), ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"({"preconditioner": "both"})"), ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"({"dim": "two"})"), ConfigError);
  CHECK_THROWS_AS(parse_run_config("[1, 2]"), ConfigError);
  CHECK_THROWS_AS(parse_run_config("{"), ConfigError);
  CHECK_THROWS_AS(load_run_config("/nonexistent/config.json"), IoError);
}

TEST_CASE("validation") {
  auto invalid = [](const std::string& json) { return parse_run_config(json); };
  CHECK_THROWS_AS(validate_run_config(invalid(R"({"dim": 4})")), ConfigError);
  CHECK_THROWS_AS(validate_run_config(invalid(R"({"cells": [5, 4, 4]})")), ConfigError);
  CHECK_THROWS_AS(validate_run_config(invalid(R"({"order": 0})")), ConfigError);
  CHECK_THROWS_AS(validate_run_config(invalid(R"({"coefficient": {"pattern": "spiral"}})")), ConfigError);
  CHECK_THROWS_AS(validate_run_config(invalid(R"({"coefficient": {"contrast": -1}})")), ConfigError);
  CHECK_THROWS_AS(validate_run_config(invalid(R"({"schur": {"iterations": 0}})")), ConfigError);
  CHECK_THROWS_AS(validate_run_config(invalid(R"({"study": "order", "orders": []})")), ConfigError);
  // one fine cell per Element leaves a single free dof per Face at p = 1
  CHECK_THROWS_AS(validate_run_config(invalid(R"({"dim": 2, "cells": [4, 4], "block": [1, 1], "trace_order": 1})")),
                  ConfigError);
  CHECK_THROWS_AS(validate_run_config(invalid(R"({"cells": [16, 16, 16], "refinements": 3, "max_dofs": 100000})")),
                  ConfigError);
}

TEST_CASE("CSV round trip") {
  std::vector<ReportRow> rows(2);
  rows[0] = {0, 81, 24, 1.2345678901234567, 1.0, 1.2345678901234567, 7, 0.1234, 3.14159, 0.5};
  rows[1] = {1, 289, 56, 1.1, 1.0, 1.1, 8, 0.2, 2.5, 1.25};
  std::stringstream timed;
  write_csv(timed, rows, true);
  CHECK(read_csv(timed) == rows);

  std::stringstream untimed;
  write_csv(untimed, rows, false);
  const auto back = read_csv(untimed);
  REQUIRE(back.size() == 2);
  CHECK(back[1].seconds == 0.0);
  CHECK(back[1].lmax == rows[1].lmax);

  std::stringstream empty;
  write_csv(empty, {}, false);
  CHECK(empty.str() == std::string(kCsvHeader) + "\n");
  CHECK(read_csv(empty).empty());
}

TEST_CASE("table headers") {
  RunConfig c = parse_run_config(kSmall);
  std::ostringstream refinement;
  write_table(refinement, {}, c);
  CHECK(refinement.str().find("Refs |    # dofs |  # Bdofs |  OC_m | n_it") != std::string::npos);
  c.study = StudyKind::Order;
  std::ostringstream order;
  write_table(order, {}, c);
  CHECK(order.str().find(" p |  q |") != std::string::npos);
}

TEST_CASE("studies are deterministic") {
  const RunConfig c = parse_run_config(kSmall);
  bool converged = false;
  const auto first = run_refinement_study(c, &converged);
  CHECK(converged);
  REQUIRE(first.size() == 2);
  CHECK(first[0].dofs == 81);
  CHECK(first[1].dofs == 289);
  auto second = run_refinement_study(c);
  auto untimed = first;
  for (auto* rows : {&untimed, &second})
    for (auto& r : *rows) r.seconds = 0.0;
  CHECK(untimed == second);
  std::ostringstream a, b;
  write_csv(a, first, false);
  write_csv(b, second, false);
  CHECK(a.str() == b.str());
}

TEST_CASE("degenerate studies") {
  const RunConfig one = parse_run_config(R"({"dim": 2, "cells": [4, 4], "order": 2, "block": [4, 4]})");
  const auto rows = run_refinement_study(one);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].bdofs == 0);
  CHECK(rows[0].oc_m == 1.0);
  CHECK(rows[0].n_it == 1);

  const RunConfig order = parse_run_config(R"({"dim": 2, "cells": [4, 4], "block": [2, 2], "study": "order", "orders": [1]})");
  CHECK(order.trace_order_for(1) == 0);
  const auto single = run_order_study(order);
  REQUIRE(single.size() == 1);
  CHECK(single[0].level == 1);
  CHECK(single[0].bdofs == 4);
}
