#include <doctest.h>

#include <sstream>

#include "cutsurf/errors.hpp"
#include "cutsurf/experiments.hpp"

using namespace cutsurf;

TEST_CASE("config text: overrides, comments and line-numbered errors") {
  ExperimentConfig c = default_config("4.2");
  std::istringstream good("# shallow water\nN = 40, 80\nnu = 0.5  # weaker viscosity\n\ntimes = 1,2\n");
  apply_config_text(c, good, "run.cfg");
  CHECK(c.n_values == std::vector<int>{40, 80});
  CHECK(c.nu == 0.5);
  CHECK(c.times == std::vector<double>{1.0, 2.0});

  std::istringstream bad("N = 40\n\nstepper = rk4\n");
  try {
    apply_config_text(c, bad, "run.cfg");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).rfind("run.cfg:3:", 0) == 0);
  }
  std::istringstream no_eq("N 40\n");
  CHECK_THROWS_AS(apply_config_text(c, no_eq), ConfigError);
  CHECK_THROWS_AS(apply_config_value(c, "N", "41"), ConfigError);
  CHECK_THROWS_AS(apply_config_value(c, "surface", "torus"), ConfigError);
  CHECK_THROWS_AS(apply_config_value(c, "colour", "red"), ConfigError);
  CHECK_THROWS_AS(default_config("9.9"), ConfigError);
}

TEST_CASE("a single grid size produces no order rows") {
  ExperimentConfig c = default_config("quad");
  apply_config_value(c, "N", "40");
  for (const auto& r : run_table(c)) CHECK(r.metric.rfind("order:", 0) != 0);
}

TEST_CASE("doubling grids produce observed orders and CSV output is deterministic") {
  ExperimentConfig c = default_config("quad");
  apply_config_value(c, "N", "20,40");
  const auto rows = run_table(c);
  bool has_order = false;
  for (const auto& r : rows) has_order = has_order || r.metric == "order:area_rel_error";
  CHECK(has_order);
  std::ostringstream a, b;
  write_csv(a, rows);
  write_csv(b, run_table(c));
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("experiment,N,time,metric,value\n", 0) == 0);
  std::ostringstream table;
  print_table(table, rows);
  CHECK(table.str().find("area_rel_error") != std::string::npos);
}

TEST_CASE("parallel runs reproduce serial results") {
  ExperimentConfig c = default_config("poisson");
  apply_config_value(c, "N", "20,40");
  const auto serial = run_table(c);
  c.jobs = 2;
  const auto parallel = run_table(c);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].metric == parallel[i].metric);
    CHECK(serial[i].value == parallel[i].value);
  }
}

TEST_CASE("default diffusion steps divide the unit final time") {
  CHECK(step_count(1.0, diffusion_time_step(Stepper::fe, SurfaceKind::sphere, 80)) == 800);
  CHECK(step_count(1.0, diffusion_time_step(Stepper::bdf2, SurfaceKind::sphere, 80)) == 160);
  CHECK(step_count(1.0, diffusion_time_step(Stepper::bdf2, SurfaceKind::ellipsoid, 80)) == 800);
}
