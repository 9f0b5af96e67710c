#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "edgebulk/config.hpp"
#include "edgebulk/errors.hpp"
#include "edgebulk/report.hpp"
#include "edgebulk/stats.hpp"

using namespace eb;

TEST_CASE("Kolmogorov-Smirnov distances") {
  const std::vector<double> a{0.1, 0.5, 0.9, 1.3};
  CHECK(ks_statistic(a, a) == 0.0);
  CHECK(ks_statistic(std::vector<double>{0.0}, [](double x) { return std::clamp(x, 0.0, 1.0); }) == 1.0);
  CHECK(ks_statistic(std::vector<double>{1, 2, 3}, std::vector<double>{4, 5, 6}) == 1.0);
  CHECK(ks_statistic(std::vector<double>{1, 3}, std::vector<double>{2, 4}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(ks_statistic(std::vector<double>{}, a), DomainError);
  CHECK_THROWS_AS(ks_statistic(std::vector<double>{}, [](double) { return 0.0; }), DomainError);
  CHECK(ks_critical_value(100, 0.05) == doctest::Approx(0.13581).epsilon(1e-4));
}

TEST_CASE("quantiles and moments") {
  const std::vector<double> v{4, 1, 3, 2};
  CHECK(median(v) == doctest::Approx(2.5));
  CHECK(quantile(v, 0.0) == 1.0);
  CHECK(quantile(v, 1.0) == 4.0);
  CHECK(quantile(v, 0.25) == doctest::Approx(1.75));
  CHECK(mean(v) == doctest::Approx(2.5));
  CHECK(variance(v) == doctest::Approx(5.0 / 3.0));
  CHECK(quantile({1.0, INFINITY}, 0.0) == 1.0);
  CHECK(std::isinf(quantile({1.0, INFINITY, INFINITY}, 0.5)));
}

TEST_CASE("slopes") {
  CHECK(ls_slope({0, 1, 2, 3}, {1, 3, 5, 7}) == doctest::Approx(2.0));
  CHECK(log_log_slope({1, 10, 100}, {1, 0.1, 0.01}) == doctest::Approx(-1.0));
}

TEST_CASE("gamma cdf against the shape-2 closed form") {
  for (double x : {0.1, 1.0, 2.5, 7.0}) {
    CHECK(gamma_cdf(x, 2.0, 1.0) == doctest::Approx(1 - std::exp(-x) * (1 + x)).epsilon(1e-12));
    CHECK(gamma_cdf(x, 1.0, 2.0) == doctest::Approx(1 - std::exp(-x / 2)).epsilon(1e-12));
  }
  CHECK(gamma_cdf(-1.0, 2.0, 1.0) == 0.0);
}

TEST_CASE("set distances and gaps") {
  CHECK(strictly_decreasing({3, 2, 1}));
  CHECK_FALSE(strictly_decreasing({3, 3, 1}));
  CHECK(hausdorff_distance({0, 1, 2}, {0, 1, 2}) == 0.0);
  CHECK(hausdorff_distance({0, 1}, {0, 1.5}) == doctest::Approx(0.5));
  CHECK(hausdorff_distance({}, {}) == 0.0);
  CHECK(std::isinf(hausdorff_distance({1.0}, {})));
  const auto g = nearest_neighbor_gaps({-3, -1, 0, 4, 9}, -2, 5);
  // Points -1, 0 and 4 lie in the window; their nearest neighbours may lie outside.
  CHECK(g == std::vector<double>{1, 1, 4});
}

TEST_CASE("configuration parsing") {
  const ExperimentConfig cfg = parse_config(
      "# comment\n"
      "beta = 4\n"
      "a=1\n"
      "E_list=1e2, 1e3\n"
      "z_grid=0:1;1:2\n"
      "paths=7\n");
  CHECK(cfg.params.beta == 4.0);
  CHECK(cfg.params.a == 1.0);
  CHECK(cfg.E_list == std::vector<double>{100.0, 1000.0});
  CHECK(cfg.z_grid == std::vector<cplx>{{0, 1}, {1, 2}});
  CHECK(cfg.paths == 7);
  CHECK_THROWS_AS(parse_config("betta=4\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("beta\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("paths=-3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("E_list=1e3,1e2\n").validate(), ConfigError);
  CHECK_THROWS_AS(parse_config("z_grid=1:-1\n").validate(), ConfigError);
  CHECK_THROWS_AS(parse_config("T=5\n").validate(), ConfigError);
  CHECK(parse_config("beta=inf\n").params.beta == INFINITY);
}

TEST_CASE("canonical form round trips and fixes the hash") {
  ExperimentConfig cfg;
  cfg.params = {4, 0.5};
  cfg.E_list = {1e2, 1e4};
  cfg.phase_cap = 0.03;
  const ExperimentConfig back = parse_config(cfg.canonical());
  CHECK(back.canonical() == cfg.canonical());
  CHECK(back.hash() == cfg.hash());
  CHECK(cfg.hash().size() == 16);
  ExperimentConfig other = cfg;
  other.seed += 1;
  CHECK(other.hash() != cfg.hash());
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
}

TEST_CASE("default step follows the phase cap") {
  ExperimentConfig cfg;
  cfg.phase_cap = 0.05;
  CHECK(cfg.effective_max_step() == doctest::Approx(0.001));
  cfg.max_step = 0.01;
  CHECK(cfg.effective_max_step() == 0.01);
}

TEST_CASE("reports") {
  StatsReport r;
  r.command = "demo";
  r.config_hash = "00ff";
  r.add_summary(100, "x", {1, 2, 3, 4, 5});
  r.add(0, "x", "median_strictly_decreasing", 1.0, true);
  CHECK(r.value(100, "x", "median") == 3.0);
  CHECK(r.value(100, "x", "p05") == doctest::Approx(1.2));
  CHECK_THROWS(r.value(100, "y", "median"));
  CHECK(r.checks() == 1);
  CHECK(r.all_pass());
  r.add(0, "z", "bound", 0.1, false);
  CHECK_FALSE(r.all_pass());
  const std::string csv = r.csv();
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);
  CHECK(line == "config_hash,E,statistic,quantile,value,pass");
  std::getline(is, line);
  CHECK(line == "00ff,100,x,median,3,");
  CHECK(csv.find("00ff,0,z,bound,0.10000000000000001,0\n") != std::string::npos);
  CHECK(r.to_json()["rows"].size() == r.rows.size());

  const auto dir = std::filesystem::temp_directory_path() / "edgebulk_report_test";
  r.write(dir.string());
  std::ifstream in(dir / "report.csv");
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == csv);
  std::filesystem::remove_all(dir);
}
