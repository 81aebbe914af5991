#include <doctest.h>

#include <cmath>
#include <limits>

#include "fracgrad/config.hpp"
#include "fracgrad/experiments.hpp"
#include "fracgrad/sweep_table.hpp"

using namespace fracgrad;
namespace cfg = fracgrad::config;

TEST_CASE("CSV output") {
  SweepTable t({"name", "x", "k"});
  t.add_provenance("tool", "fracgrad");
  t.add_row({std::string("a"), 0.1, std::int64_t{3}});
  t.add_row({std::string("b"), 1e-300, std::int64_t{-1}});
  t.add_row({std::string("c"), std::numeric_limits<double>::quiet_NaN(), std::int64_t{0}});
  CHECK(t.to_csv() == "# tool: fracgrad\nname,x,k\na,0.1,3\nb,1e-300,-1\nc,nan,0\n");
  CHECK(t.number(0, "x") == 0.1);
  CHECK(t.number(0, "k") == 3.0);
  CHECK(t.text(1, "name") == "b");
  CHECK_THROWS_AS(t.add_row({0.0}), RangeError);
  CHECK_THROWS_AS(t.number(0, "missing"), RangeError);
  CHECK_THROWS_AS(t.number(0, "name"), RangeError);
  SweepTable u({"name", "x", "k"});
  u.add_row({std::string("d"), 2.0, std::int64_t{1}});
  t.append(u);
  CHECK(t.size() == 4);
  CHECK_THROWS_AS(t.append(SweepTable({"other"})), RangeError);
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 6.02214076e23, 0.0}) {
    CHECK(std::stod(format_number(v)) == v);
  }
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("ranges and lists") {
  const auto r = experiments::parse_range("0.5:0.999:10");
  REQUIRE(r.size() == 10);
  CHECK(r.front() == 0.5);
  CHECK(r.back() == 0.999);
  CHECK(experiments::parse_range("0.3:0.3:1") == std::vector<double>{0.3});
  CHECK(experiments::parse_list("0.5,0.7,0.99") == std::vector<double>{0.5, 0.7, 0.99});
  CHECK_THROWS_AS(experiments::parse_range("0.5:0.9"), RangeError);
  CHECK_THROWS_AS(experiments::parse_range("0.5:0.9:2.5"), RangeError);
  CHECK_THROWS_AS(experiments::parse_list("0.5,abc"), RangeError);
}

TEST_CASE("constants table") {
  const SweepTable t = experiments::constants_table(2, experiments::parse_range("0.5:0.999:10"));
  CHECK(t.size() == 10);
  CHECK(t.columns() == std::vector<std::string>{"n", "s", "c_ns", "c_ns_over_1ms", "gamma_1ms"});
}

TEST_CASE("config parsing errors") {
  CHECK_THROWS_AS(cfg::parse_json("{not json"), ConfigError);
  CHECK_THROWS_AS(cfg::load_json("/nonexistent/config.json"), ConfigError);
  CHECK_THROWS_AS(cfg::parse_scalar_spec(cfg::parse_json(R"({"type": "triangle"})")), ConfigError);
  CHECK_THROWS_AS(cfg::parse_scalar_spec(cfg::parse_json(R"({"type": "bump", "radius": "big"})")), ConfigError);
  CHECK_THROWS_AS(cfg::parse_density(cfg::parse_json(R"({"kind": "cubic"})")), ConfigError);
  CHECK_THROWS_AS(cfg::parse_s_grid(cfg::parse_json(R"([0.5, "global"])")), ConfigError);
  CHECK_THROWS_AS(cfg::parse_s_grid(cfg::parse_json(R"([0.5, 1.5])")), RangeError);
  CHECK_THROWS_AS(cfg::parse_gamma_config(cfg::parse_json("[1, 2]")), ConfigError);
  CHECK_THROWS_AS(cfg::parse_gamma_config(cfg::parse_json(R"({"W": {"kind": "quadratic"}, "omega": {"type": "full"},
                                                               "s_grid": [0.5], "preconditioner": "jacobi"})")),
                  ConfigError);
}

TEST_CASE("config parsing") {
  const Grid g = cfg::parse_grid(cfg::parse_json(R"({"N": 32})"), Grid{2, 16.0, 128});
  CHECK(g == Grid{2, 16.0, 32});
  const auto s = cfg::parse_s_grid(cfg::parse_json(R"(["local", 0.9])"));
  REQUIRE(s.size() == 2);
  CHECK(!s[0]);
  CHECK(*s[1] == 0.9);
  const auto spec = cfg::parse_scalar_spec(cfg::parse_json(R"({"type": "mode", "k": [1, -2]})"));
  CHECK(std::get<ModeSpec>(spec).k == std::vector<int>{1, -2});
  const auto dom = cfg::parse_domain(cfg::parse_json(R"({"type": "ball", "r": 4.0})"), g);
  CHECK(dom.count() > 0);

  const auto gc = cfg::parse_gamma_config(cfg::load_json(FRACGRAD_SOURCE_DIR "/configs/gamma_quadratic.json"));
  CHECK(gc.grid == Grid{1, 16.0, 256});
  CHECK(gc.s_grid.size() == 4);
  CHECK(gc.options.tol == 1e-7);
  const auto prob = cfg::build_problem(gc);
  CHECK(!prob.s);
  CHECK(prob.W.kind() == variational::DensityKind::quadratic);

  const auto ic = cfg::parse_inequality_config(cfg::load_json(FRACGRAD_SOURCE_DIR "/configs/inequalities.json"));
  CHECK(ic.specs.size() == 3);
  CHECK(ic.s_bar == 0.3);

  // Key order does not change the digest.
  CHECK(cfg::config_hash(cfg::parse_json(R"({"a": 1, "b": 2})")) ==
        cfg::config_hash(cfg::parse_json(R"({"b": 2, "a": 1})")));
}
