#include <doctest.h>

#include "hnls/errors.hpp"
#include "hnls/experiments.hpp"

using namespace hnls;
using namespace hnls::lab;
using nlohmann::json;

TEST_SUITE("experiments") {

TEST_CASE("config round trip materialises defaults") {
  const auto c = config_from_json(json::object());
  const auto doc = config_to_json(c);
  CHECK(config_to_json(config_from_json(doc)) == doc);
  CHECK(doc["grid"]["points"] == 512);
  CHECK(doc["seed"] == 1);
}

TEST_CASE("config rejects bad input") {
  CHECK_THROWS_AS(config_from_json(json{{"colour", 1}}), InvalidParameterError);
  CHECK_THROWS_AS(config_from_json(json{{"grid", {{"points", 100}}}}), InvalidParameterError);
  CHECK_THROWS_AS(config_from_json(json{{"equation", {{"b", 0.0}}}}), InvalidParameterError);
  CHECK_THROWS_AS(config_from_json(json{{"suites", {"traces", "bogus"}}}), InvalidParameterError);
}

TEST_CASE("rows and csv") {
  const auto ok = make_row("x", "q", {0.5, kUnset, 1.0, kUnset, 2.0}, 1e-13, 1e-12);
  const auto bad = make_row("x", "q", {}, 2.0, 1.0);
  CHECK(ok.pass);
  CHECK(!bad.pass);
  CHECK(!make_row("x", "q", {}, NAN, 1.0).pass);
  const auto csv = to_csv({ok, make_row("x", "info", {}, 3.0, kInfo)});
  CHECK(csv.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
  CHECK(csv.find("x,q,0.5,,1,,2,1e-13,9.9999999999999998e-13,1\n") !=
        std::string::npos);
  CHECK(csv.find("x,info,,,,,,3,inf,1\n") != std::string::npos);
}

TEST_CASE("a forced tolerance fails the traces suite") {
  auto c = config_from_json(json{{"suites", {"traces"}}});
  CHECK(run_verify(c).all_pass());
  c.tolerance_scale = 1e-30;
  CHECK(!run_verify(c).all_pass());
}

TEST_CASE("zero data simulates to constant monitors") {
  auto c = config_from_json(json{{"grid", {{"points", 128}}},
                                 {"field", {{"amplitude", 0.0}}},
                                 {"time", {{"horizon", 0.1}}}});
  const auto out = run_simulate(c);
  CHECK(!out.aborted);
  CHECK(out.all_pass());
  for (const auto& r : out.rows)
    if (r.quantity == "mass_drift" || r.quantity == "alpha_drift") CHECK(r.value == 0.0);
}

TEST_CASE("alpha at n = 0 agrees across commands") {
  const auto c = config_from_json(json{{"grid", {{"points", 256}, {"length_over_pi", 32}}},
                                       {"field", {{"width", 3.0}}},
                                       {"time", {{"horizon", 0.2}, {"snapshots", 2}}},
                                       {"n_range", {-1, 1}},
                                       {"p", {4}}});
  const auto sim = run_simulate(c);
  const auto scan = run_alpha_scan(c);
  int matched = 0;
  for (const auto& a : sim.rows) {
    if (a.quantity != "alpha") continue;
    for (const auto& b : scan.rows)
      if (b.quantity == "alpha" && b.n == 0.0 && b.t == a.t && b.k == a.k) {
        CHECK(std::abs(a.value - b.value) <= 1e-12 * std::abs(a.value));
        ++matched;
      }
  }
  CHECK(matched == 6);
}

TEST_CASE("chain constants") {
  const auto cc = chain_constants(SpatialGrid(256, 32 * kPi), 1.0, 4.0);
  CHECK(cc.hs > 0.0);
  CHECK(cc.m_k == 1.0);
  CHECK(cc.quad_lower <= cc.quad_upper);
  CHECK(cc.young_w == doctest::Approx(kPi * kPi - 7));
}

}
