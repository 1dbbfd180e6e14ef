#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <string>

#include "json.hpp"

#include "fpplab.h"
#include "fpplab/lattice.hpp"
#include "fpplab/passage.hpp"
#include "fpplab/weights.hpp"

using namespace fpplab;
using nlohmann::json;

namespace {

fpp_weights* make_weights(const char* dist_json, uint64_t seed) {
  fpp_weights* w = nullptr;
  REQUIRE(fpp_weights_create(dist_json, seed, &w) == FPP_OK);
  REQUIRE(w != nullptr);
  return w;
}

}  // namespace

TEST_CASE("version string") {
  CHECK(std::string(fpp_version()) == "1.0.0");
  CHECK(fpp_last_error() != nullptr);
}

TEST_CASE("edge weights match the core environment") {
  fpp_weights* w = make_weights(R"({"family":"exponential","params":{"rate":1.0}})", 7);
  const WeightConfig core(DistributionSpec::exponential(1.0), 7);
  for (int64_t x = -3; x <= 3; ++x) {
    for (int64_t y = -3; y <= 3; ++y) {
      for (int32_t axis = 0; axis < 2; ++axis) {
        const int64_t base[2] = {x, y};
        double got = -1.0;
        REQUIRE(fpp_edge_weight(w, base, 2, axis, &got) == FPP_OK);
        const Coord cb[2] = {x, y};
        CHECK(got == core.weight_at(cb, axis));
      }
    }
  }
  const int64_t base[2] = {0, 0};
  double out = 0.0;
  CHECK(fpp_edge_weight(w, base, 2, 2, &out) == FPP_ERR_INVALID);
  CHECK(fpp_edge_weight(nullptr, base, 2, 0, &out) == FPP_ERR_INVALID);
  CHECK(fpp_edge_weight(w, nullptr, 2, 0, &out) == FPP_ERR_INVALID);
  fpp_weights_destroy(w);
}

TEST_CASE("weights creation rejects malformed specs") {
  fpp_weights* w = nullptr;
  CHECK(fpp_weights_create("not json", 1, &w) == FPP_ERR_CONFIG);
  CHECK(w == nullptr);
  CHECK(std::strlen(fpp_last_error()) > 0);
  CHECK(fpp_weights_create(R"({"family":"cauchy"})", 1, &w) == FPP_ERR_CONFIG);
  CHECK(fpp_weights_create(nullptr, 1, &w) == FPP_ERR_INVALID);
  CHECK(fpp_weights_create(R"({"family":"constant","params":{"v":1.0}})", 1, nullptr) ==
        FPP_ERR_INVALID);
}

TEST_CASE("passage times agree with the core solver") {
  const char* spec = R"({"family":"uniform","params":{"lo":0.0,"hi":1.0}})";
  fpp_weights* w = make_weights(spec, 19);
  const WeightConfig core(DistributionSpec::uniform(0.0, 1.0), 19);

  const int64_t v[2] = {0, 0};
  const int64_t u[2] = {3, 2};
  double t = -1.0;
  int32_t limited = -1;
  REQUIRE(fpp_passage_time(w, v, u, 2, nullptr, nullptr, 2.0, &t, &limited) == FPP_OK);
  const PassageResult want = passage_time(core, {{0, 0}}, {{3, 2}}, Region::full(2), 2.0);
  CHECK(t == doctest::Approx(want.time).epsilon(1e-12));
  CHECK(limited == (want.envelope_limited ? 1 : 0));

  // Restricted to a box; flag pointer is optional.
  const int64_t lo[2] = {0, 0};
  const int64_t hi[2] = {3, 2};
  REQUIRE(fpp_passage_time(w, v, u, 2, lo, hi, 2.0, &t, nullptr) == FPP_OK);
  const PassageResult boxed =
      passage_time(core, {{0, 0}}, {{3, 2}}, Region::box(Box({0, 0}, {3, 2})), 2.0);
  CHECK(t == doctest::Approx(boxed.time).epsilon(1e-12));
  CHECK(boxed.time >= want.time);

  // Terminals outside the box are a caller error.
  const int64_t far[2] = {9, 9};
  CHECK(fpp_passage_time(w, v, far, 2, lo, hi, 2.0, &t, nullptr) == FPP_ERR_INVALID);
  // Half-specified boxes are rejected.
  CHECK(fpp_passage_time(w, v, u, 2, lo, nullptr, 2.0, &t, nullptr) == FPP_ERR_INVALID);
  CHECK(fpp_passage_time(w, v, u, 2, nullptr, nullptr, 2.0, nullptr, nullptr) == FPP_ERR_INVALID);
  fpp_weights_destroy(w);
}

TEST_CASE("geodesic stats agree with the core dag") {
  const char* spec = R"({"family":"bernoulli_two_point","params":{"a":1.0,"b":2.0,"p_a":0.5}})";
  fpp_weights* w = make_weights(spec, 5);
  const WeightConfig core(DistributionSpec::bernoulli_two_point(1.0, 2.0, 0.5), 5);

  const int64_t v[2] = {0, 0};
  const int64_t u[2] = {2, 2};
  double mx = -1.0, mn = -1.0;
  uint64_t edges = 0;
  REQUIRE(fpp_geodesic_stats(w, v, u, 2, 2.0, &mx, &mn, &edges) == FPP_OK);
  const GeodesicDag dag = geodesic_dag(core, {{0, 0}}, {{2, 2}}, Region::full(2), 2.0);
  const MaxWeightStats st = max_weight_stats(dag);
  CHECK(mx == st.max_over_geodesics);
  CHECK(mn == st.min_over_geodesics);
  CHECK(edges == st.dag_edge_count);
  CHECK(fpp_geodesic_stats(w, v, u, 0, 2.0, &mx, &mn, nullptr) == FPP_ERR_INVALID);
  fpp_weights_destroy(w);
}

TEST_CASE("xi verification through the boundary") {
  char* out = nullptr;
  REQUIRE(fpp_xi_verify_json(2, 49, &out) == FPP_OK);
  REQUIRE(out != nullptr);
  const json rep = json::parse(out);
  CHECK(rep["d"] == 2);
  CHECK(rep["m"] == 49);
  CHECK(rep["conditions"]["xi1"] == "pass");
  CHECK(rep["conditions"]["xi4"] == "pass");
  fpp_string_free(out);

  CHECK(fpp_xi_verify_json(0, 49, &out) == FPP_ERR_INVALID);
  CHECK(out == nullptr);
  CHECK(fpp_xi_verify_json(2, 49, nullptr) == FPP_ERR_INVALID);
}

TEST_CASE("experiments through the boundary") {
  const char* cfg =
      R"({"experiment":"simulate","v":[0,0],"w":[3,4],"dist":{"family":"constant","params":{"v":1.0}}})";
  fpp_report* rep = nullptr;
  REQUIRE(fpp_run_experiment(cfg, &rep) == FPP_OK);
  REQUIRE(rep != nullptr);
  CHECK(std::string(fpp_report_kind(rep)) == "simulate");
  CHECK(std::string(fpp_report_csv(rep)) ==
        "time,envelope_limited,maxM,minM,dag_vertices,dag_edges\n7,0,1,1,20,31\n");
  const json top = json::parse(fpp_report_json(rep));
  CHECK(top["kind"] == "simulate");
  CHECK(top["result"]["time"] == doctest::Approx(7.0));
  fpp_report_destroy(rep);

  rep = nullptr;
  CHECK(fpp_run_experiment(R"({"experiment":"warp"})", &rep) == FPP_ERR_CONFIG);
  CHECK(rep == nullptr);
  CHECK(std::strlen(fpp_last_error()) > 0);
  CHECK(fpp_run_experiment(nullptr, &rep) == FPP_ERR_INVALID);
  CHECK(fpp_run_experiment(cfg, nullptr) == FPP_ERR_INVALID);
}
