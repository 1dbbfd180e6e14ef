#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "json.hpp"

#include "fpplab/error.hpp"
#include "fpplab/harness.hpp"
#include "fpplab/order.hpp"
#include "fpplab/stats.hpp"
#include "fpplab/weights.hpp"

using namespace fpplab;
using nlohmann::json;

TEST_CASE("wilson intervals") {
  const auto iv = wilson_interval(8, 10);
  CHECK(iv.lo == doctest::Approx(0.4902).epsilon(1e-3));
  CHECK(iv.hi == doctest::Approx(0.9433).epsilon(1e-3));
  CHECK(wilson_interval(0, 0).lo == 0.0);
  CHECK(wilson_interval(0, 0).hi == 1.0);
  CHECK(wilson_interval(10, 10).hi == doctest::Approx(1.0));
  CHECK(wilson_interval(0, 10).lo == doctest::Approx(0.0));
  // More data tightens the interval around the same proportion.
  const auto narrow = wilson_interval(80, 100);
  CHECK(narrow.hi - narrow.lo < iv.hi - iv.lo);
  CHECK_THROWS_AS(wilson_interval(11, 10), std::invalid_argument);
}

TEST_CASE("least squares on an exact line") {
  const auto fit = ols_fit({1, 2, 3, 4}, {4, 7, 10, 13});
  CHECK(fit.slope == doctest::Approx(3.0));
  CHECK(fit.intercept == doctest::Approx(1.0));
  CHECK(fit.slope_se == doctest::Approx(0.0));
  CHECK(fit.r2 == doctest::Approx(1.0));
  CHECK(fit.n == 4);
  CHECK_THROWS_AS(ols_fit({1, 2}, {1}), std::invalid_argument);
  CHECK_THROWS_AS(ols_fit({2, 2, 2}, {1, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(ols_fit({1}, {1}), std::invalid_argument);
}

TEST_CASE("medians and variance with jackknife error") {
  CHECK(median_of({3, 1, 2}) == doctest::Approx(2.0));
  CHECK(median_of({4, 1, 3, 2}) == doctest::Approx(2.5));
  CHECK_THROWS_AS(median_of({}), std::invalid_argument);

  const auto v = variance_with_se({1, 2, 3, 4});
  CHECK(v.mean == doctest::Approx(2.5));
  CHECK(v.var == doctest::Approx(5.0 / 3.0));
  CHECK(v.var_se == doctest::Approx(std::sqrt(4.0 / 3.0)));
  const auto flat = variance_with_se({2, 2, 2, 2});
  CHECK(flat.var == doctest::Approx(0.0));
  CHECK(flat.var_se == doctest::Approx(0.0));
}

TEST_CASE("kolmogorov-smirnov statistic") {
  const double d = ks_statistic({0.2, 0.9, 0.4}, [](double x) { return x; });
  CHECK(d == doctest::Approx(4.0 / 15.0));
}

TEST_CASE("cochran-armitage trend") {
  const auto t = ca_trend({10, 20, 30}, {100, 100, 100}, {0, 1, 2});
  CHECK(t.z == doctest::Approx(20.0 / std::sqrt(32.0)));
  CHECK(t.p_increasing < 0.001);
  CHECK(t.p_decreasing > 0.999);
  // A flat profile carries no signal.
  const auto flat = ca_trend({5, 5}, {50, 50}, {0, 1});
  CHECK(std::abs(flat.z) < 1e-12);
  CHECK_THROWS_AS(ca_trend({1}, {10}, {0}), std::invalid_argument);
  CHECK_THROWS_AS(ca_trend({1, 2}, {10}, {0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(ca_trend({0, 0}, {0, 0}, {0, 1}), std::invalid_argument);
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975));
}

TEST_CASE("seed derivation is deterministic and key-sensitive") {
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
  CHECK(derive_seed(1, 2, 3) != derive_seed(2, 2, 3));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 3));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 2, 4));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 2));
}

TEST_CASE("config parsing: defaults and strictness") {
  const auto cfg = config_from_json(R"({"experiment":"scaling","N":[16,32]})");
  CHECK(cfg.kind == ExperimentKind::kScaling);
  CHECK(cfg.d == 2);
  CHECK(cfg.seed == 1);
  CHECK(cfg.samples == 100);
  CHECK(cfg.K == 2.0);
  CHECK(cfg.workers == 1);
  CHECK(cfg.N_list == std::vector<Coord>{16, 32});
  CHECK(cfg.mode == ScalingMode::kPoint);

  CHECK_THROWS_AS(config_from_json("not json"), ConfigError);
  CHECK_THROWS_AS(config_from_json(R"({"N":[16]})"), ConfigError);
  CHECK_THROWS_AS(config_from_json(R"({"experiment":"warp","N":[16]})"), ConfigError);
  CHECK_THROWS_AS(config_from_json(R"({"experiment":"scaling","N":[16],"bogus":1})"), ConfigError);
  CHECK_THROWS_AS(config_from_json(R"({"experiment":"scaling","N":[16],"d":9})"), ConfigError);
  CHECK_THROWS_AS(config_from_json(R"({"experiment":"scaling","N":[16],"K":0.5})"), ConfigError);
  CHECK_THROWS_AS(config_from_json(R"({"experiment":"scaling","N":[16],"samples":0})"), ConfigError);
  CHECK_THROWS_AS(config_from_json(R"({"experiment":"scaling","N":[16],"workers":999})"), ConfigError);
  CHECK_THROWS_AS(
      config_from_json(R"({"experiment":"event-prob","param":[16],"event_params":{"zap":1}})"),
      ConfigError);
  CHECK_THROWS_AS(
      config_from_json(R"({"experiment":"scaling","N":[16],"dist":{"family":"cauchy"}})"),
      ConfigError);
}

TEST_CASE("config parsing: simulate dimensions come from the terminals") {
  const auto cfg = config_from_json(R"({"experiment":"simulate","v":[0,0,0],"w":[0,0,1]})");
  CHECK(cfg.kind == ExperimentKind::kSimulate);
  CHECK(cfg.d == 3);
  CHECK(cfg.sim_w == std::vector<Coord>{0, 0, 1});
  CHECK_THROWS_AS(config_from_json(R"({"experiment":"simulate","v":[0,0]})"), ConfigError);
  CHECK_THROWS_AS(config_from_json(R"({"experiment":"simulate","v":[0,0],"w":[1]})"), ConfigError);
  CHECK_THROWS_AS(config_from_json(R"({"experiment":"simulate","v":[0,0],"w":[1,0],"d":3})"),
                  ConfigError);
}

TEST_CASE("config echo is canonical and scheduling-free") {
  const std::string text =
      R"({"experiment":"scaling","N":[32,16],"seed":9,"workers":7,"out":"somewhere","samples":5})";
  const auto cfg = config_from_json(text);
  const std::string echo = config_echo_json(cfg);
  CHECK(echo.find("workers") == std::string::npos);
  CHECK(echo.find("somewhere") == std::string::npos);

  // Idempotent under reparse, and insensitive to the worker count.
  CHECK(config_echo_json(config_from_json(echo)) == echo);
  auto other = config_from_json(text);
  other.workers = 3;
  CHECK(config_echo_json(other) == echo);
}

TEST_CASE("scaling on a constant environment") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::kScaling;
  cfg.dist = DistributionSpec::constant(1.0);
  cfg.N_list = {32, 16, 32};  // unsorted with duplicates
  cfg.samples = 4;
  cfg.order_r = 1.0;
  const ScalingReport rep = run_scaling(cfg);
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.rows[0].N == 16);
  CHECK(rep.rows[1].N == 32);
  for (const auto& row : rep.rows) {
    CHECK(row.samples == 4);
    CHECK(row.envelope_limited == 0);
    CHECK(row.max_min == doctest::Approx(1.0));
    CHECK(row.max_med == doctest::Approx(1.0));
    CHECK(row.max_max == doctest::Approx(1.0));
    CHECK(row.min_med == doctest::Approx(1.0));
    CHECK(row.f == doctest::Approx(order_f(2, 1.0, static_cast<double>(row.N))));
    CHECK(row.ratio_max_med == doctest::Approx(1.0 / row.f));
  }
  CHECK(rep.fit_valid);
  CHECK(rep.fit.slope == doctest::Approx(0.0));
}

TEST_CASE("scaling validation") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::kScaling;
  cfg.N_list = {8};
  CHECK_THROWS_AS(run_scaling(cfg), ConfigError);
  cfg.N_list = {};
  CHECK_THROWS_AS(run_scaling(cfg), ConfigError);
  cfg.N_list = {16};
  cfg.d = 1;
  CHECK_THROWS_AS(run_scaling(cfg), ConfigError);
  cfg.d = 2;
  cfg.mode = ScalingMode::kBoxLower;
  cfg.eta = 3.0;  // L_N explodes past N/2
  CHECK_THROWS_AS(run_scaling(cfg), ConfigError);
}

TEST_CASE("scaling in box-to-box modes") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::kScaling;
  cfg.dist = DistributionSpec::constant(1.0);
  cfg.N_list = {16};
  cfg.samples = 2;
  cfg.order_r = 1.0;
  cfg.mode = ScalingMode::kBoxUpper;
  const ScalingReport up = run_scaling(cfg);
  REQUIRE(up.rows.size() == 1);
  CHECK(up.rows[0].samples == 2);
  CHECK(up.rows[0].max_med == doctest::Approx(1.0));
  CHECK(up.rows[0].envelope_limited == 0);

  cfg.mode = ScalingMode::kBoxLower;
  cfg.eta = 0.1;
  const ScalingReport lo = run_scaling(cfg);
  REQUIRE(lo.rows.size() == 1);
  CHECK(lo.rows[0].max_med == doctest::Approx(1.0));
}

TEST_CASE("iid tails recover exponential exceedance") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::kIidTail;
  cfg.dist = DistributionSpec::exponential(1.0);
  cfg.seed = 11;
  cfg.samples = 20000;
  cfg.L_list = {1};
  cfg.t_list = {0.5, 1.0, 2.0};
  const TailReport rep = run_iid_tail(cfg);
  REQUIRE(rep.rows.size() == 3);
  for (const auto& row : rep.rows) {
    const double freq = static_cast<double>(row.exceed) / static_cast<double>(row.samples);
    CHECK(freq == doctest::Approx(std::exp(-row.x)).epsilon(0.05));
    CHECK(row.wilson_lo <= freq);
    CHECK(freq <= row.wilson_hi);
    CHECK(row.ref == doctest::Approx(row.x));  // t^r L at r = 1, L = 1
  }
  CHECK(rep.fit_valid);
  CHECK(rep.fit.slope > 0.0);

  // Erlang(4) oracle at a sub-mean threshold.
  cfg.samples = 4000;
  cfg.L_list = {4};
  cfg.t_list = {0.25};
  const TailReport erl = run_iid_tail(cfg);
  const double want = std::exp(-1.0) * (1.0 + 1.0 + 0.5 + 1.0 / 6.0);
  const double freq =
      static_cast<double>(erl.rows[0].exceed) / static_cast<double>(erl.rows[0].samples);
  CHECK(freq == doctest::Approx(want).epsilon(0.02));

  cfg.L_list = {};
  CHECK_THROWS_AS(run_iid_tail(cfg), ConfigError);
}

TEST_CASE("restricted tails: degenerate environments") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::kRestrictedLdp;
  cfg.dist = DistributionSpec::constant(0.0);
  cfg.samples = 20;
  cfg.L = 4;
  cfg.k1 = 4;
  cfg.order_r = 2.0;
  cfg.M2_list = {0.5, 1.0};
  const TailReport zero = run_restricted_ldp(cfg);
  REQUIRE(zero.rows.size() == 2);
  for (const auto& row : zero.rows) {
    CHECK(row.exceed == 0);
    CHECK(row.samples == 20);
    CHECK(row.ref == doctest::Approx(ldp_exponent_g(2.0, 2, 4.0, 4.0)));
  }
  CHECK(!zero.fit_valid);

  cfg.dist = DistributionSpec::constant(10.0);
  cfg.L = 2;
  cfg.k1 = 2;
  cfg.M2_list = {1.0, 2.0};
  const TailReport full = run_restricted_ldp(cfg);
  for (const auto& row : full.rows) {
    CHECK(row.exceed == row.samples);
    CHECK(row.wilson_hi == doctest::Approx(1.0));
  }

  cfg.k1 = 0;  // a single vertex: zero passage time, no reference exponent
  const TailReport point = run_restricted_ldp(cfg);
  CHECK(point.rows[0].exceed == 0);
  CHECK(std::isnan(point.rows[0].ref));
}

TEST_CASE("restricted tails: shared replicas make the sweep exactly monotone") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::kRestrictedLdp;
  cfg.dist = DistributionSpec::exponential(1.0);
  cfg.seed = 3;
  cfg.samples = 200;
  cfg.L = 4;
  cfg.k1 = 4;
  cfg.M2_list = {0.5, 1.0, 2.0};
  const TailReport rep = run_restricted_ldp(cfg);
  REQUIRE(rep.rows.size() == 3);
  CHECK(rep.rows[0].exceed >= rep.rows[1].exceed);
  CHECK(rep.rows[1].exceed >= rep.rows[2].exceed);

  cfg.k1 = 2 * cfg.L + 2;
  CHECK_THROWS_AS(run_restricted_ldp(cfg), ConfigError);
  cfg.k1 = 2;
  cfg.L = 0;
  CHECK_THROWS_AS(run_restricted_ldp(cfg), ConfigError);
  cfg.L = 2;
  cfg.M2_list = {};
  CHECK_THROWS_AS(run_restricted_ldp(cfg), ConfigError);
}

TEST_CASE("event probabilities: certain and impossible events") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::kEventProb;
  cfg.dist = DistributionSpec::constant(0.0);
  cfg.samples = 5;
  cfg.param_list = {16, 32};
  cfg.event.name = "good_edge";
  cfg.event.r = 1.0;
  const EventReport sure = run_event_probability(cfg);
  REQUIRE(sure.rows.size() == 2);
  for (const auto& row : sure.rows) {
    CHECK(row.trials == 5);
    CHECK(row.hits == 5);
    CHECK(row.freq == doctest::Approx(1.0));
  }
  CHECK(sure.trend_valid);
  CHECK(sure.trend.p_increasing == doctest::Approx(0.5));  // flat profile

  cfg.dist = DistributionSpec::constant(10.0);
  const EventReport never = run_event_probability(cfg);
  for (const auto& row : never.rows) CHECK(row.hits == 0);

  cfg.param_list = {8};
  CHECK_THROWS_AS(run_event_probability(cfg), ConfigError);
}

TEST_CASE("event probabilities: blackness and A-conditions on constants") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::kEventProb;
  cfg.dist = DistributionSpec::constant(1.0);
  cfg.samples = 2;
  cfg.param_list = {4, 6};
  cfg.event.name = "black_box_v1";
  cfg.event.r = 1.0;
  cfg.event.M = 1.0;
  cfg.event.delta7 = 0.1;
  const EventReport speedy = run_event_probability(cfg);
  for (const auto& row : speedy.rows) CHECK(row.hits == 0);

  cfg.event.delta7 = 0.0;
  const EventReport black = run_event_probability(cfg);
  for (const auto& row : black.rows) CHECK(row.hits == row.trials);

  cfg.event.name = "A_condition";
  cfg.event.which = "A1";
  cfg.event.c = 0.4;
  cfg.event.gamma = 2.0;
  cfg.event.N = std::exp(4.0);
  const EventReport a1 = run_event_probability(cfg);
  for (const auto& row : a1.rows) CHECK(row.hits == row.trials);

  cfg.event.which = "A9";
  CHECK_THROWS_AS(run_event_probability(cfg), ConfigError);
  cfg.event.which = "A2";
  cfg.event.N = 8.0;
  CHECK_THROWS_AS(run_event_probability(cfg), ConfigError);
  cfg.event.name = "mystery";
  CHECK_THROWS_AS(run_event_probability(cfg), ConfigError);
}

TEST_CASE("concentration on a constant environment") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::kConcentration;
  cfg.dist = DistributionSpec::constant(2.0);
  cfg.N_list = {32, 16};
  cfg.samples = 3;
  const ConcentrationReport rep = run_concentration(cfg);
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.rows[0].N == 16);
  CHECK(rep.rows[0].mean_t == doctest::Approx(32.0));
  CHECK(rep.rows[1].mean_t == doctest::Approx(64.0));
  for (const auto& row : rep.rows) {
    CHECK(row.var_t == doctest::Approx(0.0));
    CHECK(row.ratio == doctest::Approx(0.0));
  }
  CHECK(rep.fit_valid);
  CHECK(rep.fit.slope == doctest::Approx(0.0));

  cfg.samples = 1;
  const ConcentrationReport lone = run_concentration(cfg);
  CHECK(std::isnan(lone.rows[0].var_t));
  CHECK(std::isnan(lone.rows[0].ratio));

  cfg.N_list = {};
  CHECK_THROWS_AS(run_concentration(cfg), ConfigError);
  cfg.N_list = {0};
  CHECK_THROWS_AS(run_concentration(cfg), ConfigError);
}

TEST_CASE("xi verification report shape") {
  const json rep = json::parse(xi_verify_json(2, 49));
  CHECK(rep["d"] == 2);
  CHECK(rep["m"] == 49);
  CHECK(rep["n"] == 2);
  CHECK(rep["degenerate"] == false);
  for (const char* key : {"xi1", "xi2", "xi3", "xi4"})
    CHECK(rep["conditions"][key] == "pass");
  CHECK(rep["counts"]["sets"] == 7);
  CHECK(rep["counts"]["levels"].size() == 3);
  CHECK(rep["detail"] == "");

  const json deg = json::parse(xi_verify_json(2, 24));
  CHECK(deg["degenerate"] == true);
  CHECK(deg["counts"]["sets"] == 0);
  CHECK(deg["conditions"]["xi1"] == "pass");
}

TEST_CASE("pinned csv headers") {
  ExperimentConfig scal;
  scal.kind = ExperimentKind::kScaling;
  scal.dist = DistributionSpec::constant(1.0);
  scal.N_list = {16};
  scal.samples = 1;
  scal.order_r = 1.0;
  CHECK(run_experiment(scal).csv.rfind(
            "N,f,samples,maxM_min,maxM_med,maxM_max,minM_min,minM_med,minM_max,"
            "ratio_maxM_med,ratio_minM_med,envelope_limited\n",
            0) == 0);

  ExperimentConfig iid;
  iid.kind = ExperimentKind::kIidTail;
  iid.L_list = {1};
  iid.t_list = {1.0};
  iid.samples = 10;
  CHECK(run_experiment(iid).csv.rfind("L,t,samples,exceed,wilson_lo,wilson_hi,ref_exponent\n", 0) ==
        0);

  ExperimentConfig res;
  res.kind = ExperimentKind::kRestrictedLdp;
  res.dist = DistributionSpec::constant(0.0);
  res.L = 2;
  res.k1 = 2;
  res.M2_list = {1.0};
  res.samples = 2;
  res.order_r = 2.0;
  CHECK(run_experiment(res).csv.rfind("L,k1,M2,samples,exceed,wilson_lo,wilson_hi,g\n", 0) == 0);

  ExperimentConfig ev;
  ev.kind = ExperimentKind::kEventProb;
  ev.dist = DistributionSpec::constant(0.0);
  ev.param_list = {16};
  ev.samples = 2;
  ev.event.r = 1.0;
  CHECK(run_experiment(ev).csv.rfind("param,trials,hits,freq,wilson_lo,wilson_hi\n", 0) == 0);

  ExperimentConfig con;
  con.kind = ExperimentKind::kConcentration;
  con.dist = DistributionSpec::constant(1.0);
  con.N_list = {4};
  con.samples = 2;
  CHECK(run_experiment(con).csv.rfind("N,samples,mean_t,var_t,var_se,ratio_var_over_N\n", 0) == 0);

  ExperimentConfig xi;
  xi.kind = ExperimentKind::kXiVerify;
  xi.m = 49;
  CHECK(run_experiment(xi).csv.rfind("d,m,n,degenerate,xi1,xi2,xi3,xi4,sets,edges\n", 0) == 0);
}

TEST_CASE("simulate experiment") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::kSimulate;
  cfg.dist = DistributionSpec::constant(1.0);
  cfg.sim_v = {0, 0};
  cfg.sim_w = {3, 4};
  const ExperimentResult res = run_experiment(cfg);
  CHECK(res.csv ==
        "time,envelope_limited,maxM,minM,dag_vertices,dag_edges\n7,0,1,1,20,31\n");
  const json top = json::parse(res.json);
  CHECK(top["kind"] == "simulate");
  CHECK(top["result"]["time"] == doctest::Approx(7.0));
  CHECK(top["result"]["dag_vertices"] == 20);
  CHECK(top["result"]["dag_edges"] == 31);

  ExperimentConfig same;
  same.kind = ExperimentKind::kSimulate;
  same.dist = DistributionSpec::constant(1.0);
  same.sim_v = {1, 1};
  same.sim_w = {1, 1};
  const json loop = json::parse(run_experiment(same).json);
  CHECK(loop["result"]["time"] == doctest::Approx(0.0));
  CHECK(loop["result"]["maxM"].is_null());
  CHECK(loop["result"]["dag_vertices"] == 0);
}

TEST_CASE("experiment output is identical across worker counts") {
  auto make = [](int workers) {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::kScaling;
    cfg.dist = DistributionSpec::exponential(1.0);
    cfg.seed = 42;
    cfg.N_list = {16, 32};
    cfg.samples = 6;
    cfg.workers = workers;
    return run_experiment(cfg);
  };
  const ExperimentResult one = make(1);
  const ExperimentResult two = make(2);
  const ExperimentResult five = make(5);
  CHECK(one.csv == two.csv);
  CHECK(one.csv == five.csv);
  CHECK(one.json == two.json);
  CHECK(one.json == five.json);

  // The same holds for the embarrassingly cellular tail experiment.
  auto tail = [](int workers) {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::kIidTail;
    cfg.dist = DistributionSpec::exponential(1.0);
    cfg.seed = 7;
    cfg.L_list = {1, 2};
    cfg.t_list = {1.0, 2.0};
    cfg.samples = 500;
    cfg.workers = workers;
    return run_experiment(cfg);
  };
  CHECK(tail(1).csv == tail(3).csv);
  CHECK(tail(1).json == tail(3).json);
}

TEST_CASE("report json carries the canonical config echo") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::kConcentration;
  cfg.dist = DistributionSpec::constant(1.0);
  cfg.N_list = {4};
  cfg.samples = 2;
  cfg.workers = 9;
  const json top = json::parse(run_experiment(cfg).json);
  CHECK(top["kind"] == "concentration");
  CHECK(top["config"] == json::parse(config_echo_json(cfg)));
  CHECK(!top["config"].contains("workers"));
  REQUIRE(top["rows"].is_array());
  CHECK(top["rows"].size() == 1);
}
