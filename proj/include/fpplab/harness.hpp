#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fpplab/lattice.hpp"
#include "fpplab/stats.hpp"
#include "fpplab/weights.hpp"

namespace fpplab {

// Keyed mixer for per-replica seeds: a pure function of (master, a, b), so
// worker scheduling can never reorder randomness.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b);

enum class ExperimentKind {
  kScaling,
  kIidTail,
  kRestrictedLdp,
  kEventProb,
  kConcentration,
  kSimulate,
  kXiVerify,
};

const char* experiment_name(ExperimentKind kind);

enum class ScalingMode { kPoint, kBoxUpper, kBoxLower };

// Parameters of the event sampled by the event-prob experiment. The sweep
// value is N for good_edge and the box scale n for the box events.
struct EventParams {
  std::string name = "good_edge";  // good_edge | black_box_v1 | black_box_v2 | A_condition
  double r = -1.0;                 // < 0: use the distribution's tail exponent
  double M = 1.0;
  double M2 = 1.0;
  double delta7 = 0.05;
  double c = 0.1;
  double gamma = 4.0;
  double N = 64.0;  // order-function scale for the box events
  Coord n1 = 0;     // skeleton pitch; 0 derives one from the box scale
  int j = 1;        // box direction
  std::string which = "A1";  // A-condition selector: A1 | A2 | A3 | A3~
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kSimulate;
  int d = 2;
  DistributionSpec dist = DistributionSpec::exponential(1.0);
  std::uint64_t seed = 1;
  std::uint64_t samples = 100;
  double K = 2.0;
  int workers = 1;  // scheduling only; excluded from the echo
  std::string out;  // CLI output stem; excluded from the echo

  std::vector<Coord> N_list;  // scaling, concentration
  ScalingMode mode = ScalingMode::kPoint;
  double eta = 0.1;     // box-lower inflation: L_N = (log N)^(1+eta)
  double order_r = -1;  // reference tail exponent; < 0: distribution's

  std::vector<Coord> L_list;  // iid tail
  std::vector<double> t_list;

  Coord L = 8, k1 = 8;  // restricted LDP
  std::vector<double> M2_list;

  EventParams event;
  std::vector<Coord> param_list;  // event-prob sweep

  std::vector<Coord> sim_v, sim_w;  // simulate terminals
  bool has_domain = false;
  std::vector<Coord> dom_lo, dom_hi;

  Coord m = 0;  // xi-verify
};

// Strict parse (unknown keys rejected). Throws ConfigError.
ExperimentConfig config_from_json(const std::string& text);
// Canonical config echo embedded in every JSON report; workers/out excluded
// so reports are byte-identical across worker counts.
std::string config_echo_json(const ExperimentConfig& cfg);

struct ScalingRow {
  Coord N = 0;
  double f = 0.0;
  std::uint64_t samples = 0;  // replicas entering the statistics
  double max_min = 0, max_med = 0, max_max = 0;
  double min_min = 0, min_med = 0, min_max = 0;
  double ratio_max_med = 0, ratio_min_med = 0;
  std::uint64_t envelope_limited = 0;  // flagged and excluded, never dropped silently
};

struct ScalingReport {
  std::vector<ScalingRow> rows;  // sorted by N
  LinearFit fit;                 // log(median max) against log(log N)
  bool fit_valid = false;
};

ScalingReport run_scaling(const ExperimentConfig& cfg);

struct TailRow {
  double L = 0;
  double k1 = 0;  // restricted only
  double x = 0;   // t (iid) or M2 (restricted)
  std::uint64_t samples = 0, exceed = 0;
  double wilson_lo = 0, wilson_hi = 0;
  double ref = 0;  // t^r L (iid) or g(r,d,L,k1) (restricted)
};

struct TailReport {
  std::vector<TailRow> rows;
  LinearFit fit;  // -log(frequency) against the reference exponent
  bool fit_valid = false;
};

TailReport run_iid_tail(const ExperimentConfig& cfg);
TailReport run_restricted_ldp(const ExperimentConfig& cfg);

struct EventRow {
  Coord param = 0;
  std::uint64_t trials = 0, hits = 0;
  double freq = 0, wilson_lo = 0, wilson_hi = 0;
};

struct EventReport {
  std::vector<EventRow> rows;
  TrendTest trend;  // Cochran-Armitage across the sweep, scores = row index
  bool trend_valid = false;
};

EventReport run_event_probability(const ExperimentConfig& cfg);

struct ConcentrationRow {
  Coord N = 0;
  std::uint64_t samples = 0;
  double mean_t = 0;
  double var_t = 0, var_se = 0;  // nan when samples < 2
  double ratio = 0;              // var_t / N
};

struct ConcentrationReport {
  std::vector<ConcentrationRow> rows;
  LinearFit fit;  // ratio against N
  bool fit_valid = false;
};

ConcentrationReport run_concentration(const ExperimentConfig& cfg);

// Bare verification report, also served via the C API.
std::string xi_verify_json(int d, Coord m);

struct ExperimentResult {
  ExperimentKind kind = ExperimentKind::kSimulate;
  std::string csv;   // fixed header per kind
  std::string json;  // rows + summary + config echo
};

// Dispatch + serialization. Deterministic given the config (seed included)
// regardless of the worker count.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

}  // namespace fpplab
