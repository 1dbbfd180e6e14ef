#include "fpplab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstring>
#include <functional>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "fpplab/error.hpp"
#include "fpplab/order.hpp"
#include "fpplab/passage.hpp"
#include "fpplab/shells_boxes.hpp"
#include "fpplab/xi.hpp"

namespace fpplab {

using nlohmann::json;

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent replica tasks over a shared preallocated slot array; the merge
// happens after the join, so scheduling cannot affect results.
void parallel_for(std::uint64_t count, int workers, const std::function<void(std::uint64_t)>& fn) {
  if (count == 0) return;
  const std::uint64_t nw = std::min<std::uint64_t>(std::max(workers, 1), count);
  if (nw <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> abort{false};
  std::mutex mu;
  std::exception_ptr err;
  auto body = [&] {
    for (;;) {
      if (abort.load(std::memory_order_relaxed)) return;
      const std::uint64_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(mu);
        if (!err) err = std::current_exception();
        abort.store(true, std::memory_order_relaxed);
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(nw - 1);
  for (std::uint64_t t = 1; t < nw; ++t) pool.emplace_back(body);
  body();
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

LatticePoint axis_point(int d, Coord n) {
  std::vector<Coord> c(d, 0);
  c[0] = n;
  return LatticePoint(std::move(c));
}

bool try_fit(const std::vector<double>& x, const std::vector<double>& y, LinearFit& out) {
  if (x.size() < 2) return false;
  if (*std::max_element(x.begin(), x.end()) == *std::min_element(x.begin(), x.end())) return false;
  out = ols_fit(x, y);
  return true;
}

double resolve_r(const ExperimentConfig& cfg) {
  return cfg.order_r >= 0 ? cfg.order_r : cfg.dist.tail_r();
}

// ---- config parsing ----------------------------------------------------------

ExperimentKind kind_from_name(const std::string& s) {
  if (s == "scaling") return ExperimentKind::kScaling;
  if (s == "ldp-iid") return ExperimentKind::kIidTail;
  if (s == "ldp-restricted") return ExperimentKind::kRestrictedLdp;
  if (s == "event-prob") return ExperimentKind::kEventProb;
  if (s == "concentration") return ExperimentKind::kConcentration;
  if (s == "simulate") return ExperimentKind::kSimulate;
  if (s == "xi-verify") return ExperimentKind::kXiVerify;
  throw ConfigError("unknown experiment: " + s);
}

double want_number(const json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError(key + " must be a number");
  return j.get<double>();
}

Coord want_coord(const json& j, const std::string& key) {
  if (!j.is_number_integer()) throw ConfigError(key + " must be an integer");
  return j.get<Coord>();
}

std::vector<Coord> want_coord_list(const json& j, const std::string& key) {
  std::vector<Coord> out;
  if (j.is_number_integer()) {
    out.push_back(j.get<Coord>());
    return out;
  }
  if (!j.is_array() || j.empty()) throw ConfigError(key + " must be an integer or nonempty array");
  for (const auto& e : j) out.push_back(want_coord(e, key + " entry"));
  return out;
}

std::vector<double> want_double_list(const json& j, const std::string& key) {
  std::vector<double> out;
  if (j.is_number()) {
    out.push_back(j.get<double>());
    return out;
  }
  if (!j.is_array() || j.empty()) throw ConfigError(key + " must be a number or nonempty array");
  for (const auto& e : j) out.push_back(want_number(e, key + " entry"));
  return out;
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& item : j.items())
    if (!allowed.count(item.key())) throw ConfigError("unknown " + where + " key: " + item.key());
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  std::uint64_t h = mix64(master);
  h = mix64(h ^ mix64(a));
  h = mix64(h ^ mix64(b));
  return h;
}

const char* experiment_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kScaling: return "scaling";
    case ExperimentKind::kIidTail: return "ldp-iid";
    case ExperimentKind::kRestrictedLdp: return "ldp-restricted";
    case ExperimentKind::kEventProb: return "event-prob";
    case ExperimentKind::kConcentration: return "concentration";
    case ExperimentKind::kSimulate: return "simulate";
    case ExperimentKind::kXiVerify: return "xi-verify";
  }
  return "unknown";
}

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config parse: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  check_keys(j,
             {"experiment", "d", "dist", "seed", "samples", "K", "workers", "out", "N", "mode",
              "eta", "order_r", "L", "t", "k1", "M2", "event", "param", "event_params", "v", "w",
              "domain", "m"},
             "config");

  ExperimentConfig cfg;
  if (!j.contains("experiment") || !j["experiment"].is_string())
    throw ConfigError("config requires an \"experiment\" string");
  cfg.kind = kind_from_name(j["experiment"].get<std::string>());

  if (j.contains("d")) {
    cfg.d = static_cast<int>(want_coord(j["d"], "d"));
    if (cfg.d < 1 || cfg.d > 8) throw ConfigError("d out of range [1, 8]");
  }
  if (j.contains("dist")) {
    if (!j["dist"].is_object()) throw ConfigError("dist must be an object");
    cfg.dist = distribution_from_json(j["dist"].dump());
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<std::int64_t>() >= 0))
      throw ConfigError("seed must be a nonnegative integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("samples")) {
    const Coord s = want_coord(j["samples"], "samples");
    if (s < 1) throw ConfigError("samples must be >= 1");
    cfg.samples = static_cast<std::uint64_t>(s);
  }
  if (j.contains("K")) {
    cfg.K = want_number(j["K"], "K");
    if (cfg.K < 1.0) throw ConfigError("K must be >= 1");
  }
  if (j.contains("workers")) {
    const Coord w = want_coord(j["workers"], "workers");
    if (w < 1 || w > 256) throw ConfigError("workers out of range [1, 256]");
    cfg.workers = static_cast<int>(w);
  }
  if (j.contains("out")) {
    if (!j["out"].is_string()) throw ConfigError("out must be a string");
    cfg.out = j["out"].get<std::string>();
  }
  if (j.contains("N")) cfg.N_list = want_coord_list(j["N"], "N");
  if (j.contains("mode")) {
    const std::string m = j["mode"].is_string() ? j["mode"].get<std::string>() : "";
    if (m == "point")
      cfg.mode = ScalingMode::kPoint;
    else if (m == "box-upper")
      cfg.mode = ScalingMode::kBoxUpper;
    else if (m == "box-lower")
      cfg.mode = ScalingMode::kBoxLower;
    else
      throw ConfigError("mode must be point | box-upper | box-lower");
  }
  if (j.contains("eta")) {
    cfg.eta = want_number(j["eta"], "eta");
    if (cfg.eta <= 0) throw ConfigError("eta must be > 0");
  }
  if (j.contains("order_r")) {
    cfg.order_r = want_number(j["order_r"], "order_r");
    if (cfg.order_r < 0) throw ConfigError("order_r must be >= 0");
  }
  if (j.contains("L")) {
    if (cfg.kind == ExperimentKind::kRestrictedLdp)
      cfg.L = want_coord(j["L"], "L");
    else
      cfg.L_list = want_coord_list(j["L"], "L");
  }
  if (j.contains("t")) cfg.t_list = want_double_list(j["t"], "t");
  if (j.contains("k1")) cfg.k1 = want_coord(j["k1"], "k1");
  if (j.contains("M2")) cfg.M2_list = want_double_list(j["M2"], "M2");
  if (j.contains("event")) {
    if (!j["event"].is_string()) throw ConfigError("event must be a string");
    cfg.event.name = j["event"].get<std::string>();
  }
  if (j.contains("param")) cfg.param_list = want_coord_list(j["param"], "param");
  if (j.contains("event_params")) {
    const json& p = j["event_params"];
    if (!p.is_object()) throw ConfigError("event_params must be an object");
    check_keys(p, {"r", "M", "M2", "delta7", "c", "gamma", "N", "n1", "j", "which"},
               "event_params");
    if (p.contains("r")) cfg.event.r = want_number(p["r"], "event r");
    if (p.contains("M")) cfg.event.M = want_number(p["M"], "event M");
    if (p.contains("M2")) cfg.event.M2 = want_number(p["M2"], "event M2");
    if (p.contains("delta7")) cfg.event.delta7 = want_number(p["delta7"], "event delta7");
    if (p.contains("c")) cfg.event.c = want_number(p["c"], "event c");
    if (p.contains("gamma")) cfg.event.gamma = want_number(p["gamma"], "event gamma");
    if (p.contains("N")) cfg.event.N = want_number(p["N"], "event N");
    if (p.contains("n1")) cfg.event.n1 = want_coord(p["n1"], "event n1");
    if (p.contains("j")) cfg.event.j = static_cast<int>(want_coord(p["j"], "event j"));
    if (p.contains("which")) {
      if (!p["which"].is_string()) throw ConfigError("event which must be a string");
      cfg.event.which = p["which"].get<std::string>();
    }
  }
  if (j.contains("v")) cfg.sim_v = want_coord_list(j["v"], "v");
  if (j.contains("w")) cfg.sim_w = want_coord_list(j["w"], "w");
  if (j.contains("domain")) {
    const json& dm = j["domain"];
    if (!dm.is_object() || !dm.contains("lo") || !dm.contains("hi"))
      throw ConfigError("domain must be {\"lo\": [...], \"hi\": [...]}");
    check_keys(dm, {"lo", "hi"}, "domain");
    cfg.dom_lo = want_coord_list(dm["lo"], "domain lo");
    cfg.dom_hi = want_coord_list(dm["hi"], "domain hi");
    cfg.has_domain = true;
  }
  if (j.contains("m")) cfg.m = want_coord(j["m"], "m");

  if (cfg.kind == ExperimentKind::kSimulate) {
    if (cfg.sim_v.empty() || cfg.sim_w.empty())
      throw ConfigError("simulate requires terminals v and w");
    if (cfg.sim_v.size() != cfg.sim_w.size())
      throw ConfigError("v and w must have equal dimension");
    if (j.contains("d") && cfg.d != static_cast<int>(cfg.sim_v.size()))
      throw ConfigError("d contradicts the dimension of v");
    cfg.d = static_cast<int>(cfg.sim_v.size());
  }
  return cfg;
}

std::string config_echo_json(const ExperimentConfig& cfg) {
  json e;
  e["experiment"] = experiment_name(cfg.kind);
  e["d"] = cfg.d;
  e["dist"] = json::parse(distribution_to_json(cfg.dist));
  e["seed"] = cfg.seed;
  e["samples"] = cfg.samples;
  e["K"] = cfg.K;
  switch (cfg.kind) {
    case ExperimentKind::kScaling:
      e["N"] = cfg.N_list;
      e["mode"] = cfg.mode == ScalingMode::kPoint
                      ? "point"
                      : (cfg.mode == ScalingMode::kBoxUpper ? "box-upper" : "box-lower");
      if (cfg.mode == ScalingMode::kBoxLower) e["eta"] = cfg.eta;
      if (cfg.order_r >= 0) e["order_r"] = cfg.order_r;
      break;
    case ExperimentKind::kIidTail:
      e["L"] = cfg.L_list;
      e["t"] = cfg.t_list;
      if (cfg.order_r >= 0) e["order_r"] = cfg.order_r;
      break;
    case ExperimentKind::kRestrictedLdp:
      e["L"] = cfg.L;
      e["k1"] = cfg.k1;
      e["M2"] = cfg.M2_list;
      if (cfg.order_r >= 0) e["order_r"] = cfg.order_r;
      break;
    case ExperimentKind::kEventProb: {
      e["event"] = cfg.event.name;
      e["param"] = cfg.param_list;
      json p;
      if (cfg.event.r >= 0) p["r"] = cfg.event.r;
      p["M"] = cfg.event.M;
      p["M2"] = cfg.event.M2;
      p["delta7"] = cfg.event.delta7;
      p["c"] = cfg.event.c;
      p["gamma"] = cfg.event.gamma;
      p["N"] = cfg.event.N;
      p["n1"] = cfg.event.n1;
      p["j"] = cfg.event.j;
      p["which"] = cfg.event.which;
      e["event_params"] = p;
      break;
    }
    case ExperimentKind::kConcentration:
      e["N"] = cfg.N_list;
      break;
    case ExperimentKind::kSimulate:
      e["v"] = cfg.sim_v;
      e["w"] = cfg.sim_w;
      if (cfg.has_domain) e["domain"] = json{{"lo", cfg.dom_lo}, {"hi", cfg.dom_hi}};
      break;
    case ExperimentKind::kXiVerify:
      e["m"] = cfg.m;
      break;
  }
  return e.dump();
}

// ---- scaling -----------------------------------------------------------------

namespace {

struct ScalingSlot {
  double mx = 0, mn = 0;
  bool limited = false;
};

void summarize(const std::vector<double>& vals, double& lo, double& med, double& hi) {
  if (vals.empty()) {
    lo = med = hi = kNan;
    return;
  }
  auto mm = std::minmax_element(vals.begin(), vals.end());
  lo = *mm.first;
  hi = *mm.second;
  med = median_of(vals);
}

}  // namespace

ScalingReport run_scaling(const ExperimentConfig& cfg) {
  if (cfg.d < 2) throw ConfigError("scaling requires d >= 2");
  if (cfg.N_list.empty()) throw ConfigError("scaling requires an N list");
  std::vector<Coord> Ns(cfg.N_list);
  std::sort(Ns.begin(), Ns.end());
  Ns.erase(std::unique(Ns.begin(), Ns.end()), Ns.end());
  const double r = resolve_r(cfg);
  std::vector<double> fs;
  for (Coord N : Ns) {
    if (N < 16) throw ConfigError("scaling N values must be >= 16");
    fs.push_back(order_f(cfg.d, r, static_cast<double>(N)));
  }

  const std::uint64_t reps = cfg.samples;
  std::vector<ScalingSlot> slots(Ns.size() * reps);
  parallel_for(slots.size(), cfg.workers, [&](std::uint64_t idx) {
    const std::size_t row = static_cast<std::size_t>(idx / reps);
    const std::uint64_t rep = idx % reps;
    const Coord N = Ns[row];
    WeightConfig wc(cfg.dist, derive_seed(cfg.seed, static_cast<std::uint64_t>(N), rep));
    GeodesicDag dag;
    bool limited = false;
    if (cfg.mode == ScalingMode::kPoint) {
      dag = geodesic_dag(wc, zero_point(cfg.d), axis_point(cfg.d, N), Region::full(cfg.d), cfg.K);
      limited = dag.envelope_limited;
    } else {
      const double lnN = std::log(static_cast<double>(N));
      const double lnf = cfg.mode == ScalingMode::kBoxUpper ? lnN : std::pow(lnN, 1.0 + cfg.eta);
      const Coord LN = std::max<Coord>(0, static_cast<Coord>(std::floor(lnf)));
      if (2 * LN >= N) throw ConfigError("terminal boxes overlap; N too small for L_N");
      std::vector<Coord> lo0(cfg.d, -LN), hi0(cfg.d, LN);
      std::vector<Coord> lo1(lo0), hi1(hi0);
      lo1[0] += N;
      hi1[0] += N;
      const Coord margin =
          static_cast<Coord>(std::ceil((cfg.K - 1.0) / 2.0 * std::max<double>(static_cast<double>(N), 2.0)));
      std::vector<Coord> elo(cfg.d, -LN), ehi(cfg.d, LN);
      ehi[0] += N;
      const Box env = Box(elo, ehi).inflated(margin);
      dag = geodesic_dag_boxes(wc, Region::box(Box(lo0, hi0)), Region::box(Box(lo1, hi1)),
                               Region::box(env));
      for (const auto& vx : dag.vertices)
        if (env.on_inner_boundary(vx.p)) {
          limited = true;
          break;
        }
    }
    const MaxWeightStats st = max_weight_stats(dag);
    slots[idx] = ScalingSlot{st.max_over_geodesics, st.min_over_geodesics, limited};
  });

  ScalingReport rep;
  for (std::size_t row = 0; row < Ns.size(); ++row) {
    std::vector<double> mx, mn;
    std::uint64_t flagged = 0;
    for (std::uint64_t i = 0; i < reps; ++i) {
      const ScalingSlot& s = slots[row * reps + i];
      if (s.limited) {
        ++flagged;
        continue;
      }
      mx.push_back(s.mx);
      mn.push_back(s.mn);
    }
    ScalingRow out;
    out.N = Ns[row];
    out.f = fs[row];
    out.samples = reps - flagged;
    out.envelope_limited = flagged;
    summarize(mx, out.max_min, out.max_med, out.max_max);
    summarize(mn, out.min_min, out.min_med, out.min_max);
    out.ratio_max_med = out.max_med / out.f;
    out.ratio_min_med = out.min_med / out.f;
    rep.rows.push_back(out);
  }

  std::vector<double> fx, fy;
  for (const auto& row : rep.rows)
    if (std::isfinite(row.max_med) && row.max_med > 0) {
      fx.push_back(std::log(std::log(static_cast<double>(row.N))));
      fy.push_back(std::log(row.max_med));
    }
  rep.fit_valid = try_fit(fx, fy, rep.fit);
  return rep;
}

// ---- iid tail ------------------------------------------------------------------

TailReport run_iid_tail(const ExperimentConfig& cfg) {
  if (cfg.L_list.empty() || cfg.t_list.empty())
    throw ConfigError("ldp-iid requires L and t lists");
  for (Coord L : cfg.L_list)
    if (L < 1) throw ConfigError("L values must be >= 1");
  const double r = resolve_r(cfg);

  struct Cell {
    Coord L;
    double t;
  };
  std::vector<Cell> cells;
  for (Coord L : cfg.L_list)
    for (double t : cfg.t_list) cells.push_back({L, t});

  const std::uint64_t reps = cfg.samples;
  std::vector<std::uint8_t> hit(cells.size() * reps, 0);
  parallel_for(hit.size(), cfg.workers, [&](std::uint64_t idx) {
    const std::size_t row = static_cast<std::size_t>(idx / reps);
    const std::uint64_t rep = idx % reps;
    const Cell& c = cells[row];
    const std::uint64_t key = derive_seed(cfg.seed, row, rep);
    double sum = 0;
    for (Coord i = 0; i < c.L; ++i)
      sum += dist_sample(cfg.dist, key, static_cast<std::uint64_t>(i));
    hit[idx] = sum >= c.t * static_cast<double>(c.L) ? 1 : 0;
  });

  TailReport rep;
  for (std::size_t row = 0; row < cells.size(); ++row) {
    std::uint64_t exceed = 0;
    for (std::uint64_t i = 0; i < reps; ++i) exceed += hit[row * reps + i];
    TailRow out;
    out.L = static_cast<double>(cells[row].L);
    out.k1 = kNan;
    out.x = cells[row].t;
    out.samples = reps;
    out.exceed = exceed;
    const WilsonInterval wi = wilson_interval(exceed, reps);
    out.wilson_lo = wi.lo;
    out.wilson_hi = wi.hi;
    out.ref = std::pow(cells[row].t, r) * static_cast<double>(cells[row].L);
    rep.rows.push_back(out);
  }

  std::vector<double> fx, fy;
  for (const auto& row : rep.rows)
    if (row.exceed > 0) {
      fx.push_back(row.ref);
      fy.push_back(-std::log(static_cast<double>(row.exceed) / static_cast<double>(row.samples)));
    }
  rep.fit_valid = try_fit(fx, fy, rep.fit);
  return rep;
}

// ---- restricted LDP --------------------------------------------------------------

TailReport run_restricted_ldp(const ExperimentConfig& cfg) {
  if (cfg.L < 1) throw ConfigError("ldp-restricted requires L >= 1");
  if (cfg.k1 < 0 || cfg.k1 > 2 * cfg.L + 1)
    throw ConfigError("ldp-restricted requires 0 <= k1 <= 2L+1");
  if (cfg.M2_list.empty()) throw ConfigError("ldp-restricted requires an M2 list");
  const double r = resolve_r(cfg);
  double g = kNan;
  if (cfg.k1 >= 1) {
    try {
      g = ldp_exponent_g(r, cfg.d, static_cast<double>(cfg.L), static_cast<double>(cfg.k1));
    } catch (const std::exception&) {
      g = kNan;  // out of the exponent's range; the column stays informative
    }
  }

  const std::vector<Coord> lo(cfg.d, 0), hi(cfg.d, cfg.k1);
  const Region box = Region::box(Box(lo, hi));
  const LatticePoint v = zero_point(cfg.d);
  const LatticePoint w{std::vector<Coord>(cfg.d, cfg.k1)};

  // One passage time per replica, shared across the M2 sweep, so monotonicity
  // in M2 is exact rather than statistical.
  const std::uint64_t reps = cfg.samples;
  std::vector<double> times(reps, 0.0);
  const std::uint64_t cell_key =
      (static_cast<std::uint64_t>(cfg.L) << 32) | static_cast<std::uint64_t>(cfg.k1);
  parallel_for(reps, cfg.workers, [&](std::uint64_t rep) {
    WeightConfig wc(cfg.dist, derive_seed(cfg.seed, cell_key, rep));
    times[rep] = passage_time(wc, v, w, box).time;
  });

  TailReport rep;
  for (double M2 : cfg.M2_list) {
    std::uint64_t exceed = 0;
    for (double t : times)
      if (t > M2 * static_cast<double>(cfg.L)) ++exceed;
    TailRow out;
    out.L = static_cast<double>(cfg.L);
    out.k1 = static_cast<double>(cfg.k1);
    out.x = M2;
    out.samples = reps;
    out.exceed = exceed;
    const WilsonInterval wi = wilson_interval(exceed, reps);
    out.wilson_lo = wi.lo;
    out.wilson_hi = wi.hi;
    out.ref = g;
    rep.rows.push_back(out);
  }

  std::vector<double> fx, fy;
  for (const auto& row : rep.rows)
    if (row.exceed > 0) {
      fx.push_back(row.x);
      fy.push_back(-std::log(static_cast<double>(row.exceed) / static_cast<double>(row.samples)));
    }
  rep.fit_valid = try_fit(fx, fy, rep.fit);
  return rep;
}

// ---- event probabilities ----------------------------------------------------------

namespace {

enum class EventKind { kGoodEdge, kBlackV1, kBlackV2, kACond };

EventKind event_kind_from(const std::string& name) {
  if (name == "good_edge") return EventKind::kGoodEdge;
  if (name == "black_box_v1") return EventKind::kBlackV1;
  if (name == "black_box_v2") return EventKind::kBlackV2;
  if (name == "A_condition") return EventKind::kACond;
  throw ConfigError("unknown event: " + name);
}

ACondition a_condition_from(const std::string& which) {
  if (which == "A1") return ACondition::kA1;
  if (which == "A2") return ACondition::kA2;
  if (which == "A3") return ACondition::kA3;
  if (which == "A3~" || which == "A3tilde") return ACondition::kA3Tilde;
  throw ConfigError("unknown A-condition: " + which);
}

Coord default_pitch(Coord n, SkeletonVariant variant) {
  Coord h = n / 2;
  if (variant == SkeletonVariant::kV2) {
    h -= h % 2;
    return std::max<Coord>(2, h);
  }
  return std::max<Coord>(1, h);
}

}  // namespace

EventReport run_event_probability(const ExperimentConfig& cfg) {
  if (cfg.param_list.empty()) throw ConfigError("event-prob requires a param list");
  const EventKind kind = event_kind_from(cfg.event.name);
  const double r = cfg.event.r >= 0 ? cfg.event.r : cfg.dist.tail_r();

  SkeletonVariant variant = SkeletonVariant::kV1;
  ACondition which = ACondition::kA1;
  if (kind == EventKind::kBlackV2) variant = SkeletonVariant::kV2;
  if (kind == EventKind::kACond) {
    which = a_condition_from(cfg.event.which);
    variant = which == ACondition::kA1 ? SkeletonVariant::kV1 : SkeletonVariant::kV2;
  }

  // Geometry is weight-free; build one skeleton per sweep value up front.
  std::vector<Skeleton> skeletons;
  if (kind != EventKind::kGoodEdge) {
    if ((kind == EventKind::kBlackV2 || kind == EventKind::kACond) && cfg.event.N < 16)
      throw ConfigError("event N must be >= 16");
    for (Coord n : cfg.param_list) {
      if (n < 1) throw ConfigError("box scale must be >= 1");
      try {
        const BoxFrame frame = make_box_frame(std::vector<Coord>(cfg.d, 0), n, cfg.event.j);
        const Coord n1 = cfg.event.n1 > 0 ? cfg.event.n1 : default_pitch(n, variant);
        skeletons.push_back(build_skeleton(frame, n1, variant));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("event geometry: ") + e.what());
      }
    }
  } else {
    for (Coord N : cfg.param_list)
      if (N < 16) throw ConfigError("good_edge sweep values are N and must be >= 16");
  }

  GoodVariant good_variant = GoodVariant::kSubexp;
  if (kind == EventKind::kGoodEdge) {
    if (r == 0)
      good_variant = GoodVariant::kMoment;
    else if (r <= 1)
      good_variant = GoodVariant::kSubexp;
    else
      good_variant = GoodVariant::kSuperexp;
  }

  const std::uint64_t reps = cfg.samples;
  std::vector<std::uint8_t> hit(cfg.param_list.size() * reps, 0);
  parallel_for(hit.size(), cfg.workers, [&](std::uint64_t idx) {
    const std::size_t row = static_cast<std::size_t>(idx / reps);
    const std::uint64_t rep = idx % reps;
    const Coord param = cfg.param_list[row];
    WeightConfig wc(cfg.dist, derive_seed(cfg.seed, static_cast<std::uint64_t>(param), rep));
    bool ok = false;
    switch (kind) {
      case EventKind::kGoodEdge: {
        GoodEdgeParams gp;
        gp.variant = good_variant;
        gp.r = r;
        gp.N = static_cast<double>(param);
        gp.M = cfg.event.M;
        gp.M2 = cfg.event.M2;
        ok = is_good_edge(wc, EdgeId{zero_point(cfg.d), 0}, gp).good;
        break;
      }
      case EventKind::kBlackV1:
      case EventKind::kBlackV2: {
        BlackParams bp;
        bp.delta7 = cfg.event.delta7;
        bp.M = cfg.event.M;
        bp.N = cfg.event.N;
        bp.r = r;
        ok = is_black(wc, skeletons[row], bp).black;
        break;
      }
      case EventKind::kACond: {
        AParams ap;
        ap.c = cfg.event.c;
        ap.gamma = cfg.event.gamma;
        ap.M = cfg.event.M;
        ap.N = cfg.event.N;
        ap.r = r;
        ap.delta7 = cfg.event.delta7;
        ok = check_A_condition(wc, skeletons[row], which, ap).satisfied;
        break;
      }
    }
    hit[idx] = ok ? 1 : 0;
  });

  EventReport rep;
  std::vector<std::uint64_t> hits, trials;
  std::vector<double> scores;
  for (std::size_t row = 0; row < cfg.param_list.size(); ++row) {
    std::uint64_t h = 0;
    for (std::uint64_t i = 0; i < reps; ++i) h += hit[row * reps + i];
    EventRow out;
    out.param = cfg.param_list[row];
    out.trials = reps;
    out.hits = h;
    out.freq = static_cast<double>(h) / static_cast<double>(reps);
    const WilsonInterval wi = wilson_interval(h, reps);
    out.wilson_lo = wi.lo;
    out.wilson_hi = wi.hi;
    rep.rows.push_back(out);
    hits.push_back(h);
    trials.push_back(reps);
    scores.push_back(static_cast<double>(row));
  }
  if (rep.rows.size() >= 2) {
    rep.trend = ca_trend(hits, trials, scores);
    rep.trend_valid = true;
  }
  return rep;
}

// ---- concentration -----------------------------------------------------------------

ConcentrationReport run_concentration(const ExperimentConfig& cfg) {
  if (cfg.N_list.empty()) throw ConfigError("concentration requires an N list");
  std::vector<Coord> Ns(cfg.N_list);
  std::sort(Ns.begin(), Ns.end());
  Ns.erase(std::unique(Ns.begin(), Ns.end()), Ns.end());
  for (Coord N : Ns)
    if (N < 1) throw ConfigError("concentration N values must be >= 1");

  const std::uint64_t reps = cfg.samples;
  std::vector<double> times(Ns.size() * reps, 0.0);
  parallel_for(times.size(), cfg.workers, [&](std::uint64_t idx) {
    const std::size_t row = static_cast<std::size_t>(idx / reps);
    const std::uint64_t rep = idx % reps;
    const Coord N = Ns[row];
    WeightConfig wc(cfg.dist, derive_seed(cfg.seed, static_cast<std::uint64_t>(N), rep));
    times[idx] = passage_time(wc, zero_point(cfg.d), axis_point(cfg.d, N), Region::full(cfg.d),
                              cfg.K)
                     .time;
  });

  ConcentrationReport rep;
  for (std::size_t row = 0; row < Ns.size(); ++row) {
    std::vector<double> ts(times.begin() + static_cast<std::ptrdiff_t>(row * reps),
                           times.begin() + static_cast<std::ptrdiff_t>((row + 1) * reps));
    ConcentrationRow out;
    out.N = Ns[row];
    out.samples = reps;
    if (reps < 2) {
      out.mean_t = ts[0];
      out.var_t = out.var_se = out.ratio = kNan;
    } else {
      const VarianceEstimate est = variance_with_se(ts);
      out.mean_t = est.mean;
      out.var_t = est.var;
      out.var_se = est.var_se;
      out.ratio = est.var / static_cast<double>(Ns[row]);
    }
    rep.rows.push_back(out);
  }

  std::vector<double> fx, fy;
  for (const auto& row : rep.rows)
    if (std::isfinite(row.ratio)) {
      fx.push_back(static_cast<double>(row.N));
      fy.push_back(row.ratio);
    }
  rep.fit_valid = try_fit(fx, fy, rep.fit);
  return rep;
}

// ---- xi verification ----------------------------------------------------------------

std::string xi_verify_json(int d, Coord m) {
  const XiFamily fam = build_xi(d, m);
  const XiVerifyReport vr = verify_conditions(fam);
  json out;
  out["d"] = vr.d;
  out["m"] = vr.m;
  out["n"] = vr.n;
  out["degenerate"] = vr.degenerate;
  out["conditions"] = json{{"xi1", vr.xi1 ? "pass" : "fail"},
                           {"xi2", vr.xi2 ? "pass" : "fail"},
                           {"xi3", vr.xi3 ? "pass" : "fail"},
                           {"xi4", vr.xi4 ? "pass" : "fail"}};
  out["counts"] = json{{"sets", vr.set_count}, {"edges", vr.edge_count},
                       {"levels", vr.level_sizes}};
  out["detail"] = vr.detail;
  return out.dump();
}

// ---- serialization ---------------------------------------------------------------------

namespace {

json fit_json(const LinearFit& fit, bool valid) {
  if (!valid) return nullptr;
  return json{{"slope", fit.slope},
              {"intercept", fit.intercept},
              {"slope_se", fit.slope_se},
              {"r2", fit.r2},
              {"n", fit.n}};
}

std::string scaling_csv(const ScalingReport& rep) {
  std::string out =
      "N,f,samples,maxM_min,maxM_med,maxM_max,minM_min,minM_med,minM_max,"
      "ratio_maxM_med,ratio_minM_med,envelope_limited\n";
  for (const auto& r : rep.rows) {
    out += std::to_string(r.N) + ',' + fmt(r.f) + ',' + std::to_string(r.samples) + ',' +
           fmt(r.max_min) + ',' + fmt(r.max_med) + ',' + fmt(r.max_max) + ',' + fmt(r.min_min) +
           ',' + fmt(r.min_med) + ',' + fmt(r.min_max) + ',' + fmt(r.ratio_max_med) + ',' +
           fmt(r.ratio_min_med) + ',' + std::to_string(r.envelope_limited) + '\n';
  }
  return out;
}

json scaling_rows_json(const ScalingReport& rep) {
  json rows = json::array();
  for (const auto& r : rep.rows)
    rows.push_back(json{{"N", r.N},
                        {"f", r.f},
                        {"samples", r.samples},
                        {"maxM_min", r.max_min},
                        {"maxM_med", r.max_med},
                        {"maxM_max", r.max_max},
                        {"minM_min", r.min_min},
                        {"minM_med", r.min_med},
                        {"minM_max", r.min_max},
                        {"ratio_maxM_med", r.ratio_max_med},
                        {"ratio_minM_med", r.ratio_min_med},
                        {"envelope_limited", r.envelope_limited}});
  return rows;
}

std::string tail_csv(const TailReport& rep, bool restricted) {
  std::string out = restricted ? "L,k1,M2,samples,exceed,wilson_lo,wilson_hi,g\n"
                               : "L,t,samples,exceed,wilson_lo,wilson_hi,ref_exponent\n";
  for (const auto& r : rep.rows) {
    out += fmt(r.L) + ',';
    if (restricted) out += fmt(r.k1) + ',';
    out += fmt(r.x) + ',' + std::to_string(r.samples) + ',' + std::to_string(r.exceed) + ',' +
           fmt(r.wilson_lo) + ',' + fmt(r.wilson_hi) + ',' + fmt(r.ref) + '\n';
  }
  return out;
}

json tail_rows_json(const TailReport& rep, bool restricted) {
  json rows = json::array();
  for (const auto& r : rep.rows) {
    json row{{"L", r.L},
             {"samples", r.samples},
             {"exceed", r.exceed},
             {"wilson_lo", r.wilson_lo},
             {"wilson_hi", r.wilson_hi}};
    if (restricted) {
      row["k1"] = r.k1;
      row["M2"] = r.x;
      row["g"] = r.ref;
    } else {
      row["t"] = r.x;
      row["ref_exponent"] = r.ref;
    }
    rows.push_back(row);
  }
  return rows;
}

std::string event_csv(const EventReport& rep) {
  std::string out = "param,trials,hits,freq,wilson_lo,wilson_hi\n";
  for (const auto& r : rep.rows)
    out += std::to_string(r.param) + ',' + std::to_string(r.trials) + ',' +
           std::to_string(r.hits) + ',' + fmt(r.freq) + ',' + fmt(r.wilson_lo) + ',' +
           fmt(r.wilson_hi) + '\n';
  return out;
}

std::string concentration_csv(const ConcentrationReport& rep) {
  std::string out = "N,samples,mean_t,var_t,var_se,ratio_var_over_N\n";
  for (const auto& r : rep.rows)
    out += std::to_string(r.N) + ',' + std::to_string(r.samples) + ',' + fmt(r.mean_t) + ',' +
           fmt(r.var_t) + ',' + fmt(r.var_se) + ',' + fmt(r.ratio) + '\n';
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  ExperimentResult out;
  out.kind = cfg.kind;
  json top;
  top["kind"] = experiment_name(cfg.kind);
  top["config"] = json::parse(config_echo_json(cfg));

  switch (cfg.kind) {
    case ExperimentKind::kScaling: {
      const ScalingReport rep = run_scaling(cfg);
      out.csv = scaling_csv(rep);
      top["rows"] = scaling_rows_json(rep);
      top["fit"] = fit_json(rep.fit, rep.fit_valid);
      break;
    }
    case ExperimentKind::kIidTail:
    case ExperimentKind::kRestrictedLdp: {
      const bool restricted = cfg.kind == ExperimentKind::kRestrictedLdp;
      const TailReport rep = restricted ? run_restricted_ldp(cfg) : run_iid_tail(cfg);
      out.csv = tail_csv(rep, restricted);
      top["rows"] = tail_rows_json(rep, restricted);
      top["fit"] = fit_json(rep.fit, rep.fit_valid);
      break;
    }
    case ExperimentKind::kEventProb: {
      const EventReport rep = run_event_probability(cfg);
      out.csv = event_csv(rep);
      json rows = json::array();
      for (const auto& r : rep.rows)
        rows.push_back(json{{"param", r.param},
                            {"trials", r.trials},
                            {"hits", r.hits},
                            {"freq", r.freq},
                            {"wilson_lo", r.wilson_lo},
                            {"wilson_hi", r.wilson_hi}});
      top["rows"] = rows;
      top["trend"] = rep.trend_valid ? json{{"z", rep.trend.z},
                                            {"p_increasing", rep.trend.p_increasing},
                                            {"p_decreasing", rep.trend.p_decreasing}}
                                     : json(nullptr);
      break;
    }
    case ExperimentKind::kConcentration: {
      const ConcentrationReport rep = run_concentration(cfg);
      out.csv = concentration_csv(rep);
      json rows = json::array();
      for (const auto& r : rep.rows)
        rows.push_back(json{{"N", r.N},
                            {"samples", r.samples},
                            {"mean_t", r.mean_t},
                            {"var_t", r.var_t},
                            {"var_se", r.var_se},
                            {"ratio_var_over_N", r.ratio}});
      top["rows"] = rows;
      top["fit"] = fit_json(rep.fit, rep.fit_valid);
      break;
    }
    case ExperimentKind::kSimulate: {
      const LatticePoint v{std::vector<Coord>(cfg.sim_v)};
      const LatticePoint w{std::vector<Coord>(cfg.sim_w)};
      Region domain = Region::full(cfg.d);
      if (cfg.has_domain) {
        try {
          domain = Region::box(Box(cfg.dom_lo, cfg.dom_hi));
        } catch (const std::invalid_argument& e) {
          throw ConfigError(std::string("domain: ") + e.what());
        }
      }
      WeightConfig wc(cfg.dist, cfg.seed);
      const PassageResult pr = passage_time(wc, v, w, domain, cfg.K);
      double mx = kNan, mn = kNan;
      std::size_t dag_v = 0, dag_e = 0;
      if (!(v == w) && std::isfinite(pr.time)) {
        const GeodesicDag dag = geodesic_dag(wc, v, w, domain, cfg.K);
        const MaxWeightStats st = max_weight_stats(dag);
        mx = st.max_over_geodesics;
        mn = st.min_over_geodesics;
        dag_v = dag.vertices.size();
        dag_e = dag.edges.size();
      }
      out.csv = "time,envelope_limited,maxM,minM,dag_vertices,dag_edges\n" + fmt(pr.time) + ',' +
                std::to_string(pr.envelope_limited ? 1 : 0) + ',' + fmt(mx) + ',' + fmt(mn) + ',' +
                std::to_string(dag_v) + ',' + std::to_string(dag_e) + '\n';
      top["result"] = json{{"time", pr.time},
                           {"envelope_limited", pr.envelope_limited},
                           {"maxM", mx},
                           {"minM", mn},
                           {"dag_vertices", dag_v},
                           {"dag_edges", dag_e}};
      break;
    }
    case ExperimentKind::kXiVerify: {
      if (cfg.m < 1) throw ConfigError("xi-verify requires m >= 1");
      json res;
      try {
        res = json::parse(xi_verify_json(cfg.d, cfg.m));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("xi-verify: ") + e.what());
      }
      out.csv = "d,m,n,degenerate,xi1,xi2,xi3,xi4,sets,edges\n" + std::to_string(cfg.d) + ',' +
                std::to_string(cfg.m) + ',' + std::to_string(res["n"].get<int>()) + ',' +
                std::to_string(res["degenerate"].get<bool>() ? 1 : 0);
      for (const char* key : {"xi1", "xi2", "xi3", "xi4"})
        out.csv += std::string(",") + (res["conditions"][key].get<std::string>() == "pass" ? "1" : "0");
      out.csv += ',' + std::to_string(res["counts"]["sets"].get<std::size_t>()) + ',' +
                 std::to_string(res["counts"]["edges"].get<std::size_t>()) + '\n';
      top["result"] = res;
      break;
    }
  }

  out.json = top.dump(2) + "\n";
  return out;
}

}  // namespace fpplab
