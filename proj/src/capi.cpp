#include "fpplab.h"

#include <cstring>
#include <new>
#include <string>

#include "fpplab/error.hpp"
#include "fpplab/harness.hpp"
#include "fpplab/passage.hpp"
#include "fpplab/weights.hpp"

using namespace fpplab;

namespace {

thread_local std::string g_error;

fpp_status fail(fpp_status code, const std::string& msg) {
  g_error = msg;
  return code;
}

// Exceptions never cross the C boundary; they map onto status codes here.
template <typename Fn>
fpp_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    return fail(FPP_ERR_CONFIG, e.what());
  } catch (const ResourceError& e) {
    return fail(FPP_ERR_RESOURCE, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(FPP_ERR_INVALID, e.what());
  } catch (const std::logic_error& e) {
    return fail(FPP_ERR_INVALID, e.what());
  } catch (const std::bad_alloc&) {
    return fail(FPP_ERR_RESOURCE, "out of memory");
  } catch (const std::exception& e) {
    return fail(FPP_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(FPP_ERR_INTERNAL, "unknown error");
  }
}

LatticePoint point_from(const int64_t* c, int32_t d) {
  return LatticePoint(std::vector<Coord>(c, c + d));
}

}  // namespace

struct fpp_weights {
  WeightConfig cfg;
};

struct fpp_report {
  std::string kind, csv, json;
};

extern "C" {

const char* fpp_version(void) { return "1.0.0"; }

const char* fpp_last_error(void) { return g_error.c_str(); }

void fpp_string_free(char* s) { delete[] s; }

fpp_status fpp_weights_create(const char* dist_json, uint64_t seed, fpp_weights** out) {
  if (!dist_json || !out) return fail(FPP_ERR_INVALID, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new fpp_weights{WeightConfig(distribution_from_json(dist_json), seed)};
    return FPP_OK;
  });
}

void fpp_weights_destroy(fpp_weights* w) { delete w; }

fpp_status fpp_edge_weight(const fpp_weights* w, const int64_t* base, int32_t d, int32_t axis,
                           double* out) {
  if (!w || !base || !out || d < 1) return fail(FPP_ERR_INVALID, "null argument or bad dimension");
  if (axis < 0 || axis >= d) return fail(FPP_ERR_INVALID, "axis out of range");
  return guarded([&] {
    *out = w->cfg.weight(EdgeId{point_from(base, d), axis});
    return FPP_OK;
  });
}

fpp_status fpp_passage_time(const fpp_weights* w, const int64_t* v, const int64_t* u, int32_t d,
                            const int64_t* box_lo, const int64_t* box_hi, double K,
                            double* time_out, int32_t* envelope_limited) {
  if (!w || !v || !u || !time_out || d < 1)
    return fail(FPP_ERR_INVALID, "null argument or bad dimension");
  if (!!box_lo != !!box_hi) return fail(FPP_ERR_INVALID, "box_lo and box_hi must come together");
  return guarded([&] {
    Region domain = box_lo ? Region::box(Box(std::vector<Coord>(box_lo, box_lo + d),
                                             std::vector<Coord>(box_hi, box_hi + d)))
                           : Region::full(d);
    const PassageResult pr = passage_time(w->cfg, point_from(v, d), point_from(u, d), domain, K);
    *time_out = pr.time;
    if (envelope_limited) *envelope_limited = pr.envelope_limited ? 1 : 0;
    return FPP_OK;
  });
}

fpp_status fpp_geodesic_stats(const fpp_weights* w, const int64_t* v, const int64_t* u, int32_t d,
                              double K, double* max_out, double* min_out, uint64_t* edge_count) {
  if (!w || !v || !u || !max_out || !min_out || d < 1)
    return fail(FPP_ERR_INVALID, "null argument or bad dimension");
  return guarded([&] {
    const GeodesicDag dag =
        geodesic_dag(w->cfg, point_from(v, d), point_from(u, d), Region::full(d), K);
    const MaxWeightStats st = max_weight_stats(dag);
    *max_out = st.max_over_geodesics;
    *min_out = st.min_over_geodesics;
    if (edge_count) *edge_count = st.dag_edge_count;
    return FPP_OK;
  });
}

fpp_status fpp_xi_verify_json(int32_t d, int64_t m, char** json_out) {
  if (!json_out) return fail(FPP_ERR_INVALID, "null argument");
  *json_out = nullptr;
  return guarded([&] {
    const std::string s = xi_verify_json(d, m);
    char* buf = new char[s.size() + 1];
    std::memcpy(buf, s.c_str(), s.size() + 1);
    *json_out = buf;
    return FPP_OK;
  });
}

fpp_status fpp_run_experiment(const char* config_json, fpp_report** out) {
  if (!config_json || !out) return fail(FPP_ERR_INVALID, "null argument");
  *out = nullptr;
  return guarded([&] {
    const ExperimentConfig cfg = config_from_json(config_json);
    ExperimentResult res = run_experiment(cfg);
    *out = new fpp_report{experiment_name(res.kind), std::move(res.csv), std::move(res.json)};
    return FPP_OK;
  });
}

const char* fpp_report_csv(const fpp_report* r) { return r ? r->csv.c_str() : ""; }

const char* fpp_report_json(const fpp_report* r) { return r ? r->json.c_str() : ""; }

const char* fpp_report_kind(const fpp_report* r) { return r ? r->kind.c_str() : ""; }

void fpp_report_destroy(fpp_report* r) { delete r; }

}  // extern "C"
