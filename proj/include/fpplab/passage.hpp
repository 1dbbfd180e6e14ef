#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "fpplab/lattice.hpp"
#include "fpplab/weights.hpp"

namespace fpplab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
// Dense-grid volume guard; exceeding it raises ResourceError (CLI exit 3).
inline constexpr unsigned long long kMaxGridVolume = 50'000'000ULL;

// Envelope box for "full lattice" queries: bounding box of the terminals,
// inflated per axis by ceil((K-1)/2 * max(linf(v-w), 2)).
Box terminal_envelope(const LatticePoint& v, const LatticePoint& w, double K);

// Edge weights of cfg materialized over a box, axis-major flat arrays.
class WeightGrid {
 public:
  WeightGrid(const WeightConfig& cfg, Box env);

  const Box& env() const { return env_; }
  int dim() const { return d_; }
  std::size_t volume() const { return vol_; }
  std::size_t stride(int axis) const { return stride_[static_cast<size_t>(axis)]; }
  std::size_t index_of(const LatticePoint& p) const;
  LatticePoint point_of(std::size_t idx) const;
  // Weight of the edge from idx to idx + stride(axis); caller guarantees the
  // neighbor is inside the box.
  double edge_w(std::size_t idx, int axis) const {
    return w_[static_cast<size_t>(axis)][idx];
  }

 private:
  Box env_;
  int d_ = 0;
  std::size_t vol_ = 0;
  std::vector<std::size_t> stride_;
  std::vector<std::vector<double>> w_;
};

struct DijkstraOptions {
  const Region* membership = nullptr;   // restrict vertices beyond the box
  const EdgeSet* skip_edges = nullptr;  // edges removed from the graph
  double cost_cap = kInf;               // exact below the cap; beyond is unexplored
  // After this target settles, the cap tightens to its distance plus slack.
  const LatticePoint* budget_target = nullptr;
  double budget_slack_abs = 0.0;
  double budget_slack_rel = 0.0;
  bool track_parents = false;
  bool track_roots = false;
};

struct GridDijkstraResult {
  std::vector<double> dist;             // kInf where unreached
  std::vector<std::uint8_t> settled;
  std::vector<std::uint32_t> parent;    // UINT32_MAX at sources/unreached
  std::vector<std::uint32_t> root;      // source index per vertex (track_roots)
  std::ptrdiff_t first_stop = -1;       // flat index of first settled stop vertex
  double first_stop_dist = kInf;
};

GridDijkstraResult grid_dijkstra(const WeightGrid& grid,
                                 const std::vector<std::pair<LatticePoint, double>>& sources,
                                 const DijkstraOptions& opts = {},
                                 const std::vector<LatticePoint>* stop_any = nullptr);

struct PassageResult {
  double time = kInf;  // +inf when disconnected within the domain
  LatticePoint source, target;
  Box envelope;
  bool envelope_limited = false;  // full-lattice queries only
};

// Restricted first passage time t_D(v,w). A full-lattice domain is served via
// terminal_envelope(v,w,K) and the result is flagged when the witnessing
// geodesic touches that envelope.
PassageResult passage_time(const WeightConfig& cfg, const LatticePoint& v, const LatticePoint& w,
                           const Region& domain, double K = 2.0);

// min over (v,w) in D0 x D1 of t(v,w) within the envelope; the achieving pair
// is reported. Rejects intersecting terminal regions.
PassageResult box_to_box_passage(const WeightConfig& cfg, const Region& D0, const Region& D1,
                                 const Region& envelope);

struct DagVertex {
  LatticePoint p;
  double dist_from_source = 0.0;
  double dist_to_target = 0.0;
};

struct DagEdge {
  std::uint32_t u = 0, v = 0;  // oriented by increasing source distance
  double weight = 0.0;
};

// Union of all optimal paths, collapsed to a DAG. Zero-weight plateaus are
// oriented lexicographically so the structure stays acyclic.
struct GeodesicDag {
  std::vector<DagVertex> vertices;
  std::vector<DagEdge> edges;
  std::vector<std::uint32_t> sources, targets;
  double total_time = 0.0;
  double tie_tolerance = 0.0;
  Box envelope;
  bool envelope_limited = false;
};

GeodesicDag geodesic_dag(const WeightConfig& cfg, const LatticePoint& v, const LatticePoint& w,
                         const Region& domain, double K = 2.0);
GeodesicDag geodesic_dag_boxes(const WeightConfig& cfg, const Region& D0, const Region& D1,
                               const Region& envelope);

struct MaxWeightStats {
  double max_over_geodesics = 0.0;  // max edge weight in the DAG
  double min_over_geodesics = 0.0;  // least threshold keeping source-target connectivity
  std::size_t dag_edge_count = 0;
};

// Rejects empty DAGs (no edges).
MaxWeightStats max_weight_stats(const GeodesicDag& dag);

// All self-avoiding geodesic representatives in the DAG, as vertex paths.
// Throws GeodesicOverflowError beyond `cap` paths.
std::vector<std::vector<LatticePoint>> enumerate_geodesics(const GeodesicDag& dag,
                                                           std::size_t cap = 1u << 20);

struct EnvelopeCheck {
  bool contained = false;      // all DAG vertices inside B_KN = [-KN, KN]^d
  double max_displacement = 0.0;  // max sup-distance of DAG vertices from the segment [0, N e1]
  double time = 0.0;
  bool domain_limited = false;  // DAG touched the simulation domain itself
};

// Geodesic envelope check for the pair (0, N e1). The simulation domain must
// strictly contain B_KN; defaults to B_KN padded by max(4, N/8).
EnvelopeCheck geodesic_envelope_check(const WeightConfig& cfg, int d, Coord N, double K,
                                      const Box* domain = nullptr);

}  // namespace fpplab
