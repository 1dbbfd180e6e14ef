#include "fpplab/passage.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "fpplab/error.hpp"

namespace fpplab {

namespace {

constexpr std::uint32_t kNoVertex = std::numeric_limits<std::uint32_t>::max();

struct HeapItem {
  double dist;
  std::uint32_t idx;
  bool operator>(const HeapItem& o) const { return dist > o.dist; }
};

using MinHeap = std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<HeapItem>>;

}  // namespace

Box terminal_envelope(const LatticePoint& v, const LatticePoint& w, double K) {
  if (v.dim() != w.dim()) throw std::invalid_argument("terminal dimensions differ");
  if (!(K >= 1.0)) throw std::invalid_argument("envelope factor K must be >= 1");
  const Coord span = std::max<Coord>(static_cast<Coord>(linf_dist(v, w)), 2);
  const Coord margin = static_cast<Coord>(std::ceil((K - 1.0) / 2.0 * static_cast<double>(span)));
  std::vector<Coord> lo(static_cast<size_t>(v.dim())), hi(lo.size());
  for (int i = 0; i < v.dim(); ++i) {
    lo[static_cast<size_t>(i)] = std::min(v[i], w[i]) - margin;
    hi[static_cast<size_t>(i)] = std::max(v[i], w[i]) + margin;
  }
  return Box(std::move(lo), std::move(hi));
}

WeightGrid::WeightGrid(const WeightConfig& cfg, Box env) : env_(std::move(env)) {
  d_ = env_.dim();
  const auto sides = env_.side_lengths();
  const unsigned long long vol = env_.volume();
  if (vol > kMaxGridVolume)
    throw ResourceError("grid volume " + std::to_string(vol) + " exceeds solver limit");
  vol_ = static_cast<std::size_t>(vol);
  stride_.assign(static_cast<size_t>(d_), 1);
  for (int a = d_ - 2; a >= 0; --a)
    stride_[static_cast<size_t>(a)] =
        stride_[static_cast<size_t>(a + 1)] * static_cast<std::size_t>(sides[static_cast<size_t>(a + 1)]);

  w_.assign(static_cast<size_t>(d_), {});
  for (auto& arr : w_) arr.assign(vol_, 0.0);

  std::vector<Coord> coords(env_.lo);
  for (std::size_t idx = 0; idx < vol_; ++idx) {
    for (int a = 0; a < d_; ++a) {
      if (coords[static_cast<size_t>(a)] < env_.hi[static_cast<size_t>(a)])
        w_[static_cast<size_t>(a)][idx] = cfg.weight_at(coords, a);
    }
    for (int a = d_ - 1; a >= 0; --a) {
      if (++coords[static_cast<size_t>(a)] <= env_.hi[static_cast<size_t>(a)]) break;
      coords[static_cast<size_t>(a)] = env_.lo[static_cast<size_t>(a)];
    }
  }
}

std::size_t WeightGrid::index_of(const LatticePoint& p) const {
  std::size_t idx = 0;
  for (int a = 0; a < d_; ++a)
    idx += static_cast<std::size_t>(p[a] - env_.lo[static_cast<size_t>(a)]) *
           stride_[static_cast<size_t>(a)];
  return idx;
}

LatticePoint WeightGrid::point_of(std::size_t idx) const {
  LatticePoint p(env_.lo);
  for (int a = 0; a < d_; ++a) {
    const std::size_t s = stride_[static_cast<size_t>(a)];
    p.c[static_cast<size_t>(a)] += static_cast<Coord>(idx / s);
    idx %= s;
  }
  return p;
}

GridDijkstraResult grid_dijkstra(const WeightGrid& grid,
                                 const std::vector<std::pair<LatticePoint, double>>& sources,
                                 const DijkstraOptions& opts,
                                 const std::vector<LatticePoint>* stop_any) {
  const Box& env = grid.env();
  const int d = grid.dim();
  const std::size_t vol = grid.volume();

  GridDijkstraResult res;
  res.dist.assign(vol, kInf);
  res.settled.assign(vol, 0);
  if (opts.track_parents) res.parent.assign(vol, kNoVertex);
  if (opts.track_roots) res.root.assign(vol, kNoVertex);

  std::vector<std::uint8_t> is_stop;
  if (stop_any) {
    is_stop.assign(vol, 0);
    for (const auto& p : *stop_any) {
      if (!env.contains(p)) throw std::invalid_argument("stop vertex outside the grid");
      is_stop[grid.index_of(p)] = 1;
    }
  }

  std::size_t budget_idx = SIZE_MAX;
  if (opts.budget_target) {
    if (!env.contains(*opts.budget_target))
      throw std::invalid_argument("budget target outside the grid");
    budget_idx = grid.index_of(*opts.budget_target);
  }

  MinHeap pq;
  for (const auto& [p, d0] : sources) {
    if (!env.contains(p)) throw std::invalid_argument("source outside the grid");
    if (opts.membership && !opts.membership->contains(p))
      throw std::invalid_argument("source outside the domain");
    const std::size_t i = grid.index_of(p);
    if (d0 < res.dist[i]) {
      res.dist[i] = d0;
      if (opts.track_roots) res.root[i] = static_cast<std::uint32_t>(i);
      pq.push({d0, static_cast<std::uint32_t>(i)});
    }
  }

  double cap = opts.cost_cap;
  LatticePoint scratch(env.lo);
  std::vector<Coord> coords(static_cast<size_t>(d));

  while (!pq.empty()) {
    const auto [du, u] = pq.top();
    pq.pop();
    if (res.settled[u]) continue;
    if (du > cap) break;
    res.settled[u] = 1;

    if (u == budget_idx)
      cap = std::min(cap, du + opts.budget_slack_abs + opts.budget_slack_rel * std::max(1.0, du));
    if (stop_any && is_stop[u]) {
      res.first_stop = static_cast<std::ptrdiff_t>(u);
      res.first_stop_dist = du;
      break;
    }

    {
      std::size_t rem = u;
      for (int a = 0; a < d; ++a) {
        const std::size_t s = grid.stride(a);
        coords[static_cast<size_t>(a)] = env.lo[static_cast<size_t>(a)] + static_cast<Coord>(rem / s);
        rem %= s;
      }
    }

    for (int a = 0; a < d; ++a) {
      for (int sgn = 0; sgn < 2; ++sgn) {
        const bool fwd = sgn == 0;
        if (fwd ? coords[static_cast<size_t>(a)] >= env.hi[static_cast<size_t>(a)]
                : coords[static_cast<size_t>(a)] <= env.lo[static_cast<size_t>(a)])
          continue;
        const std::size_t vtx = fwd ? u + grid.stride(a) : u - grid.stride(a);
        if (res.settled[vtx]) continue;
        const double tau = fwd ? grid.edge_w(u, a) : grid.edge_w(vtx, a);
        const double nd = du + tau;
        if (nd > cap || nd >= res.dist[vtx]) continue;
        if (opts.membership || opts.skip_edges) {
          scratch.c = coords;
          scratch.c[static_cast<size_t>(a)] += fwd ? 1 : -1;
          if (opts.membership && !opts.membership->contains(scratch)) continue;
          if (opts.skip_edges) {
            LatticePoint cur(coords);
            if (opts.skip_edges->count(canonical_edge(cur, scratch))) continue;
          }
        }
        res.dist[vtx] = nd;
        if (opts.track_parents) res.parent[vtx] = u;
        if (opts.track_roots) res.root[vtx] = res.root[u];
        pq.push({nd, static_cast<std::uint32_t>(vtx)});
      }
    }
  }
  return res;
}

namespace {

struct DomainSetup {
  Box env;
  Region membership = Region::full(1);  // unused unless has_membership
  bool has_membership = false;
  bool full_lattice = false;
};

DomainSetup setup_domain(const Region& domain, const LatticePoint& v, const LatticePoint& w,
                         double K) {
  if (!domain.contains(v) || !domain.contains(w))
    throw std::invalid_argument("terminal outside the domain");
  DomainSetup s;
  switch (domain.kind()) {
    case Region::Kind::kFull:
      s.env = terminal_envelope(v, w, K);
      s.full_lattice = true;
      break;
    case Region::Kind::kBox:
      s.env = domain.as_box();
      break;
    case Region::Kind::kExplicit:
      s.env = domain.bounding_box();
      s.membership = domain;
      s.has_membership = true;
      break;
  }
  return s;
}

// Walks parent pointers from `idx` back to a source.
bool path_touches_inner_boundary(const WeightGrid& grid, const GridDijkstraResult& run,
                                 std::size_t idx) {
  const Box& env = grid.env();
  for (std::uint32_t cur = static_cast<std::uint32_t>(idx); cur != kNoVertex;
       cur = run.parent[cur]) {
    if (env.on_inner_boundary(grid.point_of(cur))) return true;
  }
  return false;
}

}  // namespace

PassageResult passage_time(const WeightConfig& cfg, const LatticePoint& v, const LatticePoint& w,
                           const Region& domain, double K) {
  if (v.dim() != w.dim()) throw std::invalid_argument("terminal dimensions differ");
  const DomainSetup s = setup_domain(domain, v, w, K);

  PassageResult out;
  out.source = v;
  out.target = w;
  out.envelope = s.env;
  if (v == w) {
    out.time = 0.0;
    return out;
  }

  WeightGrid grid(cfg, s.env);
  DijkstraOptions opts;
  if (s.has_membership) opts.membership = &s.membership;
  opts.track_parents = s.full_lattice;
  std::vector<LatticePoint> stops{w};
  const auto run = grid_dijkstra(grid, {{v, 0.0}}, opts, &stops);
  if (run.first_stop < 0) return out;  // disconnected within the domain
  out.time = run.first_stop_dist;
  if (s.full_lattice)
    out.envelope_limited =
        path_touches_inner_boundary(grid, run, static_cast<std::size_t>(run.first_stop));
  return out;
}

PassageResult box_to_box_passage(const WeightConfig& cfg, const Region& D0, const Region& D1,
                                 const Region& envelope) {
  if (envelope.kind() == Region::Kind::kFull)
    throw std::invalid_argument("box_to_box_passage needs a bounded envelope");
  const Box env =
      envelope.kind() == Region::Kind::kBox ? envelope.as_box() : envelope.bounding_box();

  const auto starts = D0.vertices();
  const auto goals = D1.vertices();
  if (starts.empty() || goals.empty()) throw std::invalid_argument("empty terminal region");
  for (const auto& p : starts)
    if (D1.contains(p)) throw std::invalid_argument("terminal regions intersect");
  for (const auto& p : starts)
    if (!env.contains(p)) throw std::invalid_argument("terminal region leaves the envelope");
  for (const auto& p : goals)
    if (!env.contains(p)) throw std::invalid_argument("terminal region leaves the envelope");

  PassageResult out;
  out.envelope = env;
  out.source = starts.front();
  out.target = goals.front();

  WeightGrid grid(cfg, env);
  Region membership = envelope;
  DijkstraOptions opts;
  if (envelope.kind() == Region::Kind::kExplicit) opts.membership = &membership;
  opts.track_roots = true;
  std::vector<std::pair<LatticePoint, double>> sources;
  sources.reserve(starts.size());
  for (const auto& p : starts) sources.emplace_back(p, 0.0);
  const auto run = grid_dijkstra(grid, sources, opts, &goals);
  if (run.first_stop < 0) return out;
  out.time = run.first_stop_dist;
  out.target = grid.point_of(static_cast<std::size_t>(run.first_stop));
  out.source = grid.point_of(run.root[static_cast<std::size_t>(run.first_stop)]);
  return out;
}

namespace {

GeodesicDag assemble_dag(const WeightConfig& cfg, const WeightGrid& grid,
                         const std::vector<std::pair<LatticePoint, double>>& fwd_sources,
                         const std::vector<std::pair<LatticePoint, double>>& bwd_sources,
                         const Region* membership, bool full_lattice) {
  GeodesicDag dag;
  dag.envelope = grid.env();

  DijkstraOptions base_opts;
  base_opts.membership = membership;

  // Probe: optimal time T as the first settled terminal of the other side.
  double T = kInf;
  {
    std::vector<LatticePoint> stops;
    stops.reserve(bwd_sources.size());
    for (const auto& sp : bwd_sources) stops.push_back(sp.first);
    const auto run = grid_dijkstra(grid, fwd_sources, base_opts, &stops);
    if (run.first_stop < 0) throw std::invalid_argument("terminals are disconnected");
    T = run.first_stop_dist;
  }
  dag.total_time = T;
  dag.tie_tolerance = cfg.dist().integer_atomic() ? 0.0 : 1e-12 * std::max(1.0, T);
  const double cap = T + dag.tie_tolerance;

  DijkstraOptions capped = base_opts;
  capped.cost_cap = cap;
  const auto fwd = grid_dijkstra(grid, fwd_sources, capped);
  const auto bwd = grid_dijkstra(grid, bwd_sources, capped);

  const int d = grid.dim();
  const std::size_t vol = grid.volume();

  std::vector<std::uint32_t> mark(vol, kNoVertex);
  auto vertex_id = [&](std::size_t idx) {
    if (mark[idx] == kNoVertex) {
      mark[idx] = static_cast<std::uint32_t>(dag.vertices.size());
      dag.vertices.push_back({grid.point_of(idx), fwd.dist[idx], bwd.dist[idx]});
    }
    return mark[idx];
  };

  const Box& env = grid.env();
  std::vector<Coord> coords(env.lo);
  for (std::size_t idx = 0; idx < vol; ++idx) {
    for (int a = 0; a < d; ++a) {
      if (coords[static_cast<size_t>(a)] < env.hi[static_cast<size_t>(a)]) {
        const std::size_t nb = idx + grid.stride(a);
        const double tau = grid.edge_w(idx, a);
        // On zero-weight plateaus both orientations qualify; the
        // lexicographically increasing one is kept so the graph stays acyclic.
        if (fwd.dist[idx] + tau + bwd.dist[nb] <= cap) {
          dag.edges.push_back({vertex_id(idx), vertex_id(nb), tau});
        } else if (fwd.dist[nb] + tau + bwd.dist[idx] <= cap) {
          dag.edges.push_back({vertex_id(nb), vertex_id(idx), tau});
        }
      }
    }
    for (int a = d - 1; a >= 0; --a) {
      if (++coords[static_cast<size_t>(a)] <= env.hi[static_cast<size_t>(a)]) break;
      coords[static_cast<size_t>(a)] = env.lo[static_cast<size_t>(a)];
    }
  }

  for (const auto& sp : fwd_sources) {
    const std::size_t idx = grid.index_of(sp.first);
    if (fwd.dist[idx] + bwd.dist[idx] <= cap) dag.sources.push_back(vertex_id(idx));
  }
  for (const auto& sp : bwd_sources) {
    const std::size_t idx = grid.index_of(sp.first);
    if (fwd.dist[idx] + bwd.dist[idx] <= cap) dag.targets.push_back(vertex_id(idx));
  }

  if (full_lattice) {
    for (const auto& vx : dag.vertices) {
      if (env.on_inner_boundary(vx.p)) {
        dag.envelope_limited = true;
        break;
      }
    }
  }
  return dag;
}

}  // namespace

GeodesicDag geodesic_dag(const WeightConfig& cfg, const LatticePoint& v, const LatticePoint& w,
                         const Region& domain, double K) {
  if (v.dim() != w.dim()) throw std::invalid_argument("terminal dimensions differ");
  if (v == w) throw std::invalid_argument("geodesic_dag needs distinct terminals");
  const DomainSetup s = setup_domain(domain, v, w, K);
  WeightGrid grid(cfg, s.env);
  return assemble_dag(cfg, grid, {{v, 0.0}}, {{w, 0.0}},
                      s.has_membership ? &s.membership : nullptr, s.full_lattice);
}

GeodesicDag geodesic_dag_boxes(const WeightConfig& cfg, const Region& D0, const Region& D1,
                               const Region& envelope) {
  if (envelope.kind() == Region::Kind::kFull)
    throw std::invalid_argument("geodesic_dag_boxes needs a bounded envelope");
  const Box env =
      envelope.kind() == Region::Kind::kBox ? envelope.as_box() : envelope.bounding_box();
  const auto starts = D0.vertices();
  const auto goals = D1.vertices();
  if (starts.empty() || goals.empty()) throw std::invalid_argument("empty terminal region");
  for (const auto& p : starts)
    if (D1.contains(p)) throw std::invalid_argument("terminal regions intersect");

  WeightGrid grid(cfg, env);
  Region membership = envelope;
  std::vector<std::pair<LatticePoint, double>> fs, bs;
  for (const auto& p : starts) fs.emplace_back(p, 0.0);
  for (const auto& p : goals) bs.emplace_back(p, 0.0);
  return assemble_dag(cfg, grid, fs, bs,
                      envelope.kind() == Region::Kind::kExplicit ? &membership : nullptr, false);
}

MaxWeightStats max_weight_stats(const GeodesicDag& dag) {
  if (dag.edges.empty()) throw std::invalid_argument("geodesic DAG has no edges");
  MaxWeightStats st;
  st.dag_edge_count = dag.edges.size();
  st.max_over_geodesics = 0.0;
  for (const auto& e : dag.edges) st.max_over_geodesics = std::max(st.max_over_geodesics, e.weight);

  // min over geodesics of their max edge: least threshold theta such that
  // edges of weight <= theta still connect a source to a target.
  std::vector<double> weights;
  weights.reserve(dag.edges.size());
  for (const auto& e : dag.edges) weights.push_back(e.weight);
  std::sort(weights.begin(), weights.end());
  weights.erase(std::unique(weights.begin(), weights.end()), weights.end());

  std::vector<std::vector<std::pair<std::uint32_t, double>>> adj(dag.vertices.size());
  for (const auto& e : dag.edges) adj[e.u].emplace_back(e.v, e.weight);
  std::vector<std::uint8_t> is_target(dag.vertices.size(), 0);
  for (auto t : dag.targets) is_target[t] = 1;

  auto reaches = [&](double theta) {
    std::vector<std::uint8_t> seen(dag.vertices.size(), 0);
    std::vector<std::uint32_t> stack;
    for (auto s : dag.sources) {
      if (!seen[s]) {
        seen[s] = 1;
        stack.push_back(s);
      }
    }
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      if (is_target[u]) return true;
      for (const auto& [v, w] : adj[u]) {
        if (w <= theta && !seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
      }
    }
    return false;
  };

  std::size_t lo = 0, hi = weights.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (reaches(weights[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  st.min_over_geodesics = weights[lo];
  return st;
}

std::vector<std::vector<LatticePoint>> enumerate_geodesics(const GeodesicDag& dag,
                                                           std::size_t cap) {
  std::vector<std::vector<std::uint32_t>> adj(dag.vertices.size());
  for (const auto& e : dag.edges) adj[e.u].push_back(e.v);
  for (auto& nbrs : adj)
    std::sort(nbrs.begin(), nbrs.end(), [&](std::uint32_t a, std::uint32_t b) {
      return dag.vertices[a].p < dag.vertices[b].p;
    });
  std::vector<std::uint8_t> is_target(dag.vertices.size(), 0);
  for (auto t : dag.targets) is_target[t] = 1;

  std::vector<std::vector<LatticePoint>> out;
  std::vector<std::uint32_t> path;
  std::vector<std::size_t> next_child;

  auto sorted_sources = dag.sources;
  std::sort(sorted_sources.begin(), sorted_sources.end(),
            [&](std::uint32_t a, std::uint32_t b) { return dag.vertices[a].p < dag.vertices[b].p; });

  for (auto s : sorted_sources) {
    path.assign(1, s);
    next_child.assign(1, 0);
    while (!path.empty()) {
      const auto u = path.back();
      if (next_child.back() == 0 && is_target[u]) {
        if (out.size() >= cap)
          throw GeodesicOverflowError("geodesic count exceeds cap " + std::to_string(cap));
        std::vector<LatticePoint> pts;
        pts.reserve(path.size());
        for (auto i : path) pts.push_back(dag.vertices[i].p);
        out.push_back(std::move(pts));
        path.pop_back();
        next_child.pop_back();
        continue;
      }
      if (next_child.back() < adj[u].size()) {
        const auto v = adj[u][next_child.back()++];
        path.push_back(v);
        next_child.push_back(0);
      } else {
        path.pop_back();
        next_child.pop_back();
      }
    }
  }
  return out;
}

EnvelopeCheck geodesic_envelope_check(const WeightConfig& cfg, int d, Coord N, double K,
                                      const Box* domain) {
  if (d < 2) throw std::invalid_argument("dimension must be >= 2");
  if (N < 1) throw std::invalid_argument("N must be >= 1");
  if (!(K > 0.0)) throw std::invalid_argument("K must be positive");

  const Coord KN = static_cast<Coord>(std::ceil(K * static_cast<double>(N)));
  const Box b_kn(std::vector<Coord>(static_cast<size_t>(d), -KN),
                 std::vector<Coord>(static_cast<size_t>(d), KN));
  Box dom = b_kn.inflated(std::max<Coord>(4, N / 8));
  if (domain) {
    if (domain->dim() != d) throw std::invalid_argument("domain dimension mismatch");
    for (int i = 0; i < d; ++i)
      if (domain->lo[static_cast<size_t>(i)] >= b_kn.lo[static_cast<size_t>(i)] ||
          domain->hi[static_cast<size_t>(i)] <= b_kn.hi[static_cast<size_t>(i)])
        throw std::invalid_argument("domain must strictly contain the envelope box");
    dom = *domain;
  }

  LatticePoint v = zero_point(d);
  LatticePoint w = zero_point(d);
  w.c[0] = N;
  const auto dag = geodesic_dag(cfg, v, w, Region::box(dom));

  EnvelopeCheck chk;
  chk.time = dag.total_time;
  chk.contained = true;
  for (const auto& vx : dag.vertices) {
    if (!b_kn.contains(vx.p)) chk.contained = false;
    if (dom.on_inner_boundary(vx.p)) chk.domain_limited = true;
    Coord disp = 0;
    const Coord x = vx.p[0];
    if (x < 0) disp = -x;
    if (x > N) disp = std::max(disp, x - N);
    for (int i = 1; i < d; ++i) disp = std::max(disp, std::abs(vx.p[i]));
    chk.max_displacement = std::max(chk.max_displacement, static_cast<double>(disp));
  }
  return chk;
}

}  // namespace fpplab
