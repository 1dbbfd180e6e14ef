#include "fpplab/shells_boxes.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <stdexcept>

#include "fpplab/error.hpp"
#include "fpplab/order.hpp"

namespace fpplab {

namespace {

// Shortest-path structure over an explicit vertex set with nearest-neighbor
// adjacency; small graphs only.
struct SparseGraph {
  std::vector<LatticePoint> verts;
  PointMap<std::uint32_t> index;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;

  SparseGraph(const std::vector<LatticePoint>& vs, const WeightConfig& cfg) : verts(vs) {
    for (std::uint32_t i = 0; i < verts.size(); ++i) index.emplace(verts[i], i);
    adj.resize(verts.size());
    for (std::uint32_t i = 0; i < verts.size(); ++i) {
      const auto& p = verts[i];
      for (int a = 0; a < p.dim(); ++a) {
        const LatticePoint q = unit_shift(p, a, 1);
        auto it = index.find(q);
        if (it == index.end()) continue;
        const double w = cfg.weight(EdgeId{p, a});
        adj[i].emplace_back(it->second, w);
        adj[it->second].emplace_back(i, w);
      }
    }
  }

  std::vector<double> dijkstra(std::uint32_t src, std::vector<std::uint32_t>* parent = nullptr,
                               double cap = kInf) const {
    std::vector<double> dist(verts.size(), kInf);
    std::vector<std::uint8_t> done(verts.size(), 0);
    if (parent) parent->assign(verts.size(), UINT32_MAX);
    using Item = std::pair<double, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    dist[src] = 0;
    pq.push({0.0, src});
    while (!pq.empty()) {
      auto [du, u] = pq.top();
      pq.pop();
      if (done[u]) continue;
      if (du > cap) break;
      done[u] = 1;
      for (const auto& [v, w] : adj[u]) {
        const double nd = du + w;
        if (nd < dist[v] && nd <= cap) {
          dist[v] = nd;
          if (parent) (*parent)[v] = u;
          pq.push({nd, v});
        }
      }
    }
    return dist;
  }
};

double log_n(double N) { return std::log(N); }

std::uint64_t max_l1_to_box(const LatticePoint& v, const Box& b) {
  std::uint64_t s = 0;
  for (int i = 0; i < v.dim(); ++i) {
    const Coord a = v[i] - b.lo[static_cast<size_t>(i)];
    const Coord c = b.hi[static_cast<size_t>(i)] - v[i];
    s += static_cast<std::uint64_t>(std::max(a, c));
  }
  return s;
}

}  // namespace

double shell_max_restricted_time(const WeightConfig& cfg, const Shell& shell) {
  const SparseGraph g(shell.vertices(), cfg);
  double worst = 0.0;
  for (std::uint32_t s = 0; s < g.verts.size(); ++s) {
    const auto dist = g.dijkstra(s);
    for (std::uint32_t t = s + 1; t < g.verts.size(); ++t) {
      if (dist[t] == kInf) return kInf;
      worst = std::max(worst, dist[t]);
    }
  }
  return worst;
}

GoodEdgeResult is_good_edge(const WeightConfig& cfg, const EdgeId& e, const GoodEdgeParams& p) {
  const int d = e.base.dim();
  if (d < 2) throw std::invalid_argument("good-edge scan needs d >= 2");
  GoodEdgeResult res;
  res.f = order_f(d, p.r, p.N);

  double threshold = 0.0;
  int k_max = 0;
  switch (p.variant) {
    case GoodVariant::kSubexp:
      if (!(p.r > 0.0 && p.r <= 1.0))
        throw std::invalid_argument("subexponential variant needs 0 < r <= 1");
      if (!(p.M > 0)) throw std::invalid_argument("M must be positive");
      threshold = 2.0 * p.M * res.f;
      k_max = static_cast<int>(std::floor(res.f));
      break;
    case GoodVariant::kMoment:
      if (p.r != 0.0) throw std::invalid_argument("moment variant needs r = 0");
      if (!(p.M > 0)) throw std::invalid_argument("M must be positive");
      threshold = 4.0 * d * d * p.M * p.M * res.f;
      k_max = static_cast<int>(std::floor(p.M * res.f));
      break;
    case GoodVariant::kSuperexp:
      if (!(p.r > 1.0)) throw std::invalid_argument("superexponential variant needs r > 1");
      if (!(p.M2 > 0)) throw std::invalid_argument("M2 must be positive");
      threshold = 2.0 * d * p.M2 * res.f;
      k_max = static_cast<int>(std::floor(res.f));
      break;
  }
  res.threshold = threshold;
  res.k_max = k_max;

  for (int k = 1; k <= k_max; ++k) {
    if (shell_max_restricted_time(cfg, Shell(e, k)) <= threshold) {
      res.good = true;
      res.witness_k = k;
      return res;
    }
  }
  return res;
}

DetourResult detour_rewrite(const WeightConfig& cfg, const std::vector<LatticePoint>& path,
                            const EdgeId& heavy, int k) {
  if (path.size() < 2) throw std::invalid_argument("path needs at least one edge");
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    if (l1_dist(path[i], path[i + 1]) != 1)
      throw std::invalid_argument("path steps must be nearest-neighbor");
  }

  DetourResult out;
  out.old_time = cfg.path_time(path);
  out.path = path;
  out.new_time = out.old_time;

  std::ptrdiff_t h = -1;
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    if (canonical_edge(path[i], path[i + 1]) == heavy) {
      h = static_cast<std::ptrdiff_t>(i);
      break;
    }
  }
  if (h < 0) throw std::invalid_argument("heavy edge does not lie on the path");

  const Shell shell(heavy, k);
  std::ptrdiff_t m = -1, l = -1;
  for (size_t i = 0; i < path.size(); ++i) {
    if (shell.contains(path[i])) {
      if (m < 0) m = static_cast<std::ptrdiff_t>(i);
      l = static_cast<std::ptrdiff_t>(i);
    }
  }
  // The shell hits must straddle the heavy edge.
  if (m < 0 || !(m <= h && h + 1 <= l)) return out;

  const SparseGraph g(shell.vertices(), cfg);
  const auto src = g.index.at(path[static_cast<size_t>(m)]);
  const auto dst = g.index.at(path[static_cast<size_t>(l)]);
  std::vector<std::uint32_t> parent;
  const auto dist = g.dijkstra(src, &parent);
  if (dist[dst] == kInf) return out;

  std::vector<LatticePoint> mid;
  for (std::uint32_t cur = dst; cur != UINT32_MAX; cur = parent[cur]) mid.push_back(g.verts[cur]);
  std::reverse(mid.begin(), mid.end());

  std::vector<LatticePoint> spliced(path.begin(), path.begin() + m);
  spliced.insert(spliced.end(), mid.begin(), mid.end());
  spliced.insert(spliced.end(), path.begin() + l + 1, path.end());

  // Loop-erase so the rewrite stays self-avoiding; weights are nonnegative so
  // this never increases the time.
  std::vector<LatticePoint> simple;
  PointMap<std::size_t> seen;
  for (const auto& v : spliced) {
    auto it = seen.find(v);
    if (it != seen.end()) {
      while (simple.size() > it->second + 1) {
        seen.erase(simple.back());
        simple.pop_back();
      }
      continue;
    }
    seen.emplace(v, simple.size());
    simple.push_back(v);
  }

  out.path = std::move(simple);
  out.new_time = cfg.path_time(out.path);
  out.rerouted = true;
  return out;
}

// ---- box frames ---------------------------------------------------------------

Box BoxFrame::S() const {
  std::vector<Coord> lo(l.size()), hi(l.size());
  for (size_t i = 0; i < l.size(); ++i) {
    lo[i] = n * l[i];
    hi[i] = n * l[i] + n - 1;
  }
  return Box(std::move(lo), std::move(hi));
}

Box BoxFrame::T() const {
  std::vector<Coord> lo(l.size()), hi(l.size());
  for (size_t i = 0; i < l.size(); ++i) {
    lo[i] = n * l[i] - n;
    hi[i] = n * l[i] + 2 * n;
  }
  return Box(std::move(lo), std::move(hi));
}

Box BoxFrame::B() const {
  const int a = axis();
  std::vector<Coord> lo(l.size()), hi(l.size());
  for (size_t i = 0; i < l.size(); ++i) {
    lo[i] = n * l[i] - n;
    hi[i] = n * l[i] + 2 * n;
  }
  if (sign() > 0) {
    lo[static_cast<size_t>(a)] = n * l[static_cast<size_t>(a)] + n;
  } else {
    hi[static_cast<size_t>(a)] = n * l[static_cast<size_t>(a)];
  }
  return Box(std::move(lo), std::move(hi));
}

BoxFrame make_box_frame(const std::vector<Coord>& l, Coord n, int j) {
  const int d = static_cast<int>(l.size());
  if (d < 2) throw std::invalid_argument("box frame needs d >= 2");
  if (n < 1) throw std::invalid_argument("box scale n must be >= 1");
  if (j == 0 || j > d || j < -d) throw std::invalid_argument("direction j must be in {+-1..+-d}");
  BoxFrame f;
  f.l = l;
  f.n = n;
  f.j = j;
  return f;
}

// ---- skeletons ------------------------------------------------------------------

Skeleton build_skeleton(const BoxFrame& frame, Coord n1, SkeletonVariant variant) {
  if (n1 < 1) throw std::invalid_argument("skeleton pitch n1 must be >= 1");
  if (variant == SkeletonVariant::kV2 && n1 % 2 != 0)
    throw std::invalid_argument("v2 skeleton needs even n1");

  Skeleton sk;
  sk.frame = frame;
  sk.n1 = n1;
  sk.variant = variant;

  const Box B = frame.B();
  const int d = frame.dim();

  // D: lattice points of pitch n1 at sup-distance > n1 from the complement.
  std::vector<std::vector<Coord>> axis_vals(static_cast<size_t>(d));
  bool any_empty = false;
  for (int i = 0; i < d; ++i) {
    const Coord lo = B.lo[static_cast<size_t>(i)] + n1;
    const Coord hi = B.hi[static_cast<size_t>(i)] - n1;
    for (Coord m = (lo >= 0 ? (lo + n1 - 1) / n1 : -((-lo) / n1)); m * n1 <= hi; ++m)
      axis_vals[static_cast<size_t>(i)].push_back(m * n1);
    if (axis_vals[static_cast<size_t>(i)].empty()) any_empty = true;
  }
  if (!any_empty) {
    std::vector<size_t> pick(static_cast<size_t>(d), 0);
    while (true) {
      std::vector<Coord> c(static_cast<size_t>(d));
      for (int i = 0; i < d; ++i) c[static_cast<size_t>(i)] = axis_vals[static_cast<size_t>(i)][pick[static_cast<size_t>(i)]];
      sk.D.emplace_back(std::move(c));
      int i = d - 1;
      while (i >= 0 && ++pick[static_cast<size_t>(i)] == axis_vals[static_cast<size_t>(i)].size()) {
        pick[static_cast<size_t>(i)] = 0;
        --i;
      }
      if (i < 0) break;
    }
  }
  std::sort(sk.D.begin(), sk.D.end());

  // C: axis lines through D, clipped to B.
  for (const auto& v : sk.D) {
    for (int a = 0; a < d; ++a) {
      LatticePoint p = v;
      for (Coord x = B.lo[static_cast<size_t>(a)]; x <= B.hi[static_cast<size_t>(a)]; ++x) {
        p.c[static_cast<size_t>(a)] = x;
        sk.C_set.insert(p);
      }
    }
  }
  sk.C.assign(sk.C_set.begin(), sk.C_set.end());
  std::sort(sk.C.begin(), sk.C.end());

  for (const auto& p : sk.C) {
    for (int a = 0; a < d; ++a) {
      if (sk.C_set.count(unit_shift(p, a, 1))) {
        EdgeId e{p, a};
        sk.C_edges.push_back(e);
        sk.C_edge_set.insert(e);
      }
    }
  }

  if (variant == SkeletonVariant::kV1) {
    for (const auto& p : sk.C) {
      if (B.on_inner_boundary(p)) continue;
      for (int a = 0; a < d; ++a) {
        for (Coord s : {Coord{1}, Coord{-1}}) {
          const LatticePoint q = unit_shift(p, a, s);
          if (sk.C_set.count(q) && !B.on_inner_boundary(q)) continue;
          const EdgeId e = canonical_edge(p, q);
          if (sk.E_tilde_set.insert(e).second) sk.E_tilde.push_back(e);
        }
      }
    }
  } else {
    const std::uint64_t half = static_cast<std::uint64_t>(n1) / 2;
    for (const auto& p : sk.C) {
      for (const auto& w : sk.D) {
        if (l1_dist(p, w) == half) {
          if (sk.E_set.insert(p).second) sk.E.push_back(p);
          break;
        }
      }
    }
    std::sort(sk.E.begin(), sk.E.end());
    for (const auto& p : sk.E) {
      for (int a = 0; a < d; ++a) {
        for (Coord s : {Coord{1}, Coord{-1}}) {
          const LatticePoint q = unit_shift(p, a, s);
          if (!sk.C_set.count(q)) continue;
          const EdgeId e = canonical_edge(p, q);
          if (sk.E_tilde_set.insert(e).second) sk.E_tilde.push_back(e);
        }
      }
    }
  }
  return sk;
}

std::vector<LatticePoint> f_set(const Skeleton& sk, double radius) {
  const Box B = sk.frame.B();
  if (radius < 0) return {};
  const std::uint64_t rad = static_cast<std::uint64_t>(std::floor(radius));

  // 1-norm distance to C via multi-source BFS; staircase paths between box
  // points stay in the box, so within-box BFS equals the free distance.
  PointMap<std::uint64_t> dist;
  std::deque<LatticePoint> queue;
  for (const auto& p : sk.C) {
    dist.emplace(p, 0);
    queue.push_back(p);
  }
  std::vector<LatticePoint> out;
  while (!queue.empty()) {
    const LatticePoint p = queue.front();
    queue.pop_front();
    const std::uint64_t dp = dist.at(p);
    if (dp >= rad) continue;
    for (int a = 0; a < B.dim(); ++a) {
      for (Coord s : {Coord{1}, Coord{-1}}) {
        const LatticePoint q = unit_shift(p, a, s);
        if (!B.contains(q) || dist.count(q)) continue;
        dist.emplace(q, dp + 1);
        queue.push_back(q);
      }
    }
  }
  for (const auto& [p, dp] : dist) {
    if (dp == 0) continue;  // p in C
    if (B.on_inner_boundary(p)) continue;
    out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::uint64_t min_l1_to(const LatticePoint& x, const std::vector<LatticePoint>& set) {
  std::uint64_t best = UINT64_MAX;
  for (const auto& p : set) best = std::min(best, l1_dist(x, p));
  return best;
}

}  // namespace

EllValues edge_distances(const Skeleton& sk, const EdgeId& e) {
  if (sk.variant != SkeletonVariant::kV2)
    throw std::invalid_argument("edge distances need the v2 skeleton");
  if (sk.E.empty() || sk.C.empty())
    throw std::invalid_argument("skeleton has no midpoint structure");
  const auto [a, b] = edge_endpoints(e);
  EllValues v;
  v.ell = std::min(min_l1_to(a, sk.E), min_l1_to(b, sk.E));
  v.ell1 = std::min(min_l1_to(a, sk.C), min_l1_to(b, sk.C));
  v.ell2 = v.ell - v.ell1;
  return v;
}

namespace {

template <class Fn>
void for_each_edge_in_box(const Box& B, Fn&& fn) {
  const int d = B.dim();
  std::vector<Coord> c(B.lo);
  const unsigned long long vol = B.volume();
  for (unsigned long long i = 0; i < vol; ++i) {
    const LatticePoint p{std::vector<Coord>(c)};
    for (int a = 0; a < d; ++a) {
      if (c[static_cast<size_t>(a)] < B.hi[static_cast<size_t>(a)]) fn(EdgeId{p, a});
    }
    for (int a = d - 1; a >= 0; --a) {
      if (++c[static_cast<size_t>(a)] <= B.hi[static_cast<size_t>(a)]) break;
      c[static_cast<size_t>(a)] = B.lo[static_cast<size_t>(a)];
    }
  }
}

}  // namespace

std::size_t count_edges_at_ell(const Skeleton& sk, std::uint64_t ell) {
  std::size_t count = 0;
  for_each_edge_in_box(sk.frame.B(), [&](const EdgeId& e) {
    if (edge_distances(sk, e).ell == ell) ++count;
  });
  return count;
}

std::size_t count_edges_at_ell12(const Skeleton& sk, std::uint64_t ell1, std::uint64_t ell2) {
  std::size_t count = 0;
  for_each_edge_in_box(sk.frame.B(), [&](const EdgeId& e) {
    const auto v = edge_distances(sk, e);
    if (v.ell1 == ell1 && v.ell2 == ell2) ++count;
  });
  return count;
}

// ---- skeleton paths ---------------------------------------------------------------

std::vector<LatticePoint> skeleton_component(const Skeleton& sk, const LatticePoint& x) {
  if (sk.variant != SkeletonVariant::kV2)
    throw std::invalid_argument("components are defined for the v2 skeleton");
  if (!sk.C_set.count(x) || sk.E_set.count(x))
    throw std::invalid_argument("x must lie in C minus E");
  PointSet seen{x};
  std::deque<LatticePoint> queue{x};
  std::vector<LatticePoint> out;
  while (!queue.empty()) {
    const LatticePoint p = queue.front();
    queue.pop_front();
    out.push_back(p);
    for (int a = 0; a < p.dim(); ++a) {
      for (Coord s : {Coord{1}, Coord{-1}}) {
        const LatticePoint q = unit_shift(p, a, s);
        if (!sk.C_set.count(q) || sk.E_set.count(q)) continue;
        if (seen.insert(q).second) queue.push_back(q);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// BFS geodesic within a membership predicate; returns empty when unreachable.
template <class Member>
std::vector<LatticePoint> bfs_path(const LatticePoint& a, const LatticePoint& b, Member&& in) {
  PointMap<LatticePoint> parent;
  parent.emplace(a, a);
  std::deque<LatticePoint> queue{a};
  while (!queue.empty()) {
    const LatticePoint p = queue.front();
    queue.pop_front();
    if (p == b) {
      std::vector<LatticePoint> path{b};
      LatticePoint cur = b;
      while (cur != a) {
        cur = parent.at(cur);
        path.push_back(cur);
      }
      std::reverse(path.begin(), path.end());
      return path;
    }
    for (int i = 0; i < p.dim(); ++i) {
      for (Coord s : {Coord{1}, Coord{-1}}) {
        const LatticePoint q = unit_shift(p, i, s);
        if (!in(q) || parent.count(q)) continue;
        parent.emplace(q, p);
        queue.push_back(q);
      }
    }
  }
  return {};
}

}  // namespace

SkeletonPathResult skeleton_path(const Skeleton& sk, const LatticePoint& a, const LatticePoint& b,
                                 SkeletonPathClause clause) {
  const Box B = sk.frame.B();
  SkeletonPathResult res;
  const std::uint64_t l1 = l1_dist(a, b);

  switch (clause) {
    case SkeletonPathClause::kComponent: {
      const auto comp = skeleton_component(sk, a);
      if (!std::binary_search(comp.begin(), comp.end(), b))
        throw std::invalid_argument("endpoints lie in different components");
      PointSet members(comp.begin(), comp.end());
      res.path = bfs_path(a, b, [&](const LatticePoint& q) { return members.count(q) > 0; });
      break;
    }
    case SkeletonPathClause::kWithinC: {
      if (!sk.C_set.count(a) || !sk.C_set.count(b))
        throw std::invalid_argument("endpoints must lie in C");
      if (!(4 * l1 < static_cast<std::uint64_t>(sk.n1)))
        throw std::invalid_argument("clause needs |a-b|_1 < n1/4");
      res.path = bfs_path(a, b, [&](const LatticePoint& q) { return sk.C_set.count(q) > 0; });
      break;
    }
    case SkeletonPathClause::kBoundary: {
      if (!B.on_inner_boundary(a)) throw std::invalid_argument("a must lie on the box boundary");
      if (!sk.C_set.count(b)) throw std::invalid_argument("b must lie in C");
      if (!(4 * l1 < static_cast<std::uint64_t>(sk.n1)))
        throw std::invalid_argument("clause needs |a-b|_1 < n1/4");
      res.path = bfs_path(a, b, [&](const LatticePoint& q) {
        return sk.C_set.count(q) > 0 || B.on_inner_boundary(q);
      });
      break;
    }
    case SkeletonPathClause::kCrossing: {
      if (sk.variant != SkeletonVariant::kV2)
        throw std::invalid_argument("crossing clause needs the v2 skeleton");
      if (!(4 * l1 <= static_cast<std::uint64_t>(sk.n1)))
        throw std::invalid_argument("clause needs |a-b|_1 <= n1/4");
      const auto comp = skeleton_component(sk, a);
      if (std::binary_search(comp.begin(), comp.end(), b))
        throw std::invalid_argument("endpoints lie in the same component");
      // Crossing midpoint: collinear with a and b, strictly between them.
      int axis = -1;
      for (int i = 0; i < a.dim(); ++i) {
        if (a[i] != b[i]) {
          if (axis >= 0) {
            axis = -2;
            break;
          }
          axis = i;
        }
      }
      if (axis < 0) throw std::logic_error("crossing endpoints must differ on one axis");
      const Coord lo = std::min(a[axis], b[axis]);
      const Coord hi = std::max(a[axis], b[axis]);
      LatticePoint y = a;
      bool found = false;
      for (Coord x = lo + 1; x < hi && !found; ++x) {
        y.c[static_cast<size_t>(axis)] = x;
        if (sk.E_set.count(y)) found = true;
      }
      if (!found) throw std::logic_error("no midpoint separates the components on the segment");
      const Coord toward_b = b[axis] > y[axis] ? 1 : -1;
      const LatticePoint y2 = unit_shift(y, axis, toward_b);
      if (!sk.C_set.count(y2)) throw std::logic_error("crossing edge leaves C");
      res.crossing = canonical_edge(y, y2);
      res.is_crossing = true;
      if (!sk.E_tilde_set.count(res.crossing))
        throw std::logic_error("crossing edge missing from E-tilde");
      if (l1_dist(a, y) > static_cast<std::uint64_t>(sk.n1) / 4 + 1)
        throw std::logic_error("crossing midpoint too far from a");
      return res;
    }
  }

  if (res.path.empty()) throw std::logic_error("skeleton path not found");
  if (res.path.size() - 1 != l1)
    throw std::logic_error("skeleton path is not of geodesic length");
  return res;
}

// ---- blackness --------------------------------------------------------------------

BlackReport is_black(const WeightConfig& cfg, const Skeleton& sk, const BlackParams& p) {
  const Box B = sk.frame.B();
  const int d = B.dim();
  const Coord n = sk.frame.n;
  const Coord n1 = sk.n1;
  BlackReport rep;

  const double fm = cfg.dist().f_minus();
  const double speed = fm + p.delta7;

  // Speed clause: pairs at 1-norm distance >= n move no faster than speed.
  const Box padded = B.inflated(n);
  const WeightGrid grid(cfg, padded);
  const auto verts = Region::box(B).vertices();
  std::vector<std::size_t> vidx(verts.size());
  for (size_t i = 0; i < verts.size(); ++i) vidx[i] = grid.index_of(verts[i]);

  for (size_t i = 0; i < verts.size(); ++i) {
    DijkstraOptions opts;
    opts.cost_cap = speed * static_cast<double>(max_l1_to_box(verts[i], B));
    const auto run = grid_dijkstra(grid, {{verts[i], 0.0}}, opts);
    for (size_t j = i + 1; j < verts.size(); ++j) {
      const std::uint64_t l1 = l1_dist(verts[i], verts[j]);
      if (l1 < static_cast<std::uint64_t>(n)) continue;
      const double t = run.dist[vidx[j]];
      if (t < speed * static_cast<double>(l1)) {
        rep.failed_clause = "speed";
        rep.witness_v = verts[i];
        rep.witness_w = verts[j];
        rep.witness_time = t;
        rep.detail = "t = " + std::to_string(t) + " < " + std::to_string(speed) + " * " +
                     std::to_string(l1);
        return rep;
      }
    }
  }

  // Boundary clauses run on the boundary-restricted graph.
  std::vector<LatticePoint> bd;
  for (const auto& v : verts)
    if (B.on_inner_boundary(v)) bd.push_back(v);
  const SparseGraph bg(bd, cfg);

  if (sk.variant == SkeletonVariant::kV1) {
    std::vector<std::uint32_t> anchors;  // C on the boundary
    for (std::uint32_t i = 0; i < bg.verts.size(); ++i)
      if (sk.C_set.count(bg.verts[i])) anchors.push_back(i);
    const double cap = p.M * static_cast<double>(n1);
    for (std::uint32_t s = 0; s < bg.verts.size(); ++s) {
      const auto dist = bg.dijkstra(s, nullptr, cap);
      bool linked = false;
      for (auto a : anchors) {
        if (dist[a] <= cap &&
            l1_dist(bg.verts[s], bg.verts[a]) <= static_cast<std::uint64_t>(2 * d * n1)) {
          linked = true;
          break;
        }
      }
      if (!linked) {
        rep.failed_clause = "boundary-link";
        rep.witness_v = bg.verts[s];
        rep.detail = "no skeleton anchor within the boundary budget";
        return rep;
      }
    }
  } else {
    if (!(p.N >= 16.0)) throw std::invalid_argument("N must be >= 16");
    if (!(p.r > 0.0)) throw std::invalid_argument("r must be positive");
    const double thr = std::pow(log_n(p.N), 1.0 / (8.0 * d * p.r));
    for (std::uint32_t s = 0; s < bg.verts.size(); ++s) {
      const auto dist = bg.dijkstra(s);
      for (std::uint32_t t = s + 1; t < bg.verts.size(); ++t) {
        const double bound =
            p.M * std::max(static_cast<double>(l1_dist(bg.verts[s], bg.verts[t])), thr);
        if (dist[t] > bound) {
          rep.failed_clause = "boundary-time";
          rep.witness_v = bg.verts[s];
          rep.witness_w = bg.verts[t];
          rep.witness_time = dist[t];
          rep.detail = "boundary time " + std::to_string(dist[t]) + " > " + std::to_string(bound);
          return rep;
        }
      }
    }
    for (std::uint32_t s = 0; s < bg.verts.size(); ++s) {
      for (const auto& [t, w] : bg.adj[s]) {
        if (w > thr) {
          rep.failed_clause = "boundary-edge";
          rep.witness_v = bg.verts[s];
          rep.witness_w = bg.verts[t];
          rep.witness_time = w;
          rep.detail = "boundary edge weight " + std::to_string(w) + " > " + std::to_string(thr);
          return rep;
        }
      }
    }
  }

  rep.black = true;
  return rep;
}

// ---- A-conditions --------------------------------------------------------------------

namespace {

AReport violation(const std::string& clause, const EdgeId& e, double w, const std::string& what) {
  AReport rep;
  rep.violated_clause = clause;
  rep.detail = to_string(e) + ": weight " + std::to_string(w) + " " + what;
  return rep;
}

}  // namespace

AReport check_A_condition(const WeightConfig& cfg, const Skeleton& sk, ACondition which,
                          const AParams& p) {
  const Box B = sk.frame.B();
  const int d = B.dim();
  if (!(p.gamma > 1.0)) throw std::invalid_argument("gamma must exceed 1");
  if (!(p.c > 0.0)) throw std::invalid_argument("c must be positive");
  AReport rep;

  const double fm = cfg.dist().f_minus();

  if (which == ACondition::kA1) {
    if (sk.variant != SkeletonVariant::kV1)
      throw std::invalid_argument("A1 applies to the v1 skeleton");
    const double f = order_f(d, p.r, p.N);
    for (const auto& e : sk.E_tilde) {
      const double w = cfg.weight(e);
      if (w < p.c * f || w > p.gamma * p.c * f)
        return violation("band", e, w, "outside [cf, gamma cf]");
    }
    for (const auto& e : sk.C_edges) {
      if (sk.E_tilde_set.count(e)) continue;
      const double w = cfg.weight(e);
      if (w > fm + p.c) return violation("skeleton-light", e, w, "> F^- + c");
    }
    rep.satisfied = true;
    return rep;
  }

  if (which == ACondition::kA3Tilde) {
    if (sk.variant != SkeletonVariant::kV2)
      throw std::invalid_argument("A3-tilde applies to the v2 skeleton");
    if (!(p.N >= 16.0)) throw std::invalid_argument("N must be >= 16");
    const double min_sep = std::pow(log_n(p.N), 1.0 / (8.0 * d * d));
    const double speed = fm + p.delta7;

    const auto inter = region_interior(Region::box(B));
    const Box padded = B.inflated(sk.frame.n);
    const WeightGrid grid(cfg, padded);
    std::vector<std::size_t> iidx(inter.size());
    for (size_t i = 0; i < inter.size(); ++i) iidx[i] = grid.index_of(inter[i]);

    for (size_t i = 0; i < inter.size(); ++i) {
      DijkstraOptions opts;
      opts.skip_edges = &sk.C_edge_set;
      opts.cost_cap = speed * static_cast<double>(max_l1_to_box(inter[i], B));
      const auto run = grid_dijkstra(grid, {{inter[i], 0.0}}, opts);
      for (size_t j = i + 1; j < inter.size(); ++j) {
        const double l1 = static_cast<double>(l1_dist(inter[i], inter[j]));
        if (l1 < min_sep) continue;
        if (run.dist[iidx[j]] < speed * l1) {
          rep.violated_clause = "avoidance-speed";
          rep.detail = to_string(inter[i]) + " -> " + to_string(inter[j]) + ": t = " +
                       std::to_string(run.dist[iidx[j]]) + " < " + std::to_string(speed * l1);
          return rep;
        }
      }
    }
    rep.satisfied = true;
    return rep;
  }

  // A2 / A3 share the band clauses over the v2 skeleton.
  if (sk.variant != SkeletonVariant::kV2)
    throw std::invalid_argument("A2/A3 apply to the v2 skeleton");
  if (!(p.N >= 16.0)) throw std::invalid_argument("N must be >= 16");
  if (which == ACondition::kA2 && !(p.r > 1.0))
    throw std::invalid_argument("A2 needs r > 1");
  const double f = order_f(d, p.r, p.N);
  const double c2 = p.c * p.c;

  for (const auto& e : sk.E_tilde) {
    const double w = cfg.weight(e);
    if (w < c2 * f || w > p.gamma * c2 * f)
      return violation("band", e, w, "outside [c^2 f, gamma c^2 f]");
  }
  for (const auto& e : sk.C_edges) {
    if (sk.E_tilde_set.count(e)) continue;
    const double w = cfg.weight(e);
    if (w > fm + c2) return violation("skeleton-light", e, w, "> F^- + c^2");
  }

  if (which == ACondition::kA2) {
    const double cross_floor = std::pow(log_n(p.N), 1.0 / (2.0 * d * p.r));
    AReport out;
    out.satisfied = true;
    for_each_edge_in_box(B, [&](const EdgeId& e) {
      if (!out.satisfied || sk.C_edge_set.count(e)) return;
      const auto [a, b] = edge_endpoints(e);
      const bool a_bd = B.on_inner_boundary(a), b_bd = B.on_inner_boundary(b);
      if (!a_bd && !b_bd) {
        const double w = cfg.weight(e);
        const double floor_w =
            std::max(p.c * f / (static_cast<double>(edge_distances(sk, e).ell) + 1.0), p.M * p.M);
        if (w < floor_w) out = violation("interior-floor", e, w, "< (cf/(l+1)) v M^2");
      } else if (a_bd != b_bd) {
        const double w = cfg.weight(e);
        if (w < cross_floor)
          out = violation("crossing-floor", e, w, "< (log N)^(1/2dr)");
      }
    });
    return out;
  }

  // A3: the heavy floor applies near the skeleton only, and boundary-incident
  // edges (also those leaving the box) carry the d^2 floor.
  const double radius = std::pow(log_n(p.N), 1.0 / (8.0 * d * d));
  const double cross_floor = std::pow(log_n(p.N), 1.0 / (2.0 * d * d));
  const auto fj = f_set(sk, radius);
  PointSet fj_set(fj.begin(), fj.end());

  AReport out;
  out.satisfied = true;
  for_each_edge_in_box(B, [&](const EdgeId& e) {
    if (!out.satisfied || sk.C_edge_set.count(e)) return;
    const auto [a, b] = edge_endpoints(e);
    if (B.on_inner_boundary(a) || B.on_inner_boundary(b)) return;
    if (!fj_set.count(a) && !fj_set.count(b)) return;
    const double w = cfg.weight(e);
    const auto ell = edge_distances(sk, e);
    const double floor_w =
        std::max(p.c * f /
                     ((static_cast<double>(ell.ell1) + 1.0) * std::log(static_cast<double>(ell.ell2) + 2.0)),
                 p.M * p.M);
    if (w < floor_w) out = violation("f-floor", e, w, "< (cf/((l1+1) log(l2+2))) v M^2");
  });
  if (!out.satisfied) return out;

  for (const auto& v : inner_boundary(Region::box(B))) {
    for (int a = 0; a < d; ++a) {
      for (Coord s : {Coord{1}, Coord{-1}}) {
        const LatticePoint q = unit_shift(v, a, s);
        if (B.on_inner_boundary(q)) continue;
        const EdgeId e = canonical_edge(v, q);
        if (sk.C_edge_set.count(e)) continue;
        const double w = cfg.weight(e);
        if (w < cross_floor) return violation("crossing-floor", e, w, "< (log N)^(1/2d^2)");
      }
    }
  }
  return out;
}

}  // namespace fpplab
