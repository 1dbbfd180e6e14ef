#include "fpplab/xi.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

namespace fpplab {

LatticePoint v_sequence(const LatticePoint& v, std::uint64_t i) {
  const int d = v.dim();
  if (d < 1) throw std::invalid_argument("v_sequence needs d >= 1");
  for (int j = 0; j < d; ++j)
    if (v[j] < 0) throw std::invalid_argument("v_sequence needs nonnegative coordinates");
  if (i == 0) return v;

  std::uint64_t S = 0;
  for (int j = 1; j < d; ++j) S += static_cast<std::uint64_t>(v[j]);

  LatticePoint out = v;
  if (i <= 2 * S) {
    // Doubling phase: smallest k with i <= 2 * prefix_sum(k+1); transversal
    // coordinates before k are fully doubled, coordinate k is partial.
    std::uint64_t pk = 0;  // sum of v[1..k-1]
    int k = 1;
    while (pk + static_cast<std::uint64_t>(v[k]) < (i + 1) / 2) {
      pk += static_cast<std::uint64_t>(v[k]);
      ++k;
    }
    out.c[0] += static_cast<Coord>((i + 1) / 2);
    for (int j = 1; j < k; ++j) out.c[static_cast<size_t>(j)] = 2 * v[j];
    out.c[static_cast<size_t>(k)] = v[k] + static_cast<Coord>(i / 2 - pk);
  } else {
    out.c[0] += static_cast<Coord>(i - S);
    for (int j = 1; j < d; ++j) out.c[static_cast<size_t>(j)] = 2 * v[j];
  }
  return out;
}

namespace {

// Staircase edges from `start` until the first axis reaches x_end; the walk
// finishes its doubling phase strictly before x_end by construction.
std::vector<EdgeId> staircase_edges(const LatticePoint& start, Coord x_end, LatticePoint* end_out) {
  std::vector<EdgeId> edges;
  LatticePoint prev = start;
  for (std::uint64_t i = 1; prev[0] < x_end; ++i) {
    const LatticePoint cur = v_sequence(start, i);
    edges.push_back(canonical_edge(prev, cur));
    prev = cur;
  }
  if (end_out) *end_out = prev;
  return edges;
}

// Transversal unit (d-1)-cube rooted at q, edges only.
std::vector<EdgeId> transversal_cube_edges(const LatticePoint& q) {
  const int d = q.dim();
  std::vector<EdgeId> edges;
  const int bits = d - 1;
  for (std::uint32_t mask = 0; mask < (1u << bits); ++mask) {
    LatticePoint p = q;
    for (int c = 0; c < bits; ++c)
      if (mask & (1u << c)) p.c[static_cast<size_t>(c + 1)] += 1;
    for (int c = 0; c < bits; ++c)
      if (!(mask & (1u << c))) edges.push_back(EdgeId{p, c + 1});
  }
  return edges;
}

std::vector<EdgeId> unit_cube_edges(int d) {
  std::vector<EdgeId> edges;
  for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
    LatticePoint p = zero_point(d);
    for (int c = 0; c < d; ++c)
      if (mask & (1u << c)) p.c[static_cast<size_t>(c)] = 1;
    for (int c = 0; c < d; ++c)
      if (!(mask & (1u << c))) edges.push_back(EdgeId{p, c});
  }
  return edges;
}

// b_j in Z^{d-1}: recurrence b_j = 2 (b_{j-1} + i_j), b_0 = 0.
std::vector<Coord> height_of_prefix(int d, const std::vector<std::uint32_t>& prefix) {
  std::vector<Coord> b(static_cast<size_t>(d - 1), 0);
  for (std::uint32_t ij : prefix) {
    for (int c = 0; c < d - 1; ++c)
      b[static_cast<size_t>(c)] = 2 * (b[static_cast<size_t>(c)] + ((ij >> c) & 1u));
  }
  return b;
}

}  // namespace

XiFamily build_xi(int d, Coord m) {
  if (d < 1) throw std::invalid_argument("xi family needs d >= 1");
  if (m < 1) throw std::invalid_argument("xi family needs m >= 1");
  XiFamily fam;
  fam.d = d;
  fam.m = m;

  if (m <= 12 * static_cast<Coord>(d)) {
    fam.degenerate = true;
    fam.n = 0;
    LatticePoint p = zero_point(d);
    for (Coord x = 0; x < m; ++x) {
      fam.straight_fallback.push_back(EdgeId{p, 0});
      p.c[0] += 1;
    }
    return fam;
  }

  int n = 0;
  while (static_cast<Coord>(6 * d) * (Coord{1} << (n + 1)) <= m) ++n;
  fam.n = n;
  fam.base = unit_cube_edges(d);

  const std::uint32_t branch = 1u << (d - 1);
  std::vector<std::uint32_t> prefix;
  // Depth-first over prefixes in lexicographic order, carrying start heights.
  struct Frame {
    std::vector<Coord> b_prev;  // b_{level-1}
    std::uint32_t next = 0;
  };
  std::vector<Frame> stack;
  stack.push_back({std::vector<Coord>(static_cast<size_t>(d - 1), 0), 0});
  while (!stack.empty()) {
    Frame& top = stack.back();
    const int level = static_cast<int>(stack.size());
    if (top.next == branch || level > n) {
      stack.pop_back();
      if (!prefix.empty()) prefix.pop_back();
      continue;
    }
    const std::uint32_t ij = top.next++;
    prefix.push_back(ij);

    XiPiece piece;
    piece.level = level;
    piece.prefix = prefix;

    std::vector<Coord> start_c(static_cast<size_t>(d));
    start_c[0] = level == 1 ? 1 : static_cast<Coord>(d) * (Coord{1} << level);
    for (int c = 0; c < d - 1; ++c)
      start_c[static_cast<size_t>(c + 1)] = top.b_prev[static_cast<size_t>(c)] + ((ij >> c) & 1u);
    piece.start = LatticePoint(start_c);

    const Coord x_end = static_cast<Coord>(d) * (Coord{1} << (level + 1));
    piece.edges = staircase_edges(piece.start, x_end, &piece.end);
    const auto cube = transversal_cube_edges(piece.end);
    piece.edges.insert(piece.edges.end(), cube.begin(), cube.end());

    std::vector<Coord> b_here(static_cast<size_t>(d - 1));
    for (int c = 0; c < d - 1; ++c) b_here[static_cast<size_t>(c)] = piece.end[c + 1];
    fam.pieces.push_back(std::move(piece));

    if (level < n) {
      stack.push_back({std::move(b_here), 0});
    } else {
      prefix.pop_back();
    }
  }

  std::sort(fam.pieces.begin(), fam.pieces.end(), [](const XiPiece& a, const XiPiece& b) {
    if (a.level != b.level) return a.level < b.level;
    return a.prefix < b.prefix;
  });
  return fam;
}

LatticePoint leaf_target(const XiFamily& fam, const std::vector<std::uint32_t>& prefix) {
  if (static_cast<int>(prefix.size()) != fam.n)
    throw std::invalid_argument("leaf prefix must have length n");
  const auto b = height_of_prefix(fam.d, prefix);
  std::vector<Coord> c(static_cast<size_t>(fam.d));
  c[0] = static_cast<Coord>(fam.d) * (Coord{1} << (fam.n + 1));
  for (int i = 0; i < fam.d - 1; ++i) c[static_cast<size_t>(i + 1)] = b[static_cast<size_t>(i)];
  return LatticePoint(c);
}

std::vector<LatticePoint> leaf_grid(int d, int n) {
  if (d < 1) throw std::invalid_argument("leaf grid needs d >= 1");
  if (n < 0) throw std::invalid_argument("leaf grid needs n >= 0");
  const std::uint32_t branch = d == 1 ? 1 : (1u << (d - 1));
  std::vector<LatticePoint> out;
  std::vector<std::uint32_t> prefix(static_cast<size_t>(n), 0);
  while (true) {
    out.push_back(LatticePoint(height_of_prefix(d, prefix)));
    int j = n - 1;
    while (j >= 0 && ++prefix[static_cast<size_t>(j)] == branch) {
      prefix[static_cast<size_t>(j)] = 0;
      --j;
    }
    if (j < 0) break;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<LatticePoint> straight_segment(int d, int n, Coord m, const std::vector<Coord>& vbar) {
  if (d < 1) throw std::invalid_argument("segment needs d >= 1");
  if (static_cast<int>(vbar.size()) != d - 1)
    throw std::invalid_argument("vbar must have d - 1 coordinates");
  const Coord x0 = static_cast<Coord>(d) * (Coord{1} << n);
  if (m - 2 * x0 < 0) throw std::invalid_argument("segment needs m >= d 2^{n+1}");
  const Coord hmax = (Coord{1} << (n + 1)) - 2;
  for (Coord h : vbar) {
    if (h < 0 || h > hmax || h % 2 != 0)
      throw std::invalid_argument("vbar is not a leaf-grid height");
  }

  std::vector<LatticePoint> path;
  std::vector<Coord> c(static_cast<size_t>(d));
  for (int i = 0; i < d - 1; ++i) c[static_cast<size_t>(i + 1)] = vbar[static_cast<size_t>(i)];
  for (Coord x = x0; x <= m - x0; ++x) {
    c[0] = x;
    path.emplace_back(c);
  }
  return path;
}

XiVerifyReport verify_conditions(const XiFamily& fam) {
  XiVerifyReport rep;
  rep.d = fam.d;
  rep.m = fam.m;
  rep.n = fam.n;
  rep.degenerate = fam.degenerate;
  if (fam.degenerate) {
    rep.xi1 = rep.xi2 = rep.xi3 = rep.xi4 = true;
    rep.set_count = 0;
    rep.detail = "degenerate family; conditions are vacuous";
    return rep;
  }

  rep.set_count = 1 + fam.pieces.size();
  rep.level_sizes.assign(static_cast<size_t>(fam.n) + 1, 0);
  rep.level_sizes[0] = fam.base.size();
  for (const auto& p : fam.pieces)
    rep.level_sizes[static_cast<size_t>(p.level)] += p.edges.size();
  rep.edge_count = fam.base.size();
  for (const auto& p : fam.pieces) rep.edge_count += p.edges.size();

  // Xi-1: edge-disjointness across distinct sets.
  rep.xi1 = true;
  {
    EdgeMap<int> owner;
    for (const auto& e : fam.base) owner.emplace(e, -1);
    if (owner.size() != fam.base.size()) {
      rep.xi1 = false;
      rep.detail = "duplicate edge inside the base set";
    }
    for (int pi = 0; rep.xi1 && pi < static_cast<int>(fam.pieces.size()); ++pi) {
      for (const auto& e : fam.pieces[static_cast<size_t>(pi)].edges) {
        const auto [it, inserted] = owner.emplace(e, pi);
        if (!inserted && it->second != pi) {
          rep.xi1 = false;
          rep.detail = "edge " + to_string(e) + " shared across sets";
          break;
        }
      }
    }
  }

  // Xi-2: containment (integer-safe comparisons against m/3 and m/2).
  rep.xi2 = true;
  auto contained = [&](const LatticePoint& p) {
    if (p[0] < 0 || 3 * p[0] > fam.m) return false;
    for (int c = 1; c < fam.d; ++c)
      if (p[c] < 0 || 2 * p[c] > fam.m) return false;
    return true;
  };
  auto check_edge = [&](const EdgeId& e) {
    const auto [a, b] = edge_endpoints(e);
    return contained(a) && contained(b);
  };
  for (const auto& e : fam.base) {
    if (!check_edge(e)) {
      rep.xi2 = false;
      rep.detail = rep.detail.empty() ? "base edge " + to_string(e) + " escapes the box" : rep.detail;
      break;
    }
  }
  for (const auto& p : fam.pieces) {
    if (!rep.xi2) break;
    for (const auto& e : p.edges) {
      if (!check_edge(e)) {
        rep.xi2 = false;
        if (rep.detail.empty()) rep.detail = "edge " + to_string(e) + " escapes the box";
        break;
      }
    }
  }

  // Xi-3: size bounds.
  rep.xi3 = fam.base.size() <= (1ull << (fam.d + 1));
  if (!rep.xi3 && rep.detail.empty()) rep.detail = "base set exceeds 2^{d+1}";
  for (const auto& p : fam.pieces) {
    if (p.edges.size() > (1ull << (p.level + fam.d + 1))) {
      rep.xi3 = false;
      if (rep.detail.empty())
        rep.detail = "level " + std::to_string(p.level) + " set exceeds 2^{j+d+1}";
      break;
    }
  }

  // Xi-4: per-leaf connectivity along the prefix chain.
  rep.xi4 = true;
  std::map<std::pair<int, std::vector<std::uint32_t>>, const XiPiece*> by_prefix;
  for (const auto& p : fam.pieces) by_prefix.emplace(std::make_pair(p.level, p.prefix), &p);

  const std::uint32_t branch = fam.d == 1 ? 1 : (1u << (fam.d - 1));
  std::vector<std::uint32_t> prefix(static_cast<size_t>(fam.n), 0);
  while (rep.xi4) {
    PointMap<std::vector<LatticePoint>> adj;
    auto add_edge = [&](const EdgeId& e) {
      const auto [a, b] = edge_endpoints(e);
      adj[a].push_back(b);
      adj[b].push_back(a);
    };
    for (const auto& e : fam.base) add_edge(e);
    bool missing = false;
    for (int j = 1; j <= fam.n; ++j) {
      const std::vector<std::uint32_t> key(prefix.begin(), prefix.begin() + j);
      auto it = by_prefix.find(std::make_pair(j, key));
      if (it == by_prefix.end()) {
        missing = true;
        break;
      }
      for (const auto& e : it->second->edges) add_edge(e);
    }
    const LatticePoint target = leaf_target(fam, prefix);
    bool reached = false;
    if (!missing) {
      const LatticePoint origin = zero_point(fam.d);
      PointSet seen{origin};
      std::deque<LatticePoint> queue{origin};
      while (!queue.empty() && !reached) {
        const LatticePoint p = queue.front();
        queue.pop_front();
        if (p == target) {
          reached = true;
          break;
        }
        auto it = adj.find(p);
        if (it == adj.end()) continue;
        for (const auto& q : it->second)
          if (seen.insert(q).second) queue.push_back(q);
      }
    }
    if (missing || !reached) {
      rep.xi4 = false;
      if (rep.detail.empty())
        rep.detail = "leaf " + to_string(target) + (missing ? " misses a chain set" : " unreachable");
      break;
    }
    int j = fam.n - 1;
    while (j >= 0 && ++prefix[static_cast<size_t>(j)] == branch) {
      prefix[static_cast<size_t>(j)] = 0;
      --j;
    }
    if (j < 0) break;
  }
  return rep;
}

XiSums v_sums(const WeightConfig& cfg, const XiFamily& fam) {
  XiSums out;
  for (const auto& e : fam.base) out.v0 += cfg.weight(e);
  out.vk.assign(static_cast<size_t>(fam.n), 0.0);
  for (const auto& p : fam.pieces) {
    double s = 0.0;
    for (const auto& e : p.edges) s += cfg.weight(e);
    out.vk[static_cast<size_t>(p.level - 1)] += s;
  }
  return out;
}

}  // namespace fpplab
