#include "fpplab/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <sstream>
#include <stdexcept>

#include "fpplab/error.hpp"

namespace fpplab {

namespace {

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t abs_u64(Coord v) {
  return v < 0 ? static_cast<std::uint64_t>(-(v + 1)) + 1 : static_cast<std::uint64_t>(v);
}

}  // namespace

LatticePoint zero_point(int d) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  return LatticePoint(std::vector<Coord>(static_cast<size_t>(d), 0));
}

LatticePoint unit_shift(const LatticePoint& p, int axis, Coord delta) {
  if (axis < 0 || axis >= p.dim()) throw std::invalid_argument("axis out of range");
  LatticePoint q = p;
  q[axis] += delta;
  return q;
}

std::uint64_t l1_norm(const LatticePoint& p) {
  std::uint64_t s = 0;
  for (Coord v : p.c) s += abs_u64(v);
  return s;
}

std::uint64_t linf_norm(const LatticePoint& p) {
  std::uint64_t m = 0;
  for (Coord v : p.c) m = std::max(m, abs_u64(v));
  return m;
}

std::uint64_t l1_dist(const LatticePoint& a, const LatticePoint& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch");
  std::uint64_t s = 0;
  for (int i = 0; i < a.dim(); ++i) {
    s += a[i] >= b[i] ? static_cast<std::uint64_t>(a[i] - b[i])
                      : static_cast<std::uint64_t>(b[i] - a[i]);
  }
  return s;
}

std::uint64_t linf_dist(const LatticePoint& a, const LatticePoint& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch");
  std::uint64_t m = 0;
  for (int i = 0; i < a.dim(); ++i) {
    std::uint64_t dv = a[i] >= b[i] ? static_cast<std::uint64_t>(a[i] - b[i])
                                    : static_cast<std::uint64_t>(b[i] - a[i]);
    m = std::max(m, dv);
  }
  return m;
}

std::string to_string(const LatticePoint& p) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < p.dim(); ++i) {
    if (i) os << ",";
    os << p[i];
  }
  os << ")";
  return os.str();
}

std::size_t PointHash::operator()(const LatticePoint& p) const {
  std::uint64_t h = 0x8f1bbcdcbfa53e0bULL ^ static_cast<std::uint64_t>(p.dim());
  for (Coord v : p.c) h = mix64(h ^ static_cast<std::uint64_t>(v));
  return static_cast<std::size_t>(h);
}

std::size_t EdgeHash::operator()(const EdgeId& e) const {
  std::uint64_t h = PointHash{}(e.base);
  return static_cast<std::size_t>(mix64(h ^ (0x2545f4914f6cdd1dULL + static_cast<std::uint64_t>(e.axis))));
}

EdgeId canonical_edge(const LatticePoint& p, const LatticePoint& q) {
  if (p.dim() != q.dim()) throw std::invalid_argument("canonical_edge: dimension mismatch");
  int axis = -1;
  for (int i = 0; i < p.dim(); ++i) {
    if (p[i] != q[i]) {
      Coord diff = p[i] - q[i];
      if ((diff != 1 && diff != -1) || axis >= 0)
        throw std::invalid_argument("canonical_edge: endpoints not adjacent");
      axis = i;
    }
  }
  if (axis < 0) throw std::invalid_argument("canonical_edge: endpoints equal");
  EdgeId e;
  e.axis = axis;
  e.base = p[axis] < q[axis] ? p : q;
  return e;
}

std::pair<LatticePoint, LatticePoint> edge_endpoints(const EdgeId& e) {
  return {e.base, unit_shift(e.base, e.axis, 1)};
}

LatticePoint edge_v(const EdgeId& e) {
  LatticePoint other = unit_shift(e.base, e.axis, 1);
  return l1_norm(e.base) <= l1_norm(other) ? e.base : other;
}

std::string to_string(const EdgeId& e) {
  return to_string(e.base) + "+e" + std::to_string(e.axis + 1);
}

Box::Box(std::vector<Coord> l, std::vector<Coord> h) : lo(std::move(l)), hi(std::move(h)) {
  if (lo.size() != hi.size() || lo.empty()) throw std::invalid_argument("box: bad extents");
  unsigned __int128 vol = 1;
  for (size_t i = 0; i < lo.size(); ++i) {
    if (hi[i] < lo[i]) throw std::invalid_argument("box: hi < lo");
    unsigned __int128 span =
        static_cast<unsigned __int128>(static_cast<std::uint64_t>(hi[i] - lo[i])) + 1;
    vol *= span;
    if (vol > (static_cast<unsigned __int128>(1) << 62))
      throw ResourceError("box volume overflows the supported range");
  }
}

bool Box::contains(const LatticePoint& p) const {
  if (p.dim() != dim()) return false;
  for (int i = 0; i < dim(); ++i)
    if (p[i] < lo[static_cast<size_t>(i)] || p[i] > hi[static_cast<size_t>(i)]) return false;
  return true;
}

bool Box::on_inner_boundary(const LatticePoint& p) const {
  if (!contains(p)) return false;
  for (int i = 0; i < dim(); ++i)
    if (p[i] == lo[static_cast<size_t>(i)] || p[i] == hi[static_cast<size_t>(i)]) return true;
  return false;
}

unsigned long long Box::volume() const {
  unsigned long long vol = 1;
  for (size_t i = 0; i < lo.size(); ++i)
    vol *= static_cast<unsigned long long>(hi[i] - lo[i]) + 1;
  return vol;
}

Box Box::inflated(Coord margin) const {
  std::vector<Coord> l = lo, h = hi;
  for (size_t i = 0; i < l.size(); ++i) {
    l[i] -= margin;
    h[i] += margin;
  }
  return Box(std::move(l), std::move(h));
}

Box Box::intersect(const Box& o) const {
  if (o.dim() != dim()) throw std::invalid_argument("box intersect: dimension mismatch");
  std::vector<Coord> l(lo.size()), h(lo.size());
  for (size_t i = 0; i < lo.size(); ++i) {
    l[i] = std::max(lo[i], o.lo[i]);
    h[i] = std::min(hi[i], o.hi[i]);
    if (h[i] < l[i]) throw std::invalid_argument("box intersect: empty intersection");
  }
  return Box(std::move(l), std::move(h));
}

bool Box::intersects(const Box& o) const {
  if (o.dim() != dim()) return false;
  for (size_t i = 0; i < lo.size(); ++i)
    if (std::min(hi[i], o.hi[i]) < std::max(lo[i], o.lo[i])) return false;
  return true;
}

std::vector<Coord> Box::side_lengths() const {
  std::vector<Coord> s(lo.size());
  for (size_t i = 0; i < lo.size(); ++i) s[i] = hi[i] - lo[i] + 1;
  return s;
}

Region Region::box(Box b) {
  Region r;
  r.kind_ = Kind::kBox;
  r.dim_ = b.dim();
  r.box_ = std::move(b);
  return r;
}

Region Region::explicit_set(std::vector<LatticePoint> pts) {
  if (pts.empty()) throw std::invalid_argument("explicit region: empty");
  Region r;
  r.kind_ = Kind::kExplicit;
  r.dim_ = pts.front().dim();
  for (const auto& p : pts) {
    if (p.dim() != r.dim_) throw std::invalid_argument("explicit region: dimension mismatch");
    r.set_.insert(p);
  }
  r.pts_.assign(r.set_.begin(), r.set_.end());
  std::sort(r.pts_.begin(), r.pts_.end());
  return r;
}

Region Region::full(int d) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  Region r;
  r.kind_ = Kind::kFull;
  r.dim_ = d;
  return r;
}

bool Region::contains(const LatticePoint& p) const {
  if (p.dim() != dim_) return false;
  switch (kind_) {
    case Kind::kBox:
      return box_.contains(p);
    case Kind::kExplicit:
      return set_.count(p) > 0;
    case Kind::kFull:
      return true;
  }
  return false;
}

const Box& Region::as_box() const {
  if (kind_ != Kind::kBox) throw std::logic_error("region is not a box");
  return box_;
}

const PointSet& Region::as_set() const {
  if (kind_ != Kind::kExplicit) throw std::logic_error("region is not an explicit set");
  return set_;
}

std::vector<LatticePoint> Region::vertices() const {
  if (kind_ == Kind::kExplicit) return pts_;
  if (kind_ != Kind::kBox) throw std::invalid_argument("cannot enumerate the full lattice");
  std::vector<LatticePoint> out;
  out.reserve(static_cast<size_t>(box_.volume()));
  LatticePoint p(box_.lo);
  const int d = dim_;
  while (true) {
    out.push_back(p);
    int i = d - 1;
    while (i >= 0) {
      if (p[i] < box_.hi[static_cast<size_t>(i)]) {
        ++p[i];
        break;
      }
      p[i] = box_.lo[static_cast<size_t>(i)];
      --i;
    }
    if (i < 0) break;
  }
  return out;
}

unsigned long long Region::size() const {
  if (kind_ == Kind::kBox) return box_.volume();
  if (kind_ == Kind::kExplicit) return set_.size();
  throw std::invalid_argument("full lattice has no finite size");
}

Box Region::bounding_box() const {
  if (kind_ == Kind::kBox) return box_;
  if (kind_ != Kind::kExplicit) throw std::invalid_argument("full lattice has no bounding box");
  std::vector<Coord> lo(pts_.front().c), hi(pts_.front().c);
  for (const auto& p : pts_) {
    for (int i = 0; i < dim_; ++i) {
      lo[static_cast<size_t>(i)] = std::min(lo[static_cast<size_t>(i)], p[i]);
      hi[static_cast<size_t>(i)] = std::max(hi[static_cast<size_t>(i)], p[i]);
    }
  }
  return Box(std::move(lo), std::move(hi));
}

std::vector<LatticePoint> inner_boundary(const Region& D) {
  if (!D.finite()) throw std::invalid_argument("inner boundary of the full lattice is empty/ill-posed");
  std::vector<LatticePoint> out;
  for (const auto& p : D.vertices()) {
    bool bd = false;
    for (int i = 0; i < D.dim() && !bd; ++i) {
      if (!D.contains(unit_shift(p, i, 1)) || !D.contains(unit_shift(p, i, -1))) bd = true;
    }
    if (bd) out.push_back(p);
  }
  return out;
}

std::vector<LatticePoint> region_interior(const Region& D) {
  if (!D.finite()) throw std::invalid_argument("interior of the full lattice is ill-posed");
  std::vector<LatticePoint> out;
  for (const auto& p : D.vertices()) {
    bool bd = false;
    for (int i = 0; i < D.dim() && !bd; ++i) {
      if (!D.contains(unit_shift(p, i, 1)) || !D.contains(unit_shift(p, i, -1))) bd = true;
    }
    if (!bd) out.push_back(p);
  }
  return out;
}

std::vector<LatticePoint> connected_component(const LatticePoint& x, const Region& D) {
  if (!D.finite()) throw std::invalid_argument("component inside the full lattice is infinite");
  if (!D.contains(x)) return {};
  PointSet seen;
  std::deque<LatticePoint> queue{x};
  seen.insert(x);
  std::vector<LatticePoint> out;
  while (!queue.empty()) {
    LatticePoint p = queue.front();
    queue.pop_front();
    out.push_back(p);
    for (int i = 0; i < D.dim(); ++i) {
      for (Coord s : {Coord{1}, Coord{-1}}) {
        LatticePoint q = unit_shift(p, i, s);
        if (D.contains(q) && seen.insert(q).second) queue.push_back(q);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Shell::Shell(const EdgeId& edge, int kk) : e(edge), k(kk), center(edge_v(edge)) {
  if (kk < 1) throw std::invalid_argument("shell: k must be >= 1");
}

bool Shell::contains(const LatticePoint& z) const {
  if (z.dim() != center.dim()) return false;
  return linf_dist(z, center) == static_cast<std::uint64_t>(k);
}

std::vector<LatticePoint> Shell::vertices() const {
  const int d = center.dim();
  std::vector<LatticePoint> out;
  // Partition the sphere by the first axis pinned at distance k.
  for (int a = 0; a < d; ++a) {
    for (int sign = -1; sign <= 1; sign += 2) {
      // Axes before `a` stay strictly inside; axes after roam the full range.
      std::vector<Coord> lo(static_cast<size_t>(d)), hi(static_cast<size_t>(d));
      bool empty = false;
      for (int i = 0; i < d; ++i) {
        if (i == a) {
          lo[static_cast<size_t>(i)] = hi[static_cast<size_t>(i)] = center[i] + sign * k;
        } else if (i < a) {
          lo[static_cast<size_t>(i)] = center[i] - k + 1;
          hi[static_cast<size_t>(i)] = center[i] + k - 1;
          if (lo[static_cast<size_t>(i)] > hi[static_cast<size_t>(i)]) empty = true;
        } else {
          lo[static_cast<size_t>(i)] = center[i] - k;
          hi[static_cast<size_t>(i)] = center[i] + k;
        }
      }
      if (empty) continue;
      for (const auto& p : Region::box(Box(lo, hi)).vertices()) out.push_back(p);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<EdgeId> Shell::edges() const {
  std::vector<EdgeId> out;
  for (const auto& z : vertices()) {
    for (int i = 0; i < center.dim(); ++i) {
      LatticePoint q = unit_shift(z, i, 1);
      if (contains(q)) out.push_back(EdgeId{z, i});
    }
  }
  return out;
}

std::vector<LatticePoint> shell_connect_path(const Shell& s, const LatticePoint& v,
                                             const LatticePoint& w) {
  if (!s.contains(v) || !s.contains(w))
    throw std::invalid_argument("shell_connect_path: endpoints must lie on the shell");
  if (v == w) return {v};
  const int d = s.center.dim();
  if (d < 2) throw std::invalid_argument("shell_connect_path: shell is disconnected for d < 2");
  const Coord k = s.k;
  const LatticePoint& c = s.center;

  std::vector<LatticePoint> path{v};
  LatticePoint cur = v;
  auto step_axis_to = [&](int axis, Coord target) {
    while (cur[axis] != target) {
      cur[axis] += target > cur[axis] ? 1 : -1;
      path.push_back(cur);
    }
  };

  // Face of w: smallest pinned axis.
  int at = -1;
  for (int i = 0; i < d; ++i) {
    if (w[i] - c[i] == k || w[i] - c[i] == -k) {
      at = i;
      break;
    }
  }
  Coord target_at = w[at];

  if (cur[at] != target_at) {
    // Keep some other axis pinned while crossing to w's face.
    int ap = -1;
    for (int i = 0; i < d; ++i) {
      if (i != at && (cur[i] - c[i] == k || cur[i] - c[i] == -k)) {
        ap = i;
        break;
      }
    }
    if (ap < 0) {
      // Only `at` is pinned on v; pin a helper axis first (v stays on the
      // sphere because `at` remains at distance k throughout).
      ap = at == 0 ? 1 : 0;
      Coord helper = cur[ap] >= c[ap] ? c[ap] + k : c[ap] - k;
      step_axis_to(ap, helper);
    }
    step_axis_to(at, target_at);
  }
  // Walk the face toward w, axis by axis; the `at` coordinate stays pinned.
  for (int i = 0; i < d; ++i) {
    if (i != at) step_axis_to(i, w[i]);
  }
  return path;
}

}  // namespace fpplab
