#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace fpplab {

using Coord = std::int64_t;

// Vertex of Z^d. Dimension is carried by the coordinate vector.
struct LatticePoint {
  std::vector<Coord> c;

  LatticePoint() = default;
  explicit LatticePoint(std::vector<Coord> coords) : c(std::move(coords)) {}
  LatticePoint(std::initializer_list<Coord> coords) : c(coords) {}

  int dim() const { return static_cast<int>(c.size()); }
  Coord& operator[](int i) { return c[static_cast<size_t>(i)]; }
  Coord operator[](int i) const { return c[static_cast<size_t>(i)]; }

  bool operator==(const LatticePoint& o) const { return c == o.c; }
  bool operator!=(const LatticePoint& o) const { return c != o.c; }
  bool operator<(const LatticePoint& o) const { return c < o.c; }  // lexicographic
};

LatticePoint zero_point(int d);
LatticePoint unit_shift(const LatticePoint& p, int axis, Coord delta);

std::uint64_t l1_norm(const LatticePoint& p);
std::uint64_t linf_norm(const LatticePoint& p);
std::uint64_t l1_dist(const LatticePoint& a, const LatticePoint& b);
std::uint64_t linf_dist(const LatticePoint& a, const LatticePoint& b);

std::string to_string(const LatticePoint& p);

struct PointHash {
  std::size_t operator()(const LatticePoint& p) const;
};

// Nearest-neighbor edge, stored canonically: `base` is the lexicographically
// smaller endpoint, the other endpoint is base + e_axis.
struct EdgeId {
  LatticePoint base;
  int axis = 0;

  bool operator==(const EdgeId& o) const { return axis == o.axis && base == o.base; }
  bool operator!=(const EdgeId& o) const { return !(*this == o); }
};

struct EdgeHash {
  std::size_t operator()(const EdgeId& e) const;
};

using PointSet = std::unordered_set<LatticePoint, PointHash>;
using EdgeSet = std::unordered_set<EdgeId, EdgeHash>;
template <class V>
using PointMap = std::unordered_map<LatticePoint, V, PointHash>;
template <class V>
using EdgeMap = std::unordered_map<EdgeId, V, EdgeHash>;

// Rejects non-adjacent or dimension-mismatched endpoints.
EdgeId canonical_edge(const LatticePoint& p, const LatticePoint& q);
std::pair<LatticePoint, LatticePoint> edge_endpoints(const EdgeId& e);
// Endpoint of minimal 1-norm; unique because endpoint 1-norms differ by one.
LatticePoint edge_v(const EdgeId& e);
std::string to_string(const EdgeId& e);

// Axis-aligned box [lo_1,hi_1] x ... x [lo_d,hi_d], inclusive.
struct Box {
  std::vector<Coord> lo, hi;

  Box() = default;
  Box(std::vector<Coord> l, std::vector<Coord> h);  // validates lo <= hi, overflow

  bool operator==(const Box& o) const = default;

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const LatticePoint& p) const;
  // True iff p is in the box and touches a face.
  bool on_inner_boundary(const LatticePoint& p) const;
  unsigned long long volume() const;  // checked at construction
  Box inflated(Coord margin) const;
  Box intersect(const Box& o) const;  // throws if empty
  bool intersects(const Box& o) const;
  std::vector<Coord> side_lengths() const;  // vertex counts per axis
};

// Region of Z^d: finite box, finite explicit set, or the full lattice.
class Region {
 public:
  enum class Kind { kBox, kExplicit, kFull };

  static Region box(Box b);
  static Region explicit_set(std::vector<LatticePoint> pts);
  static Region full(int d);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  bool finite() const { return kind_ != Kind::kFull; }
  bool contains(const LatticePoint& p) const;
  const Box& as_box() const;
  const PointSet& as_set() const;
  // Finite regions only; boxes enumerate their volume.
  std::vector<LatticePoint> vertices() const;
  unsigned long long size() const;
  Box bounding_box() const;  // finite regions only

 private:
  Kind kind_ = Kind::kFull;
  int dim_ = 0;
  Box box_;
  PointSet set_;
  std::vector<LatticePoint> pts_;
};

// Inner vertex boundary: points of D with a lattice neighbor outside D.
std::vector<LatticePoint> inner_boundary(const Region& D);
std::vector<LatticePoint> region_interior(const Region& D);
// Connected component of x inside D (nearest-neighbor adjacency); empty if x outside D.
std::vector<LatticePoint> connected_component(const LatticePoint& x, const Region& D);

// Shell C_k around edge e: vertices at sup-distance exactly k from v_e,
// together with the nearest-neighbor edges lying entirely on the shell.
struct Shell {
  EdgeId e;
  int k = 0;
  LatticePoint center;  // v_e

  Shell(const EdgeId& edge, int kk);
  bool contains(const LatticePoint& z) const;
  std::vector<LatticePoint> vertices() const;
  std::vector<EdgeId> edges() const;
};

// Deterministic face-walk between two shell vertices, staying on the shell.
// Length is bounded by 4*d^2*(2k+1). Rejects d < 2 when v != w.
std::vector<LatticePoint> shell_connect_path(const Shell& s, const LatticePoint& v,
                                             const LatticePoint& w);

}  // namespace fpplab
