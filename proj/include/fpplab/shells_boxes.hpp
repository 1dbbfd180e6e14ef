#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fpplab/lattice.hpp"
#include "fpplab/passage.hpp"
#include "fpplab/weights.hpp"

namespace fpplab {

// ---- good edges -------------------------------------------------------------

enum class GoodVariant {
  kSubexp,    // 0 < r <= 1: all-pairs shell times against 2*M*f
  kMoment,    // r = 0: shell range [1, M*f], threshold 4*d^2*M^2*f
  kSuperexp,  // r > 1: threshold 2*d*M2*f
};

struct GoodEdgeParams {
  GoodVariant variant = GoodVariant::kSubexp;
  double r = 0.0;   // tail exponent used by the order function
  double N = 0.0;   // scale entering f_{d,r}(N); N >= 16
  double M = 1.0;   // kSubexp / kMoment constant
  double M2 = 1.0;  // kSuperexp constant
};

struct GoodEdgeResult {
  bool good = false;
  int witness_k = 0;     // first shell index passing the test (0 if none)
  int k_max = 0;         // top of the shell range scanned
  double threshold = 0;  // time bound the witness shell satisfied
  double f = 0;          // order function value used
};

// Scans shells C_k around e for one whose restricted all-pairs passage times
// all clear the variant's threshold.
GoodEdgeResult is_good_edge(const WeightConfig& cfg, const EdgeId& e, const GoodEdgeParams& p);

// max over vertex pairs of the shell-restricted passage time; +inf if the
// shell graph is disconnected (d = 1 shells, never for d >= 2).
double shell_max_restricted_time(const WeightConfig& cfg, const Shell& shell);

struct DetourResult {
  std::vector<LatticePoint> path;
  double old_time = 0.0;
  double new_time = 0.0;
  bool rerouted = false;  // false when the path never crosses the shell properly
};

// Splices the optimal within-shell connection between the first and last hits
// of C_k in place of the middle of `path`; the heavy edge must lie strictly
// between the hits. Guarded by: if the heavy weight exceeds `threshold` and
// the shell passes the good-edge test at k, the rewrite strictly improves.
DetourResult detour_rewrite(const WeightConfig& cfg, const std::vector<LatticePoint>& path,
                            const EdgeId& heavy, int k);

// ---- box frames and skeletons ----------------------------------------------

// Directed frame: scale-n cube S(l) with its inflation T(l) and the directed
// intersection B^j = T(l) cap T(l + 2 sgn(j) e_|j|), j in {+-1, ..., +-d}.
struct BoxFrame {
  std::vector<Coord> l;
  Coord n = 1;
  int j = 1;

  int dim() const { return static_cast<int>(l.size()); }
  int axis() const { return j > 0 ? j - 1 : -j - 1; }
  int sign() const { return j > 0 ? 1 : -1; }
  Box S() const;
  Box T() const;
  Box B() const;
};

BoxFrame make_box_frame(const std::vector<Coord>& l, Coord n, int j);

enum class SkeletonVariant { kV1, kV2 };

// Lattice skeleton of B^j at pitch n1: centers D, axis lines C with their
// edges, and the variant's distinguished edge set E-tilde. The v2 variant
// additionally carries the midpoint vertex set E (n1 must be even).
struct Skeleton {
  BoxFrame frame;
  Coord n1 = 1;
  SkeletonVariant variant = SkeletonVariant::kV1;

  std::vector<LatticePoint> D;
  std::vector<LatticePoint> C;  // sorted
  PointSet C_set;
  std::vector<EdgeId> C_edges;  // C-tilde
  EdgeSet C_edge_set;
  std::vector<LatticePoint> E;  // v2 midpoints; empty for v1
  PointSet E_set;
  std::vector<EdgeId> E_tilde;  // v1: edges leaving C \ boundary; v2: E-incident edges of C
  EdgeSet E_tilde_set;
};

Skeleton build_skeleton(const BoxFrame& frame, Coord n1, SkeletonVariant variant);

// F_j: interior vertices within 1-norm `radius` of C, excluding boundary and C.
std::vector<LatticePoint> f_set(const Skeleton& sk, double radius);

// l(x) = d_1(x, E), l1(x) = d_1(x, C), l2 = l - l1; edge values take the min
// over endpoints, coordinate-wise independently.
struct EllValues {
  std::uint64_t ell = 0, ell1 = 0, ell2 = 0;
};
EllValues edge_distances(const Skeleton& sk, const EdgeId& e);  // v2 only

// #{edges inside B^j with l(e) = ell} (both endpoints in B^j).
std::size_t count_edges_at_ell(const Skeleton& sk, std::uint64_t ell);
// #{edges inside B^j with l1(e) = ell1 and l2(e) = ell2}.
std::size_t count_edges_at_ell12(const Skeleton& sk, std::uint64_t ell1, std::uint64_t ell2);

// ---- skeleton paths ----------------------------------------------------------

enum class SkeletonPathClause {
  kComponent,  // within one component of C \ E
  kWithinC,    // within C, |a-b|_1 < n1/4
  kBoundary,   // a on the box boundary, b in C, |a-b|_1 < n1/4, path in C u dB
  kCrossing,   // different components: the collinear crossing edge of E-tilde
};

struct SkeletonPathResult {
  std::vector<LatticePoint> path;  // geodesic-length vertex path (not kCrossing)
  EdgeId crossing;                 // kCrossing only
  bool is_crossing = false;
};

SkeletonPathResult skeleton_path(const Skeleton& sk, const LatticePoint& a, const LatticePoint& b,
                                 SkeletonPathClause clause);

// Component of C \ E containing x (v2); components are stars around D centers
// clipped at the midpoints.
std::vector<LatticePoint> skeleton_component(const Skeleton& sk, const LatticePoint& x);

// ---- blackness ----------------------------------------------------------------

struct BlackParams {
  double delta7 = 0.0;  // speed margin over F^-
  double M = 1.0;       // v1 boundary-time constant
  double N = 0.0;       // v2 thresholds take (log N)^(1/8dr); N >= 16
  double r = 1.0;       // v2 tail exponent
};

struct BlackReport {
  bool black = false;
  std::string failed_clause;  // "", "speed", "boundary-link", "boundary-time", "boundary-edge"
  std::string detail;
  LatticePoint witness_v, witness_w;
  double witness_time = 0.0;
};

BlackReport is_black(const WeightConfig& cfg, const Skeleton& sk, const BlackParams& p);

// ---- A-conditions --------------------------------------------------------------

enum class ACondition { kA1, kA2, kA3, kA3Tilde };

struct AParams {
  double c = 1.0;
  double gamma = 2.0;   // band width factor, > 1
  double M = 1.0;       // squared floor entering A2/A3
  double N = 0.0;       // order-function scale; N >= 16
  double r = 1.0;       // tail exponent (A2: r > 1; A3 uses r = d-1)
  double delta7 = 0.0;  // A3-tilde speed margin
};

struct AReport {
  bool satisfied = false;
  std::string violated_clause;
  std::string detail;
};

AReport check_A_condition(const WeightConfig& cfg, const Skeleton& sk, ACondition which,
                          const AParams& p);

}  // namespace fpplab
