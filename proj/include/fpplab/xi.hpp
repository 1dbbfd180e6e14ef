#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fpplab/lattice.hpp"
#include "fpplab/weights.hpp"

namespace fpplab {

// Hierarchical edge family on Z^d built along the first axis. Pieces are
// indexed by a level j in [1, n] and a prefix (i_1..i_j) of transversal bit
// patterns; each piece is a staircase doubling its start height, capped by a
// unit (d-1)-cube that carries the next level's branch points.
struct XiPiece {
  int level = 0;
  std::vector<std::uint32_t> prefix;  // bitmasks over the d-1 transversal axes
  std::vector<EdgeId> edges;
  LatticePoint start, end;
};

struct XiFamily {
  int d = 2;
  Coord m = 0;
  int n = 0;
  bool degenerate = false;            // m <= 12d
  std::vector<EdgeId> base;           // the unit hypercube at the origin
  std::vector<XiPiece> pieces;        // lexicographic in (level, prefix)
  std::vector<EdgeId> straight_fallback;  // degenerate branch: 0 -> m e1
};

// Two-phase staircase: coordinate-doubling while i <= 2*sum of transversal
// coords (boundary index inside the doubling phase), then a first-axis run.
// Preserves |v(i)|_1 = |v|_1 + i. Rejects negative coordinates.
LatticePoint v_sequence(const LatticePoint& v, std::uint64_t i);

// n = floor(log2(m / 6d)); m <= 12d yields the tagged degenerate family.
XiFamily build_xi(int d, Coord m);

struct XiVerifyReport {
  int d = 0;
  Coord m = 0;
  int n = 0;
  bool degenerate = false;
  bool xi1 = false;  // pairwise edge-disjointness
  bool xi2 = false;  // containment in [0, m/3] x [0, m/2]^{d-1}
  bool xi3 = false;  // per-set size bounds
  bool xi4 = false;  // per-leaf connectivity 0 -> (d 2^{n+1}, sum 2^{n-j+1} i_j)
  std::size_t set_count = 0;
  std::size_t edge_count = 0;
  std::vector<std::size_t> level_sizes;  // total edges per level, [0] = base
  std::string detail;                    // first violation, empty when clean

  bool all() const { return xi1 && xi2 && xi3 && xi4; }
};

XiVerifyReport verify_conditions(const XiFamily& fam);

// G_n: leaf heights {sum_j 2^{n-j+1} i_j} in Z^{d-1}, sorted.
std::vector<LatticePoint> leaf_grid(int d, int n);

// Leaf endpoint (d 2^{n+1}, b_n) for a full prefix.
LatticePoint leaf_target(const XiFamily& fam, const std::vector<std::uint32_t>& prefix);

// Straight path from (d 2^n, vbar) to (m - d 2^n, vbar): m - d 2^{n+1} edges.
// vbar must be a valid G_n height (even coords in [0, 2^{n+1} - 2]).
std::vector<LatticePoint> straight_segment(int d, int n, Coord m, const std::vector<Coord>& vbar);

struct XiSums {
  double v0 = 0.0;
  std::vector<double> vk;  // vk[k-1]: total weight of all level-k pieces
};

XiSums v_sums(const WeightConfig& cfg, const XiFamily& fam);

}  // namespace fpplab
