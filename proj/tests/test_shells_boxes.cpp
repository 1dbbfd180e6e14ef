#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "fpplab/lattice.hpp"
#include "fpplab/order.hpp"
#include "fpplab/passage.hpp"
#include "fpplab/shells_boxes.hpp"
#include "fpplab/weights.hpp"

using namespace fpplab;

namespace {

LatticePoint pt(std::vector<Coord> c) { return LatticePoint(std::move(c)); }

std::uint64_t min_l1(const LatticePoint& x, const std::vector<LatticePoint>& set) {
  std::uint64_t best = UINT64_MAX;
  for (const auto& p : set) best = std::min(best, l1_dist(x, p));
  return best;
}

bool self_avoiding(const std::vector<LatticePoint>& path) {
  PointSet seen;
  for (const auto& v : path)
    if (!seen.insert(v).second) return false;
  return true;
}

}  // namespace

TEST_CASE("frame boxes: scale cube, inflation, directed intersection") {
  const BoxFrame f = make_box_frame({0, 0}, 6, 1);
  CHECK(f.S() == Box({0, 0}, {5, 5}));
  CHECK(f.S().volume() == 36);
  CHECK(f.T() == Box({-6, -6}, {12, 12}));
  CHECK(f.B() == Box({6, -6}, {12, 12}));
  CHECK(f.axis() == 0);
  CHECK(f.sign() == 1);
  CHECK(f.B().side_lengths() == std::vector<Coord>{7, 19});

  const BoxFrame g = make_box_frame({1, 2}, 4, -2);
  CHECK(g.S() == Box({4, 8}, {7, 11}));
  CHECK(g.T() == Box({0, 4}, {12, 16}));
  CHECK(g.B() == Box({0, 4}, {12, 8}));
  CHECK(g.axis() == 1);
  CHECK(g.sign() == -1);

  // B sits inside T and shares no vertex with S.
  CHECK(f.T().intersect(f.B()) == f.B());
  CHECK(!f.S().intersects(f.B()));

  CHECK_THROWS_AS(make_box_frame({0}, 4, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_box_frame({0, 0}, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_box_frame({0, 0}, 4, 0), std::invalid_argument);
  CHECK_THROWS_AS(make_box_frame({0, 0}, 4, 3), std::invalid_argument);
  CHECK_THROWS_AS(make_box_frame({0, 0}, 4, -3), std::invalid_argument);
}

TEST_CASE("v2 skeleton of the 8/4 frame") {
  const BoxFrame f = make_box_frame({0, 0}, 8, 1);
  REQUIRE(f.B() == Box({8, -8}, {16, 16}));
  const Skeleton sk = build_skeleton(f, 4, SkeletonVariant::kV2);

  const std::vector<LatticePoint> want_d = {pt({12, -4}), pt({12, 0}), pt({12, 4}),
                                            pt({12, 8}), pt({12, 12})};
  CHECK(sk.D == want_d);

  CHECK(sk.C.size() == 65);
  CHECK(sk.C_edges.size() == 64);
  CHECK(sk.C_set.count(pt({12, -8})));
  CHECK(sk.C_set.count(pt({8, 0})));
  CHECK(sk.C_set.count(pt({16, 12})));
  CHECK(!sk.C_set.count(pt({9, 1})));

  // Midpoints: half-pitch along every skeleton line.
  CHECK(sk.E.size() == 16);
  for (const auto& e : {pt({12, 2}), pt({10, 0}), pt({14, 8}), pt({12, -6}), pt({12, 14})})
    CHECK(sk.E_set.count(e));
  CHECK(l1_dist(pt({12, 2}), pt({12, 0})) == 2);
  CHECK(l1_dist(pt({12, 2}), pt({12, 4})) == 2);

  CHECK(sk.E_tilde.size() == 32);
  for (const auto& e : sk.E_tilde) {
    const auto [a, b] = edge_endpoints(e);
    CHECK(sk.C_set.count(a));
    CHECK(sk.C_set.count(b));
    CHECK((sk.E_set.count(a) || sk.E_set.count(b)));
  }

  CHECK_THROWS_AS(build_skeleton(f, 3, SkeletonVariant::kV2), std::invalid_argument);
  CHECK_THROWS_AS(build_skeleton(f, 0, SkeletonVariant::kV1), std::invalid_argument);
}

TEST_CASE("v1 skeleton: distinguished edges leave the off-boundary skeleton") {
  const BoxFrame f = make_box_frame({0, 0}, 8, 1);
  const Skeleton sk = build_skeleton(f, 4, SkeletonVariant::kV1);
  const Box B = f.B();
  CHECK(sk.E.empty());
  CHECK(!sk.E_tilde.empty());
  for (const auto& e : sk.E_tilde) {
    const auto [a, b] = edge_endpoints(e);
    const bool a_core = sk.C_set.count(a) && !B.on_inner_boundary(a);
    const bool b_core = sk.C_set.count(b) && !B.on_inner_boundary(b);
    CHECK(a_core != b_core);  // exactly one endpoint in C minus the boundary
  }
}

TEST_CASE("f_set collects interior vertices near the skeleton") {
  const BoxFrame f = make_box_frame({0, 0}, 8, 1);
  const Skeleton sk = build_skeleton(f, 4, SkeletonVariant::kV2);
  const Box B = f.B();

  const auto got = f_set(sk, 1.0);
  std::vector<LatticePoint> want;
  for (const auto& v : Region::box(B).vertices()) {
    if (B.on_inner_boundary(v) || sk.C_set.count(v)) continue;
    if (min_l1(v, sk.C) == 1) want.push_back(v);
  }
  std::sort(want.begin(), want.end());
  CHECK(got == want);

  CHECK(f_set(sk, 0.0).empty());
  CHECK(f_set(sk, -2.0).empty());
}

TEST_CASE("edge distances against direct 1-norm computation") {
  const BoxFrame f = make_box_frame({0, 0}, 8, 1);
  const Skeleton sk = build_skeleton(f, 4, SkeletonVariant::kV2);

  const EllValues on_line = edge_distances(sk, canonical_edge(pt({12, 2}), pt({12, 3})));
  CHECK(on_line.ell == 0);
  CHECK(on_line.ell1 == 0);
  CHECK(on_line.ell2 == 0);

  const EllValues off = edge_distances(sk, canonical_edge(pt({9, 1}), pt({9, 2})));
  CHECK(off.ell == 2);
  CHECK(off.ell1 == 1);
  CHECK(off.ell2 == 1);

  const Skeleton v1 = build_skeleton(f, 4, SkeletonVariant::kV1);
  CHECK_THROWS_AS(edge_distances(v1, canonical_edge(pt({9, 1}), pt({9, 2}))),
                  std::invalid_argument);
}

TEST_CASE("edge counts by distance agree with brute force") {
  const BoxFrame f = make_box_frame({0, 0}, 8, 1);
  const Skeleton sk = build_skeleton(f, 4, SkeletonVariant::kV2);
  const Box B = f.B();

  auto brute = [&](std::uint64_t want_ell, bool split, std::uint64_t want_l1,
                   std::uint64_t want_l2) {
    std::size_t count = 0;
    for (const auto& v : Region::box(B).vertices()) {
      for (int a = 0; a < B.dim(); ++a) {
        const LatticePoint q = unit_shift(v, a, 1);
        if (!B.contains(q)) continue;
        const std::uint64_t l1 = std::min(min_l1(v, sk.C), min_l1(q, sk.C));
        const std::uint64_t l = std::min(min_l1(v, sk.E), min_l1(q, sk.E));
        const std::uint64_t l2 = l - std::min(l, l1);
        if (split ? (l1 == want_l1 && l2 == want_l2) : (l == want_ell)) ++count;
      }
    }
    return count;
  };

  for (std::uint64_t ell : {0u, 1u, 2u, 3u})
    CHECK(count_edges_at_ell(sk, ell) == brute(ell, false, 0, 0));
  CHECK(count_edges_at_ell12(sk, 0, 0) == brute(0, true, 0, 0));
  CHECK(count_edges_at_ell12(sk, 1, 1) == brute(0, true, 1, 1));
  CHECK(count_edges_at_ell12(sk, 2, 0) == brute(0, true, 2, 0));
}

TEST_CASE("skeleton components are midpoint-clipped stars") {
  const BoxFrame f = make_box_frame({0, 0}, 8, 1);
  const Skeleton sk = build_skeleton(f, 4, SkeletonVariant::kV2);

  auto star = skeleton_component(sk, pt({12, 0}));
  std::sort(star.begin(), star.end());
  const std::vector<LatticePoint> want = {pt({11, 0}), pt({12, -1}), pt({12, 0}), pt({12, 1}),
                                          pt({13, 0})};
  CHECK(star == want);

  auto stub = skeleton_component(sk, pt({8, 0}));
  std::sort(stub.begin(), stub.end());
  CHECK(stub == std::vector<LatticePoint>{pt({8, 0}), pt({9, 0})});

  CHECK_THROWS_AS(skeleton_component(sk, pt({12, 2})), std::invalid_argument);  // midpoint
  CHECK_THROWS_AS(skeleton_component(sk, pt({9, 1})), std::invalid_argument);   // off C
}

TEST_CASE("skeleton paths by clause") {
  const BoxFrame f = make_box_frame({0, 0}, 16, 1);
  REQUIRE(f.B() == Box({16, -16}, {32, 32}));
  const Skeleton sk = build_skeleton(f, 8, SkeletonVariant::kV2);

  SUBCASE("within a component") {
    const auto res = skeleton_path(sk, pt({21, 0}), pt({24, 3}), SkeletonPathClause::kComponent);
    CHECK(!res.is_crossing);
    REQUIRE(!res.path.empty());
    CHECK(res.path.front() == pt({21, 0}));
    CHECK(res.path.back() == pt({24, 3}));
    CHECK(res.path.size() == 7);  // geodesic length 6
    auto comp = skeleton_component(sk, pt({21, 0}));
    const PointSet comp_set(comp.begin(), comp.end());
    for (const auto& v : res.path) CHECK(comp_set.count(v));
    CHECK_THROWS_AS(skeleton_path(sk, pt({21, 0}), pt({24, 5}), SkeletonPathClause::kComponent),
                    std::invalid_argument);
  }

  SUBCASE("short hops within C") {
    const auto res = skeleton_path(sk, pt({24, 0}), pt({24, 1}), SkeletonPathClause::kWithinC);
    CHECK(res.path.size() == 2);
    CHECK_THROWS_AS(skeleton_path(sk, pt({24, 0}), pt({24, 2}), SkeletonPathClause::kWithinC),
                    std::invalid_argument);
    CHECK_THROWS_AS(skeleton_path(sk, pt({17, 1}), pt({24, 0}), SkeletonPathClause::kWithinC),
                    std::invalid_argument);
  }

  SUBCASE("boundary to skeleton") {
    const auto res = skeleton_path(sk, pt({16, 1}), pt({16, 0}), SkeletonPathClause::kBoundary);
    CHECK(res.path.size() == 2);
    CHECK(res.path.front() == pt({16, 1}));
    CHECK_THROWS_AS(skeleton_path(sk, pt({17, 1}), pt({16, 0}), SkeletonPathClause::kBoundary),
                    std::invalid_argument);
  }

  SUBCASE("crossing between components") {
    const auto res = skeleton_path(sk, pt({24, 3}), pt({24, 5}), SkeletonPathClause::kCrossing);
    CHECK(res.is_crossing);
    CHECK(sk.E_tilde_set.count(res.crossing));
    const auto [a, b] = edge_endpoints(res.crossing);
    CHECK(a[0] == 24);
    CHECK(b[0] == 24);
    CHECK(a[1] >= 3);
    CHECK(b[1] <= 5);
    CHECK_THROWS_AS(skeleton_path(sk, pt({24, 1}), pt({24, 3}), SkeletonPathClause::kCrossing),
                    std::invalid_argument);  // same component
    const Skeleton v1 = build_skeleton(f, 8, SkeletonVariant::kV1);
    CHECK_THROWS_AS(skeleton_path(v1, pt({24, 3}), pt({24, 5}), SkeletonPathClause::kCrossing),
                    std::invalid_argument);
  }
}

TEST_CASE("shell-restricted worst-pair times") {
  const WeightConfig one(DistributionSpec::constant(1.0), 1);
  const EdgeId e2 = canonical_edge(pt({0, 0}), pt({1, 0}));
  CHECK(shell_max_restricted_time(one, Shell(e2, 1)) == doctest::Approx(4.0));
  CHECK(shell_max_restricted_time(one, Shell(e2, 2)) == doctest::Approx(8.0));
  const WeightConfig one3(DistributionSpec::constant(1.0), 1);
  const EdgeId e3 = canonical_edge(pt({0, 0, 0}), pt({1, 0, 0}));
  CHECK(shell_max_restricted_time(one3, Shell(e3, 1)) == doctest::Approx(6.0));

  // A 1d shell is two isolated vertices.
  const WeightConfig one1(DistributionSpec::constant(1.0), 1);
  CHECK(shell_max_restricted_time(one1, Shell(canonical_edge(pt({0}), pt({1})), 1)) == kInf);
}

TEST_CASE("shell-restricted times equal explicit-region passage") {
  const EdgeId e = canonical_edge(pt({0, 0}), pt({1, 0}));
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const WeightConfig wc(DistributionSpec::exponential(1.0), seed);
    const Shell sh(e, 2);
    const auto verts = sh.vertices();
    const Region dom = Region::explicit_set(verts);
    double worst = 0.0;
    for (size_t i = 0; i < verts.size(); ++i)
      for (size_t j = i + 1; j < verts.size(); ++j)
        worst = std::max(worst, passage_time(wc, verts[i], verts[j], dom).time);
    CHECK(shell_max_restricted_time(wc, sh) == doctest::Approx(worst).epsilon(1e-12));
  }
}

TEST_CASE("good-edge scan: free shells certify, expensive shells do not") {
  const EdgeId e = canonical_edge(pt({0, 0}), pt({1, 0}));

  const WeightConfig zero(DistributionSpec::constant(0.0), 1);
  GoodEdgeParams sub{GoodVariant::kSubexp, 1.0, 16.0, 1.0, 1.0};
  auto res = is_good_edge(zero, e, sub);
  CHECK(res.good);
  CHECK(res.witness_k == 1);
  CHECK(res.k_max == 1);
  CHECK(res.f == doctest::Approx(order_f(2, 1.0, 16.0)));
  CHECK(res.threshold == doctest::Approx(2.0 * res.f));

  GoodEdgeParams mom{GoodVariant::kMoment, 0.0, 16.0, 1.0, 1.0};
  res = is_good_edge(zero, e, mom);
  CHECK(res.good);
  CHECK(res.threshold == doctest::Approx(16.0 * order_f(2, 0.0, 16.0)));

  GoodEdgeParams sup{GoodVariant::kSuperexp, 2.0, 16.0, 1.0, 1.0};
  res = is_good_edge(zero, e, sup);
  CHECK(res.good);
  CHECK(res.threshold == doctest::Approx(4.0 * order_f(2, 2.0, 16.0)));

  const WeightConfig ten(DistributionSpec::constant(10.0), 1);
  res = is_good_edge(ten, e, sub);
  CHECK(!res.good);
  CHECK(res.witness_k == 0);

  // A generous constant makes the first shell overwhelmingly cheap.
  const WeightConfig ew(DistributionSpec::exponential(1.0), 5);
  GoodEdgeParams roomy{GoodVariant::kSubexp, 1.0, 1e6, 20.0, 1.0};
  res = is_good_edge(ew, e, roomy);
  CHECK(res.good);
  CHECK(res.k_max == 3);
}

TEST_CASE("good-edge parameter validation") {
  const EdgeId e = canonical_edge(pt({0, 0}), pt({1, 0}));
  const WeightConfig wc(DistributionSpec::constant(1.0), 1);
  CHECK_THROWS_AS(is_good_edge(wc, e, {GoodVariant::kSubexp, 2.0, 16.0, 1.0, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(is_good_edge(wc, e, {GoodVariant::kSubexp, 0.0, 16.0, 1.0, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(is_good_edge(wc, e, {GoodVariant::kMoment, 0.5, 16.0, 1.0, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(is_good_edge(wc, e, {GoodVariant::kSuperexp, 1.0, 16.0, 1.0, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(is_good_edge(wc, e, {GoodVariant::kSubexp, 1.0, 16.0, 0.0, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      is_good_edge(wc, canonical_edge(pt({0}), pt({1})), {GoodVariant::kSubexp, 1.0, 16.0, 1.0, 1.0}),
      std::invalid_argument);
}

TEST_CASE("detour rewrite splices the cheap shell connection") {
  const EdgeId heavy = canonical_edge(pt({0, 0}), pt({1, 0}));
  WeightConfig wc(DistributionSpec::constant(1.0), 1);
  wc = wc.with_override(heavy, 100.0);
  const std::vector<LatticePoint> path = {pt({-2, 0}), pt({-1, 0}), pt({0, 0}),
                                          pt({1, 0}),  pt({2, 0}),  pt({3, 0})};
  const DetourResult res = detour_rewrite(wc, path, heavy, 1);
  CHECK(res.rerouted);
  CHECK(res.old_time == doctest::Approx(104.0));
  CHECK(res.new_time == doctest::Approx(7.0));
  CHECK(res.path.front() == pt({-2, 0}));
  CHECK(res.path.back() == pt({3, 0}));
  CHECK(self_avoiding(res.path));
  for (size_t i = 0; i + 1 < res.path.size(); ++i) {
    CHECK(l1_dist(res.path[i], res.path[i + 1]) == 1);
    CHECK(canonical_edge(res.path[i], res.path[i + 1]) != heavy);
  }
}

TEST_CASE("detour rewrite leaves non-straddling paths alone") {
  const EdgeId heavy = canonical_edge(pt({0, 0}), pt({1, 0}));
  WeightConfig wc(DistributionSpec::constant(1.0), 1);
  wc = wc.with_override(heavy, 100.0);
  const std::vector<LatticePoint> stub = {pt({0, 0}), pt({1, 0})};
  const DetourResult res = detour_rewrite(wc, stub, heavy, 1);
  CHECK(!res.rerouted);
  CHECK(res.path == stub);
  CHECK(res.new_time == res.old_time);

  CHECK_THROWS_AS(detour_rewrite(wc, {pt({5, 5}), pt({6, 5})}, heavy, 1), std::invalid_argument);
  CHECK_THROWS_AS(detour_rewrite(wc, {pt({0, 0}), pt({2, 0})}, heavy, 1), std::invalid_argument);
  CHECK_THROWS_AS(detour_rewrite(wc, {pt({0, 0})}, heavy, 1), std::invalid_argument);
}

TEST_CASE("blackness: constant environments") {
  const BoxFrame f = make_box_frame({0, 0}, 8, 1);
  const Skeleton v2 = build_skeleton(f, 4, SkeletonVariant::kV2);
  const Skeleton v1 = build_skeleton(f, 4, SkeletonVariant::kV1);
  const WeightConfig one(DistributionSpec::constant(1.0), 1);

  BlackParams p;
  p.delta7 = 0.1;
  p.M = 5.0;
  p.N = 16.0;
  p.r = 1.0;
  // Any positive speed margin defeats a constant environment.
  auto rep = is_black(one, v2, p);
  CHECK(!rep.black);
  CHECK(rep.failed_clause == "speed");
  CHECK(rep.witness_time < (1.0 + p.delta7) * static_cast<double>(l1_dist(rep.witness_v, rep.witness_w)));

  p.delta7 = 0.0;
  rep = is_black(one, v2, p);
  CHECK(rep.black);
  CHECK(rep.failed_clause.empty());

  // Perimeter detours beat M = 2 on the worst straight pair.
  p.M = 2.0;
  rep = is_black(one, v2, p);
  CHECK(!rep.black);
  CHECK(rep.failed_clause == "boundary-time");

  p.M = 1.0;
  rep = is_black(one, v1, p);
  CHECK(rep.black);
  p.M = 0.4;
  rep = is_black(one, v1, p);
  CHECK(!rep.black);
  CHECK(rep.failed_clause == "boundary-link");
}

TEST_CASE("blackness: a heavy boundary edge is flagged") {
  const BoxFrame f = make_box_frame({0, 0}, 8, 1);
  const Skeleton v2 = build_skeleton(f, 4, SkeletonVariant::kV2);
  WeightConfig wc(DistributionSpec::constant(1.0), 1);
  wc = wc.with_override(canonical_edge(pt({8, -8}), pt({8, -7})), 100.0);
  BlackParams p;
  p.delta7 = 0.0;
  p.M = 200.0;  // boundary-time stays satisfied; the edge clause trips
  p.N = 16.0;
  p.r = 1.0;
  const auto rep = is_black(wc, v2, p);
  CHECK(!rep.black);
  CHECK(rep.failed_clause == "boundary-edge");
  CHECK(rep.witness_time == doctest::Approx(100.0));
}

TEST_CASE("blackness validates v2 parameters") {
  const BoxFrame f = make_box_frame({0, 0}, 8, 1);
  const Skeleton v2 = build_skeleton(f, 4, SkeletonVariant::kV2);
  const WeightConfig one(DistributionSpec::constant(1.0), 1);
  BlackParams p;
  p.N = 8.0;
  p.r = 1.0;
  CHECK_THROWS_AS(is_black(one, v2, p), std::invalid_argument);
  p.N = 16.0;
  p.r = 0.0;
  CHECK_THROWS_AS(is_black(one, v2, p), std::invalid_argument);
}

TEST_CASE("A1 band and light-skeleton clauses") {
  const BoxFrame fr = make_box_frame({0, 0}, 8, 1);
  const Skeleton v1 = build_skeleton(fr, 4, SkeletonVariant::kV1);
  const WeightConfig one(DistributionSpec::constant(1.0), 1);

  AParams p;
  p.c = 0.4;
  p.gamma = 2.0;
  p.N = std::exp(4.0);  // f = 2 at d = 2, r = 1
  p.r = 1.0;
  auto rep = check_A_condition(one, v1, ACondition::kA1, p);
  CHECK(rep.satisfied);

  p.c = 0.6;  // band floor 1.2 rejects unit weights
  rep = check_A_condition(one, v1, ACondition::kA1, p);
  CHECK(!rep.satisfied);
  CHECK(rep.violated_clause == "band");

  p.c = 0.4;
  WeightConfig spiked = one.with_override(canonical_edge(pt({12, 1}), pt({12, 2})), 10.0);
  rep = check_A_condition(spiked, v1, ACondition::kA1, p);
  CHECK(!rep.satisfied);
  CHECK(rep.violated_clause == "skeleton-light");

  const Skeleton v2 = build_skeleton(fr, 4, SkeletonVariant::kV2);
  CHECK_THROWS_AS(check_A_condition(one, v2, ACondition::kA1, p), std::invalid_argument);
}

TEST_CASE("A2 floors over the directed box") {
  const BoxFrame fr = make_box_frame({0, 0}, 8, 1);
  const Skeleton v2 = build_skeleton(fr, 4, SkeletonVariant::kV2);
  const WeightConfig base(DistributionSpec::constant(1.2), 1);

  AParams p;
  p.c = 0.3;
  p.gamma = 10.0;
  p.M = 1.0;
  p.N = 16.0;
  p.r = 2.0;
  auto rep = check_A_condition(base, v2, ACondition::kA2, p);
  CHECK(rep.satisfied);

  p.M = 1.2;  // squared floor 1.44 now exceeds every interior weight
  rep = check_A_condition(base, v2, ACondition::kA2, p);
  CHECK(!rep.satisfied);
  CHECK(rep.violated_clause == "interior-floor");

  p.M = 1.0;
  p.gamma = 1.01;
  rep = check_A_condition(base, v2, ACondition::kA2, p);
  CHECK(!rep.satisfied);
  CHECK(rep.violated_clause == "band");

  p.gamma = 10.0;
  const WeightConfig dip = base.with_override(canonical_edge(pt({8, 1}), pt({9, 1})), 1.0);
  rep = check_A_condition(dip, v2, ACondition::kA2, p);
  CHECK(!rep.satisfied);
  CHECK(rep.violated_clause == "crossing-floor");

  p.r = 1.0;
  CHECK_THROWS_AS(check_A_condition(base, v2, ACondition::kA2, p), std::invalid_argument);
  p.r = 2.0;
  p.N = 8.0;
  CHECK_THROWS_AS(check_A_condition(base, v2, ACondition::kA2, p), std::invalid_argument);
  const Skeleton v1 = build_skeleton(fr, 4, SkeletonVariant::kV1);
  p.N = 16.0;
  CHECK_THROWS_AS(check_A_condition(base, v1, ACondition::kA2, p), std::invalid_argument);
}

TEST_CASE("A3 floors near the skeleton") {
  const BoxFrame fr = make_box_frame({0, 0}, 8, 1);
  const Skeleton v2 = build_skeleton(fr, 4, SkeletonVariant::kV2);
  const WeightConfig base(DistributionSpec::constant(1.2), 1);

  AParams p;
  p.c = 0.3;
  p.gamma = 10.0;
  p.M = 1.0;
  p.N = 16.0;
  p.r = 1.0;  // one below the dimension
  auto rep = check_A_condition(base, v2, ACondition::kA3, p);
  CHECK(rep.satisfied);

  p.M = 1.2;
  rep = check_A_condition(base, v2, ACondition::kA3, p);
  CHECK(!rep.satisfied);
  CHECK(rep.violated_clause == "f-floor");

  p.M = 1.0;
  const WeightConfig dip = base.with_override(canonical_edge(pt({8, 1}), pt({9, 1})), 1.0);
  rep = check_A_condition(dip, v2, ACondition::kA3, p);
  CHECK(!rep.satisfied);
  CHECK(rep.violated_clause == "crossing-floor");
}

TEST_CASE("A3-tilde avoidance speed") {
  const BoxFrame fr = make_box_frame({0, 0}, 8, 1);
  const Skeleton v2 = build_skeleton(fr, 4, SkeletonVariant::kV2);
  const WeightConfig one(DistributionSpec::constant(1.0), 1);

  AParams p;
  p.c = 0.3;
  p.gamma = 2.0;
  p.N = 16.0;
  p.delta7 = 0.0;
  auto rep = check_A_condition(one, v2, ACondition::kA3Tilde, p);
  CHECK(rep.satisfied);

  p.delta7 = 0.1;
  rep = check_A_condition(one, v2, ACondition::kA3Tilde, p);
  CHECK(!rep.satisfied);
  CHECK(rep.violated_clause == "avoidance-speed");

  const Skeleton v1 = build_skeleton(fr, 4, SkeletonVariant::kV1);
  CHECK_THROWS_AS(check_A_condition(one, v1, ACondition::kA3Tilde, p), std::invalid_argument);
  p.gamma = 1.0;
  CHECK_THROWS_AS(check_A_condition(one, v2, ACondition::kA3Tilde, p), std::invalid_argument);
  p.gamma = 2.0;
  p.c = 0.0;
  CHECK_THROWS_AS(check_A_condition(one, v2, ACondition::kA3Tilde, p), std::invalid_argument);
}
