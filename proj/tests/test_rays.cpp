#include <gtest/gtest.h>

#include "lfends/error.hpp"
#include "lfends/rays.hpp"
#include "oracles.hpp"

using namespace lfends;

namespace {

struct Setup {
  std::shared_ptr<const Ball> window;
  Exhaustion exh;
  EndTower tower;
};

Setup setup(const std::string& name, int depth, int window_radius) {
  Setup s;
  s.window = std::make_shared<const Ball>(materialize_ball(GraphGenerator::from_name(name), window_radius));
  s.exh = efficient_exhaustion(s.window, depth);
  s.tower = build_tower(s.exh);
  return s;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no lfends::Error thrown";
  return ErrorKind::InvariantViolation;
}

VertexId xy(std::int64_t x, std::int64_t y) { return codec::grid_encode({x, y}); }

}  // namespace

TEST(FindRay, LineRightThread) {
  const auto s = setup("line", 4, 6);
  const auto ray = find_ray(s.tower, prefix_of(s.tower, 3, 1));
  EXPECT_EQ(ray.vertices, (std::vector<VertexId>{0, 2, 4, 6, 8, 10, 12}));
  EXPECT_EQ(ray.exit_indices, (std::vector<std::size_t>{0, 1, 2, 3}));
}

TEST(FindRay, RegularTreeLeftmostThread) {
  const auto s = setup("regular_tree(4)", 3, 5);
  const auto ray = find_ray(s.tower, prefix_of(s.tower, 2, 0));
  // First child of v >= 1 in the BFS numbering is 5 + 3(v - 1).
  EXPECT_EQ(ray.vertices, (std::vector<VertexId>{0, 1, 5, 17, 53, 161}));
}

TEST(FindRay, EveryThreadRoundTrips) {
  for (const auto& name : oracle::corpus()) {
    const auto s = setup(name, 4, 6);
    for (const auto& eps : enumerate_prefixes(s.tower, 4)) {
      const auto ray = find_ray(s.tower, eps);
      EXPECT_FALSE(ray_violation(*s.window, ray.vertices).has_value());
      EXPECT_EQ(points_to(ray, s.tower), eps) << name;
      EXPECT_TRUE(s.window->on_sphere(s.window->require_local(ray.vertices.back())));
    }
  }
}

TEST(FindRay, RejectsBadPrefix) {
  const auto s = setup("binary_tree", 3, 5);
  EXPECT_EQ(kind_of([&] { find_ray(s.tower, EndPrefix{{0, 0}}); }), ErrorKind::DepthMismatch);
  EXPECT_EQ(kind_of([&] { find_ray(s.tower, EndPrefix{{0, 3, 0}}); }), ErrorKind::IncoherentPrefix);
}

TEST(PointsTo, LineLeftRay) {
  const auto s = setup("line", 3, 5);
  const std::vector<VertexId> left{0, 1, 3, 5, 7, 9};
  EXPECT_EQ(points_to(left, s.tower), prefix_of(s.tower, 2, 0));
}

TEST(PointsTo, CombSpine) {
  const auto s = setup("comb", 4, 7);
  std::vector<VertexId> spine;
  for (VertexId j = 0; j <= 7; ++j) spine.push_back(codec::cantor_pair(j, 0));
  const auto eps = points_to(spine, s.tower);
  const auto ref = oracle::tower(GraphGenerator::comb(), 4, 7);
  for (std::size_t l = 0; l < 4; ++l) EXPECT_TRUE(ref.components[l][eps.thread[l]].count(spine.back()));
}

TEST(PointsTo, RejectsNonProperRay) {
  const auto s = setup("grid(2)", 3, 8);
  const std::vector<VertexId> wiggle{xy(0, 0), xy(1, 0), xy(1, 1), xy(0, 1), xy(-1, 1), xy(-1, 2), xy(-1, 3),
                                     xy(-1, 4), xy(-1, 5)};
  EXPECT_EQ(kind_of([&] { points_to(wiggle, s.tower); }), ErrorKind::RayNotProperInWindow);
  const std::vector<VertexId> gap{0, 4};
  EXPECT_EQ(kind_of([&] { points_to(gap, s.tower); }), ErrorKind::RayNotProperInWindow);
}

TEST(Retraction, HalflineIsIdentity) {
  const auto s = setup("halfline", 4, 6);
  const std::vector<VertexId> ray{0, 1, 2, 3, 4, 5, 6};
  const auto rho = build_retraction(s.exh, ray);
  for (VertexId v = 0; v <= 6; ++v) EXPECT_EQ(rho.value(v), v);
  EXPECT_EQ(rho.edge_spread, 1u);
}

TEST(Retraction, LineRightRay) {
  const auto s = setup("line", 4, 6);
  const auto ray = find_ray(s.tower, prefix_of(s.tower, 3, 1)).vertices;
  const auto rho = build_retraction(s.exh, ray);
  EXPECT_EQ(rho.a, (std::vector<std::size_t>{0, 1, 2, 3}));
  EXPECT_EQ(rho.b, (std::vector<std::size_t>{0, 1, 2, 3}));
  // -k lies first in K_{k+1}, so it goes to a_{k+1} = k.
  for (std::int64_t k = 1; k <= 3; ++k) EXPECT_EQ(rho.value(codec::zigzag(-k)), static_cast<std::uint64_t>(k));
  EXPECT_FALSE(retraction_violation(s.exh, ray, rho).has_value());
}

TEST(Retraction, GridAxisPreimagesExhaustive) {
  const auto s = setup("grid(2)", 4, 7);
  std::vector<VertexId> ray;
  for (int x = 0; x <= 7; ++x) ray.push_back(xy(x, 0));
  const auto exh = ray_efficient_exhaustion(s.window, ray, 4);
  const auto rho = build_retraction(exh, ray);
  for (std::size_t t = 0; t < ray.size(); ++t) EXPECT_EQ(rho.value(ray[t]), t);
  const Ball& w = *s.window;
  for (std::size_t i = 0; i + 1 < exh.depth(); ++i) {
    for (LocalIndex v = 0; v < w.size(); ++v) {
      if (rho.values[v] <= rho.a[i]) EXPECT_TRUE(exh.levels[i + 1].contains(w.vertex(v)));
    }
  }
}

TEST(Retraction, RequiresRayEfficiency) {
  const auto s = setup("grid(2)", 3, 8);
  std::vector<VertexId> wiggle{xy(0, 0), xy(1, 0), xy(1, 1), xy(0, 1), xy(-1, 1)};
  for (int y = 2; y <= 7; ++y) wiggle.push_back(xy(-1, y));
  EXPECT_EQ(kind_of([&] { build_retraction(s.exh, wiggle); }), ErrorKind::NotRayEfficient);
  const auto exh = ray_efficient_exhaustion(s.window, wiggle, 3);
  const auto rho = build_retraction(exh, wiggle);
  EXPECT_FALSE(retraction_violation(exh, wiggle, rho).has_value());
}

TEST(EndTree, LineIsTheLine) {
  const auto s = setup("line", 3, 5);
  const auto emb = embed_end_tree(s.tower);
  ASSERT_EQ(emb.nodes.size(), 7u);
  for (std::size_t i = 1; i < emb.nodes.size(); ++i) EXPECT_EQ(emb.nodes[i].path.size(), 2u);
  EXPECT_EQ(emb.tower_map, identity_map(s.tower));
}

TEST(EndTree, RegularTreeBranchCounts) {
  const auto s = setup("regular_tree(4)", 4, 6);
  const auto emb = embed_end_tree(s.tower);
  for (std::size_t l = 0; l < 4; ++l) EXPECT_EQ(emb.tree_nodes[l].size(), oracle::expected_sizes("regular_tree(4)", 4)[l]);
  for (std::size_t l = 0; l < 4; ++l) {
    EXPECT_TRUE(emb.tower_map.injective(l));
    EXPECT_TRUE(emb.tower_map.surjective(l, s.tower.size(l)));
  }
}

TEST(EndTree, GridIsARay) {
  const auto s = setup("grid(2)", 4, 6);
  const auto emb = embed_end_tree(s.tower);
  EXPECT_EQ(emb.nodes.size(), 5u);
  for (std::size_t i = 1; i < emb.nodes.size(); ++i) EXPECT_EQ(emb.nodes[i].parent, i - 1);
}

TEST(EndTree, PathsAreInternallyDisjoint) {
  for (const auto& name : oracle::corpus()) {
    const auto s = setup(name, 4, 6);
    const auto emb = embed_end_tree(s.tower);
    std::set<VertexId> branch, interior;
    for (const auto& n : emb.nodes) EXPECT_TRUE(branch.insert(n.branch).second) << name;
    for (std::size_t i = 1; i < emb.nodes.size(); ++i) {
      const auto& p = emb.nodes[i].path;
      for (std::size_t t = 1; t + 1 < p.size(); ++t) {
        EXPECT_FALSE(branch.count(p[t]));
        EXPECT_TRUE(interior.insert(p[t]).second) << name;
      }
    }
  }
}

TEST(TreeRetraction, EndLevelIdentity) {
  for (const auto& name : {"line", "regular_tree(4)", "comb", "binary_tree"}) {
    const auto s = setup(name, 4, 6);
    const auto emb = embed_end_tree(s.tower);
    const auto rho = tree_retraction(s.tower, emb);
    EXPECT_EQ(compose(emb.tower_map, tree_retraction_map(s.tower, emb, rho)), identity_map(emb.tree_tower)) << name;
  }
}

TEST(TreeRetraction, PlaneDoesNotRetractOntoAxis) {
  const auto s = setup("grid(2)", 4, 6);
  std::vector<TreeNode> nodes{TreeNode{0, 0, xy(0, 0), {xy(0, 0)}}};
  std::size_t left = 0, right = 0;
  for (int d = 1; d <= 4; ++d) {
    nodes.push_back(TreeNode{static_cast<std::size_t>(d), right, xy(d, 0), {xy(d - 1, 0), xy(d, 0)}});
    right = nodes.size() - 1;
    nodes.push_back(TreeNode{static_cast<std::size_t>(d), left, xy(-d, 0), {xy(1 - d, 0), xy(-d, 0)}});
    left = nodes.size() - 1;
  }
  const auto emb = make_tree_embedding(s.tower, nodes);
  EXPECT_EQ(emb.tree_tower.sizes(), (std::vector<std::size_t>{2, 2, 2, 2}));
  EXPECT_EQ(kind_of([&] { tree_retraction(s.tower, emb); }), ErrorKind::NonInjectiveEndMap);
}

TEST(TreeRetraction, PartialTreeFollowsThreads) {
  // Only the thread through vertex 1 is embedded; unhit components follow
  // the least child below their nearest hit ancestor.
  const auto s = setup("binary_tree", 3, 5);
  std::vector<TreeNode> nodes{TreeNode{0, 0, 0, {0}}, TreeNode{1, 0, 1, {0, 1}}, TreeNode{2, 1, 3, {1, 3}},
                              TreeNode{3, 2, 7, {3, 7}}};
  const auto emb = make_tree_embedding(s.tower, nodes);
  const auto rho = tree_retraction(s.tower, emb);
  EXPECT_EQ(compose(emb.tower_map, tree_retraction_map(s.tower, emb, rho)), identity_map(emb.tree_tower));
}

TEST(RayIo, RoundTrip) {
  const std::vector<VertexId> ray{0, 2, 4, 6};
  const auto text = write_ray(ray);
  EXPECT_EQ(text, "ray v1\n0\n2\n4\n6\n");
  EXPECT_EQ(read_ray(text), ray);
  EXPECT_EQ(read_ray("ray v1\n0 2 4\n"), (std::vector<VertexId>{0, 2, 4}));
  EXPECT_EQ(kind_of([] { read_ray("0\n2\n"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { read_ray("ray v1\nx\n"); }), ErrorKind::ParseError);
}
