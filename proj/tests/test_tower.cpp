#include <gtest/gtest.h>

#include "lfends/error.hpp"
#include "lfends/tower.hpp"
#include "oracles.hpp"

using namespace lfends;

namespace {

EndTower graph_tower(const std::string& name, int depth, int window) {
  return build_tower(efficient_exhaustion(GraphGenerator::from_name(name), depth, window));
}

EndTower cantor(std::size_t depth) {
  std::vector<std::size_t> sizes;
  std::vector<std::vector<std::size_t>> bonds;
  for (std::size_t l = 0; l < depth; ++l) {
    sizes.push_back(std::size_t{2} << l);
    if (l > 0) {
      std::vector<std::size_t> b;
      for (std::size_t e = 0; e < sizes[l]; ++e) b.push_back(e / 2);
      bonds.push_back(b);
    }
  }
  return make_tower(sizes, bonds);
}

oracle::Shape shape_of(const EndTower& t) { return oracle::shape(t.sizes(), t.bonds); }

}  // namespace

TEST(Tower, SizesMatchBruteForce) {
  for (const auto& name : oracle::corpus()) {
    const auto t = graph_tower(name, 4, 6);
    const auto ref = oracle::tower(GraphGenerator::from_name(name), 4, 6);
    EXPECT_EQ(t.sizes(), ref.sizes()) << name;
    EXPECT_EQ(t.sizes(), oracle::expected_sizes(name, 4)) << name;
    for (std::size_t l = 1; l < t.depth(); ++l) EXPECT_EQ(t.bonds[l - 1], ref.parent[l - 1]) << name;
    for (std::size_t l = 0; l < t.depth(); ++l) {
      for (std::size_t e = 0; e < t.size(l); ++e) EXPECT_EQ(t.ids[l][e], *ref.components[l][e].begin());
    }
  }
}

TEST(Tower, ElementLookup) {
  const auto t = graph_tower("line", 3, 5);
  // Left component holds odd ids, right component even ids.
  EXPECT_EQ(t.element_of(0, 1), std::optional<std::size_t>(0));
  EXPECT_EQ(t.element_of(0, 2), std::optional<std::size_t>(1));
  EXPECT_FALSE(t.element_of(0, 0).has_value());
  EXPECT_FALSE(t.element_of(2, 99).has_value());
  EXPECT_EQ(t.element_vertices(2, 0), (std::vector<VertexId>{5, 7, 9}));
}

TEST(Tower, EndsReportStabilization) {
  const auto line = ends_report(graph_tower("line", 4, 6));
  EXPECT_TRUE(line.stabilized);
  EXPECT_EQ(line.stabilized_count, std::optional<std::size_t>(2));
  const auto tree = ends_report(graph_tower("regular_tree(4)", 4, 6));
  EXPECT_FALSE(tree.stabilized);
  EXPECT_EQ(tree.count_at_depth, 108u);
  EXPECT_FALSE(ends_report(graph_tower("comb", 5, 7)).stabilized);
  EXPECT_FALSE(ends_report(make_tower({3}, {})).stabilized);
  EXPECT_EQ(ends_report(make_tower({}, {})).count_at_depth, 0u);
}

TEST(Tower, PrefixesAndRelations) {
  const auto t = graph_tower("binary_tree", 3, 5);
  const auto all = enumerate_prefixes(t, 3);
  ASSERT_EQ(all.size(), 8u);
  for (const auto& p : all) EXPECT_TRUE(is_coherent(t, p));
  EXPECT_EQ(enumerate_prefixes(t, 0).size(), 1u);
  EXPECT_THROW(enumerate_prefixes(t, 4), Error);
  EXPECT_EQ(basic_open_relation(t, 0, 0, 2, 0), OpenRelation::Contains);
  EXPECT_EQ(basic_open_relation(t, 2, 0, 0, 0), OpenRelation::Contained);
  EXPECT_EQ(basic_open_relation(t, 0, 1, 2, 0), OpenRelation::Disjoint);
  EXPECT_EQ(basic_open_relation(t, 1, 2, 1, 2), OpenRelation::Equal);
  EXPECT_FALSE(is_coherent(t, EndPrefix{{0, 3}}));
}

TEST(Tower, CanonicalCodeIsLabelIndependent) {
  const auto a = make_tower({2, 4}, {{0, 0, 1, 1}});
  const auto b = make_tower({2, 4}, {{1, 0, 1, 0}});
  const auto c = make_tower({2, 4}, {{0, 0, 0, 1}});
  EXPECT_EQ(canonical_code(a), canonical_code(b));
  EXPECT_NE(canonical_code(a), canonical_code(c));
  EXPECT_EQ(shape_of(a) == shape_of(c), canonical_code(a) == canonical_code(c));
  EXPECT_EQ(canonical_code(graph_tower("binary_tree", 4, 6)), canonical_code(cantor(4)));
}

TEST(Tower, SubsampleComposesBonds) {
  const auto t = cantor(4);
  const std::vector<std::size_t> keep{0, 3};
  const auto s = subsample_tower(t, keep);
  EXPECT_EQ(s.sizes(), (std::vector<std::size_t>{2, 16}));
  for (std::size_t e = 0; e < 16; ++e) EXPECT_EQ(s.parent(1, e), e / 8);
}

TEST(Tower, IoRoundTrip) {
  const auto t = graph_tower("comb", 4, 6);
  const auto text = write_tower(t);
  const auto back = read_tower(text);
  EXPECT_EQ(back.sizes(), t.sizes());
  EXPECT_EQ(back.bonds, t.bonds);
  EXPECT_EQ(write_tower(back), text);
  EXPECT_EQ(text.substr(0, 9), "tower v1\n");
  EXPECT_THROW(read_tower("tower v1\nlevel 1 2\nlevel 2 2\nbond 2 0 0\n"), Error);
  EXPECT_THROW(read_tower("level 1 2\n"), Error);
  EXPECT_THROW(read_tower("tower v1\nlevel 1 1\nlevel 2 1\nbond 2 0 3\n"), Error);
}

TEST(Tower, InducedMapOfIdentity) {
  const auto t = graph_tower("grid(2)", 3, 5);
  const auto m = induced_tower_map(t, t, [](VertexId v) { return std::optional<VertexId>(v); });
  EXPECT_EQ(m, identity_map(t));
}

TEST(Tower, InducedMapHalflineIntoLine) {
  const auto half = GraphGenerator::halfline();
  const auto ht = graph_tower("halfline", 3, 5);
  const auto lt = graph_tower("line", 3, 5);
  // n -> zigzag(n) embeds the halfline as the right half of the line.
  const auto m = induced_tower_map(ht, lt, [](VertexId v) { return std::optional<VertexId>(codec::zigzag(v)); });
  EXPECT_EQ(m.levels, (std::vector<std::vector<std::size_t>>{{1}, {1}, {1}}));
  EXPECT_TRUE(commutes_with_bonds(m, ht, lt));
  // The constant map to 0 lands in K_1: not proper.
  try {
    induced_tower_map(ht, lt, [](VertexId) { return std::optional<VertexId>(0); });
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotProper);
  }
}

TEST(Tower, PullbackExhaustion) {
  const auto target = efficient_exhaustion(GraphGenerator::line(), 3, 5);
  auto window = std::make_shared<const Ball>(materialize_ball(GraphGenerator::halfline(), 5));
  const auto pulled = pullback_exhaustion(window, [](VertexId v) { return std::optional<VertexId>(codec::zigzag(v)); },
                                          target);
  EXPECT_EQ(pulled.levels[0], Compactum({0}));
  EXPECT_EQ(pulled.levels[2], Compactum({0, 1, 2}));
}

TEST(Tower, QuotientLineLine) {
  const auto l = graph_tower("line", 4, 6);
  const auto q = quotient_tower(l, prefix_of(l, 3, 1), l, prefix_of(l, 3, 0));
  EXPECT_EQ(q.sizes(), (std::vector<std::size_t>{3, 3, 3, 3}));
  EXPECT_TRUE(q.surjective());
  EXPECT_THROW(quotient_tower(l, EndPrefix{{0, 0}}, l, prefix_of(l, 3, 0)), Error);
}

TEST(Tower, QuotientSizesBinaryComb) {
  const auto a = graph_tower("binary_tree", 3, 5);
  const auto b = graph_tower("comb", 3, 5);
  const auto q = quotient_tower(a, prefix_of(a, 2, 5), b, prefix_of(b, 2, 0));
  // Binary tree levels plus the comb's non-thread elements.
  EXPECT_EQ(q.sizes(), (std::vector<std::size_t>{3, 6, 11}));
  EXPECT_TRUE(q.surjective());
}

TEST(Tower, NormalizeDropsDeadBranches) {
  const auto t = make_tower({2, 2, 2}, {{0, 0}, {0, 1}});
  const auto n = normalize_bonds(t);
  EXPECT_EQ(n.sizes(), (std::vector<std::size_t>{1, 2, 2}));
  EXPECT_EQ(n.note, "eventual images stable");
  const auto moving = make_tower({3, 3, 3}, {{0, 1, 1}, {1, 1, 2}});
  EXPECT_EQ(normalize_bonds(moving).note.rfind("eventual images not yet stable", 0), 0u);
  EXPECT_THROW(normalize_bonds(make_tower({2, 0}, {{}})), Error);
}

TEST(Tower, RealizationOfCantorTower) {
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto r = tree_realization(cantor(n));
    EXPECT_EQ(r.tower.sizes(), cantor(n).sizes());
    EXPECT_EQ(canonical_code(r.tower), canonical_code(cantor(n)));
    EXPECT_EQ(r.tower.provenance, Provenance::RealizedTree);
  }
  const auto one = tree_realization(make_tower({1}, {}));
  EXPECT_EQ(one.exhaustion.window->size(), 2u);
}

TEST(Tower, InterleaveTwoBasepoints) {
  const auto gen = GraphGenerator::grid(2);
  auto window = std::make_shared<const Ball>(materialize_ball(gen, 14));
  const auto first = efficient_exhaustion_about(window, gen.basepoint(), 12);
  const auto second = efficient_exhaustion_about(window, codec::grid_encode({1, 1}), 12);
  const auto w = interleave(first, second);
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->first_indices.size(), w->second_indices.size());
  EXPECT_EQ(w->first_indices, (std::vector<std::size_t>{0, 6}));
  EXPECT_EQ(w->second_indices, (std::vector<std::size_t>{3, 9}));
  EXPECT_FALSE(validate_exhaustion(w->merged).has_value());
}
