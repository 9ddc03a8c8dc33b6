#include <gtest/gtest.h>

#include <map>
#include <vector>

#include "tracegraph/graphs.hpp"
#include "tracegraph/verify.hpp"

using namespace tracegraph;
using namespace tracegraph::graphs;

namespace {

Route R(std::vector<Label> v) { return Route(std::move(v)); }
CircuitMultigraph G(std::vector<Label> v) { return build_graph(R(std::move(v))); }
DoubleCircuitMultigraph D(std::vector<Label> a, std::vector<Label> b) {
  return DoubleCircuitMultigraph(R(std::move(a)), R(std::move(b)));
}

/// Order-preserving relabel of a route with arbitrary labels onto [r].
std::vector<Label> compacted(std::vector<Label> v) {
  raw::compact_labels(v);
  return v;
}

/// Whether a and b differ only by a bijective relabeling.
bool same_up_to_relabeling(const std::vector<Label>& a, const std::vector<Label>& b) {
  if (a.size() != b.size()) return false;
  std::map<Label, Label> forward, backward;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto [f, fresh_f] = forward.emplace(a[i], b[i]);
    auto [g, fresh_g] = backward.emplace(b[i], a[i]);
    if (f->second != b[i] || g->second != a[i]) return false;
  }
  return true;
}

}  // namespace

TEST(Route, ParseAndPrint) {
  EXPECT_EQ(Route::parse("2,4,4,3,1,3").vector(), (std::vector<Label>{2, 4, 4, 3, 1, 3}));
  EXPECT_EQ(R({2, 4, 4, 3, 1, 3}).to_string(), "2,4,4,3,1,3");
  EXPECT_EQ(R({2, 4, 4, 3}).max_label(), 4);
  EXPECT_ANY_THROW(Route::parse(""));
  EXPECT_ANY_THROW(Route::parse("1,x"));
  EXPECT_ANY_THROW(Route::parse("0,1"));
}

TEST(Graphs, ZipRoutes) {
  EXPECT_EQ(zip_routes(R({1}), R({2})), R({1, 2}));
  EXPECT_EQ(zip_routes(R({1, 1}), R({2, 3})), R({1, 2, 1, 3}));
  EXPECT_EQ(zip_routes(R({1, 2}), R({2, 1})), R({1, 2, 2, 1}));
  EXPECT_ANY_THROW(zip_routes(R({1, 2}), R({1})));
}

TEST(Graphs, BuildGraphEdges) {
  EXPECT_EQ(G({1, 2}).edges(), (std::vector<Edge>{{1, 2}, {2, 1}}));
  EXPECT_EQ(G({2, 4, 4, 3, 1, 3}).edges(),
            (std::vector<Edge>{{2, 4}, {4, 4}, {4, 3}, {3, 1}, {1, 3}, {3, 2}}));
  EXPECT_EQ(G({1}).edges(), (std::vector<Edge>{{1, 1}}));
}

TEST(Graphs, BuildGraphRejectsLabelGaps) { EXPECT_ANY_THROW(G({1, 3})); }

TEST(Graphs, ReverseAdjacency) {
  const auto pair = reverse_adjacency(G({1, 2}));
  EXPECT_EQ(pair(1, 2), 2);
  EXPECT_EQ(pair.total(), 2);

  const auto ring = reverse_adjacency(G({1, 2, 1, 2}));
  EXPECT_EQ(ring(1, 2), 4);
  EXPECT_EQ(ring.total(), 4);

  const auto loops = reverse_adjacency(G({1, 1}));
  EXPECT_EQ(loops(1, 1), 2);
  EXPECT_EQ(loops.total(), 2);
}

TEST(Graphs, BlackSet) {
  EXPECT_EQ(black_set(G({1, 2, 1, 3})), (LabelSet{1}));
  EXPECT_EQ(black_set(G({2, 4, 4, 3, 1, 3})), (LabelSet{1, 2, 4}));
  EXPECT_EQ(black_set(G({1, 2})), (LabelSet{1}));
}

TEST(Graphs, BlackSetDouble) {
  EXPECT_EQ(black_set_double(D({1}, {1})), (LabelSet{1}));
  EXPECT_EQ(black_set_double(D({1, 2}, {2, 1})), (LabelSet{1, 2}));
  EXPECT_EQ(black_set_double(D({1, 2, 1, 3}, {3, 1})), (LabelSet{1, 3}));
}

TEST(Graphs, BalancedLeaves) {
  EXPECT_TRUE(balanced_leaves(G({1, 2})).empty());
  EXPECT_EQ(balanced_leaves(G({1, 2, 1, 3})), (LabelSet{2, 3}));
  // Both 1 and 3 occur once with equal cyclic neighbours (2 and 2).
  EXPECT_EQ(balanced_leaves(G({1, 2, 3, 2})), (LabelSet{1, 3}));
}

TEST(Graphs, RemoveLeaf) {
  // Dropping (2,1) leaves (1,3), which compacts to (1,2).
  EXPECT_EQ(remove_leaf(G({1, 2, 1, 3}), 2).route(), R({1, 2}));
  EXPECT_EQ(remove_leaf(G({1, 2, 1, 3}), 3).route(), R({1, 2}));

  std::vector<Label> raw_route{1, 2, 1, 3};
  raw::erase_leaf(raw_route, 2);
  EXPECT_EQ(raw_route, (std::vector<Label>{1, 3}));

  std::vector<Label> longer{1, 2, 3, 2, 1, 4};
  raw::erase_leaf(longer, 3);
  EXPECT_EQ(longer, (std::vector<Label>{1, 2, 1, 4}));

  EXPECT_ANY_THROW(remove_leaf(G({1, 2, 1, 3}), 1));
}

TEST(Graphs, Seed) {
  const auto s1 = seed(G({2, 4, 4, 3, 1, 3}));
  EXPECT_TRUE(same_up_to_relabeling(s1.route().vector(), {2, 4, 4, 3}));
  EXPECT_EQ(s1.route(), R(compacted({2, 4, 4, 3})));

  EXPECT_EQ(seed(G({1, 2})).route(), R({1, 2}));

  const auto s3 = seed(G({3, 1, 2, 1, 5, 1, 2, 4, 2, 1}));
  EXPECT_TRUE(same_up_to_relabeling(s3.route().vector(), {2, 1, 2, 1}));
}

TEST(Graphs, SeedDouble) {
  const auto loops = seed_double(D({1}, {1}));
  EXPECT_EQ(loops.first(), R({1}));
  EXPECT_EQ(loops.second(), R({1}));

  const auto pairs = seed_double(D({1, 2}, {2, 1}));
  EXPECT_EQ(pairs.first(), R({1, 2}));
  EXPECT_EQ(pairs.second(), R({2, 1}));

  // Leaf 2 of the first component is trimmed; 3 then sits in a 2-entry route.
  const auto trimmed = seed_double(D({1, 2, 1, 3}, {1, 4}));
  EXPECT_EQ(trimmed.first(), R({1, 2}));
  EXPECT_EQ(trimmed.second(), R({1, 3}));
}

TEST(Graphs, ClassifySeed) {
  EXPECT_EQ(G({1, 1}).seed_class(), SeedClass::two_d(1));
  EXPECT_EQ(G({1, 2, 1, 2}).seed_class(), SeedClass::two_d(2));
  EXPECT_EQ(G({1, 2, 3, 1, 2, 3}).seed_class(), SeedClass::one_d(3));
  EXPECT_EQ(G({1, 2, 3, 2, 1, 3}).seed_class(), SeedClass::two_d(3));
  EXPECT_EQ(G({1, 2}).seed_class(), SeedClass::tree());
  EXPECT_EQ(G({1, 2, 1, 3}).seed_class(), SeedClass::tree());
  EXPECT_EQ(G({2, 4, 4, 3, 1, 3}).seed_class(), SeedClass::other());
}

TEST(Graphs, ClassifySeedDouble) {
  EXPECT_EQ(D({1}, {1}).seed_class(), SeedClass::double_two_d(1));
  EXPECT_EQ(D({1, 2, 4, 3}, {1, 2, 4, 3}).seed_class(), SeedClass::double_one_d(4));
  EXPECT_EQ(D({1, 2, 4, 3}, {3, 1, 2, 4}).seed_class(), SeedClass::double_other());
  EXPECT_EQ(D({1, 2}, {1, 2}).seed_class(), SeedClass::double_two_d(2));
  EXPECT_EQ(D({1}, {2}).seed_class(), SeedClass::double_other());
}

TEST(Graphs, BalancedTree) {
  EXPECT_TRUE(is_balanced_tree(G({1, 2})));
  EXPECT_TRUE(is_balanced_tree(G({1, 2, 1, 3})));
  EXPECT_TRUE(is_balanced_tree(G({1, 2, 3, 2})));
  EXPECT_FALSE(is_balanced_tree(G({1, 1})));
  EXPECT_FALSE(is_balanced_tree(G({1, 2, 1, 2})));
  EXPECT_FALSE(is_balanced_tree(G({1, 2, 3})));
}

// Every edge leaves and enters some vertex: in-degree equals out-degree.
TEST(GraphProperties, DegreeBalanceAndBlackSetsUpToSeven) {
  for (int n = 1; n <= 7; ++n) {
    verify::for_each_canonical_route(n, [&](const std::vector<Label>& v) {
      const auto g = build_graph(Route(v));
      const auto a = adjacency(g);
      for (int x = 1; x <= a.size(); ++x) {
        int in = 0, out = 0;
        for (int y = 1; y <= a.size(); ++y) {
          out += a(x, y);
          in += a(y, x);
        }
        ASSERT_EQ(in, out) << g.route().to_string();
      }
      ASSERT_EQ(reverse_adjacency(g).total(), n);
      LabelSet expected;
      for (std::size_t i = 0; i < v.size(); i += 2) expected.insert(v[i]);
      ASSERT_EQ(black_set(g), expected);
    });
  }
}

TEST(GraphProperties, SeedIsLeafFreeAndIdempotentUpToEight) {
  for (int n = 1; n <= 8; ++n) {
    verify::for_each_canonical_route(n, [&](const std::vector<Label>& v) {
      const auto g = build_graph(Route(v));
      const auto& s = g.seed();
      ASSERT_TRUE(balanced_leaves(s).empty()) << g.route().to_string();
      ASSERT_EQ(seed(s).route(), s.route());
      ASSERT_EQ(s.seed_class(), g.seed_class());
      // Each trim removes one vertex and two edges.
      ASSERT_EQ(static_cast<int>(g.edge_count() - s.edge_count()), 2 * (g.vertex_count() - s.vertex_count()));
    });
  }
}

TEST(GraphProperties, TreesAreExactlyTheGraphsWithTreeSeeds) {
  for (int n = 2; n <= 8; n += 2) {
    verify::for_each_canonical_route(n, [&](const std::vector<Label>& v) {
      const auto g = build_graph(Route(v));
      ASSERT_EQ(is_balanced_tree(g), g.seed_class() == SeedClass::tree()) << g.route().to_string();
    });
  }
}

TEST(GraphProperties, RelabelingPreservesSeedClass) {
  // Swapping two labels never changes the class.
  verify::for_each_canonical_route(6, [&](const std::vector<Label>& v) {
    const auto g = build_graph(Route(v));
    if (g.vertex_count() < 2) return;
    auto swapped = v;
    for (auto& x : swapped) x = x == 1 ? 2 : (x == 2 ? 1 : x);
    ASSERT_EQ(build_graph(Route(swapped)).seed_class(), g.seed_class());
  });
}

TEST(GraphProperties, CyclicRotationByTwoPreservesSeedClass) {
  verify::for_each_canonical_route(8, [&](const std::vector<Label>& v) {
    std::vector<Label> rotated(v.begin() + 2, v.end());
    rotated.push_back(v[0]);
    rotated.push_back(v[1]);
    ASSERT_EQ(build_graph(Route(rotated)).seed_class(), build_graph(Route(v)).seed_class())
        << Route(v).to_string();
  });
}
