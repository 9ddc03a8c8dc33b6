#include <gtest/gtest.h>

#include "tracegraph/verify.hpp"
#include "tracegraph/weights.hpp"

using namespace tracegraph;
using namespace tracegraph::weights;
using graphs::Label;
using graphs::Route;

namespace {

graphs::CircuitMultigraph G(std::vector<Label> v) { return graphs::build_graph(Route(std::move(v))); }
graphs::DoubleCircuitMultigraph D(std::vector<Label> a, std::vector<Label> b) {
  return graphs::DoubleCircuitMultigraph(Route(std::move(a)), Route(std::move(b)));
}

MomentSequence with_alpha(const Rational& alpha, int order) {
  std::vector<Rational> m(static_cast<std::size_t>(order) + 1, Rational(0));
  m[0] = 1;
  m[2] = 1;
  if (order >= 4) m[4] = alpha;
  return MomentSequence(m);
}

}  // namespace

TEST(Moments, Presets) {
  EXPECT_EQ(preset_moments(Distribution::Gaussian, 6).values(),
            (std::vector<Rational>{1, 0, 1, 0, 3, 0, 15}));
  EXPECT_EQ(preset_moments(Distribution::Rademacher, 4).values(), (std::vector<Rational>{1, 0, 1, 0, 1}));
  EXPECT_EQ(preset_moments(Distribution::UniformScaled, 4).alpha(), Rational(9, 5));
  EXPECT_EQ(preset_moments(Distribution::UniformScaled, 6).at(6), Rational(27, 7));
  EXPECT_EQ(preset_moments(Distribution::Gaussian, 8).at(8), 105);
  EXPECT_ANY_THROW(preset_moments(Distribution::Gaussian, 3));
}

TEST(Moments, ParsesTagsAndLists) {
  EXPECT_EQ(parse_distribution("gaussian"), Distribution::Gaussian);
  EXPECT_EQ(parse_distribution("rademacher"), Distribution::Rademacher);
  EXPECT_EQ(parse_distribution("uniform"), Distribution::UniformScaled);
  EXPECT_EQ(parse_distribution("uniform-scaled"), Distribution::UniformScaled);
  EXPECT_ANY_THROW(parse_distribution("cauchy"));
  EXPECT_EQ(MomentSequence::parse("1,0,1,0,3").alpha(), 3);
  EXPECT_EQ(MomentSequence::parse("1,0,1,1/2,9/5").at(3), Rational(1, 2));
}

TEST(Moments, StandingAssumptionsEnforced) {
  EXPECT_ANY_THROW(MomentSequence::parse("1,1,1"));
  EXPECT_ANY_THROW(MomentSequence::parse("1,0,2"));
  EXPECT_ANY_THROW(MomentSequence::parse("2,0,1"));
  EXPECT_ANY_THROW(MomentSequence::parse("1,0").at(2));
  EXPECT_FALSE(MomentSequence::parse("1,0,1,0,1/2").fourth_moment_plausible());
  EXPECT_TRUE(MomentSequence::parse("1,0,1,0,1").fourth_moment_plausible());
}

TEST(AffineAlphaTest, Arithmetic) {
  const AffineAlpha a{2, 1};
  const AffineAlpha b = AffineAlpha::alpha_minus(3);
  EXPECT_EQ(a + b, (AffineAlpha{-1, 2}));
  EXPECT_EQ(a - b, (AffineAlpha{5, 0}));
  EXPECT_EQ(Rational(1, 2) * a, (AffineAlpha{1, Rational(1, 2)}));
  EXPECT_EQ(a.evaluate(3), 5);
  EXPECT_EQ(AffineAlpha::constant(7).evaluate(100), 7);
}

TEST(Weights, Examples) {
  const auto gauss = preset_moments(Distribution::Gaussian, 8);
  EXPECT_EQ(weight(G({1, 2}), with_alpha(11, 4)), 1);
  EXPECT_EQ(weight(G({1, 2, 1, 2}), gauss), 3);
  EXPECT_EQ(weight(G({2, 4, 4, 3, 1, 3, 2, 4}), gauss), 0);
  EXPECT_EQ(weight(G({1, 1}), gauss), 1);
  EXPECT_EQ(weight(G({1}), gauss), 0);
}

TEST(Weights, OddMomentsEnterWhenNonzero) {
  // Route (1,1,1): reversal keeps three self-loops, so the weight is m_3.
  EXPECT_EQ(weight(G({1, 1, 1}), MomentSequence::parse("1,0,1,5/2")), Rational(5, 2));
}

TEST(Weights, MomentCoverageRequired) {
  EXPECT_ANY_THROW(weight(G({1, 2, 1, 2}), MomentSequence::parse("1,0,1")));
}

TEST(CovarianceWeights, Examples) {
  const auto gauss = preset_moments(Distribution::Gaussian, 8);
  const auto alpha = with_alpha(Rational(7, 3), 8);
  EXPECT_EQ(covariance_weight(D({1, 2}, {1, 2}), alpha), Rational(7, 3) - 1);
  EXPECT_EQ(covariance_weight(D({1}, {2}), gauss), 0);
  EXPECT_EQ(covariance_weight(D({1, 2, 4, 3}, {1, 2, 4, 3}), gauss), 1);
  // Self-loop pair: m_2 - m_1^2 = 1.
  EXPECT_EQ(covariance_weight(D({1}, {1}), gauss), 1);
}

// Weight by seed class at both alpha values, for every graph on l vertices and 2l edges.
TEST(WeightProperties, ClassificationLawUpToFive) {
  for (const Rational& alpha : {Rational(1), Rational(3)}) {
    const auto m = with_alpha(alpha, 10);
    for (int l = 1; l <= 5; ++l) {
      verify::for_each_canonical_route(2 * l, [&](const std::vector<Label>& v) {
        const auto g = G(v);
        if (g.vertex_count() != l) return;
        const auto cls = g.seed_class();
        Rational expected = 0;
        if (cls == graphs::SeedClass::two_d(2)) {
          expected = alpha;
        } else if (cls.kind == graphs::SeedClass::Kind::TwoDRing ||
                   (cls.kind == graphs::SeedClass::Kind::OneDRing && cls.ring_length >= 4 &&
                    cls.ring_length % 2 == 0)) {
          expected = 1;
        }
        ASSERT_EQ(weight(g, m), expected) << g.route().to_string();
      });
    }
  }
}

TEST(WeightProperties, TreeLawUpToFive) {
  const auto m = preset_moments(Distribution::Gaussian, 10);
  for (int l = 1; l <= 5; ++l) {
    verify::for_each_canonical_route(2 * l, [&](const std::vector<Label>& v) {
      const auto g = G(v);
      if (g.vertex_count() != l + 1) return;
      ASSERT_EQ(weight(g, m), graphs::is_balanced_tree(g) ? 1 : 0) << g.route().to_string();
    });
  }
}

TEST(WeightProperties, TrimInvarianceUpToTen) {
  const auto m = MomentSequence::parse("1,0,1,2,5,7,11,13,17,19,23");
  for (int n = 2; n <= 10; n += 2) {
    verify::for_each_canonical_route(n, [&](const std::vector<Label>& v) {
      const auto g = G(v);
      const auto w = weight(g, m);
      for (Label leaf : graphs::balanced_leaves(g)) {
        ASSERT_EQ(weight(graphs::remove_leaf(g, leaf), m), w) << g.route().to_string() << " minus " << leaf;
      }
    });
  }
}

TEST(WeightProperties, DisjointDoublesHaveZeroCovarianceWeight) {
  const auto m = MomentSequence::parse("1,0,1,2,5,7,11,13,17");
  verify::for_each_canonical_route(4, [&](const std::vector<Label>& first) {
    const Label shift = graphs::Route(first).max_label();
    for (const std::vector<Label>& tail : {std::vector<Label>{1, 2}, std::vector<Label>{1, 1, 2, 2}}) {
      std::vector<Label> second;
      for (Label x : tail) second.push_back(x + shift);
      ASSERT_EQ(covariance_weight(D(first, second), m), 0);
    }
  });
}
