#include <gtest/gtest.h>

#include <cmath>

#include "tracegraph/montecarlo.hpp"

using namespace tracegraph;
using namespace tracegraph::montecarlo;
using weights::Distribution;

namespace {

SimulationConfig config(int p, int n, std::vector<int> ls, std::vector<std::pair<int, int>> covs, long reps,
                        Distribution d, std::uint64_t seed, unsigned threads = 1) {
  SimulationConfig c;
  c.p = p;
  c.n = n;
  c.l_list = std::move(ls);
  c.cov_pairs = std::move(covs);
  c.replications = reps;
  c.distribution = d;
  c.seed = seed;
  c.threads = threads;
  return c;
}

}  // namespace

TEST(Sampling, DependsOnlyOnSeedAndReplication) {
  EXPECT_EQ(sample_entries(Distribution::Gaussian, 7, 3, 9), sample_entries(Distribution::Gaussian, 7, 3, 9));
  EXPECT_NE(sample_entries(Distribution::Gaussian, 7, 3, 9), sample_entries(Distribution::Gaussian, 7, 4, 9));
  EXPECT_NE(sample_entries(Distribution::Gaussian, 7, 3, 9), sample_entries(Distribution::Gaussian, 8, 3, 9));
}

TEST(Sampling, SupportsAndMoments) {
  for (double x : sample_entries(Distribution::Rademacher, 1, 0, 1000)) EXPECT_EQ(std::abs(x), 1.0);
  for (double x : sample_entries(Distribution::UniformScaled, 1, 0, 1000)) EXPECT_LE(std::abs(x), std::sqrt(3.0));
  const auto g = sample_entries(Distribution::Gaussian, 5, 0, 200000);
  double s2 = 0, s4 = 0;
  for (double x : g) {
    s2 += x * x;
    s4 += x * x * x * x;
  }
  EXPECT_NEAR(s2 / g.size(), 1.0, 0.02);
  EXPECT_NEAR(s4 / g.size(), 3.0, 0.1);
}

TEST(Simulate, ConfigValidation) {
  EXPECT_ANY_THROW(config(0, 2, {1}, {}, 1000, Distribution::Gaussian, 1).validate());
  EXPECT_ANY_THROW(config(2, 2, {1}, {}, 50, Distribution::Gaussian, 1).validate());
  EXPECT_ANY_THROW(config(2, 2, {}, {}, 1000, Distribution::Gaussian, 1).validate());
  EXPECT_ANY_THROW(config(2, 2, {0}, {}, 1000, Distribution::Gaussian, 1).validate());
  EXPECT_NO_THROW(config(2, 2, {1}, {{1, 2}}, 100, Distribution::Gaussian, 1).validate());
}

TEST(Simulate, DegenerateRademacherIsExact) {
  const auto c = config(1, 1, {2}, {{1, 1}}, 500, Distribution::Rademacher, 42);
  const auto report = simulate(c, exact_reference(c));
  ASSERT_EQ(report.means.size(), 1u);
  EXPECT_EQ(report.means[0].empirical, 1.0);
  EXPECT_EQ(report.means[0].se, 0.0);
  EXPECT_EQ(report.means[0].z, 0.0);
  EXPECT_EQ(report.covariances[0].empirical, 0.0);
  EXPECT_EQ(report.covariances[0].z, 0.0);
}

TEST(Simulate, BitwiseReproducibleAndThreadIndependent) {
  const auto a = config(3, 5, {1, 2, 3}, {{1, 2}}, 2000, Distribution::Gaussian, 99, 1);
  auto b = a;
  b.threads = 3;
  const auto ref = exact_reference(a);
  EXPECT_EQ(to_json(simulate(a, ref)).dump(), to_json(simulate(a, ref)).dump());
  EXPECT_EQ(to_json(simulate(a, ref)).dump(), to_json(simulate(b, ref)).dump());
}

TEST(Simulate, ReferenceValues) {
  const auto c = config(2, 4, {2}, {}, 1000, Distribution::Gaussian, 1);
  EXPECT_DOUBLE_EQ(exact_reference(c).means.at(2), 3.5);
  const auto v = config(4, 8, {}, {{1, 1}}, 1000, Distribution::Gaussian, 1);
  EXPECT_DOUBLE_EQ(exact_reference(v).covariances.at({1, 1}), 1.0);
  // Transposed references rescale by (p/n)^l: E tr S_{4,2}^2 = 4 * E tr S_{2,4}^2.
  const auto t = config(4, 2, {2}, {}, 1000, Distribution::Gaussian, 1);
  EXPECT_DOUBLE_EQ(exact_reference(t).means.at(2), 14.0);
}

TEST(Simulate, GaussianMeanWithinFiveStandardErrors) {
  const auto c = config(2, 4, {2}, {}, 200000, Distribution::Gaussian, 2024, 0);
  const auto report = simulate(c, exact_reference(c));
  EXPECT_LE(std::abs(report.means[0].z), 5.0) << report.means[0].empirical;
}

TEST(Simulate, VarianceOfTraceWithinSixStandardErrors) {
  const auto c = config(4, 8, {}, {{1, 1}}, 200000, Distribution::Gaussian, 2025, 0);
  const auto report = simulate(c, exact_reference(c));
  EXPECT_LE(std::abs(report.covariances[0].z), 6.0) << report.covariances[0].empirical;
}

// (p, n) and (n, p) with the (p/n)^l rescaling estimate the same quantity.
TEST(Simulate, TranspositionIdentityConfidenceIntervalsOverlap) {
  const auto wide = config(2, 5, {1, 2, 3}, {}, 40000, Distribution::UniformScaled, 11, 0);
  const auto tall = config(5, 2, {1, 2, 3}, {}, 40000, Distribution::UniformScaled, 12, 0);
  const auto a = simulate(wide, {});
  const auto b = simulate(tall, {});
  for (std::size_t i = 0; i < a.means.size(); ++i) {
    const int l = a.means[i].l;
    const double scale = std::pow(2.0 / 5.0, l);
    const double lo_a = a.means[i].empirical - 5 * a.means[i].se;
    const double hi_a = a.means[i].empirical + 5 * a.means[i].se;
    const double lo_b = scale * (b.means[i].empirical - 5 * b.means[i].se);
    const double hi_b = scale * (b.means[i].empirical + 5 * b.means[i].se);
    EXPECT_TRUE(lo_a <= hi_b && lo_b <= hi_a) << "l=" << l;
  }
}

TEST(Simulate, ZScore) {
  EXPECT_DOUBLE_EQ(z_score(3.0, 2.0, 0.5), 2.0);
  EXPECT_EQ(z_score(2.0, 2.0, 0.0), 0.0);
  EXPECT_TRUE(std::isinf(z_score(2.5, 2.0, 0.0)));
}

TEST(Report, JsonAndCsvShapes) {
  const auto c = config(2, 3, {1}, {{1, 1}}, 200, Distribution::Rademacher, 5);
  const auto report = simulate(c, exact_reference(c));
  const auto j = to_json(report);
  EXPECT_EQ(j.at("p"), 2);
  EXPECT_EQ(j.at("replications"), 200);
  EXPECT_EQ(j.at("distribution"), "rademacher");
  EXPECT_EQ(j.at("rng"), rng_algorithm());
  EXPECT_EQ(j.at("means").size(), 1u);
  EXPECT_TRUE(j.at("covariances")[0].contains("z"));
  EXPECT_EQ(nlohmann::json::parse(j.dump()), j);
  const auto csv = to_csv(report);
  EXPECT_EQ(csv.rfind("kind,l1,l2,empirical,se,exact,z\n", 0), 0u);
  EXPECT_NE(csv.find("\nmean,1,,"), std::string::npos);
  EXPECT_NE(csv.find("\ncov,1,1,"), std::string::npos);
}
