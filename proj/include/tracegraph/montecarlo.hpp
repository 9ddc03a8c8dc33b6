#ifndef TRACEGRAPH_MONTECARLO_HPP
#define TRACEGRAPH_MONTECARLO_HPP

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tracegraph/enumeration.hpp"
#include "tracegraph/weights.hpp"

namespace tracegraph::montecarlo {

struct SimulationConfig {
  int p = 1;
  int n = 1;
  std::vector<int> l_list;
  /// Pairs (l1, l2) whose trace covariance is estimated.
  std::vector<std::pair<int, int>> cov_pairs;
  long replications = 1000;
  weights::Distribution distribution = weights::Distribution::Gaussian;
  std::uint64_t seed = 0;
  /// 0 picks the hardware concurrency; results do not depend on it.
  unsigned threads = 0;

  /// p > n is simulated through the n x p transpose.
  bool transposed() const { return p > n; }
  void validate() const;
};

struct ReferenceValues {
  std::map<int, double> means;
  std::map<std::pair<int, int>, double> covariances;
};

struct MeanRow {
  int l;
  double empirical;
  double se;
  bool has_exact;
  double exact;
  double z;
};

struct CovRow {
  int l1;
  int l2;
  double empirical;
  double se;  // jackknife
  bool has_exact;
  double exact;
  double z;
};

struct SimulationReport {
  SimulationConfig config;
  std::string rng_algorithm;
  std::vector<MeanRow> means;
  std::vector<CovRow> covariances;
};

/// Name of the generator and sampling scheme recorded in every report.
std::string rng_algorithm();

/// Standard-normal, Rademacher or scaled-uniform entries for replication
/// `replication`; depends only on (seed, replication).
std::vector<double> sample_entries(weights::Distribution d, std::uint64_t seed, std::uint64_t replication,
                                   std::size_t count);

/// Exact means and covariances from the enumeration oracle, rescaled through
/// tr(S_{p,n}^l) = (p/n)^l tr(S_{n,p}^l) when p > n.
ReferenceValues exact_reference(const SimulationConfig& config, const enumeration::EnumerationOptions& options = {});

SimulationReport simulate(const SimulationConfig& config, const ReferenceValues& reference);

/// (empirical - exact) / se. With se = 0 the estimate is exact or infinitely off.
double z_score(double empirical, double exact, double se);

nlohmann::json to_json(const SimulationReport& report);
std::string to_csv(const SimulationReport& report);

}  // namespace tracegraph::montecarlo

#endif  // TRACEGRAPH_MONTECARLO_HPP
