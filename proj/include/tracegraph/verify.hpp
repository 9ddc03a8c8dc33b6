#ifndef TRACEGRAPH_VERIFY_HPP
#define TRACEGRAPH_VERIFY_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tracegraph/enumeration.hpp"
#include "tracegraph/graphs.hpp"

namespace tracegraph::verify {

struct SuiteResult {
  std::string suite;
  long cases = 0;
  std::vector<std::string> failures;
  bool passed() const { return failures.empty(); }
};

/// Suite names accepted by run_suite, in run order for "all".
const std::vector<std::string>& suite_names();

/// max_l <= 0 selects the suite's default bound.
SuiteResult run_suite(const std::string& name, int max_l = 0, const enumeration::EnumerationOptions& options = {});

/// Degree sequences (first side, second side) of a spanning tree.
using DegreePair = std::pair<std::vector<long>, std::vector<long>>;

/// Spanning trees of K_{b+1,w+1} containing the edge between the first
/// vertex of each side, tallied by degree sequences. Decodes every Pruefer
/// sequence on b + w + 2 vertices.
std::map<DegreePair, std::int64_t> bipartite_forced_edge_census(int b, int w);

/// Compositions of `total` into `parts` positive integers.
std::vector<std::vector<long>> compositions(long total, long parts);

/// Restricted-growth strings of length n: one route per relabeling class.
void for_each_canonical_route(int n, const std::function<void(const std::vector<graphs::Label>&)>& visit);

/// Leaf-free routes of length 2 * l0 (up to relabeling) used as sprouting seeds.
std::vector<graphs::Route> sprouting_seeds(int l0);

}  // namespace tracegraph::verify

#endif  // TRACEGRAPH_VERIFY_HPP
