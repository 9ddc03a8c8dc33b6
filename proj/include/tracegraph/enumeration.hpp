#ifndef TRACEGRAPH_ENUMERATION_HPP
#define TRACEGRAPH_ENUMERATION_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "tracegraph/exact.hpp"
#include "tracegraph/graphs.hpp"
#include "tracegraph/weights.hpp"

namespace tracegraph::enumeration {

using graphs::Label;
using graphs::Route;
using graphs::SeedClass;

struct EnumerationOptions {
  /// Worker count; 0 picks the hardware concurrency, 1 is fully sequential.
  unsigned threads = 0;
  /// Lifts the default size limits.
  bool allow_large = false;
};

/// Integer polynomial in the moments m_3, m_4, ... . Factors m_0 = m_2 = 1 are
/// dropped and any monomial containing m_1 = 0 is never stored.
class MomentPolynomial {
 public:
  /// Packed exponent multiset: 4 bits per moment order 3..18.
  using Key = std::uint64_t;
  static constexpr int kMinOrder = 3;
  static constexpr int kMaxOrder = 18;

  static Key key_of(const std::vector<int>& moment_orders);
  static std::vector<int> orders_of(Key key);
  static Key multiply(Key a, Key b) { return a + b; }

  void add(Key key, std::int64_t count);
  void merge(const MomentPolynomial& other);

  bool is_zero() const { return terms_.empty(); }
  const std::map<Key, std::int64_t>& terms() const { return terms_; }
  /// Highest moment order appearing; 0 for constants.
  int max_order() const;

  Rational evaluate(const weights::MomentSequence& m) const;
  /// c0 + c1 * m_4 when no other moment (and no power of m_4 above 1) appears.
  std::optional<weights::AffineAlpha> as_affine_alpha() const;
  /// Human-readable form such as "2 + m4".
  std::string to_string() const;

  bool operator==(const MomentPolynomial&) const = default;

 private:
  std::map<Key, std::int64_t> terms_;
};

/// Monomial of the reversed adjacency of one route, or nullopt when some cell
/// holds exactly one edge (the weight then vanishes since m_1 = 0).
std::optional<MomentPolynomial::Key> reversed_monomial(std::span<const Label> route);
std::optional<MomentPolynomial::Key> reversed_monomial(std::span<const Label> first,
                                                       std::span<const Label> second);

struct CanonicalRoutePair {
  Route i;
  Route k;
};

/// Visits each (i, k) with {i} = [b] and {i} u {k} = [r]; i runs over all
/// surjections [l] -> [b].
void for_each_route_pair(int l, int r, int b,
                         const std::function<void(std::span<const Label> i, std::span<const Label> k)>& visit);
std::vector<CanonicalRoutePair> enumerate_route_pairs(int l, int r, int b);

/// Visits each quadruple with {i} u {j} = [b] and all labels covering [r]; the
/// callback receives the two zipped routes.
void for_each_double_route(int l1, int l2, int r, int b,
                           const std::function<void(std::span<const Label> first, std::span<const Label> second)>& visit);

MomentPolynomial inner_weight_polynomial(int l, int r, int b, const EnumerationOptions& options = {});
Rational inner_weight_sum(int l, int r, int b, const weights::MomentSequence& m,
                          const EnumerationOptions& options = {});

/// Sum over quadruples of W(joint) - W(first) W(second).
MomentPolynomial covariance_inner_polynomial(int l1, int l2, int r, int b,
                                             const EnumerationOptions& options = {});

struct TermRecord {
  int r;
  int b;
  Integer multiplicity;  // C(p,b) C(n-b,r-b)
  Rational inner_sum;
};

/// value = sum of multiplicity * inner_sum / n^l (n^{l1+l2} for covariances).
struct ExactMomentResult {
  Rational value;
  std::vector<TermRecord> terms;
};

ExactMomentResult exact_trace_moment(int l, int p, int n, const weights::MomentSequence& m,
                                     const EnumerationOptions& options = {});
ExactMomentResult exact_trace_covariance(int l1, int l2, int p, int n, const weights::MomentSequence& m,
                                         const EnumerationOptions& options = {});

/// Graphs on exactly l vertices, 2l edges and black set [b], by seed class.
std::map<SeedClass, std::int64_t> census_by_seed(int l, int b, const EnumerationOptions& options = {});

/// Per seed class: number of routes and their summed weight.
struct SeedBucket {
  std::int64_t count = 0;
  MomentPolynomial weight;
};
/// One pass over the (l, r, b) route space collecting both census and weights.
std::map<SeedClass, SeedBucket> seed_census_with_weights(int l, int r, int b,
                                                         const EnumerationOptions& options = {});

/// All graphs with seed exactly `seed_route` whose sprouted vertices are
/// b_prime (black) and w_prime (white). Sprouted vertices are relabeled
/// 1..s in ascending order and the seed's labels are shifted above them.
std::vector<Route> enumerate_sprouting_graphs(const Route& seed_route, const graphs::LabelSet& b_prime,
                                              const graphs::LabelSet& w_prime);
Integer census_sprouting(const Route& seed_route, const graphs::LabelSet& b_prime,
                         const graphs::LabelSet& w_prime);

struct DoubleCensusKey {
  SeedClass seed_class;
  int b1_prime = 0;
  int b2_prime = 0;
  int w1_prime = 0;
  int w2_prime = 0;
  auto operator<=>(const DoubleCensusKey&) const = default;
};

/// Doubles on exactly l1 + l2 vertices with black set [b], by double seed
/// class and by the colours of the vertices each component sprouts.
std::map<DoubleCensusKey, std::int64_t> census_double(int l1, int l2, int b,
                                                      const EnumerationOptions& options = {});

}  // namespace tracegraph::enumeration

#endif  // TRACEGRAPH_ENUMERATION_HPP
