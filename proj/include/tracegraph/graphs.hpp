#ifndef TRACEGRAPH_GRAPHS_HPP
#define TRACEGRAPH_GRAPHS_HPP

#include <compare>
#include <cstddef>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tracegraph::graphs {

using Label = int;
using LabelSet = std::set<Label>;
using Edge = std::pair<Label, Label>;

/// A closed walk given by its sequence of vertex labels (1-based, N >= 1).
/// Coverage of [max label] is checked by the graph types, not here.
class Route {
 public:
  explicit Route(std::vector<Label> entries);

  /// Parses "2,4,4,3,1,3".
  static Route parse(std::string_view text);

  std::span<const Label> entries() const { return entries_; }
  const std::vector<Label>& vector() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  Label operator[](std::size_t i) const { return entries_[i]; }
  Label max_label() const;
  std::string to_string() const;

  auto operator<=>(const Route&) const = default;

 private:
  std::vector<Label> entries_;
};

/// Dense r x r grid of edge counts, addressed with 1-based labels.
class AdjacencyMatrix {
 public:
  explicit AdjacencyMatrix(int r) : r_(r), cells_(static_cast<std::size_t>(r) * r, 0) {}

  int size() const { return r_; }
  int operator()(Label from, Label to) const { return cells_[index(from, to)]; }
  int& at(Label from, Label to) { return cells_[index(from, to)]; }
  int total() const;

  AdjacencyMatrix& operator+=(const AdjacencyMatrix& other);
  bool operator==(const AdjacencyMatrix&) const = default;

 private:
  std::size_t index(Label from, Label to) const {
    return static_cast<std::size_t>(from - 1) * r_ + static_cast<std::size_t>(to - 1);
  }
  int r_;
  std::vector<int> cells_;
};

struct SeedClass {
  enum class Kind {
    BalancedTreeSeed,
    OneDRing,
    TwoDRing,
    Other,
    DoubleOneDRing,
    DoubleTwoDRing,
    DoubleOther,
  };
  Kind kind = Kind::Other;
  /// Ring length l0 for the ring kinds, 0 otherwise.
  int ring_length = 0;

  static SeedClass tree() { return {Kind::BalancedTreeSeed, 0}; }
  static SeedClass one_d(int l0) { return {Kind::OneDRing, l0}; }
  static SeedClass two_d(int l0) { return {Kind::TwoDRing, l0}; }
  static SeedClass other() { return {Kind::Other, 0}; }
  static SeedClass double_one_d(int l0) { return {Kind::DoubleOneDRing, l0}; }
  static SeedClass double_two_d(int l0) { return {Kind::DoubleTwoDRing, l0}; }
  static SeedClass double_other() { return {Kind::DoubleOther, 0}; }

  std::string to_string() const;
  auto operator<=>(const SeedClass&) const = default;
};

namespace detail {
struct SeedCache;
struct DoubleSeedCache;
}  // namespace detail

/// Immutable graph traced by a route covering [r]. Seed and classification
/// are computed once on first use; copies share that cache.
class CircuitMultigraph {
 public:
  explicit CircuitMultigraph(Route route);

  const Route& route() const { return route_; }
  int vertex_count() const { return r_; }
  std::size_t edge_count() const { return route_.size(); }
  /// Edge k is (i_k, i_{k+1}); the last edge closes the walk.
  std::vector<Edge> edges() const;

  const CircuitMultigraph& seed() const;
  SeedClass seed_class() const;

 private:
  Route route_;
  int r_;
  std::shared_ptr<detail::SeedCache> cache_;
};

/// Ordered pair of routes whose labels jointly cover [r].
class DoubleCircuitMultigraph {
 public:
  DoubleCircuitMultigraph(Route first, Route second);

  const Route& first() const { return first_; }
  const Route& second() const { return second_; }
  int vertex_count() const { return r_; }

  const DoubleCircuitMultigraph& seed() const;
  SeedClass seed_class() const;

 private:
  Route first_;
  Route second_;
  int r_;
  std::shared_ptr<detail::DoubleSeedCache> cache_;
};

Route zip_routes(const Route& i, const Route& k);
CircuitMultigraph build_graph(const Route& route);

AdjacencyMatrix adjacency(const CircuitMultigraph& g);
/// Counts after flipping every even-numbered edge.
AdjacencyMatrix reverse_adjacency(const CircuitMultigraph& g);
/// Entrywise sum of both components' reversed adjacencies over the shared [r].
AdjacencyMatrix reverse_adjacency(const DoubleCircuitMultigraph& d);

LabelSet black_set(const CircuitMultigraph& g);
LabelSet black_set_double(const DoubleCircuitMultigraph& d);

LabelSet balanced_leaves(const CircuitMultigraph& g);
/// Leaves of the combined graph: a balanced leaf of one component that the
/// other component never visits.
LabelSet balanced_leaves(const DoubleCircuitMultigraph& d);

CircuitMultigraph remove_leaf(const CircuitMultigraph& g, Label v);
DoubleCircuitMultigraph remove_leaf(const DoubleCircuitMultigraph& d, Label v);

CircuitMultigraph seed(const CircuitMultigraph& g);
DoubleCircuitMultigraph seed_double(const DoubleCircuitMultigraph& d);

SeedClass classify_seed(const CircuitMultigraph& g);
SeedClass classify_seed_double(const DoubleCircuitMultigraph& d);

/// True when every connection of g is a balanced pair and U(g) is a tree.
bool is_balanced_tree(const CircuitMultigraph& g);

/// Label-level primitives on raw routes. Labels are kept as they are unless
/// a function says otherwise; these back the enumeration hot loops.
namespace raw {

/// Balanced leaves of a single route, ascending. Empty for N <= 2.
std::vector<Label> balanced_leaves(std::span<const Label> route);
/// Removes the leaf v and its partner entry without relabeling.
void erase_leaf(std::vector<Label>& route, Label v);
/// Trims lowest-indexed leaves until none remain; labels untouched.
void trim_to_seed(std::vector<Label>& route);
/// Order-preserving relabeling onto [r].
void compact_labels(std::vector<Label>& route);
void compact_labels(std::vector<Label>& first, std::vector<Label>& second);
/// Classification of a leaf-free route with arbitrary distinct labels.
SeedClass classify(std::span<const Label> route);

std::vector<Label> combined_leaves(std::span<const Label> first, std::span<const Label> second);
void trim_double_to_seed(std::vector<Label>& first, std::vector<Label>& second);
SeedClass classify_double(std::span<const Label> first, std::span<const Label> second);

}  // namespace raw

}  // namespace tracegraph::graphs

#endif  // TRACEGRAPH_GRAPHS_HPP
