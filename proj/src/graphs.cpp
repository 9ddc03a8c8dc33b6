#include "tracegraph/graphs.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>

namespace tracegraph::graphs {

// ---------------------------------------------------------------- Route

Route::Route(std::vector<Label> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw std::invalid_argument("route must be non-empty");
  for (Label v : entries_) {
    if (v < 1) throw std::invalid_argument("route labels must be positive");
  }
}

Route Route::parse(std::string_view text) {
  std::vector<Label> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view token = text.substr(pos, end - pos);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    Label v = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
      throw std::invalid_argument("malformed route: " + std::string(text));
    }
    out.push_back(v);
    pos = end + 1;
  }
  return Route(std::move(out));
}

Label Route::max_label() const { return *std::max_element(entries_.begin(), entries_.end()); }

std::string Route::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(entries_[i]);
  }
  return out;
}

// ------------------------------------------------------ AdjacencyMatrix

int AdjacencyMatrix::total() const {
  int t = 0;
  for (int c : cells_) t += c;
  return t;
}

AdjacencyMatrix& AdjacencyMatrix::operator+=(const AdjacencyMatrix& other) {
  if (other.r_ != r_) throw std::invalid_argument("adjacency size mismatch");
  for (std::size_t i = 0; i < cells_.size(); ++i) cells_[i] += other.cells_[i];
  return *this;
}

// ------------------------------------------------------------ SeedClass

std::string SeedClass::to_string() const {
  const auto ring = [this](const char* name) {
    return std::string(name) + "(" + std::to_string(ring_length) + ")";
  };
  switch (kind) {
    case Kind::BalancedTreeSeed: return "BalancedTreeSeed";
    case Kind::OneDRing: return ring("OneDRing");
    case Kind::TwoDRing: return ring("TwoDRing");
    case Kind::Other: return "Other";
    case Kind::DoubleOneDRing: return ring("DoubleOneDRing");
    case Kind::DoubleTwoDRing: return ring("DoubleTwoDRing");
    case Kind::DoubleOther: return "DoubleOther";
  }
  return "Other";
}

// ------------------------------------------------------------------ raw

namespace raw {

namespace {

Label max_of(std::span<const Label> route) {
  Label m = 0;
  for (Label v : route) m = std::max(m, v);
  return m;
}

bool contains(std::span<const Label> route, Label v) {
  return std::find(route.begin(), route.end(), v) != route.end();
}

bool is_leaf_at(std::span<const Label> route, std::size_t t) {
  const std::size_t n = route.size();
  const Label left = route[(t + n - 1) % n];
  const Label right = route[(t + 1) % n];
  return left == right;
}

}  // namespace

std::vector<Label> balanced_leaves(std::span<const Label> route) {
  std::vector<Label> out;
  const std::size_t n = route.size();
  if (n <= 2) return out;
  std::vector<int> count(static_cast<std::size_t>(max_of(route)) + 1, 0);
  for (Label v : route) ++count[v];
  for (std::size_t t = 0; t < n; ++t) {
    if (count[route[t]] == 1 && is_leaf_at(route, t)) out.push_back(route[t]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

void erase_leaf(std::vector<Label>& route, Label v) {
  const std::size_t n = route.size();
  if (n <= 2) throw std::invalid_argument("no balanced leaves in a route of length <= 2");
  const auto it = std::find(route.begin(), route.end(), v);
  if (it == route.end() || std::count(route.begin(), route.end(), v) != 1) {
    throw std::invalid_argument("vertex " + std::to_string(v) + " is not a balanced leaf");
  }
  const auto t = static_cast<std::size_t>(it - route.begin());
  if (!is_leaf_at(route, t)) {
    throw std::invalid_argument("vertex " + std::to_string(v) + " is not a balanced leaf");
  }
  // Dropping an adjacent pair keeps every surviving position's parity.
  const std::size_t first = (t + 1 < n) ? t : t - 1;
  route.erase(route.begin() + static_cast<std::ptrdiff_t>(first),
              route.begin() + static_cast<std::ptrdiff_t>(first + 2));
}

void trim_to_seed(std::vector<Label>& route) {
  for (;;) {
    const auto leaves = balanced_leaves(route);
    if (leaves.empty()) return;
    erase_leaf(route, leaves.front());
  }
}

void compact_labels(std::vector<Label>& route) {
  std::vector<Label> none;
  compact_labels(route, none);
}

void compact_labels(std::vector<Label>& first, std::vector<Label>& second) {
  std::vector<Label> present(first);
  present.insert(present.end(), second.begin(), second.end());
  std::sort(present.begin(), present.end());
  present.erase(std::unique(present.begin(), present.end()), present.end());
  const auto relabel = [&present](Label v) {
    return static_cast<Label>(std::lower_bound(present.begin(), present.end(), v) - present.begin()) + 1;
  };
  for (Label& v : first) v = relabel(v);
  for (Label& v : second) v = relabel(v);
}

SeedClass classify(std::span<const Label> route) {
  const std::size_t n = route.size();
  std::vector<Label> vertices(route.begin(), route.end());
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  const std::size_t r = vertices.size();

  if (n == 2 && r == 2) return SeedClass::tree();
  if (n != 2 * r) return SeedClass::other();
  if (r == 1) return SeedClass::two_d(1);

  // Per undirected connection {a < b}: edges a->b and b->a.
  std::map<std::pair<Label, Label>, std::pair<int, int>> connections;
  for (std::size_t k = 0; k < n; ++k) {
    const Label tail = route[k];
    const Label head = route[(k + 1) % n];
    if (tail == head) return SeedClass::other();
    if (tail < head) {
      ++connections[{tail, head}].first;
    } else {
      ++connections[{head, tail}].second;
    }
  }
  if (r == 2) {
    const auto& [fwd, bwd] = connections.begin()->second;
    return (fwd == 2 && bwd == 2) ? SeedClass::two_d(2) : SeedClass::other();
  }
  if (connections.size() != r) return SeedClass::other();
  std::map<Label, int> neighbours;
  bool all_opposed = true;
  bool all_aligned = true;
  for (const auto& [ends, counts] : connections) {
    if (counts.first + counts.second != 2) return SeedClass::other();
    ++neighbours[ends.first];
    ++neighbours[ends.second];
    all_opposed = all_opposed && counts.first == 1;
    all_aligned = all_aligned && counts.first != 1;
  }
  // A closed walk is connected, so r connections with all degrees 2 is a cycle.
  for (const auto& [v, deg] : neighbours) {
    if (deg != 2) return SeedClass::other();
  }
  const int l0 = static_cast<int>(r);
  if (all_opposed) return SeedClass::two_d(l0);
  if (all_aligned) return SeedClass::one_d(l0);
  return SeedClass::other();
}

std::vector<Label> combined_leaves(std::span<const Label> first, std::span<const Label> second) {
  std::vector<Label> out;
  for (Label v : balanced_leaves(first)) {
    if (!contains(second, v)) out.push_back(v);
  }
  for (Label v : balanced_leaves(second)) {
    if (!contains(first, v)) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

void trim_double_to_seed(std::vector<Label>& first, std::vector<Label>& second) {
  for (;;) {
    const auto leaves = combined_leaves(first, second);
    if (leaves.empty()) return;
    const Label v = leaves.front();
    erase_leaf(contains(first, v) ? first : second, v);
  }
}

namespace {

bool is_rotation(std::span<const Label> a, std::span<const Label> b) {
  const std::size_t n = a.size();
  if (b.size() != n) return false;
  for (std::size_t s = 0; s < n; ++s) {
    bool match = true;
    for (std::size_t t = 0; t < n && match; ++t) match = a[t] == b[(t + s) % n];
    if (match) return true;
  }
  return false;
}

}  // namespace

SeedClass classify_double(std::span<const Label> first, std::span<const Label> second) {
  const std::size_t l0 = first.size();
  if (second.size() != l0) return SeedClass::double_other();
  std::map<Label, std::size_t> pos_first;
  std::map<Label, std::size_t> pos_second;
  for (std::size_t t = 0; t < l0; ++t) {
    if (!pos_first.emplace(first[t], t).second) return SeedClass::double_other();
    if (!pos_second.emplace(second[t], t).second) return SeedClass::double_other();
  }
  // Every ring vertex keeps its colour: same position parity in both walks.
  for (const auto& [v, t] : pos_first) {
    const auto it = pos_second.find(v);
    if (it == pos_second.end() || (it->second - t) % 2 != 0) return SeedClass::double_other();
  }
  const std::vector<Label> backward(second.rbegin(), second.rend());
  const int ring = static_cast<int>(l0);
  if (is_rotation(first, backward)) return SeedClass::double_two_d(ring);
  if (l0 >= 3 && is_rotation(first, second)) return SeedClass::double_one_d(ring);
  return SeedClass::double_other();
}

}  // namespace raw

// ----------------------------------------------------------- caches

namespace detail {

struct SeedCache {
  std::once_flag once;
  std::optional<CircuitMultigraph> seed;  // empty when the graph is its own seed
  SeedClass seed_class;
};

struct DoubleSeedCache {
  std::once_flag once;
  std::optional<DoubleCircuitMultigraph> seed;
  SeedClass seed_class;
};

}  // namespace detail

namespace {

void require_cover(const std::vector<Label>& labels_in_use, const char* what) {
  std::vector<Label> present(labels_in_use);
  std::sort(present.begin(), present.end());
  present.erase(std::unique(present.begin(), present.end()), present.end());
  if (present.back() != static_cast<Label>(present.size())) {
    throw std::invalid_argument(std::string(what) + ": labels do not cover [" +
                                std::to_string(present.back()) + "]");
  }
}

}  // namespace

// ---------------------------------------------------- CircuitMultigraph

CircuitMultigraph::CircuitMultigraph(Route route)
    : route_(std::move(route)), r_(0), cache_(std::make_shared<detail::SeedCache>()) {
  require_cover(route_.vector(), "label gap");
  r_ = route_.max_label();
}

std::vector<Edge> CircuitMultigraph::edges() const {
  const auto& v = route_.vector();
  std::vector<Edge> out;
  out.reserve(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out.emplace_back(v[k], v[(k + 1) % v.size()]);
  return out;
}

const CircuitMultigraph& CircuitMultigraph::seed() const {
  std::call_once(cache_->once, [this] {
    std::vector<Label> trimmed = route_.vector();
    raw::trim_to_seed(trimmed);
    raw::compact_labels(trimmed);
    cache_->seed_class = raw::classify(trimmed);
    if (trimmed != route_.vector()) cache_->seed.emplace(Route(std::move(trimmed)));
  });
  return cache_->seed ? *cache_->seed : *this;
}

SeedClass CircuitMultigraph::seed_class() const {
  seed();
  return cache_->seed_class;
}

// ---------------------------------------------- DoubleCircuitMultigraph

DoubleCircuitMultigraph::DoubleCircuitMultigraph(Route first, Route second)
    : first_(std::move(first)),
      second_(std::move(second)),
      r_(0),
      cache_(std::make_shared<detail::DoubleSeedCache>()) {
  std::vector<Label> all = first_.vector();
  all.insert(all.end(), second_.vector().begin(), second_.vector().end());
  require_cover(all, "label gap");
  r_ = std::max(first_.max_label(), second_.max_label());
}

const DoubleCircuitMultigraph& DoubleCircuitMultigraph::seed() const {
  std::call_once(cache_->once, [this] {
    std::vector<Label> a = first_.vector();
    std::vector<Label> b = second_.vector();
    raw::trim_double_to_seed(a, b);
    raw::compact_labels(a, b);
    cache_->seed_class = raw::classify_double(a, b);
    if (a != first_.vector() || b != second_.vector()) {
      cache_->seed.emplace(Route(std::move(a)), Route(std::move(b)));
    }
  });
  return cache_->seed ? *cache_->seed : *this;
}

SeedClass DoubleCircuitMultigraph::seed_class() const {
  seed();
  return cache_->seed_class;
}

// ------------------------------------------------------ free functions

Route zip_routes(const Route& i, const Route& k) {
  if (i.size() != k.size()) throw std::invalid_argument("zip_routes: length mismatch");
  std::vector<Label> out;
  out.reserve(2 * i.size());
  for (std::size_t t = 0; t < i.size(); ++t) {
    out.push_back(i[t]);
    out.push_back(k[t]);
  }
  return Route(std::move(out));
}

CircuitMultigraph build_graph(const Route& route) { return CircuitMultigraph(route); }

AdjacencyMatrix adjacency(const CircuitMultigraph& g) {
  AdjacencyMatrix a(g.vertex_count());
  for (const auto& [tail, head] : g.edges()) ++a.at(tail, head);
  return a;
}

namespace {

void add_reversed(const Route& route, AdjacencyMatrix& into) {
  const auto& v = route.vector();
  const std::size_t n = v.size();
  for (std::size_t k = 0; k < n; ++k) {
    const Label tail = v[k];
    const Label head = v[(k + 1) % n];
    // Edge k+1 (1-based) is flipped when k+1 is even.
    if (k % 2 == 0) {
      ++into.at(tail, head);
    } else {
      ++into.at(head, tail);
    }
  }
}

}  // namespace

AdjacencyMatrix reverse_adjacency(const CircuitMultigraph& g) {
  AdjacencyMatrix a(g.vertex_count());
  add_reversed(g.route(), a);
  return a;
}

AdjacencyMatrix reverse_adjacency(const DoubleCircuitMultigraph& d) {
  AdjacencyMatrix a(d.vertex_count());
  add_reversed(d.first(), a);
  add_reversed(d.second(), a);
  return a;
}

namespace {

LabelSet odd_position_labels(const Route& route) {
  LabelSet out;
  for (std::size_t t = 0; t < route.size(); t += 2) out.insert(route[t]);
  return out;
}

}  // namespace

LabelSet black_set(const CircuitMultigraph& g) { return odd_position_labels(g.route()); }

LabelSet black_set_double(const DoubleCircuitMultigraph& d) {
  LabelSet out = odd_position_labels(d.first());
  const LabelSet second = odd_position_labels(d.second());
  out.insert(second.begin(), second.end());
  return out;
}

LabelSet balanced_leaves(const CircuitMultigraph& g) {
  const auto leaves = raw::balanced_leaves(g.route().entries());
  return LabelSet(leaves.begin(), leaves.end());
}

LabelSet balanced_leaves(const DoubleCircuitMultigraph& d) {
  const auto leaves = raw::combined_leaves(d.first().entries(), d.second().entries());
  return LabelSet(leaves.begin(), leaves.end());
}

CircuitMultigraph remove_leaf(const CircuitMultigraph& g, Label v) {
  std::vector<Label> route = g.route().vector();
  raw::erase_leaf(route, v);
  raw::compact_labels(route);
  return CircuitMultigraph(Route(std::move(route)));
}

DoubleCircuitMultigraph remove_leaf(const DoubleCircuitMultigraph& d, Label v) {
  const auto leaves = raw::combined_leaves(d.first().entries(), d.second().entries());
  if (!std::binary_search(leaves.begin(), leaves.end(), v)) {
    throw std::invalid_argument("vertex " + std::to_string(v) + " is not a balanced leaf");
  }
  std::vector<Label> a = d.first().vector();
  std::vector<Label> b = d.second().vector();
  raw::erase_leaf(std::find(a.begin(), a.end(), v) != a.end() ? a : b, v);
  raw::compact_labels(a, b);
  return DoubleCircuitMultigraph(Route(std::move(a)), Route(std::move(b)));
}

CircuitMultigraph seed(const CircuitMultigraph& g) { return g.seed(); }

DoubleCircuitMultigraph seed_double(const DoubleCircuitMultigraph& d) { return d.seed(); }

SeedClass classify_seed(const CircuitMultigraph& g) {
  if (!raw::balanced_leaves(g.route().entries()).empty()) {
    throw std::invalid_argument("classify_seed: graph has balanced leaves");
  }
  return raw::classify(g.route().entries());
}

SeedClass classify_seed_double(const DoubleCircuitMultigraph& d) {
  if (!raw::combined_leaves(d.first().entries(), d.second().entries()).empty()) {
    throw std::invalid_argument("classify_seed_double: graph has balanced leaves");
  }
  return raw::classify_double(d.first().entries(), d.second().entries());
}

bool is_balanced_tree(const CircuitMultigraph& g) {
  const int r = g.vertex_count();
  if (static_cast<int>(g.edge_count()) != 2 * (r - 1)) return false;
  const AdjacencyMatrix a = adjacency(g);
  int connections = 0;
  for (Label x = 1; x <= r; ++x) {
    if (a(x, x) != 0) return false;
    for (Label y = x + 1; y <= r; ++y) {
      if (a(x, y) != a(y, x) || a(x, y) > 1) return false;
      connections += a(x, y);
    }
  }
  return connections == r - 1;
}

}  // namespace tracegraph::graphs
