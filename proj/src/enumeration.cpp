#include "tracegraph/enumeration.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "tracegraph/closedform.hpp"

namespace tracegraph::enumeration {

// ------------------------------------------------------- MomentPolynomial

MomentPolynomial::Key MomentPolynomial::key_of(const std::vector<int>& moment_orders) {
  Key key = 0;
  for (int order : moment_orders) {
    if (order == 0 || order == 2) continue;
    if (order == 1) throw std::invalid_argument("monomials containing m_1 vanish and are not stored");
    if (order < 0 || order > kMaxOrder) throw std::length_error("moment order outside the packed range");
    key += Key{1} << (4 * (order - kMinOrder));
  }
  return key;
}

std::vector<int> MomentPolynomial::orders_of(Key key) {
  std::vector<int> out;
  for (int order = kMinOrder; order <= kMaxOrder; ++order) {
    const auto count = static_cast<int>((key >> (4 * (order - kMinOrder))) & 0xF);
    for (int c = 0; c < count; ++c) out.push_back(order);
  }
  return out;
}

void MomentPolynomial::add(Key key, std::int64_t count) {
  if (count == 0) return;
  auto [it, inserted] = terms_.emplace(key, count);
  if (!inserted) {
    it->second += count;
    if (it->second == 0) terms_.erase(it);
  }
}

void MomentPolynomial::merge(const MomentPolynomial& other) {
  for (const auto& [key, count] : other.terms_) add(key, count);
}

int MomentPolynomial::max_order() const {
  int out = 0;
  for (const auto& [key, count] : terms_) {
    for (int order : orders_of(key)) out = std::max(out, order);
  }
  return out;
}

Rational MomentPolynomial::evaluate(const weights::MomentSequence& m) const {
  Rational out = 0;
  for (const auto& [key, count] : terms_) {
    Rational term = Rational(Integer(static_cast<long>(count)));
    for (int order : orders_of(key)) term *= m.at(order);
    out += term;
  }
  return out;
}

std::optional<weights::AffineAlpha> MomentPolynomial::as_affine_alpha() const {
  const Key alpha_key = key_of({4});
  weights::AffineAlpha out{0, 0};
  for (const auto& [key, count] : terms_) {
    const Rational c = Rational(Integer(static_cast<long>(count)));
    if (key == 0) {
      out.c0 += c;
    } else if (key == alpha_key) {
      out.c1 += c;
    } else {
      return std::nullopt;
    }
  }
  return out;
}

std::string MomentPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [key, count] : terms_) {
    if (!first) out << " + ";
    first = false;
    std::string monomial;
    for (int order : orders_of(key)) monomial += (monomial.empty() ? "m" : "*m") + std::to_string(order);
    if (monomial.empty()) {
      out << count;
    } else if (count == 1) {
      out << monomial;
    } else if (count == -1) {
      out << "-" << monomial;
    } else {
      out << count << "*" << monomial;
    }
  }
  return out.str();
}

// ---------------------------------------------------- reversed monomials

namespace {

constexpr int kLabelLimit = 32;

struct CellCounter {
  std::array<std::uint8_t, kLabelLimit * kLabelLimit> cells{};
  std::array<int, 64> touched{};
  int touched_count = 0;

  void add_route(std::span<const Label> route) {
    for (Label v : route) {
      if (v < 1 || v >= kLabelLimit) {
        reset();
        throw std::length_error("labels above 31 are outside the enumeration range");
      }
    }
    const std::size_t n = route.size();
    for (std::size_t k = 0; k < n; ++k) {
      const Label tail = route[k];
      const Label head = route[(k + 1) % n];
      // Even 0-based index = odd 1-based edge number: kept as is.
      const int cell = (k % 2 == 0) ? tail * kLabelLimit + head : head * kLabelLimit + tail;
      if (cells[cell]++ == 0) {
        if (touched_count == static_cast<int>(touched.size())) {
          reset();
          throw std::length_error("route too long for the enumeration range");
        }
        touched[touched_count++] = cell;
      }
    }
  }

  void reset() {
    cells.fill(0);
    touched_count = 0;
  }

  std::optional<MomentPolynomial::Key> harvest() {
    bool vanishes = false;
    MomentPolynomial::Key key = 0;
    for (int t = 0; t < touched_count; ++t) {
      const int c = cells[touched[t]];
      cells[touched[t]] = 0;
      if (c == 1) vanishes = true;
      if (c >= MomentPolynomial::kMinOrder) {
        if (c > MomentPolynomial::kMaxOrder) {
          reset();
          throw std::length_error("moment order outside the packed range");
        }
        key += MomentPolynomial::Key{1} << (4 * (c - MomentPolynomial::kMinOrder));
      }
    }
    touched_count = 0;
    if (vanishes) return std::nullopt;
    return key;
  }
};

CellCounter& counter() {
  thread_local CellCounter c;
  return c;
}

}  // namespace

std::optional<MomentPolynomial::Key> reversed_monomial(std::span<const Label> route) {
  auto& c = counter();
  c.add_route(route);
  return c.harvest();
}

std::optional<MomentPolynomial::Key> reversed_monomial(std::span<const Label> first,
                                                       std::span<const Label> second) {
  auto& c = counter();
  c.add_route(first);
  c.add_route(second);
  return c.harvest();
}

// ---------------------------------------------------------- sequences

namespace {

/// All sequences in [b]^len that hit every label of [b].
std::vector<std::vector<Label>> surjections(int len, int b) {
  std::vector<std::vector<Label>> out;
  std::vector<Label> seq(static_cast<std::size_t>(len), 1);
  const std::uint32_t full = (b >= 32) ? ~0u : ((1u << b) - 1u);
  for (;;) {
    std::uint32_t seen = 0;
    for (Label v : seq) seen |= 1u << (v - 1);
    if (seen == full) out.push_back(seq);
    int pos = len - 1;
    while (pos >= 0 && seq[pos] == b) seq[pos--] = 1;
    if (pos < 0) break;
    ++seq[pos];
  }
  return out;
}

/// Calls visit(seq) for every seq in [r]^len covering {b+1, ..., r}.
template <typename Visit>
void for_each_cover(int len, int r, int b, Visit&& visit) {
  if (r - b > len) return;
  std::vector<Label> seq(static_cast<std::size_t>(len), 1);
  const std::uint32_t need = ((r >= 32 ? ~0u : ((1u << r) - 1u))) & ~((1u << b) - 1u);
  for (;;) {
    std::uint32_t seen = 0;
    for (Label v : seq) seen |= 1u << (v - 1);
    if ((seen & need) == need) visit(static_cast<const std::vector<Label>&>(seq));
    int pos = len - 1;
    while (pos >= 0 && seq[pos] == r) seq[pos--] = 1;
    if (pos < 0) break;
    ++seq[pos];
  }
}

void zip_into(std::span<const Label> i, std::span<const Label> k, std::vector<Label>& out) {
  out.resize(2 * i.size());
  for (std::size_t t = 0; t < i.size(); ++t) {
    out[2 * t] = i[t];
    out[2 * t + 1] = k[t];
  }
}

unsigned worker_count(const EnumerationOptions& options, std::size_t jobs) {
  unsigned t = options.threads;
  if (t == 0) t = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(jobs, 1)));
}

/// Runs job(index, worker) for index in [0, jobs) on the configured workers.
/// Each worker owns one slot of per-worker state, merged by the caller.
template <typename Job>
void run_jobs(std::size_t jobs, unsigned workers, Job&& job) {
  if (workers <= 1) {
    for (std::size_t i = 0; i < jobs; ++i) job(i, 0u);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < jobs; i = next++) job(i, w);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = jobs;
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

/// Small accumulator keyed by monomial; few distinct keys occur per pass.
struct LocalPolynomial {
  std::vector<std::pair<MomentPolynomial::Key, std::int64_t>> entries;

  void add(MomentPolynomial::Key key, std::int64_t count) {
    for (auto& [k, c] : entries) {
      if (k == key) {
        c += count;
        return;
      }
    }
    entries.emplace_back(key, count);
  }

  void drain_into(MomentPolynomial& out) const {
    for (const auto& [k, c] : entries) out.add(k, c);
  }
};

void check_pair_ranges(int l, int r, int b) {
  if (l < 1 || r < 1 || b < 1) throw std::invalid_argument("l, r, b must be positive");
  if (b > std::min(l, r)) throw std::invalid_argument("b must satisfy b <= min(l, r)");
  if (r > 2 * l) throw std::invalid_argument("r must satisfy r <= 2l");
}

void check_double_ranges(int l1, int l2, int r, int b) {
  if (l1 < 1 || l2 < 1 || r < 1 || b < 1) throw std::invalid_argument("l1, l2, r, b must be positive");
  if (b > std::min(l1 + l2, r)) throw std::invalid_argument("b must satisfy b <= min(l1 + l2, r)");
  if (r > 2 * (l1 + l2)) throw std::invalid_argument("r must satisfy r <= 2(l1 + l2)");
}

void guard(bool within, const EnumerationOptions& options, const std::string& what) {
  if (!within && !options.allow_large) {
    throw CostGuardExceeded(what + " exceeds the default size limit; pass allow_large to proceed");
  }
}

}  // namespace

void for_each_route_pair(int l, int r, int b,
                         const std::function<void(std::span<const Label>, std::span<const Label>)>& visit) {
  check_pair_ranges(l, r, b);
  for (const auto& i : surjections(l, b)) {
    for_each_cover(l, r, b, [&](const std::vector<Label>& k) { visit(i, k); });
  }
}

std::vector<CanonicalRoutePair> enumerate_route_pairs(int l, int r, int b) {
  std::vector<CanonicalRoutePair> out;
  for_each_route_pair(l, r, b, [&](std::span<const Label> i, std::span<const Label> k) {
    out.push_back({Route({i.begin(), i.end()}), Route({k.begin(), k.end()})});
  });
  return out;
}

void for_each_double_route(int l1, int l2, int r, int b,
                           const std::function<void(std::span<const Label>, std::span<const Label>)>& visit) {
  check_double_ranges(l1, l2, r, b);
  const int total = l1 + l2;
  std::vector<Label> first;
  std::vector<Label> second;
  for (const auto& ij : surjections(total, b)) {
    const std::span<const Label> all_i(ij);
    for_each_cover(total, r, b, [&](const std::vector<Label>& km) {
      const std::span<const Label> all_k(km);
      zip_into(all_i.first(l1), all_k.first(l1), first);
      zip_into(all_i.subspan(l1), all_k.subspan(l1), second);
      visit(first, second);
    });
  }
}

MomentPolynomial inner_weight_polynomial(int l, int r, int b, const EnumerationOptions& options) {
  check_pair_ranges(l, r, b);
  guard(l <= 4, options, "inner weight enumeration at l = " + std::to_string(l));
  const auto is = surjections(l, b);
  const unsigned workers = worker_count(options, is.size());
  std::vector<LocalPolynomial> partial(workers);
  run_jobs(is.size(), workers, [&](std::size_t index, unsigned w) {
    std::vector<Label> route;
    const auto& i = is[index];
    for_each_cover(l, r, b, [&](const std::vector<Label>& k) {
      zip_into(i, k, route);
      if (const auto key = reversed_monomial(route)) partial[w].add(*key, 1);
    });
  });
  MomentPolynomial out;
  for (const auto& p : partial) p.drain_into(out);
  return out;
}

Rational inner_weight_sum(int l, int r, int b, const weights::MomentSequence& m,
                          const EnumerationOptions& options) {
  return inner_weight_polynomial(l, r, b, options).evaluate(m);
}

MomentPolynomial covariance_inner_polynomial(int l1, int l2, int r, int b, const EnumerationOptions& options) {
  check_double_ranges(l1, l2, r, b);
  const int total = l1 + l2;
  guard(total <= 4, options, "covariance enumeration at l1 + l2 = " + std::to_string(total));
  const auto ijs = surjections(total, b);
  const unsigned workers = worker_count(options, ijs.size());
  std::vector<LocalPolynomial> partial(workers);
  run_jobs(ijs.size(), workers, [&](std::size_t index, unsigned w) {
    std::vector<Label> first;
    std::vector<Label> second;
    const std::span<const Label> all_i(ijs[index]);
    for_each_cover(total, r, b, [&](const std::vector<Label>& km) {
      const std::span<const Label> all_k(km);
      zip_into(all_i.first(l1), all_k.first(l1), first);
      zip_into(all_i.subspan(l1), all_k.subspan(l1), second);
      if (const auto joint = reversed_monomial(first, second)) partial[w].add(*joint, 1);
      const auto a = reversed_monomial(first);
      if (!a) return;
      const auto c = reversed_monomial(second);
      if (!c) return;
      partial[w].add(MomentPolynomial::multiply(*a, *c), -1);
    });
  });
  MomentPolynomial out;
  for (const auto& p : partial) p.drain_into(out);
  return out;
}

namespace {

Rational integer_power(int n, int e) {
  Integer out;
  mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(e));
  return Rational(out);
}

void check_dimensions(int p, int n) {
  if (p < 1 || n < 1) throw std::invalid_argument("p and n must be positive");
}

}  // namespace

ExactMomentResult exact_trace_moment(int l, int p, int n, const weights::MomentSequence& m,
                                     const EnumerationOptions& options) {
  if (l < 1) throw std::invalid_argument("l must be positive");
  check_dimensions(p, n);
  guard(l <= 4, options, "exact trace moment at l = " + std::to_string(l));
  if (m.max_order() < 2 * l) throw std::invalid_argument("moment sequence must cover order 2l");
  ExactMomentResult out{0, {}};
  for (int r = 1; r <= std::min(2 * l, n); ++r) {
    for (int b = 1; b <= std::min({l, r, p}); ++b) {
      TermRecord rec{r, b, closedform::binom(p, b) * closedform::binom(n - b, r - b), 0};
      rec.inner_sum = inner_weight_sum(l, r, b, m, options);
      out.value += Rational(rec.multiplicity) * rec.inner_sum;
      out.terms.push_back(std::move(rec));
    }
  }
  out.value /= integer_power(n, l);
  return out;
}

ExactMomentResult exact_trace_covariance(int l1, int l2, int p, int n, const weights::MomentSequence& m,
                                         const EnumerationOptions& options) {
  if (l1 < 1 || l2 < 1) throw std::invalid_argument("l1 and l2 must be positive");
  check_dimensions(p, n);
  const int total = l1 + l2;
  guard(total <= 4, options, "exact trace covariance at l1 + l2 = " + std::to_string(total));
  if (m.max_order() < 2 * total) throw std::invalid_argument("moment sequence must cover order 2(l1 + l2)");
  ExactMomentResult out{0, {}};
  for (int r = 1; r <= std::min(2 * total, n); ++r) {
    for (int b = 1; b <= std::min({total, r, p}); ++b) {
      TermRecord rec{r, b, closedform::binom(p, b) * closedform::binom(n - b, r - b), 0};
      rec.inner_sum = covariance_inner_polynomial(l1, l2, r, b, options).evaluate(m);
      out.value += Rational(rec.multiplicity) * rec.inner_sum;
      out.terms.push_back(std::move(rec));
    }
  }
  out.value /= integer_power(n, total);
  return out;
}

std::map<SeedClass, SeedBucket> seed_census_with_weights(int l, int r, int b, const EnumerationOptions& options) {
  check_pair_ranges(l, r, b);
  guard(l <= 5, options, "seed census at l = " + std::to_string(l));
  const auto is = surjections(l, b);
  const unsigned workers = worker_count(options, is.size());
  struct Local {
    std::map<SeedClass, std::pair<std::int64_t, LocalPolynomial>> buckets;
  };
  std::vector<Local> partial(workers);
  run_jobs(is.size(), workers, [&](std::size_t index, unsigned w) {
    std::vector<Label> route;
    std::vector<Label> trimmed;
    const auto& i = is[index];
    for_each_cover(l, r, b, [&](const std::vector<Label>& k) {
      zip_into(i, k, route);
      trimmed = route;
      graphs::raw::trim_to_seed(trimmed);
      auto& bucket = partial[w].buckets[graphs::raw::classify(trimmed)];
      ++bucket.first;
      if (const auto key = reversed_monomial(route)) bucket.second.add(*key, 1);
    });
  });
  std::map<SeedClass, SeedBucket> out;
  for (const auto& local : partial) {
    for (const auto& [cls, bucket] : local.buckets) {
      auto& dst = out[cls];
      dst.count += bucket.first;
      bucket.second.drain_into(dst.weight);
    }
  }
  return out;
}

std::map<SeedClass, std::int64_t> census_by_seed(int l, int b, const EnumerationOptions& options) {
  std::map<SeedClass, std::int64_t> out;
  for (const auto& [cls, bucket] : seed_census_with_weights(l, l, b, options)) out[cls] = bucket.count;
  return out;
}

std::vector<Route> enumerate_sprouting_graphs(const Route& seed_route, const graphs::LabelSet& b_prime,
                                              const graphs::LabelSet& w_prime) {
  const graphs::CircuitMultigraph seed_graph(seed_route);
  if (!graphs::raw::balanced_leaves(seed_route.entries()).empty()) {
    throw std::invalid_argument("seed has balanced leaves");
  }
  for (Label v : b_prime) {
    if (w_prime.count(v)) throw std::invalid_argument("sprouted black and white sets must be disjoint");
  }
  std::vector<Label> sprouted(b_prime.begin(), b_prime.end());
  sprouted.insert(sprouted.end(), w_prime.begin(), w_prime.end());
  std::sort(sprouted.begin(), sprouted.end());
  const int s = static_cast<int>(sprouted.size());
  std::set<Label> black_target;
  for (Label v : b_prime) {
    black_target.insert(static_cast<Label>(std::lower_bound(sprouted.begin(), sprouted.end(), v) - sprouted.begin()) + 1);
  }

  std::vector<Label> shifted = seed_route.vector();
  for (Label& v : shifted) v += s;

  // Every graph with seed G0 arises from G0 by inserting balanced leaves; a
  // leaf v next to neighbour u appears as (..., u, v, u, ...) cyclically.
  std::set<std::vector<Label>> level{shifted};
  for (int step = 0; step < s; ++step) {
    std::set<std::vector<Label>> next;
    for (const auto& route : level) {
      std::vector<bool> present(static_cast<std::size_t>(s) + 1, false);
      for (Label v : route) {
        if (v <= s) present[v] = true;
      }
      const std::size_t n = route.size();
      for (Label v = 1; v <= s; ++v) {
        if (present[v]) continue;
        for (std::size_t t = 0; t < n; ++t) {
          std::vector<Label> grown(route.begin(), route.begin() + static_cast<std::ptrdiff_t>(t) + 1);
          grown.push_back(v);
          grown.push_back(route[t]);
          grown.insert(grown.end(), route.begin() + static_cast<std::ptrdiff_t>(t) + 1, route.end());
          next.insert(std::move(grown));
        }
        std::vector<Label> front{v, route.back()};
        front.insert(front.end(), route.begin(), route.end());
        next.insert(std::move(front));
        std::vector<Label> back(route);
        back.push_back(route.front());
        back.push_back(v);
        next.insert(std::move(back));
      }
    }
    level = std::move(next);
  }

  std::vector<Route> out;
  for (const auto& route : level) {
    std::vector<Label> trimmed = route;
    graphs::raw::trim_to_seed(trimmed);
    if (trimmed != shifted) continue;
    std::set<Label> black;
    for (std::size_t t = 0; t < route.size(); t += 2) {
      if (route[t] <= s) black.insert(route[t]);
    }
    if (black != black_target) continue;
    out.emplace_back(route);
  }
  return out;
}

Integer census_sprouting(const Route& seed_route, const graphs::LabelSet& b_prime, const graphs::LabelSet& w_prime) {
  return Integer(static_cast<unsigned long>(enumerate_sprouting_graphs(seed_route, b_prime, w_prime).size()));
}

std::map<DoubleCensusKey, std::int64_t> census_double(int l1, int l2, int b, const EnumerationOptions& options) {
  const int total = l1 + l2;
  check_double_ranges(l1, l2, total, b);
  guard(total <= 4, options, "double census at l1 + l2 = " + std::to_string(total));
  const auto ijs = surjections(total, b);
  const unsigned workers = worker_count(options, ijs.size());
  std::vector<std::map<DoubleCensusKey, std::int64_t>> partial(workers);
  run_jobs(ijs.size(), workers, [&](std::size_t index, unsigned w) {
    std::vector<Label> first;
    std::vector<Label> second;
    const std::span<const Label> all_i(ijs[index]);
    for_each_cover(total, total, b, [&](const std::vector<Label>& km) {
      const std::span<const Label> all_k(km);
      zip_into(all_i.first(l1), all_k.first(l1), first);
      zip_into(all_i.subspan(l1), all_k.subspan(l1), second);
      std::vector<Label> a = first;
      std::vector<Label> c = second;
      graphs::raw::trim_double_to_seed(a, c);
      DoubleCensusKey key;
      key.seed_class = graphs::raw::classify_double(a, c);
      std::vector<bool> in_seed(static_cast<std::size_t>(total) + 1, false);
      for (Label v : a) in_seed[v] = true;
      for (Label v : c) in_seed[v] = true;
      // Black set of the double is [b]; sprouted sets of the two components are disjoint.
      const auto split = [&](const std::vector<Label>& component, int& black, int& white) {
        std::vector<bool> seen(static_cast<std::size_t>(total) + 1, false);
        for (Label v : component) {
          if (in_seed[v] || seen[v]) continue;
          seen[v] = true;
          (v <= b ? black : white) += 1;
        }
      };
      split(first, key.b1_prime, key.w1_prime);
      split(second, key.b2_prime, key.w2_prime);
      ++partial[w][key];
    });
  });
  std::map<DoubleCensusKey, std::int64_t> out;
  for (const auto& local : partial) {
    for (const auto& [key, count] : local) out[key] += count;
  }
  return out;
}

}  // namespace tracegraph::enumeration
