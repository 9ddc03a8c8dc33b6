#include "tracegraph/verify.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "tracegraph/closedform.hpp"
#include "tracegraph/weights.hpp"

namespace tracegraph::verify {

namespace {

using enumeration::MomentPolynomial;
using graphs::Label;
using graphs::SeedClass;
using Kind = graphs::SeedClass::Kind;

constexpr std::size_t kMaxRecordedFailures = 200;

class Recorder {
 public:
  explicit Recorder(std::string suite) { result_.suite = std::move(suite); }

  void check(bool ok, const std::string& what) {
    ++result_.cases;
    if (ok) return;
    ++failed_;
    if (result_.failures.size() < kMaxRecordedFailures) result_.failures.push_back(what);
  }

  template <typename Describe>
  void check_lazy(bool ok, Describe describe) {
    ++result_.cases;
    if (ok) return;
    ++failed_;
    if (result_.failures.size() < kMaxRecordedFailures) result_.failures.push_back(describe());
  }

  SuiteResult finish() {
    if (failed_ > result_.failures.size()) {
      result_.failures.push_back(std::to_string(failed_ - result_.failures.size()) + " further failures omitted");
    }
    return std::move(result_);
  }

 private:
  SuiteResult result_;
  std::size_t failed_ = 0;
};

std::string join(std::span<const Label> route) {
  std::string out = "(";
  for (std::size_t t = 0; t < route.size(); ++t) {
    if (t) out += ",";
    out += std::to_string(route[t]);
  }
  return out + ")";
}

std::string args(std::initializer_list<long> values) {
  std::string out = "(";
  bool first = true;
  for (long v : values) {
    if (!first) out += ",";
    first = false;
    out += std::to_string(v);
  }
  return out + ")";
}

void zip(std::span<const Label> i, std::span<const Label> k, std::vector<Label>& out) {
  out.resize(2 * i.size());
  for (std::size_t t = 0; t < i.size(); ++t) {
    out[2 * t] = i[t];
    out[2 * t + 1] = k[t];
  }
}

std::set<Label> black_of(std::span<const Label> route) {
  std::set<Label> out;
  for (std::size_t t = 0; t < route.size(); t += 2) out.insert(route[t]);
  return out;
}

Label max_of(std::span<const Label> route) { return *std::max_element(route.begin(), route.end()); }

/// Undirected skeleton of a route: edge counts per unordered pair, directed counts and self-loops.
struct Skeleton {
  int r = 0;
  std::vector<std::vector<int>> directed;  // directed[u][v]
  std::vector<bool> self_loop;
  std::vector<std::set<Label>> neighbours;  // excludes the vertex itself

  explicit Skeleton(std::span<const Label> route)
      : r(max_of(route)),
        directed(static_cast<std::size_t>(r) + 1, std::vector<int>(static_cast<std::size_t>(r) + 1, 0)),
        self_loop(static_cast<std::size_t>(r) + 1, false),
        neighbours(static_cast<std::size_t>(r) + 1) {
    const std::size_t n = route.size();
    for (std::size_t t = 0; t < n; ++t) {
      const Label u = route[t];
      const Label v = route[(t + 1) % n];
      ++directed[u][v];
      if (u == v) {
        self_loop[u] = true;
      } else {
        neighbours[u].insert(v);
        neighbours[v].insert(u);
      }
    }
  }

  int connection(Label u, Label v) const { return u == v ? directed[u][u] : directed[u][v] + directed[v][u]; }

  std::size_t undirected_edge_count() const {
    std::size_t twice = 0;
    for (Label v = 1; v <= r; ++v) twice += neighbours[v].size();
    return twice / 2;
  }

  bool connected() const {
    std::vector<bool> seen(static_cast<std::size_t>(r) + 1, false);
    std::vector<Label> stack{1};
    seen[1] = true;
    int count = 1;
    while (!stack.empty()) {
      const Label u = stack.back();
      stack.pop_back();
      for (Label v : neighbours[u]) {
        if (!seen[v]) {
          seen[v] = true;
          ++count;
          stack.push_back(v);
        }
      }
    }
    return count == r;
  }

  bool has_self_loop() const { return std::find(self_loop.begin(), self_loop.end(), true) != self_loop.end(); }

  /// Every connection pairs off into opposite edges.
  bool balanced() const {
    if (has_self_loop()) return false;
    for (Label u = 1; u <= r; ++u) {
      for (Label v = u + 1; v <= r; ++v) {
        if (directed[u][v] != directed[v][u]) return false;
      }
    }
    return true;
  }

  bool every_connection_single_pair() const {
    for (Label u = 1; u <= r; ++u) {
      for (Label v : neighbours[u]) {
        if (directed[u][v] != 1) return false;
      }
    }
    return true;
  }
};

/// Visits every sequence in [labels]^length.
template <typename Visit>
void for_each_word(int labels, int length, Visit visit) {
  std::vector<Label> word(static_cast<std::size_t>(length), 1);
  while (true) {
    visit(std::span<const Label>(word));
    int t = length - 1;
    while (t >= 0 && word[t] == labels) word[t--] = 1;
    if (t < 0) return;
    ++word[t];
  }
}

bool covers(std::span<const Label> route, int labels) {
  std::vector<bool> seen(static_cast<std::size_t>(labels) + 1, false);
  int count = 0;
  for (Label v : route) {
    if (!seen[v]) {
      seen[v] = true;
      ++count;
    }
  }
  return count == labels;
}

/// Coefficients c_0..c_d of the polynomial through (x0 + t, values[t]).
std::vector<Rational> interpolate(long x0, const std::vector<Rational>& values) {
  const std::size_t size = values.size();
  std::vector<std::vector<Rational>> a(size, std::vector<Rational>(size + 1));
  for (std::size_t row = 0; row < size; ++row) {
    Rational x = x0 + static_cast<long>(row);
    Rational power = 1;
    for (std::size_t col = 0; col < size; ++col) {
      a[row][col] = power;
      power *= x;
    }
    a[row][size] = values[row];
  }
  for (std::size_t col = 0; col < size; ++col) {
    std::size_t pivot = col;
    while (a[pivot][col] == 0) ++pivot;
    std::swap(a[pivot], a[col]);
    for (std::size_t row = 0; row < size; ++row) {
      if (row == col || a[row][col] == 0) continue;
      const Rational f = a[row][col] / a[col][col];
      for (std::size_t k = col; k <= size; ++k) a[row][k] -= f * a[col][k];
    }
  }
  std::vector<Rational> out(size);
  for (std::size_t k = 0; k < size; ++k) out[k] = a[k][size] / a[k][k];
  return out;
}

Integer catalan(long l) { return closedform::binom(2 * l, l) / (l + 1); }

// ----------------------------------------------------------------- suites

SuiteResult taylor(int max_l) {
  Recorder rec("taylor");
  for (long l = 2; l <= max_l; ++l) {
    for (long b = 1; b < l; ++b) rec.check(closedform::taylor_identity_check(l, b), "taylor identity fails at " + args({l, b}));
  }
  return rec.finish();
}

SuiteResult appendix_d(int max_l) {
  Recorder rec("appendix-d");
  using closedform::binom;
  for (long l = 1; l <= max_l; ++l) {
    const auto coeffs = closedform::bs_mean_coefficients(l);
    bool ok = coeffs.size() == static_cast<std::size_t>(l) + 1 && coeffs.front() == 0 && coeffs.back() == 0;
    for (long j = 1; ok && j <= l - 1; ++j) {
      ok = coeffs[j] == ratio(binom(2 * l, 2 * j) - binom(l, j) * binom(l, j), 2);
    }
    rec.check(ok, "bs_mean coefficients differ from the even-power expansion at l=" + std::to_string(l));
    // At y = s^2 the closed form with square roots is rational.
    for (const Rational& s : {Rational(1, 2), Rational(2, 3), Rational(1)}) {
      const Rational y = s * s;
      Rational plus = 1;
      Rational minus = 1;
      for (long t = 0; t < 2 * l; ++t) {
        plus *= 1 + s;
        minus *= 1 - s;
      }
      Rational direct = (plus + minus) / 4;
      Rational yj = 1;
      for (long j = 0; j <= l; ++j) {
        direct -= Rational(binom(l, j) * binom(l, j)) * yj / 2;
        yj *= y;
      }
      rec.check(closedform::bs_mean(l, y) == direct,
                "bs_mean disagrees with the square-root form at l=" + std::to_string(l) + ", y=" + to_string(y));
    }
    rec.check(closedform::mp_moment(l, 1) == Rational(catalan(l)),
              "mp_moment at y=1 is not the Catalan number at l=" + std::to_string(l));
  }
  for (long l1 = 1; l1 <= max_l; ++l1) {
    for (long l2 = 1; l2 <= max_l; ++l2) {
      for (long b = 1; b <= l1 + l2; ++b) {
        const Rational expected =
            ratio(closedform::C_coeff(l1, l2, b), factorial(b) * factorial(l1 + l2 - b));
        rec.check(closedform::bs_cov_coefficient(l1, l2, b) == expected,
                  "bs_cov_coefficient != C/(b!(l1+l2-b)!) at " + args({l1, l2, b}));
      }
    }
  }
  return rec.finish();
}

SuiteResult bipartite(int max_total) {
  Recorder rec("bipartite");
  for (int total = 0; total <= max_total; ++total) {
    for (int b = 0; b <= total; ++b) {
      const int w = total - b;
      const auto census = bipartite_forced_edge_census(b, w);
      for (const auto& d : compositions(b + w + 1, b + 1)) {
        for (const auto& e : compositions(b + w + 1, w + 1)) {
          const auto it = census.find({d, e});
          const Integer brute = it == census.end() ? Integer(0) : Integer(static_cast<long>(it->second));
          const Integer formula = closedform::count_bipartite_forced_edge(b, w, d, e);
          rec.check_lazy(formula == brute, [&] {
            return "spanning tree count at b=" + std::to_string(b) + ", w=" + std::to_string(w) + ": formula " +
                   to_string(formula) + ", brute force " + to_string(brute);
          });
        }
      }
    }
  }
  return rec.finish();
}

SuiteResult coefficients(int max_l, const enumeration::EnumerationOptions& options) {
  Recorder rec("coefficients");
  for (long l1 = 1; l1 <= max_l; ++l1) {
    for (long l2 = 1; l2 <= max_l; ++l2) {
      for (long b = 1; b <= l1 + l2; ++b) {
        rec.check(closedform::C_coeff(l1, l2, b) == closedform::C_coeff(l2, l1, b), "C_coeff asymmetric at " + args({l1, l2, b}));
        rec.check(closedform::D_coeff(l1, l2, b) == closedform::D_coeff(l2, l1, b), "D_coeff asymmetric at " + args({l1, l2, b}));
      }
    }
  }
  // The double inner sum on exactly l1 + l2 vertices is C + (alpha - 3) D.
  for (int total = 2; total <= 4; ++total) {
    for (int l1 = 1; l1 < total; ++l1) {
      const int l2 = total - l1;
      for (int b = 1; b <= total; ++b) {
        const auto poly = enumeration::covariance_inner_polynomial(l1, l2, total, b, options);
        const auto affine = poly.as_affine_alpha();
        const Integer d = closedform::D_coeff(l1, l2, b);
        const weights::AffineAlpha expected{Rational(closedform::C_coeff(l1, l2, b) - 3 * d), Rational(d)};
        rec.check(affine && *affine == expected,
                  "double inner sum " + poly.to_string() + " != C + (alpha-3)D at " + args({l1, l2, b}));
      }
    }
  }
  return rec.finish();
}

SuiteResult sum_identity(int max_l, const enumeration::EnumerationOptions& options) {
  Recorder rec("sum-identity");
  const auto gaussian = weights::preset_moments(weights::Distribution::Gaussian, 4 * max_l + 4);
  const auto rademacher = weights::preset_moments(weights::Distribution::Rademacher, 4 * max_l + 4);
  for (int l = 1; l <= max_l; ++l) {
    for (int b = 1; b <= l; ++b) {
      const auto poly = enumeration::inner_weight_polynomial(l, l, b, options);
      const Integer a = closedform::A_coeff(l, b);
      const Integer bb = closedform::B_coeff(l, b);
      for (const auto* m : {&rademacher, &gaussian}) {
        const Rational alpha = m->alpha();
        rec.check(poly.evaluate(*m) == Rational(a) + (alpha - 3) * Rational(bb),
                  "inner sum != A + (alpha-3)B at " + args({l, b}) + ", alpha=" + to_string(alpha));
      }
      if (b == l) {
        rec.check(a == l * factorial(l), "A(l,l) != l l! at l=" + std::to_string(l));
      }
      const auto tree = enumeration::inner_weight_polynomial(l, l + 1, b, options);
      rec.check(tree.evaluate(gaussian) == Rational(closedform::count_colored_trees(l, b)) &&
                    tree.evaluate(rademacher) == Rational(closedform::count_colored_trees(l, b)),
                "tree inner sum != l! C(l-1,b-1) at " + args({l, b}));
      if (l + 2 <= 2 * l) {
        const auto beyond = enumeration::inner_weight_polynomial(l, l + 2, b, options);
        rec.check(beyond.is_zero(), "inner sum on l+2 vertices is " + beyond.to_string() + " at " + args({l, b}));
      }
    }
  }
  return rec.finish();
}

SuiteResult oracle(int max_n, const enumeration::EnumerationOptions& options) {
  Recorder rec("oracle");
  const std::vector<weights::MomentSequence> sequences{
      weights::preset_moments(weights::Distribution::Gaussian, 4),
      weights::preset_moments(weights::Distribution::Rademacher, 4),
      weights::preset_moments(weights::Distribution::UniformScaled, 4),
      weights::MomentSequence({1, 0, 1, Rational(1, 2), Rational(7, 3)}),
  };
  for (int n = 1; n <= max_n; ++n) {
    for (int p = 1; p <= n; ++p) {
      for (const auto& m : sequences) {
        const Rational alpha = m.alpha();
        const Rational mean = enumeration::exact_trace_moment(2, p, n, m, options).value;
        rec.check(mean == p + p * (alpha + p - 2) / n,
                  "E tr S^2 != p + p(m4+p-2)/n at (p,n)=" + args({p, n}) + ", m4=" + to_string(alpha));
        const Rational cov = enumeration::exact_trace_covariance(1, 1, p, n, m, options).value;
        rec.check(cov == p * (alpha - 1) / n,
                  "Var tr S != p(m4-1)/n at (p,n)=" + args({p, n}) + ", m4=" + to_string(alpha));
        const auto thm1 = closedform::theorem1_mean(2, p, n).value.evaluate(alpha);
        rec.check(mean - thm1 == p * alpha / (n * n), "exact - theorem1 != p alpha/n^2 at (p,n)=" + args({p, n}));
        const auto thm2 = closedform::theorem2_cov(1, 1, p, n).value.evaluate(alpha);
        rec.check(thm2 == Rational(p * (n - 1)) * (alpha - 1) / (n * n),
                  "theorem2_cov(1,1) != p(n-1)(alpha-1)/n^2 at (p,n)=" + args({p, n}));
        rec.check(cov - thm2 == p * (alpha - 1) / (n * n),
                  "exact - theorem2 != p(alpha-1)/n^2 at (p,n)=" + args({p, n}));
      }
    }
  }
  // The mean expansion at l = 3, p = 2 is off by O(1/n^2).
  const auto gaussian = weights::preset_moments(weights::Distribution::Gaussian, 6);
  std::vector<double> scaled;
  for (int n : {8, 16, 32, 64}) {
    const Rational residual = enumeration::exact_trace_moment(3, 2, n, gaussian, options).value -
                              closedform::theorem1_mean(3, 2, n).value.evaluate(gaussian.alpha());
    scaled.push_back(std::abs(to_double(residual)) * n * n);
  }
  for (std::size_t t = 1; t < scaled.size(); ++t) {
    const double ratio_step = scaled[t] / scaled[t - 1];
    rec.check(ratio_step >= 0.5 && ratio_step <= 2.0,
              "n^2 (exact - theorem1) at l=3, p=2 changes by factor " + std::to_string(ratio_step));
  }
  // Covariance support: quadruples on more than l1 + l2 labels contribute nothing.
  for (int total = 2; total <= 4; ++total) {
    for (int l1 = 1; l1 < total; ++l1) {
      for (int r = total + 1; r <= 2 * total; ++r) {
        for (int b = 1; b <= std::min(total, r); ++b) {
          const auto poly = enumeration::covariance_inner_polynomial(l1, total - l1, r, b, options);
          rec.check(poly.is_zero(), "covariance inner sum on " + std::to_string(r) + " labels is " + poly.to_string() +
                                        " at " + args({l1, total - l1, b}));
        }
      }
    }
  }
  return rec.finish();
}

/// Degree-wise coefficients of n^power * value(n) for the c0 and c1 parts.
template <typename F>
std::pair<std::vector<Rational>, std::vector<Rational>> polynomial_in(long x0, int points, F affine_at) {
  std::vector<Rational> c0;
  std::vector<Rational> c1;
  for (int t = 0; t < points; ++t) {
    const weights::AffineAlpha v = affine_at(x0 + t);
    c0.push_back(v.c0);
    c1.push_back(v.c1);
  }
  return {interpolate(x0, c0), interpolate(x0, c1)};
}

bool vanishes_from(const std::vector<Rational>& coeffs, std::size_t lowest) {
  for (std::size_t k = lowest; k < coeffs.size(); ++k) {
    if (coeffs[k] != 0) return false;
  }
  return true;
}

Rational power_of(long base, long e) {
  Rational out = 1;
  for (long t = 0; t < e; ++t) out *= base;
  return out;
}

SuiteResult corollaries(int max_l, const enumeration::EnumerationOptions& options) {
  Recorder rec("corollaries");
  using weights::AffineAlpha;
  for (long l = 1; l <= max_l; ++l) {
    for (long p = 1; p <= 4; ++p) {
      // n^l (theorem1 - corollary) has degree <= l - 2 in n.
      const auto [c0, c1] = polynomial_in(std::max(p, l + 1) + 1, static_cast<int>(l) + 2, [&](long n) {
        AffineAlpha d = closedform::theorem1_mean(l, p, n).value - closedform::corollary_mean_const_p(l, p, n);
        return d * power_of(n, l);
      });
      rec.check(vanishes_from(c0, static_cast<std::size_t>(std::max(0L, l - 1))) &&
                    vanishes_from(c1, static_cast<std::size_t>(std::max(0L, l - 1))),
                "constant-p mean corollary is not theorem1 to order 1/n at " + args({l, p}));
    }
    for (const Rational& y : {Rational(1, 2), Rational(1)}) {
      const long den = y.get_den().get_si();
      const long num = y.get_num().get_si();
      // With n = den * m and p = num * m, n^l (theorem1 - corollary) has degree <= l - 1 in m.
      const auto [c0, c1] = polynomial_in(l + 2, static_cast<int>(l) + 2, [&](long m) {
        const long n = den * m;
        AffineAlpha d = closedform::theorem1_mean(l, num * m, n).value -
                        closedform::corollary_mean_ratio(l, num * m, n).value;
        return d * power_of(n, l);
      });
      rec.check(vanishes_from(c0, static_cast<std::size_t>(l)) && vanishes_from(c1, static_cast<std::size_t>(l)),
                "ratio mean corollary is not theorem1 to order 1 at l=" + std::to_string(l) + ", y=" + to_string(y));
    }
  }
  for (long l1 = 1; l1 <= max_l; ++l1) {
    for (long l2 = 1; l2 <= max_l; ++l2) {
      const long total = l1 + l2;
      for (long p = 1; p <= 4; ++p) {
        // The covariance expansion itself is off by O(p/n^2), so agreement is asserted through 1/n:
        // n^L (theorem2 - corollary) has degree <= L - 2 in n.
        const auto [c0, c1] = polynomial_in(std::max(p, total) + 1, static_cast<int>(total) + 1, [&](long n) {
          AffineAlpha d = closedform::theorem2_cov(l1, l2, p, n).value - closedform::corollary_cov_const_p(l1, l2, p, n);
          return d * power_of(n, total);
        });
        rec.check(vanishes_from(c0, static_cast<std::size_t>(total - 1)) &&
                      vanishes_from(c1, static_cast<std::size_t>(total - 1)),
                  "constant-p covariance corollary is not theorem2 to order 1/n at " + args({l1, l2, p}));
      }
      for (const Rational& y : {Rational(1, 2), Rational(1)}) {
        const long den = y.get_den().get_si();
        const long num = y.get_num().get_si();
        const auto [c0, c1] = polynomial_in(total + 1, static_cast<int>(total) + 2, [&](long m) {
          const long n = den * m;
          AffineAlpha d = closedform::theorem2_cov(l1, l2, num * m, n).value -
                          closedform::corollary_cov_ratio(l1, l2, num * m, n).value;
          return d * power_of(n, total);
        });
        rec.check(vanishes_from(c0, static_cast<std::size_t>(total)) && vanishes_from(c1, static_cast<std::size_t>(total)),
                  "ratio covariance corollary is not theorem2 to order 1 at " + args({l1, l2}) + ", y=" + to_string(y));
      }
    }
  }
  // Against the exact oracle: n^l E tr S^l is a polynomial in n of degree <= l.
  for (int l = 1; l <= std::min(max_l, 3); ++l) {
    for (int p = 1; p <= 3; ++p) {
      for (const auto d : {weights::Distribution::Gaussian, weights::Distribution::UniformScaled}) {
        const auto m = weights::preset_moments(d, 2 * l + 4);
        std::vector<Rational> values;
        const int n0 = std::max(p, 2 * l) + 1;
        for (int t = 0; t <= l + 1; ++t) {
          const int n = n0 + t;
          const Rational exact = enumeration::exact_trace_moment(l, p, n, m, options).value;
          values.push_back((exact - closedform::corollary_mean_const_p(l, p, n).evaluate(m.alpha())) * power_of(n, l));
        }
        rec.check(vanishes_from(interpolate(n0, values), static_cast<std::size_t>(l - 1)),
                  "constant-p mean corollary is not exact to order 1/n at " + args({l, p}) + " for " +
                      weights::to_string(d));
      }
    }
  }
  for (int total = 2; total <= std::min(2 * max_l, 3); ++total) {
    for (int l1 = 1; l1 < total; ++l1) {
      const int l2 = total - l1;
      for (int p = 1; p <= 3; ++p) {
        const auto m = weights::preset_moments(weights::Distribution::Gaussian, 2 * total);
        std::vector<Rational> values;
        const int n0 = std::max(p, 2 * total) + 1;
        for (int t = 0; t <= total; ++t) {
          const int n = n0 + t;
          const Rational exact = enumeration::exact_trace_covariance(l1, l2, p, n, m, options).value;
          values.push_back((exact - closedform::corollary_cov_const_p(l1, l2, p, n).evaluate(m.alpha())) *
                           power_of(n, total));
        }
        rec.check(vanishes_from(interpolate(n0, values), static_cast<std::size_t>(total - 1)),
                  "constant-p covariance corollary is not exact to order 1/n at " + args({l1, l2, p}));
      }
    }
  }
  return rec.finish();
}

SuiteResult trees(int max_l) {
  Recorder rec("trees");
  std::vector<Label> route;
  for (int l = 1; l <= max_l; ++l) {
    for (int b = 1; b <= l; ++b) {
      std::int64_t balanced_trees = 0;
      enumeration::for_each_route_pair(l, l + 1, b, [&](std::span<const Label> i, std::span<const Label> k) {
        zip(i, k, route);
        const Skeleton s(route);
        const bool tree_shape = s.connected() && s.undirected_edge_count() == static_cast<std::size_t>(l) &&
                                !s.has_self_loop() && s.every_connection_single_pair();
        rec.check_lazy(s.balanced() == tree_shape, [&] { return "balanced-tree characterization fails for " + join(route); });
        const bool library = graphs::is_balanced_tree(graphs::CircuitMultigraph(graphs::Route(route)));
        rec.check_lazy(library == tree_shape, [&] { return "is_balanced_tree disagrees for " + join(route); });
        const auto key = enumeration::reversed_monomial(route);
        const bool unit_weight = key && *key == 0;
        rec.check_lazy(unit_weight == tree_shape && (tree_shape || !key),
                       [&] { return "tree weight law fails for " + join(route); });
        if (!tree_shape) return;
        ++balanced_trees;
        const auto black = black_of(route);
        bool bicoloured = true;
        for (std::size_t t = 0; t < route.size(); ++t) {
          const bool a = black.count(route[t]) > 0;
          const bool c = black.count(route[(t + 1) % route.size()]) > 0;
          bicoloured = bicoloured && a != c;
        }
        rec.check_lazy(bicoloured, [&] { return "tree edge joins equal colours in " + join(route); });
      });
      rec.check(Integer(static_cast<long>(balanced_trees)) == closedform::count_colored_trees(l, b),
                "balanced tree count != l! C(l-1,b-1) at " + args({l, b}));
    }
  }
  // Every route on l + 1 labels: balanced trees grouped by their tree shape.
  for (int l = 1; l <= std::min(max_l, 4); ++l) {
    std::map<std::set<std::pair<Label, Label>>, std::int64_t> by_shape;
    std::map<std::set<std::pair<Label, Label>>, std::vector<long>> degrees_of;
    for_each_word(l + 1, 2 * l, [&](std::span<const Label> word) {
      if (!covers(word, l + 1)) return;
      const Skeleton s(word);
      if (!s.balanced() || !s.connected() || s.undirected_edge_count() != static_cast<std::size_t>(l)) return;
      std::set<std::pair<Label, Label>> shape;
      std::vector<long> degrees;
      for (Label u = 1; u <= l + 1; ++u) {
        degrees.push_back(static_cast<long>(s.neighbours[u].size()));
        for (Label v : s.neighbours[u]) {
          if (u < v) shape.insert({u, v});
        }
      }
      ++by_shape[shape];
      degrees_of[shape] = degrees;
    });
    Integer cayley = 1;
    for (int t = 0; t < l - 1; ++t) cayley *= l + 1;
    rec.check(Integer(static_cast<long>(by_shape.size())) == cayley,
              "number of tree shapes on " + std::to_string(l + 1) + " labels is " + std::to_string(by_shape.size()));
    for (const auto& [shape, count] : by_shape) {
      const Integer formula = closedform::count_trees_per_adjacency(degrees_of[shape]);
      rec.check_lazy(formula == Integer(static_cast<long>(count)), [&] {
        return "balanced trees per shape: formula " + to_string(formula) + ", found " + std::to_string(count) +
               " at l=" + std::to_string(l);
      });
    }
  }
  return rec.finish();
}

SuiteResult sprouting(int max_l0) {
  Recorder rec("sprouting");
  for (int l0 = 1; l0 <= max_l0; ++l0) {
    const auto seeds = sprouting_seeds(l0);
    for (int total = 0; total <= 3; ++total) {
      for (int bp = 0; bp <= total; ++bp) {
        const int wp = total - bp;
        const Integer formula = closedform::count_sprouting(l0, bp, wp);
        // Two colour layouts of the sprouted labels: black first, white first.
        for (int layout = 0; layout < 2; ++layout) {
          graphs::LabelSet b_prime;
          graphs::LabelSet w_prime;
          for (int v = 1; v <= total; ++v) {
            const bool black = layout == 0 ? v <= bp : v > wp;
            (black ? b_prime : w_prime).insert(v);
          }
          std::optional<Integer> first_count;
          for (const auto& seed : seeds) {
            const auto graphs_found = enumeration::enumerate_sprouting_graphs(seed, b_prime, w_prime);
            const Integer count(static_cast<unsigned long>(graphs_found.size()));
            rec.check_lazy(count == formula, [&] {
              return "sprouting census " + to_string(count) + " != " + to_string(formula) + " for seed " +
                     seed.to_string() + ", b'=" + std::to_string(bp) + ", w'=" + std::to_string(wp);
            });
            if (!first_count) first_count = count;
            rec.check(count == *first_count, "sprouting census depends on the seed at l0=" + std::to_string(l0));
            if (seed.size() + 2 * static_cast<std::size_t>(total) > 8) continue;
            // Recoverability: the seed plus the positions and labels of sprouted entries determine the route.
            std::set<std::vector<Label>> projections;
            for (const auto& g : graphs_found) {
              std::vector<Label> masked = g.vector();
              for (Label& v : masked) {
                if (v > total) v = 0;
              }
              projections.insert(std::move(masked));
            }
            rec.check(projections.size() == graphs_found.size(),
                      "sprouted routes collide after masking seed labels for seed " + seed.to_string());
          }
        }
      }
    }
  }
  // Brute force over all words for small routes.
  for (int l0 = 1; l0 <= std::min(max_l0, 3); ++l0) {
    for (const auto& seed : sprouting_seeds(l0)) {
      const int r0 = seed.max_label();
      for (int s = 0; 2 * (l0 + s) <= 8; ++s) {
        std::vector<Label> shifted = seed.vector();
        for (Label& v : shifted) v += s;
        std::map<std::set<Label>, std::set<std::vector<Label>>> by_black;
        for_each_word(r0 + s, 2 * (l0 + s), [&](std::span<const Label> word) {
          if (!covers(word, r0 + s)) return;
          std::vector<Label> trimmed(word.begin(), word.end());
          graphs::raw::trim_to_seed(trimmed);
          if (trimmed != shifted) return;
          std::set<Label> black;
          for (Label v : black_of(word)) {
            if (v <= s) black.insert(v);
          }
          by_black[black].emplace(word.begin(), word.end());
        });
        for (int mask = 0; mask < (1 << s); ++mask) {
          graphs::LabelSet b_prime;
          graphs::LabelSet w_prime;
          for (int v = 1; v <= s; ++v) ((mask >> (v - 1)) & 1 ? b_prime : w_prime).insert(v);
          std::set<std::vector<Label>> found;
          for (const auto& g : enumeration::enumerate_sprouting_graphs(seed, b_prime, w_prime)) found.insert(g.vector());
          rec.check(found == by_black[std::set<Label>(b_prime.begin(), b_prime.end())],
                    "sprouting enumeration differs from brute force for seed " + seed.to_string() +
                        " with " + std::to_string(s) + " sprouted labels");
        }
      }
    }
  }
  return rec.finish();
}

std::optional<Integer> ring_formula(const SeedClass& cls, int l, int b) {
  const int l0 = cls.ring_length;
  if (cls.kind == Kind::OneDRing) {
    if (l0 % 2 != 0 || l0 < 4) return std::nullopt;
    const int bp = b - l0 / 2;
    const int wp = l - b - l0 / 2;
    if (bp < 0 || wp < 0) return Integer(0);
    return closedform::count_ring_sprouts(closedform::RingKind::OneD, l0, bp, wp);
  }
  if (cls.kind == Kind::TwoDRing) {
    const int bp = b - (l0 + 1) / 2;
    const int wp = l - b - l0 / 2;
    if (bp < 0 || wp < 0) return Integer(0);
    return closedform::count_ring_sprouts(closedform::RingKind::TwoD, l0, bp, wp);
  }
  return std::nullopt;
}

/// Leaf-free routes of length 2 * l0 where every label occurs exactly twice.
template <typename Visit>
void for_each_twice_route(int l0, Visit visit) {
  std::vector<Label> route(static_cast<std::size_t>(2 * l0), 0);
  std::vector<int> used(static_cast<std::size_t>(l0) + 2, 0);
  std::function<void(std::size_t, int)> fill = [&](std::size_t t, int opened) {
    if (t == route.size()) {
      visit(std::span<const Label>(route));
      return;
    }
    for (Label v = 1; v <= opened; ++v) {
      if (used[v] != 1) continue;
      route[t] = v;
      ++used[v];
      fill(t + 1, opened);
      --used[v];
    }
    if (opened < l0) {
      route[t] = opened + 1;
      used[opened + 1] = 1;
      fill(t + 1, opened + 1);
      used[opened + 1] = 0;
    }
  };
  fill(0, 0);
}

SuiteResult rings(int max_l, const enumeration::EnumerationOptions& options) {
  Recorder rec("rings");
  for (int l = 1; l <= max_l; ++l) {
    for (int b = 1; b <= l; ++b) {
      const auto census = enumeration::census_by_seed(l, b, options);
      std::set<SeedClass> expected_classes;
      for (int l0 = 1; l0 <= l; ++l0) {
        for (const auto cls : {SeedClass::one_d(l0), SeedClass::two_d(l0)}) {
          const auto formula = ring_formula(cls, l, b);
          if (formula && *formula != 0) expected_classes.insert(cls);
        }
      }
      for (const auto& [cls, count] : census) expected_classes.insert(cls);
      for (const auto& cls : expected_classes) {
        const auto formula = ring_formula(cls, l, b);
        if (!formula) continue;
        const auto it = census.find(cls);
        const Integer found = it == census.end() ? Integer(0) : Integer(static_cast<long>(it->second));
        rec.check_lazy(found == *formula, [&] {
          return cls.to_string() + " census " + to_string(found) + " != " + to_string(*formula) + " at " + args({l, b});
        });
      }
    }
  }
  // Colourings along the ring.
  for (int l0 = 2; l0 <= 6; ++l0) {
    for_each_twice_route(l0, [&](std::span<const Label> route) {
      if (!graphs::raw::balanced_leaves(route).empty()) return;
      const SeedClass cls = graphs::raw::classify(route);
      if (cls.kind != Kind::OneDRing && cls.kind != Kind::TwoDRing) return;
      const Skeleton s(route);
      std::vector<Label> cycle{route[0]};
      Label prev = 0;
      while (static_cast<int>(cycle.size()) < l0) {
        const Label cur = cycle.back();
        Label next = 0;
        for (Label v : s.neighbours[cur]) {
          if (v != prev && std::find(cycle.begin(), cycle.end(), v) == cycle.end()) next = v;
        }
        if (next == 0) break;
        prev = cur;
        cycle.push_back(next);
      }
      rec.check_lazy(static_cast<int>(cycle.size()) == l0, [&] { return "ring skeleton is not a cycle: " + join(route); });
      const auto black = black_of(route);
      int black_pairs = 0;
      int white_pairs = 0;
      const int pairs = l0 == 2 ? 1 : l0;
      for (int t = 0; t < pairs; ++t) {
        const bool a = black.count(cycle[t]) > 0;
        const bool c = black.count(cycle[(t + 1) % l0]) > 0;
        black_pairs += a && c;
        white_pairs += !a && !c;
      }
      if (cls.kind == Kind::OneDRing && l0 % 2 == 0) {
        rec.check_lazy(black_pairs == 0 && white_pairs == 0,
                       [&] { return "one-directional ring colours do not alternate: " + join(route); });
      } else if (cls.kind == Kind::TwoDRing && l0 % 2 == 0) {
        rec.check_lazy(black_pairs == 0 && white_pairs == 0,
                       [&] { return "two-directional ring colours do not alternate: " + join(route); });
      } else if (cls.kind == Kind::TwoDRing) {
        rec.check_lazy(black_pairs == 1 && white_pairs == 0,
                       [&] { return "odd two-directional ring lacks its single black pair: " + join(route); });
      }
    });
  }
  return rec.finish();
}

SuiteResult doubles(int max_total, const enumeration::EnumerationOptions& options) {
  Recorder rec("doubles");
  for (int total = 2; total <= max_total; ++total) {
    for (int l1 = 1; l1 < total; ++l1) {
      const int l2 = total - l1;
      for (int b = 1; b <= total; ++b) {
        const auto census = enumeration::census_double(l1, l2, b, options);
        std::map<enumeration::DoubleCensusKey, Integer> expected;
        for (int l0 = 2; l0 <= total; l0 += 2) {
          const int half = l0 / 2;
          for (int b1p = 0; b1p <= l1 - half; ++b1p) {
            const int w1p = l1 - half - b1p;
            const int b2p = b - half - b1p;
            if (b2p < 0 || b2p > l2 - half) continue;
            const int w2p = l2 - half - b2p;
            for (const auto kind : {closedform::RingKind::OneD, closedform::RingKind::TwoD}) {
              const Integer count = closedform::count_double_ring_sprouts(kind, l0, b1p, b2p, w1p, w2p);
              if (count == 0) continue;
              const SeedClass cls = kind == closedform::RingKind::OneD ? SeedClass::double_one_d(l0)
                                                                       : SeedClass::double_two_d(l0);
              expected[{cls, b1p, b2p, w1p, w2p}] = count;
            }
          }
        }
        for (const auto& [key, count] : census) {
          if (key.seed_class.kind == Kind::DoubleOther) continue;
          const auto it = expected.find(key);
          const Integer want = it == expected.end() ? Integer(0) : it->second;
          rec.check_lazy(want == Integer(static_cast<long>(count)), [&] {
            return key.seed_class.to_string() + " double census " + std::to_string(count) + " != " + to_string(want) +
                   " at " + args({l1, l2, b, key.b1_prime, key.b2_prime, key.w1_prime, key.w2_prime});
          });
        }
        for (const auto& [key, want] : expected) {
          rec.check_lazy(census.count(key) > 0, [&] {
            return key.seed_class.to_string() + " double census missing, expected " + to_string(want) + " at " +
                   args({l1, l2, b, key.b1_prime, key.b2_prime, key.w1_prime, key.w2_prime});
          });
        }
      }
    }
  }
  return rec.finish();
}

SuiteResult graph_invariants(int max_n) {
  Recorder rec("graph-invariants");
  for (int n = 1; n <= max_n; ++n) {
    for_each_canonical_route(n, [&](const std::vector<Label>& route) {
      const std::span<const Label> view(route);
      const Skeleton s(view);
      bool degree_balanced = true;
      for (Label v = 1; v <= s.r; ++v) {
        int in = 0;
        int out = 0;
        for (Label u = 1; u <= s.r; ++u) {
          out += s.directed[v][u];
          in += s.directed[u][v];
        }
        degree_balanced = degree_balanced && in == out;
      }
      rec.check_lazy(degree_balanced, [&] { return "in-degree != out-degree in " + join(view); });

      const auto leaves = graphs::raw::balanced_leaves(view);
      if (n > 2) {
        for (Label v = 1; v <= s.r; ++v) {
          if (s.self_loop[v] || s.neighbours[v].size() != 1) continue;
          if (s.connection(v, *s.neighbours[v].begin()) >= 4) continue;
          rec.check_lazy(std::binary_search(leaves.begin(), leaves.end(), v),
                         [&] { return "skeleton leaf " + std::to_string(v) + " is not a balanced leaf in " + join(view); });
        }
      }
      if (n % 2 == 0) {
        const auto black = black_of(view);
        for (Label v : leaves) {
          std::vector<Label> smaller = route;
          graphs::raw::erase_leaf(smaller, v);
          auto expected = black;
          expected.erase(v);
          rec.check_lazy(black_of(smaller) == expected,
                         [&] { return "removing leaf " + std::to_string(v) + " changes colours in " + join(view); });
        }
      }
      const graphs::CircuitMultigraph g{graphs::Route(route)};
      const auto& once = g.seed();
      rec.check_lazy(once.seed().route() == once.route(), [&] { return "seed is not idempotent for " + join(view); });
      rec.check_lazy(graphs::raw::balanced_leaves(once.route().entries()).empty(),
                     [&] { return "seed keeps a balanced leaf for " + join(view); });
    });
  }
  return rec.finish();
}

std::optional<MomentPolynomial::Key> seed_weight_key(const SeedClass& cls) {
  if (cls.kind == Kind::TwoDRing) return cls.ring_length == 2 ? MomentPolynomial::key_of({4}) : 0;
  if (cls.kind == Kind::OneDRing && cls.ring_length % 2 == 0 && cls.ring_length >= 4) return 0;
  return std::nullopt;
}

MomentPolynomial double_weight_law(const SeedClass& cls) {
  MomentPolynomial out;
  if (cls.kind == Kind::DoubleTwoDRing && cls.ring_length == 2) {
    out.add(MomentPolynomial::key_of({4}), 1);
    out.add(0, -1);
  } else if ((cls.kind == Kind::DoubleOneDRing || cls.kind == Kind::DoubleTwoDRing) && cls.ring_length % 2 == 0 &&
             cls.ring_length >= 4) {
    out.add(0, 1);
  }
  return out;
}

SuiteResult weight_laws(int max_l) {
  Recorder rec("weight-laws");
  std::vector<Label> route;
  std::vector<Label> trimmed;
  for (int l = 1; l <= max_l; ++l) {
    for (int b = 1; b <= l; ++b) {
      enumeration::for_each_route_pair(l, l, b, [&](std::span<const Label> i, std::span<const Label> k) {
        zip(i, k, route);
        trimmed = route;
        graphs::raw::trim_to_seed(trimmed);
        const SeedClass cls = graphs::raw::classify(trimmed);
        const auto key = enumeration::reversed_monomial(route);
        const auto want = seed_weight_key(cls);
        rec.check_lazy(key == want, [&] { return "weight of " + join(route) + " breaks the law for " + cls.to_string(); });
      });
    }
  }
  // Covariance weights of doubles.
  std::vector<Label> first;
  std::vector<Label> second;
  for (int total = 2; total <= 4; ++total) {
    for (int l1 = 1; l1 < total; ++l1) {
      const int l2 = total - l1;
      for (int r = total; r <= 2 * total; ++r) {
        for (int b = 1; b <= std::min(total, r); ++b) {
          enumeration::for_each_double_route(l1, l2, r, b, [&](std::span<const Label> f, std::span<const Label> c) {
            MomentPolynomial weight;
            if (const auto joint = enumeration::reversed_monomial(f, c)) weight.add(*joint, 1);
            const auto a = enumeration::reversed_monomial(f);
            const auto d = enumeration::reversed_monomial(c);
            if (a && d) weight.add(MomentPolynomial::multiply(*a, *d), -1);
            MomentPolynomial want;
            SeedClass cls = SeedClass::double_other();
            if (r == total) {
              first.assign(f.begin(), f.end());
              second.assign(c.begin(), c.end());
              graphs::raw::trim_double_to_seed(first, second);
              cls = graphs::raw::classify_double(first, second);
              want = double_weight_law(cls);
            }
            rec.check_lazy(weight == want, [&] {
              return "covariance weight " + weight.to_string() + " of " + join(f) + "," + join(c) + " breaks the law for " +
                     cls.to_string();
            });
          });
        }
      }
    }
  }
  // Trimming a balanced leaf keeps the weight.
  for (int n = 2; n <= 10; n += 2) {
    for_each_canonical_route(n, [&](const std::vector<Label>& r) {
      const auto key = enumeration::reversed_monomial(r);
      for (Label v : graphs::raw::balanced_leaves(r)) {
        std::vector<Label> smaller = r;
        graphs::raw::erase_leaf(smaller, v);
        rec.check_lazy(enumeration::reversed_monomial(smaller) == key,
                       [&] { return "removing leaf " + std::to_string(v) + " changes the weight of " + join(r); });
      }
    });
  }
  return rec.finish();
}

int default_bound(const std::string& name) {
  if (name == "taylor") return 30;
  if (name == "appendix-d") return 20;
  if (name == "bipartite") return 6;
  if (name == "coefficients") return 8;
  if (name == "sum-identity") return 4;
  if (name == "oracle") return 6;
  if (name == "corollaries") return 4;
  if (name == "trees") return 5;
  if (name == "sprouting") return 3;
  if (name == "rings") return 5;
  if (name == "doubles") return 4;
  if (name == "graph-invariants") return 10;
  if (name == "weight-laws") return 5;
  throw std::invalid_argument("unknown suite: " + name);
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{
      "taylor",  "appendix-d", "bipartite", "coefficients", "sum-identity", "oracle",           "corollaries",
      "trees",   "sprouting",  "rings",     "doubles",      "graph-invariants", "weight-laws",
  };
  return names;
}

SuiteResult run_suite(const std::string& name, int max_l, const enumeration::EnumerationOptions& options) {
  const int bound = max_l > 0 ? max_l : default_bound(name);
  if (name == "taylor") return taylor(bound);
  if (name == "appendix-d") return appendix_d(bound);
  if (name == "bipartite") return bipartite(bound);
  if (name == "coefficients") return coefficients(bound, options);
  if (name == "sum-identity") return sum_identity(bound, options);
  if (name == "oracle") return oracle(bound, options);
  if (name == "corollaries") return corollaries(bound, options);
  if (name == "trees") return trees(bound);
  if (name == "sprouting") return sprouting(bound);
  if (name == "rings") return rings(bound, options);
  if (name == "doubles") return doubles(bound, options);
  if (name == "graph-invariants") return graph_invariants(bound);
  if (name == "weight-laws") return weight_laws(bound);
  throw std::invalid_argument("unknown suite: " + name);
}

std::map<DegreePair, std::int64_t> bipartite_forced_edge_census(int b, int w) {
  if (b < 0 || w < 0) throw std::invalid_argument("b and w must be non-negative");
  // Vertices 0..b form the first side, b+1..b+w+1 the second.
  const int n = b + w + 2;
  std::map<DegreePair, std::int64_t> out;
  const auto tally = [&](const std::vector<std::pair<int, int>>& edges) {
    bool has_forced = false;
    std::vector<long> degree(static_cast<std::size_t>(n), 0);
    for (const auto& [u, v] : edges) {
      if ((u <= b) == (v <= b)) return;
      if ((u == 0 && v == b + 1) || (v == 0 && u == b + 1)) has_forced = true;
      ++degree[u];
      ++degree[v];
    }
    if (!has_forced) return;
    DegreePair key{{degree.begin(), degree.begin() + b + 1}, {degree.begin() + b + 1, degree.end()}};
    ++out[key];
  };
  if (n == 2) {
    tally({{0, 1}});
    return out;
  }
  std::vector<int> code(static_cast<std::size_t>(n - 2), 0);
  std::vector<int> remaining(static_cast<std::size_t>(n));
  std::vector<std::pair<int, int>> edges;
  while (true) {
    std::fill(remaining.begin(), remaining.end(), 1);
    for (int c : code) ++remaining[c];
    edges.clear();
    for (int c : code) {
      int leaf = 0;
      while (remaining[leaf] != 1) ++leaf;
      edges.emplace_back(leaf, c);
      --remaining[leaf];
      --remaining[c];
    }
    int u = -1;
    for (int v = 0; v < n; ++v) {
      if (remaining[v] == 1) {
        if (u < 0) {
          u = v;
        } else {
          edges.emplace_back(u, v);
          break;
        }
      }
    }
    tally(edges);
    int t = n - 3;
    while (t >= 0 && code[t] == n - 1) code[t--] = 0;
    if (t < 0) break;
    ++code[t];
  }
  return out;
}

std::vector<std::vector<long>> compositions(long total, long parts) {
  std::vector<std::vector<long>> out;
  if (parts <= 0) return out;
  std::vector<long> current;
  std::function<void(long, long)> build = [&](long left, long slots) {
    if (slots == 1) {
      if (left >= 1) {
        current.push_back(left);
        out.push_back(current);
        current.pop_back();
      }
      return;
    }
    for (long first = 1; first <= left - (slots - 1); ++first) {
      current.push_back(first);
      build(left - first, slots - 1);
      current.pop_back();
    }
  };
  build(total, parts);
  return out;
}

void for_each_canonical_route(int n, const std::function<void(const std::vector<Label>&)>& visit) {
  if (n < 1) throw std::invalid_argument("route length must be positive");
  std::vector<Label> route(static_cast<std::size_t>(n), 1);
  std::function<void(std::size_t, int)> fill = [&](std::size_t t, int top) {
    if (t == route.size()) {
      visit(route);
      return;
    }
    for (Label v = 1; v <= top + 1; ++v) {
      route[t] = v;
      fill(t + 1, std::max(top, v));
    }
  };
  fill(1, 1);
}

std::vector<graphs::Route> sprouting_seeds(int l0) {
  if (l0 < 1) throw std::invalid_argument("seed length must be positive");
  std::vector<graphs::Route> out;
  for_each_canonical_route(2 * l0, [&](const std::vector<Label>& route) {
    if (graphs::raw::balanced_leaves(route).empty()) out.emplace_back(route);
  });
  return out;
}

}  // namespace tracegraph::verify
