#include "tracegraph/closedform.hpp"

#include <stdexcept>

namespace tracegraph::closedform {

namespace {

constexpr long kTableRows = 128;

const std::vector<std::vector<Integer>>& pascal() {
  static const std::vector<std::vector<Integer>> table = [] {
    std::vector<std::vector<Integer>> t(kTableRows);
    for (long n = 0; n < kTableRows; ++n) {
      t[n].resize(static_cast<std::size_t>(n) + 1);
      t[n][0] = 1;
      t[n][n] = 1;
      for (long k = 1; k < n; ++k) t[n][k] = t[n - 1][k - 1] + t[n - 1][k];
    }
    return t;
  }();
  return table;
}

const Integer& zero() {
  static const Integer z = 0;
  return z;
}

/// Table lookup for the hot loops.
const Integer& C(long n, long k) {
  if (n < 0 || k < 0 || k > n) return zero();
  if (n >= kTableRows) throw std::out_of_range("arguments exceed the binomial table");
  return pascal()[n][k];
}

Rational power(const Rational& y, long e) {
  Rational out = 1;
  for (long i = 0; i < e; ++i) out *= y;
  return out;
}

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

void require_range(bool ok, const char* message) {
  if (!ok) throw std::out_of_range(message);
}

Integer exact_half(const Integer& x) {
  if (mpz_divisible_ui_p(x.get_mpz_t(), 2) == 0) throw std::logic_error("expected an even integer");
  Integer out;
  mpz_divexact_ui(out.get_mpz_t(), x.get_mpz_t(), 2);
  return out;
}

std::string error_order(long b) {
  return "O(p^" + std::to_string(b) + "/n^" + std::to_string(b + 1) + ")";
}

Rational n_power(long n, long e) {
  Integer out;
  mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(e));
  return Rational(out);
}

}  // namespace

Integer binom(long n, long k) {
  if (n < 0) throw std::invalid_argument("binom: negative upper index");
  if (k < 0 || k > n) return 0;
  if (n < kTableRows) return pascal()[n][k];
  Integer out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return out;
}

Integer multinomial(long n, const std::vector<long>& parts) {
  long sum = 0;
  for (long k : parts) {
    if (k < 0) return 0;
    sum += k;
  }
  if (sum != n) return 0;
  Integer out = factorial(n);
  for (long k : parts) out /= factorial(k);
  return out;
}

Integer A_coeff(long l, long b) {
  require_range(1 <= b && b <= l, "A_coeff requires 1 <= b <= l");
  const Integer inner = binom(2 * l, 2 * b) + (2 * b - 1) * binom(l, b) * binom(l, b);
  return exact_half(factorial(b) * factorial(l - b) * inner);
}

Integer B_coeff(long l, long b) {
  require_range(1 <= b && b <= l, "B_coeff requires 1 <= b <= l");
  if (b == l) return 0;
  return factorial(b) * factorial(l - b) * binom(l, b - 1) * binom(l, b + 1);
}

Integer C_coeff(long l1, long l2, long b) {
  require_range(l1 >= 1 && l2 >= 1 && 1 <= b && b <= l1 + l2, "C_coeff requires 1 <= b <= l1 + l2");
  Integer sum = 0;
  Integer inner;
  for (long k = 0; k <= b; ++k) {
    const Integer outer = C(l1, k) * C(l2, b - k);
    if (outer == 0) continue;
    inner = 0;
    for (long m = 1; m <= b - k; ++m) inner += m * C(l1, k + m) * C(l2, b - m - k);
    sum += outer * inner;
  }
  return 2 * factorial(b) * factorial(l1 + l2 - b) * sum;
}

Integer D_coeff(long l1, long l2, long b) {
  require_range(l1 >= 1 && l2 >= 1 && 1 <= b && b <= l1 + l2, "D_coeff requires 1 <= b <= l1 + l2");
  Integer sum = 0;
  for (long k = 0; k <= b - 1; ++k) {
    sum += C(l1, k) * C(l1, k + 1) * C(l2, b - 1 - k) * C(l2, b - k);
  }
  return factorial(b) * factorial(l1 + l2 - b) * sum;
}

MeanExpansion theorem1_mean(long l, long p, long n) {
  require(l >= 1, "theorem1_mean requires l >= 1");
  require(1 <= p && p <= n, "theorem1_mean requires 1 <= p <= n");
  MeanExpansion out{{0, 0}, {}};
  const Rational scale = n_power(n, l);
  for (long b = 1; b <= std::min(l, p); ++b) {
    ExpansionTerm term;
    term.b = b;
    term.tree_part = factorial(l) * binom(l - 1, b - 1);
    const Integer ring_b = B_coeff(l, b);
    term.ring_part = AffineAlpha{Rational(A_coeff(l, b) - 3 * ring_b), Rational(ring_b)};
    term.tree_multiplier = Rational(binom(p, b) * binom(n - b, l + 1 - b)) / scale;
    term.ring_multiplier = Rational(binom(p, b) * binom(n - b, l - b)) / scale;
    term.error_order = error_order(b);
    out.value += AffineAlpha::constant(term.tree_multiplier * Rational(term.tree_part));
    out.value += term.ring_part * term.ring_multiplier;
    out.terms.push_back(std::move(term));
  }
  return out;
}

CovExpansion theorem2_cov(long l1, long l2, long p, long n) {
  require(l1 >= 1 && l2 >= 1, "theorem2_cov requires l1, l2 >= 1");
  require(1 <= p && p <= n, "theorem2_cov requires 1 <= p <= n");
  CovExpansion out{{0, 0}, {}};
  const long total = l1 + l2;
  const Rational scale = n_power(n, total);
  for (long b = 1; b <= std::min(total, p); ++b) {
    CovExpansionTerm term;
    term.b = b;
    const Integer d = D_coeff(l1, l2, b);
    term.coeff = AffineAlpha{Rational(C_coeff(l1, l2, b) - 3 * d), Rational(d)};
    term.multiplier = Rational(binom(p, b) * binom(n - b, total - b)) / scale;
    term.error_order = error_order(b);
    out.value += term.coeff * term.multiplier;
    out.terms.push_back(std::move(term));
  }
  return out;
}

double MeanRatioExpansion::approximate(double alpha) const { return value.c0.get_d() + value.c1.get_d() * alpha; }

double CovRatioExpansion::approximate(double alpha) const { return value.c0.get_d() + value.c1.get_d() * alpha; }

MeanRatioExpansion corollary_mean_ratio(long l, long p, long n) {
  require(l >= 1 && p >= 1 && n >= 1, "corollary_mean_ratio requires l, p, n >= 1");
  MeanRatioExpansion out;
  out.y = ratio(p, n);
  out.leading.coefficients.assign(static_cast<std::size_t>(l) + 1, Rational(0));
  out.correction.coefficients.assign(static_cast<std::size_t>(l) + 1, AffineAlpha{0, 0});
  for (long b = 1; b <= l; ++b) {
    out.leading.coefficients[b] = ratio(binom(l, b - 1) * binom(l - 1, b - 1), b);
  }
  for (long b = 1; b <= l - 1; ++b) {
    const Rational half_diff = Rational(binom(2 * l, 2 * b) - binom(l, b) * binom(l, b)) / 2;
    const Rational fourth = binom(l, b - 1) * binom(l, b + 1);
    out.correction.coefficients[b] = AffineAlpha{half_diff - 3 * fourth, fourth};
  }
  out.value = AffineAlpha{0, 0};
  for (long b = 1; b <= l; ++b) {
    const Rational yb = power(out.y, b);
    out.value += AffineAlpha::constant(Rational(n) * out.leading.coefficients[b] * yb);
    out.value += out.correction.coefficients[b] * yb;
  }
  return out;
}

AffineAlpha corollary_mean_const_p(long l, long p, long n) {
  require(l >= 1 && p >= 1 && n >= 1, "corollary_mean_const_p requires l, p, n >= 1");
  const Rational front = ratio(p * l, 2 * n);
  AffineAlpha out{Rational(p), 0};
  out += AffineAlpha{front * (l * p - 2 * l - p + 2), front * (l - 1)};
  return out;
}

CovRatioExpansion corollary_cov_ratio(long l1, long l2, long p, long n) {
  require(l1 >= 1 && l2 >= 1 && p >= 1 && n >= 1, "corollary_cov_ratio requires positive arguments");
  const long total = l1 + l2;
  CovRatioExpansion out;
  out.y = ratio(p, n);
  out.polynomial.coefficients.assign(static_cast<std::size_t>(total) + 1, AffineAlpha{0, 0});
  out.value = AffineAlpha{0, 0};
  for (long b = 1; b <= total; ++b) {
    const Integer d = D_coeff(l1, l2, b);
    AffineAlpha coeff{Rational(C_coeff(l1, l2, b) - 3 * d), Rational(d)};
    coeff *= Rational(1) / Rational(factorial(b) * factorial(total - b));
    out.polynomial.coefficients[b] = coeff;
    out.value += coeff * power(out.y, b);
  }
  return out;
}

AffineAlpha corollary_cov_const_p(long l1, long l2, long p, long n) {
  require(l1 >= 1 && l2 >= 1 && p >= 1 && n >= 1, "corollary_cov_const_p requires positive arguments");
  const Rational lead = ratio(p * l1 * l2, n);
  const Rational next = Rational(p * l1 * l2) / n_power(n, 2);
  // lead (alpha - 1) + next [(p-1)(l1-1)(l2-1) - (alpha - 1) l1 l2]
  AffineAlpha out = lead * AffineAlpha::alpha_minus(1);
  out += next * AffineAlpha::constant((p - 1) * (l1 - 1) * (l2 - 1));
  out -= (next * (l1 * l2)) * AffineAlpha::alpha_minus(1);
  return out;
}

Integer count_colored_trees(long l, long b) {
  require(l >= 1, "count_colored_trees requires l >= 1");
  if (b < 1 || b > l) return 0;
  return factorial(l) * binom(l - 1, b - 1);
}

Integer count_trees_per_adjacency(const std::vector<long>& degrees) {
  require(degrees.size() >= 2, "a tree needs at least two vertices");
  const long l = static_cast<long>(degrees.size()) - 1;
  long sum = 0;
  for (long d : degrees) {
    require(d >= 1, "tree degrees must be positive");
    sum += d;
  }
  require(sum == 2 * l, "degree sum must equal 2l");
  Integer out = 2 * l;
  for (long d : degrees) out *= factorial(d - 1);
  return out;
}

Integer count_sprouting(long l0, long b_prime, long w_prime) {
  require(l0 >= 1 && b_prime >= 0 && w_prime >= 0, "count_sprouting requires l0 >= 1, b', w' >= 0");
  const Integer top = factorial(l0 + b_prime + w_prime);
  return top * top / (factorial(l0 + b_prime) * factorial(l0 + w_prime));
}

Integer count_ring_sprouts(RingKind kind, long l0, long b_prime, long w_prime) {
  require(b_prime >= 0 && w_prime >= 0, "sprouted counts must be non-negative");
  const long l = l0 + b_prime + w_prime;
  if (kind == RingKind::OneD) {
    require(l0 >= 4 && l0 % 2 == 0, "one-directional ring counts need even l0 >= 4");
    const long b = b_prime + l0 / 2;
    const long w = w_prime + l0 / 2;
    return factorial(b) * factorial(w) * binom(l, b_prime) * binom(l, w_prime);
  }
  require(l0 >= 1, "two-directional ring counts need l0 >= 1");
  const long b = b_prime + (l0 + 1) / 2;
  const long w = w_prime + l0 / 2;
  // At l0 = 2 the rotations of the ring coincide pairwise.
  const long rotations = (l0 == 2) ? 1 : l0;
  return rotations * factorial(b) * factorial(w) * binom(l, b_prime) * binom(l, w_prime);
}

Integer count_double_ring_sprouts(RingKind kind, long l0, long b1p, long b2p, long w1p, long w2p) {
  require(l0 >= 2 && l0 % 2 == 0, "double ring counts need even l0");
  require(b1p >= 0 && b2p >= 0 && w1p >= 0 && w2p >= 0, "sprouted counts must be non-negative");
  if (kind == RingKind::OneD && l0 < 4) return 0;
  const long half = l0 / 2;
  const long l1 = half + b1p + w1p;
  const long l2 = half + b2p + w2p;
  const long b = half + b1p + b2p;
  const long w = half + w1p + w2p;
  return half * factorial(b) * factorial(w) * binom(l1, b1p) * binom(l1, w1p) * binom(l2, b2p) *
         binom(l2, w2p);
}

Integer count_bipartite_forced_edge(long b, long w, const std::vector<long>& d, const std::vector<long>& e) {
  require(b >= 0 && w >= 0, "b and w must be non-negative");
  require(static_cast<long>(d.size()) == b + 1, "d must list b + 1 degrees");
  require(static_cast<long>(e.size()) == w + 1, "e must list w + 1 degrees");
  long sum_d = 0;
  long sum_e = 0;
  std::vector<long> d_minus;
  std::vector<long> e_minus;
  for (long x : d) {
    require(x >= 1, "degrees must be positive");
    sum_d += x;
    d_minus.push_back(x - 1);
  }
  for (long x : e) {
    require(x >= 1, "degrees must be positive");
    sum_e += x;
    e_minus.push_back(x - 1);
  }
  require(sum_d == b + w + 1 && sum_e == b + w + 1, "degree sums must equal b + w + 1");
  const Integer trees = multinomial(b, e_minus) * multinomial(w, d_minus);
  if (b == 0 || w == 0) return trees;
  const Rational factor = 1 - ratio((b - e[0] + 1) * (w - d[0] + 1), b * w);
  Rational out = Rational(trees) * factor;
  out.canonicalize();
  if (out.get_den() != 1) throw std::logic_error("non-integral spanning tree count");
  return out.get_num();
}

bool taylor_identity_check(long l, long b) {
  require_range(1 <= b && b < l, "taylor_identity_check requires 1 <= b < l");
  Integer lhs = 0;
  for (long m = 1; m <= std::min(b, l - b + 1); ++m) {
    lhs += (2 * m - 1) * binom(l, b - m) * binom(l, b + m - 1);
  }
  for (long m = 1; m <= std::min(b, l - b); ++m) {
    lhs += (2 * m + 1) * binom(l, b - m) * binom(l, b + m);
  }
  const Integer twice_rhs = binom(2 * l, 2 * b) + (2 * b - 1) * binom(l, b) * binom(l, b);
  return 2 * lhs == twice_rhs;
}

Rational mp_moment(long l, const Rational& y) {
  require(l >= 1, "mp_moment requires l >= 1");
  Rational out = 0;
  for (long b = 1; b <= l; ++b) {
    out += power(y, b - 1) * ratio(binom(l, b - 1) * binom(l - 1, b - 1), b);
  }
  out.canonicalize();
  return out;
}

std::vector<Rational> bs_mean_coefficients(long l) {
  require(l >= 1, "bs_mean requires l >= 1");
  // Coefficients of (1 + s)^{2l} by repeated multiplication; (1 - s)^{2l}
  // has the same even coefficients and opposite odd ones.
  std::vector<Integer> plus{1};
  for (long i = 0; i < 2 * l; ++i) {
    std::vector<Integer> next(plus.size() + 1, 0);
    for (std::size_t j = 0; j < plus.size(); ++j) {
      next[j] += plus[j];
      next[j + 1] += plus[j];
    }
    plus = std::move(next);
  }
  std::vector<Rational> out(static_cast<std::size_t>(l) + 1, Rational(0));
  for (long j = 0; j <= l; ++j) {
    // 1/4 ((1-s)^{2l} + (1+s)^{2l}) keeps 1/2 of each even coefficient.
    out[j] = ratio(plus[2 * j] - binom(l, j) * binom(l, j), 2);
  }
  return out;
}

Rational bs_mean(long l, const Rational& y) {
  const auto coeffs = bs_mean_coefficients(l);
  Rational out = 0;
  for (std::size_t j = coeffs.size(); j-- > 0;) out = out * y + coeffs[j];
  out.canonicalize();
  return out;
}

Rational bs_cov_coefficient(long l1, long l2, long b) {
  require_range(l1 >= 1 && l2 >= 1 && 1 <= b && b <= l1 + l2, "bs_cov_coefficient requires 1 <= b <= l1 + l2");
  const long shift = l1 + l2 - b;
  Integer sum = 0;
  Integer inner;
  for (long k1 = 0; k1 <= l1 - 1; ++k1) {
    for (long k2 = 0; k2 <= l2; ++k2) {
      if (k1 + k2 < shift) continue;
      inner = 0;
      for (long m = 1; m <= l1 - k1; ++m) {
        inner += m * C(2 * l1 - 1 - (k1 + m), l1 - 1) * C(2 * l2 - 1 - k2 + m, l2 - 1);
      }
      Integer term = C(l1, k1) * C(l2, k2) * C(k1 + k2, shift) * inner;
      if ((k1 + k2 - shift) % 2 != 0) term = -term;
      sum += term;
    }
  }
  return Rational(2 * sum);
}

}  // namespace tracegraph::closedform
