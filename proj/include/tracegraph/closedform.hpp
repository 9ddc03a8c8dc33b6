#ifndef TRACEGRAPH_CLOSEDFORM_HPP
#define TRACEGRAPH_CLOSEDFORM_HPP

#include <string>
#include <vector>

#include "tracegraph/exact.hpp"
#include "tracegraph/weights.hpp"

namespace tracegraph::closedform {

using weights::AffineAlpha;

/// Binomial coefficient; 0 when k < 0 or k > n. Throws for n < 0.
Integer binom(long n, long k);

/// n! / (k_1! ... k_j!) with n = sum k_i; 0 if any k_i < 0.
Integer multinomial(long n, const std::vector<long>& parts);

// Mean and covariance coefficients. All require 1 <= b <= l (resp. l1 + l2).
Integer A_coeff(long l, long b);
Integer B_coeff(long l, long b);
Integer C_coeff(long l1, long l2, long b);
Integer D_coeff(long l1, long l2, long b);

struct ExpansionTerm {
  long b;
  Integer tree_part;             // multiplies C(p,b) C(n-b,l+1-b) / n^l
  AffineAlpha ring_part;         // multiplies C(p,b) C(n-b,l-b) / n^l
  Rational tree_multiplier;
  Rational ring_multiplier;
  std::string error_order;
};

struct MeanExpansion {
  AffineAlpha value;
  std::vector<ExpansionTerm> terms;
};

struct CovExpansionTerm {
  long b;
  AffineAlpha coeff;             // C(l1,l2,b) + (alpha - 3) D(l1,l2,b)
  Rational multiplier;           // C(p,b) C(n-b,l1+l2-b) / n^{l1+l2}
  std::string error_order;
};

struct CovExpansion {
  AffineAlpha value;
  std::vector<CovExpansionTerm> terms;
};

/// Two leading orders of E[tr S^l]; requires 1 <= p <= n.
MeanExpansion theorem1_mean(long l, long p, long n);
/// Leading order of Cov[tr S^l1, tr S^l2]; requires 1 <= p <= n.
CovExpansion theorem2_cov(long l1, long l2, long p, long n);

/// Polynomial in y with coefficients indexed by power.
template <typename Coefficient>
struct PolynomialInY {
  std::vector<Coefficient> coefficients;
};

/// n * leading(y) + correction(y) at y = p / n.
struct MeanRatioExpansion {
  PolynomialInY<Rational> leading;       // coefficient of n * y^b
  PolynomialInY<AffineAlpha> correction; // coefficient of y^b
  Rational y;
  AffineAlpha value;                     // exact at y = p/n
  double approximate(double alpha) const;
};

MeanRatioExpansion corollary_mean_ratio(long l, long p, long n);
AffineAlpha corollary_mean_const_p(long l, long p, long n);

struct CovRatioExpansion {
  PolynomialInY<AffineAlpha> polynomial;
  Rational y;
  AffineAlpha value;
  double approximate(double alpha) const;
};

CovRatioExpansion corollary_cov_ratio(long l1, long l2, long p, long n);
AffineAlpha corollary_cov_const_p(long l1, long l2, long p, long n);

// Counting formulas.
Integer count_colored_trees(long l, long b);
/// Balanced trees realizing one tree shape, from its vertex degrees.
Integer count_trees_per_adjacency(const std::vector<long>& degrees);
Integer count_sprouting(long l0, long b_prime, long w_prime);

enum class RingKind { OneD, TwoD };
Integer count_ring_sprouts(RingKind kind, long l0, long b_prime, long w_prime);
Integer count_double_ring_sprouts(RingKind kind, long l0, long b1p, long b2p, long w1p, long w2p);

/// Spanning trees of K_{b+1,w+1} with degrees d on the first side, e on the
/// second, containing the edge between the first vertex of each side.
Integer count_bipartite_forced_edge(long b, long w, const std::vector<long>& d, const std::vector<long>& e);

bool taylor_identity_check(long l, long b);

/// Limiting spectral moments and the limiting mean/covariance corrections.
Rational mp_moment(long l, const Rational& y);
Rational bs_mean(long l, const Rational& y);
/// Exact coefficients of bs_mean in y, from expanding (1 - s)^{2l} + (1 + s)^{2l}.
std::vector<Rational> bs_mean_coefficients(long l);
Rational bs_cov_coefficient(long l1, long l2, long b);

}  // namespace tracegraph::closedform

#endif  // TRACEGRAPH_CLOSEDFORM_HPP
