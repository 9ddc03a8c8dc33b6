#ifndef TRACEGRAPH_WEIGHTS_HPP
#define TRACEGRAPH_WEIGHTS_HPP

#include <string>
#include <string_view>
#include <vector>

#include "tracegraph/exact.hpp"
#include "tracegraph/graphs.hpp"

namespace tracegraph::weights {

/// Exact entry moments m_0..m_K with m_0 = 1, m_1 = 0, m_2 = 1.
class MomentSequence {
 public:
  explicit MomentSequence(std::vector<Rational> moments);

  /// Parses "1,0,1,0,3" (entries may be "a/b").
  static MomentSequence parse(std::string_view text);

  /// Throws std::out_of_range past max_order().
  const Rational& at(int k) const;
  int max_order() const { return static_cast<int>(moments_.size()) - 1; }
  /// The fourth moment; throws when K < 4.
  const Rational& alpha() const { return at(4); }
  /// False when m_4 < 1, which no real distribution allows.
  bool fourth_moment_plausible() const;
  const std::vector<Rational>& values() const { return moments_; }

 private:
  std::vector<Rational> moments_;
};

enum class Distribution { Gaussian, Rademacher, UniformScaled };

/// "gaussian", "rademacher", "uniform" (also "uniform-scaled").
Distribution parse_distribution(std::string_view tag);
std::string to_string(Distribution d);

/// Exact moments of the named distribution up to order K >= 4.
MomentSequence preset_moments(Distribution d, int max_order);

/// c0 + c1 * alpha.
struct AffineAlpha {
  Rational c0;
  Rational c1;

  Rational evaluate(const Rational& alpha) const { return c0 + c1 * alpha; }

  AffineAlpha& operator+=(const AffineAlpha& o) {
    c0 += o.c0;
    c1 += o.c1;
    return *this;
  }
  AffineAlpha& operator-=(const AffineAlpha& o) {
    c0 -= o.c0;
    c1 -= o.c1;
    return *this;
  }
  AffineAlpha& operator*=(const Rational& s) {
    c0 *= s;
    c1 *= s;
    return *this;
  }
  friend AffineAlpha operator+(AffineAlpha a, const AffineAlpha& b) { return a += b; }
  friend AffineAlpha operator-(AffineAlpha a, const AffineAlpha& b) { return a -= b; }
  friend AffineAlpha operator*(AffineAlpha a, const Rational& s) { return a *= s; }
  friend AffineAlpha operator*(const Rational& s, AffineAlpha a) { return a *= s; }
  friend bool operator==(const AffineAlpha& a, const AffineAlpha& b) {
    return a.c0 == b.c0 && a.c1 == b.c1;
  }

  /// (alpha - shift) scaled by s, e.g. alpha_minus(3) = alpha - 3.
  static AffineAlpha alpha_minus(const Rational& shift) { return {-shift, 1}; }
  static AffineAlpha constant(const Rational& c) { return {c, 0}; }
};

/// Product over all cells of m[A(R(g))].
Rational weight(const graphs::CircuitMultigraph& g, const MomentSequence& m);

/// W(combined) - W(first) * W(second).
Rational covariance_weight(const graphs::DoubleCircuitMultigraph& d, const MomentSequence& m);

}  // namespace tracegraph::weights

#endif  // TRACEGRAPH_WEIGHTS_HPP
