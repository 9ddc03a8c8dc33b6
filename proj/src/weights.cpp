#include "tracegraph/weights.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace tracegraph::weights {

MomentSequence::MomentSequence(std::vector<Rational> moments) : moments_(std::move(moments)) {
  if (moments_.size() < 3) throw std::invalid_argument("moment sequence needs m_0, m_1, m_2");
  if (moments_[0] != 1) throw std::invalid_argument("moment sequence requires m_0 = 1");
  if (moments_[1] != 0) throw std::invalid_argument("moment sequence requires m_1 = 0");
  if (moments_[2] != 1) throw std::invalid_argument("moment sequence requires m_2 = 1");
}

MomentSequence MomentSequence::parse(std::string_view text) {
  std::vector<Rational> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    out.push_back(parse_rational(text.substr(pos, end - pos)));
    pos = end + 1;
  }
  return MomentSequence(std::move(out));
}

const Rational& MomentSequence::at(int k) const {
  if (k < 0 || k > max_order()) {
    throw std::out_of_range("moment index out of range: " + std::to_string(k));
  }
  return moments_[static_cast<std::size_t>(k)];
}

bool MomentSequence::fourth_moment_plausible() const { return max_order() < 4 || moments_[4] >= 1; }

Distribution parse_distribution(std::string_view tag) {
  std::string lower(tag);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "gaussian" || lower == "normal") return Distribution::Gaussian;
  if (lower == "rademacher") return Distribution::Rademacher;
  if (lower == "uniform" || lower == "uniform-scaled" || lower == "uniformscaled") {
    return Distribution::UniformScaled;
  }
  throw std::invalid_argument("unknown distribution tag: " + std::string(tag));
}

std::string to_string(Distribution d) {
  switch (d) {
    case Distribution::Gaussian: return "gaussian";
    case Distribution::Rademacher: return "rademacher";
    case Distribution::UniformScaled: return "uniform";
  }
  return "gaussian";
}

MomentSequence preset_moments(Distribution d, int max_order) {
  if (max_order < 4) throw std::invalid_argument("preset moments need K >= 4");
  std::vector<Rational> m(static_cast<std::size_t>(max_order) + 1, Rational(0));
  m[0] = 1;
  for (int k = 2; k <= max_order; k += 2) {
    const int half = k / 2;
    switch (d) {
      case Distribution::Gaussian:
        m[k] = m[k - 2] * (k - 1);
        break;
      case Distribution::Rademacher:
        m[k] = 1;
        break;
      case Distribution::UniformScaled: {
        // E[(sqrt(3) U)^k] = 3^{k/2} / (k + 1) for U uniform on [-1, 1].
        Integer pow3;
        mpz_ui_pow_ui(pow3.get_mpz_t(), 3, static_cast<unsigned long>(half));
        m[k] = ratio(pow3, k + 1);
        break;
      }
    }
  }
  return MomentSequence(std::move(m));
}

namespace {

Rational product_of_moments(const graphs::AdjacencyMatrix& a, const MomentSequence& m) {
  const int r = a.size();
  for (int x = 1; x <= r; ++x) {
    for (int y = 1; y <= r; ++y) m.at(a(x, y));
  }
  Rational out = 1;
  for (int x = 1; x <= r; ++x) {
    for (int y = 1; y <= r; ++y) {
      out *= m.at(a(x, y));
      if (out == 0) return out;
    }
  }
  return out;
}

graphs::AdjacencyMatrix reversed_on(const graphs::Route& route, int r) {
  graphs::AdjacencyMatrix a(r);
  const std::size_t n = route.size();
  for (std::size_t k = 0; k < n; ++k) {
    const graphs::Label tail = route[k];
    const graphs::Label head = route[(k + 1) % n];
    if (k % 2 == 0) {
      ++a.at(tail, head);
    } else {
      ++a.at(head, tail);
    }
  }
  return a;
}

}  // namespace

Rational weight(const graphs::CircuitMultigraph& g, const MomentSequence& m) {
  return product_of_moments(graphs::reverse_adjacency(g), m);
}

Rational covariance_weight(const graphs::DoubleCircuitMultigraph& d, const MomentSequence& m) {
  const int r = d.vertex_count();
  const auto first = reversed_on(d.first(), r);
  const auto second = reversed_on(d.second(), r);
  auto joint = first;
  joint += second;
  return product_of_moments(joint, m) - product_of_moments(first, m) * product_of_moments(second, m);
}

}  // namespace tracegraph::weights
