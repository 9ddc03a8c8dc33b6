#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <ctime>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tracegraph/closedform.hpp"
#include "tracegraph/enumeration.hpp"
#include "tracegraph/exact.hpp"
#include "tracegraph/graphs.hpp"
#include "tracegraph/montecarlo.hpp"
#include "tracegraph/verify.hpp"
#include "tracegraph/weights.hpp"

namespace {

using nlohmann::json;
using namespace tracegraph;

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kVerificationFailed = 2;

struct Common {
  std::string format = "json";
  bool no_timestamp = false;
  bool allow_large = false;
  unsigned threads = 0;

  enumeration::EnumerationOptions options() const { return {threads, allow_large}; }
  bool csv() const { return format == "csv"; }
};

/// --alpha, --dist and --moments; at most one may be given.
struct MomentSource {
  std::string alpha;
  std::string dist;
  std::string moments;

  void attach(CLI::App* sub) {
    auto* a = sub->add_option("--alpha", alpha, "fourth moment of the entries as a rational, e.g. 3 or 9/5");
    auto* d = sub->add_option("--dist", dist, "entry distribution: gaussian, rademacher or uniform");
    auto* m = sub->add_option("--moments", moments, "moment sequence m0,m1,...,mK with m0=1, m1=0, m2=1");
    a->excludes(d)->excludes(m);
    d->excludes(m);
  }

  bool given() const { return !alpha.empty() || !dist.empty() || !moments.empty(); }

  std::optional<Rational> alpha_value() const {
    if (!alpha.empty()) return parse_rational(alpha);
    if (!dist.empty()) return weights::preset_moments(weights::parse_distribution(dist), 4).alpha();
    if (!moments.empty()) return weights::MomentSequence::parse(moments).alpha();
    return std::nullopt;
  }

  /// Full moments up to `order`. A bare --alpha suffices only when order <= 4,
  /// since no monomial of total degree 4 contains m_3 without m_1.
  weights::MomentSequence sequence(int order) const {
    if (!dist.empty()) return weights::preset_moments(weights::parse_distribution(dist), std::max(4, order));
    if (!moments.empty()) {
      auto m = weights::MomentSequence::parse(moments);
      if (m.max_order() < order) {
        throw std::invalid_argument("--moments must list moments up to order " + std::to_string(order));
      }
      return m;
    }
    if (!alpha.empty()) {
      if (order > 4) {
        throw std::invalid_argument("--alpha determines only m4; use --dist or --moments for order " +
                                    std::to_string(order));
      }
      return weights::MomentSequence({1, 0, 1, 0, parse_rational(alpha)});
    }
    throw std::invalid_argument("one of --alpha, --dist or --moments is required");
  }
};

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buffer;
}

void emit(json out, const Common& common) {
  if (!common.no_timestamp) out["timestamp"] = timestamp();
  std::cout << out.dump(2) << "\n";
}

json affine_json(const weights::AffineAlpha& a) { return {{"c0", to_string(a.c0)}, {"c1", to_string(a.c1)}}; }

json value_or_null(const weights::AffineAlpha& a, const std::optional<Rational>& alpha) {
  if (!alpha) return nullptr;
  return to_string(a.evaluate(*alpha));
}

json approx_or_null(const weights::AffineAlpha& a, const std::optional<Rational>& alpha) {
  if (!alpha) return nullptr;
  return to_double(a.evaluate(*alpha));
}

std::string csv_cell(const json& j) {
  if (j.is_null()) return "";
  if (j.is_string()) return j.get<std::string>();
  return j.dump();
}

void emit_csv(const std::vector<std::string>& header, const std::vector<std::vector<json>>& rows) {
  for (std::size_t c = 0; c < header.size(); ++c) std::cout << (c ? "," : "") << header[c];
  std::cout << "\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) std::cout << (c ? "," : "") << csv_cell(row[c]);
    std::cout << "\n";
  }
}

Rational scale_power(long p, long n, long power) {
  Rational out = 1;
  for (long t = 0; t < power; ++t) out *= ratio(p, n);
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const int v = std::stoi(item, &used);
    if (used != item.size()) throw std::invalid_argument("not an integer: " + item);
    out.push_back(v);
  }
  return out;
}

graphs::LabelSet parse_label_set(const std::string& text) {
  const auto values = parse_int_list(text);
  return {values.begin(), values.end()};
}

// ------------------------------------------------------------ closed forms

struct ClosedArgs {
  long l = 0;
  long l1 = 0;
  long l2 = 0;
  long p = 0;
  long n = 0;
  std::string form = "theorem";
  MomentSource source;
};

int run_mean_closed(const ClosedArgs& a, const Common& common) {
  const bool transposed = a.p > a.n;
  const long p = transposed ? a.n : a.p;
  const long n = transposed ? a.p : a.n;
  const Rational scale = transposed ? scale_power(a.p, a.n, a.l) : Rational(1);
  const auto alpha = a.source.alpha_value();
  json out{{"command", "mean-closed"}, {"l", a.l}, {"p", a.p}, {"n", a.n}, {"form", a.form}, {"transposed", transposed}};
  out["scale"] = to_string(scale);
  out["alpha"] = alpha ? json(to_string(*alpha)) : json(nullptr);
  weights::AffineAlpha value;
  std::vector<std::vector<json>> rows;
  if (a.form == "theorem") {
    const auto e = closedform::theorem1_mean(a.l, p, n);
    value = e.value * scale;
    out["terms"] = json::array();
    for (const auto& t : e.terms) {
      json term{{"b", t.b},
                {"tree_part", to_string(t.tree_part)},
                {"ring_part", affine_json(t.ring_part)},
                {"tree_multiplier", to_string(t.tree_multiplier)},
                {"ring_multiplier", to_string(t.ring_multiplier)},
                {"error_order", t.error_order}};
      rows.push_back({t.b, to_string(t.tree_part), to_string(t.ring_part.c0), to_string(t.ring_part.c1),
                      to_string(t.tree_multiplier), to_string(t.ring_multiplier), t.error_order});
      out["terms"].push_back(std::move(term));
    }
  } else if (a.form == "ratio") {
    const auto e = closedform::corollary_mean_ratio(a.l, p, n);
    value = e.value * scale;
    out["y"] = to_string(e.y);
    out["leading"] = json::array();
    for (const auto& c : e.leading.coefficients) out["leading"].push_back(to_string(c));
    out["correction"] = json::array();
    for (const auto& c : e.correction.coefficients) out["correction"].push_back(affine_json(c));
  } else {
    value = closedform::corollary_mean_const_p(a.l, p, n) * scale;
  }
  out["affine"] = affine_json(value);
  out["value"] = value_or_null(value, alpha);
  out["approximate"] = approx_or_null(value, alpha);
  if (common.csv()) {
    if (a.form == "theorem") {
      emit_csv({"b", "tree_part", "ring_c0", "ring_c1", "tree_multiplier", "ring_multiplier", "error_order"}, rows);
    } else {
      emit_csv({"c0", "c1", "value"}, {{to_string(value.c0), to_string(value.c1), out["value"]}});
    }
    return kOk;
  }
  emit(std::move(out), common);
  return kOk;
}

int run_cov_closed(const ClosedArgs& a, const Common& common) {
  const bool transposed = a.p > a.n;
  const long p = transposed ? a.n : a.p;
  const long n = transposed ? a.p : a.n;
  const Rational scale = transposed ? scale_power(a.p, a.n, a.l1 + a.l2) : Rational(1);
  const auto alpha = a.source.alpha_value();
  json out{{"command", "cov-closed"}, {"l1", a.l1}, {"l2", a.l2}, {"p", a.p},
           {"n", a.n},                {"form", a.form}, {"transposed", transposed}};
  out["scale"] = to_string(scale);
  out["alpha"] = alpha ? json(to_string(*alpha)) : json(nullptr);
  weights::AffineAlpha value;
  std::vector<std::vector<json>> rows;
  if (a.form == "theorem") {
    const auto e = closedform::theorem2_cov(a.l1, a.l2, p, n);
    value = e.value * scale;
    out["terms"] = json::array();
    for (const auto& t : e.terms) {
      out["terms"].push_back({{"b", t.b},
                              {"coeff", affine_json(t.coeff)},
                              {"multiplier", to_string(t.multiplier)},
                              {"error_order", t.error_order}});
      rows.push_back({t.b, to_string(t.coeff.c0), to_string(t.coeff.c1), to_string(t.multiplier), t.error_order});
    }
  } else if (a.form == "ratio") {
    const auto e = closedform::corollary_cov_ratio(a.l1, a.l2, p, n);
    value = e.value * scale;
    out["y"] = to_string(e.y);
    out["polynomial"] = json::array();
    for (const auto& c : e.polynomial.coefficients) out["polynomial"].push_back(affine_json(c));
  } else {
    value = closedform::corollary_cov_const_p(a.l1, a.l2, p, n) * scale;
  }
  out["affine"] = affine_json(value);
  out["value"] = value_or_null(value, alpha);
  out["approximate"] = approx_or_null(value, alpha);
  if (common.csv()) {
    if (a.form == "theorem") {
      emit_csv({"b", "coeff_c0", "coeff_c1", "multiplier", "error_order"}, rows);
    } else {
      emit_csv({"c0", "c1", "value"}, {{to_string(value.c0), to_string(value.c1), out["value"]}});
    }
    return kOk;
  }
  emit(std::move(out), common);
  return kOk;
}

// ----------------------------------------------------------------- oracle

json moments_json(const weights::MomentSequence& m) {
  json out = json::array();
  for (const auto& v : m.values()) out.push_back(to_string(v));
  return out;
}

int emit_oracle(json out, const enumeration::ExactMomentResult& result, const Common& common) {
  out["value"] = to_string(result.value);
  out["approximate"] = to_double(result.value);
  out["terms"] = json::array();
  std::vector<std::vector<json>> rows;
  for (const auto& t : result.terms) {
    out["terms"].push_back(
        {{"r", t.r}, {"b", t.b}, {"multiplicity", to_string(Rational(t.multiplicity))}, {"inner_sum", to_string(t.inner_sum)}});
    rows.push_back({t.r, t.b, to_string(Rational(t.multiplicity)), to_string(t.inner_sum)});
  }
  if (common.csv()) {
    emit_csv({"r", "b", "multiplicity", "inner_sum"}, rows);
    return kOk;
  }
  emit(std::move(out), common);
  return kOk;
}

int run_mean_oracle(const ClosedArgs& a, const Common& common) {
  const auto m = a.source.sequence(static_cast<int>(2 * a.l));
  const auto result = enumeration::exact_trace_moment(static_cast<int>(a.l), static_cast<int>(a.p),
                                                      static_cast<int>(a.n), m, common.options());
  json out{{"command", "mean-oracle"}, {"l", a.l}, {"p", a.p}, {"n", a.n}, {"moments", moments_json(m)}};
  return emit_oracle(std::move(out), result, common);
}

int run_cov_oracle(const ClosedArgs& a, const Common& common) {
  const auto m = a.source.sequence(static_cast<int>(2 * (a.l1 + a.l2)));
  const auto result = enumeration::exact_trace_covariance(static_cast<int>(a.l1), static_cast<int>(a.l2),
                                                          static_cast<int>(a.p), static_cast<int>(a.n), m,
                                                          common.options());
  json out{{"command", "cov-oracle"}, {"l1", a.l1}, {"l2", a.l2}, {"p", a.p}, {"n", a.n}, {"moments", moments_json(m)}};
  return emit_oracle(std::move(out), result, common);
}

// ----------------------------------------------------------------- census

struct CensusArgs {
  std::string kind = "single";
  int l = 0;
  int r = 0;
  int b = 0;
  int l1 = 0;
  int l2 = 0;
  std::string seed;
  std::string black;
  std::string white;
  bool list = false;
  MomentSource source;
};

int run_census(const CensusArgs& a, const Common& common) {
  if (a.kind == "single") {
    if (a.l < 1 || a.b < 1) throw std::invalid_argument("census single needs --l and --b");
    const int r = a.r > 0 ? a.r : a.l;
    std::optional<weights::MomentSequence> m;
    if (a.source.given()) m = a.source.sequence(2 * a.l);
    const auto census = enumeration::seed_census_with_weights(a.l, r, a.b, common.options());
    json out{{"command", "census"}, {"kind", "single"}, {"l", a.l}, {"r", r}, {"b", a.b}, {"classes", json::array()}};
    std::vector<std::vector<json>> rows;
    for (const auto& [cls, bucket] : census) {
      json value = m ? json(to_string(bucket.weight.evaluate(*m))) : json(nullptr);
      out["classes"].push_back(
          {{"seed_class", cls.to_string()}, {"count", bucket.count}, {"weight", bucket.weight.to_string()}, {"weight_value", value}});
      rows.push_back({cls.to_string(), bucket.count, bucket.weight.to_string(), value});
    }
    if (common.csv()) {
      emit_csv({"seed_class", "count", "weight", "weight_value"}, rows);
      return kOk;
    }
    emit(std::move(out), common);
    return kOk;
  }
  if (a.kind == "double") {
    if (a.l1 < 1 || a.l2 < 1 || a.b < 1) throw std::invalid_argument("census double needs --l1, --l2 and --b");
    const auto census = enumeration::census_double(a.l1, a.l2, a.b, common.options());
    json out{{"command", "census"}, {"kind", "double"}, {"l1", a.l1}, {"l2", a.l2}, {"b", a.b}, {"classes", json::array()}};
    std::vector<std::vector<json>> rows;
    for (const auto& [key, count] : census) {
      out["classes"].push_back({{"seed_class", key.seed_class.to_string()},
                                {"b1_prime", key.b1_prime},
                                {"b2_prime", key.b2_prime},
                                {"w1_prime", key.w1_prime},
                                {"w2_prime", key.w2_prime},
                                {"count", count}});
      rows.push_back({key.seed_class.to_string(), key.b1_prime, key.b2_prime, key.w1_prime, key.w2_prime, count});
    }
    if (common.csv()) {
      emit_csv({"seed_class", "b1_prime", "b2_prime", "w1_prime", "w2_prime", "count"}, rows);
      return kOk;
    }
    emit(std::move(out), common);
    return kOk;
  }
  if (a.kind == "sprouting") {
    if (a.seed.empty()) throw std::invalid_argument("census sprouting needs --seed");
    const auto seed = graphs::Route::parse(a.seed);
    const auto b_prime = parse_label_set(a.black);
    const auto w_prime = parse_label_set(a.white);
    const auto found = enumeration::enumerate_sprouting_graphs(seed, b_prime, w_prime);
    json out{{"command", "census"}, {"kind", "sprouting"}, {"seed", seed.to_string()}};
    out["b_prime"] = b_prime.size();
    out["w_prime"] = w_prime.size();
    out["count"] = to_string(Integer(static_cast<unsigned long>(found.size())));
    json formula = nullptr;
    if (seed.size() % 2 == 0) {
      formula = to_string(closedform::count_sprouting(static_cast<long>(seed.size() / 2),
                                                      static_cast<long>(b_prime.size()),
                                                      static_cast<long>(w_prime.size())));
    }
    out["formula"] = formula;
    if (a.list) {
      out["routes"] = json::array();
      for (const auto& g : found) out["routes"].push_back(g.to_string());
    }
    if (common.csv()) {
      std::vector<std::vector<json>> rows;
      for (const auto& g : found) rows.push_back({g.to_string()});
      emit_csv({"route"}, rows);
      return kOk;
    }
    emit(std::move(out), common);
    return kOk;
  }
  throw std::invalid_argument("census --kind must be single, double or sprouting");
}

// --------------------------------------------------------------- simulate

struct SimulateArgs {
  int p = 0;
  int n = 0;
  std::string l_list;
  std::string cov;
  long reps = 1000;
  std::string dist = "gaussian";
  std::uint64_t seed = 0;
  bool no_exact = false;
};

int run_simulate(const SimulateArgs& a, const Common& common) {
  montecarlo::SimulationConfig config;
  config.p = a.p;
  config.n = a.n;
  config.l_list = parse_int_list(a.l_list);
  std::stringstream in(a.cov);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("covariance pairs are written l1:l2");
    config.cov_pairs.emplace_back(std::stoi(item.substr(0, colon)), std::stoi(item.substr(colon + 1)));
  }
  config.replications = a.reps;
  config.distribution = weights::parse_distribution(a.dist);
  config.seed = a.seed;
  config.threads = common.threads;
  config.validate();
  const auto reference = a.no_exact ? montecarlo::ReferenceValues{} : montecarlo::exact_reference(config, common.options());
  const auto report = montecarlo::simulate(config, reference);
  if (common.csv()) {
    std::cout << montecarlo::to_csv(report);
    return kOk;
  }
  json out = montecarlo::to_json(report);
  out["command"] = "simulate";
  emit(std::move(out), common);
  return kOk;
}

// ----------------------------------------------------------------- verify

json suite_json(const verify::SuiteResult& r) {
  return {{"suite", r.suite}, {"cases", r.cases}, {"failures", r.failures}};
}

int run_verify(const std::string& suite, int max_l, const Common& common) {
  std::vector<verify::SuiteResult> results;
  if (suite == "all") {
    for (const auto& name : verify::suite_names()) results.push_back(verify::run_suite(name, 0, common.options()));
  } else {
    results.push_back(verify::run_suite(suite, max_l, common.options()));
  }
  bool passed = true;
  for (const auto& r : results) passed = passed && r.passed();
  if (common.csv()) {
    std::vector<std::vector<json>> rows;
    for (const auto& r : results) rows.push_back({r.suite, r.cases, static_cast<long>(r.failures.size())});
    emit_csv({"suite", "cases", "failures"}, rows);
  } else if (results.size() == 1) {
    emit(suite_json(results.front()), common);
  } else {
    json out{{"suites", json::array()}, {"passed", passed}};
    for (const auto& r : results) out["suites"].push_back(suite_json(r));
    emit(std::move(out), common);
  }
  return passed ? kOk : kVerificationFailed;
}

// ------------------------------------------------------------ mp, bs-check

int run_mp(long l, const std::string& y_text, const Common& common) {
  const Rational y = parse_rational(y_text);
  const Rational value = closedform::mp_moment(l, y);
  if (common.csv()) {
    emit_csv({"l", "y", "value"}, {{l, to_string(y), to_string(value)}});
    return kOk;
  }
  emit({{"command", "mp"}, {"l", l}, {"y", to_string(y)}, {"value", to_string(value)}}, common);
  return kOk;
}

int run_bs_check(long l, long l1, long l2, const Common& common) {
  bool ok = true;
  json out{{"command", "bs-check"}};
  std::vector<std::vector<json>> rows;
  if (l > 0) {
    const auto coeffs = closedform::bs_mean_coefficients(l);
    json mean = json::array();
    for (long j = 0; j <= l; ++j) {
      Rational expected = 0;
      if (j >= 1 && j <= l - 1) {
        expected = ratio(closedform::binom(2 * l, 2 * j) - closedform::binom(l, j) * closedform::binom(l, j), 2);
      }
      const bool equal = coeffs[j] == expected;
      ok = ok && equal;
      mean.push_back({{"j", j}, {"coefficient", to_string(coeffs[j])}, {"expected", to_string(expected)}, {"equal", equal}});
      rows.push_back({"mean", j, to_string(coeffs[j]), to_string(expected), equal});
    }
    out["l"] = l;
    out["mean"] = std::move(mean);
  }
  if (l1 > 0 && l2 > 0) {
    json cov = json::array();
    for (long b = 1; b <= l1 + l2; ++b) {
      const Rational lhs = closedform::bs_cov_coefficient(l1, l2, b);
      const Rational rhs = ratio(closedform::C_coeff(l1, l2, b), factorial(b) * factorial(l1 + l2 - b));
      const bool equal = lhs == rhs;
      ok = ok && equal;
      cov.push_back({{"b", b}, {"coefficient", to_string(lhs)}, {"expected", to_string(rhs)}, {"equal", equal}});
      rows.push_back({"cov", b, to_string(lhs), to_string(rhs), equal});
    }
    out["l1"] = l1;
    out["l2"] = l2;
    out["cov"] = std::move(cov);
  }
  if (l <= 0 && (l1 <= 0 || l2 <= 0)) throw std::invalid_argument("bs-check needs --l or both --l1 and --l2");
  out["passed"] = ok;
  if (common.csv()) {
    emit_csv({"kind", "index", "coefficient", "expected", "equal"}, rows);
  } else {
    emit(std::move(out), common);
  }
  return ok ? kOk : kVerificationFailed;
}

// ------------------------------------------------------------------ graph

json matrix_json(const graphs::AdjacencyMatrix& a) {
  json out = json::array();
  for (int u = 1; u <= a.size(); ++u) {
    json row = json::array();
    for (int v = 1; v <= a.size(); ++v) row.push_back(a(u, v));
    out.push_back(std::move(row));
  }
  return out;
}

int run_graph(const std::string& route_text, const std::string& second_text, const MomentSource& source,
              const Common& common) {
  if (common.csv()) throw std::invalid_argument("graph output is JSON only");
  const auto first = graphs::Route::parse(route_text);
  json out{{"command", "graph"}};
  std::optional<weights::MomentSequence> m;
  if (second_text.empty()) {
    const graphs::CircuitMultigraph g(first);
    if (source.given()) m = source.sequence(static_cast<int>(g.edge_count()));
    const auto& s = g.seed();
    out["route"] = first.to_string();
    out["vertex_count"] = g.vertex_count();
    out["edge_count"] = g.edge_count();
    out["edges"] = g.edges();
    out["black_set"] = graphs::black_set(g);
    out["balanced_leaves"] = graphs::balanced_leaves(g);
    out["seed_route"] = s.route().to_string();
    out["seed_class"] = g.seed_class().to_string();
    out["balanced_tree"] = graphs::is_balanced_tree(g);
    out["adjacency"] = matrix_json(graphs::adjacency(g));
    out["reversed_adjacency"] = matrix_json(graphs::reverse_adjacency(g));
    const auto key = enumeration::reversed_monomial(first.entries());
    enumeration::MomentPolynomial weight;
    if (key) weight.add(*key, 1);
    out["weight_monomial"] = weight.to_string();
    out["weight"] = m ? json(to_string(weights::weight(g, *m))) : json(nullptr);
  } else {
    const auto second = graphs::Route::parse(second_text);
    const graphs::DoubleCircuitMultigraph d(first, second);
    if (source.given()) m = source.sequence(static_cast<int>(first.size() + second.size()));
    const auto& s = d.seed();
    out["first"] = first.to_string();
    out["second"] = second.to_string();
    out["vertex_count"] = d.vertex_count();
    const auto walk = [](const graphs::Route& r) {
      std::vector<graphs::Edge> edges;
      for (std::size_t k = 0; k < r.size(); ++k) edges.emplace_back(r[k], r[(k + 1) % r.size()]);
      return edges;
    };
    out["edges"] = {walk(first), walk(second)};
    out["black_set"] = graphs::black_set_double(d);
    out["balanced_leaves"] = graphs::balanced_leaves(d);
    out["seed_route"] = {s.first().to_string(), s.second().to_string()};
    out["seed_class"] = d.seed_class().to_string();
    out["reversed_adjacency"] = matrix_json(graphs::reverse_adjacency(d));
    out["covariance_weight"] = m ? json(to_string(weights::covariance_weight(d, *m))) : json(nullptr);
  }
  emit(std::move(out), common);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and Monte Carlo trace moments of sample covariance matrices", "tracegraph"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--format", common.format, "output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--no-timestamp", common.no_timestamp, "omit the timestamp field");
  app.add_flag("--allow-large", common.allow_large, "lift the default enumeration size limits");
  app.add_option("--threads", common.threads, "worker threads, 0 = hardware concurrency");

  ClosedArgs mean_closed;
  auto* mc = app.add_subcommand("mean-closed", "closed-form expansion of E tr S^l");
  mc->add_option("--l", mean_closed.l)->required()->check(CLI::PositiveNumber);
  mc->add_option("--p", mean_closed.p)->required()->check(CLI::PositiveNumber);
  mc->add_option("--n", mean_closed.n)->required()->check(CLI::PositiveNumber);
  mc->add_option("--form", mean_closed.form, "theorem, ratio or const-p")
      ->check(CLI::IsMember({"theorem", "ratio", "const-p"}));
  mean_closed.source.attach(mc);

  ClosedArgs mean_oracle;
  auto* mo = app.add_subcommand("mean-oracle", "exact E tr S^l by enumeration");
  mo->add_option("--l", mean_oracle.l)->required()->check(CLI::PositiveNumber);
  mo->add_option("--p", mean_oracle.p)->required()->check(CLI::PositiveNumber);
  mo->add_option("--n", mean_oracle.n)->required()->check(CLI::PositiveNumber);
  mean_oracle.source.attach(mo);

  ClosedArgs cov_closed;
  auto* cc = app.add_subcommand("cov-closed", "closed-form Cov(tr S^l1, tr S^l2)");
  cc->add_option("--l1", cov_closed.l1)->required()->check(CLI::PositiveNumber);
  cc->add_option("--l2", cov_closed.l2)->required()->check(CLI::PositiveNumber);
  cc->add_option("--p", cov_closed.p)->required()->check(CLI::PositiveNumber);
  cc->add_option("--n", cov_closed.n)->required()->check(CLI::PositiveNumber);
  cc->add_option("--form", cov_closed.form, "theorem, ratio or const-p")
      ->check(CLI::IsMember({"theorem", "ratio", "const-p"}));
  cov_closed.source.attach(cc);

  ClosedArgs cov_oracle;
  auto* co = app.add_subcommand("cov-oracle", "exact Cov(tr S^l1, tr S^l2) by enumeration");
  co->add_option("--l1", cov_oracle.l1)->required()->check(CLI::PositiveNumber);
  co->add_option("--l2", cov_oracle.l2)->required()->check(CLI::PositiveNumber);
  co->add_option("--p", cov_oracle.p)->required()->check(CLI::PositiveNumber);
  co->add_option("--n", cov_oracle.n)->required()->check(CLI::PositiveNumber);
  cov_oracle.source.attach(co);

  CensusArgs census;
  auto* ce = app.add_subcommand("census", "graph censuses by seed class");
  ce->add_option("--kind", census.kind, "single, double or sprouting")
      ->check(CLI::IsMember({"single", "double", "sprouting"}));
  ce->add_option("--l", census.l, "trace power (single)");
  ce->add_option("--r", census.r, "vertex count (single, default l)");
  ce->add_option("--b", census.b, "black vertex count");
  ce->add_option("--l1", census.l1, "first trace power (double)");
  ce->add_option("--l2", census.l2, "second trace power (double)");
  ce->add_option("--seed", census.seed, "seed route (sprouting), e.g. 1,2");
  ce->add_option("--black", census.black, "sprouted black labels (sprouting), e.g. 1,2");
  ce->add_option("--white", census.white, "sprouted white labels (sprouting)");
  ce->add_flag("--list", census.list, "list the sprouted routes");
  census.source.attach(ce);

  SimulateArgs sim;
  auto* si = app.add_subcommand("simulate", "Monte Carlo estimates with z-scores against exact values");
  si->add_option("--p", sim.p)->required()->check(CLI::PositiveNumber);
  si->add_option("--n", sim.n)->required()->check(CLI::PositiveNumber);
  si->add_option("--l", sim.l_list, "trace powers, e.g. 1,2,3");
  si->add_option("--cov", sim.cov, "covariance pairs, e.g. 1:1,1:2");
  si->add_option("--reps", sim.reps, "replications (>= 100)");
  si->add_option("--dist", sim.dist, "gaussian, rademacher or uniform");
  si->add_option("--seed", sim.seed, "64-bit RNG seed");
  si->add_flag("--no-exact", sim.no_exact, "skip the exact reference values");

  std::string suite = "all";
  int max_l = 0;
  auto* ve = app.add_subcommand("verify", "run invariant suites");
  ve->add_option("--suite", suite, "suite name or all");
  ve->add_option("--max-l", max_l, "suite size bound, 0 = default")->check(CLI::NonNegativeNumber);

  long mp_l = 0;
  std::string mp_y;
  auto* mp = app.add_subcommand("mp", "Marchenko-Pastur moment");
  mp->add_option("--l", mp_l)->required()->check(CLI::PositiveNumber);
  mp->add_option("--y", mp_y, "ratio p/n as a rational")->required();

  long bs_l = 0;
  long bs_l1 = 0;
  long bs_l2 = 0;
  auto* bs = app.add_subcommand("bs-check", "compare limiting mean and covariance coefficients");
  bs->add_option("--l", bs_l, "mean coefficients for this l")->check(CLI::PositiveNumber);
  bs->add_option("--l1", bs_l1, "covariance coefficients, first power")->check(CLI::PositiveNumber);
  bs->add_option("--l2", bs_l2, "covariance coefficients, second power")->check(CLI::PositiveNumber);

  std::string route_text;
  std::string second_text;
  MomentSource graph_source;
  auto* gr = app.add_subcommand("graph", "inspect the circuit multigraph of a route");
  gr->add_option("--route", route_text, "route, e.g. 1,2,1,3")->required();
  gr->add_option("--second", second_text, "second route of a double");
  graph_source.attach(gr);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << e.what() << "\n\n" << app.help();
    return kInvalid;
  }

  try {
    if (mc->parsed()) return run_mean_closed(mean_closed, common);
    if (mo->parsed()) return run_mean_oracle(mean_oracle, common);
    if (cc->parsed()) return run_cov_closed(cov_closed, common);
    if (co->parsed()) return run_cov_oracle(cov_oracle, common);
    if (ce->parsed()) return run_census(census, common);
    if (si->parsed()) return run_simulate(sim, common);
    if (ve->parsed()) return run_verify(suite, max_l, common);
    if (mp->parsed()) return run_mp(mp_l, mp_y, common);
    if (bs->parsed()) return run_bs_check(bs_l, bs_l1, bs_l2, common);
    if (gr->parsed()) return run_graph(route_text, second_text, graph_source, common);
  } catch (const std::exception& e) {
    std::cerr << json{{"error", e.what()}}.dump() << "\n";
    return kInvalid;
  }
  return kInvalid;
}
