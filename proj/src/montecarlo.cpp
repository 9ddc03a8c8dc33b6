#include "tracegraph/montecarlo.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace tracegraph::montecarlo {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Uniform on [0, 1) with 53 random bits.
double unit_interval(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

int max_power(const SimulationConfig& config) {
  int top = 0;
  for (int l : config.l_list) top = std::max(top, l);
  for (const auto& [a, b] : config.cov_pairs) top = std::max({top, a, b});
  return top;
}

}  // namespace

void SimulationConfig::validate() const {
  if (p < 1 || n < 1) throw std::invalid_argument("p and n must be positive");
  if (replications < 100) throw std::invalid_argument("replications must be at least 100");
  if (l_list.empty() && cov_pairs.empty()) throw std::invalid_argument("nothing to simulate");
  for (int l : l_list) {
    if (l < 1) throw std::invalid_argument("trace powers must be positive");
  }
  for (const auto& [a, b] : cov_pairs) {
    if (a < 1 || b < 1) throw std::invalid_argument("trace powers must be positive");
  }
}

std::string rng_algorithm() {
  return "mt19937_64 per replication, seeded with splitmix64(seed + splitmix64(replication)); "
         "normals by Box-Muller, Rademacher by sign bits, uniform as sqrt(3)(2u-1)";
}

std::vector<double> sample_entries(weights::Distribution d, std::uint64_t seed, std::uint64_t replication,
                                   std::size_t count) {
  std::mt19937_64 engine(splitmix64(seed + splitmix64(replication)));
  std::vector<double> out(count);
  switch (d) {
    case weights::Distribution::Gaussian: {
      for (std::size_t i = 0; i < count; i += 2) {
        const double u1 = 1.0 - unit_interval(engine());  // (0, 1]
        const double u2 = unit_interval(engine());
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        out[i] = radius * std::cos(angle);
        if (i + 1 < count) out[i + 1] = radius * std::sin(angle);
      }
      break;
    }
    case weights::Distribution::Rademacher: {
      std::uint64_t bits = 0;
      for (std::size_t i = 0; i < count; ++i) {
        if (i % 64 == 0) bits = engine();
        out[i] = (bits & 1) ? 1.0 : -1.0;
        bits >>= 1;
      }
      break;
    }
    case weights::Distribution::UniformScaled: {
      for (std::size_t i = 0; i < count; ++i) out[i] = std::sqrt(3.0) * (2.0 * unit_interval(engine()) - 1.0);
      break;
    }
  }
  return out;
}

ReferenceValues exact_reference(const SimulationConfig& config, const enumeration::EnumerationOptions& options) {
  config.validate();
  const int small = std::min(config.p, config.n);
  const int large = std::max(config.p, config.n);
  const Rational ratio_pn = ratio(config.p, config.n);
  const auto scale = [&](int power) {
    Rational out = 1;
    if (config.transposed()) {
      for (int i = 0; i < power; ++i) out *= ratio_pn;
    }
    return out;
  };
  const auto moments = weights::preset_moments(config.distribution, std::max(4, 4 * max_power(config)));
  ReferenceValues out;
  for (int l : config.l_list) {
    const auto exact = enumeration::exact_trace_moment(l, small, large, moments, options);
    out.means[l] = to_double(exact.value * scale(l));
  }
  for (const auto& [l1, l2] : config.cov_pairs) {
    const auto exact = enumeration::exact_trace_covariance(l1, l2, small, large, moments, options);
    out.covariances[{l1, l2}] = to_double(exact.value * scale(l1 + l2));
  }
  return out;
}

double z_score(double empirical, double exact, double se) {
  if (se > 0) return (empirical - exact) / se;
  const double tolerance = 1e-9 * std::max(1.0, std::abs(exact));
  if (std::abs(empirical - exact) <= tolerance) return 0.0;
  return empirical > exact ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
}

SimulationReport simulate(const SimulationConfig& config, const ReferenceValues& reference) {
  config.validate();
  const int top = max_power(config);
  const auto reps = static_cast<std::size_t>(config.replications);
  const int rows = std::min(config.p, config.n);
  const int cols = std::max(config.p, config.n);
  const double n = config.n;

  // traces[rep * top + (l - 1)] = tr(S^l) for that replication.
  std::vector<double> traces(reps * static_cast<std::size_t>(top));
  const auto run = [&](std::size_t rep) {
    const auto entries = sample_entries(config.distribution, config.seed, rep,
                                        static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
    const Eigen::Map<const Eigen::MatrixXd> x(entries.data(), rows, cols);
    const Eigen::MatrixXd gram = x * x.transpose();
    Eigen::MatrixXd power = gram;
    double scale = n;
    for (int l = 1; l <= top; ++l) {
      traces[rep * top + static_cast<std::size_t>(l - 1)] = power.trace() / scale;
      if (l < top) {
        power = power * gram;
        scale *= n;
      }
    }
  };

  unsigned workers = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, reps));
  if (workers <= 1) {
    for (std::size_t rep = 0; rep < reps; ++rep) run(rep);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t rep = next++; rep < reps; rep = next++) run(rep);
      });
    }
    for (auto& t : pool) t.join();
  }

  const auto column = [&](int l, std::size_t rep) { return traces[rep * top + static_cast<std::size_t>(l - 1)]; };
  const double count = static_cast<double>(reps);

  SimulationReport report{config, rng_algorithm(), {}, {}};
  std::map<int, double> mean_of;
  for (int l = 1; l <= top; ++l) {
    double sum = 0;
    for (std::size_t rep = 0; rep < reps; ++rep) sum += column(l, rep);
    mean_of[l] = sum / count;
  }
  for (int l : config.l_list) {
    const double mean = mean_of[l];
    double squares = 0;
    for (std::size_t rep = 0; rep < reps; ++rep) {
      const double d = column(l, rep) - mean;
      squares += d * d;
    }
    const double se = std::sqrt(squares / (count - 1) / count);
    MeanRow row{l, mean, se, false, 0.0, std::numeric_limits<double>::quiet_NaN()};
    if (const auto it = reference.means.find(l); it != reference.means.end()) {
      row.has_exact = true;
      row.exact = it->second;
      row.z = z_score(mean, row.exact, se);
    }
    report.means.push_back(row);
  }
  for (const auto& [l1, l2] : config.cov_pairs) {
    const double m1 = mean_of[l1];
    const double m2 = mean_of[l2];
    double cross = 0;
    for (std::size_t rep = 0; rep < reps; ++rep) cross += (column(l1, rep) - m1) * (column(l2, rep) - m2);
    const double cov = cross / (count - 1);
    // Leave-one-out covariances: removing replication i changes the centred
    // cross-product sum by count/(count-1) * d1_i * d2_i.
    double loo_sum = 0;
    std::vector<double> loo(reps);
    for (std::size_t rep = 0; rep < reps; ++rep) {
      const double d = (column(l1, rep) - m1) * (column(l2, rep) - m2);
      loo[rep] = (cross - count / (count - 1) * d) / (count - 2);
      loo_sum += loo[rep];
    }
    const double loo_mean = loo_sum / count;
    double spread = 0;
    for (double v : loo) spread += (v - loo_mean) * (v - loo_mean);
    const double se = std::sqrt((count - 1) / count * spread);
    CovRow row{l1, l2, cov, se, false, 0.0, std::numeric_limits<double>::quiet_NaN()};
    if (const auto it = reference.covariances.find({l1, l2}); it != reference.covariances.end()) {
      row.has_exact = true;
      row.exact = it->second;
      row.z = z_score(cov, row.exact, se);
    }
    report.covariances.push_back(row);
  }
  return report;
}

namespace {

nlohmann::json number_or_null(bool present, double value) {
  if (!present || !std::isfinite(value)) return nullptr;
  return value;
}

}  // namespace

nlohmann::json to_json(const SimulationReport& report) {
  const auto& c = report.config;
  nlohmann::json out;
  out["p"] = c.p;
  out["n"] = c.n;
  out["replications"] = c.replications;
  out["distribution"] = weights::to_string(c.distribution);
  out["seed"] = c.seed;
  out["transposed"] = c.transposed();
  out["rng"] = report.rng_algorithm;
  out["means"] = nlohmann::json::array();
  for (const auto& row : report.means) {
    out["means"].push_back({{"l", row.l},
                            {"empirical", row.empirical},
                            {"se", row.se},
                            {"exact", number_or_null(row.has_exact, row.exact)},
                            {"z", number_or_null(row.has_exact, row.z)}});
  }
  out["covariances"] = nlohmann::json::array();
  for (const auto& row : report.covariances) {
    out["covariances"].push_back({{"l1", row.l1},
                                  {"l2", row.l2},
                                  {"empirical", row.empirical},
                                  {"se", row.se},
                                  {"exact", number_or_null(row.has_exact, row.exact)},
                                  {"z", number_or_null(row.has_exact, row.z)}});
  }
  return out;
}

std::string to_csv(const SimulationReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "kind,l1,l2,empirical,se,exact,z\n";
  const auto cell = [](bool present, double v) {
    std::ostringstream s;
    s.precision(17);
    if (present) s << v;
    return s.str();
  };
  for (const auto& row : report.means) {
    out << "mean," << row.l << ",," << row.empirical << "," << row.se << "," << cell(row.has_exact, row.exact)
        << "," << cell(row.has_exact, row.z) << "\n";
  }
  for (const auto& row : report.covariances) {
    out << "cov," << row.l1 << "," << row.l2 << "," << row.empirical << "," << row.se << ","
        << cell(row.has_exact, row.exact) << "," << cell(row.has_exact, row.z) << "\n";
  }
  return out.str();
}

}  // namespace tracegraph::montecarlo
