#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fpplab/lattice.hpp"

namespace fpplab {

enum class DistFamily {
  kWeibullTail,       // P(tau > t) = exp(-(t/scale)^r)
  kExponential,       // rate
  kPareto,            // P(tau > t) = (min/t)^exponent for t >= min
  kUniform,           // on [lo, hi]
  kBernoulliTwoPoint, // a with prob p_a, else b
  kConstant,
};

struct DistributionSpec {
  DistFamily family = DistFamily::kExponential;
  double p0 = 1.0, p1 = 0.0, p2 = 0.0;

  static DistributionSpec weibull_tail(double r, double scale = 1.0);
  static DistributionSpec exponential(double rate);
  static DistributionSpec pareto(double exponent, double min);
  static DistributionSpec uniform(double lo, double hi);
  static DistributionSpec bernoulli_two_point(double a, double b, double p_a);
  static DistributionSpec constant(double v);

  double cdf(double t) const;
  double quantile(double u) const;  // u in [0,1)
  double mean() const;
  double f_minus() const;           // infimum of the support
  double atom_at_f_minus() const;   // P(tau == F^-)
  bool continuous() const;
  bool integer_atomic() const;      // discrete with integer atoms (exact tie arithmetic)
  bool has_finite_second_moment() const;
  // Tail exponent used for order-function references: weibull_tail -> r,
  // exponential -> 1, everything else -> 0 (finite-variance regime).
  double tail_r() const;
  std::string family_name() const;

  bool operator==(const DistributionSpec& o) const = default;
};

// JSON form: {"family":"exponential","params":{"rate":1.0}}. Throws ConfigError.
DistributionSpec distribution_from_json(const std::string& text);
std::string distribution_to_json(const DistributionSpec& dist);

// Critical percolation probabilities, editable; missing entries yield
// an "unknown" usefulness verdict rather than a guess.
struct CriticalTable {
  std::map<int, double> pc;           // p_c(d)
  std::map<int, double> pc_oriented;  // oriented \vec p_c(d)
  static CriticalTable defaults();    // pc: {2:0.5, 3:0.2488}; oriented: {2:0.6447}
};

enum class Usefulness { kUseful, kNotUseful, kUnknown };
const char* usefulness_name(Usefulness u);

// Useful iff (F^-=0 and F(0) < p_c(d)) or (F^->0 and F(F^-) < vec p_c(d)).
Usefulness useful_verdict(const DistributionSpec& dist, int d,
                          const CriticalTable& table = CriticalTable::defaults());

// Exact P(t < tau < gamma*t) over the open interval, atom-aware.
double condition_probability_lower_bound(const DistributionSpec& dist, double t, double gamma);

// Counter-based uniform draw: deterministic function of (key, counter words).
double uniform_from_words(std::uint64_t key, std::span<const std::uint64_t> words);
// Indexed i.i.d. sample stream for the harness.
double dist_sample(const DistributionSpec& dist, std::uint64_t key, std::uint64_t index);

// Lazy i.i.d. edge-weight environment. Weights are a pure function of
// (master seed, canonical edge id) plus the configured perturbation stack:
// overrides take precedence over resample layers (latest layer wins), and
// tilde thresholds apply last (w >= threshold -> w + 1). Copies share
// structure; instances are immutable and thread-safe.
class WeightConfig {
 public:
  WeightConfig(DistributionSpec dist, std::uint64_t master_seed);

  const DistributionSpec& dist() const { return dist_; }
  std::uint64_t master_seed() const { return master_; }

  double weight(const EdgeId& e) const;
  // Fast path for dense solvers: canonical base coordinates + axis.
  double weight_at(std::span<const Coord> base, int axis) const;
  double path_time(const std::vector<LatticePoint>& path) const;

  WeightConfig with_override(const EdgeId& e, double w) const;
  WeightConfig with_overrides(const std::vector<std::pair<EdgeId, double>>& ws) const;
  // tau*: fresh draws (sub-seed keyed) on the given edges.
  WeightConfig resampled(std::shared_ptr<const EdgeSet> edges, std::uint64_t sub_seed) const;
  WeightConfig resampled(const std::vector<EdgeId>& edges, std::uint64_t sub_seed) const;
  // tau~: weights at or above the threshold are shifted up by one.
  WeightConfig perturbed_tilde(double threshold) const;

  bool plain() const { return !overrides_ && layers_.empty() && tilde_.empty(); }
  std::uint64_t base_uniform_bits(std::span<const Coord> base, int axis) const;

 private:
  DistributionSpec dist_;
  std::uint64_t master_ = 0;
  struct Layer {
    std::shared_ptr<const EdgeSet> edges;
    std::uint64_t key = 0;
  };
  std::shared_ptr<const EdgeMap<double>> overrides_;
  std::vector<Layer> layers_;
  std::vector<double> tilde_;
};

}  // namespace fpplab
