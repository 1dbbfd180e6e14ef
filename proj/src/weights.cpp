#include "fpplab/weights.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "fpplab/error.hpp"

namespace fpplab {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

double bits_to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

bool is_integer(double v) { return std::floor(v) == v && std::abs(v) < 0x1.0p53; }

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

DistributionSpec DistributionSpec::weibull_tail(double r, double scale) {
  require(r > 0 && scale > 0, "weibull_tail: r and scale must be positive");
  return {DistFamily::kWeibullTail, r, scale, 0.0};
}

DistributionSpec DistributionSpec::exponential(double rate) {
  require(rate > 0, "exponential: rate must be positive");
  return {DistFamily::kExponential, rate, 0.0, 0.0};
}

DistributionSpec DistributionSpec::pareto(double exponent, double min) {
  require(exponent > 0 && min > 0, "pareto: exponent and min must be positive");
  return {DistFamily::kPareto, exponent, min, 0.0};
}

DistributionSpec DistributionSpec::uniform(double lo, double hi) {
  require(lo >= 0 && hi > lo, "uniform: need 0 <= lo < hi");
  return {DistFamily::kUniform, lo, hi, 0.0};
}

DistributionSpec DistributionSpec::bernoulli_two_point(double a, double b, double p_a) {
  require(a >= 0 && b >= 0 && a != b, "bernoulli_two_point: need distinct nonnegative atoms");
  require(p_a > 0 && p_a < 1, "bernoulli_two_point: need 0 < p_a < 1");
  return {DistFamily::kBernoulliTwoPoint, a, b, p_a};
}

DistributionSpec DistributionSpec::constant(double v) {
  require(v >= 0, "constant: value must be nonnegative");
  return {DistFamily::kConstant, v, 0.0, 0.0};
}

double DistributionSpec::cdf(double t) const {
  switch (family) {
    case DistFamily::kWeibullTail:
      return t <= 0 ? 0.0 : 1.0 - std::exp(-std::pow(t / p1, p0));
    case DistFamily::kExponential:
      return t <= 0 ? 0.0 : 1.0 - std::exp(-p0 * t);
    case DistFamily::kPareto:
      return t < p1 ? 0.0 : 1.0 - std::pow(p1 / t, p0);
    case DistFamily::kUniform:
      if (t < p0) return 0.0;
      if (t >= p1) return 1.0;
      return (t - p0) / (p1 - p0);
    case DistFamily::kBernoulliTwoPoint: {
      const double x1 = std::min(p0, p1), x2 = std::max(p0, p1);
      const double m1 = p0 < p1 ? p2 : 1.0 - p2;
      if (t < x1) return 0.0;
      if (t < x2) return m1;
      return 1.0;
    }
    case DistFamily::kConstant:
      return t < p0 ? 0.0 : 1.0;
  }
  return 0.0;
}

double DistributionSpec::quantile(double u) const {
  switch (family) {
    case DistFamily::kWeibullTail:
      return p1 * std::pow(-std::log1p(-u), 1.0 / p0);
    case DistFamily::kExponential:
      return -std::log1p(-u) / p0;
    case DistFamily::kPareto:
      return p1 * std::pow(1.0 - u, -1.0 / p0);
    case DistFamily::kUniform:
      return p0 + (p1 - p0) * u;
    case DistFamily::kBernoulliTwoPoint:
      return u < p2 ? p0 : p1;
    case DistFamily::kConstant:
      return p0;
  }
  return 0.0;
}

double DistributionSpec::mean() const {
  switch (family) {
    case DistFamily::kWeibullTail:
      return p1 * std::tgamma(1.0 + 1.0 / p0);
    case DistFamily::kExponential:
      return 1.0 / p0;
    case DistFamily::kPareto:
      return p0 > 1.0 ? p0 * p1 / (p0 - 1.0) : std::numeric_limits<double>::infinity();
    case DistFamily::kUniform:
      return 0.5 * (p0 + p1);
    case DistFamily::kBernoulliTwoPoint:
      return p2 * p0 + (1.0 - p2) * p1;
    case DistFamily::kConstant:
      return p0;
  }
  return 0.0;
}

double DistributionSpec::f_minus() const {
  switch (family) {
    case DistFamily::kWeibullTail:
    case DistFamily::kExponential:
      return 0.0;
    case DistFamily::kPareto:
      return p1;
    case DistFamily::kUniform:
      return p0;
    case DistFamily::kBernoulliTwoPoint:
      return std::min(p0, p1);
    case DistFamily::kConstant:
      return p0;
  }
  return 0.0;
}

double DistributionSpec::atom_at_f_minus() const {
  switch (family) {
    case DistFamily::kBernoulliTwoPoint:
      return p0 < p1 ? p2 : 1.0 - p2;
    case DistFamily::kConstant:
      return 1.0;
    default:
      return 0.0;
  }
}

bool DistributionSpec::continuous() const {
  return family != DistFamily::kBernoulliTwoPoint && family != DistFamily::kConstant;
}

bool DistributionSpec::integer_atomic() const {
  if (family == DistFamily::kBernoulliTwoPoint) return is_integer(p0) && is_integer(p1);
  if (family == DistFamily::kConstant) return is_integer(p0);
  return false;
}

bool DistributionSpec::has_finite_second_moment() const {
  if (family == DistFamily::kPareto) return p0 > 2.0;
  return true;
}

double DistributionSpec::tail_r() const {
  if (family == DistFamily::kWeibullTail) return p0;
  if (family == DistFamily::kExponential) return 1.0;
  return 0.0;
}

std::string DistributionSpec::family_name() const {
  switch (family) {
    case DistFamily::kWeibullTail:
      return "weibull_tail";
    case DistFamily::kExponential:
      return "exponential";
    case DistFamily::kPareto:
      return "pareto";
    case DistFamily::kUniform:
      return "uniform";
    case DistFamily::kBernoulliTwoPoint:
      return "bernoulli_two_point";
    case DistFamily::kConstant:
      return "constant";
  }
  return "?";
}

DistributionSpec distribution_from_json(const std::string& text) {
  try {
    auto j = nlohmann::json::parse(text);
    const std::string family = j.at("family").get<std::string>();
    const auto& p = j.at("params");
    if (family == "weibull_tail")
      return DistributionSpec::weibull_tail(p.at("r").get<double>(),
                                            p.value("scale", 1.0));
    if (family == "exponential") return DistributionSpec::exponential(p.at("rate").get<double>());
    if (family == "pareto")
      return DistributionSpec::pareto(p.at("exponent").get<double>(), p.at("min").get<double>());
    if (family == "uniform")
      return DistributionSpec::uniform(p.at("lo").get<double>(), p.at("hi").get<double>());
    if (family == "bernoulli_two_point")
      return DistributionSpec::bernoulli_two_point(p.at("a").get<double>(), p.at("b").get<double>(),
                                                   p.at("p_a").get<double>());
    if (family == "constant") return DistributionSpec::constant(p.at("v").get<double>());
    throw ConfigError("unknown distribution family: " + family);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& ex) {
    throw ConfigError(std::string("bad distribution spec: ") + ex.what());
  }
}

std::string distribution_to_json(const DistributionSpec& dist) {
  nlohmann::json p;
  switch (dist.family) {
    case DistFamily::kWeibullTail:
      p = {{"r", dist.p0}, {"scale", dist.p1}};
      break;
    case DistFamily::kExponential:
      p = {{"rate", dist.p0}};
      break;
    case DistFamily::kPareto:
      p = {{"exponent", dist.p0}, {"min", dist.p1}};
      break;
    case DistFamily::kUniform:
      p = {{"lo", dist.p0}, {"hi", dist.p1}};
      break;
    case DistFamily::kBernoulliTwoPoint:
      p = {{"a", dist.p0}, {"b", dist.p1}, {"p_a", dist.p2}};
      break;
    case DistFamily::kConstant:
      p = {{"v", dist.p0}};
      break;
  }
  nlohmann::json j = {{"family", dist.family_name()}, {"params", p}};
  return j.dump();
}

CriticalTable CriticalTable::defaults() {
  CriticalTable t;
  t.pc = {{2, 0.5}, {3, 0.2488}};
  t.pc_oriented = {{2, 0.6447}};
  return t;
}

const char* usefulness_name(Usefulness u) {
  switch (u) {
    case Usefulness::kUseful:
      return "useful";
    case Usefulness::kNotUseful:
      return "not_useful";
    case Usefulness::kUnknown:
      return "unknown";
  }
  return "?";
}

Usefulness useful_verdict(const DistributionSpec& dist, int d, const CriticalTable& table) {
  if (d < 2) throw std::invalid_argument("useful_verdict: d must be >= 2");
  const double fm = dist.f_minus();
  if (fm == 0.0) {
    auto it = table.pc.find(d);
    if (it == table.pc.end()) return Usefulness::kUnknown;
    return dist.cdf(0.0) < it->second ? Usefulness::kUseful : Usefulness::kNotUseful;
  }
  auto it = table.pc_oriented.find(d);
  if (it == table.pc_oriented.end()) return Usefulness::kUnknown;
  return dist.cdf(fm) < it->second ? Usefulness::kUseful : Usefulness::kNotUseful;
}

double condition_probability_lower_bound(const DistributionSpec& dist, double t, double gamma) {
  if (!(t > 0)) throw std::invalid_argument("condition_probability_lower_bound: t must be > 0");
  if (!(gamma > 0)) throw std::invalid_argument("condition_probability_lower_bound: gamma must be > 0");
  const double hi = gamma * t;
  if (hi <= t) return 0.0;
  if (dist.continuous()) return std::max(0.0, dist.cdf(hi) - dist.cdf(t));
  double mass = 0.0;
  if (dist.family == DistFamily::kBernoulliTwoPoint) {
    if (dist.p0 > t && dist.p0 < hi) mass += dist.p2;
    if (dist.p1 > t && dist.p1 < hi) mass += 1.0 - dist.p2;
  } else {
    if (dist.p0 > t && dist.p0 < hi) mass += 1.0;
  }
  return mass;
}

double uniform_from_words(std::uint64_t key, std::span<const std::uint64_t> words) {
  std::uint64_t h = mix64(key ^ kGolden);
  for (std::uint64_t w : words) h = mix64(h ^ w);
  return bits_to_unit(mix64(h ^ (kGolden + words.size())));
}

double dist_sample(const DistributionSpec& dist, std::uint64_t key, std::uint64_t index) {
  const std::uint64_t words[1] = {index};
  return dist.quantile(uniform_from_words(key, words));
}

WeightConfig::WeightConfig(DistributionSpec dist, std::uint64_t master_seed)
    : dist_(dist), master_(master_seed) {}

std::uint64_t WeightConfig::base_uniform_bits(std::span<const Coord> base, int axis) const {
  std::uint64_t key = master_;
  if (!layers_.empty()) {
    // Latest resample layer containing the edge wins.
    EdgeId e;
    e.base = LatticePoint(std::vector<Coord>(base.begin(), base.end()));
    e.axis = axis;
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) {
      if (it->edges->count(e)) {
        key = it->key;
        break;
      }
    }
  }
  std::uint64_t h = mix64(key ^ kGolden);
  for (Coord c : base) h = mix64(h ^ static_cast<std::uint64_t>(c));
  return mix64(h ^ (kGolden + static_cast<std::uint64_t>(axis) + (static_cast<std::uint64_t>(base.size()) << 8)));
}

double WeightConfig::weight_at(std::span<const Coord> base, int axis) const {
  if (overrides_) {
    EdgeId e;
    e.base = LatticePoint(std::vector<Coord>(base.begin(), base.end()));
    e.axis = axis;
    auto it = overrides_->find(e);
    if (it != overrides_->end()) {
      double w = it->second;
      for (double th : tilde_)
        if (w >= th) w += 1.0;
      return w;
    }
  }
  double w = dist_.quantile(bits_to_unit(base_uniform_bits(base, axis)));
  for (double th : tilde_)
    if (w >= th) w += 1.0;
  return w;
}

double WeightConfig::weight(const EdgeId& e) const {
  return weight_at(std::span<const Coord>(e.base.c.data(), e.base.c.size()), e.axis);
}

double WeightConfig::path_time(const std::vector<LatticePoint>& path) const {
  double t = 0.0;
  for (size_t i = 0; i + 1 < path.size(); ++i) t += weight(canonical_edge(path[i], path[i + 1]));
  return t;
}

WeightConfig WeightConfig::with_override(const EdgeId& e, double w) const {
  return with_overrides({{e, w}});
}

WeightConfig WeightConfig::with_overrides(const std::vector<std::pair<EdgeId, double>>& ws) const {
  WeightConfig out = *this;
  auto merged = overrides_ ? std::make_shared<EdgeMap<double>>(*overrides_)
                           : std::make_shared<EdgeMap<double>>();
  for (const auto& [e, w] : ws) {
    if (!(w >= 0)) throw std::invalid_argument("override weights must be nonnegative");
    (*merged)[e] = w;
  }
  out.overrides_ = std::move(merged);
  return out;
}

WeightConfig WeightConfig::resampled(std::shared_ptr<const EdgeSet> edges,
                                     std::uint64_t sub_seed) const {
  if (!edges) throw std::invalid_argument("resampled: null edge set");
  WeightConfig out = *this;
  Layer layer;
  layer.edges = std::move(edges);
  layer.key = mix64(master_ ^ mix64(sub_seed ^ 0x6a09e667f3bcc909ULL));
  out.layers_.push_back(std::move(layer));
  return out;
}

WeightConfig WeightConfig::resampled(const std::vector<EdgeId>& edges,
                                     std::uint64_t sub_seed) const {
  auto set = std::make_shared<EdgeSet>(edges.begin(), edges.end());
  return resampled(std::shared_ptr<const EdgeSet>(std::move(set)), sub_seed);
}

WeightConfig WeightConfig::perturbed_tilde(double threshold) const {
  if (!(threshold > 0)) throw std::invalid_argument("perturbed_tilde: threshold must be > 0");
  WeightConfig out = *this;
  out.tilde_.push_back(threshold);
  return out;
}

}  // namespace fpplab
