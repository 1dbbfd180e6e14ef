#include "fpplab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fpplab {

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (successes > trials) throw std::invalid_argument("successes exceed trials");
  WilsonInterval w;
  if (trials == 0) return w;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  w.lo = std::max(0.0, center - half);
  w.hi = std::min(1.0, center + half);
  return w;
}

LinearFit ols_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("x and y lengths differ");
  if (x.size() < 2) throw std::invalid_argument("fit needs at least two points");
  LinearFit fit;
  fit.n = x.size();
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("x values are all equal");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ssr += r * r;
  }
  fit.r2 = syy == 0.0 ? 1.0 : 1.0 - ssr / syy;
  fit.slope_se = x.size() > 2 ? std::sqrt(ssr / (n - 2.0) / sxx) : 0.0;
  return fit;
}

double median_of(std::vector<double> xs) {
  if (xs.empty()) throw std::invalid_argument("median of an empty sample");
  std::sort(xs.begin(), xs.end());
  const size_t h = xs.size() / 2;
  return xs.size() % 2 ? xs[h] : 0.5 * (xs[h - 1] + xs[h]);
}

VarianceEstimate variance_with_se(const std::vector<double>& xs) {
  if (xs.empty()) throw std::invalid_argument("variance of an empty sample");
  VarianceEstimate est;
  const double n = static_cast<double>(xs.size());
  double s = 0, q = 0;
  for (double x : xs) s += x;
  est.mean = s / n;
  for (double x : xs) q += (x - est.mean) * (x - est.mean);
  est.var = xs.size() > 1 ? q / (n - 1.0) : 0.0;
  if (xs.size() < 3) return est;

  // Jackknife over leave-one-out variances, each computed from the moments.
  std::vector<double> loo(xs.size());
  double sum_loo = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    const double mean_i = (s - xs[i]) / (n - 1.0);
    const double centered = q - (xs[i] - est.mean) * (xs[i] - est.mean);
    // q is centered at the full mean; recenter at mean_i.
    const double q_i = centered - (n - 1.0) * (mean_i - est.mean) * (mean_i - est.mean);
    loo[i] = q_i / (n - 2.0);
    sum_loo += loo[i];
  }
  const double bar = sum_loo / n;
  double ss = 0;
  for (double v : loo) ss += (v - bar) * (v - bar);
  est.var_se = std::sqrt((n - 1.0) / n * ss);
  return est;
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("KS statistic of an empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, f - static_cast<double>(i) / n);
    d = std::max(d, static_cast<double>(i + 1) / n - f);
  }
  return d;
}

TrendTest ca_trend(const std::vector<std::uint64_t>& successes,
                   const std::vector<std::uint64_t>& trials, const std::vector<double>& scores) {
  if (successes.size() != trials.size() || successes.size() != scores.size())
    throw std::invalid_argument("trend test arrays must have equal length");
  if (successes.size() < 2) throw std::invalid_argument("trend test needs at least two groups");
  double total = 0, hits = 0;
  for (size_t i = 0; i < trials.size(); ++i) {
    if (successes[i] > trials[i]) throw std::invalid_argument("successes exceed trials");
    total += static_cast<double>(trials[i]);
    hits += static_cast<double>(successes[i]);
  }
  if (total == 0) throw std::invalid_argument("trend test needs observations");
  const double pbar = hits / total;

  double t_stat = 0, sw = 0, sww = 0;
  for (size_t i = 0; i < trials.size(); ++i) {
    t_stat += scores[i] * static_cast<double>(successes[i]);
    sw += scores[i] * static_cast<double>(trials[i]);
    sww += scores[i] * scores[i] * static_cast<double>(trials[i]);
  }
  const double expect = pbar * sw;
  const double var = pbar * (1.0 - pbar) * (sww - sw * sw / total);

  TrendTest t;
  if (var <= 0.0) return t;  // degenerate pooled proportion: no detectable trend
  t.z = (t_stat - expect) / std::sqrt(var);
  t.p_increasing = 1.0 - normal_cdf(t.z);
  t.p_decreasing = normal_cdf(t.z);
  return t;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace fpplab
