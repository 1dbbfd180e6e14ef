#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace fpplab {

struct WilsonInterval {
  double lo = 0.0, hi = 1.0;
};

// Wilson score interval; the default z is the two-sided 95% quantile.
WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                               double z = 1.959963984540054);

struct LinearFit {
  double slope = 0.0, intercept = 0.0;
  double slope_se = 0.0;
  double r2 = 0.0;
  std::size_t n = 0;
};

LinearFit ols_fit(const std::vector<double>& x, const std::vector<double>& y);

double median_of(std::vector<double> xs);  // by value; sorts its copy

struct VarianceEstimate {
  double mean = 0.0;
  double var = 0.0;     // sample variance (ddof 1)
  double var_se = 0.0;  // jackknife standard error of the variance
};

VarianceEstimate variance_with_se(const std::vector<double>& xs);

// Two-sided Kolmogorov-Smirnov statistic against a reference cdf.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

struct TrendTest {
  double z = 0.0;
  double p_increasing = 0.5;  // P(Z >= z): small means a significant increase
  double p_decreasing = 0.5;  // P(Z <= z)
};

// Cochran-Armitage test for a monotone trend in binomial proportions.
TrendTest ca_trend(const std::vector<std::uint64_t>& successes,
                   const std::vector<std::uint64_t>& trials, const std::vector<double>& scores);

double normal_cdf(double x);

}  // namespace fpplab
