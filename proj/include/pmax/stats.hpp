#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "pmax/rng.hpp"

namespace pmax {

// Standard Frechet law, F(z) = exp(-1/z) on z > 0.
double frechet_cdf(double z);
double frechet_quantile(double p);
double frechet_sample(RngStream& rng);

double normal_cdf(double x);
// Upper tail 1 - Phi(x), accurate far into the tail.
double normal_sf(double x);
double normal_quantile(double p);

// Right-continuous empirical distribution function.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::span<const double> values);

  // #{values <= y} / n
  double operator()(double y) const;
  std::size_t count_at_most(double y) const;

  std::size_t size() const noexcept { return sorted_.size(); }
  const std::vector<double>& sorted_values() const noexcept { return sorted_; }

 private:
  std::vector<double> sorted_;
};

// Ceiling order statistic: the value at 1-based index ceil(k n / 100) of the
// sorted sample. k is a percent in (0, 100).
double percentile(std::span<const double> values, double k);
double percentile_sorted(std::span<const double> sorted, double k);

// Kolmogorov-Smirnov distance between the sample and a continuous CDF.
double ks_statistic(std::span<const double> values, const std::function<double(double)>& cdf);

double mean(std::span<const double> values);
// (n - 1)-denominator standard deviation.
double sample_sd(std::span<const double> values);
double pearson_correlation(std::span<const double> a, std::span<const double> b);

}  // namespace pmax
