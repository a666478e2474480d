#include "pmax/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/erf.hpp>

#include "pmax/error.hpp"

namespace pmax {

double frechet_cdf(double z) {
  if (!(z > 0.0)) throw DomainError("frechet_cdf: z must be positive, got " + std::to_string(z));
  return std::exp(-1.0 / z);
}

double frechet_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("frechet_quantile: p must lie in (0, 1)");
  return -1.0 / std::log(p);
}

double frechet_sample(RngStream& rng) { return -1.0 / std::log(rng.uniform()); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("normal_quantile: p must lie in (0, 1)");
  // erfc_inv keeps full relative precision in the upper tail.
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

EmpiricalCdf::EmpiricalCdf(std::span<const double> values) : sorted_(values.begin(), values.end()) {
  if (sorted_.empty()) throw DomainError("EmpiricalCdf: empty sample");
  std::sort(sorted_.begin(), sorted_.end());
}

std::size_t EmpiricalCdf::count_at_most(double y) const {
  return static_cast<std::size_t>(std::upper_bound(sorted_.begin(), sorted_.end(), y) -
                                  sorted_.begin());
}

double EmpiricalCdf::operator()(double y) const {
  return static_cast<double>(count_at_most(y)) / static_cast<double>(sorted_.size());
}

double percentile_sorted(std::span<const double> sorted, double k) {
  if (sorted.empty()) throw DomainError("percentile: empty sample");
  if (!(k > 0.0 && k < 100.0)) throw DomainError("percentile: k must lie in (0, 100)");
  const auto n = static_cast<double>(sorted.size());
  auto index = static_cast<std::size_t>(std::ceil(k * n / 100.0));
  index = std::clamp<std::size_t>(index, 1, sorted.size());
  return sorted[index - 1];
}

double percentile(std::span<const double> values, double k) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return percentile_sorted(sorted, k);
}

double ks_statistic(std::span<const double> values, const std::function<double(double)>& cdf) {
  if (values.empty()) throw DomainError("ks_statistic: empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

double mean(std::span<const double> values) {
  if (values.empty()) throw DomainError("mean: empty sample");
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

double sample_sd(std::span<const double> values) {
  if (values.size() < 2) throw DomainError("sample_sd: need at least two values");
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double pearson_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) throw DomainError("pearson_correlation: size mismatch");
  const double ma = mean(a);
  const double mb = mean(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace pmax
