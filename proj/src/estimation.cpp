#include "pmax/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "pmax/error.hpp"
#include "pmax/stats.hpp"

namespace pmax {

double alpha_from_cdf(double z, double f_value) {
  if (!(z > 0.0) || z == 1.0) throw DomainError("alpha_from_cdf: need 0 < z != 1");
  if (!(f_value > 0.0 && f_value < 1.0)) throw DomainError("alpha_from_cdf: F(z) must lie in (0, 1)");
  const double arg = -std::log(f_value) - 1.0 / z;
  if (!(arg > 0.0)) throw DomainError("alpha_from_cdf: -ln F(z) - 1/z must be positive");
  return std::log(arg) / std::log(1.0 / z);
}

void GridSpec::validate() const {
  if (!(k > 0.0 && k < 100.0)) throw DomainError("grid percentile k must lie in (0, 100)");
  if (!(start > 1.0)) throw DomainError("grid start must exceed 1");
  if (count == 1) throw DomainError("grid needs at least two points");
}

std::string describe(const DropCounts& drops) {
  std::ostringstream out;
  out << "Z<=1: " << drops.not_above_one << ", F=1: " << drops.cdf_is_one
      << ", F=0: " << drops.cdf_is_zero << ", -lnF-1/Z<=0: " << drops.log_argument_nonpositive;
  return out.str();
}

namespace {

AlphaEstimate grid_average(std::span<const double> sorted, const GridSpec& grid,
                           const std::function<double(double)>& cdf) {
  grid.validate();
  const double end = percentile_sorted(sorted, grid.k);
  const std::size_t count = grid.count == 0 ? sorted.size() : grid.count;
  if (count < 2) throw EstimationError("estimate_alpha: grid needs at least two points (sample too small)");

  AlphaEstimate est;
  est.grid_start = grid.start;
  est.grid_end = end;
  if (!(end > grid.start)) {
    std::ostringstream msg;
    msg << "estimate_alpha: " << grid.k << "th percentile " << end << " does not exceed the grid start "
        << grid.start << "; no usable grid";
    throw EstimationError(msg.str());
  }

  const double step = (end - grid.start) / static_cast<double>(count - 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double z = i + 1 == count ? end : grid.start + step * static_cast<double>(i);
    if (!(z > 1.0)) {
      ++est.drops.not_above_one;
      continue;
    }
    const double f = cdf(z);
    if (f >= 1.0) {
      ++est.drops.cdf_is_one;
      continue;
    }
    if (f <= 0.0) {
      ++est.drops.cdf_is_zero;
      continue;
    }
    if (!(-std::log(f) - 1.0 / z > 0.0)) {
      ++est.drops.log_argument_nonpositive;
      continue;
    }
    sum += alpha_from_cdf(z, f);
    ++est.n_valid;
  }
  est.n_dropped = est.drops.total();
  if (est.n_valid == 0) {
    std::ostringstream msg;
    msg << "estimate_alpha: no valid grid points on [" << grid.start << ", " << end << "] ("
        << describe(est.drops) << ")";
    throw EstimationError(msg.str());
  }
  est.value = sum / static_cast<double>(est.n_valid);
  return est;
}

std::vector<double> sorted_positive(std::span<const double> sample) {
  if (sample.empty()) throw DomainError("estimate_alpha: empty sample");
  std::vector<double> sorted(sample.begin(), sample.end());
  for (double v : sorted) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("estimate_alpha: sample values must be positive");
  }
  std::sort(sorted.begin(), sorted.end());
  return sorted;
}

}  // namespace

AlphaEstimate estimate_alpha(std::span<const double> sample, const GridSpec& grid) {
  const std::vector<double> sorted = sorted_positive(sample);
  const auto n = static_cast<double>(sorted.size());
  auto ecdf = [&](double y) {
    const auto c = std::upper_bound(sorted.begin(), sorted.end(), y) - sorted.begin();
    return static_cast<double>(c) / n;
  };
  return grid_average(sorted, grid, ecdf);
}

AlphaEstimate estimate_alpha_with_cdf(std::span<const double> sample, const GridSpec& grid,
                                      const std::function<double(double)>& cdf) {
  const std::vector<double> sorted = sorted_positive(sample);
  return grid_average(sorted, grid, cdf);
}

namespace {

// 1-based ordinal ranks; ties broken by position.
std::vector<std::size_t> ordinal_ranks(std::span<const Pair> pairs, bool second) {
  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return second ? pairs[a].second < pairs[b].second : pairs[a].first < pairs[b].first;
  });
  std::vector<std::size_t> rank(pairs.size());
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i + 1;
  return rank;
}

// Ranks as counts #{values <= v}: tied values share the largest rank, so
// ties stay visible to the tail estimator.
std::vector<std::size_t> max_ranks(std::span<const Pair> pairs, bool second) {
  auto value = [&](std::size_t i) { return second ? pairs[i].second : pairs[i].first; };
  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return value(a) < value(b); });
  std::vector<std::size_t> rank(pairs.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && value(order[j + 1]) == value(order[i])) ++j;
    for (std::size_t m = i; m <= j; ++m) rank[order[m]] = j + 1;
    i = j + 1;
  }
  return rank;
}

}  // namespace

EmpiricalLambda empirical_lambda(std::span<const Pair> pairs, double u) {
  if (pairs.size() < 100) throw DomainError("empirical_lambda: need at least 100 pairs");
  if (!(u > 0.0 && u < 1.0)) throw DomainError("empirical_lambda: u must lie in (0, 1)");
  const auto r1 = ordinal_ranks(pairs, false);
  const auto r2 = ordinal_ranks(pairs, true);
  const double cut = u * static_cast<double>(pairs.size());
  std::size_t first = 0, both = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (static_cast<double>(r1[i]) > cut) {
      ++first;
      if (static_cast<double>(r2[i]) > cut) ++both;
    }
  }
  if (first == 0) throw EstimationError("empirical_lambda: no conditioning exceedances at this level");
  return {static_cast<double>(both) / static_cast<double>(first), first, first < 20};
}

double empirical_eta(std::span<const Pair> pairs, double tail_fraction) {
  if (pairs.size() < 1000) throw DomainError("empirical_eta: need at least 1000 pairs");
  if (!(tail_fraction > 0.0 && tail_fraction <= 0.2))
    throw DomainError("empirical_eta: tail_fraction must lie in (0, 0.2]");
  const auto r1 = max_ranks(pairs, false);
  const auto r2 = max_ranks(pairs, true);
  const auto n1 = static_cast<double>(pairs.size() + 1);
  std::vector<double> t(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    // min(1/(1-F1), 1/(1-F2)) with F = rank / (n + 1)
    t[i] = n1 / (n1 - static_cast<double>(std::min(r1[i], r2[i])));
  }
  std::sort(t.begin(), t.end());
  const auto k = static_cast<std::size_t>(tail_fraction * static_cast<double>(pairs.size()));
  if (k < 1) throw DomainError("empirical_eta: tail fraction leaves no order statistics");
  const double threshold = t[t.size() - k - 1];
  if (!(t.back() > threshold)) throw EstimationError("empirical_eta: ties collapse the tail sample");
  double hill = 0.0;
  for (std::size_t i = 0; i < k; ++i) hill += std::log(t[t.size() - 1 - i] / threshold);
  hill /= static_cast<double>(k);
  return std::clamp(hill, std::numeric_limits<double>::min(), 1.0);
}

}  // namespace pmax
