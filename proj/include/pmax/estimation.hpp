#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pmax {

// alpha = ln(-ln F(z) - 1/z) / ln(1/z), the inversion of F(z) = exp(-1/z - z^-alpha).
double alpha_from_cdf(double z, double f_value);

// Evaluation grid for the alpha estimator: `count` equally spaced points from
// `start` to the k-th sample percentile. count == 0 means "sample size".
struct GridSpec {
  double k = 95.0;
  double start = 1.1;
  std::size_t count = 0;

  void validate() const;
};

struct DropCounts {
  std::size_t not_above_one = 0;       // Z_i <= 1
  std::size_t cdf_is_one = 0;          // F(Z_i) = 1
  std::size_t cdf_is_zero = 0;         // F(Z_i) = 0
  std::size_t log_argument_nonpositive = 0;  // -ln F(Z_i) - 1/Z_i <= 0

  std::size_t total() const {
    return not_above_one + cdf_is_one + cdf_is_zero + log_argument_nonpositive;
  }
};

struct AlphaEstimate {
  double value = 0.0;
  std::size_t n_valid = 0;
  std::size_t n_dropped = 0;
  DropCounts drops;
  double grid_start = 0.0;
  double grid_end = 0.0;
};

std::string describe(const DropCounts& drops);

// Grid average of alpha_from_cdf with F replaced by the sample's empirical CDF.
AlphaEstimate estimate_alpha(std::span<const double> sample, const GridSpec& grid);

// Same grid and drop rules with an arbitrary CDF; used with the exact marginal
// as an oracle for the estimator's arithmetic.
AlphaEstimate estimate_alpha_with_cdf(std::span<const double> sample, const GridSpec& grid,
                                      const std::function<double(double)>& cdf);

using Pair = std::pair<double, double>;

struct EmpiricalLambda {
  double value = 0.0;
  std::size_t conditioning_exceedances = 0;
  bool low_count_warning = false;  // fewer than 20 conditioning exceedances
};

// #{both ranks > u n} / #{first rank > u n}
EmpiricalLambda empirical_lambda(std::span<const Pair> pairs, double u);

// Hill estimator over the top tail_fraction of T = min(1/(1-F1), 1/(1-F2)),
// with rank-based margins F = rank / (n + 1). Clamped to (0, 1].
double empirical_eta(std::span<const Pair> pairs, double tail_fraction = 0.05);

}  // namespace pmax
