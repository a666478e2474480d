#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pmax/fields.hpp"
#include "pmax/tail_coeffs.hpp"

namespace pmax {

// Survival functions of a bivariate pair (A, B):
//   marginal_a(y) = P(A > y), marginal_b(y) = P(B > y),
//   joint(ya, yb) = P(A > ya, B > yb).
class JointSurvivalFn {
 public:
  using Marginal = std::function<double(double)>;
  using Joint = std::function<double(double, double)>;

  JointSurvivalFn(Marginal a, Marginal b, Joint joint, std::string label);

  double marginal_a(double y) const { return a_(y); }
  double marginal_b(double y) const { return b_(y); }
  double joint(double ya, double yb) const { return joint_(ya, yb); }
  double joint(double y) const { return joint_(y, y); }
  const std::string& label() const noexcept { return label_; }

  // Threshold y with P(A > y) = p, by bracketing on log y.
  double quantile_a(double survival) const;
  double quantile_b(double survival) const;

 private:
  Marginal a_;
  Marginal b_;
  Joint joint_;
  std::string label_;
};

// Pair law given by exponent functions V = -log F. Survivals are formed as
// -expm1(-V) so tail probabilities keep full relative precision.
using Exponent2 = std::function<double(double, double)>;
using Exponent1 = std::function<double(double)>;
JointSurvivalFn from_exponents(Exponent1 va, Exponent1 vb, Exponent2 vab, std::string label);

JointSurvivalFn independent_frechet_pair();
JointSurvivalFn comonotone_frechet_pair();
// Bivariate normal with correlation rho, margins mapped to unit Frechet.
// The orthant probability is integrated numerically.
JointSurvivalFn gaussian_frechet_pair(double rho);

// Exponent of the X layer pair (X_n(x), X_{n+r}(x')) for any ModelSpec.
Exponent2 x_layer_exponent(const ModelSpec& spec, const TailContext& ctx);

// Exact law of (Y_n(x), Y_{n+r}(x')), composed from the X and Z layers.
JointSurvivalFn joint_cdf_builder(const ModelSpec& spec, const TailContext& ctx);

// 13 log-spaced thresholds over [1e2, 1e6].
std::vector<double> default_oracle_grid();
std::vector<double> log_grid(double lo, double hi, std::size_t count);

struct LambdaOracleResult {
  double value = 0.0;        // clamped to [0, 1]
  double raw_value = 0.0;    // unclamped ratio at the top of the grid
  std::vector<double> grid;
  std::vector<double> ratios;  // P(A > y, B > y) / P(A > y) over the grid
  bool converged = false;      // last two ratios within 1e-3
};

LambdaOracleResult lambda_oracle(const JointSurvivalFn& joint, std::span<const double> grid);

enum class EtaScale {
  // Regress log P(A > y, B > y) on log P(A > y) at common raw thresholds.
  ConditioningMargin,
  // Map both margins to unit Frechet first (grid values are Frechet levels t).
  UnitFrechet,
};

struct EtaOracleResult {
  double value = 0.0;      // clamped to (0, 1]
  double raw_value = 0.0;  // 1 / slope
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;         // natural-log units
  double normalized_residual = 0.0;  // rms residual / sd of log joint survival
  std::vector<double> log_marginal;
  std::vector<double> log_joint;
};

EtaOracleResult eta_oracle(const JointSurvivalFn& joint, std::span<const double> grid,
                           EtaScale scale = EtaScale::ConditioningMargin);

}  // namespace pmax
