#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pmax/rng.hpp"

namespace pmax {

// Powered-exponential correlation rho(h) = exp(-(h / range)^smoothness).
struct CorrelationModel {
  double range = 1.0;       // c2 > 0
  double smoothness = 1.0;  // nu in (0, 2]

  void validate() const;
  double operator()(double h) const;
};

// Draws zero-mean Gaussian vectors with a prescribed correlation matrix.
//
// The matrix is factored once with a pivoted LDL^T, which tolerates exact
// rank deficiency (coincident locations) without perturbing the draw. If the
// decomposition reports a materially negative pivot, diagonal jitter of
// 1e-12, 1e-10 and 1e-8 is tried in turn before giving up with a
// NumericError that carries the eigenvalue range of the input.
class GaussianSampler {
 public:
  explicit GaussianSampler(const Eigen::MatrixXd& correlation);

  std::size_t dimension() const noexcept { return static_cast<std::size_t>(factor_.rows()); }
  double jitter() const noexcept { return jitter_; }

  void draw(RngStream& rng, std::span<double> out) const;
  std::vector<double> draw(RngStream& rng) const;

 private:
  Eigen::MatrixXd factor_;  // factor_ * factor_^T == correlation (+ jitter I)
  double jitter_ = 0.0;
};

// One draw; factors the matrix on every call. Use GaussianSampler for repeated draws.
std::vector<double> gaussian_vector(RngStream& rng, const Eigen::MatrixXd& correlation);

}  // namespace pmax
