#include "pmax/gaussian.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "pmax/error.hpp"

namespace pmax {

void CorrelationModel::validate() const {
  if (!(range > 0.0) || !std::isfinite(range))
    throw SpecError("correlation range c2 must be positive and finite");
  if (!(smoothness > 0.0 && smoothness <= 2.0))
    throw SpecError("correlation smoothness nu must lie in (0, 2]");
}

double CorrelationModel::operator()(double h) const {
  if (h < 0.0) throw DomainError("correlation: negative distance");
  if (h == 0.0) return 1.0;
  return std::exp(-std::pow(h / range, smoothness));
}

namespace {

// Pivot tolerance relative to the matrix dimension.
constexpr double kPivotTolerance = 1e-12;

bool try_factor(const Eigen::MatrixXd& matrix, Eigen::MatrixXd& factor) {
  Eigen::LDLT<Eigen::MatrixXd> ldlt(matrix);
  if (ldlt.info() != Eigen::Success) return false;
  const Eigen::VectorXd d = ldlt.vectorD();
  const double tol = kPivotTolerance * static_cast<double>(matrix.rows());
  if (d.minCoeff() < -tol) return false;
  const Eigen::VectorXd sqrt_d = d.cwiseMax(0.0).cwiseSqrt();
  Eigen::MatrixXd l = ldlt.matrixL();
  // matrix = P^T L D L^T P
  factor = ldlt.transpositionsP().transpose() * (l * sqrt_d.asDiagonal());
  return true;
}

}  // namespace

GaussianSampler::GaussianSampler(const Eigen::MatrixXd& correlation) {
  if (correlation.rows() != correlation.cols() || correlation.rows() == 0)
    throw DomainError("GaussianSampler: correlation must be a non-empty square matrix");
  if (!correlation.isApprox(correlation.transpose(), 1e-12))
    throw DomainError("GaussianSampler: correlation matrix is not symmetric");
  for (Eigen::Index i = 0; i < correlation.rows(); ++i) {
    if (std::abs(correlation(i, i) - 1.0) > 1e-12)
      throw DomainError("GaussianSampler: correlation matrix must have unit diagonal");
  }

  if (try_factor(correlation, factor_)) return;
  const Eigen::Index m = correlation.rows();
  for (double jitter : std::array{1e-12, 1e-10, 1e-8}) {
    Eigen::MatrixXd shifted = correlation + jitter * Eigen::MatrixXd::Identity(m, m);
    if (try_factor(shifted, factor_)) {
      jitter_ = jitter;
      return;
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(correlation, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = eig.eigenvalues();
  std::ostringstream msg;
  msg << "GaussianSampler: factorization failed after jitter 1e-8; eigenvalues in ["
      << ev.minCoeff() << ", " << ev.maxCoeff() << "]";
  if (ev.minCoeff() > 0.0) msg << ", condition number " << ev.maxCoeff() / ev.minCoeff();
  throw NumericError(msg.str());
}

void GaussianSampler::draw(RngStream& rng, std::span<double> out) const {
  const Eigen::Index m = factor_.rows();
  if (out.size() != static_cast<std::size_t>(m)) throw DomainError("GaussianSampler: output size");
  Eigen::VectorXd z(m);
  for (Eigen::Index i = 0; i < m; ++i) z(i) = rng.normal();
  Eigen::Map<Eigen::VectorXd>(out.data(), m) = factor_ * z;
}

std::vector<double> GaussianSampler::draw(RngStream& rng) const {
  std::vector<double> out(dimension());
  draw(rng, out);
  return out;
}

std::vector<double> gaussian_vector(RngStream& rng, const Eigen::MatrixXd& correlation) {
  return GaussianSampler(correlation).draw(rng);
}

}  // namespace pmax
