#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "pmax/fields.hpp"

namespace pmax {

enum class Regime { Temporal, Spatial, SpatioTemporal };

std::string to_string(Regime regime);

// Query (lag, x, x') for the pair (Y_n(x), Y_{n+r}(x')).
struct TailContext {
  std::size_t r = 0;
  Location x;
  Location xp;
  double alpha_x = 1.0;
  double alpha_xp = 1.0;

  bool same_location() const { return x.id == xp.id; }
  double h() const { return distance(x, xp); }
  bool degenerate() const { return r == 0 && same_location(); }
  // Throws DomainError for the degenerate context r = 0, x = x'.
  Regime regime() const;
};

TailContext make_context(const ModelSpec& spec, std::size_t r, const std::string& x,
                         const std::string& xp);

enum class CoefficientKind { Lambda, Eta };

// A lambda in [0, 1] or an eta in (0, 1] together with how it was obtained.
struct TailCoefficient {
  CoefficientKind kind;
  double value;
  std::string derivation;
  Regime regime;
};

TailCoefficient make_lambda(double value, std::string derivation, Regime regime);
TailCoefficient make_eta(double value, std::string derivation, Regime regime);

// General pMAX tail dependence from the X-layer lambda and, for r = 0, the
// lambda of (Z(x')^{1/alpha(x')} | Z(x)^{1/alpha(x)}).
TailCoefficient lambda_prop31(const TailContext& ctx, double lambda_x, double lambda_z);

// lambda(Z^{1/alpha'} | Z^{1/alpha}) for one shared Frechet Z.
double lambda_z_common(double alpha_x, double alpha_xp);

// Moving maxima (2/3, 1/3) over independent innovations, common Z.
TailCoefficient lambda_ex1(const TailContext& ctx);

// Exponent V(z, z') = -log P(X <= z, X' <= z') of the Schlather pair.
double schlather_exponent(double z, double zp, double rho);
double schlather_bivariate_cdf(double z, double zp, double rho);

// lambda of a same-time Schlather pair, 2 - V(1, 1) = 1 - sqrt((1 - rho) / 2).
double schlather_pair_lambda(double rho);
// lambda of the lag-one moving-maxima (2/3, 1/3) Schlather pair,
// (1 - sqrt(1 - 4/9 (rho + 1))) / 2.
double schlather_lag_one_lambda(double rho);
// The spatial factor as it appears in the printed spatial table,
// (1 - sqrt(1 - (rho + 1) / 2)) / 2, i.e. half of schlather_pair_lambda.
double schlather_spatial_factor_as_printed(double rho);

// Moving maxima (2/3, 1/3) over Schlather innovations, common Z. The spatial
// branches use the pairwise lambda implied by the Schlather bivariate CDF.
TailCoefficient lambda_ex2(const TailContext& ctx, const CorrelationModel& correlation);
// Same branches with the printed spatial factor substituted for the X-layer lambda.
TailCoefficient lambda_ex2_as_printed(const TailContext& ctx, const CorrelationModel& correlation);

// General residual coefficient formula exactly as printed. eta_z is
// required when r = 0 and ignored otherwise.
TailCoefficient eta_prop41(const TailContext& ctx, double eta_x, std::optional<double> eta_z);

// Residual coefficients of the independent-innovation example (printed tables).
TailCoefficient eta_ex1(const TailContext& ctx);

// Closed-form lambda and eta of the X layer alone, for any ModelSpec. Exact:
// the layer is max-stable, so lambda = 2 - V(1, 1) and eta is 1 or 1/2.
double x_layer_lambda(const ModelSpec& spec, const TailContext& ctx);
double x_layer_eta(const ModelSpec& spec, const TailContext& ctx);

// Which worked example a spec matches, if any.
enum class ExampleStructure { None, IndependentInnovations, SchlatherInnovations };
ExampleStructure classify(const ModelSpec& spec);

}  // namespace pmax
