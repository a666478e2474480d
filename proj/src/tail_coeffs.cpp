#include "pmax/tail_coeffs.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pmax/error.hpp"
#include "pmax/oracles.hpp"

namespace pmax {

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::Temporal: return "temporal";
    case Regime::Spatial: return "spatial";
    case Regime::SpatioTemporal: return "spatio-temporal";
  }
  return "?";
}

Regime TailContext::regime() const {
  if (!(alpha_x > 0.0) || !(alpha_xp > 0.0)) throw DomainError("tail context: alpha must be positive");
  if (degenerate()) throw DomainError("degenerate tail context: r = 0 and x = x' (lambda is trivially 1)");
  if (r == 0) return Regime::Spatial;
  return same_location() ? Regime::Temporal : Regime::SpatioTemporal;
}

TailContext make_context(const ModelSpec& spec, std::size_t r, const std::string& x,
                         const std::string& xp) {
  TailContext ctx;
  ctx.r = r;
  ctx.x = spec.location(x);
  ctx.xp = spec.location(xp);
  ctx.alpha_x = spec.alpha.at(x);
  ctx.alpha_xp = spec.alpha.at(xp);
  return ctx;
}

namespace {

std::string coefficient_label(CoefficientKind kind) { return kind == CoefficientKind::Lambda ? "lambda" : "eta"; }

TailCoefficient checked(CoefficientKind kind, double value, std::string derivation, Regime regime) {
  const bool ok = kind == CoefficientKind::Lambda ? (value >= 0.0 && value <= 1.0)
                                                  : (value > 0.0 && value <= 1.0);
  if (!ok) {
    std::ostringstream msg;
    msg << coefficient_label(kind) << " = " << value << " outside its range (" << derivation << ")";
    throw DomainError(msg.str());
  }
  return {kind, value, std::move(derivation), regime};
}

// Closed forms branch on exact equality with 1; flag near misses.
std::string with_boundary_note(std::string label, const TailContext& ctx) {
  for (double a : {ctx.alpha_x, ctx.alpha_xp}) {
    if (a != 1.0 && std::abs(a - 1.0) < 1e-9) {
      label += " [warning: alpha within 1e-9 of 1, boundary branch not taken]";
      break;
    }
  }
  return label;
}

void check_unit_interval(double v, const char* what, bool open_at_zero) {
  const bool ok = open_at_zero ? (v > 0.0 && v <= 1.0) : (v >= 0.0 && v <= 1.0);
  if (!ok) throw DomainError(std::string(what) + " outside its admissible range");
}

}  // namespace

TailCoefficient make_lambda(double value, std::string derivation, Regime regime) {
  return checked(CoefficientKind::Lambda, value, std::move(derivation), regime);
}

TailCoefficient make_eta(double value, std::string derivation, Regime regime) {
  return checked(CoefficientKind::Eta, value, std::move(derivation), regime);
}

TailCoefficient lambda_prop31(const TailContext& ctx, double lambda_x, double lambda_z) {
  const Regime regime = ctx.regime();
  check_unit_interval(lambda_x, "lambda_X", false);
  check_unit_interval(lambda_z, "lambda_Z", false);
  const double a = ctx.alpha_x;
  double value = 0.0;
  std::string branch;
  if (ctx.r > 0) {
    if (a < 1.0) {
      value = 0.0;
      branch = "general r>0, alpha(x)<1";
    } else if (a == 1.0) {
      value = 0.5 * lambda_x;
      branch = "general r>0, alpha(x)=1: lambda_X/2";
    } else {
      value = lambda_x;
      branch = "general r>0, alpha(x)>1: lambda_X";
    }
  } else {
    if (a < 1.0) {
      value = lambda_z;
      branch = "general r=0, alpha(x)<1: lambda_Z";
    } else if (a == 1.0) {
      value = 0.5 * (lambda_x + lambda_z);
      branch = "general r=0, alpha(x)=1: (lambda_X+lambda_Z)/2";
    } else {
      value = lambda_x;
      branch = "general r=0, alpha(x)>1: lambda_X";
    }
  }
  return make_lambda(value, with_boundary_note(branch, ctx), regime);
}

double lambda_z_common(double alpha_x, double alpha_xp) {
  if (!(alpha_x > 0.0) || !(alpha_xp > 0.0)) throw DomainError("lambda_z_common: alpha must be positive");
  // P(Z > y^{a'}) / P(Z > y^{a}) ~ y^{a - a'}
  return alpha_xp <= alpha_x ? 1.0 : 0.0;
}

TailCoefficient lambda_ex1(const TailContext& ctx) {
  const Regime regime = ctx.regime();
  const double a = ctx.alpha_x;
  const double ap = ctx.alpha_xp;
  switch (regime) {
    case Regime::Temporal:
      if (a < 1.0 || ctx.r > 1) return make_lambda(0.0, with_boundary_note("ex1 temporal: alpha(x)<1 or r>1", ctx), regime);
      if (a == 1.0) return make_lambda(1.0 / 6.0, "ex1 temporal: alpha(x)=1, r=1", regime);
      return make_lambda(1.0 / 3.0, with_boundary_note("ex1 temporal: alpha(x)>1, r=1", ctx), regime);
    case Regime::SpatioTemporal:
      return make_lambda(0.0, "ex1 spatio-temporal", regime);
    case Regime::Spatial:
      if (ap <= a && a < 1.0) return make_lambda(1.0, with_boundary_note("ex1 spatial: alpha(x')<=alpha(x)<1", ctx), regime);
      if (ap <= a && a == 1.0) return make_lambda(0.5, "ex1 spatial: alpha(x')<=alpha(x)=1", regime);
      return make_lambda(0.0, with_boundary_note("ex1 spatial: otherwise", ctx), regime);
  }
  throw DomainError("lambda_ex1: unknown regime");
}

double schlather_exponent(double z, double zp, double rho) {
  if (!(z > 0.0) || !(zp > 0.0)) throw DomainError("schlather_exponent: z, z' must be positive");
  if (!(rho >= -1.0 && rho <= 1.0)) throw DomainError("schlather_exponent: rho must lie in [-1, 1]");
  const double s = z + zp;
  const double root_arg = std::max(0.0, 1.0 - 2.0 * (rho + 1.0) * (z / s) * (zp / s));
  return 0.5 * (1.0 / z + 1.0 / zp) * (1.0 + std::sqrt(root_arg));
}

double schlather_bivariate_cdf(double z, double zp, double rho) {
  return std::exp(-schlather_exponent(z, zp, rho));
}

double schlather_pair_lambda(double rho) { return 1.0 - std::sqrt(std::max(0.0, (1.0 - rho) / 2.0)); }

double schlather_lag_one_lambda(double rho) {
  return 0.5 * (1.0 - std::sqrt(std::max(0.0, 1.0 - 4.0 / 9.0 * (rho + 1.0))));
}

double schlather_spatial_factor_as_printed(double rho) {
  return 0.5 * (1.0 - std::sqrt(std::max(0.0, 1.0 - 0.5 * (rho + 1.0))));
}

namespace {

TailCoefficient lambda_ex2_impl(const TailContext& ctx, const CorrelationModel& correlation,
                                double spatial_x_lambda, const std::string& tag) {
  const Regime regime = ctx.regime();
  const double a = ctx.alpha_x;
  const double ap = ctx.alpha_xp;
  const double rho = correlation(ctx.h());
  if (ctx.r > 1) return make_lambda(0.0, "ex2 r>1: 1-dependence", regime);
  if (ctx.r == 1) {
    const double g = schlather_lag_one_lambda(rho);
    if (a < 1.0) return make_lambda(0.0, with_boundary_note("ex2 lag 1: alpha(x)<1", ctx), regime);
    if (a == 1.0) return make_lambda(0.5 * g, "ex2 lag 1: alpha(x)=1, g(rho)/2", regime);
    return make_lambda(g, with_boundary_note("ex2 lag 1: alpha(x)>1, g(rho)", ctx), regime);
  }
  const double s = spatial_x_lambda;
  if (a == 1.0) {
    // alpha(x') = 1 is absent from the printed table; lambda_Z = 1 there.
    if (ap <= 1.0) return make_lambda(0.5 * s + 0.5, "ex2 spatial" + tag + ": alpha(x)=1, alpha(x')<=1", regime);
    return make_lambda(0.5 * s, "ex2 spatial" + tag + ": alpha(x)=1, alpha(x')>1", regime);
  }
  if (a < 1.0) {
    if (ap > a) return make_lambda(0.0, with_boundary_note("ex2 spatial: alpha(x)<1, alpha(x')>alpha(x)", ctx), regime);
    return make_lambda(1.0, with_boundary_note("ex2 spatial: alpha(x)<1, alpha(x')<=alpha(x)", ctx), regime);
  }
  return make_lambda(s, with_boundary_note("ex2 spatial" + tag + ": alpha(x)>1", ctx), regime);
}

}  // namespace

TailCoefficient lambda_ex2(const TailContext& ctx, const CorrelationModel& correlation) {
  const double rho = correlation(ctx.h());
  return lambda_ex2_impl(ctx, correlation, schlather_pair_lambda(rho), " (pairwise Schlather lambda)");
}

TailCoefficient lambda_ex2_as_printed(const TailContext& ctx, const CorrelationModel& correlation) {
  const double rho = correlation(ctx.h());
  return lambda_ex2_impl(ctx, correlation, schlather_spatial_factor_as_printed(rho), " (as printed)");
}

TailCoefficient eta_prop41(const TailContext& ctx, double eta_x, std::optional<double> eta_z) {
  const Regime regime = ctx.regime();
  check_unit_interval(eta_x, "eta_X", true);
  const double a = ctx.alpha_x;
  const double ap = ctx.alpha_xp;
  if (ctx.r > 0) {
    if (a < 1.0) {
      const double v = a * std::max(eta_x, 1.0 / (1.0 + std::min(ap, 1.0)));
      return make_eta(v, with_boundary_note("general eta as printed, r>0, alpha(x)<1", ctx), regime);
    }
    const double v = std::max({eta_x, 1.0 / (1.0 + a), 1.0 / (1.0 + ap)});
    return make_eta(v, with_boundary_note("general eta as printed, r>0, alpha(x)>=1", ctx), regime);
  }
  if (!eta_z) throw DomainError("eta_prop41: eta_Z is required when r = 0");
  check_unit_interval(*eta_z, "eta_Z", true);
  const double v = std::min(1.0, a) * std::max({eta_x, *eta_z, 1.0 / (1.0 + a), 1.0 / (1.0 + ap)});
  return make_eta(v, with_boundary_note("general eta as printed, r=0", ctx), regime);
}

TailCoefficient eta_ex1(const TailContext& ctx) {
  const Regime regime = ctx.regime();
  const double a = ctx.alpha_x;
  const double ap = ctx.alpha_xp;
  auto eta = [&](double v, const std::string& label) {
    return make_eta(v, with_boundary_note("ex1 " + label, ctx), regime);
  };
  switch (regime) {
    case Regime::Temporal:
      if (ctx.r == 1 && a < 1.0) return eta(std::max(0.5, a), "temporal: alpha(x)<1, r=1");
      if (ctx.r == 1) return eta(1.0, "temporal: alpha(x)>=1, r=1");
      return eta(0.5, "temporal: otherwise");
    case Regime::SpatioTemporal:
      return eta(0.5, "spatio-temporal");
    case Regime::Spatial:
      break;
  }
  // Printed spatial table, first match wins.
  if (ap <= a && a <= 1.0) return eta(1.0, "spatial: alpha(x')<=alpha(x)<=1");
  if (a < 1.0 && 1.0 < ap) return eta(a / (1.0 + a), "spatial: alpha(x)<1<alpha(x')");
  if (a < 1.0 && a < ap && ap < 1.0 + a) return eta(a / ap, "spatial: alpha(x)<1, alpha(x)<alpha(x')<1+alpha(x)");
  if (1.0 < a && a < ap) return eta(std::max(0.5, 1.0 / ap), "spatial: 1<alpha(x)<alpha(x')");
  if (ap < 1.0 && 1.0 < a) return eta(1.0 / (1.0 + ap), "spatial: alpha(x')<1<alpha(x)");
  if (ap < 1.0 && 1.0 < a && a < 1.0 + ap) return eta(1.0 / a, "spatial: alpha(x')<1<alpha(x)<1+alpha(x')");
  if (1.0 < ap && ap < a) return eta(std::max(0.5, 1.0 / a), "spatial: 1<alpha(x')<alpha(x)");
  // Boundaries not covered by any printed branch: continuous closure of the neighbour.
  if (a < 1.0) return eta(a / ap, "spatial: boundary closure alpha(x)<1, alpha(x')=1");
  if (a == 1.0) return eta(std::max(0.5, 1.0 / ap), "spatial: boundary closure alpha(x)=1<alpha(x')");
  return eta(std::max(0.5, 1.0 / a), "spatial: boundary closure alpha(x')=1 or alpha(x')=alpha(x)>1");
}

double x_layer_lambda(const ModelSpec& spec, const TailContext& ctx) {
  ctx.regime();
  const auto exponent = x_layer_exponent(spec, ctx);
  const double v = 2.0 - exponent(1.0, 1.0);
  return v < 1e-12 ? 0.0 : std::min(v, 1.0);  // snap rounding residue of exact independence
}

double x_layer_eta(const ModelSpec& spec, const TailContext& ctx) {
  // Max-stable pairs are either tail dependent or exactly independent.
  return x_layer_lambda(spec, ctx) > 1e-12 ? 1.0 : 0.5;
}

ExampleStructure classify(const ModelSpec& spec) {
  const auto& w = spec.temporal_weights;
  const bool paper_weights =
      w.size() == 2 && std::abs(w[0] - 2.0 / 3.0) < 1e-12 && std::abs(w[1] - 1.0 / 3.0) < 1e-12;
  if (!paper_weights || spec.z_coupling != ZCoupling::CommonScalar) return ExampleStructure::None;
  return spec.is_schlather() ? ExampleStructure::SchlatherInnovations
                             : ExampleStructure::IndependentInnovations;
}

}  // namespace pmax
