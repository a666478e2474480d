#include "pmax/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "pmax/error.hpp"
#include "pmax/stats.hpp"

namespace pmax {

JointSurvivalFn::JointSurvivalFn(Marginal a, Marginal b, Joint joint, std::string label)
    : a_(std::move(a)), b_(std::move(b)), joint_(std::move(joint)), label_(std::move(label)) {}

namespace {

double solve_survival(const JointSurvivalFn::Marginal& survival, double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("survival quantile: p must lie in (0, 1)");
  const double target = std::log(p);
  auto g = [&](double log_y) { return std::log(survival(std::exp(log_y))) - target; };
  // g is non-increasing in log y; widen the bracket until it changes sign.
  double lo = -1.0, hi = 1.0;
  while (g(lo) < 0.0) {
    lo *= 2.0;
    if (lo < -700.0) throw PrecisionError("survival quantile: lower bracket not found");
  }
  while (g(hi) > 0.0) {
    hi *= 2.0;
    if (hi > 700.0) throw PrecisionError("survival quantile: upper bracket not found");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

// -expm1(-v): survival from an exponent without cancellation.
double survival_from_exponent(double v) { return -std::expm1(-v); }

}  // namespace

double JointSurvivalFn::quantile_a(double survival) const { return solve_survival(a_, survival); }
double JointSurvivalFn::quantile_b(double survival) const { return solve_survival(b_, survival); }

JointSurvivalFn from_exponents(Exponent1 va, Exponent1 vb, Exponent2 vab, std::string label) {
  auto sa = [va](double y) { return survival_from_exponent(va(y)); };
  auto sb = [vb](double y) { return survival_from_exponent(vb(y)); };
  auto joint = [va, vb, vab](double ya, double yb) {
    // 1 - F_A - F_B + F_AB = S_A + S_B - (1 - F_AB)
    return survival_from_exponent(va(ya)) + survival_from_exponent(vb(yb)) -
           survival_from_exponent(vab(ya, yb));
  };
  return JointSurvivalFn(sa, sb, joint, std::move(label));
}

JointSurvivalFn independent_frechet_pair() {
  return from_exponents([](double z) { return 1.0 / z; }, [](double z) { return 1.0 / z; },
                        [](double z, double zp) { return 1.0 / z + 1.0 / zp; },
                        "independent unit Frechet pair");
}

JointSurvivalFn comonotone_frechet_pair() {
  return from_exponents([](double z) { return 1.0 / z; }, [](double z) { return 1.0 / z; },
                        [](double z, double zp) { return 1.0 / std::min(z, zp); },
                        "comonotone unit Frechet pair");
}

JointSurvivalFn gaussian_frechet_pair(double rho) {
  if (!(rho > -1.0 && rho < 1.0)) throw DomainError("gaussian_frechet_pair: rho must lie in (-1, 1)");
  auto margin = [](double y) { return survival_from_exponent(1.0 / y); };
  auto joint = [rho](double ya, double yb) {
    // Normal-scale thresholds: Phi(s) = exp(-1/y).
    const double s = -normal_quantile(survival_from_exponent(1.0 / ya));
    const double t = -normal_quantile(survival_from_exponent(1.0 / yb));
    const double c = std::sqrt(1.0 - rho * rho);
    auto integrand = [=](double u) {
      const double x = s + u;
      return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi) * normal_sf((t - rho * x) / c);
    };
    boost::math::quadrature::exp_sinh<double> integrator;
    return integrator.integrate(integrand, 0.0, std::numeric_limits<double>::infinity(), 1e-13);
  };
  std::ostringstream label;
  label << "Gaussian pair (rho = " << rho << ") on unit Frechet margins";
  return JointSurvivalFn(margin, margin, joint, label.str());
}

Exponent2 x_layer_exponent(const ModelSpec& spec, const TailContext& ctx) {
  const std::vector<double> w = spec.temporal_weights;
  const auto q = static_cast<long>(w.size()) - 1;
  const auto r = static_cast<long>(ctx.r);
  const bool same = ctx.same_location();

  std::function<double(double, double)> pair;
  if (const auto* s = std::get_if<SchlatherInnovation>(&spec.innovation)) {
    const double rho = same ? 1.0 : s->correlation(ctx.h());
    pair = [rho](double u, double v) { return schlather_exponent(u, v, rho); };
  } else if (same) {
    pair = [](double u, double v) { return std::max(1.0 / u, 1.0 / v); };
  } else {
    pair = [](double u, double v) { return 1.0 / u + 1.0 / v; };
  }

  // Innovation offsets d touching X_n (weight w_d) or X_{n+r} (weight w_{d+r}).
  std::set<long> offsets;
  for (long k = 0; k <= q; ++k) {
    offsets.insert(k);
    offsets.insert(k - r);
  }
  struct Term {
    double a;
    double b;
  };
  std::vector<Term> terms;
  for (long d : offsets) {
    const double a = (d >= 0 && d <= q) ? w[static_cast<std::size_t>(d)] : 0.0;
    const double b = (d + r >= 0 && d + r <= q) ? w[static_cast<std::size_t>(d + r)] : 0.0;
    if (a > 0.0 || b > 0.0) terms.push_back({a, b});
  }
  return [terms, pair](double z, double zp) {
    double v = 0.0;
    for (const auto& [a, b] : terms) {
      if (a > 0.0 && b > 0.0) {
        v += pair(z / a, zp / b);
      } else if (a > 0.0) {
        v += a / z;
      } else {
        v += b / zp;
      }
    }
    return v;
  };
}

JointSurvivalFn joint_cdf_builder(const ModelSpec& spec, const TailContext& ctx) {
  spec.validate();
  spec.location(ctx.x.id);
  spec.location(ctx.xp.id);
  const double a = ctx.alpha_x;
  const double ap = ctx.alpha_xp;
  const Exponent2 vx = x_layer_exponent(spec, ctx);
  const bool shared_z =
      ctx.r == 0 && (spec.z_coupling == ZCoupling::CommonScalar || ctx.same_location());

  auto va = [a](double z) { return 1.0 / z + std::pow(z, -a); };
  auto vb = [ap](double z) { return 1.0 / z + std::pow(z, -ap); };
  auto vab = [vx, a, ap, shared_z](double z, double zp) {
    const double za = std::pow(z, -a);
    const double zb = std::pow(zp, -ap);
    return vx(z, zp) + (shared_z ? std::max(za, zb) : za + zb);
  };

  std::ostringstream label;
  label << "pMAX pair r=" << ctx.r << " x=" << ctx.x.id << " x'=" << ctx.xp.id << " alpha=(" << a
        << ", " << ap << ")" << (spec.is_schlather() ? " Schlather" : " independent") << " innovations";
  return from_exponents(va, vb, vab, label.str());
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0 && hi > lo) || count < 2) throw DomainError("log_grid: need 0 < lo < hi and count >= 2");
  std::vector<double> grid(count);
  const double step = (std::log10(hi) - std::log10(lo)) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = std::pow(10.0, std::log10(lo) + step * static_cast<double>(i));
  }
  grid.back() = hi;
  return grid;
}

std::vector<double> default_oracle_grid() { return log_grid(1e2, 1e6, 13); }

namespace {

void check_grid(std::span<const double> grid, double min_decades) {
  if (grid.size() < 2) throw DomainError("oracle grid needs at least two points");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw DomainError("oracle grid must be strictly increasing");
  }
  if (!(grid.front() > 0.0) || std::log10(grid.back() / grid.front()) < min_decades - 1e-9) {
    std::ostringstream msg;
    msg << "oracle grid must span at least " << min_decades << " decades";
    throw DomainError(msg.str());
  }
}

}  // namespace

LambdaOracleResult lambda_oracle(const JointSurvivalFn& joint, std::span<const double> grid) {
  check_grid(grid, 4.0);
  LambdaOracleResult out;
  out.grid.assign(grid.begin(), grid.end());
  for (double y : grid) {
    const double m = joint.marginal_a(y);
    double j = joint.joint(y);
    if (!(m > 0.0) || !std::isfinite(m) || !std::isfinite(j)) {
      std::ostringstream msg;
      msg << "lambda_oracle: marginal survival underflowed at y = " << y << " (" << joint.label() << ")";
      throw PrecisionError(msg.str());
    }
    if (j < 0.0) {
      if (j < -1e-13 * m) throw PrecisionError("lambda_oracle: negative joint survival beyond rounding");
      j = 0.0;
    }
    out.ratios.push_back(j / m);
  }
  out.raw_value = out.ratios.back();
  out.value = std::clamp(out.raw_value, 0.0, 1.0);
  out.converged = std::abs(out.ratios[out.ratios.size() - 1] - out.ratios[out.ratios.size() - 2]) < 1e-3;
  return out;
}

EtaOracleResult eta_oracle(const JointSurvivalFn& joint, std::span<const double> grid, EtaScale scale) {
  check_grid(grid, 3.0);
  EtaOracleResult out;
  for (double y : grid) {
    double m = 0.0, j = 0.0;
    if (scale == EtaScale::ConditioningMargin) {
      m = joint.marginal_a(y);
      j = joint.joint(y);
    } else {
      m = -std::expm1(-1.0 / y);
      j = joint.joint(joint.quantile_a(m), joint.quantile_b(m));
    }
    if (!(m > 0.0) || !(j > 0.0) || !std::isfinite(m) || !std::isfinite(j)) {
      std::ostringstream msg;
      msg << "eta_oracle: survival underflowed at y = " << y << " (" << joint.label() << ")";
      throw PrecisionError(msg.str());
    }
    const double lj = std::log(j);
    if (!out.log_joint.empty() && lj > out.log_joint.back() + 1e-12) {
      throw PrecisionError("eta_oracle: joint survival is not monotone over the grid (" + joint.label() + ")");
    }
    out.log_marginal.push_back(std::log(m));
    out.log_joint.push_back(lj);
  }

  const auto n = static_cast<double>(grid.size());
  const double mx = mean(out.log_marginal);
  const double my = mean(out.log_joint);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double dx = out.log_marginal[i] - mx;
    const double dy = out.log_joint[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double e = out.log_joint[i] - (out.intercept + out.slope * out.log_marginal[i]);
    ssr += e * e;
  }
  out.rms_residual = std::sqrt(ssr / n);
  out.normalized_residual = syy > 0.0 ? std::sqrt(ssr / syy) : 0.0;
  out.raw_value = 1.0 / out.slope;
  out.value = std::clamp(out.raw_value, std::numeric_limits<double>::min(), 1.0);
  return out;
}

}  // namespace pmax
