#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "pmax/error.hpp"
#include "pmax/fields.hpp"
#include "pmax/tail_coeffs.hpp"

using namespace pmax;
using Catch::Approx;

namespace {

TailContext ctx_of(std::size_t r, double h, double a, double ap) {
  TailContext c;
  c.r = r;
  c.x = {"x", 0.0, 0.0};
  c.xp = h == 0.0 ? Location{"x", 0.0, 0.0} : Location{"xp", h, 0.0};
  c.alpha_x = a;
  c.alpha_xp = ap;
  return c;
}

TailContext temporal(std::size_t r, double a) { return ctx_of(r, 0.0, a, a); }

ModelSpec spec_for(const TailContext& c, bool schlather) {
  std::vector<Location> locs{c.x};
  AlphaMap alpha;
  alpha.set(c.x.id, c.alpha_x);
  if (!c.same_location()) {
    locs.push_back(c.xp);
    alpha.set(c.xp.id, c.alpha_xp);
  }
  return schlather ? example_schlather_spec(locs, alpha) : example_independent_spec(locs, alpha);
}

const std::vector<double> kAlphas{0.3, 0.5, 0.7, 1.0, 1.5, 2.0, 3.0};

}  // namespace

TEST_CASE("regimes") {
  CHECK(temporal(1, 1.0).regime() == Regime::Temporal);
  CHECK(ctx_of(0, 1.0, 1.0, 1.0).regime() == Regime::Spatial);
  CHECK(ctx_of(2, 1.0, 1.0, 1.0).regime() == Regime::SpatioTemporal);
  TailContext degenerate = temporal(0, 1.0);
  CHECK(degenerate.degenerate());
  CHECK_THROWS_AS(degenerate.regime(), DomainError);
  CHECK_THROWS_AS(lambda_ex1(degenerate), DomainError);
  CHECK_THROWS_AS(eta_ex1(degenerate), DomainError);
}

TEST_CASE("coefficient ranges are enforced") {
  CHECK_THROWS_AS(make_lambda(1.5, "x", Regime::Spatial), DomainError);
  CHECK_THROWS_AS(make_lambda(-0.1, "x", Regime::Spatial), DomainError);
  CHECK_THROWS_AS(make_eta(0.0, "x", Regime::Spatial), DomainError);
  CHECK_NOTHROW(make_lambda(0.0, "x", Regime::Spatial));
  CHECK_NOTHROW(make_eta(1.0, "x", Regime::Spatial));
  CHECK_THROWS_AS(lambda_prop31(temporal(1, 2.0), 1.2, 0.0), DomainError);
}

TEST_CASE("general lambda") {
  CHECK(lambda_prop31(temporal(1, 2.0), 1.0 / 3.0, 0.0).value == Approx(1.0 / 3.0));
  CHECK(lambda_prop31(temporal(1, 0.5), 1.0 / 3.0, 0.0).value == 0.0);
  CHECK(lambda_prop31(ctx_of(0, 1.0, 1.0, 1.0), 0.0, 1.0).value == 0.5);

  CHECK(lambda_z_common(0.8, 0.8) == 1.0);
  CHECK(lambda_z_common(0.5, 2.0) == 0.0);
  CHECK(lambda_z_common(1.0, 0.5) == 1.0);
  CHECK_THROWS_AS(lambda_z_common(0.0, 1.0), DomainError);
}

TEST_CASE("independent-innovation lambda") {
  CHECK(lambda_ex1(temporal(1, 1.5)).value == Approx(1.0 / 3.0));
  CHECK(lambda_ex1(temporal(1, 1.0)).value == Approx(1.0 / 6.0));
  CHECK(lambda_ex1(temporal(1, 0.7)).value == 0.0);
  CHECK(lambda_ex1(temporal(2, 1.5)).value == 0.0);
  CHECK(lambda_ex1(ctx_of(0, 1.0, 0.7, 0.6)).value == 1.0);
  CHECK(lambda_ex1(ctx_of(0, 1.0, 1.0, 0.6)).value == 0.5);
  CHECK(lambda_ex1(ctx_of(0, 1.0, 0.6, 0.7)).value == 0.0);
  CHECK(lambda_ex1(ctx_of(0, 1.0, 1.5, 0.5)).value == 0.0);
  for (double a : kAlphas) CHECK(lambda_ex1(ctx_of(1, 1.0, a, 0.9)).value == 0.0);

  const auto near = lambda_ex1(temporal(1, 1.0 + 1e-12));
  CHECK(near.derivation.find("warning") != std::string::npos);
}

TEST_CASE("schlather bivariate cdf") {
  CHECK(schlather_bivariate_cdf(1.0, 1.0, 1.0) == Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(schlather_bivariate_cdf(1.0, 1.0, -1.0) == Approx(std::exp(-2.0)).epsilon(1e-14));
  CHECK(schlather_bivariate_cdf(1.0, 1.0, 0.0) == Approx(std::exp(-(1.0 + std::sqrt(0.5)))).epsilon(1e-14));
  CHECK(schlather_bivariate_cdf(1.0, 1.0, 0.0) == Approx(0.18132).margin(1e-4));
  // comonotone limit is exp(-1/min(z, z'))
  CHECK(schlather_bivariate_cdf(2.0, 0.5, 1.0) >= std::exp(-2.0) - 1e-12);
  CHECK_THROWS_AS(schlather_bivariate_cdf(0.0, 1.0, 0.5), DomainError);
  CHECK_THROWS_AS(schlather_bivariate_cdf(1.0, 1.0, 1.5), DomainError);
}

TEST_CASE("schlather-innovation lambda") {
  const CorrelationModel corr{};
  CHECK(lambda_ex2(temporal(1, 2.0), corr).value == Approx(1.0 / 3.0).epsilon(1e-14));
  for (double h : {0.0, 0.5, 1.0, 3.0}) CHECK(lambda_ex2(ctx_of(1, h, 0.5, 2.0), corr).value == 0.0);
  CHECK(lambda_ex2(ctx_of(2, 1.0, 2.0, 2.0), corr).value == 0.0);

  // spatial, alpha(x) > 1, rho -> 0: the pairwise Schlather value 1 - sqrt(1/2);
  // the printed spatial factor is half of it
  const TailContext far = ctx_of(0, 60.0, 2.0, 2.0);
  CHECK(lambda_ex2(far, corr).value == Approx(1.0 - std::sqrt(0.5)).margin(1e-12));
  CHECK(lambda_ex2_as_printed(far, corr).value == Approx(0.5 * (1.0 - std::sqrt(0.5))).margin(1e-12));
  CHECK(schlather_spatial_factor_as_printed(0.3) == Approx(0.5 * schlather_pair_lambda(0.3)).epsilon(1e-14));

  // agrees with the independent-innovation values at x = x'
  for (double a : kAlphas) CHECK(lambda_ex2(temporal(1, a), corr).value == Approx(lambda_ex1(temporal(1, a)).value));

  SECTION("non-increasing in h") {
    for (double a : kAlphas) {
      for (double ap : kAlphas) {
        for (std::size_t r : {0u, 1u}) {
          double prev = 2.0;
          for (double h = 0.05; h < 6.0; h += 0.05) {
            const double v = lambda_ex2(ctx_of(r, h, a, ap), corr).value;
            REQUIRE(v <= prev + 1e-15);
            prev = v;
          }
        }
      }
    }
  }
}

TEST_CASE("general lambda composes the closed forms") {
  const CorrelationModel corr{};
  for (bool schlather : {false, true}) {
    for (double a : kAlphas) {
      for (double ap : kAlphas) {
        for (std::size_t r : {0u, 1u, 2u}) {
          for (double h : {0.0, 0.5, 1.0, 3.0}) {
            if (r == 0 && h == 0.0) continue;
            const TailContext c = ctx_of(r, h, a, r > 0 && h == 0.0 ? a : ap);
            const ModelSpec spec = spec_for(c, schlather);
            const double lx = x_layer_lambda(spec, c);
            const double lz = lambda_z_common(c.alpha_x, c.alpha_xp);
            const double general = lambda_prop31(c, lx, lz).value;
            const double closed = schlather ? lambda_ex2(c, corr).value : lambda_ex1(c).value;
            INFO("schlather=" << schlather << " r=" << r << " h=" << h << " a=" << a << " ap=" << c.alpha_xp);
            REQUIRE(general == Approx(closed).margin(1e-12));
          }
        }
      }
    }
  }
}

TEST_CASE("general eta as printed") {
  CHECK(eta_prop41(temporal(1, 2.0), 0.5, std::nullopt).value == Approx(0.5));
  CHECK(eta_prop41(ctx_of(0, 1.0, 1.0, 1.0), 1.0, 1.0).value == Approx(1.0));
  CHECK(eta_prop41(ctx_of(1, 1.0, 0.5, 2.0), 0.5, std::nullopt).value == Approx(0.25));
  CHECK_THROWS_AS(eta_prop41(ctx_of(0, 1.0, 1.0, 1.0), 1.0, std::nullopt), DomainError);
}

TEST_CASE("independent-innovation eta") {
  CHECK(eta_ex1(temporal(1, 0.4)).value == Approx(0.5));
  CHECK(eta_ex1(temporal(1, 0.7)).value == Approx(0.7));
  CHECK(eta_ex1(temporal(1, 1.5)).value == 1.0);
  CHECK(eta_ex1(temporal(2, 1.5)).value == 0.5);
  CHECK(eta_ex1(ctx_of(1, 1.0, 1.5, 0.5)).value == 0.5);
  CHECK(eta_ex1(ctx_of(0, 1.0, 0.5, 2.0)).value == Approx(1.0 / 3.0));
  CHECK(eta_ex1(ctx_of(0, 1.0, 0.5, 0.5)).value == 1.0);
  CHECK(eta_ex1(ctx_of(0, 1.0, 0.5, 0.8)).value == Approx(0.625));
  CHECK(eta_ex1(ctx_of(0, 1.0, 1.5, 2.0)).value == Approx(0.5));
  CHECK(eta_ex1(ctx_of(0, 1.0, 1.2, 4.0)).value == Approx(0.5));
  CHECK(eta_ex1(ctx_of(0, 1.0, 2.0, 0.5)).value == Approx(2.0 / 3.0));
  CHECK(eta_ex1(ctx_of(0, 1.0, 3.0, 2.0)).value == Approx(0.5));
  // boundaries between printed branches
  CHECK(eta_ex1(ctx_of(0, 1.0, 0.5, 1.0)).value == Approx(0.5));
  CHECK(eta_ex1(ctx_of(0, 1.0, 1.0, 2.0)).value == Approx(0.5));
  CHECK(eta_ex1(ctx_of(0, 1.0, 1.5, 1.0)).value == Approx(2.0 / 3.0));
  for (double a : kAlphas)
    for (double ap : kAlphas) {
      const double v = eta_ex1(ctx_of(0, 1.0, a, ap)).value;
      REQUIRE(v > 0.0);
      REQUIRE(v <= 1.0);
    }
}

TEST_CASE("x layer coefficients") {
  const TailContext lag1 = temporal(1, 1.0);
  CHECK(x_layer_lambda(spec_for(lag1, false), lag1) == Approx(1.0 / 3.0));
  CHECK(x_layer_eta(spec_for(lag1, false), lag1) == 1.0);
  const TailContext lag2 = temporal(2, 1.0);
  CHECK(x_layer_lambda(spec_for(lag2, false), lag2) == 0.0);
  CHECK(x_layer_eta(spec_for(lag2, false), lag2) == 0.5);
  const TailContext sp = ctx_of(0, 1.0, 1.0, 1.0);
  CHECK(x_layer_lambda(spec_for(sp, true), sp) == Approx(schlather_pair_lambda(std::exp(-1.0))));
}

TEST_CASE("example classification") {
  std::vector<Location> locs{{"a", 0, 0}};
  AlphaMap alpha;
  alpha.set("a", 1.0);
  CHECK(classify(example_independent_spec(locs, alpha)) == ExampleStructure::IndependentInnovations);
  CHECK(classify(example_schlather_spec(locs, alpha)) == ExampleStructure::SchlatherInnovations);
  ModelSpec other = example_independent_spec(locs, alpha);
  other.temporal_weights = {0.5, 0.5};
  CHECK(classify(other) == ExampleStructure::None);
  other = example_independent_spec(locs, alpha);
  other.z_coupling = ZCoupling::IndependentPerLocation;
  CHECK(classify(other) == ExampleStructure::None);
}
