#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "pmax/error.hpp"
#include "pmax/gaussian.hpp"
#include "pmax/rng.hpp"
#include "pmax/stats.hpp"

using namespace pmax;
using Catch::Approx;

TEST_CASE("rng streams are reproducible and independent") {
  RngStream a(42, 7), b(42, 7), c(42, 8);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const auto va = a.next_u64();
    REQUIRE(va == b.next_u64());
    differs = differs || va != c.next_u64();
  }
  REQUIRE(differs);

  RngStream u(1, 0);
  for (int i = 0; i < 10000; ++i) {
    const double x = u.uniform();
    REQUIRE(x > 0.0);
    REQUIRE(x < 1.0);
    REQUIRE(u.below(3) < 3);
  }
}

TEST_CASE("frechet cdf") {
  CHECK(frechet_cdf(1.0) == Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(frechet_cdf(1e12) > 1.0 - 1e-11);
  CHECK(frechet_cdf(1.0 / std::numbers::ln2) == Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(frechet_cdf(0.0), DomainError);
  CHECK_THROWS_AS(frechet_cdf(-1.0), DomainError);
}

TEST_CASE("frechet sampling") {
  CHECK(frechet_quantile(std::exp(-1.0)) == Approx(1.0).epsilon(1e-15));

  RngStream rng(2024, 0);
  std::vector<double> xs(100000);
  for (double& x : xs) x = frechet_sample(rng);
  CHECK(ks_statistic(xs, frechet_cdf) < 0.01);

  RngStream again(2024, 0);
  for (std::size_t i = 0; i < 100; ++i) REQUIRE(frechet_sample(again) == xs[i]);
}

TEST_CASE("normal helpers") {
  CHECK(normal_cdf(0.0) == Approx(0.5));
  CHECK(normal_sf(1.0) == Approx(1.0 - normal_cdf(1.0)).epsilon(1e-12));
  CHECK(normal_sf(30.0) > 0.0);
  CHECK(normal_quantile(0.975) == Approx(1.959963984540054).epsilon(1e-12));
  CHECK(normal_quantile(1.0 - 1e-4) == Approx(3.719016485455709).epsilon(1e-10));
}

TEST_CASE("gaussian vectors") {
  const int n = 100000;
  SECTION("identity -> uncorrelated") {
    RngStream rng(1, 1);
    GaussianSampler s(Eigen::MatrixXd::Identity(2, 2));
    std::vector<double> a(n), b(n);
    for (int i = 0; i < n; ++i) {
      const auto v = s.draw(rng);
      a[i] = v[0];
      b[i] = v[1];
    }
    CHECK(std::abs(pearson_correlation(a, b)) < 0.02);
    CHECK(mean(a) == Approx(0.0).margin(0.02));
    CHECK(sample_sd(a) == Approx(1.0).margin(0.02));
  }
  SECTION("all ones -> equal components") {
    RngStream rng(1, 2);
    Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(2, 2);
    GaussianSampler s(ones);
    CHECK(s.jitter() == 0.0);
    for (int i = 0; i < 1000; ++i) {
      const auto v = s.draw(rng);
      REQUIRE(v[0] == v[1]);
    }
  }
  SECTION("rho = exp(-1)") {
    RngStream rng(1, 3);
    const double rho = std::exp(-1.0);
    Eigen::MatrixXd m(2, 2);
    m << 1.0, rho, rho, 1.0;
    GaussianSampler s(m);
    std::vector<double> a(n), b(n);
    for (int i = 0; i < n; ++i) {
      const auto v = s.draw(rng);
      a[i] = v[0];
      b[i] = v[1];
    }
    CHECK(pearson_correlation(a, b) == Approx(rho).margin(0.02));
  }
  SECTION("invalid matrices") {
    Eigen::MatrixXd asym(2, 2);
    asym << 1.0, 0.5, 0.2, 1.0;
    CHECK_THROWS_AS(GaussianSampler(asym), DomainError);
    Eigen::MatrixXd indefinite(2, 2);
    indefinite << 1.0, 2.0, 2.0, 1.0;
    CHECK_THROWS_AS(GaussianSampler(indefinite), NumericError);
  }
}

TEST_CASE("correlation model") {
  CorrelationModel rho;
  CHECK(rho(0.0) == 1.0);
  CHECK(rho(1.0) == Approx(std::exp(-1.0)));
  double prev = 1.0;
  for (double h = 0.1; h < 10.0; h += 0.1) {
    REQUIRE(rho(h) <= prev);
    REQUIRE(rho(h) > 0.0);
    prev = rho(h);
  }
  CHECK_THROWS_AS((CorrelationModel{0.0, 1.0}.validate()), SpecError);
  CHECK_THROWS_AS((CorrelationModel{1.0, 2.5}.validate()), SpecError);
}

TEST_CASE("percentile and empirical cdf") {
  std::vector<double> v;
  for (int i = 1; i <= 100; ++i) v.push_back(i);
  CHECK(percentile(v, 95.0) == 95.0);
  CHECK(percentile(std::vector<double>{5.0}, 37.0) == 5.0);
  CHECK_THROWS(percentile(v, 0.0));
  CHECK_THROWS(percentile(v, 100.0));

  RngStream rng(9, 0);
  std::vector<double> xs(100000);
  for (double& x : xs) x = frechet_sample(rng);
  const double q = 1.0 / std::log(4.0 / 3.0);
  CHECK(percentile(xs, 75.0) == Approx(q).epsilon(0.02));

  EmpiricalCdf F(std::vector<double>{3.0, 1.0, 2.0, 2.0});
  CHECK(F(0.5) == 0.0);
  CHECK(F(1.0) == 0.25);
  CHECK(F(2.0) == 0.75);
  CHECK(F(2.5) == 0.75);
  CHECK(F(3.0) == 1.0);
}
