#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "pmax/error.hpp"
#include "pmax/fields.hpp"
#include "pmax/stats.hpp"
#include "pmax/tail_coeffs.hpp"

using namespace pmax;
using Catch::Approx;

namespace {

std::vector<Location> two_locations(double h) { return {{"a", 0.0, 0.0}, {"b", h, 0.0}}; }

AlphaMap alphas(std::initializer_list<std::pair<const std::string, double>> v) { return AlphaMap(std::map<std::string, double>(v)); }

double y_cdf(double z, double alpha) { return std::exp(-1.0 / z - std::pow(z, -alpha)); }

double joint_ecdf(const FieldSample& s, double z, double zp) {
  std::size_t hits = 0;
  for (std::size_t t = 0; t < s.n_time(); ++t) hits += (s.at(t, 0) <= z && s.at(t, 1) <= zp) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(s.n_time());
}

}  // namespace

TEST_CASE("spec validation") {
  CHECK(distance(Location{"a", 0, 0}, Location{"b", 3, 4}) == 5.0);
  CHECK(distance(Location{"a", 1, 2}, Location{"a", 1, 2}) == 0.0);

  AlphaMap a;
  CHECK_THROWS_AS(a.at("nowhere"), SpecError);
  CHECK_THROWS_AS(a.set("x", 0.0), SpecError);
  CHECK_THROWS_AS(a.set("x", -1.0), SpecError);

  ModelSpec spec = example_independent_spec(two_locations(1.0), alphas({{"a", 1.0}, {"b", 2.0}}));
  CHECK_NOTHROW(spec.validate());
  spec.temporal_weights = {0.5, 0.4};
  CHECK_THROWS_AS(spec.validate(), SpecError);
  spec.temporal_weights = {1.5, -0.5};
  CHECK_THROWS_AS(spec.validate(), SpecError);
  spec.temporal_weights = {2.0 / 3.0, 1.0 / 3.0};
  spec.alpha = alphas({{"a", 1.0}});
  CHECK_THROWS_AS(spec.validate(), SpecError);
  spec.alpha = alphas({{"a", 1.0}, {"b", 2.0}});
  spec.locations.push_back({"a", 5.0, 5.0});
  CHECK_THROWS_AS(spec.validate(), SpecError);

  CHECK_THROWS_AS((SchlatherTruncation{0.0, 10}.validate()), SpecError);
  CHECK_THROWS_AS((SchlatherTruncation{1.0, 10}.validate()), SpecError);
  CHECK_THROWS_AS((SchlatherTruncation{1e-4, 0}.validate()), SpecError);
}

TEST_CASE("field samples hold positive finite values") {
  std::vector<Location> locs{{"a", 0, 0}};
  CHECK_THROWS_AS(FieldSample(locs, 2, {1.0, 0.0}, Layer::Y, 0), DomainError);
  CHECK_THROWS_AS(FieldSample(locs, 2, {1.0, INFINITY}, Layer::Y, 0), DomainError);
  CHECK_THROWS_AS(FieldSample(locs, 2, {1.0}, Layer::Y, 0), DomainError);
  FieldSample s(locs, 2, {1.0, 2.0}, Layer::X, 5);
  CHECK(s.at(1, 0) == 2.0);
  CHECK(s.layer() == Layer::X);
  CHECK_THROWS_AS(s.location_index("b"), DomainError);
}

TEST_CASE("independent innovations have Frechet margins") {
  std::vector<Location> locs{{"a", 0, 0}, {"b", 1, 0}, {"c", 0, 1}};
  ModelSpec spec = example_independent_spec(locs, alphas({{"a", 1.0}, {"b", 1.0}, {"c", 1.0}}));
  RngStream rng(11, 0);
  const FieldSample innov = simulate_innovations(spec, 10000, rng);
  CHECK(innov.layer() == Layer::Innovation);
  for (std::size_t j = 0; j < 3; ++j) CHECK(ks_statistic(innov.column(j), frechet_cdf) < 0.02);
}

TEST_CASE("schlather innovations") {
  const CorrelationModel corr{};
  SECTION("bivariate cdf at (1,1), h = 1") {
    ModelSpec spec = example_schlather_spec(two_locations(1.0), alphas({{"a", 1.0}, {"b", 1.0}}), corr);
    RngStream rng(12, 0);
    const FieldSample s = simulate_innovations(spec, 100000, rng);
    CHECK(std::abs(joint_ecdf(s, 1.0, 1.0) - schlather_bivariate_cdf(1.0, 1.0, std::exp(-1.0))) < 0.01);
  }
  SECTION("one location margin") {
    std::vector<Location> one{{"a", 0, 0}};
    RngStream rng(13, 0);
    std::vector<double> xs(100000);
    std::size_t below_one = 0;
    for (double& x : xs) {
      x = schlather_field(one, corr, SchlatherTruncation{}, rng)[0];
      below_one += x <= 1.0 ? 1 : 0;
    }
    CHECK(ks_statistic(xs, frechet_cdf) < 0.01);
    CHECK(std::abs(static_cast<double>(below_one) / 1e5 - std::exp(-1.0)) < 0.005);
  }
  SECTION("coincident locations give a comonotone field") {
    std::vector<Location> same{{"a", 1, 1}, {"b", 1, 1}, {"c", 1, 1}};
    RngStream rng(14, 0);
    for (int i = 0; i < 200; ++i) {
      const auto v = schlather_field(same, corr, SchlatherTruncation{}, rng);
      REQUIRE(v[0] == v[1]);
      REQUIRE(v[1] == v[2]);
    }
  }
  SECTION("truncation stability") {
    std::vector<Location> locs = two_locations(0.5);
    SchlatherSimulator coarse(locs, corr, SchlatherTruncation{1e-4, 100000});
    SchlatherSimulator fine(locs, corr, SchlatherTruncation{1e-6, 100000});
    // one stream per draw, so both truncations see the same Poisson points
    std::vector<double> a, b;
    for (int i = 0; i < 10000; ++i) {
      RngStream r1(15, i), r2(15, i);
      a.push_back(coarse.draw(r1)[0]);
      b.push_back(fine.draw(r2)[0]);
    }
    const double qa = percentile(a, 99.0), qb = percentile(b, 99.0);
    CHECK(std::abs(qa - qb) / qb < 1e-3);
  }
  SECTION("truncation cap is reported") {
    SchlatherSimulator capped(two_locations(1.0), corr, SchlatherTruncation{1e-4, 1});
    RngStream rng(16, 0);
    bool raised = false;
    for (int i = 0; i < 100 && !raised; ++i) {
      try {
        capped.draw(rng);
      } catch (const TruncationError& e) {
        raised = true;
        CHECK(e.achieved_bound() > 0.0);
      }
    }
    CHECK(raised);
  }
  SECTION("relabeling at equal distances preserves the law") {
    // an equilateral triangle: every pair at distance 1
    std::vector<Location> tri{{"a", 0, 0}, {"b", 1, 0}, {"c", 0.5, std::sqrt(0.75)}};
    std::vector<Location> relabeled{tri[2], tri[0], tri[1]};
    SchlatherSimulator s1(tri, corr, SchlatherTruncation{}), s2(relabeled, corr, SchlatherTruncation{});
    RngStream r1(17, 0), r2(17, 1);
    const int n = 50000;
    double p1 = 0, p2 = 0;
    for (int i = 0; i < n; ++i) {
      const auto v = s1.draw(r1);
      const auto w = s2.draw(r2);
      p1 += (v[0] <= 1.0 && v[1] <= 1.0) ? 1 : 0;
      p2 += (w[0] <= 1.0 && w[1] <= 1.0) ? 1 : 0;
    }
    CHECK(std::abs(p1 - p2) / n < 0.01);
  }
}

TEST_CASE("moving maxima") {
  std::vector<Location> one{{"a", 0, 0}};
  SECTION("unit weight is the identity") {
    FieldSample innov(one, 3, {1.0, 2.0, 3.0}, Layer::Innovation, 0);
    const std::vector<double> w{1.0};
    const FieldSample x = moving_max(innov, w);
    CHECK(x.values() == innov.values());
  }
  SECTION("hand computation") {
    FieldSample innov(one, 2, {3.0, 1.5}, Layer::Innovation, 0);  // X^_{n-1} = 3, X^_n = 1.5
    const std::vector<double> w{2.0 / 3.0, 1.0 / 3.0};
    const FieldSample x = moving_max(innov, w);
    REQUIRE(x.n_time() == 1);
    CHECK(x.at(0, 0) == Approx(1.0).epsilon(1e-15));
  }
  SECTION("margins stay Frechet") {
    ModelSpec spec = example_independent_spec(one, alphas({{"a", 1.0}}));
    RngStream rng(18, 0);
    const FieldSample innov = simulate_innovations(spec, 100001, rng);
    const std::vector<double> w{2.0 / 3.0, 1.0 / 3.0};
    const FieldSample x = moving_max(innov, w);
    CHECK(x.n_time() == 100000);
    CHECK(ks_statistic(x.column(0), frechet_cdf) < 0.01);
  }
  SECTION("bad weights") {
    FieldSample innov(one, 3, {1.0, 2.0, 3.0}, Layer::Innovation, 0);
    const std::vector<double> w{0.5, 0.4};
    CHECK_THROWS_AS(moving_max(innov, w), SpecError);
  }
}

TEST_CASE("pmax simulation") {
  SECTION("Y margin") {
    ModelSpec spec = example_independent_spec({{"a", 0, 0}}, alphas({{"a", 1.5}}));
    RngStream rng(19, 0);
    const FieldSample y = simulate_pmax(spec, 100000, rng);
    CHECK(y.layer() == Layer::Y);
    CHECK(ks_statistic(y.column(0), [](double z) { return y_cdf(z, 1.5); }) < 0.01);
  }
  SECTION("layer margins") {
    ModelSpec spec = example_independent_spec(two_locations(1.0), alphas({{"a", 0.7}, {"b", 2.0}}));
    spec.z_coupling = ZCoupling::IndependentPerLocation;
    RngStream rng(20, 0);
    const PmaxLayers layers = simulate_pmax_layers(spec, 50000, rng);
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(ks_statistic(layers.x.column(j), frechet_cdf) < 0.01);
      CHECK(ks_statistic(layers.z.column(j), frechet_cdf) < 0.01);
    }
    CHECK(ks_statistic(layers.y.column(0), [](double z) { return y_cdf(z, 0.7); }) < 0.01);
    CHECK(ks_statistic(layers.y.column(1), [](double z) { return y_cdf(z, 2.0); }) < 0.01);
  }
  SECTION("common Z couples locations with small alpha") {
    ModelSpec spec = example_independent_spec(two_locations(1.0), alphas({{"a", 0.5}, {"b", 0.5}}));
    RngStream rng(21, 0);
    const FieldSample y = simulate_pmax(spec, 1000000, rng);
    const double qa = percentile(y.column(0), 99.0);
    const double qb = percentile(y.column(1), 99.0);
    std::size_t cond = 0, both = 0;
    for (std::size_t t = 0; t < y.n_time(); ++t) {
      if (y.at(t, 0) > qa) {
        ++cond;
        both += y.at(t, 1) > qb ? 1 : 0;
      }
    }
    CHECK(static_cast<double>(both) / static_cast<double>(cond) >= 0.8);
  }
  SECTION("deterministic under a fixed stream") {
    ModelSpec spec = example_schlather_spec(two_locations(1.0), alphas({{"a", 0.5}, {"b", 1.5}}));
    RngStream r1(22, 3), r2(22, 3);
    CHECK(simulate_pmax(spec, 500, r1).values() == simulate_pmax(spec, 500, r2).values());
  }
  SECTION("composition is monotone in X and Z") {
    std::vector<Location> one{{"a", 0, 0}};
    const AlphaMap a = alphas({{"a", 0.8}});
    FieldSample x(one, 3, {0.5, 1.0, 2.0}, Layer::X, 0);
    FieldSample x_up(one, 3, {0.6, 1.5, 2.0}, Layer::X, 0);
    FieldSample z(one, 3, {1.0, 0.2, 3.0}, Layer::Z, 0);
    FieldSample z_up(one, 3, {1.1, 0.3, 3.0}, Layer::Z, 0);
    const auto y = compose_pmax(x, z, a);
    const auto yx = compose_pmax(x_up, z, a);
    const auto yz = compose_pmax(x, z_up, a);
    for (std::size_t t = 0; t < 3; ++t) {
      CHECK(y.at(t, 0) == std::max(x.at(t, 0), std::pow(z.at(t, 0), 1.0 / 0.8)));
      CHECK(yx.at(t, 0) >= y.at(t, 0));
      CHECK(yz.at(t, 0) >= y.at(t, 0));
    }
  }
}

TEST_CASE("lagged pairs") {
  ModelSpec spec = example_independent_spec(two_locations(1.0), alphas({{"a", 1.5}, {"b", 0.5}}));
  SECTION("counts and diagonal") {
    RngStream rng(23, 0);
    const FieldSample y = simulate_pmax(spec, 100, rng);
    CHECK(lagged_pairs(y, 10, "a", "a").size() == 90);
    for (const auto& [u, v] : lagged_pairs(y, 0, "a", "a")) REQUIRE(u == v);
    for (const auto& [u, v] : lagged_pairs(y, 1, "a", "b", PairTransform::FrechetCdf)) {
      REQUIRE(u > 0.0);
      REQUIRE(v < 1.0);
    }
    CHECK_THROWS_AS(lagged_pairs(y, 100, "a", "a"), DomainError);
    CHECK_THROWS_AS(lagged_pairs(y, 1, "a", "zz"), DomainError);
  }
  SECTION("lag-2 exceedances are uncorrelated") {
    RngStream rng(24, 0);
    const FieldSample y = simulate_pmax(spec, 200000, rng);
    const auto pairs = lagged_pairs(y, 2, "a", "a");
    const double q95 = percentile(y.column(0), 95.0);
    std::vector<double> ia, ib;
    for (const auto& [u, v] : pairs) {
      ia.push_back(u > q95 ? 1.0 : 0.0);
      ib.push_back(v > q95 ? 1.0 : 0.0);
    }
    CHECK(std::abs(pearson_correlation(ia, ib)) < 0.01);

    // co-exceedance rate at u = 0.99 for r = 2, 3 vs the independent value
    const double q99 = percentile(y.column(0), 99.0);
    for (std::size_t r : {2u, 3u}) {
      const auto pr = lagged_pairs(y, r, "a", "a");
      double hits = 0;
      for (const auto& [u, v] : pr) hits += (u > q99 && v > q99) ? 1 : 0;
      const double n = static_cast<double>(pr.size());
      const double p = 1e-4;
      CHECK(std::abs(hits / n - p) < 3.0 * std::sqrt(p * (1 - p) / n));
    }
  }
}
