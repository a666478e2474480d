#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pmax/gaussian.hpp"
#include "pmax/rng.hpp"

namespace pmax {

struct Location {
  std::string id;
  double x1 = 0.0;
  double x2 = 0.0;
};

double distance(const Location& a, const Location& b);

// Per-location tail exponent alpha(x) > 0. Lookups of unknown ids throw.
class AlphaMap {
 public:
  AlphaMap() = default;
  explicit AlphaMap(std::map<std::string, double> values);

  void set(const std::string& id, double alpha);
  double at(const std::string& id) const;
  bool contains(const std::string& id) const { return values_.contains(id); }
  const std::map<std::string, double>& values() const noexcept { return values_; }

 private:
  std::map<std::string, double> values_;
};

// Truncation of the Schlather spectral series. The series stops once the
// next Poisson point, scaled by the (1 - epsilon) Gaussian quantile, cannot
// exceed the running minimum over locations.
struct SchlatherTruncation {
  double epsilon = 1e-4;
  std::size_t max_points = 100000;

  void validate() const;
};

struct IndependentFrechet {};

struct SchlatherInnovation {
  CorrelationModel correlation;
  SchlatherTruncation truncation;
};

using Innovation = std::variant<IndependentFrechet, SchlatherInnovation>;

enum class ZCoupling {
  CommonScalar,            // Z_n(x) = Z_n for every location
  IndependentPerLocation,  // Z_n(x) i.i.d. over locations
};

struct ModelSpec {
  Innovation innovation = IndependentFrechet{};
  std::vector<double> temporal_weights{2.0 / 3.0, 1.0 / 3.0};
  ZCoupling z_coupling = ZCoupling::CommonScalar;
  AlphaMap alpha;
  std::vector<Location> locations;

  // Throws SpecError on any violated invariant.
  void validate() const;

  std::size_t order() const { return temporal_weights.size() - 1; }
  std::size_t location_index(const std::string& id) const;
  const Location& location(const std::string& id) const;
  bool is_schlather() const { return std::holds_alternative<SchlatherInnovation>(innovation); }
};

// The two worked structures: moving maxima with weights (2/3, 1/3) and a
// common scalar Z, over independent (first) or Schlather (second) innovations.
ModelSpec example_independent_spec(std::vector<Location> locations, AlphaMap alpha);
ModelSpec example_schlather_spec(std::vector<Location> locations, AlphaMap alpha,
                                 CorrelationModel correlation = {});

enum class Layer { Innovation, X, Z, Y };

std::string to_string(Layer layer);

// Immutable panel of positive values indexed by (time, location).
class FieldSample {
 public:
  FieldSample(std::vector<Location> locations, std::size_t n_time, std::vector<double> values,
              Layer layer, std::uint64_t seed);

  std::size_t n_time() const noexcept { return n_time_; }
  std::size_t n_locations() const noexcept { return locations_.size(); }
  const std::vector<Location>& locations() const noexcept { return locations_; }
  Layer layer() const noexcept { return layer_; }
  std::uint64_t seed() const noexcept { return seed_; }

  double at(std::size_t time, std::size_t loc) const { return values_[time * locations_.size() + loc]; }
  std::span<const double> row(std::size_t time) const {
    return {values_.data() + time * locations_.size(), locations_.size()};
  }
  std::vector<double> column(std::size_t loc) const;
  std::size_t location_index(const std::string& id) const;
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  std::vector<Location> locations_;
  std::size_t n_time_;
  std::vector<double> values_;  // row-major, time outer
  Layer layer_;
  std::uint64_t seed_;
};

// Pre-factored Schlather field sampler over a fixed location set.
class SchlatherSimulator {
 public:
  SchlatherSimulator(std::span<const Location> locations, const CorrelationModel& correlation,
                     const SchlatherTruncation& truncation);

  void draw(RngStream& rng, std::span<double> out) const;
  std::vector<double> draw(RngStream& rng) const;

  std::size_t dimension() const noexcept { return sampler_.dimension(); }

 private:
  GaussianSampler sampler_;
  SchlatherTruncation truncation_;
  double stop_bound_;  // sqrt(2 pi) * Phi^{-1}(1 - epsilon)
};

std::vector<double> schlather_field(std::span<const Location> locations,
                                    const CorrelationModel& correlation,
                                    const SchlatherTruncation& truncation, RngStream& rng);

// Innovation panel with n_rows rows (callers add the q warm-up rows themselves).
FieldSample simulate_innovations(const ModelSpec& spec, std::size_t n_rows, RngStream& rng);

// X_n(x) = max_i w_i * innov_{n-i}(x); drops the first q rows of the input.
FieldSample moving_max(const FieldSample& innovations, std::span<const double> weights);

// Y = X v Z^{1/alpha}, entrywise, with alpha taken per location.
FieldSample compose_pmax(const FieldSample& x, const FieldSample& z, const AlphaMap& alpha);

FieldSample simulate_z(const ModelSpec& spec, std::size_t n_time, RngStream& rng);

struct PmaxLayers {
  FieldSample x;
  FieldSample z;
  FieldSample y;
};

PmaxLayers simulate_pmax_layers(const ModelSpec& spec, std::size_t n_time, RngStream& rng);
FieldSample simulate_pmax(const ModelSpec& spec, std::size_t n_time, RngStream& rng);

enum class PairTransform { Raw, FrechetCdf };

// (Y_n(x), Y_{n+r}(x')) for every n with n + r inside the panel.
std::vector<std::pair<double, double>> lagged_pairs(const FieldSample& sample, std::size_t r,
                                                    const std::string& x, const std::string& xp,
                                                    PairTransform transform = PairTransform::Raw);

}  // namespace pmax
