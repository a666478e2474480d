#include "pmax/fields.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "pmax/error.hpp"
#include "pmax/stats.hpp"

namespace pmax {

double distance(const Location& a, const Location& b) { return std::hypot(a.x1 - b.x1, a.x2 - b.x2); }

AlphaMap::AlphaMap(std::map<std::string, double> values) {
  for (const auto& [id, a] : values) set(id, a);
}

void AlphaMap::set(const std::string& id, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw SpecError("alpha for location '" + id + "' must be positive and finite");
  values_[id] = alpha;
}

double AlphaMap::at(const std::string& id) const {
  const auto it = values_.find(id);
  if (it == values_.end()) throw SpecError("no alpha configured for location '" + id + "'");
  return it->second;
}

void SchlatherTruncation::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw SpecError("truncation epsilon must lie in (0, 1)");
  if (max_points < 1) throw SpecError("truncation max_points must be at least 1");
}

void ModelSpec::validate() const {
  if (temporal_weights.empty()) throw SpecError("temporal weights must be non-empty");
  double sum = 0.0;
  bool any_positive = false;
  for (double w : temporal_weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw SpecError("temporal weights must be non-negative");
    any_positive = any_positive || w > 0.0;
    sum += w;
  }
  if (!any_positive) throw SpecError("at least one temporal weight must be positive");
  if (std::abs(sum - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "temporal weights must sum to 1 (got " << sum << ")";
    throw SpecError(msg.str());
  }
  if (locations.empty()) throw SpecError("model needs at least one location");
  for (std::size_t i = 0; i < locations.size(); ++i) {
    for (std::size_t j = i + 1; j < locations.size(); ++j) {
      if (locations[i].id == locations[j].id)
        throw SpecError("duplicate location id '" + locations[i].id + "'");
    }
    alpha.at(locations[i].id);
  }
  if (const auto* s = std::get_if<SchlatherInnovation>(&innovation)) {
    s->correlation.validate();
    s->truncation.validate();
  }
}

std::size_t ModelSpec::location_index(const std::string& id) const {
  for (std::size_t i = 0; i < locations.size(); ++i) {
    if (locations[i].id == id) return i;
  }
  throw SpecError("unknown location '" + id + "'");
}

const Location& ModelSpec::location(const std::string& id) const {
  return locations[location_index(id)];
}

ModelSpec example_independent_spec(std::vector<Location> locations, AlphaMap alpha) {
  ModelSpec spec;
  spec.locations = std::move(locations);
  spec.alpha = std::move(alpha);
  return spec;
}

ModelSpec example_schlather_spec(std::vector<Location> locations, AlphaMap alpha,
                                 CorrelationModel correlation) {
  ModelSpec spec = example_independent_spec(std::move(locations), std::move(alpha));
  spec.innovation = SchlatherInnovation{correlation, {}};
  return spec;
}

std::string to_string(Layer layer) {
  switch (layer) {
    case Layer::Innovation: return "innovation";
    case Layer::X: return "X";
    case Layer::Z: return "Z";
    case Layer::Y: return "Y";
  }
  return "?";
}

FieldSample::FieldSample(std::vector<Location> locations, std::size_t n_time,
                         std::vector<double> values, Layer layer, std::uint64_t seed)
    : locations_(std::move(locations)),
      n_time_(n_time),
      values_(std::move(values)),
      layer_(layer),
      seed_(seed) {
  if (locations_.empty()) throw DomainError("FieldSample: no locations");
  if (values_.size() != n_time_ * locations_.size())
    throw DomainError("FieldSample: value count does not match n_time x locations");
  for (double v : values_) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw DomainError("FieldSample: entries must be positive and finite");
  }
}

std::vector<double> FieldSample::column(std::size_t loc) const {
  std::vector<double> out(n_time_);
  for (std::size_t t = 0; t < n_time_; ++t) out[t] = at(t, loc);
  return out;
}

std::size_t FieldSample::location_index(const std::string& id) const {
  for (std::size_t i = 0; i < locations_.size(); ++i) {
    if (locations_[i].id == id) return i;
  }
  throw DomainError("location '" + id + "' not present in sample");
}

namespace {

Eigen::MatrixXd correlation_matrix(std::span<const Location> locations,
                                   const CorrelationModel& correlation) {
  const auto m = static_cast<Eigen::Index>(locations.size());
  Eigen::MatrixXd c(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    c(i, i) = 1.0;
    for (Eigen::Index j = 0; j < i; ++j) {
      c(i, j) = c(j, i) = correlation(distance(locations[i], locations[j]));
    }
  }
  return c;
}

// E[max(0, c U)] = 1 for standard normal U.
const double kSchlatherScale = std::sqrt(2.0 * std::numbers::pi);

Eigen::MatrixXd checked_schlather_matrix(std::span<const Location> locations,
                                         const CorrelationModel& correlation,
                                         const SchlatherTruncation& truncation) {
  if (locations.empty()) throw DomainError("schlather_field: no locations");
  correlation.validate();
  truncation.validate();
  return correlation_matrix(locations, correlation);
}

}  // namespace

SchlatherSimulator::SchlatherSimulator(std::span<const Location> locations,
                                       const CorrelationModel& correlation,
                                       const SchlatherTruncation& truncation)
    : sampler_(checked_schlather_matrix(locations, correlation, truncation)),
      truncation_(truncation),
      stop_bound_(kSchlatherScale * normal_quantile(1.0 - truncation.epsilon)) {}

void SchlatherSimulator::draw(RngStream& rng, std::span<double> out) const {
  const std::size_t m = sampler_.dimension();
  if (out.size() != m) throw DomainError("SchlatherSimulator: output size");
  std::fill(out.begin(), out.end(), 0.0);
  std::vector<double> u(m);
  double gamma = 0.0;
  double running_min = 0.0;
  for (std::size_t points = 0;; ++points) {
    gamma += rng.exponential();
    const double xi = 1.0 / gamma;
    if (running_min > 0.0 && xi * stop_bound_ < running_min) return;
    if (points == truncation_.max_points) {
      std::ostringstream msg;
      msg << "schlather_field: " << truncation_.max_points
          << " Poisson points exhausted before the stopping rule fired (bound/min = "
          << xi * stop_bound_ / running_min << ")";
      throw TruncationError(msg.str(), xi * stop_bound_ / running_min);
    }
    sampler_.draw(rng, u);
    running_min = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
      out[j] = std::max(out[j], xi * kSchlatherScale * u[j]);
      running_min = std::min(running_min, out[j]);
    }
  }
}

std::vector<double> SchlatherSimulator::draw(RngStream& rng) const {
  std::vector<double> out(dimension());
  draw(rng, out);
  return out;
}

std::vector<double> schlather_field(std::span<const Location> locations,
                                    const CorrelationModel& correlation,
                                    const SchlatherTruncation& truncation, RngStream& rng) {
  return SchlatherSimulator(locations, correlation, truncation).draw(rng);
}

FieldSample simulate_innovations(const ModelSpec& spec, std::size_t n_rows, RngStream& rng) {
  spec.validate();
  if (n_rows < 1) throw DomainError("simulate_innovations: need at least one row");
  const std::size_t m = spec.locations.size();
  std::vector<double> values(n_rows * m);
  if (const auto* s = std::get_if<SchlatherInnovation>(&spec.innovation)) {
    const SchlatherSimulator sim(spec.locations, s->correlation, s->truncation);
    for (std::size_t t = 0; t < n_rows; ++t) {
      sim.draw(rng, std::span<double>(values.data() + t * m, m));
    }
  } else {
    for (double& v : values) v = frechet_sample(rng);
  }
  return FieldSample(spec.locations, n_rows, std::move(values), Layer::Innovation, rng.seed());
}

FieldSample moving_max(const FieldSample& innovations, std::span<const double> weights) {
  if (weights.empty()) throw SpecError("moving_max: empty weights");
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(sum - 1.0) > 1e-12) throw SpecError("moving_max: weights must sum to 1");
  for (double w : weights) {
    if (!(w >= 0.0)) throw SpecError("moving_max: weights must be non-negative");
  }
  const std::size_t q = weights.size() - 1;
  if (innovations.n_time() <= q)
    throw DomainError("moving_max: innovation panel shorter than the warm-up length");
  const std::size_t n = innovations.n_time() - q;
  const std::size_t m = innovations.n_locations();
  std::vector<double> values(n * m, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    // output row t corresponds to innovation row t + q
    for (std::size_t j = 0; j < m; ++j) {
      double v = 0.0;
      for (std::size_t i = 0; i <= q; ++i) v = std::max(v, weights[i] * innovations.at(t + q - i, j));
      values[t * m + j] = v;
    }
  }
  return FieldSample(innovations.locations(), n, std::move(values), Layer::X, innovations.seed());
}

FieldSample compose_pmax(const FieldSample& x, const FieldSample& z, const AlphaMap& alpha) {
  if (x.n_time() != z.n_time() || x.n_locations() != z.n_locations())
    throw DomainError("compose_pmax: X and Z panels differ in shape");
  const std::size_t m = x.n_locations();
  std::vector<double> inv_alpha(m);
  for (std::size_t j = 0; j < m; ++j) inv_alpha[j] = 1.0 / alpha.at(x.locations()[j].id);
  std::vector<double> values(x.values().size());
  for (std::size_t t = 0; t < x.n_time(); ++t) {
    for (std::size_t j = 0; j < m; ++j) {
      values[t * m + j] = std::max(x.at(t, j), std::pow(z.at(t, j), inv_alpha[j]));
    }
  }
  return FieldSample(x.locations(), x.n_time(), std::move(values), Layer::Y, x.seed());
}

FieldSample simulate_z(const ModelSpec& spec, std::size_t n_time, RngStream& rng) {
  const std::size_t m = spec.locations.size();
  std::vector<double> values(n_time * m);
  for (std::size_t t = 0; t < n_time; ++t) {
    if (spec.z_coupling == ZCoupling::CommonScalar) {
      const double z = frechet_sample(rng);
      std::fill_n(values.begin() + static_cast<std::ptrdiff_t>(t * m), m, z);
    } else {
      for (std::size_t j = 0; j < m; ++j) values[t * m + j] = frechet_sample(rng);
    }
  }
  return FieldSample(spec.locations, n_time, std::move(values), Layer::Z, rng.seed());
}

PmaxLayers simulate_pmax_layers(const ModelSpec& spec, std::size_t n_time, RngStream& rng) {
  spec.validate();
  if (n_time < 1) throw DomainError("simulate_pmax: n_time must be at least 1");
  FieldSample innovations = simulate_innovations(spec, n_time + spec.order(), rng);
  FieldSample x = moving_max(innovations, spec.temporal_weights);
  FieldSample z = simulate_z(spec, n_time, rng);
  FieldSample y = compose_pmax(x, z, spec.alpha);
  return {std::move(x), std::move(z), std::move(y)};
}

FieldSample simulate_pmax(const ModelSpec& spec, std::size_t n_time, RngStream& rng) {
  return simulate_pmax_layers(spec, n_time, rng).y;
}

std::vector<std::pair<double, double>> lagged_pairs(const FieldSample& sample, std::size_t r,
                                                    const std::string& x, const std::string& xp,
                                                    PairTransform transform) {
  const std::size_t i = sample.location_index(x);
  const std::size_t j = sample.location_index(xp);
  if (r >= sample.n_time()) throw DomainError("lagged_pairs: lag must be smaller than n_time");
  std::vector<std::pair<double, double>> pairs;
  pairs.reserve(sample.n_time() - r);
  for (std::size_t n = 0; n + r < sample.n_time(); ++n) {
    double a = sample.at(n, i);
    double b = sample.at(n + r, j);
    if (transform == PairTransform::FrechetCdf) {
      a = frechet_cdf(a);
      b = frechet_cdf(b);
    }
    pairs.emplace_back(a, b);
  }
  return pairs;
}

}  // namespace pmax
