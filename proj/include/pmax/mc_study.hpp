#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "pmax/estimation.hpp"
#include "pmax/fields.hpp"

namespace pmax {

enum class McModel { IndependentInnovations, SchlatherInnovations };

struct McConfig {
  std::vector<double> alphas{0.1, 0.5, 1.0, 1.5, 2.0};
  std::vector<std::size_t> sample_sizes{100, 500, 1000, 5000};
  std::size_t replicates = 1000;
  std::vector<double> percentiles{95.0, 75.0};
  McModel model = McModel::IndependentInnovations;
  CorrelationModel correlation{};
  std::uint64_t master_seed = 0;
  double grid_start = 1.1;

  void validate() const;
  std::size_t cell_count() const { return alphas.size() * sample_sizes.size() * percentiles.size(); }
};

struct McRow {
  double alpha = 0.0;
  std::size_t n = 0;
  double percentile = 0.0;
  double mean = 0.0;
  double bias = 0.0;
  double sd = 0.0;    // (R - 1) denominator
  double rmse = 0.0;  // sqrt(mean squared error), R denominator
  std::size_t failures = 0;
  bool failed = false;  // more than 1% of replicates failed
};

struct McReport {
  std::vector<McRow> rows;
  std::string sd_convention =
      "sd uses the (R-1) sample denominator; rmse = sqrt(mean((estimate - alpha)^2)) over the R "
      "successful replicates, so rmse^2 = bias^2 + sd^2 (R-1)/R";
};

// Single-location model used by the study.
ModelSpec mc_model_spec(const McConfig& config, double alpha);

// Cells are ordered alpha-major, then n, then percentile. Replicate r of cell c
// draws from RngStream(master_seed, c * replicates + r); results are reduced
// in replicate order, so the report does not depend on `threads`.
McReport mc_study(const McConfig& config, unsigned threads = 1);

}  // namespace pmax
