#include "pmax/mc_study.hpp"

#include <atomic>
#include <cmath>
#include <optional>
#include <thread>

#include "pmax/error.hpp"
#include "pmax/rng.hpp"

namespace pmax {

void McConfig::validate() const {
  if (alphas.empty() || sample_sizes.empty() || percentiles.empty())
    throw SpecError("mc config: alphas, sample_sizes and percentiles must be non-empty");
  for (double a : alphas) {
    if (!(a > 0.0)) throw SpecError("mc config: alphas must be positive");
  }
  for (std::size_t n : sample_sizes) {
    if (n < 2) throw SpecError("mc config: sample sizes must be at least 2");
  }
  for (double k : percentiles) {
    if (!(k > 0.0 && k < 100.0)) throw SpecError("mc config: percentiles must lie in (0, 100)");
  }
  if (replicates < 2) throw SpecError("mc config: replicates must be at least 2");
  if (!(grid_start > 1.0)) throw SpecError("mc config: grid start must exceed 1");
  correlation.validate();
}

ModelSpec mc_model_spec(const McConfig& config, double alpha) {
  std::vector<Location> site{{"x", 0.0, 0.0}};
  AlphaMap map;
  map.set("x", alpha);
  if (config.model == McModel::SchlatherInnovations)
    return example_schlather_spec(std::move(site), std::move(map), config.correlation);
  return example_independent_spec(std::move(site), std::move(map));
}

namespace {

struct CellTask {
  double alpha;
  std::size_t n;
  double k;
};

}  // namespace

McReport mc_study(const McConfig& config, unsigned threads) {
  config.validate();
  std::vector<CellTask> cells;
  for (double a : config.alphas) {
    for (std::size_t n : config.sample_sizes) {
      for (double k : config.percentiles) cells.push_back({a, n, k});
    }
  }
  std::vector<ModelSpec> specs;
  for (const auto& cell : cells) specs.push_back(mc_model_spec(config, cell.alpha));

  const std::size_t reps = config.replicates;
  const std::size_t total = cells.size() * reps;
  std::vector<std::optional<double>> estimates(total);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t job = next.fetch_add(1);
      if (job >= total) return;
      const std::size_t c = job / reps;
      RngStream rng(config.master_seed, job);
      try {
        const FieldSample y = simulate_pmax(specs[c], cells[c].n, rng);
        const GridSpec grid{cells[c].k, config.grid_start, 0};
        estimates[job] = estimate_alpha(y.column(0), grid).value;
      } catch (const Error&) {
        // estimation or truncation failure: counted against the cell
        estimates[job] = std::nullopt;
      }
    }
  };

  const unsigned n_threads = std::max(1u, threads);
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }

  McReport report;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    McRow row;
    row.alpha = cells[c].alpha;
    row.n = cells[c].n;
    row.percentile = cells[c].k;
    double sum = 0.0;
    std::size_t ok = 0;
    for (std::size_t r = 0; r < reps; ++r) {
      const auto& e = estimates[c * reps + r];
      if (e) {
        sum += *e;
        ++ok;
      } else {
        ++row.failures;
      }
    }
    row.failed = static_cast<double>(row.failures) > 0.01 * static_cast<double>(reps);
    if (ok >= 1) {
      row.mean = sum / static_cast<double>(ok);
      row.bias = row.mean - row.alpha;
      double ss = 0.0, se = 0.0;
      for (std::size_t r = 0; r < reps; ++r) {
        const auto& e = estimates[c * reps + r];
        if (!e) continue;
        ss += (*e - row.mean) * (*e - row.mean);
        se += (*e - row.alpha) * (*e - row.alpha);
      }
      row.sd = ok >= 2 ? std::sqrt(ss / static_cast<double>(ok - 1)) : 0.0;
      row.rmse = std::sqrt(se / static_cast<double>(ok));
    } else {
      row.mean = row.bias = row.sd = row.rmse = std::nan("");
    }
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace pmax
