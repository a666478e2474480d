#include <algorithm>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "pmax/cli.hpp"

int main(int argc, char** argv) {
  namespace cli = pmax::cli;
  CLI::App app{"pMAX random fields: simulation, tail coefficients and alpha estimation"};
  app.require_subcommand(1);
  app.fallthrough();

  cli::GlobalOptions global;
  global.threads = std::max(1u, std::thread::hardware_concurrency());
  std::string config, out;
  std::uint64_t seed = 0;
  app.add_option("--config", config, "JSON run configuration");
  auto* seed_opt = app.add_option("--seed", seed, "seed override (u64)");
  app.add_option("--out", out, "output file (or prefix for figures)");
  app.add_option("--threads", global.threads, "worker threads for mc-table")->check(CLI::PositiveNumber);

  cli::SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "simulate a pMAX field to `n,loc,value` CSV");
  simulate->add_option("--n-time", sim.n_time, "time steps");

  cli::CoeffsArgs co;
  auto* coeffs = app.add_subcommand("coeffs", "closed-form and oracle tail coefficients as JSON");
  coeffs->add_option("--r", co.r, "time lag");
  coeffs->add_option("--x", co.x, "first location id");
  coeffs->add_option("--xp", co.xp, "second location id");

  cli::EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "estimate alpha at one location from a FieldSample CSV");
  estimate->add_option("input", est.input, "FieldSample CSV")->required();
  estimate->add_option("--location", est.location, "location id");
  estimate->add_option("--k", est.k, "grid end percentile");
  estimate->add_option("--start", est.start, "grid start (> 1)");

  auto* mc = app.add_subcommand("mc-table", "Monte Carlo bias/sd/RMSE table of the alpha estimator");

  cli::FiguresArgs fig;
  auto* figures = app.add_subcommand("figures", "lagged pair CSV and SVG scatter");
  figures->add_option("--r", fig.r, "time lag");
  figures->add_option("--x", fig.x, "first location id");
  figures->add_option("--xp", fig.xp, "second location id");
  figures->add_option("--n-time", fig.n_time, "time steps");
  figures->add_option("--transform", fig.transform, "cdf (default) or raw")->check(CLI::IsMember({"cdf", "raw"}));
  figures->add_option("--point-cap", fig.point_cap, "max points drawn in the SVG");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitConfig;
  }

  global.config = config;
  global.out = out;
  if (*seed_opt) global.seed = seed;

  if (*simulate) return cli::cmd_simulate(global, sim, std::cout, std::cerr);
  if (*coeffs) return cli::cmd_coeffs(global, co, std::cout, std::cerr);
  if (*estimate) return cli::cmd_estimate(global, est, std::cout, std::cerr);
  if (*mc) return cli::cmd_mc_table(global, std::cout, std::cerr);
  if (*figures) return cli::cmd_figures(global, fig, std::cout, std::cerr);
  return cli::kExitConfig;
}
