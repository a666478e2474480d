#include "pmax/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pmax/config.hpp"
#include "pmax/error.hpp"
#include "pmax/estimation.hpp"
#include "pmax/fields.hpp"
#include "pmax/io.hpp"
#include "pmax/mc_study.hpp"
#include "pmax/oracles.hpp"
#include "pmax/tail_coeffs.hpp"

namespace pmax::cli {

using nlohmann::json;

int exit_code_for(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    switch (err->kind()) {
      case ErrorKind::Spec: return kExitConfig;
      case ErrorKind::Io: return kExitIo;
      case ErrorKind::Unimplemented: return kExitUnimplemented;
      case ErrorKind::Domain:
      case ErrorKind::Estimation:
      case ErrorKind::Numeric:
      case ErrorKind::Truncation:
      case ErrorKind::Precision: return kExitDomain;
    }
  }
  if (dynamic_cast<const json::exception*>(&e)) return kExitConfig;
  return kExitDomain;
}

namespace {

template <typename Body>
int guarded(const char* command, std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    err << "pmax " << command << ": " << e.what() << '\n';
    return exit_code_for(e);
  }
}

RunConfig load(const GlobalOptions& global, Command command) {
  if (global.config.empty()) throw SpecError("--config is required");
  RunConfig config = load_run_config(global.config, command);
  if (global.seed) config.seed = *global.seed;
  return config;
}

const std::filesystem::path& require_out(const GlobalOptions& global) {
  if (global.out.empty()) throw SpecError("--out is required");
  return global.out;
}

void emit_json(const GlobalOptions& global, const json& doc, std::ostream& out) {
  const std::string text = doc.dump(2) + "\n";
  if (global.out.empty()) {
    out << text;
    return;
  }
  auto file = open_output(global.out);
  file << text;
  if (!file) throw IoError("failed while writing '" + global.out.string() + "'");
}

std::string example_name(ExampleStructure s) {
  switch (s) {
    case ExampleStructure::IndependentInnovations: return "independent_frechet_innovations";
    case ExampleStructure::SchlatherInnovations: return "schlather_innovations";
    case ExampleStructure::None: break;
  }
  return "none";
}

// Pick (r, x, x') from flags, then the run section, then sensible defaults.
struct PairQuery {
  std::size_t r;
  std::string x;
  std::string xp;
};

PairQuery pair_query(const RunConfig& config, const std::optional<std::size_t>& r,
                     const std::optional<std::string>& x, const std::optional<std::string>& xp) {
  PairQuery q;
  q.r = r ? *r : run_count(config, "r", 1);
  const std::string first = config.model.locations.front().id;
  q.x = x ? *x : run_string(config, "x", first);
  q.xp = xp ? *xp : run_string(config, "xp", q.x);
  return q;
}

}  // namespace

int cmd_simulate(const GlobalOptions& global, const SimulateArgs& args, std::ostream& out, std::ostream& err) {
  return guarded("simulate", err, [&] {
    const RunConfig config = load(global, Command::Simulate);
    const auto& path = require_out(global);
    const std::size_t n_time = args.n_time ? *args.n_time : run_count(config, "n_time", 1000);
    if (n_time == 0) throw DomainError("n_time must be positive");
    RngStream rng(config.seed, 0);
    const FieldSample y = simulate_pmax(config.model, n_time, rng);
    auto file = open_output(path);
    write_field_sample_csv(file, y);
    file.close();
    if (!file) throw IoError("failed while writing '" + path.string() + "'");
    out << "seed " << config.seed << '\n' << "spec_digest " << config.model_digest << '\n';
    return kExitOk;
  });
}

int cmd_coeffs(const GlobalOptions& global, const CoeffsArgs& args, std::ostream& out, std::ostream& err) {
  return guarded("coeffs", err, [&] {
    const RunConfig config = load(global, Command::Coeffs);
    const ModelSpec& spec = config.model;
    const PairQuery q = pair_query(config, args.r, args.x, args.xp);
    const TailContext ctx = make_context(spec, q.r, q.x, q.xp);
    if (ctx.degenerate()) throw DomainError("degenerate context: r = 0 and x = x' is the same variable");
    const Regime regime = ctx.regime();
    const ExampleStructure structure = classify(spec);
    if (structure == ExampleStructure::None) {
      throw UnimplementedModelError(
          "closed forms exist only for moving maxima (2/3, 1/3) with a common scalar Z over independent "
          "Frechet or Schlather innovations");
    }

    json doc;
    doc["model"] = example_name(structure);
    doc["regime"] = to_string(regime);
    doc["r"] = ctx.r;
    doc["x"] = ctx.x.id;
    doc["xp"] = ctx.xp.id;
    doc["alpha_x"] = ctx.alpha_x;
    doc["alpha_xp"] = ctx.alpha_xp;
    doc["h"] = ctx.h();

    json labels = json::object();
    const auto* schlather = std::get_if<SchlatherInnovation>(&spec.innovation);
    if (structure == ExampleStructure::IndependentInnovations) {
      const TailCoefficient lam = lambda_ex1(ctx);
      const TailCoefficient eta = eta_ex1(ctx);
      doc["lambda_closed"] = lam.value;
      doc["eta_closed"] = eta.value;
      labels["lambda_closed"] = lam.derivation;
      labels["eta_closed"] = eta.derivation;
    } else {
      const TailCoefficient lam = lambda_ex2(ctx, schlather->correlation);
      const TailCoefficient printed = lambda_ex2_as_printed(ctx, schlather->correlation);
      doc["lambda_closed"] = lam.value;
      doc["lambda_closed_as_printed"] = printed.value;
      doc["eta_closed"] = nullptr;  // no closed form for this structure; see eta_general and eta_oracle
      labels["lambda_closed"] = lam.derivation;
      labels["lambda_closed_as_printed"] = printed.derivation;
      labels["eta_closed"] = "not available in closed form";
    }

    // General propositions from the X and Z layer coefficients.
    const double lambda_x = x_layer_lambda(spec, ctx);
    const double eta_x = x_layer_eta(spec, ctx);
    const bool shared_z = spec.z_coupling == ZCoupling::CommonScalar;
    const double lambda_z = shared_z ? lambda_z_common(ctx.alpha_x, ctx.alpha_xp) : 0.0;
    const double eta_z = shared_z ? 1.0 : 0.5;
    const TailCoefficient lam_general = lambda_prop31(ctx, lambda_x, lambda_z);
    const TailCoefficient eta_general =
        eta_prop41(ctx, eta_x, ctx.r == 0 ? std::optional<double>(eta_z) : std::nullopt);
    doc["lambda_x"] = lambda_x;
    doc["eta_x"] = eta_x;
    doc["lambda_general"] = lam_general.value;
    doc["eta_general"] = eta_general.value;
    labels["lambda_general"] = lam_general.derivation;
    labels["eta_general"] = eta_general.derivation;

    const JointSurvivalFn joint = joint_cdf_builder(spec, ctx);
    const std::vector<double> grid = default_oracle_grid();
    const LambdaOracleResult lo = lambda_oracle(joint, grid);
    const EtaOracleResult eo = eta_oracle(joint, grid);
    doc["lambda_oracle"] = lo.value;
    doc["eta_oracle"] = eo.value;
    doc["eta_oracle_normalized_residual"] = eo.normalized_residual;
    doc["oracle_grid"] = {{"lo", grid.front()}, {"hi", grid.back()}, {"count", grid.size()}};
    doc["branch_labels"] = labels;
    doc["convergence_flags"] = {{"lambda_oracle_converged", lo.converged},
                                {"eta_oracle_fit_ok", eo.normalized_residual < 1e-2}};
    emit_json(global, doc, out);
    return kExitOk;
  });
}

int cmd_estimate(const GlobalOptions& global, const EstimateArgs& args, std::ostream& out, std::ostream& err) {
  return guarded("estimate", err, [&] {
    std::optional<RunConfig> config;
    if (!global.config.empty()) config = load(global, Command::Estimate);
    if (args.input.empty()) throw SpecError("an input CSV is required");
    const FieldSample sample = read_field_sample_csv(args.input);

    std::string location;
    if (args.location) {
      location = *args.location;
    } else if (config && run_has(*config, "location")) {
      location = run_string(*config, "location", "");
    } else if (sample.n_locations() == 1) {
      location = sample.locations().front().id;
    } else {
      throw SpecError("the input has several locations; pass --location");
    }
    GridSpec grid;
    if (config) {
      grid.k = run_number(*config, "k", grid.k);
      grid.start = run_number(*config, "start", grid.start);
    }
    if (args.k) grid.k = *args.k;
    if (args.start) grid.start = *args.start;
    grid.validate();

    const std::size_t loc = sample.location_index(location);
    const AlphaEstimate est = estimate_alpha(sample.column(loc), grid);
    json doc;
    doc["location"] = location;
    doc["n"] = sample.n_time();
    doc["k"] = grid.k;
    doc["value"] = est.value;
    doc["n_valid"] = est.n_valid;
    doc["n_dropped"] = est.n_dropped;
    doc["dropped"] = {{"not_above_one", est.drops.not_above_one},
                      {"cdf_is_one", est.drops.cdf_is_one},
                      {"cdf_is_zero", est.drops.cdf_is_zero},
                      {"log_argument_nonpositive", est.drops.log_argument_nonpositive}};
    doc["grid_start"] = est.grid_start;
    doc["grid_end"] = est.grid_end;
    emit_json(global, doc, out);
    return kExitOk;
  });
}

int cmd_mc_table(const GlobalOptions& global, std::ostream& out, std::ostream& err) {
  return guarded("mc-table", err, [&] {
    const RunConfig config = load(global, Command::McTable);
    const auto& path = require_out(global);
    const McConfig mc = mc_config_from(config);
    const auto t0 = std::chrono::steady_clock::now();
    const McReport report = mc_study(mc, global.threads == 0 ? 1 : global.threads);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    auto file = open_output(path);
    write_mc_report_csv(file, report);
    file.close();
    if (!file) throw IoError("failed while writing '" + path.string() + "'");

    std::size_t failures = 0, failed_cells = 0;
    for (const McRow& row : report.rows) {
      failures += row.failures;
      failed_cells += row.failed ? 1 : 0;
    }
    out << "cells " << report.rows.size() << " replicates " << mc.replicates << '\n'
        << "wall_clock_s " << format_fixed(seconds, 3) << '\n'
        << "failed_replicates " << failures << " failed_cells " << failed_cells << '\n'
        << "sd_convention " << report.sd_convention << '\n';
    for (const McRow& row : report.rows) {
      if (row.failed) {
        err << "warning: cell alpha=" << format_double(row.alpha) << " n=" << row.n
            << " k=" << format_double(row.percentile) << " exceeded the 1% failure budget (" << row.failures
            << " failures)\n";
      }
    }
    return kExitOk;
  });
}

int cmd_figures(const GlobalOptions& global, const FiguresArgs& args, std::ostream& out, std::ostream& err) {
  return guarded("figures", err, [&] {
    const RunConfig config = load(global, Command::Figures);
    const auto& prefix = require_out(global);
    const PairQuery q = pair_query(config, args.r, args.x, args.xp);
    const TailContext ctx = make_context(config.model, q.r, q.x, q.xp);
    if (ctx.degenerate()) throw DomainError("degenerate context: r = 0 and x = x' is the same variable");
    const std::size_t n_time = args.n_time ? *args.n_time : run_count(config, "n_time", 10000);
    const std::string transform = args.transform ? *args.transform : run_string(config, "transform", "cdf");
    if (transform != "cdf" && transform != "raw") throw SpecError("transform must be 'cdf' or 'raw'");
    ScatterOptions options;
    options.point_cap = args.point_cap ? *args.point_cap : run_count(config, "point_cap", options.point_cap);
    options.unit_square = transform == "cdf";
    if (n_time <= q.r) throw DomainError("empty sample: n_time must exceed r");

    RngStream rng(config.seed, 0);
    const FieldSample y = simulate_pmax(config.model, n_time, rng);
    const auto pairs =
        lagged_pairs(y, q.r, q.x, q.xp, transform == "cdf" ? PairTransform::FrechetCdf : PairTransform::Raw);
    if (pairs.empty()) throw DomainError("empty sample: no pairs to plot");

    std::ostringstream stem;
    stem << prefix.string() << "_r" << q.r << '_' << q.x << '_' << q.xp << "_a" << format_double(ctx.alpha_x) << '_'
         << format_double(ctx.alpha_xp);
    options.title = "r=" + std::to_string(q.r) + "  x=" + q.x + " (alpha " + format_double(ctx.alpha_x) + ")  x'=" +
                    q.xp + " (alpha " + format_double(ctx.alpha_xp) + ")";
    options.x_label = transform == "cdf" ? "F(Y_n(x))" : "Y_n(x)";
    options.y_label = transform == "cdf" ? "F(Y_n+r(x'))" : "Y_n+r(x')";

    const std::filesystem::path csv_path = stem.str() + ".csv";
    const std::filesystem::path svg_path = stem.str() + ".svg";
    {
      auto csv = open_output(csv_path);
      if (transform == "cdf") {
        write_pairs_csv(csv, pairs);
      } else {
        write_pairs_csv(csv, pairs, "y", "yp");
      }
    }
    {
      auto svg = open_output(svg_path);
      write_scatter_svg(svg, pairs, options);
    }
    out << csv_path.string() << '\n' << svg_path.string() << '\n';
    return kExitOk;
  });
}

}  // namespace pmax::cli
