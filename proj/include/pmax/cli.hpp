#pragma once

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace pmax::cli {

// Exit codes are a scripting contract.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDomain = 3;
inline constexpr int kExitIo = 4;
inline constexpr int kExitUnimplemented = 5;

struct GlobalOptions {
  std::filesystem::path config;
  std::optional<std::uint64_t> seed;  // overrides the config's seed
  std::filesystem::path out;
  unsigned threads = 1;
};

struct SimulateArgs {
  std::optional<std::size_t> n_time;
};

struct CoeffsArgs {
  std::optional<std::size_t> r;
  std::optional<std::string> x;
  std::optional<std::string> xp;
};

struct EstimateArgs {
  std::filesystem::path input;
  std::optional<std::string> location;
  std::optional<double> k;
  std::optional<double> start;
};

struct FiguresArgs {
  std::optional<std::size_t> r;
  std::optional<std::string> x;
  std::optional<std::string> xp;
  std::optional<std::size_t> n_time;
  std::optional<std::string> transform;  // "cdf" (default) or "raw"
  std::optional<std::size_t> point_cap;
};

// Each command returns an exit code; diagnostics go to `err`, short
// summaries to `out`, results to files under GlobalOptions::out.
int cmd_simulate(const GlobalOptions& global, const SimulateArgs& args, std::ostream& out, std::ostream& err);
int cmd_coeffs(const GlobalOptions& global, const CoeffsArgs& args, std::ostream& out, std::ostream& err);
int cmd_estimate(const GlobalOptions& global, const EstimateArgs& args, std::ostream& out, std::ostream& err);
int cmd_mc_table(const GlobalOptions& global, std::ostream& out, std::ostream& err);
int cmd_figures(const GlobalOptions& global, const FiguresArgs& args, std::ostream& out, std::ostream& err);

int exit_code_for(const std::exception& e);

}  // namespace pmax::cli
