#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pmax/fields.hpp"
#include "pmax/mc_study.hpp"

namespace pmax {

// Shortest round-trip decimal; independent of the global locale.
std::string format_double(double value);
// Fixed-point with `decimals` digits after the point, locale-independent.
std::string format_fixed(double value, int decimals);

// `n,loc,value` with 1-based n, rows sorted by (n, location id).
void write_field_sample_csv(std::ostream& out, const FieldSample& sample);
// Locations come back in id order with zero coordinates.
FieldSample read_field_sample_csv(std::istream& in);
FieldSample read_field_sample_csv(const std::filesystem::path& path);

void write_mc_report_csv(std::ostream& out, const McReport& report);

void write_pairs_csv(std::ostream& out, std::span<const std::pair<double, double>> pairs,
                     const std::string& first = "u", const std::string& second = "v");

struct ScatterOptions {
  std::size_t point_cap = 5000;
  std::uint64_t subsample_seed = 0x5CA77E5ULL;
  bool unit_square = true;  // axes fixed to (0,1)^2; otherwise log10 axes over the data
  std::string title;
  std::string x_label = "u";
  std::string y_label = "v";
};

inline constexpr const char* kSvgGeneratorComment = "<!-- generator: pmax figures 1 -->";

void write_scatter_svg(std::ostream& out, std::span<const std::pair<double, double>> pairs,
                       const ScatterOptions& options);

// Opens for writing or throws IoError.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace pmax
