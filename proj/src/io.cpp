#include "pmax/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <system_error>

#include "pmax/error.hpp"
#include "pmax/rng.hpp"

namespace pmax {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string format_fixed(double value, int decimals) {
  char buf[128];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, decimals);
  if (res.ec != std::errc{}) return format_double(value);
  return std::string(buf, res.ptr);
}

void write_field_sample_csv(std::ostream& out, const FieldSample& sample) {
  const auto& locs = sample.locations();
  std::vector<std::size_t> order(locs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return locs[a].id < locs[b].id; });
  out << "n,loc,value\n";
  for (std::size_t t = 0; t < sample.n_time(); ++t) {
    for (std::size_t j : order) out << (t + 1) << ',' << locs[j].id << ',' << format_double(sample.at(t, j)) << '\n';
  }
  if (!out) throw IoError("failed while writing FieldSample CSV");
}

namespace {

template <typename T>
T parse_number(std::string_view text, std::size_t line) {
  T value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw SpecError("FieldSample CSV line " + std::to_string(line) + ": bad number '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

FieldSample read_field_sample_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw SpecError("FieldSample CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "n,loc,value") throw SpecError("FieldSample CSV header must be 'n,loc,value', got '" + line + "'");

  std::map<std::pair<std::size_t, std::string>, double> cells;
  std::map<std::string, std::size_t> ids;
  std::size_t max_n = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
    if (c2 == std::string::npos || line.find(',', c2 + 1) != std::string::npos) {
      throw SpecError("FieldSample CSV line " + std::to_string(line_no) + ": expected 3 fields");
    }
    const std::string_view view(line);
    const auto n = parse_number<std::size_t>(view.substr(0, c1), line_no);
    const std::string id(view.substr(c1 + 1, c2 - c1 - 1));
    const auto value = parse_number<double>(view.substr(c2 + 1), line_no);
    if (n == 0) throw SpecError("FieldSample CSV line " + std::to_string(line_no) + ": n is 1-based");
    if (id.empty()) throw SpecError("FieldSample CSV line " + std::to_string(line_no) + ": empty location id");
    if (!cells.emplace(std::make_pair(n, id), value).second) {
      throw SpecError("FieldSample CSV line " + std::to_string(line_no) + ": duplicate (n, loc)");
    }
    ids.emplace(id, 0);
    max_n = std::max(max_n, n);
  }
  if (cells.empty()) throw SpecError("FieldSample CSV has no data rows");
  if (cells.size() != max_n * ids.size()) {
    throw SpecError("FieldSample CSV is not a complete (n, loc) panel");
  }
  std::vector<Location> locations;
  for (auto& [id, idx] : ids) {
    idx = locations.size();
    locations.push_back({id, 0.0, 0.0});
  }
  std::vector<double> values(cells.size());
  for (const auto& [key, v] : cells) values[(key.first - 1) * locations.size() + ids.at(key.second)] = v;
  return FieldSample(std::move(locations), max_n, std::move(values), Layer::Y, 0);
}

FieldSample read_field_sample_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return read_field_sample_csv(in);
}

void write_mc_report_csv(std::ostream& out, const McReport& report) {
  out << "alpha,n,percentile,mean,bias,sd,rmse,failures\n";
  for (const McRow& row : report.rows) {
    out << format_double(row.alpha) << ',' << row.n << ',' << format_double(row.percentile) << ','
        << format_double(row.mean) << ',' << format_double(row.bias) << ',' << format_double(row.sd) << ','
        << format_double(row.rmse) << ',' << row.failures << '\n';
  }
  if (!out) throw IoError("failed while writing McReport CSV");
}

void write_pairs_csv(std::ostream& out, std::span<const std::pair<double, double>> pairs, const std::string& first,
                     const std::string& second) {
  out << first << ',' << second << '\n';
  for (const auto& [a, b] : pairs) out << format_double(a) << ',' << format_double(b) << '\n';
  if (!out) throw IoError("failed while writing pair CSV");
}

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_scatter_svg(std::ostream& out, std::span<const std::pair<double, double>> pairs,
                       const ScatterOptions& options) {
  // uniform subsample without replacement (partial Fisher-Yates), kept in input order
  std::vector<std::size_t> keep(pairs.size());
  std::iota(keep.begin(), keep.end(), 0);
  if (pairs.size() > options.point_cap) {
    RngStream rng(options.subsample_seed, 0);
    for (std::size_t i = 0; i < options.point_cap; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.below(keep.size() - i));
      std::swap(keep[i], keep[j]);
    }
    keep.resize(options.point_cap);
    std::sort(keep.begin(), keep.end());
  }

  constexpr double size = 400.0;
  constexpr double margin = 50.0;
  double lo_x = 0.0, hi_x = 1.0, lo_y = 0.0, hi_y = 1.0;
  std::function<double(double)> map = [](double v) { return v; };
  if (!options.unit_square) {
    map = [](double v) { return std::log10(v); };
    lo_x = lo_y = 1e300;
    hi_x = hi_y = -1e300;
    for (std::size_t i : keep) {
      lo_x = std::min(lo_x, map(pairs[i].first));
      hi_x = std::max(hi_x, map(pairs[i].first));
      lo_y = std::min(lo_y, map(pairs[i].second));
      hi_y = std::max(hi_y, map(pairs[i].second));
    }
    if (keep.empty() || !(hi_x > lo_x)) lo_x = 0.0, hi_x = 1.0;
    if (keep.empty() || !(hi_y > lo_y)) lo_y = 0.0, hi_y = 1.0;
  }
  auto px = [&](double v) { return margin + (map(v) - lo_x) / (hi_x - lo_x) * size; };
  auto py = [&](double v) { return margin + size - (map(v) - lo_y) / (hi_y - lo_y) * size; };

  const double total = size + 2 * margin;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << kSvgGeneratorComment << '\n';
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_fixed(total, 0) << "\" height=\""
      << format_fixed(total, 0) << "\" viewBox=\"0 0 " << format_fixed(total, 0) << ' ' << format_fixed(total, 0)
      << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<rect x=\"" << format_fixed(margin, 0) << "\" y=\"" << format_fixed(margin, 0) << "\" width=\""
      << format_fixed(size, 0) << "\" height=\"" << format_fixed(size, 0)
      << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  if (!options.title.empty()) {
    out << "<text x=\"" << format_fixed(total / 2, 1) << "\" y=\"30\" text-anchor=\"middle\" font-size=\"14\">"
        << xml_escape(options.title) << "</text>\n";
  }
  const std::string suffix = options.unit_square ? "" : " (log10)";
  out << "<text x=\"" << format_fixed(total / 2, 1) << "\" y=\"" << format_fixed(total - 12, 1)
      << "\" text-anchor=\"middle\" font-size=\"12\">" << xml_escape(options.x_label + suffix) << "</text>\n";
  out << "<text x=\"14\" y=\"" << format_fixed(total / 2, 1) << "\" text-anchor=\"middle\" font-size=\"12\" "
      << "transform=\"rotate(-90 14 " << format_fixed(total / 2, 1) << ")\">" << xml_escape(options.y_label + suffix)
      << "</text>\n";
  for (double tick : {0.0, 0.5, 1.0}) {
    const double vx = lo_x + tick * (hi_x - lo_x);
    const double vy = lo_y + tick * (hi_y - lo_y);
    out << "<text x=\"" << format_fixed(margin + tick * size, 1) << "\" y=\"" << format_fixed(margin + size + 16, 1)
        << "\" text-anchor=\"middle\" font-size=\"10\">" << format_fixed(vx, 2) << "</text>\n";
    out << "<text x=\"" << format_fixed(margin - 6, 1) << "\" y=\"" << format_fixed(margin + size - tick * size + 4, 1)
        << "\" text-anchor=\"end\" font-size=\"10\">" << format_fixed(vy, 2) << "</text>\n";
  }
  out << "<g fill=\"black\" fill-opacity=\"0.5\">\n";
  for (std::size_t i : keep) {
    out << "<circle cx=\"" << format_fixed(px(pairs[i].first), 2) << "\" cy=\"" << format_fixed(py(pairs[i].second), 2)
        << "\" r=\"1.2\"/>\n";
  }
  out << "</g>\n</svg>\n";
  if (!out) throw IoError("failed while writing SVG");
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

}  // namespace pmax
