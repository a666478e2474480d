#include "pmax/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "pmax/error.hpp"

namespace pmax {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw SpecError(where + " must be a JSON object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) throw SpecError("unknown key '" + key + "' in " + where);
  }
}

double number_at(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw SpecError("missing key '" + key + "' in " + where);
  const json& v = obj.at(key);
  if (!v.is_number()) throw SpecError("'" + key + "' in " + where + " must be a number");
  return v.get<double>();
}

std::string string_at(const json& obj, const std::string& key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_string()) throw SpecError("'" + key + "' in " + where + " must be a string");
  return v.get<std::string>();
}

// One config may drive several commands, so the run section accepts the
// union of every command's keys; each command reads only its own.
const std::set<std::string>& run_keys() {
  static const std::set<std::string> keys{
      "n_time", "r", "x", "xp", "location", "k", "start", "alphas", "sample_sizes",
      "replicates", "percentiles", "grid_start", "transform", "point_cap"};
  return keys;
}

ModelSpec parse_model(const json& m, bool require_locations, bool& has_locations) {
  reject_unknown(m, {"innovation", "weights", "z_coupling", "correlation", "truncation", "locations", "alpha"},
                 "model");
  ModelSpec spec;
  CorrelationModel correlation;
  if (m.contains("correlation")) {
    const json& c = m.at("correlation");
    reject_unknown(c, {"c2", "nu"}, "model.correlation");
    if (c.contains("c2")) correlation.range = number_at(c, "c2", "model.correlation");
    if (c.contains("nu")) correlation.smoothness = number_at(c, "nu", "model.correlation");
    correlation.validate();
  }
  SchlatherTruncation truncation;
  if (m.contains("truncation")) {
    const json& t = m.at("truncation");
    reject_unknown(t, {"epsilon", "max_points"}, "model.truncation");
    if (t.contains("epsilon")) truncation.epsilon = number_at(t, "epsilon", "model.truncation");
    if (t.contains("max_points")) {
      const json& v = t.at("max_points");
      if (!v.is_number_unsigned() || v.get<std::uint64_t>() < 1)
        throw SpecError("model.truncation.max_points must be a positive integer");
      truncation.max_points = v.get<std::size_t>();
    }
    truncation.validate();
  }

  const std::string innovation =
      m.contains("innovation") ? string_at(m, "innovation", "model") : "independent_frechet";
  if (innovation == "schlather") {
    spec.innovation = SchlatherInnovation{correlation, truncation};
  } else if (innovation != "independent_frechet") {
    throw SpecError("model.innovation must be 'independent_frechet' or 'schlather'");
  }

  if (m.contains("weights")) {
    const json& w = m.at("weights");
    if (!w.is_array() || w.empty()) throw SpecError("model.weights must be a non-empty array");
    spec.temporal_weights.clear();
    for (const json& v : w) {
      if (!v.is_number()) throw SpecError("model.weights entries must be numbers");
      spec.temporal_weights.push_back(v.get<double>());
    }
  }

  if (m.contains("z_coupling")) {
    const std::string z = string_at(m, "z_coupling", "model");
    if (z == "common") {
      spec.z_coupling = ZCoupling::CommonScalar;
    } else if (z == "independent") {
      spec.z_coupling = ZCoupling::IndependentPerLocation;
    } else {
      throw SpecError("model.z_coupling must be 'common' or 'independent'");
    }
  }

  has_locations = m.contains("locations");
  if (has_locations) {
    const json& locs = m.at("locations");
    if (!locs.is_array() || locs.empty()) throw SpecError("model.locations must be a non-empty array");
    for (const json& l : locs) {
      reject_unknown(l, {"id", "x1", "x2"}, "model.locations[]");
      if (!l.contains("id")) throw SpecError("model.locations[] entries need an 'id'");
      spec.locations.push_back({string_at(l, "id", "model.locations[]"), number_at(l, "x1", "model.locations[]"),
                                number_at(l, "x2", "model.locations[]")});
    }
  } else if (require_locations) {
    throw SpecError("model.locations is required for this command");
  }

  if (m.contains("alpha")) {
    const json& a = m.at("alpha");
    if (!a.is_object()) throw SpecError("model.alpha must be an object {location id: alpha}");
    for (const auto& [id, v] : a.items()) {
      if (!v.is_number()) throw SpecError("model.alpha['" + id + "'] must be a number");
      spec.alpha.set(id, v.get<double>());
    }
    for (const auto& [id, _] : spec.alpha.values()) {
      bool known = false;
      for (const auto& loc : spec.locations) known = known || loc.id == id;
      if (!known && has_locations) throw SpecError("model.alpha names unknown location '" + id + "'");
    }
  }

  if (has_locations) {
    spec.validate();
  } else {
    // Only the innovation, weights and correlation matter without locations.
    spec.locations.push_back({"_", 0.0, 0.0});
    spec.alpha.set("_", 1.0);
    spec.validate();
    spec.locations.clear();
    spec.alpha = AlphaMap{};
  }
  return spec;
}

}  // namespace

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << h;
  return out.str();
}

RunConfig parse_run_config(const json& doc, Command command) {
  reject_unknown(doc, {"seed", "model", "run"}, "config");
  RunConfig config;
  if (doc.contains("seed")) {
    const json& s = doc.at("seed");
    if (!s.is_number_unsigned()) throw SpecError("seed must be a non-negative integer");
    config.seed = s.get<std::uint64_t>();
  }
  const bool needs_locations = command != Command::McTable && command != Command::Estimate;
  const json model = doc.contains("model") ? doc.at("model") : json::object();
  if (!doc.contains("model") && needs_locations) throw SpecError("config needs a 'model' section");
  config.model = parse_model(model, needs_locations, config.has_locations);
  config.model_digest = fnv1a_hex(model.dump());
  if (doc.contains("run")) {
    config.run = doc.at("run");
    reject_unknown(config.run, run_keys(), "run");
  }
  return config;
}

RunConfig load_run_config(const std::filesystem::path& path, Command command) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SpecError("config file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return parse_run_config(doc, command);
}

bool run_has(const RunConfig& config, const std::string& key) { return config.run.contains(key); }

double run_number(const RunConfig& config, const std::string& key, double fallback) {
  if (!config.run.contains(key)) return fallback;
  return number_at(config.run, key, "run");
}

std::size_t run_count(const RunConfig& config, const std::string& key, std::size_t fallback) {
  if (!config.run.contains(key)) return fallback;
  const json& v = config.run.at(key);
  if (!v.is_number_unsigned()) throw SpecError("run." + key + " must be a non-negative integer");
  return v.get<std::size_t>();
}

std::string run_string(const RunConfig& config, const std::string& key, const std::string& fallback) {
  if (!config.run.contains(key)) return fallback;
  return string_at(config.run, key, "run");
}

McConfig mc_config_from(const RunConfig& config) {
  McConfig mc;
  mc.master_seed = config.seed;
  mc.model = config.model.is_schlather() ? McModel::SchlatherInnovations : McModel::IndependentInnovations;
  if (const auto* s = std::get_if<SchlatherInnovation>(&config.model.innovation)) mc.correlation = s->correlation;
  const auto& run = config.run;
  auto numbers = [&](const std::string& key) {
    const json& v = run.at(key);
    if (!v.is_array() || v.empty()) throw SpecError("run." + key + " must be a non-empty array");
    std::vector<double> out;
    for (const json& e : v) {
      if (!e.is_number()) throw SpecError("run." + key + " entries must be numbers");
      out.push_back(e.get<double>());
    }
    return out;
  };
  if (run.contains("alphas")) mc.alphas = numbers("alphas");
  if (run.contains("percentiles")) mc.percentiles = numbers("percentiles");
  if (run.contains("sample_sizes")) {
    mc.sample_sizes.clear();
    for (const json& e : run.at("sample_sizes")) {
      if (!e.is_number_unsigned()) throw SpecError("run.sample_sizes entries must be positive integers");
      mc.sample_sizes.push_back(e.get<std::size_t>());
    }
  }
  mc.replicates = run_count(config, "replicates", mc.replicates);
  mc.grid_start = run_number(config, "grid_start", mc.grid_start);
  mc.validate();
  return mc;
}

}  // namespace pmax
