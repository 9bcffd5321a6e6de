#pragma once

// JSON geometry files and run configurations.
//
// Geometry file:
//   { "name": "...", "k": 2, "isotropy_dim": 3,
//     "summands": [ {"label": "sphere", "dim": 2, "block": "plus"},
//                   {"label": "q", "dim": 4, "block": "minus", "casimir": 6.0} ],
//     "brackets": [ [a, b, c, value], ... ] }
// The basis is the isotropy algebra (indices 0..isotropy_dim-1) followed by the summands in
// order. "brackets" may be omitted; such a table-only geometry supports the indeterminacy
// scan (Casimir values required on Minus summands) but not curvature.
//
// Run configuration:
//   { "geometry": "bryant-sphere(3)" | "path/to/geometry.json" | { inline geometry },
//     "k": 3, "n": 3, "p": 2,                      (builtin parameters, optional)
//     "epsilon": 0, "u2": -1, "L1": {"p2": 0.0},
//     "kernel_params": {"0": [1.0]}, "series_order": 12,
//     "t0": 0.05, "t_end": 10, "rtol": 1e-9, "atol": 1e-12,
//     "scan_limit": 50, "outputs": "out", "emit_plot_data": false }

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cohomsol/builtins.hpp"
#include "cohomsol/errors.hpp"
#include "cohomsol/geometry.hpp"

namespace cohomsol {

using json = nlohmann::json;

inline GeometrySpec geometry_from_json(const json& j) {
  try {
    const std::string name = j.value("name", std::string("custom"));
    const int k = j.at("k").get<int>();
    const int iso = j.value("isotropy_dim", 0);
    std::vector<SummandSpec> summands;
    for (const auto& s : j.at("summands")) {
      const std::string block = s.at("block").get<std::string>();
      if (block != "plus" && block != "minus") throw GeometryError("summand block must be \"plus\" or \"minus\"");
      std::optional<double> cas;
      if (s.contains("casimir")) cas = s.at("casimir").get<double>();
      summands.push_back({s.at("label").get<std::string>(), s.at("dim").get<int>(),
                          block == "plus" ? Block::Plus : Block::Minus, cas});
    }
    std::optional<std::vector<BracketEntry>> brackets;
    if (j.contains("brackets")) {
      brackets.emplace();
      for (const auto& e : j.at("brackets")) {
        if (!e.is_array() || e.size() != 4) throw GeometryError("bracket entries are [a, b, c, value]");
        brackets->push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<int>(), e[3].get<double>()});
      }
    }
    return GeometrySpec(name, k, iso, std::move(summands), std::move(brackets));
  } catch (const json::exception& e) {
    throw GeometryError(std::string("malformed geometry: ") + e.what());
  }
}

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw GeometryError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw GeometryError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

/// Builtin name, or path to a geometry JSON file.
inline GeometrySpec resolve_geometry(const std::string& ref, const BuiltinParams& params = {}) {
  if (std::filesystem::exists(ref)) return geometry_from_json(read_json_file(ref));
  return make_builtin(ref, params);
}

struct RunConfig {
  std::string geometry_ref;
  std::optional<json> inline_geometry;
  BuiltinParams params;
  double epsilon = 0.0;
  double u2 = 0.0;
  std::map<std::string, double> L1;
  std::map<int, std::vector<double>> kernel_params;
  int series_order = 12;
  std::optional<double> t0;
  double t_end = 10.0;
  double rtol = 1e-9;
  double atol = 1e-12;
  int scan_limit = 50;
  std::string outputs = ".";
  bool emit_plot_data = false;

  GeometrySpec geometry() const {
    if (inline_geometry) return geometry_from_json(*inline_geometry);
    return resolve_geometry(geometry_ref, params);
  }
};

/// Parses "m:c1,c2,..." into a kernel parameter entry.
inline std::pair<int, std::vector<double>> parse_kernel_param(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InvalidInitialData("kernel parameter '" + text + "' is not of the form m:c1,c2");
  try {
    const int m = std::stoi(text.substr(0, colon));
    std::vector<double> c;
    std::string rest = text.substr(colon + 1);
    std::size_t pos = 0;
    while (pos <= rest.size()) {
      const auto comma = rest.find(',', pos);
      const std::string tok = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      if (!tok.empty()) c.push_back(std::stod(tok));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    return {m, c};
  } catch (const std::logic_error&) {
    throw InvalidInitialData("kernel parameter '" + text + "' is not of the form m:c1,c2");
  }
}

/// Parses "label=value".
inline std::pair<std::string, double> parse_label_value(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw InvalidInitialData("expected label=value, got '" + text + "'");
  try {
    return {text.substr(0, eq), std::stod(text.substr(eq + 1))};
  } catch (const std::logic_error&) {
    throw InvalidInitialData("expected label=value, got '" + text + "'");
  }
}

/// Overlays the fields present in `j` onto `cfg`. Relative geometry paths resolve against `base_dir`.
inline void apply_config_json(RunConfig& cfg, const json& j, const std::filesystem::path& base_dir = {}) {
  try {
    if (j.contains("geometry")) {
      const auto& g = j.at("geometry");
      if (g.is_object()) {
        cfg.inline_geometry = g;
      } else {
        cfg.inline_geometry.reset();
        std::string ref = g.get<std::string>();
        if (!base_dir.empty() && std::filesystem::exists(base_dir / ref)) ref = (base_dir / ref).string();
        cfg.geometry_ref = ref;
      }
    }
    if (j.contains("k")) cfg.params.k = j.at("k").get<int>();
    if (j.contains("n")) cfg.params.n = j.at("n").get<int>();
    if (j.contains("p")) cfg.params.p = j.at("p").get<int>();
    if (j.contains("epsilon")) cfg.epsilon = j.at("epsilon").get<double>();
    if (j.contains("u2")) cfg.u2 = j.at("u2").get<double>();
    if (j.contains("L1")) {
      cfg.L1.clear();
      const auto& l = j.at("L1");
      if (l.is_object()) {
        for (const auto& [label, v] : l.items()) cfg.L1[label] = v.get<double>();
      } else {
        for (const auto& e : l) cfg.L1[e.at(0).get<std::string>()] = e.at(1).get<double>();
      }
    }
    if (j.contains("kernel_params")) {
      cfg.kernel_params.clear();
      const auto& kp = j.at("kernel_params");
      if (kp.is_object()) {
        for (const auto& [m, v] : kp.items()) cfg.kernel_params[std::stoi(m)] = v.get<std::vector<double>>();
      } else {
        for (const auto& e : kp) cfg.kernel_params[e.at(0).get<int>()] = e.at(1).get<std::vector<double>>();
      }
    }
    if (j.contains("series_order")) cfg.series_order = j.at("series_order").get<int>();
    if (j.contains("t0")) cfg.t0 = j.at("t0").get<double>();
    if (j.contains("t_end")) cfg.t_end = j.at("t_end").get<double>();
    if (j.contains("rtol")) cfg.rtol = j.at("rtol").get<double>();
    if (j.contains("atol")) cfg.atol = j.at("atol").get<double>();
    if (j.contains("scan_limit")) cfg.scan_limit = j.at("scan_limit").get<int>();
    if (j.contains("outputs")) cfg.outputs = j.at("outputs").get<std::string>();
    if (j.contains("emit_plot_data")) cfg.emit_plot_data = j.at("emit_plot_data").get<bool>();
  } catch (const json::exception& e) {
    throw InvalidInitialData(std::string("malformed run configuration: ") + e.what());
  }
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
  RunConfig cfg;
  apply_config_json(cfg, read_json_file(path), path.parent_path());
  return cfg;
}

}  // namespace cohomsol
