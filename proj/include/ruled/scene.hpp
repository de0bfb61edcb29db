#pragma once

// Scene files: a single JSON document describing a framed curve (explicit fields or a
// builtin patch), the sampling grid and tolerances. Ingestion validates the document,
// enforces unit speed and orthonormality, and emits a normalized scene whose re-ingestion
// reproduces it byte for byte.

#include <json.hpp>

#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ruled/builtins.hpp"
#include "ruled/error.hpp"
#include "ruled/field.hpp"
#include "ruled/framed_curve.hpp"
#include "ruled/parametric.hpp"
#include "ruled/ruledgeom.hpp"
#include "ruled/tolerance.hpp"

namespace ruled {

using Json = nlohmann::json;

inline constexpr int kDefaultTSamples = 200;
inline constexpr double kDefaultUExtent = 2.0;
inline constexpr int kDefaultUSamplesPerAxis = 9;
inline constexpr std::uint64_t kDefaultSeed = 42;

struct IngestResult {
  RuledPatch patch;
  Json normalized;  // canonical scene with defaults filled and a provenance block
  std::uint64_t seed = kDefaultSeed;
  std::string name;
  bool reparametrized = false;
  bool orthonormalized = false;
  std::vector<std::string> notes;
};

/// Values that take precedence over the scene file (command-line flags).
struct SceneOverrides {
  std::optional<int> t_samples;
  std::optional<double> u_extent;
  std::optional<double> rank_rel_tol;
  std::optional<double> zero_abs_tol;
  std::optional<std::uint64_t> seed;
};

namespace detail {

[[noreturn]] inline void invalid(const std::string& path, const std::string& what) {
  fail(ErrorKind::validation, (path.empty() ? std::string("/") : path) + ": " + what);
}

inline void allow_keys(const Json& obj, const std::string& path, const std::set<std::string>& keys) {
  for (const auto& [key, value] : obj.items())
    if (!keys.contains(key)) invalid(path + "/" + key, "unknown key");
}

inline const Json& require(const Json& obj, const std::string& path, const std::string& key) {
  if (!obj.contains(key)) invalid(path + "/" + key, "required key missing");
  return obj.at(key);
}

inline double as_number(const Json& v, const std::string& path) {
  if (!v.is_number()) invalid(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) invalid(path, "expected a finite number");
  return x;
}

inline long long as_integer(const Json& v, const std::string& path, long long min) {
  if (!v.is_number_integer()) invalid(path, "expected an integer");
  const auto x = v.get<long long>();
  if (x < min) invalid(path, "must be at least " + std::to_string(min));
  return x;
}

inline std::vector<double> as_numbers(const Json& v, const std::string& path) {
  if (!v.is_array()) invalid(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], path + "/" + std::to_string(i)));
  return out;
}

inline const Json& as_object(const Json& v, const std::string& path) {
  if (!v.is_object()) invalid(path, "expected an object");
  return v;
}

inline Params as_params(const Json& v, const std::string& path) {
  Params out;
  for (const auto& [key, value] : as_object(v, path).items()) out[key] = as_number(value, path + "/" + key);
  return out;
}

inline Json params_json(const Params& p) {
  Json out = Json::object();
  for (const auto& [k, v] : p) out[k] = v;
  return out;
}

struct ParsedField {
  ParamVectorField field;
  Json normalized;
};

/// One field specification; returns the field and its canonical JSON.
inline ParsedField parse_field(const Json& v, const std::string& path) {
  as_object(v, path);
  const Json& kind_json = require(v, path, "kind");
  if (!kind_json.is_string()) invalid(path + "/kind", "expected a string");
  const auto kind = kind_json.get<std::string>();
  ParsedField out;
  if (kind == "polynomial") {
    allow_keys(v, path, {"kind", "coefficients"});
    const Json& coeffs = require(v, path, "coefficients");
    if (!coeffs.is_array() || coeffs.empty()) invalid(path + "/coefficients", "expected a non-empty array");
    std::vector<std::vector<double>> c;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      c.push_back(as_numbers(coeffs[i], path + "/coefficients/" + std::to_string(i)));
      if (c.back().empty()) invalid(path + "/coefficients/" + std::to_string(i), "expected at least one coefficient");
    }
    out.field = ParamVectorField::polynomial(c);
    out.normalized = {{"kind", kind}, {"coefficients", c}};
  } else if (kind == "fourier") {
    allow_keys(v, path, {"kind", "coordinates"});
    const Json& coords = require(v, path, "coordinates");
    if (!coords.is_array() || coords.empty()) invalid(path + "/coordinates", "expected a non-empty array");
    std::vector<FourierCoordinate> c;
    Json norm = Json::array();
    for (std::size_t i = 0; i < coords.size(); ++i) {
      const std::string cp = path + "/coordinates/" + std::to_string(i);
      as_object(coords[i], cp);
      allow_keys(coords[i], cp, {"constant", "cos", "sin", "omega"});
      FourierCoordinate fcoord;
      if (coords[i].contains("constant")) fcoord.constant = as_number(coords[i]["constant"], cp + "/constant");
      if (coords[i].contains("cos")) fcoord.cos_coefs = as_numbers(coords[i]["cos"], cp + "/cos");
      if (coords[i].contains("sin")) fcoord.sin_coefs = as_numbers(coords[i]["sin"], cp + "/sin");
      if (coords[i].contains("omega")) fcoord.omega = as_number(coords[i]["omega"], cp + "/omega");
      const std::size_t n = std::max(fcoord.cos_coefs.size(), fcoord.sin_coefs.size());
      fcoord.cos_coefs.resize(n, 0.0);
      fcoord.sin_coefs.resize(n, 0.0);
      norm.push_back({{"constant", fcoord.constant}, {"cos", fcoord.cos_coefs}, {"sin", fcoord.sin_coefs},
                      {"omega", fcoord.omega}});
      c.push_back(std::move(fcoord));
    }
    out.field = ParamVectorField::fourier(c);
    out.normalized = {{"kind", kind}, {"coordinates", norm}};
  } else if (kind == "constant") {
    allow_keys(v, path, {"kind", "value"});
    const auto value = as_numbers(require(v, path, "value"), path + "/value");
    if (value.empty()) invalid(path + "/value", "expected a non-empty array");
    out.field = ParamVectorField::constant(Eigen::Map<const Eigen::VectorXd>(value.data(), static_cast<Eigen::Index>(value.size())));
    out.normalized = {{"kind", kind}, {"value", value}};
  } else if (kind == "builtin") {
    allow_keys(v, path, {"kind", "family", "params"});
    const Json& fam = require(v, path, "family");
    if (!fam.is_string()) invalid(path + "/family", "expected a string");
    const auto name = fam.get<std::string>();
    const Params given = v.contains("params") ? as_params(v["params"], path + "/params") : Params{};
    try {
      const auto& family = builtin::find_field_family(name);
      const auto params = builtin::resolve_params(name, family.defaults, given);
      out.field = family.make(params);
      out.normalized = {{"kind", kind}, {"family", name}, {"params", params_json(params)}};
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::config) throw;
      invalid(path, e.what());
    }
  } else {
    invalid(path + "/kind", "unknown field kind '" + kind + "' (polynomial, fourier, constant, builtin)");
  }
  return out;
}

inline std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

inline Interval parse_interval(const Json& v, const std::string& path) {
  const auto iv = as_numbers(v, path);
  if (iv.size() != 2) invalid(path, "expected [t_min, t_max]");
  if (!(iv[1] > iv[0])) invalid(path, "t_max must exceed t_min");
  return {iv[0], iv[1]};
}

}  // namespace detail

/// Parses JSON text; parse errors carry line and column.
inline Json parse_scene_text(const std::string& text, const std::string& source = "scene") {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    const auto [line, column] = detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    std::string what = e.what();
    if (const auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
    fail(ErrorKind::parse, source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what);
  }
}

/// Validates a parsed scene and builds the analyzed patch.
inline IngestResult ingest_json(const Json& scene, const SceneOverrides& overrides = {}) {
  using detail::invalid;
  detail::as_object(scene, "");
  detail::allow_keys(scene, "", {"name", "ambient_dim", "m", "interval", "patch", "directrix", "frame", "grid",
                                 "tolerances", "seed", "provenance"});
  IngestResult result;
  Json norm = Json::object();

  if (scene.contains("name")) {
    if (!scene["name"].is_string()) invalid("/name", "expected a string");
    result.name = scene["name"].get<std::string>();
    norm["name"] = result.name;
  }

  FramedCurve fc;
  if (scene.contains("patch")) {
    if (scene.contains("directrix") || scene.contains("frame"))
      invalid("/patch", "give either a builtin patch or directrix and frame, not both");
    const Json& patch = detail::as_object(scene["patch"], "/patch");
    detail::allow_keys(patch, "/patch", {"builtin", "params"});
    const Json& name = detail::require(patch, "/patch", "builtin");
    if (!name.is_string()) invalid("/patch/builtin", "expected a string");
    const auto family_name = name.get<std::string>();
    const Params given =
        patch.contains("params") ? detail::as_params(patch["params"], "/patch/params") : Params{};
    Params params;
    try {
      const auto& family = builtin::find_patch_family(family_name);
      params = builtin::resolve_params(family_name, family.defaults, given);
      fc = family.make(params);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::config) throw;
      invalid("/patch", e.what());
    }
    norm["patch"] = {{"builtin", family_name}, {"params", detail::params_json(params)}};
    if (scene.contains("ambient_dim") && detail::as_integer(scene["ambient_dim"], "/ambient_dim", 2) != fc.dim)
      invalid("/ambient_dim", "builtin patch '" + family_name + "' lives in dimension " + std::to_string(fc.dim));
    if (scene.contains("m") && detail::as_integer(scene["m"], "/m", 2) != fc.m)
      invalid("/m", "builtin patch '" + family_name + "' has m = " + std::to_string(fc.m));
    if (scene.contains("interval")) fc.interval = detail::parse_interval(scene["interval"], "/interval");
  } else {
    fc.dim = static_cast<int>(detail::as_integer(detail::require(scene, "", "ambient_dim"), "/ambient_dim", 2));
    fc.m = static_cast<int>(detail::as_integer(detail::require(scene, "", "m"), "/m", 2));
    if (fc.m > fc.dim) invalid("/m", "m must not exceed ambient_dim");
    fc.interval = detail::parse_interval(detail::require(scene, "", "interval"), "/interval");
    auto directrix = detail::parse_field(detail::require(scene, "", "directrix"), "/directrix");
    if (directrix.field.dim() != fc.dim)
      invalid("/directrix", "has " + std::to_string(directrix.field.dim()) + " coordinates, ambient_dim is " +
                                std::to_string(fc.dim));
    fc.directrix = directrix.field;
    norm["directrix"] = directrix.normalized;
    const Json& frame = detail::require(scene, "", "frame");
    if (!frame.is_array()) invalid("/frame", "expected an array of fields");
    if (static_cast<int>(frame.size()) != fc.m - 1)
      invalid("/frame", "expected m-1 = " + std::to_string(fc.m - 1) + " fields, got " + std::to_string(frame.size()));
    norm["frame"] = Json::array();
    for (std::size_t j = 0; j < frame.size(); ++j) {
      const std::string path = "/frame/" + std::to_string(j);
      auto x = detail::parse_field(frame[j], path);
      if (x.field.dim() != fc.dim)
        invalid(path, "has " + std::to_string(x.field.dim()) + " coordinates, ambient_dim is " + std::to_string(fc.dim));
      fc.frame.push_back(x.field);
      norm["frame"].push_back(x.normalized);
    }
  }
  norm["ambient_dim"] = fc.dim;
  norm["m"] = fc.m;
  norm["interval"] = {fc.interval.lo, fc.interval.hi};
  for (const auto* f : {&fc.directrix}) {
    const Interval dom = f->domain();
    if (fc.interval.lo < dom.lo || fc.interval.hi > dom.hi) invalid("/interval", "exceeds the directrix domain");
  }

  int t_samples = kDefaultTSamples;
  double u_extent = kDefaultUExtent;
  int u_per_axis = kDefaultUSamplesPerAxis;
  if (scene.contains("grid")) {
    const Json& g = detail::as_object(scene["grid"], "/grid");
    detail::allow_keys(g, "/grid", {"t_samples", "u_extent", "u_samples_per_axis"});
    if (g.contains("t_samples")) t_samples = static_cast<int>(detail::as_integer(g["t_samples"], "/grid/t_samples", 3));
    if (g.contains("u_extent")) u_extent = detail::as_number(g["u_extent"], "/grid/u_extent");
    if (g.contains("u_samples_per_axis"))
      u_per_axis = static_cast<int>(detail::as_integer(g["u_samples_per_axis"], "/grid/u_samples_per_axis", 1));
  }
  if (overrides.t_samples) t_samples = *overrides.t_samples;
  if (overrides.u_extent) u_extent = *overrides.u_extent;
  if (t_samples < 3) invalid("/grid/t_samples", "must be at least 3");
  if (!(u_extent > 0.0)) invalid("/grid/u_extent", "must be positive");
  norm["grid"] = {{"t_samples", t_samples}, {"u_extent", u_extent}, {"u_samples_per_axis", u_per_axis}};

  TolerancePolicy tol;
  if (scene.contains("tolerances")) {
    const Json& t = detail::as_object(scene["tolerances"], "/tolerances");
    detail::allow_keys(t, "/tolerances", {"rank_rel_tol", "zero_abs_tol", "derivative_check_tol"});
    if (t.contains("rank_rel_tol")) tol.rank_rel_tol = detail::as_number(t["rank_rel_tol"], "/tolerances/rank_rel_tol");
    if (t.contains("zero_abs_tol")) tol.zero_abs_tol = detail::as_number(t["zero_abs_tol"], "/tolerances/zero_abs_tol");
    if (t.contains("derivative_check_tol"))
      tol.derivative_check_tol = detail::as_number(t["derivative_check_tol"], "/tolerances/derivative_check_tol");
  }
  if (overrides.rank_rel_tol) tol.rank_rel_tol = *overrides.rank_rel_tol;
  if (overrides.zero_abs_tol) tol.zero_abs_tol = *overrides.zero_abs_tol;
  try {
    tol.validate();
  } catch (const Error& e) {
    invalid("/tolerances", e.what());
  }
  norm["tolerances"] = {{"rank_rel_tol", tol.rank_rel_tol},
                        {"zero_abs_tol", tol.zero_abs_tol},
                        {"derivative_check_tol", tol.derivative_check_tol}};

  if (scene.contains("seed")) {
    if (!scene["seed"].is_number_unsigned()) invalid("/seed", "expected a non-negative integer");
    result.seed = scene["seed"].get<std::uint64_t>();
  }
  if (overrides.seed) result.seed = *overrides.seed;
  norm["seed"] = result.seed;

  fc.validate_structure();
  SampleGrid grid = SampleGrid::uniform(fc.interval, t_samples, u_extent, u_per_axis);

  Json provenance = Json::object();
  if (fc.speed_defect(grid.t_samples) > tol.derivative_check_tol) {
    const Interval original = fc.interval;
    const auto map = make_arclength_map(fc.directrix, fc.interval, tol);
    fc.directrix = compose(fc.directrix, map);
    for (auto& x : fc.frame) x = compose(x, map);
    fc.interval = map->s_range();
    grid = SampleGrid::uniform(fc.interval, t_samples, u_extent, u_per_axis);
    result.reparametrized = true;
    result.notes.push_back("directrix re-parametrized by arclength (length " + format_number(map->length()) + ")");
    provenance["reparametrization"] = {
        {"method", "arclength"}, {"original_interval", {original.lo, original.hi}}, {"length", map->length()}};
  }
  if (fc.orthonormality_defect(grid.t_samples) > tol.derivative_check_tol) {
    fc.frame = gram_schmidt_frame(fc.frame, grid.t_samples, tol);
    result.orthonormalized = true;
    result.notes.push_back("frame orthonormalized by Gram-Schmidt on the t grid");
    provenance["orthonormalization"] = {{"method", "gram_schmidt"}, {"nodes", t_samples}};
  }
  provenance["analysis_interval"] = {fc.interval.lo, fc.interval.hi};
  norm["provenance"] = provenance;

  result.patch = RuledPatch{fc, grid, tol};
  result.patch.validate();
  result.normalized = std::move(norm);
  return result;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::input, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline IngestResult ingest_text(const std::string& text, const std::string& source = "scene",
                                const SceneOverrides& overrides = {}) {
  return ingest_json(parse_scene_text(text, source), overrides);
}

inline IngestResult ingest(const std::string& path, const SceneOverrides& overrides = {}) {
  return ingest_text(read_text_file(path), path, overrides);
}

/// Canonical text of a normalized scene (sorted keys, two-space indent, trailing newline).
inline std::string dump_scene(const Json& normalized) { return normalized.dump(2) + "\n"; }

}  // namespace ruled
