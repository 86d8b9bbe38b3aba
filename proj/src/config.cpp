#include "twinbeam/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>

#include "twinbeam/errors.hpp"
#include "twinbeam/parallel.hpp"

namespace twinbeam {

namespace {

const char* const schema_source =
#include "config_schema.inc"
    ;

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

bool has_type(const Json& v, const std::string& t) {
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  if (t == "number") return v.is_number();
  if (t == "integer") return v.is_number_integer();
  if (t == "string") return v.is_string();
  if (t == "boolean") return v.is_boolean();
  if (t == "null") return v.is_null();
  return false;
}

// The subset of JSON Schema the published schema uses.
void check_node(const Json& v, const Json& schema, const std::string& path) {
  const std::string where = path.empty() ? "(root)" : path;
  if (schema.contains("type")) {
    const Json& t = schema["type"];
    bool ok = false;
    std::string expected;
    for (const Json& name : t.is_array() ? t : Json::array({t})) {
      ok = ok || has_type(v, name.get<std::string>());
      expected += (expected.empty() ? "" : " or ") + name.get<std::string>();
    }
    if (!ok) throw ConfigError(where, where + ": expected " + expected + ", got " + v.dump());
  }
  if (schema.contains("enum")) {
    bool ok = false;
    for (const Json& e : schema["enum"]) ok = ok || e == v;
    if (!ok) throw ConfigError(where, where + ": " + v.dump() + " is not one of " + schema["enum"].dump());
  }
  if (v.is_number()) {
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(where, where + ": must be finite");
    auto bound = [&](const char* key, bool ok, const char* relation) {
      if (!ok) throw ConfigError(where, where + ": must be " + relation + " " + schema[key].dump() + ", got " + v.dump());
    };
    if (schema.contains("minimum")) bound("minimum", x >= schema["minimum"].get<double>(), ">=");
    if (schema.contains("maximum")) bound("maximum", x <= schema["maximum"].get<double>(), "<=");
    if (schema.contains("exclusiveMinimum")) bound("exclusiveMinimum", x > schema["exclusiveMinimum"].get<double>(), ">");
    if (schema.contains("exclusiveMaximum")) bound("exclusiveMaximum", x < schema["exclusiveMaximum"].get<double>(), "<");
  }
  if (v.is_string() && schema.contains("minLength") &&
      v.get<std::string>().size() < schema["minLength"].get<std::size_t>())
    throw ConfigError(where, where + ": string too short");
  if (v.is_object()) {
    const Json props = schema.value("properties", Json::object());
    for (const auto& [key, child] : v.items()) {
      if (props.contains(key)) {
        check_node(child, props[key], join(path, key));
      } else if (schema.contains("additionalProperties") && schema["additionalProperties"] == false) {
        throw ConfigError(join(path, key), join(path, key) + ": unknown key");
      }
    }
  }
  if (v.is_array()) {
    if (schema.contains("minItems") && v.size() < schema["minItems"].get<std::size_t>())
      throw ConfigError(where, where + ": needs at least " + schema["minItems"].dump() + " entries");
    if (schema.contains("maxItems") && v.size() > schema["maxItems"].get<std::size_t>())
      throw ConfigError(where, where + ": allows at most " + schema["maxItems"].dump() + " entries");
    if (schema.contains("items"))
      for (std::size_t i = 0; i < v.size(); ++i) check_node(v[i], schema["items"], where + "[" + std::to_string(i) + "]");
  }
}

// Objects merge key by key; anything else in the patch replaces the base.
void deep_merge(Json& base, const Json& patch) {
  if (!base.is_object() || !patch.is_object()) {
    base = patch;
    return;
  }
  for (const auto& [key, value] : patch.items()) {
    if (base.contains(key)) {
      deep_merge(base[key], value);
    } else {
      base[key] = value;
    }
  }
}

Json planes_in_rayleigh_units(std::initializer_list<const char*> values) {
  Json a = Json::array();
  for (const char* v : values) a.push_back(std::string(v) + " zR");
  return a;
}

// Dotted path into a document, falling back to the defaults for missing keys.
const Json& lookup(const Json& doc, const Json& defaults, const std::string& path) {
  std::string pointer = "/" + path;
  std::replace(pointer.begin(), pointer.end(), '.', '/');
  const Json::json_pointer ptr(pointer);
  return doc.contains(ptr) ? doc.at(ptr) : defaults.at(ptr);
}

}  // namespace

const std::string& config_schema_text() {
  static const std::string text(schema_source);
  return text;
}

const Json& config_schema() {
  static const Json schema = Json::parse(config_schema_text());
  return schema;
}

Json default_config() {
  Json fractions = Json::array();
  for (int i = 0; i < 10; ++i) fractions.push_back(i / 10.0);
  return Json{
      {"pump", {{"waist_m", 0.55e-3}, {"wavelength_m", 795e-9}, {"oam", 0}}},
      {"medium", {{"length_m", 12e-3}, {"pump_probe_angle_rad", 0.0}}},
      {"planes", planes_in_rayleigh_units({"0.0008", "0.025", "0.042", "0.083", "0.5", "0.83"})},
      {"grid", {{"n", 257}, {"half_extent_m", nullptr}}},
      {"sinc", {{"a", 0.39}, {"b", 0.49}, {"mode", "cos_gauss"}, {"table_samples", 801}}},
      {"analysis",
       {{"probe_m", {0.25e-3, 0.0}},
        {"slice_x_m", {0.25e-3, 0.25e-3}},
        {"pump_variants", {0, 1}},
        {"check_refinement", true}}},
      {"clipping",
       {{"fractions", fractions},
        {"geometries", Json::array({"same_side", "opposite_side"})},
        {"planes", planes_in_rayleigh_units({"0.0008", "0.83"})},
        {"squeezing_db", 5.5},
        {"v_uncorrelated", 1.0},
        {"retention", "symmetric"}}},
      {"validate",
       {{"planes", planes_in_rayleigh_units({"0.0008", "0.025", "0.083", "0.5", "0.83"})},
        {"oams", {0, 1}},
        {"fft_plane", "0.5 zR"},
        {"fft_n", 128}}},
      {"output", {{"dir", "twinbeam_out"}, {"format", "csv"}}},
      {"threads", nullptr},
  };
}

std::vector<std::string> preset_names() { return {"fig2", "fig3", "fig4", "fig8"}; }

Json preset_patch(const std::string& name) {
  const Json six = planes_in_rayleigh_units({"0.0008", "0.025", "0.042", "0.083", "0.5", "0.83"});
  const Json figure_analysis = {{"probe_m", {0.25e-3, 0.0}}, {"slice_x_m", {0.25e-3, 0.25e-3}}};
  if (name == "fig2") return {{"pump", {{"oam", 0}}}, {"planes", six}, {"analysis", figure_analysis}};
  if (name == "fig3") return {{"pump", {{"oam", 1}}}, {"planes", six}, {"analysis", figure_analysis}};
  if (name == "fig4") return {{"planes", six}, {"analysis", {{"pump_variants", {0, 1}}, {"check_refinement", true}}}};
  if (name == "fig8") {
    Json fractions = Json::array();
    for (int i = 0; i < 10; ++i) fractions.push_back(i / 10.0);
    return {{"clipping",
             {{"fractions", fractions},
              {"geometries", Json::array({"same_side", "opposite_side"})},
              {"planes", planes_in_rayleigh_units({"0.0008", "0.83"})},
              {"squeezing_db", 5.5}}}};
  }
  throw ConfigError("preset", "unknown preset '" + name + "' (expected fig2, fig3, fig4 or fig8)");
}

void validate_config(const Json& document) { check_node(document, config_schema(), ""); }

void apply_override(Json& document, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("--set", "override '" + assignment + "' is not of the form key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  Json value;
  try {
    value = Json::parse(text);
  } catch (const Json::parse_error&) {
    value = text;
  }
  Json* node = &document;
  std::stringstream ss(key);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const std::string& p = parts[i];
    if (p.empty()) throw ConfigError(key, "override key '" + key + "' has an empty segment");
    const bool last = i + 1 == parts.size();
    if (node->is_array()) {
      std::size_t idx = 0;
      try {
        idx = std::stoul(p);
      } catch (const std::exception&) {
        throw ConfigError(key, key + ": '" + p + "' is not an array index");
      }
      if (idx >= node->size()) throw ConfigError(key, key + ": index out of range");
      node = &(*node)[idx];
    } else {
      if (!node->is_object()) *node = Json::object();
      node = &(*node)[p];
    }
    if (last) *node = value;
  }
}

Json merge_layers(const ConfigLayers& layers) {
  Json doc = default_config();
  if (layers.preset) deep_merge(doc, preset_patch(*layers.preset));
  if (layers.file) {
    std::ifstream in(*layers.file);
    if (!in) throw ConfigError("--config", "cannot read config file " + layers.file->string());
    Json file;
    try {
      file = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw ConfigError("--config", std::string("config file is not valid JSON: ") + e.what());
    }
    if (!file.is_object()) throw ConfigError("(root)", "config file must hold a JSON object");
    // unknown keys are reported with their path before they are merged away
    validate_config(file);
    deep_merge(doc, file);
  }
  for (const std::string& s : layers.overrides) apply_override(doc, s);
  validate_config(doc);
  return doc;
}

PlaneSpec parse_plane(const Json& value, const PumpParams& pump, const std::string& path) {
  const double zr = pump.rayleigh_range();
  double z = 0.0;
  if (value.is_number()) {
    z = value.get<double>();
  } else if (value.is_string()) {
    static const std::regex form(R"(^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(m|cm|mm|zR)\s*$)");
    std::smatch m;
    const std::string s = value.get<std::string>();
    if (!std::regex_match(s, m, form))
      throw ConfigError(path, path + ": '" + s + "' is not '<value> <unit>' with unit m, cm, mm or zR");
    const double x = std::stod(m[1].str());
    const std::string unit = m[2].str();
    z = unit == "m" ? x : unit == "cm" ? x * 1e-2 : unit == "mm" ? x * 1e-3 : x * zr;
  } else {
    throw ConfigError(path, path + ": expected a number of metres or a '<value> <unit>' string");
  }
  if (!std::isfinite(z) || z < 0.0) throw ConfigError(path, path + ": plane distance must be >= 0");
  return {z, z / zr};
}

RunConfig resolve_config(const Json& doc) {
  const Json defaults = default_config();
  auto node = [&](const std::string& p) -> const Json& { return lookup(doc, defaults, p); };
  auto num = [&](const std::string& p) { return node(p).get<double>(); };
  auto integer = [&](const std::string& p) { return node(p).get<int>(); };

  RunConfig c;
  c.document = doc;
  try {
    c.pump = PumpParams(num("pump.waist_m"), num("pump.wavelength_m"), integer("pump.oam"));
  } catch (const DomainError& e) {
    throw ConfigError("pump", std::string("pump: ") + e.what());
  }
  try {
    c.medium = MediumParams(num("medium.length_m"), num("medium.pump_probe_angle_rad"));
  } catch (const DomainError& e) {
    throw ConfigError("medium", std::string("medium: ") + e.what());
  }
  const Json& planes = node("planes");
  for (std::size_t i = 0; i < planes.size(); ++i)
    c.planes.push_back(parse_plane(planes[i], c.pump, "planes[" + std::to_string(i) + "]"));

  c.grid_n = integer("grid.n");
  if (c.grid_n % 2 == 0) throw ConfigError("grid.n", "grid.n: must be odd so the grid contains the axes");
  if (!node("grid.half_extent_m").is_null()) c.half_extent_m = node("grid.half_extent_m").get<double>();

  try {
    c.approx = SincApprox(num("sinc.a"), num("sinc.b"));
  } catch (const DomainError& e) {
    throw ConfigError("sinc", std::string("sinc: ") + e.what());
  }
  c.mode = node("sinc.mode").get<std::string>() == "exact" ? SincMode::exact : SincMode::cos_gauss;
  c.table_samples = integer("sinc.table_samples");

  const Json& probe = node("analysis.probe_m");
  c.probe = {probe[0].get<double>(), probe[1].get<double>()};
  const Json& slice = node("analysis.slice_x_m");
  c.slice_x_probe = slice[0].get<double>();
  c.slice_x_conjugate = slice[1].get<double>();
  c.pump_variants = node("analysis.pump_variants").get<std::vector<int>>();
  c.check_refinement = node("analysis.check_refinement").get<bool>();

  c.clipping.fractions = node("clipping.fractions").get<std::vector<double>>();
  c.clipping.geometries.clear();
  for (const Json& g : node("clipping.geometries"))
    c.clipping.geometries.push_back(g == "same_side" ? ClipGeometry::same_side : ClipGeometry::opposite_side);
  c.clipping.planes_z_over_zr.clear();
  const Json& clip_planes = node("clipping.planes");
  for (std::size_t i = 0; i < clip_planes.size(); ++i)
    c.clipping.planes_z_over_zr.push_back(
        parse_plane(clip_planes[i], c.pump, "clipping.planes[" + std::to_string(i) + "]").z_over_zr);
  c.clipping.noise = {num("clipping.squeezing_db"), num("clipping.v_uncorrelated")};
  c.clipping.proxy = node("clipping.retention") == "min" ? RetentionProxy::min : RetentionProxy::symmetric;

  const Json& vplanes = node("validate.planes");
  for (std::size_t i = 0; i < vplanes.size(); ++i)
    c.validate_planes_z_over_zr.push_back(
        parse_plane(vplanes[i], c.pump, "validate.planes[" + std::to_string(i) + "]").z_over_zr);
  c.validate_oams = node("validate.oams").get<std::vector<int>>();
  c.fft_z_over_zr = parse_plane(node("validate.fft_plane"), c.pump, "validate.fft_plane").z_over_zr;
  if (!(c.fft_z_over_zr > 0.0)) throw ConfigError("validate.fft_plane", "validate.fft_plane: must be > 0");
  c.fft_n = integer("validate.fft_n");
  if (c.fft_n % 2 != 0) throw ConfigError("validate.fft_n", "validate.fft_n: must be even");

  c.out_dir = node("output.dir").get<std::string>();
  const std::string fmt = node("output.format").get<std::string>();
  c.format = fmt == "pgm" ? OutputFormat::pgm : fmt == "both" ? OutputFormat::both : OutputFormat::csv;

  const Json& threads = node("threads");
  c.threads = resolve_thread_count(threads.is_null() ? std::nullopt : std::optional<int>(threads.get<int>()));
  c.clipping.lattice.threads = c.threads;
  return c;
}

}  // namespace twinbeam
