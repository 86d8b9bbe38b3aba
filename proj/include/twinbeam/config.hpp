#pragma once

// Run configuration for the command-line tool: JSON layers merged as
// defaults -> preset -> config file -> --set overrides, checked against the
// published schema, then resolved into model objects.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "twinbeam/clipping_noise.hpp"
#include "twinbeam/core_model.hpp"
#include "twinbeam/oracle.hpp"
#include "twinbeam/pump_phasematch.hpp"

namespace twinbeam {

using Json = nlohmann::json;

enum class OutputFormat { csv, pgm, both };

struct PlaneSpec {
  double z_m = 0.0;
  double z_over_zr = 0.0;
};

struct RunConfig {
  PumpParams pump{0.55e-3, 795e-9, 0};
  MediumParams medium{12e-3};
  std::vector<PlaneSpec> planes;
  int grid_n = 257;
  std::optional<double> half_extent_m;
  SincApprox approx;
  SincMode mode = SincMode::cos_gauss;
  int table_samples = 801;
  Vec2 probe{0.25e-3, 0.0};
  double slice_x_probe = 0.25e-3;
  double slice_x_conjugate = 0.25e-3;
  std::vector<int> pump_variants{0, 1};
  bool check_refinement = true;
  ClipSweep clipping;
  std::vector<double> validate_planes_z_over_zr;
  std::vector<int> validate_oams;
  double fft_z_over_zr = 0.5;
  int fft_n = 128;
  std::filesystem::path out_dir;
  OutputFormat format = OutputFormat::csv;
  int threads = 1;
  /// The merged document the above was resolved from.
  Json document;
};

const std::string& config_schema_text();
const Json& config_schema();
Json default_config();
std::vector<std::string> preset_names();
/// Throws ConfigError (path "preset") for an unknown name.
Json preset_patch(const std::string& name);

/// Throws ConfigError with the dotted path of the first violation.
void validate_config(const Json& document);

/// "a.b.c=value"; the value is parsed as JSON when possible, else taken as a string.
void apply_override(Json& document, const std::string& assignment);

struct ConfigLayers {
  std::optional<std::string> preset;
  std::optional<std::filesystem::path> file;
  std::vector<std::string> overrides;
};

/// Merged and schema-checked document.
Json merge_layers(const ConfigLayers& layers);

/// Parses "<value> <unit>" (m, cm, mm, zR) or a bare number of metres.
PlaneSpec parse_plane(const Json& value, const PumpParams& pump, const std::string& path);

/// Resolves a validated document. `threads` falls back to TWINBEAM_THREADS, then 1.
RunConfig resolve_config(const Json& document);

}  // namespace twinbeam
