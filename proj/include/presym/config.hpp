#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "presym/dynamics.hpp"

namespace presym {

/// Raised for malformed configuration input (unknown section/key, bad value,
/// inconsistent combination). The CLI maps it to its usage-error exit code.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Structured run configuration. Parsed from a sectioned key = value text
/// file; every run starts from the per-command defaults and overlays the
/// file. The canonical echo (canonical_text) is byte-stable under
/// parse -> echo -> parse -> echo.
struct RunConfig {
  // [model]
  std::string preset = "stora";  // free | souriau | stora | custom
  double m = 1.0, s = 1.0, q = 1.0, g = 2.0;
  double k = 0.0, l = 0.0;  // used by preset = custom only

  // [field]
  std::string field_kind = "central";  // none | uniform | central
  std::string profile = "coulomb";     // coulomb | harmonic | table
  double kappa = 1.0;
  double r_min = 1e-6;
  std::string table_path;
  Vec3 E = Vec3::Zero();
  Vec3 B = Vec3::Zero();
  bool has_gauge_origin = false;
  Vec3 gauge_origin = Vec3::Zero();

  // [state]
  Vec3 r = Vec3(4.0, 0.0, 0.0);
  double t = 0.0;
  Vec3 v = Vec3(0.0, 0.5, 0.0);
  Vec3 u = Vec3(1.0, 0.0, 1.0).normalized();

  // [integration]
  double h = 5e-3;
  int n_steps = 10000;
  int project_every = 1;
  std::string gauge = "plain";  // plain | starred
  double horizon = 0.0;         // 0 = automatic
  double drift_tolerance = 1e-6;

  // [experiment]
  std::uint64_t seed = 12345;
  int n_points = 100;
  std::vector<double> eps_list = {1e-2, 3e-3, 1e-3, 3e-4};
  int family_size = 12;
  int study_steps = 2000;
  double drift_bound = 1e-8;
  double closedness_bound = 0.0;  // 0 = per-variant default

  // [output]
  std::string directory = ".";
  std::string format = "csv";  // csv | json
};

/// Per-command defaults: "bmt" uses a generic uniform field; the other
/// commands use the coulomb field above.
RunConfig default_config(const std::string& command);

/// Parse the sectioned key = value format over the given defaults. Unknown
/// sections/keys and malformed values raise ConfigError.
RunConfig parse_config_text(const std::string& text, RunConfig base);
RunConfig load_config_file(const std::string& path, RunConfig base);

/// Canonical echo: sections and keys in fixed order, numbers rendered with
/// 17 significant digits. parse(canonical_text(c)) reproduces c exactly.
std::string canonical_text(const RunConfig& c);

/// Flat list of ("section.key", rendered value) pairs in canonical order,
/// for embedding into output headers.
std::vector<std::pair<std::string, std::string>> canonical_items(
    const RunConfig& c);

/// canonical_items minus output.directory: the echo embedded into emitted
/// files, so that the same experiment written to two locations produces
/// byte-identical artifacts.
std::vector<std::pair<std::string, std::string>> echo_items(
    const RunConfig& c);

/// Build the physics objects described by the config (ConfigError on
/// inconsistent combinations).
FieldModel make_field(const RunConfig& c);
TwoFormModel make_model(const RunConfig& c);
LabFrameState make_lab_state(const RunConfig& c);
IntegrationOptions make_integration_options(const RunConfig& c);

}  // namespace presym
