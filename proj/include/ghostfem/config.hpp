#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ghostfem/initdata.hpp"
#include "ghostfem/mesh.hpp"
#include "ghostfem/model.hpp"
#include "ghostfem/solver.hpp"

namespace ghostfem {

struct RunConfig {
  ModelParams model;
  MeshSpec mesh;
  InitialDataSpec ic = PlaneWave{};
  NewtonOptions solver;
  int max_slabs = 100;
  std::string output_dir;    // empty: write nothing
  int snapshot_every = 0;    // 0: no field snapshots

  /// Throws ConfigError naming the violated invariant.
  void validate() const;

  bool operator==(const RunConfig&) const = default;
};

/// Scalar config value as it appears in a file or on the command line.
using ConfigValue = std::variant<bool, std::int64_t, double, std::string>;

/// Dotted key ("ic.A") and value of every field the config currently carries,
/// in a stable order. Unset optional positions are omitted.
std::vector<std::pair<std::string, ConfigValue>> flatten_config(const RunConfig& config);

/// Keys that can be set given the currently selected potential and IC family.
std::vector<std::string> settable_keys(const RunConfig& config);

/// Sets one dotted key. Selecting a different model.potential or ic.family
/// resets that block to its defaults. Throws ConfigError for unknown or
/// inapplicable keys and for values of the wrong type.
void set_config_value(RunConfig& config, const std::string& key, const ConfigValue& value);

/// Parses the right-hand side of a "key=value" override: any TOML scalar, or a
/// bare word taken as a string.
ConfigValue parse_override_value(const std::string& text);

/// "key=value" -> pair. Throws ConfigError when there is no '='.
std::pair<std::string, std::string> split_override(const std::string& text);

/// Parses TOML-style text with [model], [mesh], [ic], [solver], [run] sections,
/// applies the overrides on top, and validates the result. Unknown keys and
/// sections are errors. Messages carry `origin:line:` when the line is known.
RunConfig parse_config_text(const std::string& text, const std::vector<std::string>& overrides = {},
                            const std::string& origin = "<config>");

/// Throws ConfigError if the file cannot be read.
RunConfig parse_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

/// TOML text that parse_config_text maps back to an equal config.
std::string write_config(const RunConfig& config);

}  // namespace ghostfem
