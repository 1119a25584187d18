#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "filippov/params.hpp"

namespace filippov::io {

/// Raw parameter-related command-line flags before resolution.
struct ConfigFlags {
  std::string preset;                  // --preset
  std::string params_file;             // --params
  std::vector<std::string> overrides;  // --set key=value, applied in order
  std::string out_path;                // --out, empty for stdout
  std::string svg_path;                // --svg
  std::optional<std::uint64_t> seed;   // --seed
};

struct RunConfig {
  ModelParams params;
  std::string source;  // "preset:A1" or "file:<path>"
  std::string out_path;
  std::string svg_path;
  std::uint64_t seed = 0;
};

/// Exactly one of preset / params_file must be given. Throws ParamError on
/// schema violations or unknown presets, IoError if the file cannot be read.
RunConfig load_config(const ConfigFlags& flags);

/// Applies "key=value" overrides to a parameter set.
ModelParams apply_overrides(const ModelParams& params, const std::vector<std::string>& overrides);

std::string read_text_file(const std::string& path);

}  // namespace filippov::io
