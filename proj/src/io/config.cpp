#include "filippov/io/config.hpp"

#include <fstream>
#include <sstream>

#include "filippov/errors.hpp"

namespace filippov::io {

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error while reading '" + path + "'");
  return ss.str();
}

ModelParams apply_overrides(const ModelParams& params, const std::vector<std::string>& overrides) {
  ModelParams out = params;
  for (const auto& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ParamError("override '" + item + "' must have the form key=value");
    }
    const std::string key = item.substr(0, eq);
    const std::string text = item.substr(eq + 1);
    double value = 0.0;
    std::size_t used = 0;
    try {
      value = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size()) {
      throw ParamError("override '" + item + "': '" + text + "' is not a number");
    }
    out = out.with(key, value);
  }
  return out;
}

RunConfig load_config(const ConfigFlags& flags) {
  const bool has_preset = !flags.preset.empty();
  const bool has_file = !flags.params_file.empty();
  if (has_preset == has_file) {
    throw ParamError("give exactly one parameter source: --preset <name> or --params <file>");
  }
  std::optional<ModelParams> base;
  std::string source;
  if (has_preset) {
    base.emplace(preset(flags.preset));
    source = "preset:" + flags.preset;
  } else {
    try {
      base.emplace(params_from_json(read_text_file(flags.params_file)));
    } catch (const ParamError& ex) {
      throw ParamError("in '" + flags.params_file + "': " + ex.what());
    }
    source = "file:" + flags.params_file;
  }
  return RunConfig{apply_overrides(*base, flags.overrides), source, flags.out_path, flags.svg_path,
                   flags.seed.value_or(0)};
}

}  // namespace filippov::io
