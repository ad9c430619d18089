#pragma once

#include <string>
#include <vector>

namespace translin {

/// One ready-to-run config file. Presets are plain config text so users can
/// copy a written file and edit it.
struct Preset {
  std::string name;         // file stem
  std::string config_text;  // full config document
};

/// Figures known to the `figure` command: fig1a, fig1b, fig1c, tightness.
std::vector<std::string> figure_names();

/// The config set behind one figure. Throws ConfigError for unknown names.
std::vector<Preset> figure_presets(const std::string& figure);

}  // namespace translin
