#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "iraloc/simulator.hpp"

namespace iraloc::sim {

/// Receiver used when a scenario does not name one: open ocean on the
/// equator, where the polar constellation samples the sky symmetrically.
inline const GeoPoint kDefaultReceiver{0.0, -25.0};

struct ScenarioFile {
  SimConfig config;
  Scenario scenario{MotionProfile(kDefaultReceiver, 0.0, 0.0), std::nullopt};
};

/// Reads `key = value` lines ('#' starts a comment). Keys mirror SimConfig
/// and Scenario fields; see README for the full list. Unknown keys and bad
/// values throw Error{InvalidConfig}. Keys not present keep `base` values.
ScenarioFile read_scenario(std::istream& in, ScenarioFile base = {});
ScenarioFile load_scenario(const std::filesystem::path& path, ScenarioFile base = {});
void write_scenario(std::ostream& out, const ScenarioFile& file);

/// Applies a single key/value pair (shared by the file reader and the CLI).
void apply_setting(ScenarioFile& file, std::string_view key, std::string_view value);

}  // namespace iraloc::sim
