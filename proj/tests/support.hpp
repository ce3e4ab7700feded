#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "iraloc/model.hpp"

namespace iraloc::test {

inline IraRecord rec(std::int64_t epoch, std::uint32_t frac, int sat, int beam, double lat, double lon) {
  IraRecord r;
  r.epoch_s = epoch;
  r.frac = frac;
  r.sat_id = sat;
  r.beam_id = beam;
  r.ground = GeoPoint(lat, lon);
  return r;
}

// Record at t seconds after a fixed epoch, microsecond fraction.
inline IraRecord rec_at(double t, int sat, int beam, double lat, double lon) {
  const auto us = static_cast<std::int64_t>(std::llround(t * 1e6));
  return rec(1580712040 + us / 1000000, static_cast<std::uint32_t>(us % 1000000), sat, beam, lat, lon);
}

inline GeoPoint random_point(std::mt19937_64& rng, double max_abs_lat = 89.0) {
  std::uniform_real_distribution<double> lat(-max_abs_lat, max_abs_lat);
  std::uniform_real_distribution<double> lon(-180.0, 180.0);
  return GeoPoint(lat(rng), lon(rng));
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("iraloc_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace iraloc::test
