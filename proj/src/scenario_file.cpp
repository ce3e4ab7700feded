#include "iraloc/scenario_file.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "iraloc/error.hpp"

namespace iraloc::sim {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad(std::string_view key, std::string_view value) {
  throw Error(ErrorCode::InvalidConfig, "bad value '" + std::string(value) + "' for " + std::string(key));
}

template <typename T>
T number(std::string_view key, std::string_view value) {
  value = trim(value);
  if (!value.empty() && value.front() == '+') value.remove_prefix(1);
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (value.empty() || ec != std::errc{} || ptr != value.data() + value.size()) bad(key, value);
  return out;
}

std::vector<double> numbers(std::string_view key, std::string_view value, std::size_t expected) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    const auto comma = value.find(',', start);
    const auto end = comma == std::string_view::npos ? value.size() : comma;
    out.push_back(number<double>(key, value.substr(start, end - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (out.size() != expected) bad(key, value);
  return out;
}

bool boolean(std::string_view key, std::string_view value) {
  value = trim(value);
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  bad(key, value);
}

SpoofSpec& spoof_of(Scenario& s) {
  if (!s.spoof) s.spoof = SpoofSpec{};
  return *s.spoof;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void apply_setting(ScenarioFile& file, std::string_view key, std::string_view value) {
  auto& c = file.config;
  auto& s = file.scenario;
  const auto& rx = s.receiver;
  if (key == "n_sats") c.n_sats = number<int>(key, value);
  else if (key == "n_planes") c.n_planes = number<int>(key, value);
  else if (key == "inclination_deg") c.inclination_deg = number<double>(key, value);
  else if (key == "ground_speed_kms") c.ground_speed_kms = number<double>(key, value);
  else if (key == "beam_period_s") c.beam_period_s = number<double>(key, value);
  else if (key == "n_beams") c.n_beams = number<int>(key, value);
  else if (key == "per") c.per = number<double>(key, value);
  else if (key == "loss_model") {
    const auto v = trim(value);
    if (v == "bernoulli") c.loss_model = LossModel::Bernoulli;
    else if (v == "gilbert_elliott") c.loss_model = LossModel::GilbertElliott;
    else bad(key, value);
  } else if (key == "mean_burst_slots") c.mean_burst_slots = number<double>(key, value);
  else if (key == "coverage_radius_km") c.coverage_radius_km = number<double>(key, value);
  else if (key == "altitude_km") c.altitude_km = number<double>(key, value);
  else if (key == "seed") c.seed = number<std::uint64_t>(key, value);
  else if (key == "duration_s") c.duration_s = number<double>(key, value);
  else if (key == "start_epoch_s") c.start_epoch_s = number<std::int64_t>(key, value);
  else if (key == "earth_rotation") c.earth_rotation = boolean(key, value);
  else if (key == "raan_offset_deg") c.raan_offset_deg = number<double>(key, value);
  else if (key == "phase_offset_deg") c.phase_offset_deg = number<double>(key, value);
  else if (key.starts_with("beam_offset.")) {
    const int beam = number<int>(key, key.substr(12));
    if (beam < 1 || beam > kBeamCount) bad(key, value);
    const auto en = numbers(key, value, 2);
    c.beam_offsets[static_cast<std::size_t>(beam - 1)] = {en[0], en[1]};
  } else if (key == "receiver") {
    const auto ll = numbers(key, value, 2);
    s.receiver = MotionProfile(GeoPoint(ll[0], ll[1]), rx.course_deg(), rx.speed_kmh());
  } else if (key == "receiver_course_deg") {
    s.receiver = MotionProfile(rx.start(), number<double>(key, value), rx.speed_kmh());
  } else if (key == "receiver_speed_kmh") {
    s.receiver = MotionProfile(rx.start(), rx.course_deg(), number<double>(key, value));
  } else if (key == "ship_class") {
    const auto& preset = ship_class(trim(value));
    s.receiver = MotionProfile(rx.start(), rx.course_deg(), (preset.speed_min_kmh + preset.speed_max_kmh) / 2.0);
  } else if (key == "spoof_start_s") spoof_of(s).start_s = number<double>(key, value);
  else if (key == "spoof_course_deg") spoof_of(s).offset_course_deg = number<double>(key, value);
  else if (key == "spoof_speed_kmh") spoof_of(s).offset_speed_kmh = number<double>(key, value);
  else throw Error(ErrorCode::InvalidConfig, "unknown scenario key '" + std::string(key) + "'");
}

ScenarioFile read_scenario(std::istream& in, ScenarioFile base) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::InvalidConfig, "line " + std::to_string(line_no) + ": expected key = value");
    }
    apply_setting(base, trim(view.substr(0, eq)), trim(view.substr(eq + 1)));
  }
  base.config.validate();
  if (base.scenario.spoof && (base.scenario.spoof->start_s < 0.0 || base.scenario.spoof->start_s > base.config.duration_s)) {
    throw Error(ErrorCode::InvalidConfig, "spoof_start_s must lie within [0, duration_s]");
  }
  return base;
}

ScenarioFile load_scenario(const std::filesystem::path& path, ScenarioFile base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  return read_scenario(in, std::move(base));
}

void write_scenario(std::ostream& out, const ScenarioFile& file) {
  const auto& c = file.config;
  const auto& s = file.scenario;
  out << "n_sats = " << c.n_sats << '\n'
      << "n_planes = " << c.n_planes << '\n'
      << "inclination_deg = " << fmt(c.inclination_deg) << '\n'
      << "ground_speed_kms = " << fmt(c.ground_speed_kms) << '\n'
      << "beam_period_s = " << fmt(c.beam_period_s) << '\n'
      << "n_beams = " << c.n_beams << '\n'
      << "per = " << fmt(c.per) << '\n'
      << "loss_model = " << (c.loss_model == LossModel::Bernoulli ? "bernoulli" : "gilbert_elliott") << '\n'
      << "mean_burst_slots = " << fmt(c.mean_burst_slots) << '\n'
      << "coverage_radius_km = " << fmt(c.coverage_radius_km) << '\n'
      << "altitude_km = " << fmt(c.altitude_km) << '\n'
      << "seed = " << c.seed << '\n'
      << "duration_s = " << fmt(c.duration_s) << '\n'
      << "start_epoch_s = " << c.start_epoch_s << '\n'
      << "earth_rotation = " << (c.earth_rotation ? "true" : "false") << '\n'
      << "raan_offset_deg = " << fmt(c.raan_offset_deg) << '\n'
      << "phase_offset_deg = " << fmt(c.phase_offset_deg) << '\n';
  for (std::size_t i = 0; i < c.beam_offsets.size(); ++i) {
    out << "beam_offset." << (i + 1) << " = " << fmt(c.beam_offsets[i].east_km) << ','
        << fmt(c.beam_offsets[i].north_km) << '\n';
  }
  out << "receiver = " << fmt(s.receiver.start().lat_deg()) << ',' << fmt(s.receiver.start().lon_deg()) << '\n'
      << "receiver_course_deg = " << fmt(s.receiver.course_deg()) << '\n'
      << "receiver_speed_kmh = " << fmt(s.receiver.speed_kmh()) << '\n';
  if (s.spoof) {
    out << "spoof_start_s = " << fmt(s.spoof->start_s) << '\n'
        << "spoof_course_deg = " << fmt(s.spoof->offset_course_deg) << '\n'
        << "spoof_speed_kmh = " << fmt(s.spoof->offset_speed_kmh) << '\n';
  }
}

}  // namespace iraloc::sim
