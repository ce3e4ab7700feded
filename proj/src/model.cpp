#include "iraloc/model.hpp"

#include <algorithm>
#include <cmath>

#include "iraloc/error.hpp"

namespace iraloc {

double frac_unit_seconds(FracUnit unit) {
  switch (unit) {
    case FracUnit::Microseconds: return 1e-6;
    case FracUnit::TenMicroseconds: return 1e-5;
    case FracUnit::Nanoseconds: return 1e-9;
  }
  return 1e-6;
}

std::string_view to_string(FracUnit unit) {
  switch (unit) {
    case FracUnit::Microseconds: return "us";
    case FracUnit::TenMicroseconds: return "tenus";
    case FracUnit::Nanoseconds: return "ns";
  }
  return "us";
}

FracUnit parse_frac_unit(std::string_view text) {
  if (text == "us") return FracUnit::Microseconds;
  if (text == "tenus") return FracUnit::TenMicroseconds;
  if (text == "ns") return FracUnit::Nanoseconds;
  throw Error(ErrorCode::InvalidConfig, "unknown fraction unit '" + std::string(text) + "'");
}

const std::set<int>& valid_sat_ids() {
  static const std::set<int> ids{2,  3,  4,  5,  6,  7,  8,  9,  13,  16,  17,  18,  22,  23,
                                 24, 25, 26, 28, 29, 30, 33, 36, 38,  39,  40,  42,  43,  44,
                                 46, 48, 49, 50, 51, 57, 65, 67, 68,  69,  71,  72,  73,  74,
                                 77, 78, 79, 81, 82, 85, 87, 88, 89,  90,  92,  93,  94,  96,
                                 99, 103, 104, 107, 109, 110, 111, 112, 114, 115};
  return ids;
}

bool is_valid_sat_id(int sat_id) { return valid_sat_ids().contains(sat_id); }

double IraRecord::time_s() const noexcept {
  return static_cast<double>(epoch_s) + frac * frac_unit_seconds(frac_unit);
}

double seconds_between(const IraRecord& a, const IraRecord& b) noexcept {
  return static_cast<double>(b.epoch_s - a.epoch_s) +
         (b.frac * frac_unit_seconds(b.frac_unit) - a.frac * frac_unit_seconds(a.frac_unit));
}

bool earlier(const IraRecord& a, const IraRecord& b) noexcept { return seconds_between(a, b) > 0.0; }

std::string_view to_string(Direction d) { return d == Direction::Upward ? "upward" : "downward"; }

std::size_t Pass::track_size() const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [](const IraRecord& r) { return r.is_sub_satellite(); }));
}

Direction direction_from_track(double first_lat_deg, double last_lat_deg) {
  return last_lat_deg >= first_lat_deg ? Direction::Upward : Direction::Downward;
}

EastNorth mirror_to_upward(const EastNorth& offset, Direction direction) {
  if (direction == Direction::Upward) return offset;
  return {offset.east_km, -offset.north_km};
}

std::size_t BeamConstellation::populated() const {
  return static_cast<std::size_t>(
      std::count_if(centroids.begin(), centroids.end(), [](const auto& c) { return c.has_value(); }));
}

EvdParams::EvdParams(double mu, double sigma) : mu_(mu), sigma_(sigma) {
  if (!std::isfinite(mu) || !std::isfinite(sigma) || sigma <= 0.0) {
    throw Error(ErrorCode::InvalidConfig, "EVD scale must be positive");
  }
}

MotionProfile::MotionProfile(GeoPoint start, double course_deg, double speed_kmh)
    : start_(start), course_(course_deg), speed_(speed_kmh) {
  if (!std::isfinite(course_deg) || !std::isfinite(speed_kmh) || speed_kmh < 0.0) {
    throw Error(ErrorCode::InvalidConfig, "motion speed must be finite and non-negative");
  }
}

GeoPoint MotionProfile::position_after(double elapsed_s) const {
  const double km = speed_ * elapsed_s / 3600.0;
  if (km >= 0.0) return displace(start_, course_, KmDistance(km));
  return displace(start_, course_ + 180.0, KmDistance(-km));
}

void DetectorConfig::validate() const {
  if (!(threshold_km > 0.0)) throw Error(ErrorCode::InvalidConfig, "threshold_km must be > 0");
  if (window_n == 0) throw Error(ErrorCode::InvalidConfig, "window_n must be >= 1");
  if (!(base_interarrival_s > 0.0)) throw Error(ErrorCode::InvalidConfig, "base interarrival must be > 0");
}

}  // namespace iraloc
