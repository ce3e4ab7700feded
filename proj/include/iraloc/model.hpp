#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "iraloc/geo.hpp"

namespace iraloc {

inline constexpr int kBeamCount = 48;
inline constexpr int kSubSatelliteBeam = 0;

/// Unit of the raw 9-digit sub-second column. The log format never states
/// it, so it is a parameter; microseconds is the default reading.
enum class FracUnit { Microseconds, TenMicroseconds, Nanoseconds };

double frac_unit_seconds(FracUnit unit);
std::string_view to_string(FracUnit unit);
/// Accepts "us", "tenus", "ns". Throws Error{InvalidConfig} otherwise.
FracUnit parse_frac_unit(std::string_view text);

/// The 66 satellite IDs observed on the ring alert channel.
const std::set<int>& valid_sat_ids();
bool is_valid_sat_id(int sat_id);

/// One decoded Ring Alert message.
struct IraRecord {
  std::int64_t epoch_s = 0;
  std::uint32_t frac = 0;  // raw counter, see FracUnit
  FracUnit frac_unit = FracUnit::Microseconds;
  int sat_id = 0;
  int beam_id = 0;
  GeoPoint ground;

  bool is_sub_satellite() const noexcept { return beam_id == kSubSatelliteBeam; }
  /// Absolute time in seconds. Loses sub-microsecond precision at Unix
  /// epoch magnitudes; use seconds_between for differences.
  double time_s() const noexcept;

  friend bool operator==(const IraRecord&, const IraRecord&) = default;
};

/// b - a in seconds, computed without forming absolute timestamps.
double seconds_between(const IraRecord& a, const IraRecord& b) noexcept;
/// Strict time ordering (epoch, then scaled fraction).
bool earlier(const IraRecord& a, const IraRecord& b) noexcept;

enum class Direction { Upward, Downward };
std::string_view to_string(Direction d);

/// A contiguous sighting of one satellite.
struct Pass {
  int sat_id = 0;
  std::vector<IraRecord> records;  // time-ordered; beam 0 entries are the track
  Direction direction = Direction::Upward;
  double duration_min = 0.0;

  std::size_t track_size() const;
};

/// Direction from the net latitude change of a sub-satellite track: Upward
/// when the last latitude is at or above the first.
Direction direction_from_track(double first_lat_deg, double last_lat_deg);

/// Offsets are stored in the Upward frame. Downward observations are
/// reflected across the east axis (north negated) before accumulation.
EastNorth mirror_to_upward(const EastNorth& offset, Direction direction);

struct BeamConstellation {
  std::array<std::optional<EastNorth>, kBeamCount> centroids{};  // index = beam_id - 1
  std::array<std::size_t, kBeamCount> samples{};
  std::array<double, 3> ring_radii_km{};
  std::array<int, kBeamCount> ring_of_beam{};  // 0..2, or -1 when unpopulated

  const std::optional<EastNorth>& centroid(int beam_id) const { return centroids.at(beam_id - 1); }
  std::size_t populated() const;
};

/// Location and scale of the minimum-type extreme value density
///   evd(t) = (1/sigma) exp((t-mu)/sigma) exp(-exp((t-mu)/sigma))
class EvdParams {
 public:
  EvdParams(double mu, double sigma);
  double mu() const noexcept { return mu_; }
  double sigma() const noexcept { return sigma_; }

 private:
  double mu_;
  double sigma_;
};

/// Slope/intercept of a log10-space line. For the localization error model
/// y = n^m * 10^q; for the false-positive model y = 10^(m*n) * 10^q.
struct PowerLawCoeffs {
  double m = 0.0;
  double q = 0.0;
};

/// Receiver kinematics used for motion compensation.
class MotionProfile {
 public:
  MotionProfile() = default;
  MotionProfile(GeoPoint start, double course_deg, double speed_kmh);

  const GeoPoint& start() const noexcept { return start_; }
  double course_deg() const noexcept { return course_; }
  double speed_kmh() const noexcept { return speed_; }
  bool stationary() const noexcept { return speed_ == 0.0; }

  /// Position after elapsed_s seconds of travel (negative allowed).
  GeoPoint position_after(double elapsed_s) const;

 private:
  GeoPoint start_;
  double course_ = 0.0;
  double speed_ = 0.0;
};

struct DetectorConfig {
  double threshold_km = 20.0;
  std::size_t window_n = 6100;
  double base_interarrival_s = 0.09;

  /// Throws Error{InvalidConfig} when threshold_km <= 0 or window_n == 0.
  void validate() const;
};

}  // namespace iraloc
