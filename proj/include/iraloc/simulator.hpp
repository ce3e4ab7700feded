#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "iraloc/geo.hpp"
#include "iraloc/model.hpp"

namespace iraloc::sim {

inline constexpr std::array<double, 3> kRingRadiiKm{3.36, 7.98, 14.35};
inline constexpr std::array<int, 3> kBeamsPerRing{8, 16, 24};

/// Default honeycomb: beams 1-8 on the inner ring, 9-24 on the middle ring,
/// 25-48 on the outer ring, evenly spaced with alternate rings rotated by
/// half a step. Offsets are expressed in the Upward frame.
std::array<EastNorth, kBeamCount> default_beam_offsets();
/// Ring index (0..2) of a beam under the default layout.
int default_ring_of_beam(int beam_id);

enum class LossModel { Bernoulli, GilbertElliott };

struct SimConfig {
  int n_sats = 66;
  int n_planes = 6;
  double inclination_deg = 86.4;
  double ground_speed_kms = 6.89;
  double beam_period_s = 4.32;
  int n_beams = kBeamCount;
  double per = 0.0;
  LossModel loss_model = LossModel::Bernoulli;
  double mean_burst_slots = 20.0;  // Gilbert-Elliott only
  double coverage_radius_km = 1625.0;
  double altitude_km = 800.0;  // descriptive; ground tracks ignore it
  std::array<EastNorth, kBeamCount> beam_offsets = default_beam_offsets();
  std::uint64_t seed = 1;
  double duration_s = 3600.0;
  std::int64_t start_epoch_s = 1580712040;
  // Off: every satellite stays on one fixed great circle. On: ground tracks
  // drift westward at the sidereal rate so that long campaigns sample all
  // longitudes.
  bool earth_rotation = false;
  double raan_offset_deg = 0.0;
  double phase_offset_deg = 0.0;

  double slot_s() const { return beam_period_s / n_beams; }
  /// Throws Error{InvalidConfig}. per == 1 is accepted only with allow_total_loss.
  void validate(bool allow_total_loss = false) const;
};

/// Random rotation of the constellation pattern, for Monte Carlo runs.
void randomize_geometry(SimConfig& config, std::mt19937_64& rng);

struct SatState {
  int sat_id = 0;
  GeoPoint sub_point;
  Direction direction = Direction::Upward;
};

/// Sub-satellite point of satellite `index` (0-based) at time t seconds.
SatState propagate_one(const SimConfig& config, int index, double t);
/// All satellites at time t, in index order.
std::vector<SatState> propagate(const SimConfig& config, double t);
/// Circumference over ground speed.
double orbital_period_s(const SimConfig& config);
int sat_id_of_index(int index);

struct SpoofSpec {
  double start_s = 0.0;
  double offset_course_deg = 0.0;
  double offset_speed_kmh = 0.0;
};

struct Scenario {
  MotionProfile receiver;  // true receiver trajectory
  std::optional<SpoofSpec> spoof;

  GeoPoint truth_at(double t) const { return receiver.position_after(t); }
};

/// GNSS-reported position at time t: the truth until the spoof starts, then
/// drifting away from it along the offset course at the offset speed.
GeoPoint apply_spoof(const Scenario& scenario, double t);

struct ShipClassPreset {
  std::string_view class_id;
  std::string_view name;
  double speed_min_kmh;
  double speed_max_kmh;
};

const std::array<ShipClassPreset, 5>& ship_classes();
/// "S1".."S5"; throws Error{InvalidConfig} otherwise.
const ShipClassPreset& ship_class(std::string_view class_id);

/// Beam (0 for the sub-satellite report) scheduled for satellite `index` in
/// slot k. Each satellite walks the beams round-robin, one per slot, and the
/// sub-satellite report pre-empts the scheduled beam every n_beams + 1 slots.
int scheduled_beam(const SimConfig& config, int index, std::int64_t slot);

/// Full record stream over [0, duration_s), sorted by time then satellite.
std::vector<IraRecord> emit_stream(const SimConfig& config, const Scenario& scenario);

/// Draws n beam records (beam_id >= 1) uniformly from the lossless stream
/// that the configuration would emit over [0, duration_s), sorted by time.
/// Equivalent to random subsampling of a campaign of that length.
std::vector<IraRecord> sample_campaign_window(const SimConfig& config, const Scenario& scenario, std::size_t n,
                                              std::mt19937_64& rng);

/// Uniform double in [0, 1) from 53 random bits (stable across standard libraries).
double uniform01(std::mt19937_64& rng);
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace iraloc::sim
