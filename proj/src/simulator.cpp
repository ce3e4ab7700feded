#include "iraloc/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <tuple>

#include "iraloc/error.hpp"

namespace iraloc::sim {
namespace {

constexpr double kSiderealDayS = 86164.0905;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kCoarseStepS = 10.0;

double quantize_deg(double deg) { return std::round(deg * 1e6) / 1e6; }

struct Orbit {
  double raan_rad;
  double u0_rad;
};

Orbit orbit_of(const SimConfig& c, int index) {
  const int per_plane = (c.n_sats + c.n_planes - 1) / c.n_planes;
  const int plane = index / per_plane;
  const int slot = index % per_plane;
  const double spacing = 360.0 / per_plane;
  const double raan = c.raan_offset_deg + plane * 180.0 / c.n_planes;
  const double u0 = c.phase_offset_deg + slot * spacing + (plane % 2) * spacing / 2.0;
  return {raan * kDegToRad, u0 * kDegToRad};
}

struct Vec3 {
  double x, y, z;
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
};

Vec3 unit_of(const GeoPoint& p) {
  const double lat = p.lat_deg() * kDegToRad;
  const double lon = p.lon_deg() * kDegToRad;
  return {std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon), std::sin(lat)};
}

// Earth-fixed unit vector of the sub-satellite point; cos_u carries the
// along-track phase (positive while heading north).
Vec3 sat_unit(const SimConfig& c, int index, double t, double& cos_u) {
  const Orbit orbit = orbit_of(c, index);
  const double u = orbit.u0_rad + c.ground_speed_kms / kEarthRadiusKm * t;
  double raan = orbit.raan_rad;
  if (c.earth_rotation) raan -= kTwoPi / kSiderealDayS * t;
  const double inc = c.inclination_deg * kDegToRad;
  cos_u = std::cos(u);
  const double su = std::sin(u);
  return {std::cos(raan) * cos_u - std::sin(raan) * std::cos(inc) * su,
          std::sin(raan) * cos_u + std::cos(raan) * std::cos(inc) * su, std::sin(inc) * su};
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Number of failures before the first success of a Bernoulli(1 - per) trial.
std::int64_t geometric_skip(double per, std::mt19937_64& rng) {
  if (per <= 0.0) return 0;
  const double u = 1.0 - uniform01(rng);  // (0, 1]
  return static_cast<std::int64_t>(std::floor(std::log(u) / std::log(per)));
}

IraRecord make_record(const SimConfig& c, int index, std::int64_t slot, const SatState& state, int beam) {
  const auto slot_us = static_cast<std::int64_t>(std::llround(c.slot_s() * 1e6));
  const std::int64_t total_us = slot * slot_us;
  IraRecord r;
  r.epoch_s = c.start_epoch_s + total_us / 1000000;
  r.frac = static_cast<std::uint32_t>(total_us % 1000000);
  r.frac_unit = FracUnit::Microseconds;
  r.sat_id = sat_id_of_index(index);
  r.beam_id = beam;
  GeoPoint p = state.sub_point;
  if (beam != kSubSatelliteBeam) {
    EastNorth off = c.beam_offsets[static_cast<std::size_t>(beam - 1)];
    if (state.direction == Direction::Downward) off.north_km = -off.north_km;
    p = displace_en(state.sub_point, off);
  }
  r.ground = GeoPoint(std::clamp(quantize_deg(p.lat_deg()), -90.0, 90.0), quantize_deg(p.lon_deg()));
  return r;
}

double slot_time(const SimConfig& c, std::int64_t slot) {
  const auto slot_us = static_cast<std::int64_t>(std::llround(c.slot_s() * 1e6));
  return static_cast<double>(slot * slot_us) * 1e-6;
}

bool in_view(const SimConfig& c, const SatState& s, const Scenario& scenario, double t) {
  return great_circle_km(s.sub_point, scenario.truth_at(t)).km() <= c.coverage_radius_km;
}

}  // namespace

std::array<EastNorth, kBeamCount> default_beam_offsets() {
  std::array<EastNorth, kBeamCount> out{};
  std::size_t idx = 0;
  for (std::size_t ring = 0; ring < kRingRadiiKm.size(); ++ring) {
    const int count = kBeamsPerRing[ring];
    const double half_step = (ring % 2 == 1) ? 0.5 : 0.0;
    for (int k = 0; k < count; ++k) {
      const double angle = kTwoPi * (k + half_step) / count;
      out[idx++] = {kRingRadiiKm[ring] * std::sin(angle), kRingRadiiKm[ring] * std::cos(angle)};
    }
  }
  return out;
}

int default_ring_of_beam(int beam_id) {
  if (beam_id < 1 || beam_id > kBeamCount) throw Error(ErrorCode::InvalidBeamId, std::to_string(beam_id));
  if (beam_id <= kBeamsPerRing[0]) return 0;
  if (beam_id <= kBeamsPerRing[0] + kBeamsPerRing[1]) return 1;
  return 2;
}

void SimConfig::validate(bool allow_total_loss) const {
  auto fail = [](const std::string& m) { throw Error(ErrorCode::InvalidConfig, m); };
  if (n_sats < 1 || n_sats > static_cast<int>(valid_sat_ids().size())) fail("n_sats must be in [1, 66]");
  if (n_planes < 1 || n_planes > n_sats) fail("n_planes must be in [1, n_sats]");
  if (!(inclination_deg > 0.0 && inclination_deg <= 90.0)) fail("inclination must be in (0, 90]");
  if (!(ground_speed_kms > 0.0)) fail("ground speed must be positive");
  if (n_beams != kBeamCount) fail("n_beams must be 48");
  if (!(beam_period_s > 0.0)) fail("beam period must be positive");
  if (!(per >= 0.0 && (per < 1.0 || (allow_total_loss && per == 1.0)))) fail("per must be in [0, 1)");
  if (!(mean_burst_slots >= 1.0)) fail("mean burst length must be >= 1 slot");
  if (!(coverage_radius_km > 0.0)) fail("coverage radius must be positive");
  if (!(duration_s >= 0.0)) fail("duration must be non-negative");
  for (const auto& o : beam_offsets) {
    if (!std::isfinite(o.east_km) || !std::isfinite(o.north_km)) fail("beam offsets must be finite");
  }
}

void randomize_geometry(SimConfig& config, std::mt19937_64& rng) {
  config.raan_offset_deg = 360.0 * uniform01(rng);
  config.phase_offset_deg = 360.0 * uniform01(rng);
}

int sat_id_of_index(int index) {
  static const std::vector<int> ids(valid_sat_ids().begin(), valid_sat_ids().end());
  if (index < 0 || index >= static_cast<int>(ids.size())) throw Error(ErrorCode::InvalidConfig, "satellite index");
  return ids[static_cast<std::size_t>(index)];
}

SatState propagate_one(const SimConfig& c, int index, double t) {
  double cu = 0.0;
  const Vec3 v = sat_unit(c, index, t, cu);
  const double lat = std::asin(std::clamp(v.z, -1.0, 1.0)) * kRadToDeg;
  const double lon = std::atan2(v.y, v.x) * kRadToDeg;
  return {sat_id_of_index(index), GeoPoint(lat, lon), cu >= 0.0 ? Direction::Upward : Direction::Downward};
}

std::vector<SatState> propagate(const SimConfig& config, double t) {
  std::vector<SatState> out;
  out.reserve(static_cast<std::size_t>(config.n_sats));
  for (int i = 0; i < config.n_sats; ++i) out.push_back(propagate_one(config, i, t));
  return out;
}

double orbital_period_s(const SimConfig& config) { return kTwoPi * kEarthRadiusKm / config.ground_speed_kms; }

GeoPoint apply_spoof(const Scenario& scenario, double t) {
  const GeoPoint truth = scenario.truth_at(t);
  if (!scenario.spoof || t <= scenario.spoof->start_s) return truth;
  const double km = scenario.spoof->offset_speed_kmh * (t - scenario.spoof->start_s) / 3600.0;
  return displace(truth, scenario.spoof->offset_course_deg, KmDistance(km));
}

const std::array<ShipClassPreset, 5>& ship_classes() {
  static const std::array<ShipClassPreset, 5> presets{{
      {"S1", "Bulk carriers", 24.0, 28.0},
      {"S2", "Container ships", 30.0, 44.0},
      {"S3", "Oil and chemical tankers", 24.0, 31.0},
      {"S4", "RORO vessels", 30.0, 41.0},
      {"S5", "Cruise ships", 37.0, 46.0},
  }};
  return presets;
}

const ShipClassPreset& ship_class(std::string_view class_id) {
  for (const auto& p : ship_classes()) {
    if (p.class_id == class_id) return p;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown ship class '" + std::string(class_id) + "'");
}

int scheduled_beam(const SimConfig& config, int index, std::int64_t slot) {
  const std::int64_t phase = (static_cast<std::int64_t>(index) * 7) % (config.n_beams + 1);
  const std::int64_t c = slot + phase;
  if (c % (config.n_beams + 1) == 0) return kSubSatelliteBeam;
  return static_cast<int>(c % config.n_beams) + 1;
}

std::vector<IraRecord> emit_stream(const SimConfig& config, const Scenario& scenario) {
  config.validate(/*allow_total_loss=*/true);
  std::vector<std::tuple<std::int64_t, int, IraRecord>> keyed;
  if (config.per >= 1.0) return {};

  const double slot = config.slot_s();
  const auto n_slots = static_cast<std::int64_t>(std::floor(config.duration_s / slot + 1e-9));
  const double max_rel_speed_kms =
      config.ground_speed_kms + 0.5 + scenario.receiver.speed_kmh() / 3600.0;
  const double margin_km = max_rel_speed_kms * kCoarseStepS + 1.0;
  const double cos_wide = std::cos(std::min(std::numbers::pi, (config.coverage_radius_km + margin_km) / kEarthRadiusKm));

  for (int index = 0; index < config.n_sats; ++index) {
    std::mt19937_64 rng(mix_seed(config.seed, static_cast<std::uint64_t>(index)));

    // Candidate slot ranges from a coarse visibility scan.
    std::vector<std::pair<std::int64_t, std::int64_t>> ranges;
    const auto coarse_n = static_cast<std::int64_t>(std::ceil(config.duration_s / kCoarseStepS));
    for (std::int64_t i = 0; i <= coarse_n; ++i) {
      const double t = std::min(i * kCoarseStepS, config.duration_s);
      double cu = 0.0;
      const Vec3 sat = sat_unit(config, index, t, cu);
      if (sat.dot(unit_of(scenario.truth_at(t))) < cos_wide) continue;
      const auto lo = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor((t - kCoarseStepS) / slot)));
      const auto hi = std::min<std::int64_t>(n_slots, static_cast<std::int64_t>(std::ceil((t + kCoarseStepS) / slot)) + 1);
      if (!ranges.empty() && lo <= ranges.back().second) {
        ranges.back().second = std::max(ranges.back().second, hi);
      } else if (lo < hi) {
        ranges.emplace_back(lo, hi);
      }
    }

    auto emit = [&](std::int64_t k) {
      const double t = slot_time(config, k);
      const SatState s = propagate_one(config, index, t);
      if (!in_view(config, s, scenario, t)) return;
      keyed.emplace_back(k, index, make_record(config, index, k, s, scheduled_beam(config, index, k)));
    };

    if (config.loss_model == LossModel::Bernoulli) {
      for (auto [lo, hi] : ranges) {
        for (std::int64_t k = lo + geometric_skip(config.per, rng); k < hi; k += 1 + geometric_skip(config.per, rng)) {
          emit(k);
        }
      }
    } else {
      // Two-state channel: Good delivers, Bad drops. Stationary loss equals per.
      const double p_bad_to_good = 1.0 / config.mean_burst_slots;
      const double p_good_to_bad = std::min(1.0, config.per * p_bad_to_good / (1.0 - config.per));
      for (auto [lo, hi] : ranges) {
        bool bad = uniform01(rng) < config.per;
        for (std::int64_t k = lo; k < hi; ++k) {
          if (!bad) emit(k);
          bad = bad ? !(uniform01(rng) < p_bad_to_good) : (uniform01(rng) < p_good_to_bad);
        }
      }
    }
  }

  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
  });
  std::vector<IraRecord> out;
  out.reserve(keyed.size());
  for (auto& k : keyed) out.push_back(std::get<2>(k));
  return out;
}

std::vector<IraRecord> sample_campaign_window(const SimConfig& config, const Scenario& scenario, std::size_t n,
                                              std::mt19937_64& rng) {
  config.validate();
  const auto n_slots = static_cast<std::int64_t>(std::floor(config.duration_s / config.slot_s() + 1e-9));
  if (n_slots <= 0) throw Error(ErrorCode::InsufficientData, "campaign has no slots");
  std::vector<std::pair<std::int64_t, IraRecord>> keyed;
  keyed.reserve(n);
  const bool stationary = scenario.receiver.stationary();
  const Vec3 receiver0 = unit_of(scenario.receiver.start());
  const double cos_slack = std::cos(std::min(std::numbers::pi, (config.coverage_radius_km + 1.0) / kEarthRadiusKm));
  const std::uint64_t max_tries = 2000ULL * static_cast<std::uint64_t>(config.n_sats) * (n + 100);
  std::uint64_t tries = 0;
  while (keyed.size() < n) {
    if (++tries > max_tries) throw Error(ErrorCode::InsufficientData, "receiver rarely in view of any satellite");
    const auto k = static_cast<std::int64_t>(uniform01(rng) * static_cast<double>(n_slots));
    const int index = static_cast<int>(uniform01(rng) * config.n_sats);
    const int beam = scheduled_beam(config, index, k);
    if (beam == kSubSatelliteBeam) continue;
    const double t = slot_time(config, k);
    const Vec3 receiver = stationary ? receiver0 : unit_of(scenario.truth_at(t));
    double cu = 0.0;
    // Cheap pre-check with a small slack; the exact haversine test follows.
    if (sat_unit(config, index, t, cu).dot(receiver) < cos_slack) continue;
    const SatState s = propagate_one(config, index, t);
    if (!in_view(config, s, scenario, t)) continue;
    keyed.emplace_back(k * config.n_sats + index, make_record(config, index, k, s, beam));
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<IraRecord> out;
  out.reserve(n);
  for (auto& k : keyed) out.push_back(k.second);
  return out;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632BE59BD9B4E019ULL));
}

}  // namespace iraloc::sim
