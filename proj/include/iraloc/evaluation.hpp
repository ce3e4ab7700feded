#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "iraloc/detector.hpp"
#include "iraloc/simulator.hpp"

namespace iraloc::evaluation {

/// Seconds since the start of the simulated campaign.
double scenario_time(const sim::SimConfig& config, const IraRecord& record);

/// |I_pos - G_pos| for `windows` independent campaign-sampled windows of
/// each size, with no spoofing. Window w of size n is seeded from
/// (seed, n, w), so results do not depend on the worker count.
std::map<std::size_t, std::vector<double>> campaign_deviations(const sim::SimConfig& config,
                                                               const sim::Scenario& scenario,
                                                               std::span<const std::size_t> n_values,
                                                               std::size_t windows, std::uint64_t seed,
                                                               unsigned workers = 1);

struct LocErrPoint {
  std::size_t n = 0;
  double mean_error_km = 0.0;
};

struct LocErrSweep {
  std::vector<LocErrPoint> points;
  PowerLawCoeffs fit;  // log-log
};

LocErrSweep summarize_localization_error(const std::map<std::size_t, std::vector<double>>& deviations);

struct SpoofTrial {
  detector::PositionEstimate estimate;
  GeoPoint g_pos;
  GeoPoint truth;
  detector::DetectionOutcome outcome;
  std::size_t stream_records = 0;
};

/// Emits the scenario's stream, takes the latest window_n beam records and
/// compares their centroid with the GNSS-reported position at the newest
/// record. Throws Error{InsufficientData} when the stream is too short.
SpoofTrial run_detection_trial(const sim::SimConfig& config, const sim::Scenario& scenario,
                               const DetectorConfig& detector_config);

}  // namespace iraloc::evaluation
