#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "iraloc/geo.hpp"
#include "iraloc/model.hpp"

namespace iraloc::detector {

enum class CompensationMode {
  Course,   // displacement along the receiver course by speed * dt
  Literal,  // printed form: x + cos(v*dt), y + sin(v*dt); comparison only
};

/// Moves every beam point by the receiver displacement between its own
/// timestamp and t_ref (seconds relative to `reference`).
std::vector<GeoPoint> compensate(std::span<const IraRecord> records, const MotionProfile& motion,
                                 const IraRecord& reference, CompensationMode mode = CompensationMode::Course);

struct PositionEstimate {
  GeoPoint i_pos;
  std::size_t n_used = 0;
  IraRecord first;  // window bounds
  IraRecord last;
};

/// Arithmetic mean of latitudes and of longitudes unwrapped around their
/// unit-vector mean, so windows straddling the antimeridian average correctly.
GeoPoint centroid(std::span<const GeoPoint> points);

/// Centroid of the motion-compensated beam records (beam_id >= 1) in the
/// window, referenced to the latest record. Sub-satellite reports are
/// skipped. Throws Error{NoBeamRecords}.
PositionEstimate estimate_position(std::span<const IraRecord> records, const MotionProfile& motion,
                                   CompensationMode mode = CompensationMode::Course);

struct DetectionOutcome {
  bool alarm = false;
  double deviation_km = 0.0;
  double threshold_km = 0.0;
};

/// Alarm iff |I_pos - G_pos| > threshold (strict).
DetectionOutcome detect(const PositionEstimate& estimate, const GeoPoint& g_pos, const DetectorConfig& config);

/// Localization error power law: n^m * 10^q.
inline constexpr PowerLawCoeffs kPublishedLocErr{-0.5974, 3.2826};
double loc_err_model(double n, const PowerLawCoeffs& coeffs = kPublishedLocErr);

/// False-positive rate model 10^(m*n) * 10^q per threshold (km).
using FpCoeffTable = std::map<double, PowerLawCoeffs>;
const FpCoeffTable& published_fp_table();
/// Clipped to [0, 1]. Throws Error{UnknownThreshold}.
double fp_model(double n, double threshold_km, const FpCoeffTable& table = published_fp_table());

/// Expected time to collect n messages: n * base / (1 - per).
/// Throws Error{InvalidPer} when per is outside [0, 1).
double waiting_time(double n, double per, double base_interarrival_s = 0.09);

enum class FitSpace {
  LogLog,  // log10 y against log10 x:  y = x^m * 10^q
  LinLog,  // log10 y against x:        y = 10^(m*x) * 10^q
};

/// Least-squares line in the chosen space. Throws Error{InsufficientData}
/// (< 3 points or no spread in x) or Error{NonPositiveValue}.
PowerLawCoeffs fit_power_law(std::span<const double> x, std::span<const double> y, FitSpace space = FitSpace::LogLog);

/// One Monte Carlo window with its reference GNSS fix.
struct EvaluationWindow {
  std::vector<IraRecord> records;
  GeoPoint g_pos;
  MotionProfile motion;
};

struct FpCell {
  std::size_t n = 0;
  double threshold_km = 0.0;
  std::size_t windows = 0;
  std::size_t alarms = 0;
  double mean_error_km = 0.0;

  double rate() const { return windows == 0 ? 0.0 : static_cast<double>(alarms) / static_cast<double>(windows); }
};

/// Per-window deviation |I_pos - G_pos|.
std::vector<double> window_deviations(std::span<const EvaluationWindow> windows);

/// Empirical false-positive rate for every (n, threshold) pair. Windows
/// must be free of spoofing. Throws Error{InsufficientWindows} when any n
/// has fewer than min_windows windows.
std::vector<FpCell> evaluate_fp(const std::map<std::size_t, std::vector<EvaluationWindow>>& windows_by_n,
                                std::span<const double> thresholds_km, std::size_t min_windows = 100);
/// Same, from precomputed deviations per n.
std::vector<FpCell> evaluate_fp_deviations(const std::map<std::size_t, std::vector<double>>& deviations_by_n,
                                           std::span<const double> thresholds_km, std::size_t min_windows = 100);

/// Fits log10(rate) linearly in n per threshold, skipping zero-rate cells.
/// Thresholds with fewer than three usable cells are omitted.
FpCoeffTable fit_fp_table(std::span<const FpCell> cells);

/// Sliding-window detector over a record stream: keeps the latest N beam
/// records. Single writer; concurrent readers must synchronize externally.
class StreamingDetector {
 public:
  StreamingDetector(DetectorConfig config, MotionProfile motion);

  /// Returns true when the window is full after adding the record.
  bool push(const IraRecord& record);
  bool ready() const { return window_.size() == config_.window_n; }
  std::optional<PositionEstimate> latest() const;
  std::size_t size() const { return window_.size(); }

 private:
  DetectorConfig config_;
  MotionProfile motion_;
  std::vector<IraRecord> window_;  // ring buffer
  std::size_t head_ = 0;
};

}  // namespace iraloc::detector
