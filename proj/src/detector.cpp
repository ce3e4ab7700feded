#include "iraloc/detector.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "iraloc/error.hpp"

namespace iraloc::detector {

std::vector<GeoPoint> compensate(std::span<const IraRecord> records, const MotionProfile& motion,
                                 const IraRecord& reference, CompensationMode mode) {
  std::vector<GeoPoint> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    const double dt_s = seconds_between(r, reference);
    if (mode == CompensationMode::Literal) {
      const double arg = motion.speed_kmh() * dt_s / 3600.0;
      out.emplace_back(std::clamp(r.ground.lat_deg() + std::cos(arg), -90.0, 90.0), r.ground.lon_deg() + std::sin(arg));
      continue;
    }
    if (motion.stationary() || dt_s == 0.0) {
      out.push_back(r.ground);
      continue;
    }
    const double km = motion.speed_kmh() * dt_s / 3600.0;
    out.push_back(km >= 0.0 ? displace(r.ground, motion.course_deg(), KmDistance(km))
                            : displace(r.ground, motion.course_deg() + 180.0, KmDistance(-km)));
  }
  return out;
}

GeoPoint centroid(std::span<const GeoPoint> points) {
  if (points.empty()) throw Error(ErrorCode::NoBeamRecords, "centroid of nothing");
  double lat = 0.0, s = 0.0, c = 0.0;
  for (const auto& p : points) {
    lat += p.lat_deg();
    s += std::sin(p.lon_deg() * kDegToRad);
    c += std::cos(p.lon_deg() * kDegToRad);
  }
  const double n = static_cast<double>(points.size());
  // Unit-vector mean picks the branch; the arithmetic mean of longitudes
  // unwrapped around it is the plain mean whenever no seam is crossed.
  const double ref = (s == 0.0 && c == 0.0) ? points.front().lon_deg() : std::atan2(s, c) * kRadToDeg;
  double dlon = 0.0;
  for (const auto& p : points) dlon += normalize_lon(p.lon_deg() - ref);
  return GeoPoint(lat / n, ref + dlon / n);
}

PositionEstimate estimate_position(std::span<const IraRecord> records, const MotionProfile& motion,
                                   CompensationMode mode) {
  std::vector<IraRecord> beams;
  beams.reserve(records.size());
  for (const auto& r : records) {
    if (!r.is_sub_satellite()) beams.push_back(r);
  }
  if (beams.empty()) throw Error(ErrorCode::NoBeamRecords, "window holds no beam records");
  const auto [first, last] = std::minmax_element(beams.begin(), beams.end(), earlier);
  PositionEstimate est;
  est.first = *first;
  est.last = *last;
  est.n_used = beams.size();
  est.i_pos = centroid(compensate(beams, motion, est.last, mode));
  return est;
}

DetectionOutcome detect(const PositionEstimate& estimate, const GeoPoint& g_pos, const DetectorConfig& config) {
  config.validate();
  DetectionOutcome out;
  out.deviation_km = great_circle_km(estimate.i_pos, g_pos).km();
  out.threshold_km = config.threshold_km;
  out.alarm = out.deviation_km > config.threshold_km;
  return out;
}

double loc_err_model(double n, const PowerLawCoeffs& coeffs) {
  if (!(n >= 1.0)) throw Error(ErrorCode::InvalidConfig, "message count must be >= 1");
  return std::pow(n, coeffs.m) * std::pow(10.0, coeffs.q);
}

const FpCoeffTable& published_fp_table() {
  static const FpCoeffTable table{{10.0, {-4.6e-5, 0.0}}, {15.0, {-8.9e-5, 0.0}}, {20.0, {-1.4e-4, 0.0}}};
  return table;
}

double fp_model(double n, double threshold_km, const FpCoeffTable& table) {
  const auto it = table.find(threshold_km);
  if (it == table.end()) throw Error(ErrorCode::UnknownThreshold, std::to_string(threshold_km) + " km");
  if (!(n >= 0.0)) throw Error(ErrorCode::InvalidConfig, "message count must be non-negative");
  return std::clamp(std::pow(10.0, it->second.m * n + it->second.q), 0.0, 1.0);
}

double waiting_time(double n, double per, double base_interarrival_s) {
  if (!(per >= 0.0 && per < 1.0)) throw Error(ErrorCode::InvalidPer, "per must be in [0, 1), got " + std::to_string(per));
  if (!(n >= 1.0)) throw Error(ErrorCode::InvalidConfig, "message count must be >= 1");
  return n * base_interarrival_s / (1.0 - per);
}

PowerLawCoeffs fit_power_law(std::span<const double> x, std::span<const double> y, FitSpace space) {
  if (x.size() != y.size()) throw Error(ErrorCode::InvalidConfig, "x and y differ in length");
  if (x.size() < 3) throw Error(ErrorCode::InsufficientData, "power-law fit needs >= 3 points");
  std::vector<double> u(x.size()), v(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(y[i] > 0.0)) throw Error(ErrorCode::NonPositiveValue, "y must be positive");
    if (space == FitSpace::LogLog && !(x[i] > 0.0)) throw Error(ErrorCode::NonPositiveValue, "x must be positive");
    u[i] = space == FitSpace::LogLog ? std::log10(x[i]) : x[i];
    v[i] = std::log10(y[i]);
  }
  const double n = static_cast<double>(u.size());
  const double mu = std::accumulate(u.begin(), u.end(), 0.0) / n;
  const double mv = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double suu = 0.0, suv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    suu += (u[i] - mu) * (u[i] - mu);
    suv += (u[i] - mu) * (v[i] - mv);
  }
  if (!(suu > 0.0)) throw Error(ErrorCode::InsufficientData, "x has no spread");
  const double m = suv / suu;
  return {m, mv - m * mu};
}

std::vector<double> window_deviations(std::span<const EvaluationWindow> windows) {
  std::vector<double> out;
  out.reserve(windows.size());
  for (const auto& w : windows) {
    out.push_back(great_circle_km(estimate_position(w.records, w.motion).i_pos, w.g_pos).km());
  }
  return out;
}

std::vector<FpCell> evaluate_fp_deviations(const std::map<std::size_t, std::vector<double>>& deviations_by_n,
                                           std::span<const double> thresholds_km, std::size_t min_windows) {
  std::vector<FpCell> cells;
  for (const auto& [n, devs] : deviations_by_n) {
    if (devs.size() < min_windows) {
      throw Error(ErrorCode::InsufficientWindows,
                  "n=" + std::to_string(n) + " has " + std::to_string(devs.size()) + " windows");
    }
    const double mean = std::accumulate(devs.begin(), devs.end(), 0.0) / static_cast<double>(devs.size());
    for (double thr : thresholds_km) {
      FpCell c;
      c.n = n;
      c.threshold_km = thr;
      c.windows = devs.size();
      c.alarms = static_cast<std::size_t>(std::count_if(devs.begin(), devs.end(), [thr](double d) { return d > thr; }));
      c.mean_error_km = mean;
      cells.push_back(c);
    }
  }
  return cells;
}

std::vector<FpCell> evaluate_fp(const std::map<std::size_t, std::vector<EvaluationWindow>>& windows_by_n,
                                std::span<const double> thresholds_km, std::size_t min_windows) {
  std::map<std::size_t, std::vector<double>> devs;
  for (const auto& [n, windows] : windows_by_n) {
    if (windows.size() < min_windows) {
      throw Error(ErrorCode::InsufficientWindows,
                  "n=" + std::to_string(n) + " has " + std::to_string(windows.size()) + " windows");
    }
    devs[n] = window_deviations(windows);
  }
  return evaluate_fp_deviations(devs, thresholds_km, min_windows);
}

FpCoeffTable fit_fp_table(std::span<const FpCell> cells) {
  std::map<double, std::pair<std::vector<double>, std::vector<double>>> series;
  for (const auto& c : cells) {
    if (c.rate() <= 0.0) continue;
    auto& [xs, ys] = series[c.threshold_km];
    xs.push_back(static_cast<double>(c.n));
    ys.push_back(c.rate());
  }
  FpCoeffTable table;
  for (const auto& [thr, xy] : series) {
    if (xy.first.size() < 3) continue;
    table[thr] = fit_power_law(xy.first, xy.second, FitSpace::LinLog);
  }
  return table;
}

StreamingDetector::StreamingDetector(DetectorConfig config, MotionProfile motion)
    : config_(config), motion_(motion) {
  config_.validate();
  window_.reserve(config_.window_n);
}

bool StreamingDetector::push(const IraRecord& record) {
  if (record.is_sub_satellite()) return ready();
  if (window_.size() < config_.window_n) {
    window_.push_back(record);
  } else {
    window_[head_] = record;
    head_ = (head_ + 1) % config_.window_n;
  }
  return ready();
}

std::optional<PositionEstimate> StreamingDetector::latest() const {
  if (window_.empty()) return std::nullopt;
  return estimate_position(window_, motion_);
}

}  // namespace iraloc::detector
