#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "iraloc/geo.hpp"
#include "iraloc/model.hpp"

namespace iraloc::analytics {

/// Fixed-width histogram. mode() returns the mean of the samples that fall
/// in the fullest bin (lowest bin on ties), so exact repeated values are
/// reported exactly.
struct Histogram {
  double origin = 0.0;
  double bin_width = 1.0;
  std::vector<std::size_t> counts;
  std::vector<double> sums;

  double bin_lo(std::size_t i) const { return origin + bin_width * static_cast<double>(i); }
  double mode() const;
  std::size_t total() const;
};

/// Bins start at floor(min / width) * width. Empty input gives no bins.
Histogram make_histogram(std::span<const double> values, double bin_width);

/// Mode of log10(values) with the given bins per decade, returned in the
/// original units. Non-positive values are ignored; 0 when none remain.
double log_mode(std::span<const double> values, int bins_per_decade);

class SpeedSample {
 public:
  /// Throws Error{InvalidConfig} unless dt_s > 0.
  SpeedSample(double d_km, double dt_s);
  double v_kms() const noexcept { return v_; }
  double dt_s() const noexcept { return dt_; }
  double d_km() const noexcept { return d_; }

 private:
  double d_;
  double dt_;
  double v_;
};

struct SpeedOptions {
  double gap_threshold_s = 600.0;
  double max_dt_s = std::numeric_limits<double>::infinity();
};

/// Ground speed between consecutive sub-satellite reports of the same
/// satellite within one pass. Beam records are ignored.
std::vector<SpeedSample> ground_speeds(std::span<const IraRecord> records, const SpeedOptions& options = {});
std::vector<double> speeds_kms(std::span<const SpeedSample> samples);

inline constexpr double kBaseInterarrivalS = 0.09;

struct InterarrivalStats {
  std::vector<double> durations;
  std::vector<double> residuals;  // distance to the nearest multiple of the base slot
  double mode_s = 0.0;
  double log_mode_s = 0.0;  // 20 bins per decade; comparison only
  Histogram histogram;

  /// Fraction of durations within tol seconds of a grid multiple.
  double on_grid_fraction(double tol = 1e-6) const;
};

/// Consecutive timestamp differences over the whole time-sorted stream.
InterarrivalStats interarrival_stats(std::span<const IraRecord> records, double base_s = kBaseInterarrivalS,
                                     double bin_width_s = 0.1);

/// Observed records over the number of base slots spanned (inclusive).
/// Throws Error{EmptyInput}.
double packet_delivery_ratio(std::span<const IraRecord> records, double base_s = kBaseInterarrivalS);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct CoverageStats {
  std::vector<double> distances_km;
  double max_km = 0.0;
  double hull_area_km2 = 0.0;
  Histogram histogram;
};

/// Receiver distances and convex-hull area of the sub-satellite points.
/// The hull is taken in the azimuthal equidistant plane around the receiver.
/// Throws Error{EmptyInput} when no sub-satellite records are present.
CoverageStats coverage_extent(std::span<const IraRecord> records, const GeoPoint& receiver, double bin_width_km = 25.0);

/// Farthest sub-satellite point in each azimuth sector around the receiver,
/// in the receiver's east/north plane.
std::vector<Point2> coverage_boundary(std::span<const IraRecord> records, const GeoPoint& receiver, int sectors = 36);

double convex_hull_area(std::vector<Point2> points);

struct CircleFit {
  Point2 center;
  double radius = 0.0;
};

/// Algebraic circle fit with Pratt's normalization (Newton iteration on the
/// characteristic polynomial). Throws Error{DegenerateInput} for fewer than
/// three points or collinear input.
CircleFit pratt_circle_fit(std::span<const Point2> points);

double evd_pdf(double t, const EvdParams& p);
double evd_cdf(double t, const EvdParams& p);
/// Inverse CDF, u in (0, 1).
double evd_quantile(double u, const EvdParams& p);

/// Maximum-likelihood location and scale. Throws Error{InsufficientData}
/// for fewer than 10 positive samples, Error{NonConvergence} otherwise.
EvdParams fit_evd(std::span<const double> durations_min, int max_iterations = 100);

/// Durations of passes with at least min_records records.
std::vector<double> pass_durations_min(std::span<const Pass> passes, std::size_t min_records = 2);

struct BeamOptions {
  double max_bracket_s = 20.0;
};

struct BeamConstellationResult {
  BeamConstellation constellation;
  std::size_t used = 0;
  std::size_t unbracketed = 0;
};

/// Beam offsets from the time-interpolated sub-satellite point, normalized
/// to the Upward frame, averaged per beam. Ring radii come from 1-D
/// k-means (k = 3) over the centroid radii when at least three beams are
/// populated. Throws Error{InsufficientBrackets} if no beam record could be
/// bracketed.
BeamConstellationResult beam_constellation(std::span<const Pass> passes, const BeamOptions& options = {});

/// Sorted cluster centers of the exact 1-D k-means partition (k = 3) plus
/// each value's cluster.
std::array<double, 3> kmeans3(std::span<const double> values, std::vector<int>* assignment = nullptr);

}  // namespace iraloc::analytics
