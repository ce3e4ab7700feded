#include "iraloc/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "iraloc/error.hpp"
#include "iraloc/ingest.hpp"

namespace iraloc::analytics {
namespace {

std::vector<IraRecord> sorted_copy(std::span<const IraRecord> records) {
  std::vector<IraRecord> out(records.begin(), records.end());
  std::stable_sort(out.begin(), out.end(), earlier);
  return out;
}

}  // namespace

double Histogram::mode() const {
  if (counts.empty()) return 0.0;
  const auto it = std::max_element(counts.begin(), counts.end());
  const auto i = static_cast<std::size_t>(it - counts.begin());
  return *it == 0 ? 0.0 : sums[i] / static_cast<double>(*it);
}

std::size_t Histogram::total() const { return std::accumulate(counts.begin(), counts.end(), std::size_t{0}); }

Histogram make_histogram(std::span<const double> values, double bin_width) {
  if (!(bin_width > 0.0)) throw Error(ErrorCode::InvalidConfig, "bin width must be positive");
  Histogram h;
  h.bin_width = bin_width;
  if (values.empty()) return h;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  h.origin = std::floor(*lo / bin_width) * bin_width;
  const auto n = static_cast<std::size_t>(std::floor((*hi - h.origin) / bin_width)) + 1;
  h.counts.assign(n, 0);
  h.sums.assign(n, 0.0);
  for (double v : values) {
    auto i = static_cast<std::size_t>(std::floor((v - h.origin) / bin_width));
    i = std::min(i, n - 1);
    ++h.counts[i];
    h.sums[i] += v;
  }
  return h;
}

double log_mode(std::span<const double> values, int bins_per_decade) {
  std::vector<double> logs;
  logs.reserve(values.size());
  for (double v : values) {
    if (v > 0.0) logs.push_back(std::log10(v));
  }
  if (logs.empty()) return 0.0;
  return std::pow(10.0, make_histogram(logs, 1.0 / bins_per_decade).mode());
}

SpeedSample::SpeedSample(double d_km, double dt_s) : d_(d_km), dt_(dt_s), v_(0.0) {
  if (!(dt_s > 0.0)) throw Error(ErrorCode::InvalidConfig, "speed sample needs positive elapsed time");
  v_ = d_ / dt_;
}

std::vector<SpeedSample> ground_speeds(std::span<const IraRecord> records, const SpeedOptions& options) {
  std::map<int, std::vector<IraRecord>> by_sat;
  for (const auto& r : records) {
    if (r.is_sub_satellite()) by_sat[r.sat_id].push_back(r);
  }
  std::vector<SpeedSample> out;
  for (auto& [sat, track] : by_sat) {
    std::stable_sort(track.begin(), track.end(), earlier);
    for (std::size_t i = 1; i < track.size(); ++i) {
      const double dt = seconds_between(track[i - 1], track[i]);
      if (dt <= 0.0 || dt > options.gap_threshold_s || dt > options.max_dt_s) continue;
      out.emplace_back(great_circle_km(track[i - 1].ground, track[i].ground).km(), dt);
    }
  }
  return out;
}

std::vector<double> speeds_kms(std::span<const SpeedSample> samples) {
  std::vector<double> v;
  v.reserve(samples.size());
  for (const auto& s : samples) v.push_back(s.v_kms());
  return v;
}

double InterarrivalStats::on_grid_fraction(double tol) const {
  if (residuals.empty()) return 0.0;
  const auto hits = std::count_if(residuals.begin(), residuals.end(), [tol](double r) { return std::abs(r) <= tol; });
  return static_cast<double>(hits) / static_cast<double>(residuals.size());
}

InterarrivalStats interarrival_stats(std::span<const IraRecord> records, double base_s, double bin_width_s) {
  if (!(base_s > 0.0)) throw Error(ErrorCode::InvalidConfig, "base interarrival must be positive");
  const auto sorted = sorted_copy(records);
  InterarrivalStats st;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const double d = seconds_between(sorted[i - 1], sorted[i]);
    st.durations.push_back(d);
    st.residuals.push_back(d - std::round(d / base_s) * base_s);
  }
  st.histogram = make_histogram(st.durations, bin_width_s);
  st.mode_s = st.histogram.mode();
  st.log_mode_s = log_mode(st.durations, 20);
  return st;
}

double packet_delivery_ratio(std::span<const IraRecord> records, double base_s) {
  if (records.empty()) throw Error(ErrorCode::EmptyInput, "no records");
  const auto [first, last] = std::minmax_element(records.begin(), records.end(), earlier);
  const double span_s = seconds_between(*first, *last);
  const double slots = std::round(span_s / base_s) + 1.0;
  return static_cast<double>(records.size()) / slots;
}

double convex_hull_area(std::vector<Point2> pts) {
  if (pts.size() < 3) return 0.0;
  std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  auto cross = [](const Point2& o, const Point2& a, const Point2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
  };
  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k > 0 ? k - 1 : 0);
  if (hull.size() < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const auto& a = hull[i];
    const auto& b = hull[(i + 1) % hull.size()];
    twice += a.x * b.y - b.x * a.y;
  }
  return std::abs(twice) / 2.0;
}

CoverageStats coverage_extent(std::span<const IraRecord> records, const GeoPoint& receiver, double bin_width_km) {
  CoverageStats st;
  std::vector<Point2> plane;
  for (const auto& r : records) {
    if (!r.is_sub_satellite()) continue;
    st.distances_km.push_back(great_circle_km(receiver, r.ground).km());
    const EastNorth en = offset_en(receiver, r.ground);
    plane.push_back({en.east_km, en.north_km});
  }
  if (st.distances_km.empty()) throw Error(ErrorCode::EmptyInput, "no sub-satellite records");
  st.max_km = *std::max_element(st.distances_km.begin(), st.distances_km.end());
  st.hull_area_km2 = convex_hull_area(std::move(plane));
  st.histogram = make_histogram(st.distances_km, bin_width_km);
  return st;
}

std::vector<Point2> coverage_boundary(std::span<const IraRecord> records, const GeoPoint& receiver, int sectors) {
  if (sectors < 3) throw Error(ErrorCode::InvalidConfig, "need at least 3 sectors");
  std::vector<std::optional<std::pair<double, Point2>>> best(static_cast<std::size_t>(sectors));
  for (const auto& r : records) {
    if (!r.is_sub_satellite()) continue;
    const EastNorth en = offset_en(receiver, r.ground);
    const double range = en.norm();
    if (range == 0.0) continue;
    double az = std::atan2(en.east_km, en.north_km) * kRadToDeg;
    if (az < 0.0) az += 360.0;
    const auto s = std::min(static_cast<std::size_t>(az / 360.0 * sectors), best.size() - 1);
    if (!best[s] || best[s]->first < range) best[s] = std::make_pair(range, Point2{en.east_km, en.north_km});
  }
  std::vector<Point2> out;
  for (const auto& b : best) {
    if (b) out.push_back(b->second);
  }
  return out;
}

CircleFit pratt_circle_fit(std::span<const Point2> points) {
  const std::size_t n = points.size();
  if (n < 3) throw Error(ErrorCode::DegenerateInput, "circle fit needs at least 3 points");
  double mx = 0.0, my = 0.0;
  for (const auto& p : points) {
    mx += p.x;
    my += p.y;
  }
  mx /= n;
  my /= n;

  double Mxx = 0, Myy = 0, Mxy = 0, Mxz = 0, Myz = 0, Mzz = 0;
  for (const auto& p : points) {
    const double xi = p.x - mx;
    const double yi = p.y - my;
    const double zi = xi * xi + yi * yi;
    Mxy += xi * yi;
    Mxx += xi * xi;
    Myy += yi * yi;
    Mxz += xi * zi;
    Myz += yi * zi;
    Mzz += zi * zi;
  }
  Mxx /= n;
  Myy /= n;
  Mxy /= n;
  Mxz /= n;
  Myz /= n;
  Mzz /= n;

  const double Mz = Mxx + Myy;
  const double cov_xy = Mxx * Myy - Mxy * Mxy;
  // Smallest over largest eigenvalue of the scatter matrix.
  const double disc = std::sqrt((Mxx - Myy) * (Mxx - Myy) + 4.0 * Mxy * Mxy);
  const double lambda_max = (Mz + disc) / 2.0;
  const double lambda_min = (Mz - disc) / 2.0;
  if (!(lambda_max > 0.0) || lambda_min <= 1e-12 * lambda_max) {
    throw Error(ErrorCode::DegenerateInput, "points are collinear");
  }

  const double Mxz2 = Mxz * Mxz;
  const double Myz2 = Myz * Myz;
  const double A2 = 4.0 * cov_xy - 3.0 * Mz * Mz - Mzz;
  const double A1 = Mzz * Mz + 4.0 * cov_xy * Mz - Mxz2 - Myz2 - Mz * Mz * Mz;
  const double A0 = Mxz2 * Myy + Myz2 * Mxx - Mzz * cov_xy - 2.0 * Mxz * Myz * Mxy + Mz * Mz * cov_xy;
  const double A22 = A2 + A2;

  double x = 0.0;
  double y = A0;
  for (int iter = 0; iter < 100; ++iter) {
    const double dy = A1 + x * (A22 + 16.0 * x * x);
    const double x_new = x - y / dy;
    if (!std::isfinite(x_new)) break;
    const double y_new = A0 + x_new * (A1 + x_new * (A2 + 4.0 * x_new * x_new));
    if (std::abs(y_new) >= std::abs(y)) break;
    const bool done = std::abs(x_new - x) <= 1e-15 * std::max(1.0, std::abs(x_new));
    x = x_new;
    y = y_new;
    if (done) break;
  }
  if (x < 0.0) x = 0.0;

  const double det = x * x - x * Mz + cov_xy;
  if (std::abs(det) <= 1e-300) throw Error(ErrorCode::DegenerateInput, "singular circle system");
  const double cx = (Mxz * (Myy - x) - Myz * Mxy) / det / 2.0;
  const double cy = (Myz * (Mxx - x) - Mxz * Mxy) / det / 2.0;
  CircleFit fit;
  fit.center = {cx + mx, cy + my};
  fit.radius = std::sqrt(cx * cx + cy * cy + Mz + 2.0 * x);
  return fit;
}

double evd_pdf(double t, const EvdParams& p) {
  const double z = (t - p.mu()) / p.sigma();
  const double ez = std::exp(z);
  if (!std::isfinite(ez)) return 0.0;
  return std::exp(z - ez) / p.sigma();
}

double evd_cdf(double t, const EvdParams& p) {
  const double z = (t - p.mu()) / p.sigma();
  return -std::expm1(-std::exp(z));
}

double evd_quantile(double u, const EvdParams& p) {
  if (!(u > 0.0 && u < 1.0)) throw Error(ErrorCode::InvalidConfig, "quantile level must be in (0, 1)");
  return p.mu() + p.sigma() * std::log(-std::log1p(-u));
}

EvdParams fit_evd(std::span<const double> durations_min, int max_iterations) {
  std::vector<double> t;
  for (double d : durations_min) {
    if (d > 0.0 && std::isfinite(d)) t.push_back(d);
  }
  if (t.size() < 10) {
    throw Error(ErrorCode::InsufficientData, "EVD fit needs >= 10 positive samples, got " + std::to_string(t.size()));
  }
  const double n = static_cast<double>(t.size());
  const double mean = std::accumulate(t.begin(), t.end(), 0.0) / n;
  const double t_max = *std::max_element(t.begin(), t.end());
  double var = 0.0;
  for (double v : t) var += (v - mean) * (v - mean);
  var /= n;
  if (var <= 0.0) throw Error(ErrorCode::InsufficientData, "EVD fit needs spread in the samples");

  // Profile equation g(sigma) = sigma + mean - E_w[t] with weights
  // w_i ~ exp(t_i / sigma); g is increasing, so the root is unique.
  struct Moments {
    double g, dg, log_mean_w;
  };
  auto moments = [&](double sigma) {
    double sw = 0.0, swt = 0.0, swt2 = 0.0;
    for (double v : t) {
      const double w = std::exp((v - t_max) / sigma);
      sw += w;
      swt += w * v;
      swt2 += w * v * v;
    }
    const double ew = swt / sw;
    const double varw = std::max(0.0, swt2 / sw - ew * ew);
    return Moments{sigma + mean - ew, 1.0 + varw / (sigma * sigma), std::log(sw / n)};
  };

  double sigma = std::sqrt(6.0 * var) / std::numbers::pi;
  double lo = 0.0, hi = std::numeric_limits<double>::infinity();
  for (int iter = 1; iter <= max_iterations; ++iter) {
    const Moments m = moments(sigma);
    if (m.g > 0.0) hi = std::min(hi, sigma);
    else lo = std::max(lo, sigma);
    double next = sigma - m.g / m.dg;
    if (!(next > lo && next < hi)) next = std::isfinite(hi) ? (lo + hi) / 2.0 : sigma * 2.0;
    if (std::abs(next - sigma) <= 1e-12 * sigma) {
      const double mu = t_max + next * moments(next).log_mean_w;
      return EvdParams(mu, next);
    }
    sigma = next;
  }
  throw Error(ErrorCode::NonConvergence, "EVD fit did not converge after " + std::to_string(max_iterations) + " iterations");
}

std::vector<double> pass_durations_min(std::span<const Pass> passes, std::size_t min_records) {
  std::vector<double> out;
  for (const auto& p : passes) {
    if (p.records.size() >= min_records) out.push_back(p.duration_min);
  }
  return out;
}

std::array<double, 3> kmeans3(std::span<const double> values, std::vector<int>* assignment) {
  if (values.size() < 3) throw Error(ErrorCode::InsufficientData, "k-means needs at least 3 values");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  // Optimal 1-D partition into contiguous runs via prefix sums.
  std::vector<double> s1(n + 1, 0.0), s2(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    s1[i + 1] = s1[i] + sorted[i];
    s2[i + 1] = s2[i] + sorted[i] * sorted[i];
  }
  auto sse = [&](std::size_t a, std::size_t b) {
    const double m = static_cast<double>(b - a);
    const double s = s1[b] - s1[a];
    return (s2[b] - s2[a]) - s * s / m;
  };
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_i = 1, best_j = 2;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double cost = sse(0, i) + sse(i, j) + sse(j, n);
      if (cost < best - 1e-12) {
        best = cost;
        best_i = i;
        best_j = j;
      }
    }
  }
  const std::array<double, 3> centers{s1[best_i] / static_cast<double>(best_i),
                                      (s1[best_j] - s1[best_i]) / static_cast<double>(best_j - best_i),
                                      (s1[n] - s1[best_j]) / static_cast<double>(n - best_j)};
  if (assignment) {
    const double cut1 = sorted[best_i];
    const double cut2 = sorted[best_j];
    assignment->assign(values.size(), 0);
    for (std::size_t k = 0; k < values.size(); ++k) {
      (*assignment)[k] = values[k] >= cut2 ? 2 : values[k] >= cut1 ? 1 : 0;
    }
  }
  return centers;
}

BeamConstellationResult beam_constellation(std::span<const Pass> passes, const BeamOptions& options) {
  BeamConstellationResult result;
  std::array<EastNorth, kBeamCount> sums{};
  for (const auto& pass : passes) {
    std::vector<const IraRecord*> track;
    for (const auto& r : pass.records) {
      if (r.is_sub_satellite()) track.push_back(&r);
    }
    for (const auto& r : pass.records) {
      if (r.is_sub_satellite()) continue;
      // First track point strictly after r, and the one before it.
      auto after = std::upper_bound(track.begin(), track.end(), &r, [](const IraRecord* a, const IraRecord* b) {
        return earlier(*a, *b);
      });
      if (after == track.begin() || after == track.end()) {
        const bool exact = after != track.begin() && seconds_between(**(after - 1), r) == 0.0;
        if (!exact) {
          ++result.unbracketed;
          continue;
        }
      }
      const IraRecord& a = **(after - 1);
      GeoPoint sub = a.ground;
      const double ta = seconds_between(a, r);
      if (ta > 0.0) {
        const IraRecord& b = **after;
        const double span = seconds_between(a, b);
        if (span > options.max_bracket_s) {
          ++result.unbracketed;
          continue;
        }
        const double f = ta / span;
        const double dlon = normalize_lon(b.ground.lon_deg() - a.ground.lon_deg());
        sub = GeoPoint(a.ground.lat_deg() + f * (b.ground.lat_deg() - a.ground.lat_deg()), a.ground.lon_deg() + f * dlon);
      }
      const EastNorth off = mirror_to_upward(offset_en(sub, r.ground), pass.direction);
      auto& s = sums[static_cast<std::size_t>(r.beam_id - 1)];
      s.east_km += off.east_km;
      s.north_km += off.north_km;
      ++result.constellation.samples[static_cast<std::size_t>(r.beam_id - 1)];
      ++result.used;
    }
  }
  if (result.used == 0) throw Error(ErrorCode::InsufficientBrackets, "no beam record is bracketed by track points");

  auto& bc = result.constellation;
  bc.ring_of_beam.fill(-1);
  std::vector<double> radii;
  std::vector<std::size_t> beams;
  for (std::size_t i = 0; i < kBeamCount; ++i) {
    if (bc.samples[i] == 0) continue;
    const double n = static_cast<double>(bc.samples[i]);
    bc.centroids[i] = EastNorth{sums[i].east_km / n, sums[i].north_km / n};
    radii.push_back(bc.centroids[i]->norm());
    beams.push_back(i);
  }
  if (radii.size() >= 3) {
    std::vector<int> assign;
    bc.ring_radii_km = kmeans3(radii, &assign);
    for (std::size_t j = 0; j < beams.size(); ++j) bc.ring_of_beam[beams[j]] = assign[j];
  }
  return result;
}

}  // namespace iraloc::analytics
