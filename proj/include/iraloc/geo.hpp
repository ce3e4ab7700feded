#pragma once

#include <cmath>
#include <numbers>

namespace iraloc {

inline constexpr double kEarthRadiusKm = 6371.0;
inline constexpr double kDegToRad = std::numbers::pi / 180.0;
inline constexpr double kRadToDeg = 180.0 / std::numbers::pi;

/// Normalizes a longitude into (-180, +180].
double normalize_lon(double lon_deg);

/// A point on the spherical Earth. Latitude is checked, longitude is wrapped.
class GeoPoint {
 public:
  GeoPoint() = default;
  /// Throws Error{InvalidCoordinate} for latitudes outside [-90, 90] or
  /// non-finite input.
  GeoPoint(double lat_deg, double lon_deg);

  double lat_deg() const noexcept { return lat_; }
  double lon_deg() const noexcept { return lon_; }

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;

 private:
  double lat_ = 0.0;
  double lon_ = 0.0;
};

class KmDistance {
 public:
  KmDistance() = default;
  /// Throws Error{InvalidCoordinate} for negative or non-finite values.
  explicit KmDistance(double km);

  double km() const noexcept { return km_; }

  friend auto operator<=>(const KmDistance&, const KmDistance&) = default;

 private:
  double km_ = 0.0;
};

/// Local tangent-plane offset in kilometers.
struct EastNorth {
  double east_km = 0.0;
  double north_km = 0.0;

  double norm() const { return std::hypot(east_km, north_km); }
  friend bool operator==(const EastNorth&, const EastNorth&) = default;
};

/// Haversine distance on a sphere of radius kEarthRadiusKm.
KmDistance great_circle_km(const GeoPoint& a, const GeoPoint& b);

/// Initial course from a to b, degrees clockwise from north in [0, 360).
double initial_course_deg(const GeoPoint& a, const GeoPoint& b);

/// Destination reached by travelling d along the great circle leaving p on
/// the given initial course.
GeoPoint displace(const GeoPoint& p, double course_deg, KmDistance d);

/// Offset of p from origin expressed as range/bearing projected onto east
/// and north. Exact inverse of displace_en for any offset.
EastNorth offset_en(const GeoPoint& origin, const GeoPoint& p);
GeoPoint displace_en(const GeoPoint& origin, const EastNorth& offset);

}  // namespace iraloc
