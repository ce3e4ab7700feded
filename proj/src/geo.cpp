#include "iraloc/geo.hpp"

#include <algorithm>
#include <string>

#include "iraloc/error.hpp"

namespace iraloc {

double normalize_lon(double lon_deg) {
  if (lon_deg > -180.0 && lon_deg <= 180.0) return lon_deg;
  double wrapped = std::fmod(lon_deg + 180.0, 360.0);
  if (wrapped <= 0.0) wrapped += 360.0;
  return wrapped - 180.0;
}

GeoPoint::GeoPoint(double lat_deg, double lon_deg) {
  if (!std::isfinite(lat_deg) || !std::isfinite(lon_deg) || lat_deg < -90.0 || lat_deg > 90.0) {
    throw Error(ErrorCode::InvalidCoordinate,
                "lat=" + std::to_string(lat_deg) + " lon=" + std::to_string(lon_deg));
  }
  lat_ = lat_deg;
  lon_ = normalize_lon(lon_deg);
}

KmDistance::KmDistance(double km) {
  if (!std::isfinite(km) || km < 0.0) {
    throw Error(ErrorCode::InvalidCoordinate, "distance " + std::to_string(km) + " km");
  }
  km_ = km;
}

KmDistance great_circle_km(const GeoPoint& a, const GeoPoint& b) {
  const double phi1 = a.lat_deg() * kDegToRad;
  const double phi2 = b.lat_deg() * kDegToRad;
  const double dphi = phi2 - phi1;
  const double dlambda = (b.lon_deg() - a.lon_deg()) * kDegToRad;
  const double s1 = std::sin(dphi / 2.0);
  const double s2 = std::sin(dlambda / 2.0);
  const double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
  return KmDistance(2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h))));
}

double initial_course_deg(const GeoPoint& a, const GeoPoint& b) {
  const double phi1 = a.lat_deg() * kDegToRad;
  const double phi2 = b.lat_deg() * kDegToRad;
  const double dlambda = (b.lon_deg() - a.lon_deg()) * kDegToRad;
  const double y = std::sin(dlambda) * std::cos(phi2);
  const double x = std::cos(phi1) * std::sin(phi2) - std::sin(phi1) * std::cos(phi2) * std::cos(dlambda);
  double course = std::atan2(y, x) * kRadToDeg;
  if (course < 0.0) course += 360.0;
  return course;
}

GeoPoint displace(const GeoPoint& p, double course_deg, KmDistance d) {
  if (d.km() == 0.0) return p;
  const double delta = d.km() / kEarthRadiusKm;
  const double theta = course_deg * kDegToRad;
  const double phi1 = p.lat_deg() * kDegToRad;
  const double lambda1 = p.lon_deg() * kDegToRad;
  const double sin_phi2 =
      std::sin(phi1) * std::cos(delta) + std::cos(phi1) * std::sin(delta) * std::cos(theta);
  const double phi2 = std::asin(std::clamp(sin_phi2, -1.0, 1.0));
  const double lambda2 =
      lambda1 + std::atan2(std::sin(theta) * std::sin(delta) * std::cos(phi1),
                           std::cos(delta) - std::sin(phi1) * sin_phi2);
  return GeoPoint(std::clamp(phi2 * kRadToDeg, -90.0, 90.0), lambda2 * kRadToDeg);
}

EastNorth offset_en(const GeoPoint& origin, const GeoPoint& p) {
  const double range = great_circle_km(origin, p).km();
  if (range == 0.0) return {};
  const double bearing = initial_course_deg(origin, p) * kDegToRad;
  return {range * std::sin(bearing), range * std::cos(bearing)};
}

GeoPoint displace_en(const GeoPoint& origin, const EastNorth& offset) {
  const double range = offset.norm();
  if (range == 0.0) return origin;
  const double course = std::atan2(offset.east_km, offset.north_km) * kRadToDeg;
  return displace(origin, course, KmDistance(range));
}

}  // namespace iraloc
