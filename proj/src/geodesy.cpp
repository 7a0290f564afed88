#include "vantage/geodesy.hpp"

#include "vantage/error.hpp"

#include <algorithm>
#include <string>

namespace vantage::geo {

EarthModel::EarthModel(double radius_m) : radius_m_(radius_m) {
    if (!(std::isfinite(radius_m) && radius_m > 0.0)) {
        throw Error(ErrorKind::InvalidArgument,
                    "earth radius must be positive, got " + std::to_string(radius_m));
    }
}

double normalize_lon_deg(double lon_deg) noexcept {
    if (lon_deg >= -180.0 && lon_deg <= 180.0) return lon_deg;
    double wrapped = std::fmod(lon_deg + 180.0, 360.0);
    if (wrapped < 0.0) wrapped += 360.0;
    return wrapped - 180.0;
}

double haversine_distance(const GeoCoord& a, const GeoCoord& b, const EarthModel& earth) {
    // Differences are taken in degrees, where nearby coordinates subtract
    // exactly, before any conversion rounding.
    const double s_lat = std::sin((b.lat_deg - a.lat_deg) * kDegToRad * 0.5);
    const double s_lon = std::sin((b.lon_deg - a.lon_deg) * kDegToRad * 0.5);
    double h = s_lat * s_lat +
               std::cos(a.lat_deg * kDegToRad) * std::cos(b.lat_deg * kDegToRad) * (s_lon * s_lon);
    if (h > 1.0) h = 1.0;
    return earth.radius_m() * 2.0 * std::asin(std::sqrt(h));
}

double initial_bearing(const GeoCoord& a, const GeoCoord& b) {
    if (a == b) {
        throw Error(ErrorKind::IdenticalPoints, "bearing between coincident points is undefined");
    }
    const RadCoord ra = to_radians(a);
    const RadCoord rb = to_radians(b);
    const double dlon = rb.lon_rad - ra.lon_rad;
    const double y = std::sin(dlon) * std::cos(rb.lat_rad);
    const double x = std::cos(ra.lat_rad) * std::sin(rb.lat_rad) -
                     std::sin(ra.lat_rad) * std::cos(rb.lat_rad) * std::cos(dlon);
    double deg = std::atan2(y, x) * kRadToDeg;
    if (deg < 0.0) deg += 360.0;
    // -0.0 + 360 or a tiny negative rounding up lands exactly on 360.
    if (deg >= 360.0) deg = 0.0;
    return deg;
}

GeoCoord destination_point(const GeoCoord& origin, double bearing_deg, double distance_m,
                           const EarthModel& earth) {
    if (distance_m < 0.0) {
        throw Error(ErrorKind::InvalidArgument, "negative travel distance");
    }
    if (distance_m == 0.0 && origin.valid()) {
        return {origin.lat_deg, normalize_lon_deg(origin.lon_deg)};
    }
    const RadCoord o = to_radians(origin);
    const double delta = earth.to_angle(distance_m);
    const double theta = bearing_deg * kDegToRad;

    const double sin_lat1 = std::sin(o.lat_rad);
    const double cos_lat1 = std::cos(o.lat_rad);
    const double sin_delta = std::sin(delta);
    const double cos_delta = std::cos(delta);
    const double half = std::sin(delta * 0.5);

    // sin(lat2) - sin(lat1), with cos(delta) - 1 written as -2 sin^2(delta / 2)
    // so short hops keep full relative precision.
    const double d_sin = cos_lat1 * sin_delta * std::cos(theta) - 2.0 * half * half * sin_lat1;
    const double sin_lat2 = std::clamp(sin_lat1 + d_sin, -1.0, 1.0);
    const double lat2 = std::asin(sin_lat2);

    // Latitude change from the sine difference identity
    // sin(b) - sin(a) = 2 cos((a + b) / 2) sin((b - a) / 2); near the poles
    // the plain difference is better conditioned.
    double dlat = lat2 - o.lat_rad;
    const double cos_mid = std::cos((o.lat_rad + lat2) * 0.5);
    if (cos_mid > 1e-3) {
        const double ratio = d_sin / (2.0 * cos_mid);
        if (std::abs(ratio) <= 1.0) dlat = 2.0 * std::asin(ratio);
    }
    const double dlon =
        std::atan2(std::sin(theta) * sin_delta * cos_lat1, cos_delta - sin_lat1 * sin_lat2);

    GeoCoord out{std::clamp(origin.lat_deg + dlat * kRadToDeg, -90.0, 90.0),
                 normalize_lon_deg(origin.lon_deg + dlon * kRadToDeg)};
    if (!std::isfinite(out.lat_deg) || !std::isfinite(out.lon_deg)) {
        throw Error(ErrorKind::InvalidResult, "destination point is not finite");
    }
    return out;
}

}  // namespace vantage::geo
