// Spherical-earth primitives: unit conversion, haversine distance, forward
// azimuth and the direct (destination point) problem.
#pragma once

#include <cmath>
#include <numbers>

namespace vantage::geo {

inline constexpr double kDegToRad = std::numbers::pi / 180.0;
inline constexpr double kRadToDeg = 180.0 / std::numbers::pi;
inline constexpr double kMeanEarthRadiusM = 6'371'000.0;

/// WGS84 latitude/longitude in degrees.
struct GeoCoord {
    double lat_deg = 0.0;
    double lon_deg = 0.0;

    friend bool operator==(const GeoCoord&, const GeoCoord&) = default;

    bool valid() const noexcept {
        return std::isfinite(lat_deg) && std::isfinite(lon_deg) && lat_deg >= -90.0 &&
               lat_deg <= 90.0 && lon_deg >= -180.0 && lon_deg <= 180.0;
    }
};

struct RadCoord {
    double lat_rad = 0.0;
    double lon_rad = 0.0;

    friend bool operator==(const RadCoord&, const RadCoord&) = default;
};

/// Sphere used for all distance computations. Injected so tests can use a
/// unit sphere.
class EarthModel {
public:
    constexpr EarthModel() = default;
    /// Throws Error(InvalidArgument) unless radius_m is finite and positive.
    explicit EarthModel(double radius_m);

    constexpr double radius_m() const noexcept { return radius_m_; }
    double to_angle(double meters) const noexcept { return meters / radius_m_; }

private:
    double radius_m_ = kMeanEarthRadiusM;
};

inline constexpr RadCoord to_radians(const GeoCoord& c) noexcept {
    return {c.lat_deg * kDegToRad, c.lon_deg * kDegToRad};
}

inline constexpr GeoCoord to_degrees(const RadCoord& c) noexcept {
    return {c.lat_rad * kRadToDeg, c.lon_rad * kRadToDeg};
}

/// Wraps a longitude in degrees into [-180, 180].
double normalize_lon_deg(double lon_deg) noexcept;

/// Central angle between two points given their latitudes, longitudes and the
/// cosine of each latitude. Every radius test in the library (tree and brute
/// force alike) goes through this one function so results are bit-identical.
inline double central_angle(double lat1, double lon1, double cos_lat1, double lat2, double lon2,
                            double cos_lat2) noexcept {
    const double s_lat = std::sin((lat2 - lat1) * 0.5);
    const double s_lon = std::sin((lon2 - lon1) * 0.5);
    double h = s_lat * s_lat + cos_lat1 * cos_lat2 * (s_lon * s_lon);
    if (h > 1.0) h = 1.0;
    return 2.0 * std::asin(std::sqrt(h));
}

inline double central_angle(const RadCoord& a, const RadCoord& b) noexcept {
    return central_angle(a.lat_rad, a.lon_rad, std::cos(a.lat_rad), b.lat_rad, b.lon_rad,
                         std::cos(b.lat_rad));
}

/// Great-circle distance in meters (haversine form). Symmetric, exact zero for
/// identical inputs.
double haversine_distance(const GeoCoord& a, const GeoCoord& b, const EarthModel& earth = {});

/// Forward azimuth from a to b in degrees clockwise from north, in [0, 360).
/// Throws Error(IdenticalPoints) when a == b.
double initial_bearing(const GeoCoord& a, const GeoCoord& b);

/// Point reached by travelling distance_m along the great circle leaving
/// origin at bearing_deg. Longitude is wrapped into [-180, 180].
/// Throws Error(InvalidResult) if the result is not finite and
/// Error(InvalidArgument) for a negative distance.
GeoCoord destination_point(const GeoCoord& origin, double bearing_deg, double distance_m,
                           const EarthModel& earth = {});

}  // namespace vantage::geo
