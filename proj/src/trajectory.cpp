#include "vantage/trajectory.hpp"

#include "vantage/error.hpp"

#include <algorithm>
#include <cmath>

namespace vantage::traj {

TripTrack interpolate_trip(std::string trip_id, std::span<const ingest::RawFix> fixes,
                           double interval_s) {
    if (!(interval_s > 0.0) || !std::isfinite(interval_s)) {
        throw Error(ErrorKind::InvalidArgument, "interval must be positive");
    }
    if (fixes.size() < 2) {
        throw Error(ErrorKind::TooShort, "trip " + trip_id + " has fewer than 2 fixes");
    }
    for (std::size_t i = 1; i < fixes.size(); ++i) {
        if (!(fixes[i].t > fixes[i - 1].t)) {
            throw Error(ErrorKind::InvalidArgument,
                        "trip " + trip_id + " timestamps are not strictly increasing");
        }
    }
    const double t0 = fixes.front().t;
    const double t_end = fixes.back().t;
    if (t_end - t0 < interval_s) {
        throw Error(ErrorKind::TooShort, "trip " + trip_id + " spans less than one interval");
    }

    TripTrack track{std::move(trip_id), {}, interval_s};
    const auto steps = static_cast<std::size_t>(std::floor((t_end - t0) / interval_s));
    track.points.reserve(steps + 1);

    std::size_t seg = 0;  // fixes[seg].t <= t < fixes[seg + 1].t, or t at the end
    for (std::size_t k = 0; k <= steps; ++k) {
        const double t = t0 + static_cast<double>(k) * interval_s;
        if (t > t_end) break;
        while (seg + 1 < fixes.size() && fixes[seg + 1].t <= t) ++seg;

        GeoCoord c;
        if (fixes[seg].t == t || seg + 1 == fixes.size()) {
            c = fixes[seg].coord;
        } else {
            const auto& a = fixes[seg];
            const auto& b = fixes[seg + 1];
            const double frac = (t - a.t) / (b.t - a.t);
            c.lat_deg = a.coord.lat_deg + frac * (b.coord.lat_deg - a.coord.lat_deg);
            c.lon_deg = a.coord.lon_deg + frac * (b.coord.lon_deg - a.coord.lon_deg);
            c.lat_deg = std::clamp(c.lat_deg, std::min(a.coord.lat_deg, b.coord.lat_deg),
                                   std::max(a.coord.lat_deg, b.coord.lat_deg));
            c.lon_deg = std::clamp(c.lon_deg, std::min(a.coord.lon_deg, b.coord.lon_deg),
                                   std::max(a.coord.lon_deg, b.coord.lon_deg));
        }
        track.points.push_back({t, c, std::nullopt});
    }
    return track;
}

TripTrack assign_bearings(TripTrack track) {
    auto& pts = track.points;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i + 1 < pts.size() && pts[i].coord != pts[i + 1].coord) {
            pts[i].bearing_deg = geo::initial_bearing(pts[i].coord, pts[i + 1].coord);
        } else {
            pts[i].bearing_deg.reset();
        }
    }
    return track;
}

}  // namespace vantage::traj
