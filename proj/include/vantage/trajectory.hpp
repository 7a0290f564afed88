// Fixed-interval resampling of raw fixes and forward-bearing assignment.
#pragma once

#include "vantage/geodesy.hpp"
#include "vantage/ingestion.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vantage::traj {

using geo::GeoCoord;

struct TrackPoint {
    double t = 0.0;
    GeoCoord coord;
    std::optional<double> bearing_deg;  // nullopt when unobservable
};

struct TripTrack {
    std::string trip_id;
    std::vector<TrackPoint> points;
    double interval_s = 5.0;
};

inline constexpr double kDefaultIntervalS = 5.0;

/// Resamples fixes onto t0, t0 + interval, ... up to the last fix time with
/// linear lat/lon interpolation. Instants that coincide with a fix reproduce
/// it exactly. Throws Error(TooShort) for fewer than two fixes or a span
/// shorter than the interval, Error(InvalidArgument) for a non-positive
/// interval or non-increasing timestamps.
TripTrack interpolate_trip(std::string trip_id, std::span<const ingest::RawFix> fixes,
                           double interval_s = kDefaultIntervalS);

/// Bearing of each point toward its successor; the last point and points
/// coincident with their successor get no bearing.
TripTrack assign_bearings(TripTrack track);

}  // namespace vantage::traj
