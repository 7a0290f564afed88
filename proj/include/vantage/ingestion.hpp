// Loading, validating and bbox-filtering trajectory fixes and building
// footprints.
#pragma once

#include "vantage/geodesy.hpp"

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace vantage::ingest {

using geo::GeoCoord;

struct RawFix {
    std::string trip_id;
    double t = 0.0;  // epoch seconds
    GeoCoord coord;

    friend bool operator==(const RawFix&, const RawFix&) = default;
};

struct Trip {
    std::string trip_id;
    std::vector<RawFix> fixes;  // ascending, unique t

    friend bool operator==(const Trip&, const Trip&) = default;
};

struct BoundingBox {
    double min_lon = 0.0;
    double min_lat = 0.0;
    double max_lon = 0.0;
    double max_lat = 0.0;

    /// Throws Error(InvalidArgument) unless min < max on both axes.
    static BoundingBox make(double min_lon, double min_lat, double max_lon, double max_lat);
    /// Parses "min_lon,min_lat,max_lon,max_lat".
    static BoundingBox parse(std::string_view text);

    bool contains(const GeoCoord& c) const noexcept {
        return c.lon_deg > min_lon && c.lon_deg < max_lon && c.lat_deg > min_lat &&
               c.lat_deg < max_lat;
    }
    GeoCoord center() const noexcept {
        return {(min_lat + max_lat) * 0.5, (min_lon + max_lon) * 0.5};
    }

    friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// The Waterloo (Sydney) study area, EPSG:4326.
inline constexpr BoundingBox kWaterlooBBox{151.18943, -33.91441, 151.21681, -33.89325};

using Ring = std::vector<GeoCoord>;

struct BuildingFootprint {
    std::string building_id;
    std::vector<Ring> rings;  // rings[0] exterior, the rest holes; each closed

    friend bool operator==(const BuildingFootprint&, const BuildingFootprint&) = default;
};

struct BuildingLoad {
    std::vector<BuildingFootprint> footprints;
    std::size_t skipped_geometries = 0;  // non-polygonal or null geometries
    std::size_t closed_rings = 0;        // rings we had to close
    std::size_t dropped_rings = 0;       // rings with < 4 coordinates after closing

    std::size_t warnings() const noexcept {
        return skipped_geometries + closed_rings + dropped_rings;
    }
};

/// Reads a `trip_id,t,lat,lon` CSV. Trips keep first-appearance order; fixes
/// are sorted by t and duplicate timestamps keep the last row.
/// Throws ParseError (with row) or Error(EmptyInput).
std::vector<Trip> load_trajectories(const std::filesystem::path& path);
std::vector<Trip> parse_trajectories(std::string_view csv, const std::string& source = "<memory>");

std::string write_trajectories(const std::vector<Trip>& trips);

/// Reads a GeoJSON FeatureCollection of Polygon / MultiPolygon features.
BuildingLoad load_buildings(const std::filesystem::path& path);
BuildingLoad parse_buildings(std::string_view geojson, const std::string& source = "<memory>");

std::string write_buildings(const std::vector<BuildingFootprint>& footprints);

/// Keeps fixes strictly inside bbox; trips left without fixes are dropped.
std::vector<Trip> filter_bbox(const std::vector<Trip>& trips, const BoundingBox& bbox);
std::vector<RawFix> filter_bbox(const std::vector<RawFix>& fixes, const BoundingBox& bbox);
/// Keeps footprints with at least one ring vertex strictly inside bbox.
std::vector<BuildingFootprint> filter_bbox(const std::vector<BuildingFootprint>& footprints,
                                           const BoundingBox& bbox);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace vantage::ingest
