// Forward viewing circles per track point, radius-query counting per trip,
// and the cross-trip reduction keyed by rounded coordinates.
#pragma once

#include "vantage/ball_tree.hpp"
#include "vantage/densification.hpp"
#include "vantage/trajectory.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace vantage::vis {

using geo::GeoCoord;

struct ViewParams {
    double radius_m = 50.0;
    double lead_m = 50.0;  // circle center distance ahead along the bearing
    double interval_s = 5.0;

    /// Throws Error(InvalidArgument) unless radius_m > 0 and lead_m >= 0.
    void validate() const;
};

/// Skip and query tallies for one or more trips.
struct Diagnostics {
    std::uint64_t track_points = 0;
    std::uint64_t skipped_invalid_bearing = 0;
    std::uint64_t skipped_invalid_center = 0;
    std::uint64_t circles_queried = 0;
    std::uint64_t query_hits = 0;  // sum of radius-query cardinalities

    Diagnostics& operator+=(const Diagnostics& o) noexcept;
    friend bool operator==(const Diagnostics&, const Diagnostics&) = default;
};

struct TripVisibility {
    std::string trip_id;
    std::map<dense::PointId, std::uint64_t> counts;  // only positive counts
    Diagnostics diagnostics;
};

/// Center of the viewing circle: lead_m ahead of p along its bearing.
/// Throws Error(InvalidBearing) when p has no bearing.
GeoCoord viewing_center(const traj::TrackPoint& p, const ViewParams& params,
                        const geo::EarthModel& earth = {});

/// Counts, per corpus point, how many of the track's viewing circles contain it.
TripVisibility trip_visibility(const traj::TripTrack& track, const index::SpatialIndex& index,
                               const dense::PointCorpus& corpus, const ViewParams& params,
                               const geo::EarthModel& earth = {});

/// Same computation answered by a linear scan instead of the tree.
TripVisibility trip_visibility_brute_force(const traj::TripTrack& track,
                                           const dense::PointCorpus& corpus,
                                           const ViewParams& params,
                                           const geo::EarthModel& earth = {});

inline constexpr int kDefaultKeyPrecision = 6;

/// Coordinates rounded to a fixed number of decimals, stored as scaled integers.
struct PointKey {
    std::int64_t lat_scaled = 0;
    std::int64_t lon_scaled = 0;

    static PointKey from(const GeoCoord& c, int precision);
    friend auto operator<=>(const PointKey&, const PointKey&) = default;
};

struct AggregateEntry {
    GeoCoord representative;  // coordinate of the lowest contributing corpus ordinal
    std::size_t representative_ordinal = 0;
    std::uint64_t total_count = 0;
};

class AggregateVisibility {
public:
    explicit AggregateVisibility(int precision = kDefaultKeyPrecision);

    int precision() const noexcept { return precision_; }
    const std::map<PointKey, AggregateEntry>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

    /// Adds one trip's counts. Throws Error(UnknownPointId).
    void add(const TripVisibility& trip, const dense::PointCorpus& corpus);
    /// Associative, commutative merge of another partial aggregate.
    void merge(const AggregateVisibility& other);

    std::uint64_t grand_total() const noexcept;
    /// Totals in key order.
    std::vector<std::uint64_t> totals() const;
    /// Key coordinate rendered with `precision` decimals.
    std::string key_lat(const PointKey& key) const;
    std::string key_lon(const PointKey& key) const;

    friend bool operator==(const AggregateVisibility& a, const AggregateVisibility& b);

private:
    int precision_;
    std::map<PointKey, AggregateEntry> entries_;
};

AggregateVisibility aggregate(std::span<const TripVisibility> per_trip,
                              const dense::PointCorpus& corpus,
                              int precision = kDefaultKeyPrecision);

/// `lat,lon,total_count`, one row per key in ascending key order.
std::string aggregate_csv(const AggregateVisibility& agg);

/// One row of an aggregate CSV read back from disk.
struct AggregateRow {
    GeoCoord coord;
    std::uint64_t total_count = 0;
};

/// Throws ParseError on malformed rows.
std::vector<AggregateRow> parse_aggregate_csv(std::string_view csv,
                                              const std::string& source = "<memory>");

/// GeoJSON FeatureCollection: the track as a LineString plus one polygon
/// (`segments`-gon) per valid viewing circle with {trip_id, t, bearing}.
std::string trip_geojson(const traj::TripTrack& track, const ViewParams& params,
                         int segments = 64, const geo::EarthModel& earth = {});

}  // namespace vantage::vis
