// Building outlines densified into evenly spaced points with stable ids.
#pragma once

#include "vantage/geodesy.hpp"
#include "vantage/ingestion.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace vantage::dense {

using geo::GeoCoord;

inline constexpr double kDefaultSpacingM = 10.0;

/// Identity of one densified point: which building, ring, edge and step along
/// the edge it came from.
struct PointId {
    std::string building_id;
    std::uint32_t ring_idx = 0;
    std::uint32_t edge_idx = 0;
    std::uint32_t step_idx = 0;

    friend auto operator<=>(const PointId&, const PointId&) = default;
    friend bool operator==(const PointId&, const PointId&) = default;

    std::string to_string() const;
};

struct PointIdHash {
    std::size_t operator()(const PointId& id) const noexcept;
};

struct DensePoint {
    PointId id;
    GeoCoord coord;
    double offset_m = 0.0;  // distance from the start of its edge
};

struct DensifyStats {
    std::size_t degenerate_edges = 0;
};

/// Splits every edge of a closed ring of length L into n = ceil(L / spacing)
/// equal steps and emits the n start-inclusive, end-exclusive points. Zero
/// length edges are skipped and tallied in stats.
std::vector<DensePoint> densify_ring(std::span<const GeoCoord> ring, double spacing_m,
                                     const std::string& building_id, std::uint32_t ring_idx,
                                     DensifyStats* stats = nullptr,
                                     const geo::EarthModel& earth = {});

/// The densified points of all footprints, in input order. Tree ordinals
/// index into `points()`.
class PointCorpus {
public:
    PointCorpus() = default;
    explicit PointCorpus(std::vector<DensePoint> points);

    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }
    const std::vector<DensePoint>& points() const noexcept { return points_; }
    const DensePoint& operator[](std::size_t ordinal) const { return points_[ordinal]; }

    /// Tree ordinal -> point id.
    const PointId& id_of(std::size_t ordinal) const { return points_.at(ordinal).id; }
    /// Point id -> tree ordinal.
    std::optional<std::size_t> ordinal_of(const PointId& id) const;

    std::vector<GeoCoord> coords() const;

private:
    std::vector<DensePoint> points_;
    std::unordered_map<PointId, std::size_t, PointIdHash> ordinal_;
};

/// Throws Error(EmptyCorpus) when no ring yields a point.
PointCorpus build_corpus(std::span<const ingest::BuildingFootprint> footprints,
                         double spacing_m = kDefaultSpacingM, DensifyStats* stats = nullptr,
                         const geo::EarthModel& earth = {});

/// CSV `building_id,ring_idx,edge_idx,step_idx,lat,lon`.
std::string corpus_csv(const PointCorpus& corpus);

}  // namespace vantage::dense
