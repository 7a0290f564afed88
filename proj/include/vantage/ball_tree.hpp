// BallTree over points on the sphere, using the haversine central angle as
// its metric, with exact radius queries and a linear-scan reference.
#pragma once

#include "vantage/densification.hpp"
#include "vantage/geodesy.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace vantage::index {

using geo::RadCoord;

inline constexpr std::size_t kDefaultLeafSize = 32;

/// A point in radians with its latitude sine and cosine cached.
struct SpherePoint {
    double lat = 0.0;
    double lon = 0.0;
    double cos_lat = 1.0;
    double sin_lat = 0.0;

    static SpherePoint from(const RadCoord& c) noexcept;
    static SpherePoint from(const geo::GeoCoord& c) noexcept { return from(geo::to_radians(c)); }
    RadCoord rad() const noexcept { return {lat, lon}; }
};

/// Per-point membership metric (haversine form), shared with the brute-force scan.
inline double central_angle(const SpherePoint& a, const SpherePoint& b) noexcept {
    return geo::central_angle(a.lat, a.lon, a.cos_lat, b.lat, b.lon, b.cos_lat);
}

/// The same central angle via atan2, well conditioned up to antipodal
/// separations. Used for ball centers and radii so pruning bounds stay tight
/// for large balls.
inline double node_angle(const SpherePoint& a, const SpherePoint& b) noexcept {
    const double dlon = b.lon - a.lon;
    const double cos_dlon = std::cos(dlon);
    const double y1 = b.cos_lat * std::sin(dlon);
    const double y2 = a.cos_lat * b.sin_lat - a.sin_lat * b.cos_lat * cos_dlon;
    const double x = a.sin_lat * b.sin_lat + a.cos_lat * b.cos_lat * cos_dlon;
    return std::atan2(std::sqrt(y1 * y1 + y2 * y2), x);
}

struct BallNode {
    SpherePoint center;
    double radius_rad = 0.0;   // max central angle from center to any member
    std::uint32_t begin = 0;   // member span [begin, end) into the ordering
    std::uint32_t end = 0;
    std::int32_t left = -1;    // child node indices; -1 for a leaf
    std::int32_t right = -1;

    bool is_leaf() const noexcept { return left < 0; }
};

struct IndexStats {
    std::size_t points = 0;
    std::size_t nodes = 0;
    std::size_t leaves = 0;
    std::size_t depth = 0;
    std::size_t leaf_size = 0;
    /// leaf_occupancy[k] = number of leaves holding exactly k points.
    std::vector<std::size_t> leaf_occupancy;

    std::string to_json() const;
};

class SpatialIndex {
public:
    /// Throws Error(EmptyCorpus) for an empty input and Error(InvalidArgument)
    /// for leaf_size == 0.
    static SpatialIndex build(std::span<const geo::GeoCoord> points,
                              std::size_t leaf_size = kDefaultLeafSize);
    static SpatialIndex build(const dense::PointCorpus& corpus,
                              std::size_t leaf_size = kDefaultLeafSize);

    std::size_t size() const noexcept { return points_.size(); }
    std::size_t leaf_size() const noexcept { return leaf_size_; }
    const std::vector<BallNode>& nodes() const noexcept { return nodes_; }
    const std::vector<std::uint32_t>& order() const noexcept { return order_; }
    const std::vector<SpherePoint>& points() const noexcept { return points_; }

    /// Calls visit(ordinal) for every point whose central angle to center is
    /// <= angle_rad. Visit order is unspecified.
    template <typename Visitor>
    void for_each_within(const RadCoord& center, double angle_rad, Visitor&& visit) const;

    /// Sorted ordinals within radius_m of center, boundary inclusive.
    std::vector<std::uint32_t> query_radius(const RadCoord& center, double radius_m,
                                            const geo::EarthModel& earth = {}) const;

    /// Walks every node and checks ball containment, span bounds, leaf sizes
    /// and that `order` is a permutation. Returns an empty string when sound,
    /// otherwise a description of the first violation.
    std::string audit() const;

    IndexStats stats() const;

private:
    SpatialIndex() = default;
    std::int32_t build_node(std::uint32_t begin, std::uint32_t end, std::size_t depth);

    std::vector<SpherePoint> points_;     // by corpus ordinal
    std::vector<std::uint32_t> order_;    // node spans index into this permutation
    std::vector<SpherePoint> ordered_;    // points_ permuted by order_, for locality
    std::vector<BallNode> nodes_;         // nodes_[0] is the root
    std::size_t leaf_size_ = kDefaultLeafSize;
    std::size_t depth_ = 0;
};

// Slack on pruning decisions so rounding in the triangle inequality never
// drops a point the per-point test would accept (~6 micrometres on Earth).
inline constexpr double kPruneSlackRad = 1e-12;

template <typename Visitor>
void SpatialIndex::for_each_within(const RadCoord& center, double angle_rad, Visitor&& visit) const {
    const SpherePoint q = SpherePoint::from(center);
    std::vector<std::int32_t> stack;
    stack.reserve(depth_ + 2);
    stack.push_back(0);
    while (!stack.empty()) {
        const BallNode& node = nodes_[static_cast<std::size_t>(stack.back())];
        stack.pop_back();
        const double d = node_angle(q, node.center);
        if (d > node.radius_rad + angle_rad + kPruneSlackRad) continue;
        if (d + node.radius_rad + kPruneSlackRad <= angle_rad) {
            for (std::uint32_t i = node.begin; i < node.end; ++i) visit(order_[i]);
            continue;
        }
        if (node.is_leaf()) {
            for (std::uint32_t i = node.begin; i < node.end; ++i) {
                if (central_angle(q, ordered_[i]) <= angle_rad) visit(order_[i]);
            }
            continue;
        }
        stack.push_back(node.left);
        stack.push_back(node.right);
    }
}

/// Definitional answer: linear scan of every point with the same metric.
std::vector<std::uint32_t> brute_force_radius(std::span<const SpherePoint> points,
                                              const RadCoord& center, double radius_m,
                                              const geo::EarthModel& earth = {});
std::vector<std::uint32_t> brute_force_radius(const dense::PointCorpus& corpus,
                                              const RadCoord& center, double radius_m,
                                              const geo::EarthModel& earth = {});

}  // namespace vantage::index
