#include "vantage/ball_tree.hpp"

#include "vantage/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <numeric>

namespace vantage::index {

SpherePoint SpherePoint::from(const RadCoord& c) noexcept {
    return {c.lat_rad, c.lon_rad, std::cos(c.lat_rad), std::sin(c.lat_rad)};
}

namespace {

// Normalized mean of the members' unit vectors; the first member when the
// mean vanishes (members spread symmetrically around the sphere).
SpherePoint centroid(std::span<const SpherePoint> pts) {
    double x = 0.0, y = 0.0, z = 0.0;
    for (const auto& p : pts) {
        x += p.cos_lat * std::cos(p.lon);
        y += p.cos_lat * std::sin(p.lon);
        z += p.sin_lat;
    }
    const double norm = std::sqrt(x * x + y * y + z * z);
    if (!(norm > 1e-12 * static_cast<double>(pts.size()))) return pts.front();
    const double lat = std::atan2(z, std::hypot(x, y));
    const double lon = std::atan2(y, x);
    return SpherePoint::from(RadCoord{lat, lon});
}

std::size_t farthest_from(std::span<const SpherePoint> pts, const SpherePoint& from) {
    std::size_t best = 0;
    double best_d = -1.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double d = node_angle(from, pts[i]);
        if (d > best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

}  // namespace

SpatialIndex SpatialIndex::build(const dense::PointCorpus& corpus, std::size_t leaf_size) {
    const auto coords = corpus.coords();
    return build(std::span<const geo::GeoCoord>(coords), leaf_size);
}

SpatialIndex SpatialIndex::build(std::span<const geo::GeoCoord> points, std::size_t leaf_size) {
    if (points.empty()) throw Error(ErrorKind::EmptyCorpus, "cannot index an empty corpus");
    if (leaf_size == 0) throw Error(ErrorKind::InvalidArgument, "leaf_size must be >= 1");
    if (points.size() > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max())) {
        throw Error(ErrorKind::InvalidArgument, "corpus too large for 32-bit ordinals");
    }

    SpatialIndex idx;
    idx.leaf_size_ = leaf_size;
    idx.points_.reserve(points.size());
    for (const auto& c : points) idx.points_.push_back(SpherePoint::from(c));
    idx.order_.resize(points.size());
    std::iota(idx.order_.begin(), idx.order_.end(), 0U);
    idx.ordered_ = idx.points_;
    idx.nodes_.reserve(2 * (points.size() / leaf_size + 1));
    idx.build_node(0, static_cast<std::uint32_t>(points.size()), 0);
    return idx;
}

std::int32_t SpatialIndex::build_node(std::uint32_t begin, std::uint32_t end, std::size_t depth) {
    depth_ = std::max(depth_, depth);
    const auto self = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(BallNode{});

    std::span<SpherePoint> pts(ordered_.data() + begin, end - begin);
    std::span<std::uint32_t> ids(order_.data() + begin, end - begin);

    BallNode node;
    node.begin = begin;
    node.end = end;
    const bool coincident = std::all_of(pts.begin(), pts.end(), [&](const SpherePoint& p) {
        return p.lat == pts[0].lat && p.lon == pts[0].lon;
    });
    // A normalized mean of identical vectors can drift an ulp off the point itself.
    node.center = coincident ? pts[0] : centroid(pts);
    for (const auto& p : pts) node.radius_rad = std::max(node.radius_rad, node_angle(node.center, p));

    if (pts.size() <= leaf_size_) {
        nodes_[static_cast<std::size_t>(self)] = node;
        return self;
    }

    // Two poles: farthest from the centroid, then farthest from that.
    const SpherePoint pole_a = pts[farthest_from(pts, node.center)];
    const SpherePoint pole_b = pts[farthest_from(pts, pole_a)];

    // Partition in place, carrying the ordinals along with the points.
    std::vector<std::uint32_t> perm(pts.size());
    std::iota(perm.begin(), perm.end(), 0U);
    std::vector<double> to_a(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) to_a[i] = node_angle(pole_a, pts[i]);
    auto mid_it = std::stable_partition(perm.begin(), perm.end(), [&](std::uint32_t i) {
        return to_a[i] <= node_angle(pole_b, pts[i]);
    });
    if (mid_it == perm.begin() || mid_it == perm.end()) {
        // All members equidistant from both poles (typically duplicates):
        // split at the median distance to pole A, ties by position.
        mid_it = perm.begin() + static_cast<std::ptrdiff_t>(perm.size() / 2);
        std::nth_element(perm.begin(), mid_it, perm.end(), [&](std::uint32_t l, std::uint32_t r) {
            return to_a[l] != to_a[r] ? to_a[l] < to_a[r] : l < r;
        });
        std::sort(perm.begin(), mid_it);
        std::sort(mid_it, perm.end());
    }
    const auto split = static_cast<std::uint32_t>(mid_it - perm.begin());

    std::vector<SpherePoint> tmp_pts(pts.size());
    std::vector<std::uint32_t> tmp_ids(pts.size());
    for (std::size_t i = 0; i < perm.size(); ++i) {
        tmp_pts[i] = pts[perm[i]];
        tmp_ids[i] = ids[perm[i]];
    }
    std::copy(tmp_pts.begin(), tmp_pts.end(), pts.begin());
    std::copy(tmp_ids.begin(), tmp_ids.end(), ids.begin());

    node.left = build_node(begin, begin + split, depth + 1);
    node.right = build_node(begin + split, end, depth + 1);
    nodes_[static_cast<std::size_t>(self)] = node;
    return self;
}

std::vector<std::uint32_t> SpatialIndex::query_radius(const RadCoord& center, double radius_m,
                                                      const geo::EarthModel& earth) const {
    if (radius_m < 0.0) throw Error(ErrorKind::InvalidArgument, "negative query radius");
    std::vector<std::uint32_t> out;
    for_each_within(center, earth.to_angle(radius_m), [&out](std::uint32_t i) { out.push_back(i); });
    std::sort(out.begin(), out.end());
    return out;
}

std::string SpatialIndex::audit() const {
    if (nodes_.empty()) return "no nodes";
    std::vector<std::uint32_t> sorted = order_;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sorted[i] != i) return "order is not a permutation";
    }
    for (std::size_t i = 0; i < order_.size(); ++i) {
        const auto& a = ordered_[i];
        const auto& b = points_[order_[i]];
        if (a.lat != b.lat || a.lon != b.lon) return "ordered points out of sync with order";
    }
    const auto& root = nodes_.front();
    if (root.begin != 0 || root.end != points_.size()) return "root does not span all points";

    for (std::size_t n = 0; n < nodes_.size(); ++n) {
        const auto& node = nodes_[n];
        if (node.begin >= node.end) return "node " + std::to_string(n) + " is empty";
        for (std::uint32_t i = node.begin; i < node.end; ++i) {
            if (node_angle(node.center, ordered_[i]) > node.radius_rad) {
                return "node " + std::to_string(n) + " does not contain point " +
                       std::to_string(order_[i]);
            }
        }
        if (node.is_leaf()) {
            if (node.end - node.begin > leaf_size_) return "leaf " + std::to_string(n) + " overfull";
            continue;
        }
        const auto& l = nodes_.at(static_cast<std::size_t>(node.left));
        const auto& r = nodes_.at(static_cast<std::size_t>(node.right));
        if (l.begin != node.begin || l.end != r.begin || r.end != node.end) {
            return "children of node " + std::to_string(n) + " do not tile its span";
        }
    }
    return {};
}

IndexStats SpatialIndex::stats() const {
    IndexStats s;
    s.points = points_.size();
    s.nodes = nodes_.size();
    s.depth = depth_;
    s.leaf_size = leaf_size_;
    s.leaf_occupancy.assign(leaf_size_ + 1, 0);
    for (const auto& node : nodes_) {
        if (!node.is_leaf()) continue;
        ++s.leaves;
        ++s.leaf_occupancy[node.end - node.begin];
    }
    return s;
}

std::string IndexStats::to_json() const {
    nlohmann::json j = {{"points", points},         {"nodes", nodes},
                        {"leaves", leaves},         {"depth", depth},
                        {"leaf_size", leaf_size},   {"leaf_occupancy", leaf_occupancy}};
    return j.dump(2);
}

std::vector<std::uint32_t> brute_force_radius(std::span<const SpherePoint> points,
                                              const RadCoord& center, double radius_m,
                                              const geo::EarthModel& earth) {
    if (radius_m < 0.0) throw Error(ErrorKind::InvalidArgument, "negative query radius");
    const double angle = earth.to_angle(radius_m);
    const SpherePoint q = SpherePoint::from(center);
    std::vector<std::uint32_t> out;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (central_angle(q, points[i]) <= angle) out.push_back(static_cast<std::uint32_t>(i));
    }
    return out;
}

std::vector<std::uint32_t> brute_force_radius(const dense::PointCorpus& corpus,
                                              const RadCoord& center, double radius_m,
                                              const geo::EarthModel& earth) {
    std::vector<SpherePoint> pts;
    pts.reserve(corpus.size());
    for (const auto& p : corpus.points()) pts.push_back(SpherePoint::from(p.coord));
    return brute_force_radius(pts, center, radius_m, earth);
}

}  // namespace vantage::index
