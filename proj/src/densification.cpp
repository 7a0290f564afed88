#include "vantage/densification.hpp"

#include "vantage/error.hpp"

#include <cmath>

namespace vantage::dense {

std::string PointId::to_string() const {
    return building_id + "/" + std::to_string(ring_idx) + "/" + std::to_string(edge_idx) + "/" +
           std::to_string(step_idx);
}

std::size_t PointIdHash::operator()(const PointId& id) const noexcept {
    std::size_t h = std::hash<std::string>{}(id.building_id);
    auto mix = [&h](std::uint64_t v) { h ^= std::hash<std::uint64_t>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
    mix(id.ring_idx);
    mix(id.edge_idx);
    mix(id.step_idx);
    return h;
}

std::vector<DensePoint> densify_ring(std::span<const GeoCoord> ring, double spacing_m,
                                     const std::string& building_id, std::uint32_t ring_idx,
                                     DensifyStats* stats, const geo::EarthModel& earth) {
    if (!(spacing_m > 0.0)) throw Error(ErrorKind::InvalidArgument, "spacing must be positive");
    if (ring.size() < 4 || ring.front() != ring.back()) {
        throw Error(ErrorKind::InvalidArgument,
                    "ring of building " + building_id + " is not closed or has < 4 coordinates");
    }
    std::vector<DensePoint> out;
    for (std::size_t e = 0; e + 1 < ring.size(); ++e) {
        const GeoCoord& a = ring[e];
        const GeoCoord& b = ring[e + 1];
        const double length = geo::haversine_distance(a, b, earth);
        if (a == b || length == 0.0) {
            if (stats != nullptr) ++stats->degenerate_edges;
            continue;
        }
        const auto n = static_cast<std::uint32_t>(std::ceil(length / spacing_m));
        const double step = length / n;
        const double bearing = geo::initial_bearing(a, b);
        for (std::uint32_t k = 0; k < n; ++k) {
            const double offset = step * k;
            const GeoCoord c = k == 0 ? a : geo::destination_point(a, bearing, offset, earth);
            out.push_back({PointId{building_id, ring_idx, static_cast<std::uint32_t>(e), k}, c, offset});
        }
    }
    return out;
}

PointCorpus::PointCorpus(std::vector<DensePoint> points) : points_(std::move(points)) {
    ordinal_.reserve(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!ordinal_.emplace(points_[i].id, i).second) {
            throw Error(ErrorKind::InvalidArgument, "duplicate point id " + points_[i].id.to_string());
        }
    }
}

std::optional<std::size_t> PointCorpus::ordinal_of(const PointId& id) const {
    if (auto it = ordinal_.find(id); it != ordinal_.end()) return it->second;
    return std::nullopt;
}

std::vector<GeoCoord> PointCorpus::coords() const {
    std::vector<GeoCoord> out;
    out.reserve(points_.size());
    for (const auto& p : points_) out.push_back(p.coord);
    return out;
}

PointCorpus build_corpus(std::span<const ingest::BuildingFootprint> footprints, double spacing_m,
                         DensifyStats* stats, const geo::EarthModel& earth) {
    std::vector<DensePoint> all;
    for (const auto& fp : footprints) {
        for (std::size_t r = 0; r < fp.rings.size(); ++r) {
            auto pts = densify_ring(fp.rings[r], spacing_m, fp.building_id,
                                    static_cast<std::uint32_t>(r), stats, earth);
            all.insert(all.end(), std::make_move_iterator(pts.begin()),
                       std::make_move_iterator(pts.end()));
        }
    }
    if (all.empty()) throw Error(ErrorKind::EmptyCorpus, "no usable building rings");
    return PointCorpus(std::move(all));
}

std::string corpus_csv(const PointCorpus& corpus) {
    std::string out = "building_id,ring_idx,edge_idx,step_idx,lat,lon\n";
    for (const auto& p : corpus.points()) {
        out += p.id.building_id + "," + std::to_string(p.id.ring_idx) + "," +
               std::to_string(p.id.edge_idx) + "," + std::to_string(p.id.step_idx) + "," +
               ingest::format_double(p.coord.lat_deg) + "," + ingest::format_double(p.coord.lon_deg) +
               "\n";
    }
    return out;
}

}  // namespace vantage::dense
