#include "vantage/synthetic.hpp"

#include "vantage/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

namespace vantage::synth {

namespace {

constexpr double kMarginM = 25.0;
constexpr double kStreetHalfWidthM = 9.0;
constexpr double kBuildingGapM = 2.0;
constexpr int kAttemptsPerBuilding = 100;
constexpr double kEpochStart = 1709251200.0;  // 2024-03-01T00:00:00Z
constexpr double kWeekS = 7.0 * 24.0 * 3600.0;

// Uniform doubles from raw engine bits so output does not depend on the
// standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::size_t index(std::size_t n) {
        return std::min(static_cast<std::size_t>(uniform() * static_cast<double>(n)), n - 1);
    }
    bool chance(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

// Equirectangular frame in meters around the bbox center.
struct LocalFrame {
    double lat0 = 0.0;
    double lon0 = 0.0;
    double m_per_deg_lat = 0.0;
    double m_per_deg_lon = 0.0;

    explicit LocalFrame(const ingest::BoundingBox& b) {
        const auto c = b.center();
        lat0 = c.lat_deg;
        lon0 = c.lon_deg;
        m_per_deg_lat = geo::kMeanEarthRadiusM * geo::kDegToRad;
        m_per_deg_lon = m_per_deg_lat * std::cos(lat0 * geo::kDegToRad);
    }
    geo::GeoCoord to_geo(double x, double y) const {
        auto r7 = [](double v) { return std::round(v * 1e7) / 1e7; };
        return {r7(lat0 + y / m_per_deg_lat), r7(lon0 + x / m_per_deg_lon)};
    }
};

struct Rect {
    double x0, y0, x1, y1;
    bool overlaps(const Rect& o, double gap) const {
        return x0 < o.x1 + gap && o.x0 < x1 + gap && y0 < o.y1 + gap && o.y0 < y1 + gap;
    }
};

struct Grid {
    std::vector<double> xs;  // north-south street positions
    std::vector<double> ys;  // east-west street positions
    std::size_t arterial_every = 4;

    bool arterial_x(std::size_t i) const { return i % arterial_every == 1; }
    bool arterial_y(std::size_t j) const { return j % arterial_every == 1; }
};

std::vector<double> street_lines(double half_extent, double block) {
    std::vector<double> out;
    for (double v = -half_extent + kMarginM; v <= half_extent - kMarginM; v += block) out.push_back(v);
    return out;
}

bool hits_street(const Rect& r, const Grid& g) {
    for (double x : g.xs) {
        if (r.x0 < x + kStreetHalfWidthM && r.x1 > x - kStreetHalfWidthM) return true;
    }
    for (double y : g.ys) {
        if (r.y0 < y + kStreetHalfWidthM && r.y1 > y - kStreetHalfWidthM) return true;
    }
    return false;
}

std::string fmt7(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.7f", v);
    return buf;
}

// Direction indices: 0 = east, 1 = north, 2 = west, 3 = south.
constexpr int kDx[4] = {1, 0, -1, 0};
constexpr int kDy[4] = {0, 1, 0, -1};

}  // namespace

void SynthConfig::validate() const {
    if (n_trips < 1 || n_buildings < 1) {
        throw Error(ErrorKind::InvalidArgument, "n_trips and n_buildings must be >= 1");
    }
    if (!(speed_min_mps > 0.0) || !(speed_max_mps >= speed_min_mps)) {
        throw Error(ErrorKind::InvalidArgument, "speed range must be positive and ordered");
    }
    if (!(trip_duration_s > 0.0)) throw Error(ErrorKind::InvalidArgument, "trip duration must be positive");
    if (!(block_m > 2.0 * kStreetHalfWidthM + 8.0)) {
        throw Error(ErrorKind::InvalidArgument, "block size too small to hold buildings");
    }
    if (arterial_every < 1) throw Error(ErrorKind::InvalidArgument, "arterial_every must be >= 1");
    ingest::BoundingBox::make(bbox.min_lon, bbox.min_lat, bbox.max_lon, bbox.max_lat);
}

SynthOutput generate(const SynthConfig& config) {
    config.validate();
    Rng rng(config.seed);
    const LocalFrame frame(config.bbox);
    const double half_w = (config.bbox.max_lon - config.bbox.min_lon) * 0.5 * frame.m_per_deg_lon;
    const double half_h = (config.bbox.max_lat - config.bbox.min_lat) * 0.5 * frame.m_per_deg_lat;

    Grid grid;
    grid.xs = street_lines(half_w, config.block_m);
    grid.ys = street_lines(half_h, config.block_m);
    grid.arterial_every = config.arterial_every;
    if (grid.xs.size() < 2 || grid.ys.size() < 2) {
        throw Error(ErrorKind::PlacementFailure, "bounding box too small for a street grid");
    }

    // Buildings: rejection sampling, never overlapping streets or each other.
    std::vector<Rect> rects;
    rects.reserve(config.n_buildings);
    for (std::size_t b = 0; b < config.n_buildings; ++b) {
        bool placed = false;
        for (int attempt = 0; attempt < kAttemptsPerBuilding && !placed; ++attempt) {
            const double w = rng.uniform(8.0, 40.0);
            const double h = rng.uniform(8.0, 40.0);
            const double cx = rng.uniform(-half_w + kMarginM, half_w - kMarginM);
            const double cy = rng.uniform(-half_h + kMarginM, half_h - kMarginM);
            const Rect r{cx - w / 2, cy - h / 2, cx + w / 2, cy + h / 2};
            if (r.x0 < -half_w + 1.0 || r.x1 > half_w - 1.0 || r.y0 < -half_h + 1.0 ||
                r.y1 > half_h - 1.0) {
                continue;
            }
            if (hits_street(r, grid)) continue;
            if (std::any_of(rects.begin(), rects.end(),
                            [&](const Rect& o) { return r.overlaps(o, kBuildingGapM); })) {
                continue;
            }
            rects.push_back(r);
            placed = true;
        }
        if (!placed) {
            throw Error(ErrorKind::PlacementFailure,
                        "could not place building " + std::to_string(b + 1) + " of " +
                            std::to_string(config.n_buildings) + " after 100 attempts");
        }
    }

    std::vector<ingest::BuildingFootprint> footprints;
    footprints.reserve(rects.size());
    for (std::size_t b = 0; b < rects.size(); ++b) {
        const auto& r = rects[b];
        char id[32];
        std::snprintf(id, sizeof(id), "bldg-%04zu", b + 1);
        ingest::Ring ring{frame.to_geo(r.x0, r.y0), frame.to_geo(r.x1, r.y0), frame.to_geo(r.x1, r.y1),
                          frame.to_geo(r.x0, r.y1), frame.to_geo(r.x0, r.y0)};
        footprints.push_back({id, {std::move(ring)}});
    }

    // Trips: walks along the street grid, preferring to stay on arterials.
    const std::size_t nx = grid.xs.size();
    const std::size_t ny = grid.ys.size();
    std::vector<std::size_t> arterial_is, arterial_js;
    for (std::size_t i = 0; i < nx; ++i) if (grid.arterial_x(i)) arterial_is.push_back(i);
    for (std::size_t j = 0; j < ny; ++j) if (grid.arterial_y(j)) arterial_js.push_back(j);

    std::string csv = "trip_id,t,lat,lon\n";
    for (std::size_t k = 0; k < config.n_trips; ++k) {
        char trip_id[32];
        std::snprintf(trip_id, sizeof(trip_id), "trip-%04zu", k + 1);

        std::size_t i = rng.index(nx);
        std::size_t j = rng.index(ny);
        if (rng.chance(0.6) && !arterial_is.empty()) i = arterial_is[rng.index(arterial_is.size())];
        if (rng.chance(0.6) && !arterial_js.empty()) j = arterial_js[rng.index(arterial_js.size())];
        int dir = static_cast<int>(rng.index(4));
        const double speed = rng.uniform(config.speed_min_mps, config.speed_max_mps);

        // Waypoints are intersections; extend the path until it covers the trip.
        std::vector<std::pair<double, double>> path{{grid.xs[i], grid.ys[j]}};
        const double needed = speed * config.trip_duration_s;
        double length = 0.0;
        while (length < needed) {
            auto can_go = [&](int d) {
                const auto ni = static_cast<long>(i) + kDx[d];
                const auto nj = static_cast<long>(j) + kDy[d];
                return ni >= 0 && nj >= 0 && ni < static_cast<long>(nx) && nj < static_cast<long>(ny);
            };
            const bool on_arterial = (kDx[dir] != 0) ? grid.arterial_y(j) : grid.arterial_x(i);
            const double keep = on_arterial ? 0.85 : 0.55;
            int next = -1;
            if (can_go(dir) && rng.chance(keep)) {
                next = dir;
            } else {
                const int left = (dir + 1) % 4, right = (dir + 3) % 4;
                const int first = rng.chance(0.5) ? left : right;
                const int second = first == left ? right : left;
                for (int d : {first, second, dir, (dir + 2) % 4}) {
                    if (can_go(d)) {
                        next = d;
                        break;
                    }
                }
            }
            dir = next;
            i = static_cast<std::size_t>(static_cast<long>(i) + kDx[dir]);
            j = static_cast<std::size_t>(static_cast<long>(j) + kDy[dir]);
            path.emplace_back(grid.xs[i], grid.ys[j]);
            const auto& a = path[path.size() - 2];
            length += std::hypot(path.back().first - a.first, path.back().second - a.second);
        }

        const double t0 = std::floor(kEpochStart + rng.uniform(0.0, kWeekS));
        double t = 0.0;
        std::size_t seg = 0;
        double seg_start = 0.0;
        while (t <= config.trip_duration_s) {
            const double s = speed * t;
            auto seg_len = [&](std::size_t q) {
                return std::hypot(path[q + 1].first - path[q].first, path[q + 1].second - path[q].second);
            };
            while (seg + 2 < path.size() && s > seg_start + seg_len(seg)) {
                seg_start += seg_len(seg);
                ++seg;
            }
            const double frac = std::min(1.0, (s - seg_start) / seg_len(seg));
            const double x = path[seg].first + frac * (path[seg + 1].first - path[seg].first);
            const double y = path[seg].second + frac * (path[seg + 1].second - path[seg].second);
            const auto c = frame.to_geo(x, y);
            csv += trip_id;
            csv += ',';
            csv += std::to_string(static_cast<long long>(t0 + t));
            csv += ',';
            csv += fmt7(c.lat_deg);
            csv += ',';
            csv += fmt7(c.lon_deg);
            csv += '\n';
            t += static_cast<double>(1 + rng.index(9));
        }
    }

    return {std::move(csv), ingest::write_buildings(footprints)};
}

}  // namespace vantage::synth
