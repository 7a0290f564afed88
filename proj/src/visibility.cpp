#include "vantage/visibility.hpp"

#include "vantage/error.hpp"
#include "vantage/ingestion.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>

namespace vantage::vis {

namespace {

// Runs the per-trip loop with `query(center, angle, visit)` answering each
// radius query.
template <typename Query>
TripVisibility count_trip(const traj::TripTrack& track, const dense::PointCorpus& corpus,
                          const ViewParams& params, const geo::EarthModel& earth, Query&& query) {
    params.validate();
    TripVisibility out{track.trip_id, {}, {}};
    std::vector<std::uint32_t> counts(corpus.size(), 0);
    const double angle = earth.to_angle(params.radius_m);

    for (const auto& p : track.points) {
        ++out.diagnostics.track_points;
        if (!p.bearing_deg.has_value()) {
            ++out.diagnostics.skipped_invalid_bearing;
            continue;
        }
        GeoCoord center;
        try {
            center = viewing_center(p, params, earth);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::InvalidResult) throw;
            ++out.diagnostics.skipped_invalid_center;
            continue;
        }
        if (!center.valid()) {
            ++out.diagnostics.skipped_invalid_center;
            continue;
        }
        ++out.diagnostics.circles_queried;
        query(geo::to_radians(center), angle, [&](std::uint32_t ordinal) {
            ++counts[ordinal];
            ++out.diagnostics.query_hits;
        });
    }

    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] > 0) out.counts.emplace(corpus.id_of(i), counts[i]);
    }
    return out;
}

std::string render_scaled(std::int64_t v, int precision) {
    std::string digits = std::to_string(v < 0 ? -v : v);
    if (precision <= 0) return (v < 0 ? "-" : "") + digits;
    const auto p = static_cast<std::size_t>(precision);
    if (digits.size() <= p) digits.insert(0, p + 1 - digits.size(), '0');
    digits.insert(digits.size() - p, ".");
    return (v < 0 ? "-" : "") + digits;
}

double scale_for(int precision) { return std::pow(10.0, precision); }

}  // namespace

void ViewParams::validate() const {
    if (!(radius_m > 0.0) || !std::isfinite(radius_m)) {
        throw Error(ErrorKind::InvalidArgument, "view radius must be positive");
    }
    if (!(lead_m >= 0.0) || !std::isfinite(lead_m)) {
        throw Error(ErrorKind::InvalidArgument, "lead distance must be non-negative");
    }
    if (!(interval_s > 0.0) || !std::isfinite(interval_s)) {
        throw Error(ErrorKind::InvalidArgument, "interval must be positive");
    }
}

Diagnostics& Diagnostics::operator+=(const Diagnostics& o) noexcept {
    track_points += o.track_points;
    skipped_invalid_bearing += o.skipped_invalid_bearing;
    skipped_invalid_center += o.skipped_invalid_center;
    circles_queried += o.circles_queried;
    query_hits += o.query_hits;
    return *this;
}

GeoCoord viewing_center(const traj::TrackPoint& p, const ViewParams& params,
                        const geo::EarthModel& earth) {
    if (!p.bearing_deg.has_value()) {
        throw Error(ErrorKind::InvalidBearing, "track point has no bearing");
    }
    return geo::destination_point(p.coord, *p.bearing_deg, params.lead_m, earth);
}

TripVisibility trip_visibility(const traj::TripTrack& track, const index::SpatialIndex& index,
                               const dense::PointCorpus& corpus, const ViewParams& params,
                               const geo::EarthModel& earth) {
    if (index.size() != corpus.size()) {
        throw Error(ErrorKind::InvalidArgument, "index was not built over this corpus");
    }
    return count_trip(track, corpus, params, earth,
                      [&index](const geo::RadCoord& c, double angle, auto&& visit) {
                          index.for_each_within(c, angle, visit);
                      });
}

TripVisibility trip_visibility_brute_force(const traj::TripTrack& track,
                                           const dense::PointCorpus& corpus,
                                           const ViewParams& params,
                                           const geo::EarthModel& earth) {
    std::vector<index::SpherePoint> pts;
    pts.reserve(corpus.size());
    for (const auto& p : corpus.points()) pts.push_back(index::SpherePoint::from(p.coord));
    return count_trip(track, corpus, params, earth,
                      [&pts, &params, &earth](const geo::RadCoord& c, double, auto&& visit) {
                          for (auto i : index::brute_force_radius(pts, c, params.radius_m, earth)) {
                              visit(i);
                          }
                      });
}

PointKey PointKey::from(const GeoCoord& c, int precision) {
    const double scale = scale_for(precision);
    return {std::llround(c.lat_deg * scale), std::llround(c.lon_deg * scale)};
}

AggregateVisibility::AggregateVisibility(int precision) : precision_(precision) {
    if (precision < 0 || precision > 9) {
        throw Error(ErrorKind::InvalidArgument, "key precision must be within 0..9 decimals");
    }
}

void AggregateVisibility::add(const TripVisibility& trip, const dense::PointCorpus& corpus) {
    for (const auto& [id, count] : trip.counts) {
        const auto ordinal = corpus.ordinal_of(id);
        if (!ordinal) {
            throw Error(ErrorKind::UnknownPointId,
                        "trip " + trip.trip_id + " references unknown point " + id.to_string());
        }
        const GeoCoord& c = corpus[*ordinal].coord;
        auto [it, inserted] = entries_.try_emplace(PointKey::from(c, precision_),
                                                   AggregateEntry{c, *ordinal, 0});
        auto& entry = it->second;
        if (!inserted && *ordinal < entry.representative_ordinal) {
            entry.representative = c;
            entry.representative_ordinal = *ordinal;
        }
        entry.total_count += count;
    }
}

void AggregateVisibility::merge(const AggregateVisibility& other) {
    if (other.precision_ != precision_) {
        throw Error(ErrorKind::InvalidArgument, "cannot merge aggregates with different precision");
    }
    for (const auto& [key, e] : other.entries_) {
        auto [it, inserted] = entries_.try_emplace(key, e);
        if (inserted) continue;
        auto& mine = it->second;
        if (e.representative_ordinal < mine.representative_ordinal) {
            mine.representative = e.representative;
            mine.representative_ordinal = e.representative_ordinal;
        }
        mine.total_count += e.total_count;
    }
}

std::uint64_t AggregateVisibility::grand_total() const noexcept {
    std::uint64_t sum = 0;
    for (const auto& [k, e] : entries_) sum += e.total_count;
    return sum;
}

std::vector<std::uint64_t> AggregateVisibility::totals() const {
    std::vector<std::uint64_t> out;
    out.reserve(entries_.size());
    for (const auto& [k, e] : entries_) out.push_back(e.total_count);
    return out;
}

std::string AggregateVisibility::key_lat(const PointKey& key) const {
    return render_scaled(key.lat_scaled, precision_);
}

std::string AggregateVisibility::key_lon(const PointKey& key) const {
    return render_scaled(key.lon_scaled, precision_);
}

bool operator==(const AggregateVisibility& a, const AggregateVisibility& b) {
    if (a.precision_ != b.precision_ || a.entries_.size() != b.entries_.size()) return false;
    auto ia = a.entries_.begin();
    auto ib = b.entries_.begin();
    for (; ia != a.entries_.end(); ++ia, ++ib) {
        if (ia->first != ib->first) return false;
        const auto& x = ia->second;
        const auto& y = ib->second;
        if (x.total_count != y.total_count || x.representative_ordinal != y.representative_ordinal ||
            x.representative != y.representative) {
            return false;
        }
    }
    return true;
}

AggregateVisibility aggregate(std::span<const TripVisibility> per_trip,
                              const dense::PointCorpus& corpus, int precision) {
    AggregateVisibility agg(precision);
    for (const auto& trip : per_trip) agg.add(trip, corpus);
    return agg;
}

std::string aggregate_csv(const AggregateVisibility& agg) {
    std::string out = "lat,lon,total_count\n";
    for (const auto& [key, e] : agg.entries()) {
        out += agg.key_lat(key);
        out += ',';
        out += agg.key_lon(key);
        out += ',';
        out += std::to_string(e.total_count);
        out += '\n';
    }
    return out;
}

std::vector<AggregateRow> parse_aggregate_csv(std::string_view csv, const std::string& source) {
    std::vector<AggregateRow> rows;
    std::size_t pos = 0;
    std::size_t row = 0;
    bool header = false;
    while (pos < csv.size()) {
        auto end = csv.find('\n', pos);
        if (end == std::string_view::npos) end = csv.size();
        std::string_view line = csv.substr(pos, end - pos);
        pos = end + 1;
        ++row;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (!header) {
            if (line != "lat,lon,total_count") {
                throw ParseError(source, row, "expected header lat,lon,total_count");
            }
            header = true;
            continue;
        }
        const auto c1 = line.find(',');
        const auto c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
        if (c2 == std::string_view::npos || line.find(',', c2 + 1) != std::string_view::npos) {
            throw ParseError(source, row, "expected 3 columns");
        }
        AggregateRow r;
        const auto parse_d = [&](std::string_view s, double& v) {
            const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            return ec == std::errc{} && p == s.data() + s.size();
        };
        const std::string_view count = line.substr(c2 + 1);
        const auto [cp, cec] = std::from_chars(count.data(), count.data() + count.size(), r.total_count);
        if (!parse_d(line.substr(0, c1), r.coord.lat_deg) ||
            !parse_d(line.substr(c1 + 1, c2 - c1 - 1), r.coord.lon_deg) || cec != std::errc{} ||
            cp != count.data() + count.size()) {
            throw ParseError(source, row, "malformed number");
        }
        if (!r.coord.valid()) throw ParseError(source, row, "coordinate out of range");
        if (r.total_count == 0) throw ParseError(source, row, "total_count must be >= 1");
        rows.push_back(r);
    }
    if (!header) throw Error(ErrorKind::EmptyInput, source + ": no header");
    return rows;
}

std::string trip_geojson(const traj::TripTrack& track, const ViewParams& params, int segments,
                         const geo::EarthModel& earth) {
    using nlohmann::json;
    if (segments < 3) throw Error(ErrorKind::InvalidArgument, "circle needs at least 3 segments");
    json features = json::array();

    json line = json::array();
    for (const auto& p : track.points) line.push_back({p.coord.lon_deg, p.coord.lat_deg});
    features.push_back({{"type", "Feature"},
                        {"properties", {{"trip_id", track.trip_id}, {"kind", "track"}}},
                        {"geometry", {{"type", "LineString"}, {"coordinates", std::move(line)}}}});

    for (const auto& p : track.points) {
        if (!p.bearing_deg) continue;
        GeoCoord center;
        try {
            center = viewing_center(p, params, earth);
        } catch (const Error&) {
            continue;
        }
        json ring = json::array();
        for (int k = 0; k < segments; ++k) {
            const auto v = geo::destination_point(center, 360.0 * k / segments, params.radius_m, earth);
            ring.push_back({v.lon_deg, v.lat_deg});
        }
        ring.push_back(ring.front());
        features.push_back(
            {{"type", "Feature"},
             {"properties", {{"trip_id", track.trip_id}, {"t", p.t}, {"bearing", *p.bearing_deg}}},
             {"geometry", {{"type", "Polygon"}, {"coordinates", json::array({std::move(ring)})}}}});
    }
    json doc = {{"type", "FeatureCollection"}, {"features", std::move(features)}};
    return doc.dump() + "\n";
}

}  // namespace vantage::vis
