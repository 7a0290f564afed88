#include "vantage/ingestion.hpp"

#include "vantage/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace vantage::ingest {

namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

bool parse_number(std::string_view s, double& out) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return false;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

GeoCoord coord_from_position(const json& pos, const std::string& source) {
    if (!pos.is_array() || pos.size() < 2 || !pos[0].is_number() || !pos[1].is_number()) {
        throw ParseError(source, 0, "position must be an array of at least two numbers");
    }
    GeoCoord c{pos[1].get<double>(), pos[0].get<double>()};
    if (!c.valid()) {
        throw ParseError(source, 0, "coordinate out of range");
    }
    return c;
}

std::string feature_id(const json& feature, std::size_t ordinal) {
    auto id_to_string = [](const json& v) -> std::string {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_number_integer()) return std::to_string(v.get<long long>());
        if (v.is_number()) return format_double(v.get<double>());
        return {};
    };
    if (auto it = feature.find("id"); it != feature.end()) {
        if (auto s = id_to_string(*it); !s.empty()) return s;
    }
    if (auto props = feature.find("properties"); props != feature.end() && props->is_object()) {
        if (auto it = props->find("@id"); it != props->end()) {
            if (auto s = id_to_string(*it); !s.empty()) return s;
        }
    }
    return std::to_string(ordinal);
}

// Returns an empty optional-like footprint (no rings) if every ring was dropped.
BuildingFootprint polygon_to_footprint(const json& rings, std::string id, BuildingLoad& load,
                                       const std::string& source) {
    if (!rings.is_array()) throw ParseError(source, 0, "polygon coordinates must be an array");
    BuildingFootprint fp{std::move(id), {}};
    for (const auto& ring_json : rings) {
        if (!ring_json.is_array()) throw ParseError(source, 0, "ring must be an array");
        Ring ring;
        ring.reserve(ring_json.size() + 1);
        for (const auto& pos : ring_json) ring.push_back(coord_from_position(pos, source));
        if (!ring.empty() && ring.front() != ring.back()) {
            ring.push_back(ring.front());
            ++load.closed_rings;
        }
        if (ring.size() < 4) {
            ++load.dropped_rings;
            continue;
        }
        fp.rings.push_back(std::move(ring));
    }
    return fp;
}

json ring_to_json(const Ring& ring) {
    json out = json::array();
    for (const auto& c : ring) out.push_back({c.lon_deg, c.lat_deg});
    return out;
}

}  // namespace

BoundingBox BoundingBox::make(double min_lon, double min_lat, double max_lon, double max_lat) {
    BoundingBox b{min_lon, min_lat, max_lon, max_lat};
    const bool finite = std::isfinite(min_lon) && std::isfinite(min_lat) &&
                        std::isfinite(max_lon) && std::isfinite(max_lat);
    if (!finite || !(min_lon < max_lon) || !(min_lat < max_lat)) {
        throw Error(ErrorKind::InvalidArgument, "bounding box requires min < max on both axes");
    }
    return b;
}

BoundingBox BoundingBox::parse(std::string_view text) {
    const auto parts = split(text, ',');
    double v[4];
    if (parts.size() != 4) {
        throw Error(ErrorKind::InvalidArgument,
                    "bbox must be min_lon,min_lat,max_lon,max_lat: " + std::string(text));
    }
    for (int i = 0; i < 4; ++i) {
        if (!parse_number(parts[i], v[i])) {
            throw Error(ErrorKind::InvalidArgument, "bbox component is not a number: " +
                                                        std::string(parts[i]));
        }
    }
    return make(v[0], v[1], v[2], v[3]);
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorKind::Io, "short write to " + path.string());
}

std::vector<Trip> load_trajectories(const std::filesystem::path& path) {
    return parse_trajectories(read_file(path), path.string());
}

std::vector<Trip> parse_trajectories(std::string_view csv, const std::string& source) {
    if (csv.size() >= 3 && csv.substr(0, 3) == "\xEF\xBB\xBF") csv.remove_prefix(3);

    std::vector<Trip> trips;
    std::unordered_map<std::string, std::size_t> slot;
    std::size_t row = 0;
    bool header_seen = false;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        auto end = csv.find('\n', pos);
        if (end == std::string_view::npos) end = csv.size();
        const std::string_view line = trim(csv.substr(pos, end - pos));
        pos = end + 1;
        ++row;
        if (line.empty()) continue;

        const auto cols = split(line, ',');
        if (!header_seen) {
            if (cols.size() != 4 || trim(cols[0]) != "trip_id" || trim(cols[1]) != "t" ||
                trim(cols[2]) != "lat" || trim(cols[3]) != "lon") {
                throw ParseError(source, row, "expected header trip_id,t,lat,lon");
            }
            header_seen = true;
            continue;
        }
        if (cols.size() != 4) {
            throw ParseError(source, row, "expected 4 columns, got " + std::to_string(cols.size()));
        }
        RawFix fix;
        fix.trip_id = std::string(trim(cols[0]));
        if (fix.trip_id.empty()) throw ParseError(source, row, "empty trip_id");
        if (!parse_number(cols[1], fix.t) || !std::isfinite(fix.t)) {
            throw ParseError(source, row, "t is not a finite number");
        }
        if (!parse_number(cols[2], fix.coord.lat_deg) || !parse_number(cols[3], fix.coord.lon_deg)) {
            throw ParseError(source, row, "lat/lon is not a number");
        }
        if (!fix.coord.valid()) {
            throw ParseError(source, row, "coordinate out of range");
        }
        auto [it, inserted] = slot.try_emplace(fix.trip_id, trips.size());
        if (inserted) trips.push_back(Trip{fix.trip_id, {}});
        trips[it->second].fixes.push_back(std::move(fix));
    }
    if (!header_seen) throw Error(ErrorKind::EmptyInput, source + ": no header");
    if (trips.empty()) throw Error(ErrorKind::EmptyInput, source + ": no trajectory rows");

    for (auto& trip : trips) {
        auto& f = trip.fixes;
        std::stable_sort(f.begin(), f.end(),
                         [](const RawFix& a, const RawFix& b) { return a.t < b.t; });
        // Collapse equal timestamps to the last row read.
        std::vector<RawFix> unique;
        unique.reserve(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (i + 1 < f.size() && f[i + 1].t == f[i].t) continue;
            unique.push_back(std::move(f[i]));
        }
        f = std::move(unique);
    }
    return trips;
}

std::string write_trajectories(const std::vector<Trip>& trips) {
    std::string out = "trip_id,t,lat,lon\n";
    for (const auto& trip : trips) {
        for (const auto& f : trip.fixes) {
            out += trip.trip_id;
            out += ',';
            out += format_double(f.t);
            out += ',';
            out += format_double(f.coord.lat_deg);
            out += ',';
            out += format_double(f.coord.lon_deg);
            out += '\n';
        }
    }
    return out;
}

BuildingLoad load_buildings(const std::filesystem::path& path) {
    return parse_buildings(read_file(path), path.string());
}

BuildingLoad parse_buildings(std::string_view geojson, const std::string& source) {
    json doc;
    try {
        doc = json::parse(geojson.begin(), geojson.end());
    } catch (const json::parse_error& e) {
        throw ParseError(source, 0, e.what());
    }
    if (!doc.is_object() || doc.value("type", "") != "FeatureCollection") {
        throw ParseError(source, 0, "expected a GeoJSON FeatureCollection");
    }
    const auto features = doc.find("features");
    if (features == doc.end() || !features->is_array()) {
        throw ParseError(source, 0, "FeatureCollection without a features array");
    }

    BuildingLoad load;
    std::size_t ordinal = 0;
    for (const auto& feature : *features) {
        const std::size_t this_ordinal = ordinal++;
        if (!feature.is_object()) throw ParseError(source, 0, "feature must be an object");
        const auto geom = feature.find("geometry");
        if (geom == feature.end() || !geom->is_object()) {
            ++load.skipped_geometries;
            continue;
        }
        const std::string type = geom->value("type", "");
        const auto coords = geom->find("coordinates");
        if ((type == "Polygon" || type == "MultiPolygon") &&
            (coords == geom->end() || !coords->is_array())) {
            throw ParseError(source, 0, type + " without coordinates");
        }
        const std::string id = feature_id(feature, this_ordinal);
        if (type == "Polygon") {
            auto fp = polygon_to_footprint(*coords, id, load, source);
            if (!fp.rings.empty()) load.footprints.push_back(std::move(fp));
        } else if (type == "MultiPolygon") {
            std::size_t part = 0;
            for (const auto& poly : *coords) {
                auto fp = polygon_to_footprint(poly, id + "#" + std::to_string(part++), load, source);
                if (!fp.rings.empty()) load.footprints.push_back(std::move(fp));
            }
        } else {
            ++load.skipped_geometries;
        }
    }
    return load;
}

std::string write_buildings(const std::vector<BuildingFootprint>& footprints) {
    json features = json::array();
    for (const auto& fp : footprints) {
        json rings = json::array();
        for (const auto& r : fp.rings) rings.push_back(ring_to_json(r));
        features.push_back({{"type", "Feature"},
                            {"id", fp.building_id},
                            {"properties", json::object()},
                            {"geometry", {{"type", "Polygon"}, {"coordinates", std::move(rings)}}}});
    }
    json doc = {{"type", "FeatureCollection"}, {"features", std::move(features)}};
    return doc.dump() + "\n";
}

std::vector<RawFix> filter_bbox(const std::vector<RawFix>& fixes, const BoundingBox& bbox) {
    std::vector<RawFix> out;
    std::copy_if(fixes.begin(), fixes.end(), std::back_inserter(out),
                 [&](const RawFix& f) { return bbox.contains(f.coord); });
    return out;
}

std::vector<Trip> filter_bbox(const std::vector<Trip>& trips, const BoundingBox& bbox) {
    std::vector<Trip> out;
    for (const auto& trip : trips) {
        Trip kept{trip.trip_id, filter_bbox(trip.fixes, bbox)};
        if (!kept.fixes.empty()) out.push_back(std::move(kept));
    }
    return out;
}

std::vector<BuildingFootprint> filter_bbox(const std::vector<BuildingFootprint>& footprints,
                                           const BoundingBox& bbox) {
    std::vector<BuildingFootprint> out;
    for (const auto& fp : footprints) {
        const bool inside = std::any_of(fp.rings.begin(), fp.rings.end(), [&](const Ring& r) {
            return std::any_of(r.begin(), r.end(), [&](const GeoCoord& c) { return bbox.contains(c); });
        });
        if (inside) out.push_back(fp);
    }
    return out;
}

}  // namespace vantage::ingest
