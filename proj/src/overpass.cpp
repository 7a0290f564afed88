#include "vantage/overpass.hpp"

#include "vantage/error.hpp"

#include <httplib.h>
#include <json.hpp>

#include <cctype>
#include <cstdlib>
#include <thread>

namespace vantage::ingest {

namespace {

using nlohmann::json;

std::string percent_encode(std::string_view s) {
    static constexpr char kHex[] = "0123456789ABCDEF";
    std::string out;
    out.reserve(s.size() * 3);
    for (unsigned char c : s) {
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
            out += static_cast<char>(c);
        } else {
            out += '%';
            out += kHex[c >> 4];
            out += kHex[c & 0xF];
        }
    }
    return out;
}

std::string cache_name(const BoundingBox& b) {
    return "buildings_" + format_double(b.min_lon) + "_" + format_double(b.min_lat) + "_" +
           format_double(b.max_lon) + "_" + format_double(b.max_lat) + ".geojson";
}

bool retryable(const HttpResult& r) {
    return r.status == 0 || r.status == 429 || r.status == 502 || r.status == 503 ||
           r.status == 504;
}

}  // namespace

HttpResult httplib_post(const std::string& url, const std::string& form_body) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) return {0, {}, "endpoint URL lacks a scheme: " + url};
    const auto path_start = url.find('/', scheme_end + 3);
    const std::string base = url.substr(0, path_start);
    const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

    HttpResult result;
    try {
        httplib::Client client(base);
        client.set_connection_timeout(std::chrono::seconds(10));
        client.set_read_timeout(std::chrono::seconds(25));
        client.set_follow_location(true);
        auto res = client.Post(path, form_body, "application/x-www-form-urlencoded");
        if (!res) {
            result.error = httplib::to_string(res.error());
            return result;
        }
        result.status = res->status;
        result.body = std::move(res->body);
    } catch (const std::exception& e) {
        result.error = e.what();
    }
    return result;
}

std::string overpass_query(const BoundingBox& b) {
    // Overpass bbox order is (south, west, north, east).
    return "[out:json][timeout:25];way[\"building\"](" + format_double(b.min_lat) + "," +
           format_double(b.min_lon) + "," + format_double(b.max_lat) + "," +
           format_double(b.max_lon) + ");out geom;";
}

std::string overpass_to_geojson(const std::string& response) {
    json doc;
    try {
        doc = json::parse(response);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::MalformedResponse, e.what());
    }
    const auto elements = doc.find("elements");
    if (!doc.is_object() || elements == doc.end() || !elements->is_array()) {
        throw Error(ErrorKind::MalformedResponse, "response has no elements array");
    }
    json features = json::array();
    for (const auto& el : *elements) {
        if (el.value("type", "") != "way") continue;
        const auto geometry = el.find("geometry");
        if (geometry == el.end() || !geometry->is_array()) continue;
        json ring = json::array();
        for (const auto& node : *geometry) {
            if (!node.contains("lat") || !node.contains("lon") || !node["lat"].is_number() ||
                !node["lon"].is_number()) {
                throw Error(ErrorKind::MalformedResponse, "way geometry node without lat/lon");
            }
            ring.push_back({node["lon"].get<double>(), node["lat"].get<double>()});
        }
        if (ring.size() < 3) continue;
        if (ring.front() != ring.back()) ring.push_back(ring.front());
        if (ring.size() < 4) continue;
        const auto id = el.value("id", static_cast<long long>(features.size()));
        features.push_back({{"type", "Feature"},
                            {"id", "way/" + std::to_string(id)},
                            {"properties", el.value("tags", json::object())},
                            {"geometry", {{"type", "Polygon"}, {"coordinates", json::array({ring})}}}});
    }
    json out = {{"type", "FeatureCollection"}, {"features", std::move(features)}};
    return out.dump() + "\n";
}

std::string overpass_endpoint_from_env() {
    if (const char* env = std::getenv(kOverpassEnvVar); env != nullptr && *env != '\0') {
        return env;
    }
    return kDefaultOverpassUrl;
}

FetchResult fetch_buildings(const BoundingBox& bbox, const FetchOptions& options) {
    FetchResult result;
    result.cache_path = options.cache_dir / cache_name(bbox);
    if (std::filesystem::exists(result.cache_path)) {
        result.geojson = read_file(result.cache_path);
        result.from_cache = true;
        return result;
    }

    const std::string body = "data=" + percent_encode(overpass_query(bbox));
    auto backoff = options.initial_backoff;
    HttpResult last;
    for (int attempt = 1; attempt <= options.max_attempts; ++attempt) {
        last = options.transport(options.endpoint, body);
        ++result.network_calls;
        if (last.status == 200) break;
        if (!retryable(last)) break;
        if (attempt < options.max_attempts) {
            std::this_thread::sleep_for(backoff);
            backoff *= 2;
        }
    }

    if (last.status == 429) {
        throw Error(ErrorKind::RateLimited, "endpoint kept answering 429 after " +
                                                std::to_string(result.network_calls) + " attempts");
    }
    if (last.status != 200) {
        const std::string detail =
            last.status == 0 ? last.error : "HTTP " + std::to_string(last.status);
        throw Error(ErrorKind::NetworkError, options.endpoint + ": " + detail + " after " +
                                                 std::to_string(result.network_calls) + " attempts");
    }

    result.geojson = overpass_to_geojson(last.body);
    const auto tmp = result.cache_path.string() + ".tmp";
    write_file(tmp, result.geojson);
    std::filesystem::rename(tmp, result.cache_path);
    return result;
}

}  // namespace vantage::ingest
