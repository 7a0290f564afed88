// Cached Overpass API client for OSM building footprints.
#pragma once

#include "vantage/ingestion.hpp"

#include <chrono>
#include <filesystem>
#include <functional>
#include <string>

namespace vantage::ingest {

inline constexpr const char* kOverpassEnvVar = "VANTAGE_OVERPASS_URL";
inline constexpr const char* kDefaultOverpassUrl = "https://overpass-api.de/api/interpreter";

struct HttpResult {
    int status = 0;          // 0 when no response was received
    std::string body;
    std::string error;       // transport-level failure description
};

/// POSTs a form-encoded body to url.
using HttpPost = std::function<HttpResult(const std::string& url, const std::string& form_body)>;

/// Default transport backed by cpp-httplib; honors a 25 s read timeout.
HttpResult httplib_post(const std::string& url, const std::string& form_body);

struct FetchOptions {
    std::string endpoint = kDefaultOverpassUrl;
    std::filesystem::path cache_dir = ".vantage-cache";
    int max_attempts = 3;
    std::chrono::milliseconds initial_backoff{1000};
    HttpPost transport = httplib_post;
};

struct FetchResult {
    std::filesystem::path cache_path;
    std::string geojson;
    bool from_cache = false;
    int network_calls = 0;
};

/// Overpass QL for all building ways inside bbox, with inline geometry.
std::string overpass_query(const BoundingBox& bbox);

/// Converts an Overpass JSON response (`out geom`) to a GeoJSON
/// FeatureCollection of Polygons. Throws Error(MalformedResponse).
std::string overpass_to_geojson(const std::string& response);

/// Endpoint from the environment variable, else the public default.
std::string overpass_endpoint_from_env();

/// Fetches building footprints for bbox, persisting the GeoJSON in the cache
/// directory. A cached file for the same bbox is returned without network
/// access. Retries 429/5xx and transport failures with exponential backoff.
FetchResult fetch_buildings(const BoundingBox& bbox, const FetchOptions& options = {});

}  // namespace vantage::ingest
