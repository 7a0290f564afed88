#include <doctest.h>

#include "test_support.hpp"
#include "vantage/error.hpp"
#include "vantage/overpass.hpp"

#include <httplib.h>

#include <atomic>
#include <thread>

using namespace vantage;
using namespace vantage::ingest;

namespace {

const char* kOverpassReply = R"({"elements":[
  {"type":"way","id":42,"tags":{"building":"yes"},"geometry":[
    {"lat":-33.90,"lon":151.20},{"lat":-33.90,"lon":151.2001},
    {"lat":-33.9001,"lon":151.2001},{"lat":-33.90,"lon":151.20}]},
  {"type":"node","id":1,"lat":0,"lon":0}]})";

FetchOptions fast_options(const std::filesystem::path& cache, HttpPost transport) {
    FetchOptions o;
    o.endpoint = "http://fake.invalid/api/interpreter";
    o.cache_dir = cache;
    o.initial_backoff = std::chrono::milliseconds(1);
    o.transport = std::move(transport);
    return o;
}

}  // namespace

TEST_CASE("overpass_query covers the bbox in south,west,north,east order") {
    const auto q = overpass_query(kWaterlooBBox);
    CHECK(q.find("[out:json]") == 0);
    CHECK(q.find("way[\"building\"](-33.91441,151.18943,-33.89325,151.21681)") != std::string::npos);
    CHECK(q.find("out geom;") != std::string::npos);
}

TEST_CASE("overpass_to_geojson produces loadable polygons") {
    const auto load = parse_buildings(overpass_to_geojson(kOverpassReply));
    REQUIRE(load.footprints.size() == 1);
    CHECK(load.footprints[0].building_id == "way/42");
    CHECK(load.footprints[0].rings[0].size() == 4);
    CHECK_THROWS_AS(overpass_to_geojson("not json"), Error);
    CHECK_THROWS_AS(overpass_to_geojson(R"({"version":1})"), Error);
}

TEST_CASE("fetch_buildings persists to cache and serves repeats without network") {
    test::TempDir dir("overpass");
    int calls = 0;
    std::string seen_body;
    auto transport = [&](const std::string&, const std::string& body) {
        ++calls;
        seen_body = body;
        return HttpResult{200, kOverpassReply, {}};
    };
    const auto first = fetch_buildings(kWaterlooBBox, fast_options(dir.path(), transport));
    CHECK(calls == 1);
    CHECK_FALSE(first.from_cache);
    CHECK(std::filesystem::exists(first.cache_path));
    CHECK(seen_body.starts_with("data="));
    const auto second = fetch_buildings(kWaterlooBBox, fast_options(dir.path(), transport));
    CHECK(calls == 1);
    CHECK(second.from_cache);
    CHECK(second.network_calls == 0);
    CHECK(second.geojson == first.geojson);
}

TEST_CASE("fetch_buildings retries transient failures") {
    test::TempDir dir("overpass");
    int calls = 0;
    auto transport = [&](const std::string&, const std::string&) {
        return ++calls < 3 ? HttpResult{503, "", {}} : HttpResult{200, kOverpassReply, {}};
    };
    const auto r = fetch_buildings(kWaterlooBBox, fast_options(dir.path(), transport));
    CHECK(r.network_calls == 3);
}

TEST_CASE("fetch_buildings reports rate limiting and client errors") {
    test::TempDir dir("overpass");
    int calls = 0;
    auto limited = [&](const std::string&, const std::string&) {
        ++calls;
        return HttpResult{429, "", {}};
    };
    try {
        fetch_buildings(kWaterlooBBox, fast_options(dir.path(), limited));
        FAIL("expected RateLimited");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::RateLimited);
    }
    CHECK(calls == 3);

    calls = 0;
    auto bad_request = [&](const std::string&, const std::string&) {
        ++calls;
        return HttpResult{400, "", {}};
    };
    CHECK_THROWS_AS(fetch_buildings(kWaterlooBBox, fast_options(dir.path(), bad_request)), Error);
    CHECK(calls == 1);
    CHECK(std::filesystem::is_empty(dir.path()));
}

TEST_CASE("fetch_buildings against an unreachable endpoint fails after 3 attempts") {
    test::TempDir dir("overpass");
    FetchOptions o;
    o.endpoint = "http://127.0.0.1:1/api/interpreter";
    o.cache_dir = dir.path();
    o.initial_backoff = std::chrono::milliseconds(1);
    try {
        fetch_buildings(kWaterlooBBox, o);
        FAIL("expected NetworkError");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NetworkError);
        CHECK(std::string(e.what()).find("3 attempts") != std::string::npos);
    }
}

TEST_CASE("fetch_buildings over real HTTP against a local server") {
    httplib::Server server;
    std::atomic<int> hits{0};
    server.Post("/api/interpreter", [&](const httplib::Request& req, httplib::Response& res) {
        ++hits;
        if (req.get_param_value("data").find("way[\"building\"]") == std::string::npos) {
            res.status = 400;
            return;
        }
        res.set_content(kOverpassReply, "application/json");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread worker([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    test::TempDir dir("overpass");
    FetchOptions o;
    o.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/api/interpreter";
    o.cache_dir = dir.path();
    const auto r = fetch_buildings(kWaterlooBBox, o);
    server.stop();
    worker.join();
    CHECK(hits == 1);
    CHECK(parse_buildings(r.geojson).footprints.size() == 1);
}
