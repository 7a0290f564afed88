#include <doctest.h>

#include "test_support.hpp"
#include "vantage/cli.hpp"
#include "vantage/ingestion.hpp"

#include <json.hpp>

#include <sstream>

using namespace vantage;

namespace {

struct Invocation {
    int code = -1;
    std::string out;
    std::string err;
};

Invocation invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "vantage");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    Invocation r;
    r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string data(const std::string& name) { return (test::data_dir() / "seed42" / name).string(); }

}  // namespace

TEST_CASE("cli run writes the golden aggregate and a manifest") {
    test::TempDir dir("cli");
    const auto out = (dir / "agg.csv").string();
    const auto r = invoke({"run", "--trajectories", data("trajectories.csv"), "--buildings",
                           data("buildings.geojson"), "--out", out, "--workers", "3",
                           "--corpus-dump", (dir / "corpus.csv").string()});
    REQUIRE(r.code == cli::kSuccess);
    CHECK(ingest::read_file(out) == ingest::read_file(data("aggregate.csv")));
    const auto manifest = nlohmann::json::parse(ingest::read_file(out + ".manifest.json"));
    CHECK(manifest["command"] == "run");
    CHECK(manifest["inputs"].size() == 2);
    CHECK(manifest["inputs"][0]["sha256"].get<std::string>().size() == 64);
    CHECK(manifest["outputs"][0]["path"] == out);
    CHECK(manifest["diagnostics"]["aggregate_total"] == manifest["diagnostics"]["query_hits"]);
    CHECK(manifest["parameters"]["view"]["radius_m"] == 50.0);
    CHECK(std::filesystem::exists(dir / "corpus.csv"));
}

TEST_CASE("cli fit, hotspots and histogram") {
    test::TempDir dir("cli");
    auto r = invoke({"fit", "--aggregate", data("aggregate.csv"), "--out", (dir / "fit.json").string()});
    REQUIRE(r.code == cli::kSuccess);
    const auto report = nlohmann::json::parse(ingest::read_file(dir / "fit.json"));
    CHECK(report["ranking"].size() == 7);

    r = invoke({"fit", "--aggregate", data("aggregate.csv"), "--out", (dir / "fit2.json").string(),
                "--families", "Normal,LogNormal"});
    REQUIRE(r.code == cli::kSuccess);
    CHECK(nlohmann::json::parse(ingest::read_file(dir / "fit2.json"))["ranking"].size() == 2);

    r = invoke({"hotspots", "--aggregate", data("aggregate.csv"), "--out",
                (dir / "hot.geojson").string(), "--shares", (dir / "shares.csv").string()});
    REQUIRE(r.code == cli::kSuccess);
    const auto hot = nlohmann::json::parse(ingest::read_file(dir / "hot.geojson"));
    CHECK(hot["features"][0]["properties"].contains("quantile_group"));
    CHECK(ingest::read_file(dir / "shares.csv").starts_with("group,size,total,share\n"));

    r = invoke({"histogram", "--aggregate", data("aggregate.csv"), "--out", (dir / "h.csv").string(),
                "--bins", "20"});
    REQUIRE(r.code == cli::kSuccess);
    const auto h = ingest::read_file(dir / "h.csv");
    CHECK(std::count(h.begin(), h.end(), '\n') == 21);
}

TEST_CASE("cli trip-geojson, synth and bench") {
    test::TempDir dir("cli");
    auto r = invoke({"trip-geojson", "--trajectories", data("trajectories.csv"), "--trip-id",
                     "trip-0001", "--out", (dir / "trip.geojson").string()});
    REQUIRE(r.code == cli::kSuccess);
    CHECK(nlohmann::json::parse(ingest::read_file(dir / "trip.geojson"))["features"].size() > 1);

    r = invoke({"trip-geojson", "--trajectories", data("trajectories.csv"), "--trip-id", "nope",
                "--out", (dir / "x.geojson").string()});
    CHECK(r.code == cli::kInputError);

    r = invoke({"synth", "--out-dir", (dir / "s").string()});
    REQUIRE(r.code == cli::kSuccess);
    CHECK(ingest::read_file(dir / "s/trajectories.csv") == ingest::read_file(data("trajectories.csv")));
    CHECK(std::filesystem::exists(dir / "s/synth.manifest.json"));

    r = invoke({"bench", "--points", "2000", "--queries", "200", "--out", (dir / "b.json").string()});
    REQUIRE(r.code == cli::kSuccess);
    CHECK(nlohmann::json::parse(ingest::read_file(dir / "b.json"))["mismatches"] == 0);
}

TEST_CASE("cli fetch serves a cached bbox without touching the network") {
    test::TempDir dir("cli");
    const auto cache = dir / "cache";
    // Unreachable endpoint: a cache miss fails as an input error.
    auto r = invoke({"fetch", "--endpoint", "http://127.0.0.1:1/api", "--cache-dir", cache.string(),
                     "--backoff-ms", "1"});
    CHECK(r.code == cli::kInputError);
    ingest::write_file(cache / "buildings_151.18943_-33.91441_151.21681_-33.89325.geojson",
                       ingest::read_file(data("buildings.geojson")));
    r = invoke({"fetch", "--endpoint", "http://127.0.0.1:1/api", "--cache-dir", cache.string(),
                "--out", (dir / "b.geojson").string()});
    REQUIRE(r.code == cli::kSuccess);
    CHECK(r.out.starts_with("cache hit"));
    CHECK(ingest::read_file(dir / "b.geojson") == ingest::read_file(data("buildings.geojson")));
    const auto manifest = nlohmann::json::parse(ingest::read_file(dir / "b.geojson.manifest.json"));
    CHECK(manifest["diagnostics"]["network_calls"] == 0);
}

TEST_CASE("cli exit codes for bad input") {
    test::TempDir dir("cli");
    CHECK(invoke({}).code == cli::kInputError);
    CHECK(invoke({"bogus"}).code == cli::kInputError);
    CHECK(invoke({"run", "--trajectories", "x"}).code == cli::kInputError);
    CHECK(invoke({"--help"}).code == cli::kSuccess);
    ingest::write_file(dir / "bad.csv", "trip_id,t,lat,lon\nA,0,95,0\n");
    const auto r = invoke({"run", "--trajectories", (dir / "bad.csv").string(), "--buildings",
                           data("buildings.geojson"), "--out", (dir / "o.csv").string()});
    CHECK(r.code == cli::kInputError);
    CHECK(r.err.find("bad.csv:2") != std::string::npos);
    CHECK(invoke({"run", "--trajectories", data("trajectories.csv"), "--buildings",
                  data("buildings.geojson"), "--out", (dir / "o.csv").string(), "--radius", "-5"})
              .code == cli::kInputError);
    CHECK(invoke({"hotspots", "--aggregate", data("aggregate.csv"), "--out",
                  (dir / "h.geojson").string(), "--cuts", "0.9,abc"})
              .code == cli::kInputError);
}
