#include "vantage/cli.hpp"

#include "vantage/bench.hpp"
#include "vantage/error.hpp"
#include "vantage/manifest.hpp"
#include "vantage/overpass.hpp"
#include "vantage/pipeline.hpp"
#include "vantage/statistics.hpp"
#include "vantage/synthetic.hpp"
#include "vantage/trajectory.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <ostream>
#include <thread>

namespace vantage::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

struct ViewFlags {
    double radius_m = 50.0;
    double lead_m = 50.0;
    double interval_s = 5.0;

    void attach(CLI::App* app) {
        app->add_option("--radius", radius_m, "Viewing circle radius in meters")->capture_default_str();
        app->add_option("--lead", lead_m, "Circle center distance ahead of the vehicle in meters")
            ->capture_default_str();
        app->add_option("--interval", interval_s, "Resampling interval in seconds")->capture_default_str();
    }
    vis::ViewParams params() const { return {radius_m, lead_m, interval_s}; }
    json to_json() const { return {{"radius_m", radius_m}, {"lead_m", lead_m}, {"interval_s", interval_s}}; }
};

fs::path default_manifest(const fs::path& output) { return fs::path(output.string() + ".manifest.json"); }

json bbox_json(const std::optional<ingest::BoundingBox>& b) {
    if (!b) return nullptr;
    return json::array({b->min_lon, b->min_lat, b->max_lon, b->max_lat});
}

std::optional<ingest::BoundingBox> parse_bbox_flag(const std::string& text) {
    if (text.empty()) return std::nullopt;
    if (text == "waterloo") return ingest::kWaterlooBBox;
    return ingest::BoundingBox::parse(text);
}

std::vector<double> parse_cuts(const std::string& text) {
    std::vector<double> cuts;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        const std::string part = text.substr(pos, comma - pos);
        try {
            std::size_t used = 0;
            cuts.push_back(std::stod(part, &used));
            if (used != part.size()) throw std::invalid_argument(part);
        } catch (const std::exception&) {
            throw Error(ErrorKind::InvalidArgument, "cut is not a number: " + part);
        }
        pos = comma + 1;
    }
    return cuts;
}

std::vector<double> load_totals(const fs::path& path, std::vector<vis::AggregateRow>* rows_out = nullptr) {
    auto rows = vis::parse_aggregate_csv(ingest::read_file(path), path.string());
    std::vector<double> totals;
    totals.reserve(rows.size());
    for (const auto& r : rows) totals.push_back(static_cast<double>(r.total_count));
    if (rows_out) *rows_out = std::move(rows);
    return totals;
}

// ---------------------------------------------------------------- run

struct RunCmd {
    std::string trajectories, buildings, bbox, out, manifest, corpus_dump;
    ViewFlags view;
    double spacing_m = dense::kDefaultSpacingM;
    int precision = vis::kDefaultKeyPrecision;
    std::size_t leaf_size = index::kDefaultLeafSize;
    unsigned workers = std::max(1U, std::thread::hardware_concurrency());

    void attach(CLI::App& root) {
        auto* app = root.add_subcommand("run", "Compute aggregate visibility counts");
        app->add_option("--trajectories", trajectories, "Trajectory CSV (trip_id,t,lat,lon)")->required();
        app->add_option("--buildings", buildings, "Building footprints GeoJSON")->required();
        app->add_option("--bbox", bbox, "min_lon,min_lat,max_lon,max_lat or 'waterloo'");
        app->add_option("--out", out, "Aggregate CSV output")->required();
        app->add_option("--manifest", manifest, "Manifest JSON (default: <out>.manifest.json)");
        app->add_option("--corpus-dump", corpus_dump, "Write the densified corpus CSV here");
        view.attach(app);
        app->add_option("--spacing", spacing_m, "Max outline point spacing in meters")->capture_default_str();
        app->add_option("--precision", precision, "Decimal places of aggregate keys")->capture_default_str();
        app->add_option("--leaf-size", leaf_size, "BallTree leaf capacity")->capture_default_str();
        app->add_option("--workers", workers, "Worker threads for per-trip work")->capture_default_str();
        app->callback([this] { selected = true; });
    }
    bool selected = false;

    int execute(std::ostream& out_s, std::ostream& err) {
        const auto start = Clock::now();
        Manifest m("run");
        m.add_input("trajectories", trajectories);
        m.add_input("buildings", buildings);

        const auto trips = ingest::load_trajectories(trajectories);
        const auto load = ingest::load_buildings(buildings);

        pipeline::RunParams params;
        params.view = view.params();
        params.spacing_m = spacing_m;
        params.precision = precision;
        params.leaf_size = leaf_size;
        params.bbox = parse_bbox_flag(bbox);
        params.workers = workers;

        auto result = pipeline::run(trips, load.footprints, params);
        ingest::write_file(out, vis::aggregate_csv(result.aggregate));
        if (!corpus_dump.empty()) ingest::write_file(corpus_dump, dense::corpus_csv(result.corpus));

        // Worker count does not affect outputs, so it is recorded with timing.
        m.parameters() = {{"view", view.to_json()},      {"spacing_m", spacing_m},
                          {"precision", precision},      {"leaf_size", leaf_size},
                          {"bbox", bbox_json(params.bbox)}};
        const auto& t = result.tallies;
        m.diagnostics() = {{"trips_loaded", t.trips_loaded},
                           {"trips_after_bbox", t.trips_after_bbox},
                           {"trips_too_short", t.trips_too_short},
                           {"trips_processed", t.trips_processed},
                           {"footprints_loaded", t.footprints_loaded},
                           {"footprints_after_bbox", t.footprints_after_bbox},
                           {"skipped_geometries", load.skipped_geometries},
                           {"closed_rings", load.closed_rings},
                           {"dropped_rings", load.dropped_rings},
                           {"corpus_points", t.corpus_points},
                           {"degenerate_edges", t.degenerate_edges},
                           {"track_points", t.visibility.track_points},
                           {"skipped_invalid_bearing", t.visibility.skipped_invalid_bearing},
                           {"skipped_invalid_center", t.visibility.skipped_invalid_center},
                           {"circles_queried", t.visibility.circles_queried},
                           {"query_hits", t.visibility.query_hits},
                           {"aggregate_entries", result.aggregate.size()},
                           {"aggregate_total", result.aggregate.grand_total()}};
        m.timing() = {{"workers", workers},
                      {"densify_s", result.timings.densify_s},
                      {"index_s", result.timings.index_s},
                      {"visibility_s", result.timings.visibility_s},
                      {"aggregate_s", result.timings.aggregate_s},
                      {"total_s", std::chrono::duration<double>(Clock::now() - start).count()}};
        if (load.warnings() > 0) {
            m.add_warning(std::to_string(load.warnings()) + " building geometry warnings");
        }
        for (const auto& w : result.warnings) {
            m.add_warning(w);
            err << "warning: " << w << "\n";
        }
        m.add_output("aggregate", out);
        m.write(manifest.empty() ? default_manifest(out) : fs::path(manifest));
        out_s << "aggregate entries: " << result.aggregate.size()
              << ", total visibility: " << result.aggregate.grand_total() << "\n";
        return kSuccess;
    }
};

// ---------------------------------------------------------------- fit

struct FitCmd {
    std::string aggregate, out, manifest, families;
    unsigned workers = 1;
    bool selected = false;

    void attach(CLI::App& root) {
        auto* app = root.add_subcommand("fit", "Fit candidate distributions to aggregate totals");
        app->add_option("--aggregate", aggregate, "Aggregate CSV")->required();
        app->add_option("--out", out, "Fit report JSON")->required();
        app->add_option("--manifest", manifest, "Manifest JSON (default: <out>.manifest.json)");
        app->add_option("--families", families, "Comma-separated families (default: all)");
        app->add_option("--workers", workers, "Fit families concurrently")->capture_default_str();
        app->callback([this] { selected = true; });
    }

    int execute(std::ostream& out_s, std::ostream&) {
        const auto start = Clock::now();
        Manifest m("fit");
        m.add_input("aggregate", aggregate);
        const auto totals = load_totals(aggregate);

        std::vector<stats::FitResult> fits;
        if (families.empty()) {
            fits = stats::fit_all(totals, workers);
        } else {
            std::size_t pos = 0;
            while (pos <= families.size()) {
                auto comma = families.find(',', pos);
                if (comma == std::string::npos) comma = families.size();
                const auto name = families.substr(pos, comma - pos);
                const auto fam = stats::family_from_string(name);
                if (!fam) throw Error(ErrorKind::InvalidArgument, "unknown family " + name);
                fits.push_back(stats::fit_distribution(totals, *fam));
                pos = comma + 1;
            }
        }
        const auto ranked = stats::rank_fits(std::move(fits));
        ingest::write_file(out, stats::fit_report_json(ranked, totals.size()));
        out_s << stats::fit_table(ranked);

        m.parameters() = {{"families", families.empty() ? "all" : families}};
        m.diagnostics() = {{"n", totals.size()}};
        m.timing() = {{"total_s", std::chrono::duration<double>(Clock::now() - start).count()}};
        m.add_output("fit_report", out);
        m.write(manifest.empty() ? default_manifest(out) : fs::path(manifest));
        return kSuccess;
    }
};

// ---------------------------------------------------------------- hotspots

struct HotspotsCmd {
    std::string aggregate, out, shares, manifest, cuts = "0.90,0.95,0.99";
    bool selected = false;

    void attach(CLI::App& root) {
        auto* app = root.add_subcommand("hotspots", "Classify aggregate points into quantile groups");
        app->add_option("--aggregate", aggregate, "Aggregate CSV")->required();
        app->add_option("--out", out, "Quantile GeoJSON output")->required();
        app->add_option("--cuts", cuts, "Ascending quantile cuts")->capture_default_str();
        app->add_option("--shares", shares, "Optional shares CSV output");
        app->add_option("--manifest", manifest, "Manifest JSON (default: <out>.manifest.json)");
        app->callback([this] { selected = true; });
    }

    int execute(std::ostream& out_s, std::ostream&) {
        const auto start = Clock::now();
        Manifest m("hotspots");
        m.add_input("aggregate", aggregate);
        std::vector<vis::AggregateRow> rows;
        const auto totals = load_totals(aggregate, &rows);
        const auto qc = stats::quantile_classify(totals, parse_cuts(cuts));

        json features = json::array();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            features.push_back(
                {{"type", "Feature"},
                 {"properties",
                  {{"total_count", rows[i].total_count}, {"quantile_group", qc.group_names[qc.labels[i]]}}},
                 {"geometry",
                  {{"type", "Point"}, {"coordinates", {rows[i].coord.lon_deg, rows[i].coord.lat_deg}}}}});
        }
        json doc = {{"type", "FeatureCollection"}, {"features", std::move(features)}};
        ingest::write_file(out, doc.dump() + "\n");

        std::string table = "group,size,total,share\n";
        json groups = json::array();
        for (std::size_t g = 0; g < qc.group_names.size(); ++g) {
            char line[160];
            std::snprintf(line, sizeof(line), "%s,%zu,%.0f,%.6f\n", qc.group_names[g].c_str(),
                          qc.group_sizes[g], qc.group_totals[g], qc.shares[g]);
            table += line;
            groups.push_back({{"group", qc.group_names[g]},
                              {"size", qc.group_sizes[g]},
                              {"total", qc.group_totals[g]},
                              {"share", qc.shares[g]}});
        }
        out_s << table;
        if (!shares.empty()) ingest::write_file(shares, table);

        m.parameters() = {{"cuts", qc.cuts}};
        m.diagnostics() = {{"n", totals.size()}, {"thresholds", qc.thresholds}, {"groups", groups}};
        m.timing() = {{"total_s", std::chrono::duration<double>(Clock::now() - start).count()}};
        m.add_output("quantile_geojson", out);
        if (!shares.empty()) m.add_output("shares", shares);
        m.write(manifest.empty() ? default_manifest(out) : fs::path(manifest));
        return kSuccess;
    }
};

// ---------------------------------------------------------------- histogram

struct HistogramCmd {
    std::string aggregate, out, manifest;
    std::size_t bins = 50;
    bool selected = false;

    void attach(CLI::App& root) {
        auto* app = root.add_subcommand("histogram", "Equal-width histogram of aggregate totals");
        app->add_option("--aggregate", aggregate, "Aggregate CSV")->required();
        app->add_option("--out", out, "Histogram CSV output")->required();
        app->add_option("--bins", bins, "Number of bins")->capture_default_str();
        app->add_option("--manifest", manifest, "Manifest JSON (default: <out>.manifest.json)");
        app->callback([this] { selected = true; });
    }

    int execute(std::ostream& out_s, std::ostream&) {
        Manifest m("histogram");
        m.add_input("aggregate", aggregate);
        const auto totals = load_totals(aggregate);
        const auto h = stats::histogram(totals, bins);
        const auto csv = h.to_csv();
        ingest::write_file(out, csv);
        out_s << csv;
        m.parameters() = {{"bins", bins}};
        m.diagnostics() = {{"n", totals.size()}};
        m.add_output("histogram", out);
        m.write(manifest.empty() ? default_manifest(out) : fs::path(manifest));
        return kSuccess;
    }
};

// ---------------------------------------------------------------- trip-geojson

struct TripGeoJsonCmd {
    std::string trajectories, trip_id, out, manifest;
    ViewFlags view;
    int segments = 64;
    bool selected = false;

    void attach(CLI::App& root) {
        auto* app = root.add_subcommand("trip-geojson", "Export one trip's track and viewing circles");
        app->add_option("--trajectories", trajectories, "Trajectory CSV")->required();
        app->add_option("--trip-id", trip_id, "Trip to export")->required();
        app->add_option("--out", out, "GeoJSON output")->required();
        app->add_option("--segments", segments, "Polygon vertices per circle")->capture_default_str();
        app->add_option("--manifest", manifest, "Manifest JSON (default: <out>.manifest.json)");
        view.attach(app);
        app->callback([this] { selected = true; });
    }

    int execute(std::ostream& out_s, std::ostream&) {
        Manifest m("trip-geojson");
        m.add_input("trajectories", trajectories);
        const auto trips = ingest::load_trajectories(trajectories);
        const auto it = std::find_if(trips.begin(), trips.end(),
                                     [&](const ingest::Trip& t) { return t.trip_id == trip_id; });
        if (it == trips.end()) throw Error(ErrorKind::UnknownTrip, "no trip with id " + trip_id);
        const auto params = view.params();
        params.validate();
        const auto track =
            traj::assign_bearings(traj::interpolate_trip(it->trip_id, it->fixes, params.interval_s));
        ingest::write_file(out, vis::trip_geojson(track, params, segments));
        std::size_t circles = 0;
        for (const auto& p : track.points) circles += p.bearing_deg.has_value() ? 1 : 0;
        out_s << "trip " << trip_id << ": " << track.points.size() << " points, " << circles
              << " viewing circles\n";
        m.parameters() = {{"trip_id", trip_id}, {"view", view.to_json()}, {"segments", segments}};
        m.diagnostics() = {{"track_points", track.points.size()}, {"circles", circles}};
        m.add_output("trip_geojson", out);
        m.write(manifest.empty() ? default_manifest(out) : fs::path(manifest));
        return kSuccess;
    }
};

// ---------------------------------------------------------------- bench

struct BenchCmd {
    bench::BenchConfig config;
    std::string out, manifest, bbox;
    bool selected = false;

    void attach(CLI::App& root) {
        auto* app = root.add_subcommand("bench", "Time BallTree queries against brute force");
        app->add_option("--points", config.points, "Corpus size")->capture_default_str();
        app->add_option("--queries", config.queries, "Number of radius queries")->capture_default_str();
        app->add_option("--radius", config.radius_m, "Query radius in meters")->capture_default_str();
        app->add_option("--leaf-size", config.leaf_size, "BallTree leaf capacity")->capture_default_str();
        app->add_option("--seed", config.seed, "RNG seed")->capture_default_str();
        app->add_option("--bbox", bbox, "Scatter area (default: waterloo)");
        app->add_option("--out", out, "Benchmark report JSON")->required();
        app->add_option("--manifest", manifest, "Manifest JSON (default: <out>.manifest.json)");
        app->callback([this] { selected = true; });
    }

    int execute(std::ostream& out_s, std::ostream&) {
        Manifest m("bench");
        if (auto b = parse_bbox_flag(bbox)) config.bbox = *b;
        const auto report = bench::run_benchmark(config);
        ingest::write_file(out, report.to_json());
        char line[256];
        std::snprintf(line, sizeof(line),
                      "tree mean %.2f us (median %.2f), brute force mean %.2f us (median %.2f), "
                      "speedup %.1fx, mean hit fraction %.5f, mismatches %zu\n",
                      report.tree.mean_us, report.tree.median_us, report.brute.mean_us,
                      report.brute.median_us, report.speedup, report.mean_hit_fraction,
                      report.mismatches);
        out_s << line;
        m.parameters() = json::parse(report.to_json())["config"];
        m.diagnostics() = {{"speedup", report.speedup}, {"mismatches", report.mismatches}};
        m.timing() = {{"build_s", report.build_s},
                      {"tree_total_s", report.tree.total_s},
                      {"brute_total_s", report.brute.total_s}};
        m.add_output("bench_report", out);
        m.write(manifest.empty() ? default_manifest(out) : fs::path(manifest));
        return kSuccess;
    }
};

// ---------------------------------------------------------------- synth

struct SynthCmd {
    synth::SynthConfig config;
    std::string out_dir, bbox, manifest;
    bool selected = false;

    void attach(CLI::App& root) {
        auto* app = root.add_subcommand("synth", "Generate synthetic trajectories and buildings");
        app->add_option("--seed", config.seed, "RNG seed")->capture_default_str();
        app->add_option("--trips", config.n_trips, "Number of trips")->capture_default_str();
        app->add_option("--buildings", config.n_buildings, "Number of buildings")->capture_default_str();
        app->add_option("--duration", config.trip_duration_s, "Trip duration in seconds")->capture_default_str();
        app->add_option("--speed-min", config.speed_min_mps, "Minimum speed m/s")->capture_default_str();
        app->add_option("--speed-max", config.speed_max_mps, "Maximum speed m/s")->capture_default_str();
        app->add_option("--block", config.block_m, "Street spacing in meters")->capture_default_str();
        app->add_option("--bbox", bbox, "Area (default: waterloo)");
        app->add_option("--out-dir", out_dir, "Directory for trajectories.csv and buildings.geojson")
            ->required();
        app->add_option("--manifest", manifest, "Manifest JSON (default: <out-dir>/synth.manifest.json)");
        app->callback([this] { selected = true; });
    }

    int execute(std::ostream& out_s, std::ostream&) {
        Manifest m("synth");
        if (auto b = parse_bbox_flag(bbox)) config.bbox = *b;
        const auto generated = synth::generate(config);
        const fs::path dir(out_dir);
        ingest::write_file(dir / "trajectories.csv", generated.trajectories_csv);
        ingest::write_file(dir / "buildings.geojson", generated.buildings_geojson);
        m.parameters() = {{"seed", config.seed},
                          {"trips", config.n_trips},
                          {"buildings", config.n_buildings},
                          {"duration_s", config.trip_duration_s},
                          {"speed_mps", {config.speed_min_mps, config.speed_max_mps}},
                          {"block_m", config.block_m},
                          {"bbox", bbox_json(config.bbox)}};
        m.add_output("trajectories", dir / "trajectories.csv");
        m.add_output("buildings", dir / "buildings.geojson");
        m.write(manifest.empty() ? dir / "synth.manifest.json" : fs::path(manifest));
        out_s << "wrote " << (dir / "trajectories.csv").string() << " and "
              << (dir / "buildings.geojson").string() << "\n";
        return kSuccess;
    }
};

// ---------------------------------------------------------------- fetch

struct FetchCmd {
    std::string bbox = "waterloo", endpoint, cache_dir = ".vantage-cache", out, manifest;
    int backoff_ms = 1000;
    bool selected = false;

    void attach(CLI::App& root) {
        auto* app = root.add_subcommand("fetch", "Download OSM building footprints via Overpass");
        app->add_option("--bbox", bbox, "min_lon,min_lat,max_lon,max_lat or 'waterloo'")->capture_default_str();
        app->add_option("--endpoint", endpoint, std::string("Overpass URL (default: $") + ingest::kOverpassEnvVar + ")");
        app->add_option("--cache-dir", cache_dir, "Cache directory")->capture_default_str();
        app->add_option("--backoff-ms", backoff_ms, "Initial retry backoff")->capture_default_str();
        app->add_option("--out", out, "Also copy the GeoJSON here");
        app->add_option("--manifest", manifest, "Manifest JSON (default: <cache file>.manifest.json)");
        app->callback([this] { selected = true; });
    }

    int execute(std::ostream& out_s, std::ostream&) {
        Manifest m("fetch");
        ingest::FetchOptions opts;
        opts.endpoint = endpoint.empty() ? ingest::overpass_endpoint_from_env() : endpoint;
        opts.cache_dir = cache_dir;
        opts.initial_backoff = std::chrono::milliseconds(backoff_ms);
        const auto box = *parse_bbox_flag(bbox);
        const auto result = ingest::fetch_buildings(box, opts);
        const fs::path target = out.empty() ? result.cache_path : fs::path(out);
        if (!out.empty()) ingest::write_file(out, result.geojson);
        m.parameters() = {{"bbox", bbox_json(box)}, {"endpoint", opts.endpoint}};
        m.diagnostics() = {{"from_cache", result.from_cache}, {"network_calls", result.network_calls}};
        m.add_output("buildings", target);
        m.write(manifest.empty() ? default_manifest(target) : fs::path(manifest));
        out_s << (result.from_cache ? "cache hit: " : "fetched: ") << result.cache_path.string() << "\n";
        return kSuccess;
    }
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"vantage: building-outline visibility from vehicle trajectories"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    RunCmd run_cmd;
    FitCmd fit_cmd;
    HotspotsCmd hotspots_cmd;
    HistogramCmd histogram_cmd;
    TripGeoJsonCmd trip_cmd;
    BenchCmd bench_cmd;
    SynthCmd synth_cmd;
    FetchCmd fetch_cmd;
    run_cmd.attach(app);
    fit_cmd.attach(app);
    hotspots_cmd.attach(app);
    histogram_cmd.attach(app);
    trip_cmd.attach(app);
    bench_cmd.attach(app);
    synth_cmd.attach(app);
    fetch_cmd.attach(app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kInputError;
    }

    try {
        if (run_cmd.selected) return run_cmd.execute(out, err);
        if (fit_cmd.selected) return fit_cmd.execute(out, err);
        if (hotspots_cmd.selected) return hotspots_cmd.execute(out, err);
        if (histogram_cmd.selected) return histogram_cmd.execute(out, err);
        if (trip_cmd.selected) return trip_cmd.execute(out, err);
        if (bench_cmd.selected) return bench_cmd.execute(out, err);
        if (synth_cmd.selected) return synth_cmd.execute(out, err);
        if (fetch_cmd.selected) return fetch_cmd.execute(out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return e.is_input_error() ? kInputError : kInternalError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternalError;
    }
    return kInternalError;
}

}  // namespace vantage::cli
