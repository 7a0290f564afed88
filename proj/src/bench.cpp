#include "vantage/bench.hpp"

#include "vantage/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <random>

namespace vantage::bench {

namespace {

using Clock = std::chrono::steady_clock;

LatencySummary summarize(std::vector<double>& micros) {
    LatencySummary s;
    double sum = 0.0;
    for (double v : micros) sum += v;
    s.total_s = sum * 1e-6;
    s.mean_us = sum / static_cast<double>(micros.size());
    auto mid = micros.begin() + static_cast<std::ptrdiff_t>(micros.size() / 2);
    std::nth_element(micros.begin(), mid, micros.end());
    s.median_us = *mid;
    return s;
}

}  // namespace

BenchReport run_benchmark(const BenchConfig& config) {
    if (config.points == 0 || config.queries == 0) {
        throw Error(ErrorKind::InvalidArgument, "benchmark needs points and queries");
    }
    BenchReport report;
    report.config = config;

    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> lat(config.bbox.min_lat, config.bbox.max_lat);
    std::uniform_real_distribution<double> lon(config.bbox.min_lon, config.bbox.max_lon);
    std::vector<geo::GeoCoord> pts(config.points);
    for (auto& p : pts) p = {lat(rng), lon(rng)};
    std::vector<geo::RadCoord> centers(config.queries);
    for (auto& c : centers) c = geo::to_radians(geo::GeoCoord{lat(rng), lon(rng)});

    auto start = Clock::now();
    const auto tree = index::SpatialIndex::build(pts, config.leaf_size);
    report.build_s = std::chrono::duration<double>(Clock::now() - start).count();
    report.index_stats = tree.stats();

    std::vector<index::SpherePoint> sphere;
    sphere.reserve(pts.size());
    for (const auto& p : pts) sphere.push_back(index::SpherePoint::from(p));

    std::vector<double> tree_us(config.queries), brute_us(config.queries);
    double hit_sum = 0.0;
    for (std::size_t q = 0; q < config.queries; ++q) {
        auto t0 = Clock::now();
        const auto a = tree.query_radius(centers[q], config.radius_m);
        auto t1 = Clock::now();
        const auto b = index::brute_force_radius(sphere, centers[q], config.radius_m);
        auto t2 = Clock::now();
        tree_us[q] = std::chrono::duration<double, std::micro>(t1 - t0).count();
        brute_us[q] = std::chrono::duration<double, std::micro>(t2 - t1).count();
        if (a != b) ++report.mismatches;
        const double frac = static_cast<double>(b.size()) / static_cast<double>(pts.size());
        hit_sum += frac;
        report.max_hit_fraction = std::max(report.max_hit_fraction, frac);
    }
    report.mean_hit_fraction = hit_sum / static_cast<double>(config.queries);
    report.tree = summarize(tree_us);
    report.brute = summarize(brute_us);
    report.speedup = report.tree.mean_us > 0.0 ? report.brute.mean_us / report.tree.mean_us : 0.0;
    return report;
}

std::string BenchReport::to_json() const {
    using nlohmann::json;
    auto lat = [](const LatencySummary& s) {
        return json{{"mean_us", s.mean_us}, {"median_us", s.median_us}, {"total_s", s.total_s}};
    };
    json j = {
        {"config",
         {{"points", config.points},
          {"queries", config.queries},
          {"radius_m", config.radius_m},
          {"leaf_size", config.leaf_size},
          {"seed", config.seed},
          {"bbox", {config.bbox.min_lon, config.bbox.min_lat, config.bbox.max_lon, config.bbox.max_lat}}}},
        {"build_s", build_s},
        {"tree", lat(tree)},
        {"brute_force", lat(brute)},
        {"speedup", speedup},
        {"mean_hit_fraction", mean_hit_fraction},
        {"max_hit_fraction", max_hit_fraction},
        {"mismatches", mismatches},
        {"index", json::parse(index_stats.to_json())},
    };
    return j.dump(2) + "\n";
}

}  // namespace vantage::bench
