// Radius-query latency: BallTree against the linear scan.
#pragma once

#include "vantage/ball_tree.hpp"
#include "vantage/ingestion.hpp"

#include <cstdint>
#include <string>

namespace vantage::bench {

struct BenchConfig {
    std::size_t points = 100'000;
    std::size_t queries = 10'000;
    double radius_m = 50.0;
    std::size_t leaf_size = index::kDefaultLeafSize;
    std::uint64_t seed = 7;
    ingest::BoundingBox bbox = ingest::kWaterlooBBox;
};

struct LatencySummary {
    double mean_us = 0.0;
    double median_us = 0.0;
    double total_s = 0.0;
};

struct BenchReport {
    BenchConfig config;
    double build_s = 0.0;
    LatencySummary tree;
    LatencySummary brute;
    double speedup = 0.0;  // brute mean / tree mean
    double mean_hit_fraction = 0.0;
    double max_hit_fraction = 0.0;
    std::size_t mismatches = 0;  // queries where the two answers differ
    index::IndexStats index_stats;

    std::string to_json() const;
};

/// Uniformly scatters points and query centers over the bbox and times both
/// query paths on identical inputs.
BenchReport run_benchmark(const BenchConfig& config);

}  // namespace vantage::bench
