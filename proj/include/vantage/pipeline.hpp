// End-to-end visibility run: filter, resample, densify, index, count, reduce.
#pragma once

#include "vantage/ball_tree.hpp"
#include "vantage/densification.hpp"
#include "vantage/ingestion.hpp"
#include "vantage/visibility.hpp"

#include <optional>
#include <string>
#include <vector>

namespace vantage::pipeline {

struct RunParams {
    vis::ViewParams view;
    double spacing_m = dense::kDefaultSpacingM;
    int precision = vis::kDefaultKeyPrecision;
    std::size_t leaf_size = index::kDefaultLeafSize;
    std::optional<ingest::BoundingBox> bbox;
    unsigned workers = 1;
};

struct RunTallies {
    std::size_t trips_loaded = 0;
    std::size_t trips_after_bbox = 0;
    std::size_t trips_too_short = 0;
    std::size_t trips_processed = 0;
    std::size_t footprints_loaded = 0;
    std::size_t footprints_after_bbox = 0;
    std::size_t corpus_points = 0;
    std::size_t degenerate_edges = 0;
    vis::Diagnostics visibility;
};

struct RunTimings {
    double densify_s = 0.0;
    double index_s = 0.0;
    double visibility_s = 0.0;
    double aggregate_s = 0.0;
};

struct RunResult {
    vis::AggregateVisibility aggregate;
    std::vector<vis::TripVisibility> per_trip;  // input trip order
    dense::PointCorpus corpus;
    RunTallies tallies;
    RunTimings timings;
    std::vector<std::string> warnings;
};

/// Runs the full pipeline in memory. Per-trip work is spread over
/// params.workers threads; the reduction always follows input trip order, so
/// the aggregate does not depend on the worker count. An empty trip or
/// footprint set after filtering yields an empty aggregate and a warning.
RunResult run(const std::vector<ingest::Trip>& trips,
              const std::vector<ingest::BuildingFootprint>& footprints, const RunParams& params);

}  // namespace vantage::pipeline
