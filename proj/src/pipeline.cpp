#include "vantage/pipeline.hpp"

#include "vantage/error.hpp"
#include "vantage/trajectory.hpp"

#include <atomic>
#include <chrono>
#include <thread>

namespace vantage::pipeline {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

RunResult run(const std::vector<ingest::Trip>& trips,
              const std::vector<ingest::BuildingFootprint>& footprints, const RunParams& params) {
    params.view.validate();
    RunResult result{vis::AggregateVisibility(params.precision), {}, {}, {}, {}, {}};
    auto& tallies = result.tallies;
    tallies.trips_loaded = trips.size();
    tallies.footprints_loaded = footprints.size();

    const auto kept_trips = params.bbox ? ingest::filter_bbox(trips, *params.bbox) : trips;
    const auto kept_fps = params.bbox ? ingest::filter_bbox(footprints, *params.bbox) : footprints;
    tallies.trips_after_bbox = kept_trips.size();
    tallies.footprints_after_bbox = kept_fps.size();

    std::vector<traj::TripTrack> tracks;
    tracks.reserve(kept_trips.size());
    for (const auto& trip : kept_trips) {
        try {
            tracks.push_back(traj::assign_bearings(
                traj::interpolate_trip(trip.trip_id, trip.fixes, params.view.interval_s)));
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::TooShort) throw;
            ++tallies.trips_too_short;
        }
    }
    tallies.trips_processed = tracks.size();

    if (tracks.empty()) {
        result.warnings.push_back("no usable trips after filtering; aggregate is empty");
        return result;
    }

    auto start = Clock::now();
    dense::DensifyStats dstats;
    try {
        result.corpus = dense::build_corpus(kept_fps, params.spacing_m, &dstats);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::EmptyCorpus) throw;
        result.warnings.push_back("no building points after filtering; aggregate is empty");
        return result;
    }
    tallies.degenerate_edges = dstats.degenerate_edges;
    tallies.corpus_points = result.corpus.size();
    result.timings.densify_s = seconds_since(start);

    start = Clock::now();
    const auto tree = index::SpatialIndex::build(result.corpus, params.leaf_size);
    result.timings.index_s = seconds_since(start);

    start = Clock::now();
    result.per_trip.resize(tracks.size());
    const unsigned workers = std::max(1U, std::min<unsigned>(params.workers,
                                                             static_cast<unsigned>(tracks.size())));
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    auto worker = [&](unsigned w) {
        try {
            for (std::size_t i = next++; i < tracks.size(); i = next++) {
                result.per_trip[i] = vis::trip_visibility(tracks[i], tree, result.corpus, params.view);
            }
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    if (workers == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker, w);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    result.timings.visibility_s = seconds_since(start);

    start = Clock::now();
    result.aggregate = vis::aggregate(result.per_trip, result.corpus, params.precision);
    for (const auto& t : result.per_trip) tallies.visibility += t.diagnostics;
    result.timings.aggregate_s = seconds_since(start);
    return result;
}

}  // namespace vantage::pipeline
