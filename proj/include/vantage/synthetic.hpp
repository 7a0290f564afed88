// Deterministic desk-scale trajectories and building footprints on a
// synthetic street grid.
#pragma once

#include "vantage/ingestion.hpp"

#include <cstdint>
#include <string>

namespace vantage::synth {

struct SynthConfig {
    std::uint64_t seed = 42;
    ingest::BoundingBox bbox = ingest::kWaterlooBBox;
    std::size_t n_trips = 40;
    std::size_t n_buildings = 400;
    double trip_duration_s = 600.0;
    double speed_min_mps = 5.0;
    double speed_max_mps = 14.0;
    double block_m = 100.0;        // street spacing
    std::size_t arterial_every = 4;  // every k-th street is an arterial

    /// Throws Error(InvalidArgument) for non-positive counts or speeds.
    void validate() const;
};

struct SynthOutput {
    std::string trajectories_csv;
    std::string buildings_geojson;
};

/// Identical configs give byte-identical outputs. Throws
/// Error(PlacementFailure) when a building cannot be placed within 100
/// attempts or the bbox cannot hold a street grid.
SynthOutput generate(const SynthConfig& config);

}  // namespace vantage::synth
