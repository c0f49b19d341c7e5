#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "ppnet/core/random.hpp"
#include "ppnet/core/tensor.hpp"
#include "ppnet/dataset/label_map.hpp"
#include "ppnet/ingest/raster.hpp"
#include "ppnet/ingest/types.hpp"

namespace ppnet {

/// Knobs of the synthetic scene generator.
///
/// Scenes are a vegetation/soil mixture driven by smooth random fields, with
/// per-pixel sensor noise. Each class adds a motif drawn in class-specific
/// materials (10-band reflectance spectra):
///
///   plant task
///     BrownCoal           lignite stockpile + two cooling-tower rings
///     Gas                 white storage tanks + turbine hall
///     HardCoal            black coal stockpile + boiler house
///     Oil                 grid of six to nine oil tanks
///     HydroPumpedStorage  round upper reservoir, dam and penstock line
///     HydroRunOfRiver     turbid river band crossed by a weir
///     HydroReservoir      large clear-water body behind a straight dam
///     Nuclear             large tower rings + containment domes
///     Solar               striped panel field on gravel
///     WindOnshore         scattered turbine pads joined by tracks
///     Background          no motif
///   cooling task (on top of a generic plant building)
///     AirCooling          steel condenser deck with a grid of fans
///     MechanicalDraftTower row of square fan cells
///     NaturalDraftTower   one to three large tower rings
///     OnceThrough         water body along an edge + intake channel
struct SyntheticSceneSpec {
    int size = kPatchSize;
    double noise_amplitude = 0.006;
    int field_cells = 6;           // control points per edge of the smooth fields
    double position_jitter = 12.0; // motif centre offset range, pixels
    double motif_scale = 1.0;
};

struct SyntheticSample {
    Patch patch;
    std::vector<std::uint8_t> motif_mask;  // size x size, 1 inside the motif
};

/// Deterministic in (task, class_index, seed).
SyntheticSample generate_synthetic_with_mask(Task task, int class_index, std::uint64_t seed,
                                             const SyntheticSceneSpec& spec = {});
Patch generate_synthetic(Task task, int class_index, std::uint64_t seed, const SyntheticSceneSpec& spec = {});

/// `per_class` synthetic patches for every class of the task, class-major.
std::vector<Patch> generate_synthetic_set(Task task, int per_class, std::uint64_t seed,
                                          const SyntheticSceneSpec& spec = {});

/// Land-cover background of `rows` x `cols` pixels (10 channels).
Tensor<float> synthetic_land(Rng& rng, int rows, int cols, const SyntheticSceneSpec& spec);
/// Draws the motif of `class_index` centred at (cy, cx). Marks painted pixels
/// in `mask` when given.
void paint_motif(Tensor<float>& scene, Task task, int class_index, double cy, double cx, Rng& rng,
                 const SyntheticSceneSpec& spec, std::vector<std::uint8_t>* mask = nullptr);

// Fixture scenes for exercising ingestion end to end.

struct FixtureSceneOptions {
    int scene_size = 300;      // 10 m pixels per edge (multiple of 6)
    int rasters_per_site = 5;  // clear acquisitions
    int cloudy_per_site = 2;   // extra acquisitions above the default cloud limit
    int year = 2020;
};

/// `sites_per_class` sites per plant class, spaced ~10 km apart in UTM zone
/// 32N; thermal sites cycle through the four cooling classes.
std::vector<SiteRecord> fixture_catalog(int sites_per_class, std::uint64_t seed);

/// A scene roughly centred on the site with the site's motif painted at its
/// location and all 13 bands at native resolution.
RasterSource make_fixture_scene(const SiteRecord& site, const Date& date, const std::string& raster_id,
                                double cloud_cover, std::uint64_t seed, const FixtureSceneOptions& options = {});

/// Writes every site's acquisitions under raster_dir/<raster_id>/.
/// Returns the number of rasters written.
int write_fixture_scenes(const std::filesystem::path& raster_dir, const std::vector<SiteRecord>& sites,
                         std::uint64_t seed, const FixtureSceneOptions& options = {});

}  // namespace ppnet
