#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ppnet/core/date.hpp"
#include "ppnet/core/error.hpp"
#include "ppnet/ingest/geo.hpp"
#include "ppnet/ingest/types.hpp"

namespace ppnet {

/// One spectral band. Values are surface reflectance; NaN marks no-data.
struct BandGrid {
    int rows = 0;
    int cols = 0;
    int resolution_m = 10;
    std::vector<float> values;

    float at(int r, int c) const { return values[static_cast<std::size_t>(r) * cols + c]; }
};

/// A multispectral scene. The geotransform describes the 10 m grid; coarser
/// bands share its origin with proportionally larger pixels.
struct RasterSource {
    std::string raster_id;
    Date acquisition_date{};
    std::map<std::string, BandGrid, std::less<>> bands;
    GeoTransform geotransform;
    std::string crs;
    double cloud_cover = 0.0;

    /// Extent of the 10 m grid, derived from the bands.
    int width() const;
    int height() const;
    void validate() const;
};

class OutOfBoundsError : public InputError {
public:
    using InputError::InputError;
};

class NoDataError : public InputError {
public:
    NoDataError(const std::string& band, double fraction);
    const std::string& band() const { return band_; }
    double fraction() const { return fraction_; }

private:
    std::string band_;
    double fraction_;
};

/// Integer digital number to reflectance (DN / 10000). DN 0 is no-data.
float dn_to_reflectance(std::uint16_t dn);
std::uint16_t reflectance_to_dn(float reflectance);

/// The ten patch bands in channel order. Throws naming the first missing band.
std::vector<const BandGrid*> select_bands(const RasterSource& raster);

/// Bilinear upsampling of a 10 m or 20 m band to `target_res` (10 m).
BandGrid upsample_band(const BandGrid& grid, int target_res = 10);

struct CropWindow {
    int row0 = 0;
    int col0 = 0;
};

/// 100x100 window on a width x height 10 m grid centred (to the nearest
/// pixel) on `center`.
CropWindow locate_window(const GeoTransform& geotransform, int width, int height, MapPoint center);

Patch crop_window(const RasterSource& raster, CropWindow window);
Patch crop_patch(const RasterSource& raster, LatLon center);

struct BackgroundOptions {
    double exclusion_radius_m = 1000.0;
    int max_attempts = 1000;
};

/// `n` randomly placed patches labelled as background, each centred at least
/// `exclusion_radius_m` from every exclusion point.
std::vector<Patch> sample_background(const RasterSource& raster, int n, std::span<const LatLon> exclusions,
                                     std::uint64_t seed, const BackgroundOptions& options = {});

// On-disk rasters: a directory holding metadata.json plus one band file per
// band ("PLNTBAND", uint32 rows, uint32 cols, little-endian uint16 DNs).
void write_band_file(const std::filesystem::path& path, const BandGrid& grid);
BandGrid parse_band_bytes(std::string_view bytes, int resolution_m, const std::string& what);
BandGrid read_band_file(const std::filesystem::path& path, int resolution_m);
/// Rows and columns from a band file header.
std::pair<int, int> read_band_dims(const std::filesystem::path& path);

void write_raster_dir(const std::filesystem::path& dir, const RasterSource& raster);
RasterSource read_raster_dir(const std::filesystem::path& dir);
/// Builds a raster from its metadata document; `fetch_band` returns the bytes
/// of a band file named in the metadata.
RasterSource raster_from_metadata(const nlohmann::json& meta, const std::string& fallback_id,
                                  const std::function<std::string(const std::string&)>& fetch_band);

}  // namespace ppnet
