#include "ppnet/ingest/raster.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <cmath>
#include <limits>
#include <random>

#include <nlohmann/json.hpp>

#include "ppnet/core/image.hpp"
#include "ppnet/core/io.hpp"
#include "ppnet/core/random.hpp"

namespace ppnet {

namespace {

constexpr char kBandMagic[8] = {'P', 'L', 'N', 'T', 'B', 'A', 'N', 'D'};
constexpr int kHalf = kPatchSize / 2;

}  // namespace

NoDataError::NoDataError(const std::string& band, double fraction)
    : InputError("band " + band + " has no-data pixels inside the crop window (fraction " +
                 std::to_string(fraction) + ")"),
      band_(band),
      fraction_(fraction) {}

int RasterSource::width() const {
    for (const auto& [name, grid] : bands)
        if (grid.resolution_m > 0) return grid.cols * grid.resolution_m / 10;
    return 0;
}

int RasterSource::height() const {
    for (const auto& [name, grid] : bands)
        if (grid.resolution_m > 0) return grid.rows * grid.resolution_m / 10;
    return 0;
}

void RasterSource::validate() const {
    if (bands.empty()) throw InputError("raster " + raster_id + " has no bands");
    const int w = width(), h = height();
    for (const auto& [name, grid] : bands) {
        if (grid.resolution_m != 10 && grid.resolution_m != 20 && grid.resolution_m != 60)
            throw InputError("band " + name + " has unsupported resolution " + std::to_string(grid.resolution_m));
        if (grid.values.size() != static_cast<std::size_t>(grid.rows) * grid.cols)
            throw InputError("band " + name + " data size does not match its dimensions");
        if (grid.cols * grid.resolution_m / 10 != w || grid.rows * grid.resolution_m / 10 != h)
            throw InputError("band " + name + " extent differs from the other bands of raster " + raster_id);
    }
    if (!(cloud_cover >= 0.0 && cloud_cover <= 1.0)) throw InputError("cloud_cover outside [0, 1]");
}

float dn_to_reflectance(std::uint16_t dn) {
    if (dn == 0) return std::numeric_limits<float>::quiet_NaN();
    return static_cast<float>(dn) / 10000.0f;
}

std::uint16_t reflectance_to_dn(float reflectance) {
    if (!std::isfinite(reflectance)) return 0;
    const double dn = std::round(static_cast<double>(reflectance) * 10000.0);
    return static_cast<std::uint16_t>(std::clamp(dn, 1.0, 65535.0));
}

std::vector<const BandGrid*> select_bands(const RasterSource& raster) {
    std::vector<const BandGrid*> out;
    out.reserve(kPatchBands.size());
    for (std::string_view name : kPatchBands) {
        auto it = raster.bands.find(name);
        if (it == raster.bands.end())
            throw InputError("raster " + raster.raster_id + " is missing required band " + std::string(name));
        out.push_back(&it->second);
    }
    return out;
}

BandGrid upsample_band(const BandGrid& grid, int target_res) {
    if (grid.rows <= 0 || grid.cols <= 0) throw InputError("upsample_band: empty grid");
    if (target_res != 10) throw InputError("upsample_band: target resolution must be 10 m");
    if (grid.resolution_m == target_res) return grid;
    if (grid.resolution_m != 20)
        throw InputError("upsample_band: unsupported native resolution " + std::to_string(grid.resolution_m) + " m");
    const int factor = grid.resolution_m / target_res;
    BandGrid out;
    out.rows = grid.rows * factor;
    out.cols = grid.cols * factor;
    out.resolution_m = target_res;
    out.values = resize_bilinear(grid.values, grid.rows, grid.cols, out.rows, out.cols);
    return out;
}

CropWindow locate_window(const GeoTransform& geotransform, int width, int height, MapPoint center) {
    const PixelPoint p = geotransform.to_pixel(center);
    if (!(p.col >= 0.0 && p.col < width && p.row >= 0.0 && p.row < height))
        throw OutOfBoundsError("center lies outside the raster (pixel " + std::to_string(p.col) + ", " +
                               std::to_string(p.row) + ")");
    const CropWindow w{static_cast<int>(std::floor(p.row - kHalf + 0.5)),
                       static_cast<int>(std::floor(p.col - kHalf + 0.5))};
    if (w.row0 < 0 || w.col0 < 0 || w.row0 + kPatchSize > height || w.col0 + kPatchSize > width)
        throw OutOfBoundsError("1 km crop window at offset (" + std::to_string(w.col0) + ", " +
                               std::to_string(w.row0) + ") exceeds the raster bounds");
    return w;
}

Patch crop_window(const RasterSource& raster, CropWindow window) {
    const auto grids = select_bands(raster);
    const int width = raster.width(), height = raster.height();
    if (window.row0 < 0 || window.col0 < 0 || window.row0 + kPatchSize > height ||
        window.col0 + kPatchSize > width)
        throw OutOfBoundsError("crop window exceeds the raster bounds");

    Patch patch;
    patch.pixels = Tensor<float>({kPatchChannels, kPatchSize, kPatchSize});
    for (int b = 0; b < kPatchChannels; ++b) {
        const BandGrid& g = *grids[b];
        float* dst = patch.pixels.data() + static_cast<std::size_t>(b) * kPatchSize * kPatchSize;
        if (g.resolution_m == 10) {
            for (int r = 0; r < kPatchSize; ++r)
                for (int c = 0; c < kPatchSize; ++c)
                    dst[r * kPatchSize + c] = g.at(window.row0 + r, window.col0 + c);
        } else if (g.resolution_m == 20) {
            const auto v = upsample_window(g.values, g.rows, g.cols, 2, window.row0, window.col0, kPatchSize,
                                           kPatchSize);
            std::copy(v.begin(), v.end(), dst);
        } else {
            throw InputError("band " + std::string(kPatchBands[b]) + " has unsupported resolution");
        }
        const auto bad = std::count_if(dst, dst + kPatchSize * kPatchSize, [](float v) { return !std::isfinite(v); });
        if (bad > 0)
            throw NoDataError(std::string(kPatchBands[b]), static_cast<double>(bad) / (kPatchSize * kPatchSize));
    }

    const UtmProjection proj(raster.crs);
    const MapPoint m = raster.geotransform.to_map({static_cast<double>(window.col0 + kHalf),
                                                   static_cast<double>(window.row0 + kHalf)});
    patch.center = proj.inverse(m);
    patch.raster_id = raster.raster_id;
    patch.acquisition_date = raster.acquisition_date;
    patch.pixel_size = kPixelSize;
    return patch;
}

Patch crop_patch(const RasterSource& raster, LatLon center) {
    const UtmProjection proj(raster.crs);
    const CropWindow w = locate_window(raster.geotransform, raster.width(), raster.height(), proj.forward(center));
    return crop_window(raster, w);
}

std::vector<Patch> sample_background(const RasterSource& raster, int n, std::span<const LatLon> exclusions,
                                     std::uint64_t seed, const BackgroundOptions& options) {
    const int width = raster.width(), height = raster.height();
    if (width < kPatchSize || height < kPatchSize)
        throw InputError("raster " + raster.raster_id + " is smaller than one 1 km window");
    const UtmProjection proj(raster.crs);
    Rng rng(seed);
    std::uniform_int_distribution<int> row_dist(0, height - kPatchSize);
    std::uniform_int_distribution<int> col_dist(0, width - kPatchSize);

    std::vector<Patch> out;
    int attempts = 0;
    while (static_cast<int>(out.size()) < n) {
        if (attempts >= options.max_attempts)
            throw InputError("could not place " + std::to_string(n) + " background windows on raster " +
                             raster.raster_id + " after " + std::to_string(attempts) + " attempts");
        ++attempts;
        const CropWindow w{row_dist(rng), col_dist(rng)};
        const LatLon c = proj.inverse(
            raster.geotransform.to_map({static_cast<double>(w.col0 + kHalf), static_cast<double>(w.row0 + kHalf)}));
        const bool excluded = std::any_of(exclusions.begin(), exclusions.end(), [&](const LatLon& e) {
            return haversine_m(c, e) < options.exclusion_radius_m;
        });
        if (excluded) continue;
        try {
            Patch p = crop_window(raster, w);
            p.site_id = std::string(kBackgroundSiteId);
            p.label = kBackgroundLabel;
            out.push_back(std::move(p));
        } catch (const NoDataError&) {
            continue;
        }
    }
    return out;
}

void write_band_file(const std::filesystem::path& path, const BandGrid& grid) {
    std::string bytes(kBandMagic, sizeof(kBandMagic));
    io::append_le<std::uint32_t>(bytes, static_cast<std::uint32_t>(grid.rows));
    io::append_le<std::uint32_t>(bytes, static_cast<std::uint32_t>(grid.cols));
    bytes.reserve(bytes.size() + grid.values.size() * 2);
    for (float v : grid.values) io::append_le<std::uint16_t>(bytes, reflectance_to_dn(v));
    io::write_file_atomic(path, bytes);
}

std::pair<int, int> read_band_dims(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    char header[16];
    if (!in.read(header, sizeof(header)) || std::memcmp(header, kBandMagic, sizeof(kBandMagic)) != 0)
        throw InputError("not a band file: " + path.string());
    const std::string_view h(header, sizeof(header));
    return {static_cast<int>(io::read_le<std::uint32_t>(h, 8)), static_cast<int>(io::read_le<std::uint32_t>(h, 12))};
}

BandGrid parse_band_bytes(std::string_view bytes, int resolution_m, const std::string& what) {
    if (bytes.size() < 16 || std::memcmp(bytes.data(), kBandMagic, sizeof(kBandMagic)) != 0)
        throw InputError("not a band file: " + what);
    BandGrid g;
    g.rows = static_cast<int>(io::read_le<std::uint32_t>(bytes, 8));
    g.cols = static_cast<int>(io::read_le<std::uint32_t>(bytes, 12));
    g.resolution_m = resolution_m;
    const std::size_t count = static_cast<std::size_t>(g.rows) * g.cols;
    if (bytes.size() != 16 + count * 2) throw InputError("truncated band file: " + what);
    g.values.resize(count);
    for (std::size_t i = 0; i < count; ++i) g.values[i] = dn_to_reflectance(io::read_le<std::uint16_t>(bytes, 16 + 2 * i));
    return g;
}

BandGrid read_band_file(const std::filesystem::path& path, int resolution_m) {
    return parse_band_bytes(io::read_file(path), resolution_m, path.string());
}

void write_raster_dir(const std::filesystem::path& dir, const RasterSource& raster) {
    raster.validate();
    std::filesystem::create_directories(dir);
    nlohmann::json meta;
    meta["raster_id"] = raster.raster_id;
    meta["acquisition_date"] = format_date(raster.acquisition_date);
    meta["cloud_cover"] = raster.cloud_cover;
    meta["crs"] = raster.crs;
    meta["geotransform"] = raster.geotransform.coefficients();
    nlohmann::json band_map = nlohmann::json::object();
    for (const auto& [name, grid] : raster.bands) {
        const std::string file = name + ".band";
        write_band_file(dir / file, grid);
        band_map[name] = file;
    }
    meta["bands"] = band_map;
    io::write_json(dir / "metadata.json", meta);
}

RasterSource raster_from_metadata(const nlohmann::json& meta, const std::string& fallback_id,
                                  const std::function<std::string(const std::string&)>& fetch_band) {
    RasterSource r;
    try {
        r.raster_id = meta.value("raster_id", fallback_id);
        r.acquisition_date = parse_date(meta.at("acquisition_date").get<std::string>());
        r.cloud_cover = meta.at("cloud_cover").get<double>();
        r.crs = meta.at("crs").get<std::string>();
        r.geotransform = GeoTransform(meta.at("geotransform").get<std::array<double, 6>>());
        for (const auto& [name, file] : meta.at("bands").items()) {
            const std::string f = file.get<std::string>();
            r.bands[name] = parse_band_bytes(fetch_band(f), native_resolution(name), f);
        }
    } catch (const nlohmann::json::exception& e) {
        throw InputError("invalid raster metadata for " + fallback_id + ": " + e.what());
    }
    r.validate();
    return r;
}

RasterSource read_raster_dir(const std::filesystem::path& dir) {
    const nlohmann::json meta = io::read_json(dir / "metadata.json");
    return raster_from_metadata(meta, dir.filename().string(),
                                [&](const std::string& file) { return io::read_file(dir / file); });
}

}  // namespace ppnet
