#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ppnet/core/date.hpp"
#include "ppnet/ingest/raster.hpp"
#include "ppnet/ingest/types.hpp"

namespace ppnet {

struct RasterCandidate {
    std::string raster_id;
    Date acquisition_date{};
    double cloud_cover = 0.0;
    std::string location;  // provider-specific handle (directory or URL path)
};

/// Source of multispectral scenes. Implementations must be safe for
/// concurrent const calls.
class RasterProvider {
public:
    virtual ~RasterProvider() = default;
    /// Scenes whose footprint contains `site`, acquired within [from, to].
    virtual std::vector<RasterCandidate> query(LatLon site, Date from, Date to) const = 0;
    virtual RasterSource load(const RasterCandidate& candidate) const = 0;
};

/// Scans `root` for raster directories (each holding metadata.json plus band
/// files). The scan happens once, at construction.
class LocalDirectoryProvider final : public RasterProvider {
public:
    explicit LocalDirectoryProvider(std::filesystem::path root);
    std::vector<RasterCandidate> query(LatLon site, Date from, Date to) const override;
    RasterSource load(const RasterCandidate& candidate) const override;
    std::size_t size() const { return entries_.size(); }

private:
    struct Entry {
        RasterCandidate candidate;
        std::string crs;
        GeoTransform geotransform;
        int width = 0;
        int height = 0;
    };
    std::filesystem::path root_;
    std::vector<Entry> entries_;
};

/// Client for an HTTP catalogue service:
///   GET /search?lat=..&lon=..&start=YYYY-MM-DD&end=YYYY-MM-DD
///       -> {"rasters": [{"raster_id", "acquisition_date", "cloud_cover"}, ...]}
///   GET /rasters/<raster_id>/metadata.json
///   GET /rasters/<raster_id>/<band file>
/// Network failures surface as ProviderError.
class HttpCatalogProvider final : public RasterProvider {
public:
    /// `endpoint` like "http://host:port".
    explicit HttpCatalogProvider(std::string endpoint, int timeout_seconds = 30);
    std::vector<RasterCandidate> query(LatLon site, Date from, Date to) const override;
    RasterSource load(const RasterCandidate& candidate) const override;

private:
    std::string get(const std::string& path) const;
    std::string endpoint_;
    int timeout_seconds_;
};

struct FetchResult {
    std::vector<RasterSource> rasters;
    int requested = 0;
    int available = 0;  // candidates passing the cloud filter
    bool shortfall = false;
};

/// Greedy maximal date spacing: start from the earliest candidate, then
/// repeatedly add the candidate whose minimum distance (days) to the chosen
/// set is largest (ties: earlier date, then raster id). Result sorted by date.
std::vector<RasterCandidate> select_spread_dates(std::vector<RasterCandidate> candidates, int n);

/// Up to `n` scenes of `year` over the site with cloud_cover <= max_cloud.
FetchResult fetch_rasters(const SiteRecord& site, int year, double max_cloud, int n, const RasterProvider& provider);

}  // namespace ppnet
