#include "ppnet/ingest/provider.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "ppnet/core/io.hpp"

namespace ppnet {

namespace fs = std::filesystem;

LocalDirectoryProvider::LocalDirectoryProvider(fs::path root) : root_(std::move(root)) {
    if (!fs::is_directory(root_)) throw ProviderError("raster directory not found: " + root_.string());
    std::vector<fs::path> dirs;
    for (const auto& e : fs::directory_iterator(root_))
        if (e.is_directory() && fs::exists(e.path() / "metadata.json")) dirs.push_back(e.path());
    std::sort(dirs.begin(), dirs.end());
    for (const auto& dir : dirs) {
        const auto meta = io::read_json(dir / "metadata.json");
        Entry e;
        try {
            e.candidate.raster_id = meta.value("raster_id", dir.filename().string());
            e.candidate.acquisition_date = parse_date(meta.at("acquisition_date").get<std::string>());
            e.candidate.cloud_cover = meta.at("cloud_cover").get<double>();
            e.candidate.location = dir.string();
            e.crs = meta.at("crs").get<std::string>();
            e.geotransform = GeoTransform(meta.at("geotransform").get<std::array<double, 6>>());
            // Footprint from any band header, scaled to the 10 m grid.
            const auto& bands = meta.at("bands");
            if (bands.empty()) throw InputError("no bands listed");
            const auto first = bands.begin();
            const auto [rows, cols] = read_band_dims(dir / first.value().get<std::string>());
            const int res = native_resolution(first.key());
            e.width = cols * res / 10;
            e.height = rows * res / 10;
        } catch (const nlohmann::json::exception& ex) {
            throw InputError("invalid raster metadata in " + dir.string() + ": " + ex.what());
        }
        entries_.push_back(std::move(e));
    }
}

std::vector<RasterCandidate> LocalDirectoryProvider::query(LatLon site, Date from, Date to) const {
    std::vector<RasterCandidate> out;
    const long lo = day_number(from), hi = day_number(to);
    for (const auto& e : entries_) {
        const long d = day_number(e.candidate.acquisition_date);
        if (d < lo || d > hi) continue;
        const PixelPoint p = e.geotransform.to_pixel(UtmProjection(e.crs).forward(site));
        if (p.col >= 0 && p.col < e.width && p.row >= 0 && p.row < e.height) out.push_back(e.candidate);
    }
    return out;
}

RasterSource LocalDirectoryProvider::load(const RasterCandidate& candidate) const {
    return read_raster_dir(candidate.location);
}

HttpCatalogProvider::HttpCatalogProvider(std::string endpoint, int timeout_seconds)
    : endpoint_(std::move(endpoint)), timeout_seconds_(timeout_seconds) {
    while (!endpoint_.empty() && endpoint_.back() == '/') endpoint_.pop_back();
}

std::string HttpCatalogProvider::get(const std::string& path) const {
    httplib::Client client(endpoint_);
    client.set_connection_timeout(timeout_seconds_, 0);
    client.set_read_timeout(timeout_seconds_, 0);
    auto res = client.Get(path);
    if (!res) throw ProviderError("raster provider unreachable at " + endpoint_ + ": " + httplib::to_string(res.error()));
    if (res->status != 200)
        throw ProviderError("raster provider returned HTTP " + std::to_string(res->status) + " for " + path);
    return res->body;
}

std::vector<RasterCandidate> HttpCatalogProvider::query(LatLon site, Date from, Date to) const {
    char path[256];
    std::snprintf(path, sizeof(path), "/search?lat=%.8f&lon=%.8f&start=%s&end=%s", site.lat, site.lon,
                  format_date(from).c_str(), format_date(to).c_str());
    std::vector<RasterCandidate> out;
    try {
        const auto doc = nlohmann::json::parse(get(path));
        for (const auto& r : doc.at("rasters")) {
            RasterCandidate c;
            c.raster_id = r.at("raster_id").get<std::string>();
            c.acquisition_date = parse_date(r.at("acquisition_date").get<std::string>());
            c.cloud_cover = r.at("cloud_cover").get<double>();
            c.location = "/rasters/" + httplib::detail::encode_url(c.raster_id);
            out.push_back(std::move(c));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ProviderError(std::string("malformed search response: ") + e.what());
    }
    return out;
}

RasterSource HttpCatalogProvider::load(const RasterCandidate& candidate) const {
    nlohmann::json meta;
    try {
        meta = nlohmann::json::parse(get(candidate.location + "/metadata.json"));
    } catch (const nlohmann::json::exception& e) {
        throw ProviderError(std::string("malformed raster metadata: ") + e.what());
    }
    return raster_from_metadata(meta, candidate.raster_id,
                                [&](const std::string& file) { return get(candidate.location + "/" + file); });
}

std::vector<RasterCandidate> select_spread_dates(std::vector<RasterCandidate> candidates, int n) {
    auto earlier = [](const RasterCandidate& a, const RasterCandidate& b) {
        const long da = day_number(a.acquisition_date), db = day_number(b.acquisition_date);
        return da != db ? da < db : a.raster_id < b.raster_id;
    };
    std::sort(candidates.begin(), candidates.end(), earlier);
    std::vector<RasterCandidate> chosen;
    if (n <= 0 || candidates.empty()) return chosen;
    std::vector<bool> used(candidates.size(), false);
    chosen.push_back(candidates.front());
    used[0] = true;
    while (static_cast<int>(chosen.size()) < n && chosen.size() < candidates.size()) {
        long best_gap = -1;
        std::size_t best = 0;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            if (used[i]) continue;
            const long d = day_number(candidates[i].acquisition_date);
            long gap = std::numeric_limits<long>::max();
            for (const auto& c : chosen) gap = std::min(gap, std::labs(d - day_number(c.acquisition_date)));
            if (gap > best_gap) {  // strict: keeps the earlier candidate on ties
                best_gap = gap;
                best = i;
            }
        }
        used[best] = true;
        chosen.push_back(candidates[best]);
    }
    std::sort(chosen.begin(), chosen.end(), earlier);
    return chosen;
}

FetchResult fetch_rasters(const SiteRecord& site, int year, double max_cloud, int n, const RasterProvider& provider) {
    using namespace std::chrono;
    const Date from{std::chrono::year{year}, January, 1d};
    const Date to{std::chrono::year{year}, December, 31d};
    auto candidates = provider.query(site.location, from, to);
    std::erase_if(candidates, [&](const RasterCandidate& c) { return c.cloud_cover > max_cloud; });
    FetchResult result;
    result.requested = n;
    result.available = static_cast<int>(candidates.size());
    for (const auto& c : select_spread_dates(std::move(candidates), n)) result.rasters.push_back(provider.load(c));
    result.shortfall = static_cast<int>(result.rasters.size()) < n;
    return result;
}

}  // namespace ppnet
