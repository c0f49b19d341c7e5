#include <doctest.h>

#include <thread>

#include <httplib.h>

#include "ppnet/core/io.hpp"
#include "ppnet/dataset/synthetic.hpp"
#include "ppnet/ingest/provider.hpp"
#include "support/temp_dir.hpp"

using namespace ppnet;

namespace {

// Serves a fixture raster directory with the search/metadata/band routes.
class FixtureServer {
public:
    FixtureServer(std::filesystem::path root, std::vector<RasterCandidate> index) : root_(std::move(root)) {
        server_.Get("/search", [index](const httplib::Request& req, httplib::Response& res) {
            if (!req.has_param("lat") || !req.has_param("start")) {
                res.status = 400;
                return;
            }
            const long from = day_number(parse_date(req.get_param_value("start")));
            const long to = day_number(parse_date(req.get_param_value("end")));
            nlohmann::json rasters = nlohmann::json::array();
            for (const auto& c : index) {
                const long d = day_number(c.acquisition_date);
                if (d < from || d > to) continue;
                rasters.push_back({{"raster_id", c.raster_id},
                                   {"acquisition_date", format_date(c.acquisition_date)},
                                   {"cloud_cover", c.cloud_cover}});
            }
            res.set_content(nlohmann::json{{"rasters", rasters}}.dump(), "application/json");
        });
        server_.Get(R"(/rasters/([^/]+)/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
            const auto path = root_ / req.matches[1].str() / req.matches[2].str();
            if (!std::filesystem::exists(path)) {
                res.status = 404;
                return;
            }
            res.set_content(io::read_file(path), "application/octet-stream");
        });
        server_.Get("/broken", [](const httplib::Request&, httplib::Response& res) { res.status = 500; });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~FixtureServer() {
        server_.stop();
        thread_.join();
    }
    std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_); }

private:
    std::filesystem::path root_;
    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
};

}  // namespace

TEST_CASE("HTTP provider returns the same rasters as the local provider") {
    testing::TempDir dir;
    const auto sites = fixture_catalog(1, 3);
    FixtureSceneOptions opts;
    opts.scene_size = 204;
    opts.rasters_per_site = 2;
    opts.cloudy_per_site = 1;
    const std::vector<SiteRecord> one{sites[0]};
    write_fixture_scenes(dir / "rasters", one, 3, opts);

    const LocalDirectoryProvider local(dir / "rasters");
    const Date from = parse_date("2020-01-01"), to = parse_date("2020-12-31");
    const auto index = local.query(one[0].location, from, to);
    REQUIRE(index.size() == 3);

    FixtureServer server(dir / "rasters", index);
    const HttpCatalogProvider http(server.endpoint());
    const auto remote = http.query(one[0].location, from, to);
    REQUIRE(remote.size() == index.size());

    const FetchResult a = fetch_rasters(one[0], 2020, 0.1, 5, local);
    const FetchResult b = fetch_rasters(one[0], 2020, 0.1, 5, http);
    REQUIRE(a.rasters.size() == 2);
    REQUIRE(b.rasters.size() == 2);
    for (std::size_t i = 0; i < a.rasters.size(); ++i) {
        CHECK(a.rasters[i].raster_id == b.rasters[i].raster_id);
        CHECK(a.rasters[i].crs == b.rasters[i].crs);
        CHECK(a.rasters[i].bands.at("B04").values == b.rasters[i].bands.at("B04").values);
        CHECK(a.rasters[i].bands.at("B12").values == b.rasters[i].bands.at("B12").values);
    }
}

TEST_CASE("HTTP failures surface as provider errors") {
    testing::TempDir dir;
    FixtureServer server(dir.path(), {});
    const HttpCatalogProvider http(server.endpoint(), 2);
    CHECK(http.query({48.0, 7.0}, parse_date("2020-01-01"), parse_date("2020-12-31")).empty());
    CHECK_THROWS_AS(http.load({"missing", parse_date("2020-01-01"), 0.0, "/rasters/missing"}), ProviderError);

    const HttpCatalogProvider dead("http://127.0.0.1:1", 1);
    CHECK_THROWS_AS(dead.query({48.0, 7.0}, parse_date("2020-01-01"), parse_date("2020-12-31")), ProviderError);
}
