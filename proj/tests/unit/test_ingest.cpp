#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ppnet/core/io.hpp"
#include "ppnet/ingest/catalog.hpp"
#include "ppnet/ingest/geo.hpp"
#include "ppnet/ingest/patch_io.hpp"
#include "ppnet/ingest/provider.hpp"
#include "ppnet/ingest/raster.hpp"
#include "support/coded_raster.hpp"
#include "support/temp_dir.hpp"

using namespace ppnet;

using testing::coded_raster;

TEST_CASE("UTM forward on the central meridian reproduces the scaled meridian arc") {
    // WGS84 meridian arc from the equator to 45 degrees: 4 984 944.378 m;
    // UTM applies the scale factor 0.9996 and a 500 km false easting.
    const UtmProjection p(32, true);
    const MapPoint m = p.forward({45.0, 9.0});
    CHECK(m.x == doctest::Approx(500000.0).epsilon(1e-9));
    CHECK(m.y == doctest::Approx(4984944.378 * 0.9996).epsilon(2e-7));
    const MapPoint eq = p.forward({0.0, 9.0});
    CHECK(std::abs(eq.y) < 1e-6);
    const UtmProjection south(32, false);
    CHECK(south.forward({-0.0001, 9.0}).y == doctest::Approx(10000000.0 - 0.0001 * 110574.4 * 0.9996).epsilon(1e-6));
}

TEST_CASE("UTM inverse undoes forward") {
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> lat(-70.0, 70.0), dlon(-3.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        const int zone = 1 + i % 60;
        const bool north = i % 2 == 0;
        const double lt = north ? std::abs(lat(rng)) : -std::abs(lat(rng));
        const LatLon ll{lt, -183.0 + 6.0 * zone + dlon(rng)};
        const UtmProjection p(zone, north);
        const LatLon back = p.inverse(p.forward(ll));
        CHECK(std::abs(back.lat - ll.lat) < 1e-8);
        CHECK(std::abs(back.lon - ll.lon) < 1e-8);
    }
    CHECK(UtmProjection("EPSG:32733").zone() == 33);
    CHECK_FALSE(UtmProjection("EPSG:32733").north());
    CHECK(UtmProjection(31, true).crs() == "EPSG:32631");
    CHECK_THROWS_AS(UtmProjection("EPSG:4326"), InputError);
}

TEST_CASE("haversine distance on the mean sphere") {
    const double one_degree = 6371008.8 * std::numbers::pi / 180.0;
    CHECK(haversine_m({0.0, 0.0}, {1.0, 0.0}) == doctest::Approx(one_degree).epsilon(1e-12));
    CHECK(haversine_m({0.0, 0.0}, {0.0, 1.0}) == doctest::Approx(one_degree).epsilon(1e-12));
    CHECK(haversine_m({48.0, 7.0}, {48.0, 7.0}) == 0.0);
}

TEST_CASE("geotransform maps pixels and back") {
    const GeoTransform g({1000.0, 10.0, 0.5, 2000.0, -0.25, -10.0});
    const MapPoint m = g.to_map({12.5, 7.25});
    CHECK(m.x == doctest::Approx(1000.0 + 125.0 + 3.625));
    const PixelPoint p = g.to_pixel(m);
    CHECK(p.col == doctest::Approx(12.5));
    CHECK(p.row == doctest::Approx(7.25));
    const GeoTransform s = g.scaled(2.0);
    CHECK(s.coefficients()[1] == 20.0);
    CHECK(s.coefficients()[0] == 1000.0);
}

TEST_CASE("catalog parsing accepts any column order and labels") {
    const auto sites = parse_catalog(
        "plant_class,site_id,longitude,latitude,cooling_class\n"
        "Fossil Hard coal,A,7.1,48.2,NaturalDraftTower\n"
        "Solar,B,7.2,48.3,\n");
    REQUIRE(sites.size() == 2);
    CHECK(sites[0].plant_class == PlantClass::HardCoal);
    CHECK(sites[0].cooling_class == CoolingClass::NaturalDraftTower);
    CHECK(sites[1].location.lat == 48.3);
    CHECK_FALSE(sites[1].cooling_class);
    CHECK(cooling_subset(sites).size() == 1);
}

TEST_CASE("catalog errors report every bad row") {
    try {
        parse_catalog(
            "site_id,latitude,longitude,plant_class,cooling_class\n"
            "A,95,7,Solar,\n"
            "B,48,7,Unobtainium,\n"
            "C,48,7,Solar,OnceThrough\n");
        FAIL("expected CatalogError");
    } catch (const CatalogError& e) {
        REQUIRE(e.issues().size() == 3);
        CHECK(e.issues()[0].row == 1);
        CHECK(e.issues()[1].row == 2);
        CHECK(e.issues()[2].row == 3);
    }
    CHECK_THROWS_AS(parse_catalog("site_id,latitude\nA,1\n"), InputError);
}

TEST_CASE("catalog write and load round-trip") {
    testing::TempDir dir;
    std::vector<SiteRecord> sites{{"X1", {48.5, 7.25}, PlantClass::Nuclear, CoolingClass::OnceThrough},
                                  {"X2", {-12.0, 130.0}, PlantClass::WindOnshore, std::nullopt}};
    write_catalog(dir / "c.csv", sites);
    const auto back = load_catalog(dir / "c.csv");
    REQUIRE(back.size() == 2);
    CHECK(back[0].site_id == "X1");
    CHECK(back[0].cooling_class == CoolingClass::OnceThrough);
    CHECK(back[1].location.lon == 130.0);
}

TEST_CASE("digital numbers convert to reflectance") {
    CHECK(std::isnan(dn_to_reflectance(0)));
    CHECK(dn_to_reflectance(10000) == doctest::Approx(1.0f));
    CHECK(reflectance_to_dn(0.1234f) == 1234);
}

TEST_CASE("crop window lands on the projected centre") {
    const RasterSource r = coded_raster();
    const UtmProjection proj(r.crs);
    // Inside pixel (row 150, col 140), nearest to its top-left corner.
    const LatLon c = proj.inverse({500000.0 + 140.3 * 10.0, 5320000.0 - 150.3 * 10.0});
    const Patch p = crop_patch(r, c);
    // The window is centred on that corner, so the pixel sits at index 50.
    const float corner = p.pixels.at(0, 0, 0);
    CHECK(corner == doctest::Approx((100 * 1000 + 90) / 1e7));
    CHECK(p.pixels.at(0, 50, 50) == doctest::Approx((150 * 1000 + 140) / 1e7));
    CHECK(haversine_m(p.center, c) < 10.0);
    CHECK(p.raster_id == "R1");

    CHECK_THROWS_AS(crop_patch(r, proj.inverse({500000.0 + 20.0, 5320000.0 - 20.0})), OutOfBoundsError);
    CHECK_THROWS_AS(crop_patch(r, {0.0, 0.0}), OutOfBoundsError);
}

TEST_CASE("crop reports no-data bands") {
    RasterSource r = coded_raster();
    auto& g = r.bands.at("B11");
    for (int i = 60; i < 90; ++i)
        for (int j = 60; j < 90; ++j) g.values[static_cast<std::size_t>(i) * g.cols + j] = std::nanf("");
    try {
        crop_window(r, {100, 100});
        FAIL("expected NoDataError");
    } catch (const NoDataError& e) {
        CHECK(e.band() == "B11");
        CHECK(e.fraction() > 0.0);
    }
    r.bands.erase("B8A");
    CHECK_THROWS_WITH_AS(select_bands(r), doctest::Contains("B8A"), InputError);
}

TEST_CASE("background windows respect the exclusion radius") {
    const RasterSource r = coded_raster(400);
    const UtmProjection proj(r.crs);
    const std::vector<LatLon> sites{proj.inverse({502000.0, 5318000.0})};
    const auto a = sample_background(r, 20, sites, 5);
    const auto b = sample_background(r, 20, sites, 5);
    REQUIRE(a.size() == 20);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(haversine_m(a[i].center, sites[0]) >= 1000.0);
        CHECK(a[i].label == kBackgroundLabel);
        CHECK(a[i].site_id == "background");
        CHECK(a[i].pixels == b[i].pixels);
    }
    CHECK_THROWS_AS(sample_background(r, 3, sites, 1, {1e7, 50}), InputError);
}

TEST_CASE("raster directories round-trip through band files") {
    testing::TempDir dir;
    RasterSource r = coded_raster(120);
    for (auto& [name, g] : r.bands)
        for (auto& v : g.values) v = dn_to_reflectance(reflectance_to_dn(v));
    write_raster_dir(dir / "R1", r);
    const RasterSource back = read_raster_dir(dir / "R1");
    CHECK(back.raster_id == "R1");
    CHECK(back.crs == r.crs);
    CHECK(back.width() == 120);
    for (const auto& [name, g] : r.bands) {
        CHECK(back.bands.at(name).rows == g.rows);
        for (std::size_t i = 0; i < g.values.size(); i += 97) CHECK(back.bands.at(name).values[i] == g.values[i]);
    }
    CHECK_THROWS_AS(parse_band_bytes("PLNTBANDxx", 10, "bad"), InputError);
}

TEST_CASE("patch files round-trip and skip identical rewrites") {
    testing::TempDir dir;
    Patch p = crop_window(coded_raster(), {10, 20});
    p.site_id = "S";
    p.label = 3;
    p.cooling_label = 1;
    CHECK(write_patch(dir.path(), "p", p));
    CHECK_FALSE(write_patch(dir.path(), "p", p));
    const Patch q = read_patch(dir / "p.patch");
    CHECK(q.pixels == p.pixels);
    CHECK(q.site_id == "S");
    CHECK(q.label == 3);
    CHECK(q.cooling_label == 1);
    CHECK(format_date(q.acquisition_date) == "2020-06-01");
    io::write_file_atomic(dir / "bad.patch", "NOTAPATCH");
    CHECK_THROWS_AS(read_patch(dir / "bad.patch"), InputError);
}

TEST_CASE("date selection spreads acquisitions across the year") {
    std::vector<RasterCandidate> c;
    for (const char* d : {"2020-01-10", "2020-01-12", "2020-04-01", "2020-07-01", "2020-07-03", "2020-12-20"})
        c.push_back({std::string("R") + d, parse_date(d), 0.0, ""});
    const auto sel = select_spread_dates(c, 3);
    REQUIRE(sel.size() == 3);
    CHECK(format_date(sel[0].acquisition_date) == "2020-01-10");
    CHECK(format_date(sel[1].acquisition_date) == "2020-07-01");
    CHECK(format_date(sel[2].acquisition_date) == "2020-12-20");
    CHECK(select_spread_dates(c, 10).size() == 6);
}

TEST_CASE("local provider filters by cloud cover and reports shortfalls") {
    testing::TempDir dir;
    for (int i = 0; i < 4; ++i) {
        RasterSource r = coded_raster(120);
        r.raster_id = "S" + std::to_string(i);
        r.acquisition_date = parse_date("2020-0" + std::to_string(i + 1) + "-15");
        r.cloud_cover = i == 3 ? 0.5 : 0.05;
        write_raster_dir(dir / r.raster_id, r);
    }
    const LocalDirectoryProvider provider(dir.path());
    CHECK(provider.size() == 4);
    const UtmProjection proj("EPSG:32632");
    const SiteRecord site{"X", proj.inverse({500600.0, 5319400.0}), PlantClass::Gas, std::nullopt};
    const FetchResult f = fetch_rasters(site, 2020, 0.1, 5, provider);
    CHECK(f.rasters.size() == 3);
    CHECK(f.available == 3);
    CHECK(f.shortfall);
    CHECK(fetch_rasters(site, 2021, 0.1, 5, provider).rasters.empty());
}
