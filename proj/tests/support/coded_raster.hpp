#pragma once

#include <string>

#include "ppnet/ingest/raster.hpp"

namespace ppnet::testing {

// A raster in zone 32N whose 10 m bands hold (row * 1000 + col) / 1e7 so a
// crop reveals its own offset, with 20 m bands at constant reflectance.
inline RasterSource coded_raster(int size = 300, double x0 = 500000.0, double y0 = 5320000.0) {
    RasterSource r;
    r.raster_id = "R1";
    r.acquisition_date = parse_date("2020-06-01");
    r.crs = "EPSG:32632";
    r.geotransform = GeoTransform({x0, 10.0, 0.0, y0, 0.0, -10.0});
    for (auto band : kPatchBands) {
        const int res = native_resolution(band);
        BandGrid g;
        g.resolution_m = res;
        g.rows = g.cols = size * 10 / res;
        g.values.assign(static_cast<std::size_t>(g.rows) * g.cols, 0.2f);
        if (res == 10)
            for (int i = 0; i < g.rows; ++i)
                for (int j = 0; j < g.cols; ++j)
                    g.values[static_cast<std::size_t>(i) * g.cols + j] = static_cast<float>((i * 1000 + j) / 1e7);
        r.bands.emplace(std::string(band), std::move(g));
    }
    return r;
}

}  // namespace ppnet::testing
