#pragma once

#include <array>
#include <string>

#include "ppnet/ingest/types.hpp"

namespace ppnet {

struct MapPoint {
    double x = 0.0;  // easting, metres
    double y = 0.0;  // northing, metres
};

struct PixelPoint {
    double col = 0.0;
    double row = 0.0;
};

/// Affine pixel <-> map transform in GDAL coefficient order:
/// x = c[0] + col * c[1] + row * c[2];  y = c[3] + col * c[4] + row * c[5].
class GeoTransform {
public:
    GeoTransform() = default;
    explicit GeoTransform(const std::array<double, 6>& coefficients);

    const std::array<double, 6>& coefficients() const { return c_; }
    MapPoint to_map(PixelPoint p) const;
    PixelPoint to_pixel(MapPoint m) const;
    /// Transform of a grid whose pixels are `factor` times larger, same origin.
    GeoTransform scaled(double factor) const;

private:
    std::array<double, 6> c_{0, 1, 0, 0, 0, -1};
};

/// UTM zone on the WGS84 ellipsoid, identified by "EPSG:326zz" (north) or
/// "EPSG:327zz" (south).
class UtmProjection {
public:
    explicit UtmProjection(const std::string& crs);
    UtmProjection(int zone, bool north);

    MapPoint forward(LatLon p) const;
    LatLon inverse(MapPoint m) const;
    int zone() const { return zone_; }
    bool north() const { return north_; }
    std::string crs() const;

private:
    int zone_;
    bool north_;
};

/// Great-circle distance on the mean Earth sphere (R = 6371008.8 m).
double haversine_m(LatLon a, LatLon b);

}  // namespace ppnet
