#include "ppnet/ingest/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ppnet/core/error.hpp"

namespace ppnet {

GeoTransform::GeoTransform(const std::array<double, 6>& coefficients) : c_(coefficients) {
    const double det = c_[1] * c_[5] - c_[2] * c_[4];
    if (!(std::abs(det) > 0.0) || !std::isfinite(det)) throw InputError("geotransform is not invertible");
}

MapPoint GeoTransform::to_map(PixelPoint p) const {
    return {c_[0] + p.col * c_[1] + p.row * c_[2], c_[3] + p.col * c_[4] + p.row * c_[5]};
}

PixelPoint GeoTransform::to_pixel(MapPoint m) const {
    const double det = c_[1] * c_[5] - c_[2] * c_[4];
    const double dx = m.x - c_[0];
    const double dy = m.y - c_[3];
    return {(c_[5] * dx - c_[2] * dy) / det, (-c_[4] * dx + c_[1] * dy) / det};
}

GeoTransform GeoTransform::scaled(double factor) const {
    return GeoTransform({c_[0], c_[1] * factor, c_[2] * factor, c_[3], c_[4] * factor, c_[5] * factor});
}

// Transverse Mercator via the Krüger series (third order in n), accurate to
// well below a millimetre inside a UTM zone.
namespace {

constexpr double kA = 6378137.0;
constexpr double kF = 1.0 / 298.257223563;
constexpr double kK0 = 0.9996;
constexpr double kFalseEasting = 500000.0;
constexpr double kFalseNorthingSouth = 10000000.0;
constexpr double kDeg = std::numbers::pi / 180.0;

struct Series {
    double n, big_a;
    double alpha[3], beta[3], delta[3];
};

const Series& series() {
    static const Series s = [] {
        Series r{};
        const double n = kF / (2.0 - kF);
        const double n2 = n * n, n3 = n2 * n;
        r.n = n;
        r.big_a = kA / (1.0 + n) * (1.0 + n2 / 4.0 + n2 * n2 / 64.0);
        r.alpha[0] = n / 2.0 - 2.0 * n2 / 3.0 + 5.0 * n3 / 16.0;
        r.alpha[1] = 13.0 * n2 / 48.0 - 3.0 * n3 / 5.0;
        r.alpha[2] = 61.0 * n3 / 240.0;
        r.beta[0] = n / 2.0 - 2.0 * n2 / 3.0 + 37.0 * n3 / 96.0;
        r.beta[1] = n2 / 48.0 + n3 / 15.0;
        r.beta[2] = 17.0 * n3 / 480.0;
        r.delta[0] = 2.0 * n - 2.0 * n2 / 3.0 - 2.0 * n3;
        r.delta[1] = 7.0 * n2 / 3.0 - 8.0 * n3 / 5.0;
        r.delta[2] = 56.0 * n3 / 15.0;
        return r;
    }();
    return s;
}

}  // namespace

UtmProjection::UtmProjection(int zone, bool north) : zone_(zone), north_(north) {
    if (zone < 1 || zone > 60) throw InputError("UTM zone out of range: " + std::to_string(zone));
}

UtmProjection::UtmProjection(const std::string& crs) : zone_(0), north_(true) {
    int code = 0;
    if (crs.rfind("EPSG:", 0) == 0) {
        try {
            code = std::stoi(crs.substr(5));
        } catch (...) {
            code = 0;
        }
    }
    if (code > 32600 && code <= 32660) {
        zone_ = code - 32600;
        north_ = true;
    } else if (code > 32700 && code <= 32760) {
        zone_ = code - 32700;
        north_ = false;
    } else {
        throw InputError("unsupported CRS '" + crs + "' (expected a WGS84 UTM code EPSG:326zz or EPSG:327zz)");
    }
}

std::string UtmProjection::crs() const { return "EPSG:" + std::to_string((north_ ? 32600 : 32700) + zone_); }

MapPoint UtmProjection::forward(LatLon p) const {
    const Series& s = series();
    const double phi = p.lat * kDeg;
    const double dlam = (p.lon - (zone_ * 6.0 - 183.0)) * kDeg;
    const double k = 2.0 * std::sqrt(s.n) / (1.0 + s.n);
    const double t = std::sinh(std::atanh(std::sin(phi)) - k * std::atanh(k * std::sin(phi)));
    const double xi_p = std::atan2(t, std::cos(dlam));
    const double eta_p = std::atanh(std::sin(dlam) / std::sqrt(1.0 + t * t));
    double e = eta_p, n = xi_p;
    for (int j = 1; j <= 3; ++j) {
        e += s.alpha[j - 1] * std::cos(2.0 * j * xi_p) * std::sinh(2.0 * j * eta_p);
        n += s.alpha[j - 1] * std::sin(2.0 * j * xi_p) * std::cosh(2.0 * j * eta_p);
    }
    return {kFalseEasting + kK0 * s.big_a * e, (north_ ? 0.0 : kFalseNorthingSouth) + kK0 * s.big_a * n};
}

LatLon UtmProjection::inverse(MapPoint m) const {
    const Series& s = series();
    const double xi = (m.y - (north_ ? 0.0 : kFalseNorthingSouth)) / (kK0 * s.big_a);
    const double eta = (m.x - kFalseEasting) / (kK0 * s.big_a);
    double xi_p = xi, eta_p = eta;
    for (int j = 1; j <= 3; ++j) {
        xi_p -= s.beta[j - 1] * std::sin(2.0 * j * xi) * std::cosh(2.0 * j * eta);
        eta_p -= s.beta[j - 1] * std::cos(2.0 * j * xi) * std::sinh(2.0 * j * eta);
    }
    const double chi = std::asin(std::sin(xi_p) / std::cosh(eta_p));
    double phi = chi;
    for (int j = 1; j <= 3; ++j) phi += s.delta[j - 1] * std::sin(2.0 * j * chi);
    const double lam = std::atan2(std::sinh(eta_p), std::cos(xi_p));
    return {phi / kDeg, (zone_ * 6.0 - 183.0) + lam / kDeg};
}

double haversine_m(LatLon a, LatLon b) {
    constexpr double kR = 6371008.8;
    const double p1 = a.lat * kDeg, p2 = b.lat * kDeg;
    const double dp = p2 - p1, dl = (b.lon - a.lon) * kDeg;
    const double h = std::sin(dp / 2) * std::sin(dp / 2) + std::cos(p1) * std::cos(p2) * std::sin(dl / 2) * std::sin(dl / 2);
    return 2.0 * kR * std::asin(std::min(1.0, std::sqrt(h)));
}

}  // namespace ppnet
